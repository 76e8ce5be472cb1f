#include "heavenly/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "json.hpp"

namespace heavenly::io {

using json = nlohmann::ordered_json;

namespace {

json complex_to_json(complex c) { return json::array({c.real(), c.imag()}); }

complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorKind::InvalidArgument, "complex values are [re, im] pairs");
  return complex(j[0].get<double>(), j[1].get<double>());
}

json params_to_json(const families::FamilyParams& params) {
  json out;
  std::visit(
      [&out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, families::HcmaDilatParams>) {
          out["a"] = complex_to_json(p.a);
          out["b"] = complex_to_json(p.b);
          out["mu"] = p.mu;
          out["c"] = p.c;
        } else if constexpr (std::is_same_v<T, families::HcmaTransParams>) {
          out["nu"] = complex_to_json(p.nu);
          json alphas = json::array();
          for (complex a : p.alpha) alphas.push_back(complex_to_json(a));
          out["alpha"] = alphas;
          out["c"] = p.c;
        } else {
          json betas = json::array(), gammas = json::array(), cs = json::array();
          for (complex b : p.beta) betas.push_back(complex_to_json(b));
          for (complex g : p.gamma) gammas.push_back(complex_to_json(g));
          for (complex c : p.c) cs.push_back(complex_to_json(c));
          out["beta"] = betas;
          out["gamma"] = gammas;
          out["c"] = cs;
        }
      },
      params);
  return out;
}

families::FamilyParams params_from_json(families::FamilyId family, const json& j) {
  using families::FamilyId;
  switch (family) {
    case FamilyId::HcmaDilat: {
      families::HcmaDilatParams p;
      p.a = complex_from_json(j.at("a"));
      p.b = complex_from_json(j.at("b"));
      p.mu = j.at("mu").get<std::vector<double>>();
      p.c = j.at("c").get<std::vector<double>>();
      return p;
    }
    case FamilyId::HcmaTrans: {
      families::HcmaTransParams p;
      p.nu = complex_from_json(j.at("nu"));
      for (const json& a : j.at("alpha")) p.alpha.push_back(complex_from_json(a));
      p.c = j.at("c").get<std::vector<double>>();
      return p;
    }
    case FamilyId::HeavenEqual:
    case FamilyId::HeavenZero: {
      families::HeavenParams p;
      for (const json& b : j.at("beta")) p.beta.push_back(complex_from_json(b));
      for (const json& g : j.at("gamma")) p.gamma.push_back(complex_from_json(g));
      for (const json& c : j.at("c")) p.c.push_back(complex_from_json(c));
      return p;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown family");
}

}  // namespace

std::string to_json(const SolutionDocument& doc) {
  json out;
  out["schema_version"] = doc.schema_version;
  out["family"] = families::family_name(doc.family);
  out["frame"] = frame_name(doc.potential.frame);
  out["parameters"] = params_to_json(doc.params);
  json amps = json::array(), exps = json::array();
  for (const ExpTerm& t : doc.potential.terms) {
    amps.push_back(complex_to_json(t.amplitude));
    json row = json::array();
    for (complex e : t.exponents) row.push_back(complex_to_json(e));
    exps.push_back(row);
  }
  out["amplitudes"] = amps;
  out["exponents"] = exps;
  out["provenance"] = doc.provenance;
  return out.dump(2) + "\n";
}

SolutionDocument document_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed document: ") + e.what());
  }
  try {
    SolutionDocument doc;
    doc.schema_version = j.at("schema_version").get<int>();
    if (doc.schema_version != 1)
      throw Error(ErrorKind::InvalidArgument, "unsupported schema version");
    doc.family = families::family_from_name(j.at("family").get<std::string>());
    doc.params = params_from_json(doc.family, j.at("parameters"));
    doc.potential.frame = families::family_frame(doc.family);
    const json& amps = j.at("amplitudes");
    const json& exps = j.at("exponents");
    if (amps.size() != exps.size())
      throw Error(ErrorKind::InvalidArgument, "amplitude/exponent length mismatch");
    for (size_t t = 0; t < amps.size(); ++t) {
      ExpTerm term;
      term.amplitude = complex_from_json(amps[t]);
      if (exps[t].size() != 4)
        throw Error(ErrorKind::InvalidArgument, "exponent rows carry four entries");
      for (int k = 0; k < 4; ++k) term.exponents[k] = complex_from_json(exps[t][k]);
      doc.potential.terms.push_back(term);
    }
    if (j.contains("provenance"))
      doc.provenance = j.at("provenance").get<std::vector<std::string>>();
    return doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed document: ") + e.what());
  }
}

void save_document(const SolutionDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << to_json(doc);
}

SolutionDocument load_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return document_from_json(text);
}

double rederive_mismatch(const SolutionDocument& doc) {
  const ExpSumPotential fresh = families::build_solution(doc.family, doc.params);
  if (fresh.terms.size() != doc.potential.terms.size()) return 1.0;
  double worst = 0;
  for (size_t t = 0; t < fresh.terms.size(); ++t) {
    for (int k = 0; k < 4; ++k) {
      const complex a = fresh.terms[t].exponents[k];
      const complex b = doc.potential.terms[t].exponents[k];
      const double scale = std::max({std::abs(a), std::abs(b), 1.0});
      worst = std::max(worst, std::abs(a - b) / scale);
    }
    const complex ca = fresh.terms[t].amplitude, cb = doc.potential.terms[t].amplitude;
    worst = std::max(worst, std::abs(ca - cb) / std::max({std::abs(ca), std::abs(cb), 1.0}));
  }
  return worst;
}

void RunConfig::validate() const {
  if (tol_residual <= 0 || tol_ricci <= 0 || tol_determinant <= 0 || tol_imag <= 0)
    throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  if (fd_step <= 0) throw Error(ErrorKind::InvalidArgument, "fd step must be positive");
  if (points <= 0) throw Error(ErrorKind::InvalidArgument, "point count must be positive");
  if (!(box > 0) || !std::isfinite(box))
    throw Error(ErrorKind::InvalidArgument, "box bound must be finite and positive");
  if (workers <= 0) throw Error(ErrorKind::InvalidArgument, "workers must be positive");
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed config: ") + e.what());
  }
  RunConfig cfg;
  if (j.contains("tol_residual")) cfg.tol_residual = j["tol_residual"].get<double>();
  if (j.contains("tol_ricci")) cfg.tol_ricci = j["tol_ricci"].get<double>();
  if (j.contains("tol_determinant"))
    cfg.tol_determinant = j["tol_determinant"].get<double>();
  if (j.contains("tol_imag")) cfg.tol_imag = j["tol_imag"].get<double>();
  if (j.contains("fd_step")) cfg.fd_step = j["fd_step"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("points")) cfg.points = j["points"].get<int>();
  if (j.contains("box")) cfg.box = j["box"].get<double>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  cfg.validate();
  return cfg;
}

void apply_env(RunConfig& cfg) {
  if (const char* s = std::getenv("HEAVENLY_SEED"))
    cfg.seed = std::strtoull(s, nullptr, 10);
  if (const char* s = std::getenv("HEAVENLY_TOL_RESIDUAL"))
    cfg.tol_residual = std::strtod(s, nullptr);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace heavenly::io

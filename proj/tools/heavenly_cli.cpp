// Command-line front end: builds solution documents for the four
// exponential families and runs the residual / metric / curvature /
// Killing / symmetry-table suites over them.
//
// Exit codes: 0 all checks pass, 1 checks ran and failed, 2 input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "heavenly/geometry.hpp"
#include "heavenly/io.hpp"
#include "heavenly/pde.hpp"
#include "heavenly/random.hpp"
#include "heavenly/symmetry.hpp"

namespace hv = heavenly;
using hv::complex;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// ---------------------------------------------------------------------------
// flag parsing helpers

complex parse_complex(const std::string& text) {
  // forms: "1", "-2.5", "i", "-i", "2i", "1+2i", "-0.5-0.3i"
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw hv::Error(hv::ErrorKind::InvalidArgument, "empty complex literal");

  auto parse_part = [](std::string part) -> double {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    size_t used = 0;
    const double v = std::stod(part, &used);
    if (used != part.size())
      throw hv::Error(hv::ErrorKind::InvalidArgument, "bad number '" + part + "'");
    return v;
  };

  if (s.back() == 'i' || s.back() == 'I') {
    s.pop_back();
    // split at the last +/- that is not an exponent sign and not leading
    size_t split = std::string::npos;
    for (size_t k = s.size(); k-- > 1;) {
      if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    if (split == std::string::npos) return complex(0, parse_part(s));
    return complex(parse_part(s.substr(0, split)), parse_part(s.substr(split)));
  }
  return complex(parse_part(s), 0);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::vector<complex> parse_complex_list(const std::string& s) {
  std::vector<complex> out;
  for (const std::string& item : split(s, ',')) out.push_back(parse_complex(item));
  return out;
}

std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& item : split(s, ',')) out.push_back(std::stod(item));
  return out;
}

json complex_json(complex c) { return json::array({c.real(), c.imag()}); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw hv::Error(hv::ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
}

void emit_report(const json& report, const std::string& out_path) {
  if (!out_path.empty()) write_text(out_path, report.dump(2) + "\n");
}

template <typename Fn>
void parallel_map(size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const size_t w = std::min<size_t>(workers, n);
  const size_t chunk = (n + w - 1) / w;
  std::vector<std::thread> threads;
  for (size_t t = 0; t < w; ++t) {
    const size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo < hi)
      threads.emplace_back([lo, hi, &fn] {
        for (size_t i = lo; i < hi; ++i) fn(i);
      });
  }
  for (auto& th : threads) th.join();
}

// ---------------------------------------------------------------------------
// sampling

std::vector<hv::Point4> sample_points(hv::FrameId frame, const hv::io::RunConfig& cfg) {
  hv::Rng rng(cfg.seed);
  std::vector<hv::Point4> pts;
  pts.reserve(cfg.points);
  for (int i = 0; i < cfg.points; ++i) {
    if (hv::frame_info(frame).conjugate_paired) {
      const complex q(rng.uniform(-cfg.box, cfg.box), rng.uniform(-cfg.box, cfg.box));
      const complex s(rng.uniform(-cfg.box, cfg.box), rng.uniform(-cfg.box, cfg.box));
      pts.push_back(hv::conjugate_slice(q, s));
    } else {
      pts.push_back({complex(rng.uniform(-cfg.box, cfg.box)),
                     complex(rng.uniform(-cfg.box, cfg.box)),
                     complex(rng.uniform(-cfg.box, cfg.box)),
                     complex(rng.uniform(-cfg.box, cfg.box))});
    }
  }
  return pts;
}

hv::RealPoint4 real_coords(const hv::Point4& p, bool paired) {
  if (paired) return {p[0].real(), p[0].imag(), p[2].real(), p[2].imag()};
  return {p[0].real(), p[1].real(), p[2].real(), p[3].real()};
}

hv::geometry::MetricSample metric_of(const hv::io::SolutionDocument& doc,
                                     const hv::Point4& x) {
  const hv::Jet J = hv::jet(doc.potential, x, 2);
  if (doc.potential.frame == hv::FrameId::HcmaLegendre)
    return hv::geometry::metric_hcma_legendre(J);
  return hv::geometry::metric_heaven_legendre(J);
}

// ---------------------------------------------------------------------------
// subcommand configuration shared by most commands

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  std::optional<double> tol_residual;
  std::optional<double> tol_ricci;
  std::optional<double> fd_step;
  std::optional<int> workers;

  hv::io::RunConfig resolve() const {
    hv::io::RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in)
        throw hv::Error(hv::ErrorKind::InvalidArgument,
                        "cannot read config " + config_path);
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      cfg = hv::io::config_from_json(text);
    }
    hv::io::apply_env(cfg);
    if (seed) cfg.seed = *seed;
    if (points) cfg.points = *points;
    if (tol_residual) cfg.tol_residual = *tol_residual;
    if (tol_ricci) cfg.tol_ricci = *tol_ricci;
    if (fd_step) cfg.fd_step = *fd_step;
    if (workers) cfg.workers = *workers;
    cfg.validate();
    return cfg;
  }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--points", o.points, "sample point count");
  cmd->add_option("--tol-residual", o.tol_residual, "normalized residual tolerance");
  cmd->add_option("--tol-ricci", o.tol_ricci, "Ricci-flatness tolerance");
  cmd->add_option("--fd-step", o.fd_step, "finite-difference step");
  cmd->add_option("--workers", o.workers, "parallel sweep workers");
  cmd->add_option("--out", o.out_path, "report output path");
}

json config_json(const hv::io::RunConfig& cfg) {
  json out;
  out["seed"] = cfg.seed;
  out["points"] = cfg.points;
  out["tol_residual"] = cfg.tol_residual;
  out["tol_ricci"] = cfg.tol_ricci;
  out["tol_determinant"] = cfg.tol_determinant;
  out["fd_step"] = cfg.fd_step;
  out["box"] = cfg.box;
  out["workers"] = cfg.workers;
  return out;
}

// ---------------------------------------------------------------------------
// build

int cmd_build(const std::string& family_name, const std::string& a,
              const std::string& b, const std::string& nu, const std::string& alpha,
              const std::string& beta, const std::string& gamma, const std::string& mu,
              const std::string& c, const std::string& out_path) {
  const hv::families::FamilyId family = hv::families::family_from_name(family_name);
  hv::families::FamilyParams params;
  switch (family) {
    case hv::families::FamilyId::HcmaDilat: {
      hv::families::HcmaDilatParams p;
      p.a = parse_complex(a);
      p.b = b.empty() ? complex(0) : parse_complex(b);
      p.mu = parse_real_list(mu);
      p.c = parse_real_list(c);
      params = p;
      break;
    }
    case hv::families::FamilyId::HcmaTrans: {
      hv::families::HcmaTransParams p;
      p.nu = nu.empty() ? complex(0) : parse_complex(nu);
      p.alpha = parse_complex_list(alpha);
      p.c = parse_real_list(c);
      params = p;
      break;
    }
    default: {
      hv::families::HeavenParams p;
      p.beta = parse_complex_list(beta);
      p.gamma = parse_complex_list(gamma);
      p.c = parse_complex_list(c);
      params = p;
      break;
    }
  }

  hv::io::SolutionDocument doc;
  doc.family = family;
  doc.params = params;
  doc.potential = hv::families::build_solution(family, params);
  doc.provenance = {"built by heavenly build"};

  const auto rep = hv::families::validate(family, params, doc.potential);
  std::cout << "family: " << family_name << "\n"
            << "terms:  " << doc.potential.terms.size() << "\n";
  for (size_t t = 0; t < doc.potential.terms.size(); ++t) {
    const auto& e = doc.potential.terms[t].exponents;
    std::cout << "  term " << t << ": C = " << doc.potential.terms[t].amplitude
              << ", exponents = (" << e[0] << ", " << e[1] << ", " << e[2] << ", "
              << e[3] << ")\n";
  }
  std::cout << "constraint residual max: " << rep.max_residual << "\n";
  if (!out_path.empty()) {
    hv::io::save_document(doc, out_path);
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitPass;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& doc_path, const CommonOpts& opts) {
  const hv::io::RunConfig cfg = opts.resolve();
  const hv::io::SolutionDocument doc = hv::io::load_document(doc_path);

  json report;
  report["command"] = "verify";
  report["document"] = doc_path;
  report["config"] = config_json(cfg);

  bool pass = true;
  const double mismatch = hv::io::rederive_mismatch(doc);
  report["rederive_mismatch"] = mismatch;
  if (mismatch > 1e-12) pass = false;

  const auto constraint = hv::families::validate(doc.family, doc.params, doc.potential);
  report["constraint_residual_max"] = constraint.max_residual;
  report["conjugation_ok"] = constraint.conjugation_ok;
  if (!constraint.valid()) pass = false;

  const auto points = sample_points(doc.potential.frame, cfg);
  const auto suite =
      hv::pde::residual_suite(doc.family, doc.params, doc.potential, points, cfg.workers);
  json rows = json::array();
  for (const auto& row : suite.rows) {
    json r;
    r["equation"] = hv::pde::equation_name(row.eq);
    r["component"] = row.component;
    r["label"] = row.label;
    r["max_normalized"] = row.max_normalized;
    r["mean_normalized"] = row.mean_normalized;
    rows.push_back(r);
  }
  report["residuals"] = rows;
  report["max_normalized_residual"] = suite.max_normalized;
  if (!suite.pass(cfg.tol_residual)) pass = false;
  report["pass"] = pass;

  std::cout << "rederive mismatch:  " << mismatch << "\n"
            << "constraint max:     " << constraint.max_residual << "\n"
            << "residual max (norm): " << suite.max_normalized << " over "
            << points.size() << " points\n"
            << (pass ? "PASS" : "FAIL") << " (tolerance " << cfg.tol_residual << ")\n";
  emit_report(report, opts.out_path);
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// metric

int cmd_metric(const std::string& doc_path, const CommonOpts& opts) {
  const hv::io::RunConfig cfg = opts.resolve();
  const hv::io::SolutionDocument doc = hv::io::load_document(doc_path);
  const bool paired = hv::frame_info(doc.potential.frame).conjugate_paired;
  const auto chart = paired ? hv::geometry::RealChart::conjugate_pairs()
                            : hv::geometry::RealChart::identity();
  const auto points = sample_points(doc.potential.frame, cfg);

  json report;
  report["command"] = "metric";
  report["document"] = doc_path;
  report["config"] = config_json(cfg);
  json samples = json::array();

  int degenerate = 0;
  std::vector<json> rows(points.size());
  parallel_map(points.size(), cfg.workers, [&](size_t i) {
    json r;
    const auto xy = real_coords(points[i], paired);
    r["point"] = {xy[0], xy[1], xy[2], xy[3]};
    try {
      const auto sample = metric_of(doc, points[i]);
      r["leading"] = complex_json(sample.leading);
      r["hessian_det"] = complex_json(sample.hessian_det);
      json comps = json::array();
      for (int a = 0; a < 4; ++a)
        for (int bdx = a; bdx < 4; ++bdx)
          comps.push_back(complex_json(sample.components[a][bdx]));
      r["components_upper"] = comps;
      const auto real = hv::geometry::realify(sample, chart);
      r["eigenvalues"] = {real.signature.eigenvalues[0], real.signature.eigenvalues[1],
                          real.signature.eigenvalues[2], real.signature.eigenvalues[3]};
      r["signature"] = {real.signature.n_plus, real.signature.n_minus};
      r["class"] = hv::geometry::signature_class_name(real.signature.classification);
    } catch (const hv::Error& e) {
      r["skipped"] = e.what();
    }
    rows[i] = std::move(r);
  });
  for (auto& r : rows) {
    if (r.contains("skipped")) ++degenerate;
    samples.push_back(std::move(r));
  }
  report["samples"] = samples;
  report["degenerate_points"] = degenerate;
  report["pass"] = true;

  std::cout << "sampled " << points.size() << " points, " << degenerate
            << " degenerate/skipped\n";
  for (size_t i = 0; i < std::min<size_t>(points.size(), 5); ++i) {
    const json& r = samples[i];
    if (r.contains("skipped"))
      std::cout << "  point " << i << ": skipped (" << r["skipped"] << ")\n";
    else
      std::cout << "  point " << i << ": signature (" << r["signature"][0] << ","
                << r["signature"][1] << ") " << r["class"] << "\n";
  }
  emit_report(report, opts.out_path);
  return kExitPass;
}

// ---------------------------------------------------------------------------
// curvature

int cmd_curvature(const std::string& doc_path, const CommonOpts& opts) {
  hv::io::RunConfig cfg = opts.resolve();
  const hv::io::SolutionDocument doc = hv::io::load_document(doc_path);
  const bool paired = hv::frame_info(doc.potential.frame).conjugate_paired;
  const auto field = paired ? hv::geometry::hcma_metric_field(doc.potential)
                            : hv::geometry::heaven_metric_field(doc.potential);
  // curvature stencils need headroom from the degenerate loci
  cfg.box *= 0.5;
  const auto points = sample_points(doc.potential.frame, cfg);

  json report;
  report["command"] = "curvature";
  report["document"] = doc_path;
  report["config"] = config_json(cfg);
  json samples = json::array();

  bool pass = true;
  int used = 0, skipped = 0;
  std::vector<json> rows(points.size());
  parallel_map(points.size(), cfg.workers, [&](size_t i) {
    json r;
    const auto x = real_coords(points[i], paired);
    r["point"] = {x[0], x[1], x[2], x[3]};
    try {
      const auto sample = metric_of(doc, points[i]);
      if (!hv::geometry::well_conditioned(sample, 3e-2)) {
        r["skipped"] = "ill-conditioned degeneracy quantities";
      } else {
        const auto curv = hv::geometry::curvature(field, x, cfg.fd_step);
        const double err = curv.error_estimate / (1.0 + curv.riemann_norm);
        if (err > cfg.tol_ricci) {
          r["skipped"] = "finite-difference error estimate above tolerance";
        } else {
          r["ricci_norm"] = curv.ricci_norm;
          r["riemann_norm"] = curv.riemann_norm;
          r["error_estimate"] = curv.error_estimate;
          r["ratio"] = curv.ricci_norm / (1.0 + curv.riemann_norm);
        }
      }
    } catch (const hv::Error& e) {
      r["skipped"] = e.what();
    }
    rows[i] = std::move(r);
  });
  for (auto& r : rows) {
    if (r.contains("skipped")) {
      ++skipped;
    } else {
      ++used;
      if (r["ratio"].get<double>() > cfg.tol_ricci) pass = false;
    }
    samples.push_back(std::move(r));
  }
  if (used == 0) pass = false;
  report["samples"] = samples;
  report["points_used"] = used;
  report["points_skipped"] = skipped;
  report["pass"] = pass;

  std::cout << "curvature at " << used << " well-conditioned points (" << skipped
            << " skipped)\n";
  for (const json& r : samples) {
    if (!r.contains("skipped")) {
      std::cout << "  ricci/(1+riemann) = " << r["ratio"] << "  (err est "
                << r["error_estimate"] << ")\n";
      break;
    }
  }
  std::cout << (pass ? "PASS" : "FAIL") << " (tolerance " << cfg.tol_ricci << ")\n";
  emit_report(report, opts.out_path);
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// killing

int cmd_killing(const std::string& doc_path, const CommonOpts& opts) {
  const hv::io::RunConfig cfg = opts.resolve();
  const hv::io::SolutionDocument doc = hv::io::load_document(doc_path);
  const auto rep = hv::symmetry::theorem_applicability(doc.family, doc.potential);

  json report;
  report["command"] = "killing";
  report["document"] = doc_path;
  report["config"] = config_json(cfg);
  report["enough_terms"] = rep.enough_terms;
  report["exponents_nonzero"] = rep.exponents_nonzero;
  report["determinant"] = complex_json(rep.determinant);
  report["determinant_ok"] = rep.determinant_ok;
  report["no_killing_vectors"] = rep.no_killing_vectors;
  report["reason"] = rep.reason;
  report["pass"] = rep.no_killing_vectors;

  std::cout << "no Killing vectors guaranteed: "
            << (rep.no_killing_vectors ? "true" : "false") << "\n"
            << "reason: " << rep.reason << "\n";
  emit_report(report, opts.out_path);
  return rep.no_killing_vectors ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// symmetry-table

hv::symmetry::Poly random_cubic(hv::Rng& rng) {
  using hv::symmetry::Poly;
  Poly p;
  for (int dz = 0; dz <= 3; ++dz)
    for (int dw = 0; dw + dz <= 3; ++dw)
      p = p + Poly::monomial(complex(rng.uniform(-1, 1), 0), {0, 0, dz, dw, 0});
  return p;
}

int cmd_symmetry_table(const CommonOpts& opts) {
  const hv::io::RunConfig cfg = opts.resolve();
  hv::Rng rng(cfg.seed);
  const std::array<hv::symmetry::Poly, 4> row_coeffs = {
      random_cubic(rng), random_cubic(rng), random_cubic(rng), random_cubic(rng)};
  const std::array<hv::symmetry::Poly, 4> col_coeffs = {
      random_cubic(rng), random_cubic(rng), random_cubic(rng), random_cubic(rng)};
  std::vector<hv::symmetry::JetPoint5> points;
  const int npts = std::min(cfg.points, 50);
  for (int i = 0; i < npts; ++i)
    points.push_back({complex(rng.uniform(-1, 1)), complex(rng.uniform(-1, 1)),
                      complex(rng.uniform(-1, 1)), complex(rng.uniform(-1, 1)),
                      complex(rng.uniform(-1, 1))});
  const auto res = hv::symmetry::table_suite(row_coeffs, col_coeffs, points);

  json report;
  report["command"] = "symmetry-table";
  report["config"] = config_json(cfg);
  report["cells_checked"] = res.cells_checked;
  report["cells_failed"] = res.cells_failed;
  report["max_deviation"] = res.max_deviation;
  json fails = json::array();
  for (auto [r, c] : res.failing_cells) fails.push_back({r, c});
  report["failing_cells"] = fails;
  report["pass"] = res.cells_failed == 0;

  std::cout << (res.cells_checked - res.cells_failed) << "/" << res.cells_checked
            << " commutator cells pass, max deviation " << res.max_deviation << "\n";
  emit_report(report, opts.out_path);
  return res.cells_failed == 0 ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// export-grid

int cmd_export_grid(const std::string& doc_path, const std::string& axes_arg,
                    const std::string& range_arg, int resolution,
                    const std::string& fix_arg, const std::string& out_path) {
  const hv::io::SolutionDocument doc = hv::io::load_document(doc_path);
  const bool paired = hv::frame_info(doc.potential.frame).conjugate_paired;

  std::vector<std::string> axis_names;
  if (paired)
    axis_names = {"re_p", "im_p", "re_z2", "im_z2"};
  else {
    const auto& info = hv::frame_info(doc.potential.frame);
    axis_names = {info.slot_names[0], info.slot_names[1], info.slot_names[2],
                  info.slot_names[3]};
  }
  auto axis_index = [&](const std::string& name) {
    for (size_t k = 0; k < 4; ++k)
      if (axis_names[k] == name) return static_cast<int>(k);
    throw hv::Error(hv::ErrorKind::InvalidArgument, "unknown axis '" + name + "'");
  };

  const auto axes = split(axes_arg, ',');
  if (axes.size() != 2)
    throw hv::Error(hv::ErrorKind::InvalidArgument, "--axes takes two names");
  const int ax0 = axis_index(axes[0]), ax1 = axis_index(axes[1]);
  if (ax0 == ax1)
    throw hv::Error(hv::ErrorKind::InvalidArgument, "axes must differ");

  std::array<double, 2> lo{-1, -1}, hi{1, 1};
  if (!range_arg.empty()) {
    const auto ranges = split(range_arg, ',');
    if (ranges.size() != 2)
      throw hv::Error(hv::ErrorKind::InvalidArgument, "--range takes two lo:hi pairs");
    for (int k = 0; k < 2; ++k) {
      const auto parts = split(ranges[k], ':');
      if (parts.size() != 2)
        throw hv::Error(hv::ErrorKind::InvalidArgument, "range is lo:hi");
      lo[k] = std::stod(parts[0]);
      hi[k] = std::stod(parts[1]);
    }
  }

  hv::RealPoint4 base{0, 0, 0, 0};
  if (!fix_arg.empty()) {
    for (const std::string& kv : split(fix_arg, ',')) {
      const auto parts = split(kv, '=');
      if (parts.size() != 2)
        throw hv::Error(hv::ErrorKind::InvalidArgument, "--fix is name=value pairs");
      base[axis_index(parts[0])] = std::stod(parts[1]);
    }
  }

  std::ostringstream csv;
  csv << axis_names[0] << "," << axis_names[1] << "," << axis_names[2] << ","
      << axis_names[3] << ",value_re,value_im,leading_re,leading_im,"
      << "hessian_det_re,hessian_det_im,degenerate";
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) csv << ",g" << a << b << "_re,g" << a << b << "_im";
  csv << "\n";

  using hv::io::format_double;
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      hv::RealPoint4 x = base;
      x[ax0] = resolution == 1 ? lo[0] : lo[0] + (hi[0] - lo[0]) * i / (resolution - 1);
      x[ax1] = resolution == 1 ? lo[1] : lo[1] + (hi[1] - lo[1]) * j / (resolution - 1);
      hv::Point4 q;
      if (paired)
        q = hv::conjugate_slice(complex(x[0], x[1]), complex(x[2], x[3]));
      else
        q = {complex(x[0]), complex(x[1]), complex(x[2]), complex(x[3])};
      const complex value = hv::evaluate(doc.potential, q);
      csv << format_double(x[0]) << "," << format_double(x[1]) << ","
          << format_double(x[2]) << "," << format_double(x[3]) << ","
          << format_double(value.real()) << "," << format_double(value.imag());
      try {
        const auto sample = metric_of(doc, q);
        csv << "," << format_double(sample.leading.real()) << ","
            << format_double(sample.leading.imag()) << ","
            << format_double(sample.hessian_det.real()) << ","
            << format_double(sample.hessian_det.imag()) << ",0";
        for (int a = 0; a < 4; ++a)
          for (int b = a; b < 4; ++b)
            csv << "," << format_double(sample.components[a][b].real()) << ","
                << format_double(sample.components[a][b].imag());
      } catch (const hv::Error&) {
        csv << ",0,0,0,0,1";
        for (int k = 0; k < 20; ++k) csv << ",0";
      }
      csv << "\n";
    }
  }

  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_text(out_path, csv.str());
    std::cout << "wrote " << resolution * resolution << " rows to " << out_path << "\n";
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for exponential heavenly metrics"};
  app.require_subcommand(1);

  // build
  std::string family, a_arg, b_arg, nu_arg, alpha_arg, beta_arg, gamma_arg, mu_arg,
      c_arg, build_out;
  CLI::App* build = app.add_subcommand("build", "solve a family and write a document");
  build->add_option("family", family,
                    "hcma-dilat | hcma-trans | heaven-equal | heaven-zero")
      ->required();
  build->add_option("--a", a_arg, "complex a (dilatational family)");
  build->add_option("--b", b_arg, "complex b (dilatational family)");
  build->add_option("--nu", nu_arg, "complex nu (translational family)");
  build->add_option("--alpha", alpha_arg, "comma list of complex alpha_j");
  build->add_option("--beta", beta_arg, "comma list of complex beta_j");
  build->add_option("--gamma", gamma_arg, "comma list of complex gamma_j");
  build->add_option("--mu", mu_arg, "comma list of real phases mu_j");
  build->add_option("--c", c_arg, "comma list of amplitudes C_j");
  build->add_option("--out", build_out, "document output path");

  // verify / metric / curvature / killing
  std::string verify_doc, metric_doc, curvature_doc, killing_doc;
  CommonOpts verify_opts, metric_opts, curvature_opts, killing_opts, table_opts;
  CLI::App* verify = app.add_subcommand("verify", "constraint and residual suite");
  verify->add_option("document", verify_doc)->required();
  add_common(verify, verify_opts);
  CLI::App* metric = app.add_subcommand("metric", "metric components and signature");
  metric->add_option("document", metric_doc)->required();
  add_common(metric, metric_opts);
  CLI::App* curv = app.add_subcommand("curvature", "finite-difference Ricci check");
  curv->add_option("document", curvature_doc)->required();
  add_common(curv, curvature_opts);
  CLI::App* killing = app.add_subcommand("killing", "Killing non-existence hypotheses");
  killing->add_option("document", killing_doc)->required();
  add_common(killing, killing_opts);
  CLI::App* table = app.add_subcommand("symmetry-table", "64-cell commutator suite");
  add_common(table, table_opts);

  // export-grid
  std::string grid_doc, axes_arg, range_arg, fix_arg, grid_out;
  int resolution = 64;
  CLI::App* grid = app.add_subcommand("export-grid", "tabulate potential and metric");
  grid->add_option("document", grid_doc)->required();
  grid->add_option("--axes", axes_arg, "two axis names, comma separated")->required();
  grid->add_option("--range", range_arg, "lo:hi,lo:hi");
  grid->add_option("--resolution", resolution, "grid resolution per axis");
  grid->add_option("--fix", fix_arg, "name=value pairs for the fixed axes");
  grid->add_option("--out", grid_out, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*build)
      return cmd_build(family, a_arg, b_arg, nu_arg, alpha_arg, beta_arg, gamma_arg,
                       mu_arg, c_arg, build_out);
    if (*verify) return cmd_verify(verify_doc, verify_opts);
    if (*metric) return cmd_metric(metric_doc, metric_opts);
    if (*curv) return cmd_curvature(curvature_doc, curvature_opts);
    if (*killing) return cmd_killing(killing_doc, killing_opts);
    if (*table) return cmd_symmetry_table(table_opts);
    if (*grid)
      return cmd_export_grid(grid_doc, axes_arg, range_arg, resolution, fix_arg,
                             grid_out);
  } catch (const hv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

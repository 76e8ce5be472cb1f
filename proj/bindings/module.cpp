#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heavenly/geometry.hpp"
#include "heavenly/io.hpp"
#include "heavenly/pde.hpp"
#include "heavenly/random.hpp"
#include "heavenly/symmetry.hpp"

namespace py = pybind11;
using namespace heavenly;

namespace {

std::vector<std::vector<complex>> mat_to_list(const Mat4c& m) {
  std::vector<std::vector<complex>> out(4, std::vector<complex>(4));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out[a][b] = m[a][b];
  return out;
}

std::vector<std::vector<double>> mat_to_list(const Mat4d& m) {
  std::vector<std::vector<double>> out(4, std::vector<double>(4));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out[a][b] = m[a][b];
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "verification kernels for exponential heavenly metrics";

  py::register_exception<Error>(m, "HeavenlyError");

  py::enum_<FrameId>(m, "FrameId")
      .value("KAHLER_ORIGINAL", FrameId::KahlerOriginal)
      .value("HCMA_LEGENDRE", FrameId::HcmaLegendre)
      .value("HEAVEN_ORIGINAL", FrameId::HeavenOriginal)
      .value("HEAVEN_LEGENDRE", FrameId::HeavenLegendre)
      .value("GENERIC", FrameId::Generic);

  py::enum_<families::FamilyId>(m, "FamilyId")
      .value("HCMA_DILAT", families::FamilyId::HcmaDilat)
      .value("HCMA_TRANS", families::FamilyId::HcmaTrans)
      .value("HEAVEN_EQUAL", families::FamilyId::HeavenEqual)
      .value("HEAVEN_ZERO", families::FamilyId::HeavenZero);

  py::class_<ExpTerm>(m, "ExpTerm")
      .def(py::init([](complex amplitude, const std::vector<complex>& exponents) {
             if (exponents.size() != 4)
               throw Error(ErrorKind::InvalidArgument, "four exponents per term");
             return ExpTerm{amplitude, {exponents[0], exponents[1], exponents[2],
                                        exponents[3]}};
           }),
           py::arg("amplitude"), py::arg("exponents"))
      .def_readonly("amplitude", &ExpTerm::amplitude)
      .def_property_readonly("exponents", [](const ExpTerm& t) {
        return std::vector<complex>(t.exponents.begin(), t.exponents.end());
      });

  py::class_<ExpSumPotential>(m, "ExpSumPotential")
      .def_readonly("frame", &ExpSumPotential::frame)
      .def_readonly("terms", &ExpSumPotential::terms)
      .def("__len__", [](const ExpSumPotential& p) { return p.terms.size(); });

  m.def("conjugate_slice", &conjugate_slice, py::arg("p"), py::arg("z2"));
  m.def(
      "evaluate",
      [](const ExpSumPotential& pot, const std::vector<complex>& x) {
        if (x.size() != 4)
          throw Error(ErrorKind::InvalidArgument, "points carry four coordinates");
        return evaluate(pot, {x[0], x[1], x[2], x[3]});
      },
      py::arg("potential"), py::arg("point"));
  m.def(
      "jet_entries",
      [](const ExpSumPotential& pot, const std::vector<complex>& x, int order) {
        if (x.size() != 4)
          throw Error(ErrorKind::InvalidArgument, "points carry four coordinates");
        const Jet J = jet(pot, {x[0], x[1], x[2], x[3]}, order);
        py::dict out;
        const auto& idx = multi_indices_up_to(order);
        for (size_t i = 0; i < idx.size(); ++i)
          out[py::make_tuple(idx[i][0], idx[i][1], idx[i][2], idx[i][3])] =
              J.values[i];
        return out;
      },
      py::arg("potential"), py::arg("point"), py::arg("order") = 2);
  m.def("differentiate", &differentiate, py::arg("potential"), py::arg("slot"));
  m.def("term_mass",
        [](const ExpSumPotential& pot, const std::vector<complex>& x) {
          return term_mass(pot, {x[0], x[1], x[2], x[3]});
        });

  // family construction from keyword-style primitives
  m.def(
      "build_hcma_dilat",
      [](complex a, complex b, const std::vector<double>& mu,
         const std::vector<double>& c) {
        return families::build_solution(families::FamilyId::HcmaDilat,
                                        families::HcmaDilatParams{a, b, mu, c});
      },
      py::arg("a"), py::arg("b"), py::arg("mu"), py::arg("c"));
  m.def(
      "build_hcma_trans",
      [](complex nu, const std::vector<complex>& alpha, const std::vector<double>& c) {
        return families::build_solution(families::FamilyId::HcmaTrans,
                                        families::HcmaTransParams{nu, alpha, c});
      },
      py::arg("nu"), py::arg("alpha"), py::arg("c"));
  m.def(
      "build_heaven",
      [](bool zero_partner, const std::vector<complex>& beta,
         const std::vector<complex>& gamma, const std::vector<complex>& c) {
        const auto id = zero_partner ? families::FamilyId::HeavenZero
                                     : families::FamilyId::HeavenEqual;
        return families::build_solution(id, families::HeavenParams{beta, gamma, c});
      },
      py::arg("zero_partner"), py::arg("beta"), py::arg("gamma"), py::arg("c"));

  m.def(
      "residual_suite_max",
      [](families::FamilyId id, const ExpSumPotential& pot, py::object params_obj,
         const std::vector<std::vector<complex>>& points, int workers) {
        families::FamilyParams params;
        if (id == families::FamilyId::HcmaDilat) {
          auto d = params_obj.cast<py::dict>();
          params = families::HcmaDilatParams{
              d["a"].cast<complex>(), d["b"].cast<complex>(),
              d["mu"].cast<std::vector<double>>(), d["c"].cast<std::vector<double>>()};
        } else if (id == families::FamilyId::HcmaTrans) {
          auto d = params_obj.cast<py::dict>();
          params = families::HcmaTransParams{d["nu"].cast<complex>(),
                                             d["alpha"].cast<std::vector<complex>>(),
                                             d["c"].cast<std::vector<double>>()};
        } else {
          auto d = params_obj.cast<py::dict>();
          params = families::HeavenParams{d["beta"].cast<std::vector<complex>>(),
                                          d["gamma"].cast<std::vector<complex>>(),
                                          d["c"].cast<std::vector<complex>>()};
        }
        std::vector<Point4> pts;
        for (const auto& p : points) pts.push_back({p[0], p[1], p[2], p[3]});
        const auto rep = pde::residual_suite(id, params, pot, pts, workers);
        py::dict out;
        out["max_normalized"] = rep.max_normalized;
        py::list rows;
        for (const auto& row : rep.rows) {
          py::dict r;
          r["equation"] = pde::equation_name(row.eq);
          r["component"] = row.component;
          r["label"] = row.label;
          r["max_normalized"] = row.max_normalized;
          rows.append(r);
        }
        out["rows"] = rows;
        return out;
      },
      py::arg("family"), py::arg("potential"), py::arg("params"), py::arg("points"),
      py::arg("workers") = 1);

  m.def(
      "metric_components",
      [](const ExpSumPotential& pot, const std::vector<complex>& x) {
        const Jet J = jet(pot, {x[0], x[1], x[2], x[3]}, 2);
        const auto s = pot.frame == FrameId::HcmaLegendre
                           ? geometry::metric_hcma_legendre(J)
                           : geometry::metric_heaven_legendre(J);
        py::dict out;
        out["components"] = mat_to_list(s.components);
        out["leading"] = s.leading;
        out["hessian_det"] = s.hessian_det;
        return out;
      },
      py::arg("potential"), py::arg("point"));

  m.def(
      "signature",
      [](const ExpSumPotential& pot, const std::vector<complex>& x) {
        const Jet J = jet(pot, {x[0], x[1], x[2], x[3]}, 2);
        const bool paired = frame_info(pot.frame).conjugate_paired;
        const auto s = paired ? geometry::metric_hcma_legendre(J)
                              : geometry::metric_heaven_legendre(J);
        const auto real = geometry::realify(
            s, paired ? geometry::RealChart::conjugate_pairs()
                      : geometry::RealChart::identity());
        py::dict out;
        out["eigenvalues"] = std::vector<double>(real.signature.eigenvalues.begin(),
                                                 real.signature.eigenvalues.end());
        out["n_plus"] = real.signature.n_plus;
        out["n_minus"] = real.signature.n_minus;
        out["classification"] =
            geometry::signature_class_name(real.signature.classification);
        out["metric"] = mat_to_list(real.components);
        return out;
      },
      py::arg("potential"), py::arg("point"));

  m.def(
      "ricci_check",
      [](const ExpSumPotential& pot, const std::vector<double>& x, double fd_step) {
        const bool paired = frame_info(pot.frame).conjugate_paired;
        const auto field = paired ? geometry::hcma_metric_field(pot)
                                  : geometry::heaven_metric_field(pot);
        const auto c = geometry::curvature(field, {x[0], x[1], x[2], x[3]}, fd_step);
        py::dict out;
        out["ricci_norm"] = c.ricci_norm;
        out["riemann_norm"] = c.riemann_norm;
        out["error_estimate"] = c.error_estimate;
        out["ratio"] = c.ricci_norm / (1.0 + c.riemann_norm);
        return out;
      },
      py::arg("potential"), py::arg("point"), py::arg("fd_step") = 1e-3);

  m.def(
      "killing_report",
      [](families::FamilyId id, const ExpSumPotential& pot) {
        const auto rep = symmetry::theorem_applicability(id, pot);
        py::dict out;
        out["enough_terms"] = rep.enough_terms;
        out["exponents_nonzero"] = rep.exponents_nonzero;
        out["determinant"] = rep.determinant;
        out["determinant_ok"] = rep.determinant_ok;
        out["no_killing_vectors"] = rep.no_killing_vectors;
        out["reason"] = rep.reason;
        return out;
      },
      py::arg("family"), py::arg("potential"));

  m.def(
      "phase_vandermonde_determinant",
      [](const std::vector<double>& mu) {
        symmetry::KillingConditionInput in;
        for (int j = 0; j < 4; ++j) in.mu[j] = mu.at(j);
        const auto kd =
            killing_determinant(in, symmetry::KillingCondition::PhaseVandermonde);
        return py::make_tuple(kd.det, kd.nondegenerate);
      },
      py::arg("mu"));

  m.def(
      "symmetry_table_check",
      [](int points, std::uint64_t seed) {
        Rng rng(seed);
        auto cubic = [&rng]() {
          symmetry::Poly p;
          for (int dz = 0; dz <= 3; ++dz)
            for (int dw = 0; dw + dz <= 3; ++dw)
              p = p + symmetry::Poly::monomial(complex(rng.uniform(-1, 1), 0),
                                               {0, 0, dz, dw, 0});
          return p;
        };
        const std::array<symmetry::Poly, 4> rows = {cubic(), cubic(), cubic(), cubic()};
        const std::array<symmetry::Poly, 4> cols = {cubic(), cubic(), cubic(), cubic()};
        std::vector<symmetry::JetPoint5> pts;
        for (int i = 0; i < points; ++i)
          pts.push_back({complex(rng.uniform(-1, 1)), complex(rng.uniform(-1, 1)),
                         complex(rng.uniform(-1, 1)), complex(rng.uniform(-1, 1)),
                         complex(rng.uniform(-1, 1))});
        const auto res = symmetry::table_suite(rows, cols, pts);
        return py::make_tuple(res.cells_failed == 0, res.max_deviation);
      },
      py::arg("points") = 10, py::arg("seed") = 1);

  m.attr("__version__") = "1.0.0";
}

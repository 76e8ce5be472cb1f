#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "heavenly/pde.hpp"
#include "support.hpp"

using namespace heavenly;
using namespace heavenly::pde;
using families::FamilyId;

namespace {

Jet hand_jet(FrameId frame, const Point4& x, int order,
             const std::vector<std::pair<MultiIndex, complex>>& entries) {
  Jet j = Jet::zero(frame, x, order);
  for (const auto& [m, v] : entries) {
    const int r = multi_index_rank(m);
    j.values[r] = v;
    j.magnitudes[r] = std::abs(v);
  }
  return j;
}

}  // namespace

TEST_CASE("legendre second heavenly: quadratic flat background gives zero") {
  // u = t^2/2 + r^2/2: only u_tt = u_rr = 1 survive
  const Jet u = hand_jet(FrameId::HeavenLegendre, {0, 0, 0, 0}, 2,
                         {{{2, 0, 0, 0}, 1}, {{0, 2, 0, 0}, 1}});
  CHECK(leg_heav2_residual(u).raw == complex(0));
}

TEST_CASE("cma residual on the flat ultra-hyperbolic background") {
  const Point4 x = conjugate_slice(complex(0.3, 0.1), complex(-0.2, 0.4));
  const Jet u = testsupport::flat_kahler_jet(-1, x);
  CHECK(std::abs(cma_residual(u, complex(-1, 0)).raw) < 1e-15);
  CHECK(std::abs(cma_residual(u, complex(1, 0)).raw - complex(-2)) < 1e-15);
}

TEST_CASE("legendre hcma residual vanishes on dilatational-family solutions") {
  Rng rng(31);
  const auto params = testsupport::random_dilat_params(rng, 4);
  const ExpSumPotential v = families::build_solution(FamilyId::HcmaDilat, params);
  for (int i = 0; i < 50; ++i) {
    const Point4 x = testsupport::random_point(rng, FrameId::HcmaLegendre);
    const Jet J = jet(v, x, 2);
    CHECK(leg_hcma_residual(J).normalized() < 1e-10);
  }
}

TEST_CASE("residual_suite: all rows vanish on freshly built solutions") {
  Rng rng(32);
  for (FamilyId id : {FamilyId::HcmaDilat, FamilyId::HcmaTrans, FamilyId::HeavenEqual,
                      FamilyId::HeavenZero}) {
    const auto params = testsupport::random_params(rng, id, 4);
    const ExpSumPotential pot = families::build_solution(id, params);
    const auto pts = testsupport::random_points(rng, families::family_frame(id), 30);
    const ResidualReport rep = residual_suite(id, params, pot, pts);
    CHECK(rep.pass(1e-10));
  }
}

TEST_CASE("residual_suite is deterministic across worker counts") {
  Rng rng(33);
  const auto params = testsupport::random_dilat_params(rng, 4);
  const ExpSumPotential pot = families::build_solution(FamilyId::HcmaDilat, params);
  const auto pts = testsupport::random_points(rng, FrameId::HcmaLegendre, 16);
  const ResidualReport a = residual_suite(FamilyId::HcmaDilat, params, pot, pts, 1);
  const ResidualReport b = residual_suite(FamilyId::HcmaDilat, params, pot, pts, 4);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].max_normalized == b.rows[i].max_normalized);
    CHECK(a.rows[i].mean_normalized == b.rows[i].mean_normalized);
  }
}

TEST_CASE("residual_suite flags a perturbed exponent") {
  Rng rng(34);
  const auto params = testsupport::random_dilat_params(rng, 4);
  ExpSumPotential pot = families::build_solution(FamilyId::HcmaDilat, params);
  pot.terms[0].exponents[0] += 1e-3;
  const auto pts = testsupport::random_points(rng, FrameId::HcmaLegendre, 20);
  const ResidualReport rep = residual_suite(FamilyId::HcmaDilat, params, pot, pts);
  CHECK(rep.max_normalized > 1e-5);
}

TEST_CASE("residual_suite on the zero potential is exactly zero") {
  ExpSumPotential zero;
  zero.frame = FrameId::HcmaLegendre;
  families::HcmaDilatParams params{1.0, 0.0, {}, {}};
  Rng rng(35);
  const auto pts = testsupport::random_points(rng, FrameId::HcmaLegendre, 5);
  const ResidualReport rep = residual_suite(FamilyId::HcmaDilat, params, zero, pts);
  CHECK(rep.max_normalized == 0.0);
}

TEST_CASE("partner constraints with phi = v reproduce the nonlinear system") {
  Rng rng(36);
  const auto params = testsupport::random_dilat_params(rng, 3);
  const ExpSumPotential v = families::build_solution(FamilyId::HcmaDilat, params);
  const Point4 x = testsupport::random_point(rng, FrameId::HcmaLegendre);
  const Jet J = jet(v, x, 2);
  const auto via_pair = partner_constraint_residuals(J, J);
  const auto direct = dilatational_nonlinear_residuals(J);
  REQUIRE(via_pair.size() == direct.size());
  for (size_t i = 0; i < direct.size(); ++i)
    CHECK(std::abs(via_pair[i].raw - direct[i].raw) <=
          1e-13 * (1.0 + direct[i].magnitude));
}

TEST_CASE("translational constraints vanish on translational-family solutions") {
  Rng rng(37);
  const auto params = testsupport::random_trans_params(rng, 5);
  const ExpSumPotential v = families::build_solution(FamilyId::HcmaTrans, params);
  for (int i = 0; i < 20; ++i) {
    const Point4 x = testsupport::random_point(rng, FrameId::HcmaLegendre);
    const Jet J = jet(v, x, 2);
    for (const auto& rv : translational_linear_residuals(J, params.nu))
      CHECK(rv.normalized() < 1e-12);
    // generic form with caller-supplied h' agrees at h = nu z2
    for (const auto& rv :
         translational_generic_residuals(J, params.nu, std::conj(params.nu)))
      CHECK(rv.normalized() < 1e-12);
  }
}

TEST_CASE("consistency chain: linear system residuals bound the nonlinear ones") {
  Rng rng(38);
  const auto params = testsupport::random_dilat_params(rng, 5);
  const ExpSumPotential v = families::build_solution(FamilyId::HcmaDilat, params);
  for (int i = 0; i < 20; ++i) {
    const Point4 x = testsupport::random_point(rng, FrameId::HcmaLegendre);
    const Jet J = jet(v, x, 2);
    double max_lin = 0, max_nonlin = 0, max_master = 0;
    for (const auto& rv : dilatational_linear_residuals(J, params.a, params.b))
      max_lin = std::max(max_lin, rv.normalized());
    for (const auto& rv : dilatational_nonlinear_residuals(J))
      max_nonlin = std::max(max_nonlin, rv.normalized());
    max_master = leg_hcma_residual(J).normalized();
    CHECK(max_nonlin <= 100 * max_lin + 1e-12);
    CHECK(max_master <= 100 * max_lin + 1e-12);
  }
}

TEST_CASE("consistency chain for the heaven families") {
  Rng rng(39);
  for (FamilyId id : {FamilyId::HeavenEqual, FamilyId::HeavenZero}) {
    const auto params = testsupport::random_params(rng, id, 4);
    const ExpSumPotential u = families::build_solution(id, params);
    for (int i = 0; i < 20; ++i) {
      const Point4 x = testsupport::random_point(rng, FrameId::HeavenLegendre);
      const Jet J = jet(u, x, 2);
      double max_lin = 0;
      const auto lin = id == FamilyId::HeavenEqual ? heaven_equal_linear_residuals(J)
                                                   : heaven_zero_linear_residuals(J);
      for (const auto& rv : lin) max_lin = std::max(max_lin, rv.normalized());
      CHECK(leg_heav2_residual(J).normalized() <= 100 * max_lin + 1e-12);
    }
  }
}

TEST_CASE("scale invariance of normalized residuals") {
  Rng rng(40);
  const auto params = testsupport::random_dilat_params(rng, 4);
  ExpSumPotential v = families::build_solution(FamilyId::HcmaDilat, params);
  ExpSumPotential scaled = v;
  for (ExpTerm& t : scaled.terms) t.amplitude *= 37.5;
  const Point4 x = testsupport::random_point(rng, FrameId::HcmaLegendre);
  const Jet J = jet(v, x, 2), Js = jet(scaled, x, 2);
  const auto base = dilatational_linear_residuals(J, params.a, params.b);
  const auto big = dilatational_linear_residuals(Js, params.a, params.b);
  for (size_t i = 0; i < base.size(); ++i)
    CHECK(std::abs(base[i].normalized() - big[i].normalized()) <= 1e-12);
  // nonlinear rows keep their pass verdicts under the rescaled normalization
  const auto nb = dilatational_nonlinear_residuals(J);
  const auto ns = dilatational_nonlinear_residuals(Js);
  for (size_t i = 0; i < nb.size(); ++i)
    CHECK((nb[i].normalized() < 1e-10) == (ns[i].normalized() < 1e-10));
}

TEST_CASE("functional invariance: identity matches, square leaves the linear system") {
  Rng rng(41);
  const auto params = testsupport::random_dilat_params(rng, 4);
  const ExpSumPotential v = families::build_solution(FamilyId::HcmaDilat, params);
  const auto pts = testsupport::random_points(rng, FrameId::HcmaLegendre, 15);

  const auto ident = functional_invariance_check(params, v, ScalarC2::identity(), pts);
  CHECK(ident.max_nonlinear_normalized < 1e-10);
  CHECK(ident.max_linear_normalized < 1e-10);

  const auto sq = functional_invariance_check(params, v, ScalarC2::square(), pts);
  CHECK(sq.max_nonlinear_normalized < 1e-9);
  CHECK(sq.max_linear_normalized > 1e-3);
}

TEST_CASE("determining equation on separable backgrounds") {
  testsupport::SeparableTheta theta{{0.3, -0.7, 0.2, 0.05}, {0.1, 0.4, -0.3, 0.2}};
  // phi = theta_w = y b'(w)
  testsupport::SeparableTheta phi{{}, {0.4, -0.6, 0.6}};
  Rng rng(42);
  for (int i = 0; i < 10; ++i) {
    const Point4 x = testsupport::random_point(rng, FrameId::HeavenOriginal);
    const auto r = determining_residual(theta.jet_at(x, 2), phi.jet_at(x, 2));
    CHECK(std::abs(r.value) < 1e-13);
    CHECK(r.field_residual < 1e-13);
    // constants are always characteristics
    const Jet c = hand_jet(FrameId::HeavenOriginal, x, 2, {{{0, 0, 0, 0}, 3.0}});
    CHECK(std::abs(determining_residual(theta.jet_at(x, 2), c).value) == 0.0);
  }
}

TEST_CASE("determining equation flags a non-symmetry on a quadratic background") {
  // theta = x z + kappa y^2 / 2 solves the field equation; phi = x^2 does not
  // solve its linearization: box(phi) = kappa phi_xx = 2 kappa.
  const double kappa = 0.7;
  const Point4 x{0.2, -0.3, 0.5, 0.1};
  const Jet theta = hand_jet(
      FrameId::HeavenOriginal, x, 2,
      {{{0, 0, 0, 0}, x[0] * x[2] + 0.5 * kappa * x[1] * x[1]},
       {{1, 0, 0, 0}, x[2]},
       {{0, 1, 0, 0}, kappa * x[1]},
       {{0, 0, 1, 0}, x[0]},
       {{0, 2, 0, 0}, kappa},
       {{1, 0, 1, 0}, 1}});
  CHECK(std::abs(heav2_residual(theta).raw) < 1e-15);
  const Jet phi = hand_jet(FrameId::HeavenOriginal, x, 2,
                           {{{0, 0, 0, 0}, x[0] * x[0]},
                            {{1, 0, 0, 0}, 2.0 * x[0]},
                            {{2, 0, 0, 0}, 2}});
  const auto r = determining_residual(theta, phi);
  CHECK(std::abs(r.value - complex(2 * kappa)) < 1e-14);
}

TEST_CASE("recursion relations in the theta frame") {
  // constant a, b: theta_w is its own partner and both residuals vanish
  testsupport::SeparableTheta theta{{0.5}, {-0.2}};
  testsupport::SeparableTheta theta_w{{}, {}};  // b' = 0
  Rng rng(43);
  const Point4 x = testsupport::random_point(rng, FrameId::HeavenOriginal);
  const Jet th = theta.jet_at(x, 2);
  const Jet phw = theta_w.jet_at(x, 1);
  const auto both = recursion_residual(th, phw, phw);
  CHECK(std::abs(both[0].raw) == 0.0);
  CHECK(std::abs(both[1].raw) == 0.0);

  // zero pair
  const Jet z = Jet::zero(FrameId::HeavenOriginal, x, 1);
  const auto zz = recursion_residual(th, z, z);
  CHECK(std::abs(zz[0].raw) == 0.0);
  CHECK(std::abs(zz[1].raw) == 0.0);

  // random non-partner pair is generically nonzero
  const Jet p = hand_jet(FrameId::HeavenOriginal, x, 1, {{{0, 0, 1, 0}, 1.0}});
  const Jet q = hand_jet(FrameId::HeavenOriginal, x, 1, {{{0, 1, 0, 0}, 1.0}});
  const auto nz = recursion_residual(th, p, q);
  CHECK(std::abs(nz[0].raw) + std::abs(nz[1].raw) > 0.5);
}

TEST_CASE("recursion residuals reproduce the equal-partner reduction") {
  // phi = psi = theta_w on a separable background: the first recursion
  // residual is minus the first reduction equation, the second is the second
  testsupport::SeparableTheta theta{{0.3, -0.7, 0.2}, {0.1, 0.4, -0.3, 0.2}};
  testsupport::SeparableTheta theta_w{{}, {0.4, -0.6, 0.6}};  // y b'(w)
  Rng rng(47);
  for (int i = 0; i < 10; ++i) {
    const Point4 x = testsupport::random_point(rng, FrameId::HeavenOriginal);
    const Jet th = theta.jet_at(x, 2);
    const Jet phw = theta_w.jet_at(x, 1);
    const auto rec = recursion_residual(th, phw, phw);
    const auto red = equal_partner_residuals(th);
    CHECK(std::abs(rec[0].raw + red[0].raw) <= 1e-13 * (1.0 + red[0].magnitude));
    CHECK(std::abs(rec[1].raw - red[1].raw) <= 1e-13 * (1.0 + red[1].magnitude));
  }
}

TEST_CASE("recursion relations in the Kahler frame on the flat background") {
  // u = z1 z1b - z2 z2b; phi = z1 + z1b has partner psi = -i z2 (+ const)
  const Point4 x = conjugate_slice(complex(0.4, -0.2), complex(0.1, 0.3));
  const Jet u = testsupport::flat_kahler_jet(-1, x);
  const Jet phi = hand_jet(FrameId::KahlerOriginal, x, 1,
                           {{{0, 0, 0, 0}, x[0] + x[1]},
                            {{1, 0, 0, 0}, 1},
                            {{0, 1, 0, 0}, 1}});
  const Jet psi = hand_jet(FrameId::KahlerOriginal, x, 1,
                           {{{0, 0, 0, 0}, complex(0, -1) * x[2]},
                            {{0, 0, 1, 0}, complex(0, -1)}});
  const auto r = recursion_residual(u, phi, psi);
  CHECK(std::abs(r[0].raw) < 1e-15);
  CHECK(std::abs(r[1].raw) < 1e-15);

  // the partner is itself a symmetry: it solves the determining equation
  Jet psi2 = Jet::zero(FrameId::KahlerOriginal, x, 2);
  psi2.values[multi_index_rank({0, 0, 0, 0})] = complex(0, -1) * x[2];
  psi2.values[multi_index_rank({0, 0, 1, 0})] = complex(0, -1);
  CHECK(std::abs(determining_residual(u, psi2).value) == 0.0);
}

TEST_CASE("operator commutator vanishes on solutions and detects violations") {
  testsupport::SeparableTheta theta{{0.3, -0.7, 0.2, 0.05}, {0.1, 0.4, -0.3, 0.2}};
  Rng rng(44);
  const Point4 x = testsupport::random_point(rng, FrameId::HeavenOriginal);
  const Jet test = hand_jet(FrameId::HeavenOriginal, x, 1,
                            {{{1, 0, 0, 0}, 1.0}, {{0, 1, 0, 0}, 0.5}});
  CHECK(std::abs(operator_commutator_residual(theta.jet_at(x, 3), test).raw) < 1e-12);

  // theta = x^2 y^2 at (1,1,0,0) with test = x: residual -24
  const Point4 p{1, 1, 0, 0};
  const Jet th = hand_jet(FrameId::HeavenOriginal, p, 3,
                          {{{0, 0, 0, 0}, 1},
                           {{1, 0, 0, 0}, 2},
                           {{0, 1, 0, 0}, 2},
                           {{2, 0, 0, 0}, 2},
                           {{0, 2, 0, 0}, 2},
                           {{1, 1, 0, 0}, 4},
                           {{2, 1, 0, 0}, 4},
                           {{1, 2, 0, 0}, 4}});
  const Jet tx = hand_jet(FrameId::HeavenOriginal, p, 1, {{{1, 0, 0, 0}, 1.0}});
  CHECK(std::abs(operator_commutator_residual(th, tx).raw - complex(-24)) < 1e-12);

  const Jet tc = hand_jet(FrameId::HeavenOriginal, p, 1, {{{0, 0, 0, 0}, 5.0}});
  CHECK(std::abs(operator_commutator_residual(th, tc).raw) == 0.0);
}

TEST_CASE("equal and zero partner reductions vanish per construction") {
  // constants a, b make theta_w a partner of itself
  testsupport::SeparableTheta theta{{0.5}, {-0.2}};
  Rng rng(45);
  const Point4 x = testsupport::random_point(rng, FrameId::HeavenOriginal);
  const Jet th = theta.jet_at(x, 2);
  for (const auto& rv : equal_partner_residuals(th)) CHECK(std::abs(rv.raw) == 0.0);
  for (const auto& rv : zero_partner_residuals(th)) CHECK(std::abs(rv.raw) == 0.0);
}

TEST_CASE("the third partner constraint is self-conjugate on conjugate slices") {
  Rng rng(46);
  const auto params = testsupport::random_dilat_params(rng, 4);
  const ExpSumPotential v = families::build_solution(FamilyId::HcmaDilat, params);
  for (int i = 0; i < 10; ++i) {
    const Point4 x = testsupport::random_point(rng, FrameId::HcmaLegendre);
    const Jet J = jet(v, x, 2);
    const auto rv = dilatational_nonlinear_residuals(J);
    // third equation equals its own conjugate up to rounding
    CHECK(std::abs(rv[2].raw - std::conj(rv[2].raw)) <= 1e-12 * rv[2].magnitude);
  }
}

TEST_CASE("jet order and frame preconditions are enforced") {
  const Point4 x{0, 0, 0, 0};
  ExpSumPotential pot{FrameId::HcmaLegendre, {{complex(1), {1, 1, 0, 0}}}};
  const Jet j1 = jet(pot, x, 1);
  CHECK_THROWS_AS(leg_hcma_residual(j1), Error);
  const Jet wrong = jet(pot, x, 2);
  CHECK_THROWS_AS(heav2_residual(wrong), Error);
  CHECK_THROWS_AS(residual(EquationId::SecondHeavenlyLinearized, wrong), Error);
}

TEST_CASE("equation metadata is consistent") {
  for (EquationId id :
       {EquationId::Cma, EquationId::Hcma, EquationId::LegendreHcma,
        EquationId::PartnerConstraints, EquationId::TranslationalGeneric,
        EquationId::TranslationalLinear, EquationId::DilatationalNonlinear,
        EquationId::DilatationalLinear, EquationId::SecondHeavenly,
        EquationId::SecondHeavenlyLinearized, EquationId::LegendreSecondHeavenly,
        EquationId::EqualPartnerReduction, EquationId::ZeroPartnerReduction,
        EquationId::HeavenEqualLinear, EquationId::HeavenZeroLinear}) {
    CHECK(!equation_name(id).empty());
    const int n = equation_component_count(id);
    CHECK(n >= 1);
    for (int c = 0; c < n; ++c) CHECK(!component_label(id, c).empty());
  }
}

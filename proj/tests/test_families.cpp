#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "heavenly/families.hpp"
#include "support.hpp"

using namespace heavenly;
using namespace heavenly::families;

TEST_CASE("solve_alpha_polar: frozen values and the modulus law") {
  // a = 1, mu = 0: chi = 2 cos 0 = 2, alpha = 2, |alpha|^2 = 4 = a a + ab ab
  const complex alpha = solve_alpha_polar(1.0, 0.0);
  CHECK(std::abs(alpha - complex(2)) < 1e-14);
  CHECK(std::abs(std::norm(alpha) - (alpha + std::conj(alpha)).real()) < 1e-12);

  // cosine zero is degenerate
  CHECK_THROWS_AS(solve_alpha_polar(1.0, M_PI / 2), Error);

  // generic case: substitute back into the modulus law
  const complex a = std::polar(1.0, M_PI / 4);
  const complex g = solve_alpha_polar(a, M_PI / 6);
  const complex lhs = std::norm(g);
  const complex rhs = a * g + std::conj(a) * std::conj(g);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs)));
}

TEST_CASE("beta_from_alpha_dilat: frozen substitution values") {
  CHECK(std::abs(beta_from_alpha_dilat(1.0, 0.0, 2.0) - complex(0, 2)) < 1e-14);
  CHECK(beta_from_alpha_dilat(1.0, complex(0, 1), 0.0) == complex(0));
  CHECK_THROWS_AS(beta_from_alpha_dilat(0.0, 1.0, 1.0), Error);
}

TEST_CASE("beta_from_alpha_trans: frozen substitution values") {
  CHECK(std::abs(beta_from_alpha_trans(0.0, 1.0)) < 1e-14);
  // nu = 1, alpha = i: alpha/conj(alpha) = -1, beta = (1 + 2i) i = -2 + i
  CHECK(std::abs(beta_from_alpha_trans(1.0, complex(0, 1)) - complex(-2, 1)) < 1e-14);
  CHECK_THROWS_AS(beta_from_alpha_trans(1.0, 0.0), Error);
}

TEST_CASE("bridge_dilat_trans: frozen values and incompatibility") {
  CHECK(std::abs(bridge_dilat_trans(complex(0, 1), 0.0) - complex(1)) < 1e-14);
  CHECK(std::abs(bridge_dilat_trans(complex(0, 2), complex(0, 1)) - complex(4)) <
        1e-14);
  CHECK_THROWS_AS(bridge_dilat_trans(complex(1, 0), 0.0), Error);
}

TEST_CASE("exponents_heaven: frozen values and degenerate denominators") {
  const auto eq = exponents_heaven(FamilyId::HeavenEqual, 1.0, 2.0);
  CHECK(std::abs(eq.alpha - complex(1)) < 1e-14);
  CHECK(std::abs(eq.delta - complex(-4)) < 1e-14);

  const auto ze = exponents_heaven(FamilyId::HeavenZero, 1.0, 1.0);
  CHECK(std::abs(ze.alpha - complex(1)) < 1e-14);
  CHECK(std::abs(ze.delta - complex(-1)) < 1e-14);

  CHECK_THROWS_AS(exponents_heaven(FamilyId::HeavenEqual, 1.0, 1.0), Error);
  CHECK_THROWS_AS(exponents_heaven(FamilyId::HeavenZero, 1.0, 0.0), Error);
  CHECK_THROWS_AS(exponents_heaven(FamilyId::HeavenZero, 0.0, 1.0), Error);
}

TEST_CASE("build_solution: empty parameter lists give the zero potential") {
  const ExpSumPotential p =
      build_solution(FamilyId::HcmaDilat, HcmaDilatParams{1.0, 0.0, {}, {}});
  CHECK(p.terms.empty());
  CHECK(evaluate(p, {0, 0, 0, 0}) == complex(0));
  const auto rep = validate(FamilyId::HcmaDilat, HcmaDilatParams{1.0, 0.0, {}, {}}, p);
  CHECK(rep.residuals.empty());
  CHECK(rep.valid());
}

TEST_CASE("build_solution emits conjugate-paired exponents for HCMA families") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto params = testsupport::random_dilat_params(rng, 4);
    const ExpSumPotential p = build_solution(FamilyId::HcmaDilat, params);
    CHECK(p.terms.size() == 4);
    CHECK(has_conjugation_structure(p));
    const auto tparams = testsupport::random_trans_params(rng, 3);
    CHECK(has_conjugation_structure(build_solution(FamilyId::HcmaTrans, tparams)));
  }
}

TEST_CASE("round-trip: validate(build_solution) stays below 1e-12") {
  Rng rng(22);
  for (FamilyId id : {FamilyId::HcmaDilat, FamilyId::HcmaTrans, FamilyId::HeavenEqual,
                      FamilyId::HeavenZero}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int n = rng.uniform_int(1, 6);
      const FamilyParams params = testsupport::random_params(rng, id, n);
      const ExpSumPotential p = build_solution(id, params);
      CHECK(p.terms.size() == static_cast<size_t>(n));
      const auto rep = validate(id, params, p);
      CHECK(rep.valid(1e-12));
    }
  }
}

TEST_CASE("validate reports a first-order residual for a perturbed exponent") {
  Rng rng(23);
  const auto params = testsupport::random_dilat_params(rng, 3);
  ExpSumPotential p = build_solution(FamilyId::HcmaDilat, params);
  p.terms[1].exponents[2] += 1e-3;  // break the beta relation
  const auto rep = validate(FamilyId::HcmaDilat, params, p);
  CHECK(rep.max_residual > 1e-4);
  CHECK(rep.max_residual < 1e-1);
}

TEST_CASE("degenerate parameter loci raise their errors inside 1e-12 neighborhoods") {
  // chi = 0 through build_solution
  HcmaDilatParams bad{1.0, 0.0, {M_PI / 2}, {1.0}};
  CHECK_THROWS_AS(build_solution(FamilyId::HcmaDilat, bad), Error);

  HcmaTransParams bad2{0.0, {complex(0)}, {1.0}};
  CHECK_THROWS_AS(build_solution(FamilyId::HcmaTrans, bad2), Error);

  HeavenParams bad3{{1.0}, {1.0 + 1e-13}, {1.0}};
  CHECK_THROWS_AS(build_solution(FamilyId::HeavenEqual, bad3), Error);

  HeavenParams bad4{{1.0}, {complex(1e-13)}, {1.0}};
  CHECK_THROWS_AS(build_solution(FamilyId::HeavenZero, bad4), Error);

  HeavenParams bad5{{complex(1e-13)}, {1.0}, {1.0}};
  CHECK_THROWS_AS(build_solution(FamilyId::HeavenZero, bad5), Error);
}

TEST_CASE("validate requires the family frame") {
  ExpSumPotential wrong;
  wrong.frame = FrameId::HeavenLegendre;
  CHECK_THROWS_AS(validate(FamilyId::HcmaDilat, HcmaDilatParams{1.0, 0.0, {}, {}}, wrong),
                  Error);
}

TEST_CASE("dilat solutions with the bridge constraint also solve the trans system") {
  // conj(a) = -a and b = (conj(nu) - i) a tie the two families together
  Rng rng(24);
  const complex a(0, 0.2);
  const complex nu = rng.complex_in_disk(0.5);
  const complex b = bridge_dilat_trans(a, nu);
  HcmaDilatParams dparams{a, b, {0.4, 1.3, 2.2, -0.8}, {1.0, -0.5, 0.7, 0.3}};
  const ExpSumPotential p = build_solution(FamilyId::HcmaDilat, dparams);
  // each term's exponents must satisfy the translational relation with nu
  for (const ExpTerm& t : p.terms) {
    const complex alpha = t.exponents[0], beta = t.exponents[2];
    const complex expect = beta_from_alpha_trans(nu, alpha);
    CHECK(std::abs(beta - expect) <= 1e-12 * (std::abs(beta) + std::abs(expect) + 1));
  }
  // and the same potential passes the translational-family validation
  HcmaTransParams tparams;
  tparams.nu = nu;
  for (const ExpTerm& t : p.terms) {
    tparams.alpha.push_back(t.exponents[0]);
    tparams.c.push_back(t.amplitude.real());
  }
  const auto rep = validate(FamilyId::HcmaTrans, tparams, p);
  CHECK(rep.valid(1e-12));
}

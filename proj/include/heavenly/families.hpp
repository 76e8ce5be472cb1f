#pragma once

#include <string>
#include <variant>
#include <vector>

#include "heavenly/expsum.hpp"

namespace heavenly::families {

/// The four exponential solution families.
///  - HcmaDilat  : dilatational choice, six-equation linear system
///  - HcmaTrans  : translational choice, constant coefficients
///  - HeavenEqual: equal partner symmetries of the second heavenly equation
///  - HeavenZero : vanishing partner characteristic
enum class FamilyId { HcmaDilat, HcmaTrans, HeavenEqual, HeavenZero };

std::string family_name(FamilyId id);
FamilyId family_from_name(const std::string& name);
FrameId family_frame(FamilyId id);

/// Parameters a, b plus per-term phases mu_j and real amplitudes C_j.
/// chi_j = 2|a| cos(arg a + mu_j) and alpha_j = chi_j e^{i mu_j} are derived,
/// never stored.
struct HcmaDilatParams {
  complex a;
  complex b;
  std::vector<double> mu;
  std::vector<double> c;
};

struct HcmaTransParams {
  complex nu;
  std::vector<complex> alpha;
  std::vector<double> c;
};

/// Shared by HeavenEqual and HeavenZero; the family id selects the
/// exponent relations.
struct HeavenParams {
  std::vector<complex> beta;
  std::vector<complex> gamma;
  std::vector<complex> c;
};

using FamilyParams = std::variant<HcmaDilatParams, HcmaTransParams, HeavenParams>;

/// chi e^{i mu} with chi = 2|a| cos(arg a + mu); the returned alpha satisfies
/// |alpha|^2 = a alpha + conj(a) conj(alpha).
complex solve_alpha_polar(complex a, double mu);

/// beta = i (alpha^2 - (conj(a) + i conj(b)) alpha) / conj(a)
complex beta_from_alpha_dilat(complex a, complex b, complex alpha);

/// beta = (nu + i - i alpha/conj(alpha)) alpha
complex beta_from_alpha_trans(complex nu, complex alpha);

/// For purely imaginary a returns b = (conj(nu) - i) a, the parameter choice
/// under which the dilatational-family solution also satisfies the
/// translational constant-coefficient system.
complex bridge_dilat_trans(complex a, complex nu);

/// HeavenEqual: alpha = beta^2/(gamma - beta), delta = -gamma^2/beta.
/// HeavenZero : alpha = beta^2/gamma,          delta = -gamma^2/beta.
struct HeavenExponents {
  complex alpha;
  complex delta;
};
HeavenExponents exponents_heaven(FamilyId family, complex beta, complex gamma);

ExpSumPotential build_solution(FamilyId family, const FamilyParams& params);

struct ConstraintResidual {
  int term;
  std::string constraint;
  double residual;  // relative
};

struct ConstraintReport {
  FamilyId family;
  std::vector<ConstraintResidual> residuals;
  std::vector<int> zero_exponent_terms;  // Killing-theorem hypothesis flags
  bool conjugation_ok = true;            // structural, HCMA families only
  double max_residual = 0;
  bool valid(double tol = 1e-12) const {
    return conjugation_ok && max_residual <= tol;
  }
};

/// Re-substitutes each term's exponents into the family's parameter laws.
ConstraintReport validate(FamilyId family, const FamilyParams& params,
                          const ExpSumPotential& pot);

}  // namespace heavenly::families

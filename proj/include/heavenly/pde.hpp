#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heavenly/expsum.hpp"
#include "heavenly/families.hpp"

namespace heavenly::pde {

/// Equation and equation-system identifiers. Each id documents its frame and
/// the jet order it consumes (2 everywhere except the operator commutator).
enum class EquationId {
  Cma,                     // u_11b u_22b - u_12b u_21b = eps     (Kahler)
  Hcma,                    // Cma with eps = -1                   (Kahler)
  LegendreHcma,            // v_ppb v_22b - v_p2b v_pb2 = v_ppb^2 - v_pp v_pbpb
  PartnerConstraints,      // generic characteristic phi, 3 equations
  TranslationalGeneric,    // phi = p + pbar + h + hbar, caller-supplied h'
  TranslationalLinear,     // h = nu z2, constant coefficients, 3 equations
  DilatationalNonlinear,   // phi = v, 3 equations
  DilatationalLinear,      // six-equation linear system with parameters a, b
  SecondHeavenly,          // theta_xw + theta_yz + theta_xx theta_yy - theta_xy^2
  SecondHeavenlyLinearized,// determining equation for characteristics
  LegendreSecondHeavenly,  // u_tt(u_xx+u_rz) + u_xt(u_rr-u_xt) - u_rt(u_rx+u_tz)
  EqualPartnerReduction,   // theta-frame pair for phi = psi = theta_w
  ZeroPartnerReduction,    // theta-frame pair for phi = theta_w, psi = 0
  HeavenEqualLinear,       // u_rt+u_rr-u_xt, u_xx+u_rz, u_rx+u_xt+u_tz
  HeavenZeroLinear,        // u_rr-u_tx, u_rx+u_tz, u_rz+u_xx
};

std::string equation_name(EquationId id);
FrameId equation_frame(EquationId id);
int equation_component_count(EquationId id);
std::string component_label(EquationId id, int component);

/// One residual with the magnitude of its constituent monomials. The
/// normalized value |raw| / magnitude is scale-free and bounded by 1; it is
/// the quantity all tolerances apply to.
struct ResidualValue {
  complex raw;
  double magnitude;
  double normalized() const;
};

/// Extra inputs for parameterized equations.
struct EquationParams {
  complex eps = complex(-1, 0);      // Cma
  complex a = 0, b = 0;              // DilatationalLinear
  complex nu = 0;                    // TranslationalLinear
  complex hprime = 0, hbarprime = 0; // TranslationalGeneric
};

/// Left-minus-right residual(s) of the cited equation at the jet's base
/// point. Pair-taking equations receive `secondary` (the characteristic jet
/// for the linearized equation, the potential jet for partner constraints).
std::vector<ResidualValue> residual(EquationId id, const Jet& primary,
                                    const Jet* secondary = nullptr,
                                    const EquationParams& params = {});

// Direct forms (single source of the transcriptions used by `residual`).
ResidualValue cma_residual(const Jet& u, complex eps);
ResidualValue leg_hcma_residual(const Jet& v);
std::vector<ResidualValue> partner_constraint_residuals(const Jet& phi, const Jet& v);
std::vector<ResidualValue> translational_generic_residuals(const Jet& v, complex hprime,
                                                           complex hbarprime);
std::vector<ResidualValue> translational_linear_residuals(const Jet& v, complex nu);
std::vector<ResidualValue> dilatational_nonlinear_residuals(const Jet& v);
std::vector<ResidualValue> dilatational_linear_residuals(const Jet& v, complex a,
                                                         complex b);
ResidualValue heav2_residual(const Jet& theta);
ResidualValue defsym2_residual(const Jet& theta, const Jet& phi);
ResidualValue leg_heav2_residual(const Jet& u);
std::vector<ResidualValue> equal_partner_residuals(const Jet& theta);
std::vector<ResidualValue> zero_partner_residuals(const Jet& theta);
std::vector<ResidualValue> heaven_equal_linear_residuals(const Jet& u);
std::vector<ResidualValue> heaven_zero_linear_residuals(const Jet& u);

/// Determining-equation residual with the field-equation context at the same
/// point (the caller is warned through `field_residual` when the background
/// does not solve the field equation).
struct DeterminingResidual {
  complex value;
  double normalized;
  double field_residual;  // normalized field-equation residual of the background
};
DeterminingResidual determining_residual(const Jet& background, const Jet& phi);

/// Residuals of the first-order partner relations:
///  theta frame: (psi_y - L_y phi, psi_x - L_x phi)
///  Kahler frame: (psi_1 - L_1 phi, psi_2 - L_2 phi)
std::array<ResidualValue, 2> recursion_residual(const Jet& background, const Jet& phi,
                                                const Jet& psi);

/// [L_x, L_y] applied to a test function, expanded on the background:
/// (field residual)_y (test)_x - (field residual)_x (test)_y.
/// Needs an order-3 background jet.
ResidualValue operator_commutator_residual(const Jet& theta, const Jet& test);

struct SuiteRow {
  EquationId eq;
  int component;
  std::string label;
  double max_normalized = 0;
  double mean_normalized = 0;
  double max_raw = 0;
  Point4 worst_point{};
};

struct ResidualReport {
  families::FamilyId family;
  int point_count = 0;
  std::vector<SuiteRow> rows;
  double max_normalized = 0;
  bool pass(double tol) const { return max_normalized <= tol; }
};

/// Evaluates the family's linear system, its nonlinear master equation, and
/// (dilatational family) the nonlinear constraint system at every point.
/// Points must match the family frame; `workers` > 1 splits the sweep.
ResidualReport residual_suite(families::FamilyId family,
                              const families::FamilyParams& params,
                              const ExpSumPotential& pot,
                              const std::vector<Point4>& points, int workers = 1);

/// Residuals of f(v) against the nonlinear constraint system (expected to
/// vanish) and the linear system (expected generically nonzero).
struct InvarianceReport {
  std::string function_name;
  double max_nonlinear_normalized = 0;  // dilatational constraints of f(v)
  double max_linear_normalized = 0;     // six-equation system of f(v)
  int point_count = 0;
};
InvarianceReport functional_invariance_check(const families::HcmaDilatParams& params,
                                             const ExpSumPotential& pot,
                                             const ScalarC2& f,
                                             const std::vector<Point4>& points);

}  // namespace heavenly::pde

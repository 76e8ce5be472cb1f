#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heavenly/expsum.hpp"
#include "heavenly/families.hpp"

namespace heavenly::symmetry {

/// Sparse polynomial in the five jet-space variables (x, y, z, w, theta),
/// complex coefficients, exact arithmetic. Variables 2 and 3 double as the
/// (z1, z2) arguments of holomorphic coefficient functions in the Kahler
/// frame helpers.
class Poly {
 public:
  using Expo = std::array<int, 5>;

  Poly() = default;
  static Poly constant(complex c);
  static Poly variable(int k);
  static Poly monomial(complex c, const Expo& e);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(complex c) const;
  Poly operator-() const;

  Poly derivative(int k) const;
  complex eval(const std::array<complex, 5>& at) const;
  bool is_zero() const { return coef_.empty(); }
  /// Largest coefficient magnitude (scale for tolerance checks).
  double coefficient_scale() const;
  const std::map<Expo, complex>& coefficients() const { return coef_; }

 private:
  std::map<Expo, complex> coef_;
  void add_term(const Expo& e, complex c);
};

inline Poly operator*(complex c, const Poly& p) { return p * c; }

/// Coefficient-function shorthand used by the commutator table:
/// hat_z(f) = z f_z - f, hat_w(f) = w f_w - f,
/// wedge(f,g) = f_z g_w - g_z f_w, wedge_s(f) = x f_z - y f_w.
Poly hat_z(const Poly& f);
Poly hat_w(const Poly& f);
Poly wedge(const Poly& f, const Poly& g);
Poly wedge_s(const Poly& f);

/// Point-symmetry generators of the second heavenly equation. The X kinds
/// are fixed fields; Y/Z/G/H take a polynomial coefficient function of
/// (z, w).
enum class GenKind { X1, X2, X3, X4, Y, Z, G, H };
std::string gen_kind_name(GenKind k);

struct GeneratorSpec {
  GenKind kind;
  Poly coeff;  // coefficient function for Y/Z/G/H, vars z=2, w=3 only

  static GeneratorSpec x1() { return {GenKind::X1, {}}; }
  static GeneratorSpec x2() { return {GenKind::X2, {}}; }
  static GeneratorSpec x3() { return {GenKind::X3, {}}; }
  static GeneratorSpec x4() { return {GenKind::X4, {}}; }
  static GeneratorSpec y(Poly a) { return {GenKind::Y, std::move(a)}; }
  static GeneratorSpec z(Poly b) { return {GenKind::Z, std::move(b)}; }
  static GeneratorSpec g(Poly c) { return {GenKind::G, std::move(c)}; }
  static GeneratorSpec h(Poly d) { return {GenKind::H, std::move(d)}; }
};

/// Vector field components over (x, y, z, w, theta).
using FieldComponents = std::array<Poly, 5>;
using VectorFieldSample = std::array<complex, 5>;
using JetPoint5 = std::array<complex, 5>;

FieldComponents generator_polynomials(const GeneratorSpec& spec);
VectorFieldSample generator_components(const GeneratorSpec& spec, const JetPoint5& at);

/// [A,B]^k = A^m d_m B^k - B^m d_m A^k over all five variables.
FieldComponents bracket(const FieldComponents& a, const FieldComponents& b);
VectorFieldSample lie_bracket(const GeneratorSpec& a, const GeneratorSpec& b,
                              const JetPoint5& at);

/// One expected commutator-table entry: scale * Kind_{subscript} (or zero).
struct TableEntry {
  complex scale = 0;
  std::optional<GenKind> kind;
  Poly subscript;
  FieldComponents components() const;
};

/// Expected [row, col] entry built from the table of commutators, rows and
/// columns ordered X1, X2, X3, X4, Y, Z, G, H; `rowf`/`colf` are the row and
/// column coefficient functions (ignored for X kinds).
TableEntry table_expected(int row, int col, const Poly& rowf, const Poly& colf);

struct TableCheck {
  bool pass;
  double max_deviation;
  double scale;
};

/// Max over points of |lie_bracket - expected| against
/// tolerance * (1 + component scale).
TableCheck table_check(const GeneratorSpec& a, const GeneratorSpec& b,
                       const TableEntry& expected, const std::vector<JetPoint5>& points,
                       double tol = 1e-8);

struct TableSuiteResult {
  int cells_checked = 0;
  int cells_failed = 0;
  double max_deviation = 0;
  std::vector<std::pair<int, int>> failing_cells;
};

/// Runs all 64 ordered cells with the supplied coefficient functions
/// (row order X1..X4, Y_e, Z_f, G_g, H_h; column order X1..X4, Y_a, Z_b,
/// G_c, H_d) at the given points.
TableSuiteResult table_suite(const std::array<Poly, 4>& row_coeffs,
                             const std::array<Poly, 4>& col_coeffs,
                             const std::vector<JetPoint5>& points, double tol = 1e-8);

/// Point-symmetry generator of the complex Monge-Ampere equation:
/// biholomorphic parts omega, h as polynomials in (z1, z2) (stored in
/// variables 2, 3), plus the real constants C1, C2.
struct CmaGenerator {
  Poly omega;
  double c1 = 0;
  double c2 = 0;
  Poly h;
};

/// Characteristic  eta = i(u_1 O_2 - u_2 O_1 + u_2b O_1b - u_1b O_2b)
///                     + C1 (u - z1 u_1 - z1b u_1b) - i C2 (z2 u_2 - z2b u_2b)
///                     + h + hb
/// evaluated on an order-1 Kahler-frame jet.
complex characteristic_cma(const CmaGenerator& gen, const Jet& u);

/// Components of the generator over (d_z1, d_z1b, d_z2, d_z2b, d_u).
VectorFieldSample cma_generator_components(const CmaGenerator& gen, const Point4& z,
                                           complex u_value);

enum class KillingCondition { PhaseVandermonde, HeavenEqualRatios, HeavenZeroRatios };

struct KillingConditionInput {
  std::array<double, 4> mu{};      // PhaseVandermonde
  std::array<complex, 4> beta{};   // ratio conditions
  std::array<complex, 4> gamma{};
};

struct KillingDeterminant {
  complex det;
  double row_norm_product;
  bool nondegenerate;  // |det| > tol * row-norm product
};

/// The 4x4 determinants guarding linear independence of the four phases.
/// Rows: PhaseVandermonde  (1, e^{-2i mu}, e^{2i mu}, e^{-4i mu});
///       HeavenEqualRatios (b/(g-b), 1, g/b, -g^2/b^2);
///       HeavenZeroRatios  (b/g, 1, g/b, -g^2/b^2).
KillingDeterminant killing_determinant(const KillingConditionInput& in,
                                       KillingCondition which, double tol = 1e-10);

struct TheoremReport {
  bool enough_terms = false;      // n >= 4
  bool exponents_nonzero = false; // alpha_1..4 or beta_1..4 all nonzero
  bool determinant_ok = false;
  complex determinant = 0;
  bool no_killing_vectors = false;
  std::string reason;
};

/// Checks the hypotheses under which the family metrics provably admit no
/// Killing vectors: at least four terms, nonzero leading exponents, and a
/// nondegenerate phase-independence determinant, all on the first four terms.
TheoremReport theorem_applicability(families::FamilyId family,
                                    const ExpSumPotential& pot);

}  // namespace heavenly::symmetry

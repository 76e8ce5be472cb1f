#include "heavenly/symmetry.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace heavenly::symmetry {

namespace {
const complex kI(0, 1);
constexpr int kX = 0, kY = 1, kZ = 2, kW = 3, kTheta = 4;
}  // namespace

void Poly::add_term(const Expo& e, complex c) {
  if (c == complex(0)) return;
  auto [it, inserted] = coef_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == complex(0)) coef_.erase(it);
  }
}

Poly Poly::constant(complex c) {
  Poly p;
  p.add_term({0, 0, 0, 0, 0}, c);
  return p;
}

Poly Poly::variable(int k) {
  Poly p;
  Expo e{0, 0, 0, 0, 0};
  e[k] = 1;
  p.add_term(e, 1);
  return p;
}

Poly Poly::monomial(complex c, const Expo& e) {
  Poly p;
  p.add_term(e, c);
  return p;
}

Poly Poly::operator+(const Poly& o) const {
  Poly out = *this;
  for (const auto& [e, c] : o.coef_) out.add_term(e, c);
  return out;
}

Poly Poly::operator-(const Poly& o) const {
  Poly out = *this;
  for (const auto& [e, c] : o.coef_) out.add_term(e, -c);
  return out;
}

Poly Poly::operator*(const Poly& o) const {
  Poly out;
  for (const auto& [e1, c1] : coef_)
    for (const auto& [e2, c2] : o.coef_) {
      Expo e;
      for (int k = 0; k < 5; ++k) e[k] = e1[k] + e2[k];
      out.add_term(e, c1 * c2);
    }
  return out;
}

Poly Poly::operator*(complex c) const {
  Poly out;
  for (const auto& [e, v] : coef_) out.add_term(e, v * c);
  return out;
}

Poly Poly::operator-() const { return *this * complex(-1); }

Poly Poly::derivative(int k) const {
  Poly out;
  for (const auto& [e, c] : coef_) {
    if (e[k] == 0) continue;
    Expo d = e;
    d[k] -= 1;
    out.add_term(d, c * static_cast<double>(e[k]));
  }
  return out;
}

complex Poly::eval(const std::array<complex, 5>& at) const {
  complex sum = 0;
  for (const auto& [e, c] : coef_) {
    complex term = c;
    for (int k = 0; k < 5; ++k)
      for (int p = 0; p < e[k]; ++p) term *= at[k];
    sum += term;
  }
  return sum;
}

double Poly::coefficient_scale() const {
  double s = 0;
  for (const auto& [e, c] : coef_) s = std::max(s, std::abs(c));
  return s;
}

Poly hat_z(const Poly& f) { return Poly::variable(kZ) * f.derivative(kZ) - f; }
Poly hat_w(const Poly& f) { return Poly::variable(kW) * f.derivative(kW) - f; }

Poly wedge(const Poly& f, const Poly& g) {
  return f.derivative(kZ) * g.derivative(kW) - g.derivative(kZ) * f.derivative(kW);
}

Poly wedge_s(const Poly& f) {
  return Poly::variable(kX) * f.derivative(kZ) - Poly::variable(kY) * f.derivative(kW);
}

std::string gen_kind_name(GenKind k) {
  switch (k) {
    case GenKind::X1: return "X1";
    case GenKind::X2: return "X2";
    case GenKind::X3: return "X3";
    case GenKind::X4: return "X4";
    case GenKind::Y: return "Y";
    case GenKind::Z: return "Z";
    case GenKind::G: return "G";
    case GenKind::H: return "H";
  }
  return "?";
}

FieldComponents generator_polynomials(const GeneratorSpec& spec) {
  const Poly x = Poly::variable(kX), y = Poly::variable(kY), z = Poly::variable(kZ),
             th = Poly::variable(kTheta);
  const Poly& f = spec.coeff;
  switch (spec.kind) {
    case GenKind::X1:
      return FieldComponents{Poly::constant(1), Poly{}, Poly{}, Poly{}, Poly{}};
    case GenKind::X2:
      return FieldComponents{z * 2.0, Poly{}, Poly{}, Poly{}, -(x * y)};
    case GenKind::X3:
      return FieldComponents{Poly{}, y, Poly{}, Poly::variable(kW), th};
    case GenKind::X4:
      return FieldComponents{x, y, Poly{}, Poly{}, th * 3.0};
    case GenKind::Y:
      return FieldComponents{Poly{}, Poly{}, Poly{}, Poly{},
                             y * f.derivative(kW) - x * f.derivative(kZ)};
    case GenKind::Z: {
      const Poly theta_part = (x * x * f.derivative(kZ).derivative(kZ) +
                               y * y * f.derivative(kW).derivative(kW) -
                               x * y * 2.0 * f.derivative(kZ).derivative(kW)) *
                              0.5;
      return FieldComponents{f.derivative(kW), f.derivative(kZ), Poly{}, Poly{},
                             theta_part};
    }
    case GenKind::G: {
      const Poly czw = f.derivative(kZ).derivative(kW);
      const Poly czz = f.derivative(kZ).derivative(kZ);
      const Poly cww = f.derivative(kW).derivative(kW);
      const Poly theta_part =
          (x * x * x * czz.derivative(kZ) - x * x * y * 3.0 * czz.derivative(kW) +
           x * y * y * 3.0 * cww.derivative(kZ) - y * y * y * cww.derivative(kW)) *
          (1.0 / 6.0);
      return FieldComponents{x * czw - y * cww, x * czz - y * czw, f.derivative(kW),
                             -f.derivative(kZ), theta_part};
    }
    case GenKind::H:
      return FieldComponents{Poly{}, Poly{}, Poly{}, Poly{}, f};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown generator kind");
}

VectorFieldSample generator_components(const GeneratorSpec& spec, const JetPoint5& at) {
  const FieldComponents comps = generator_polynomials(spec);
  VectorFieldSample out;
  for (int k = 0; k < 5; ++k) out[k] = comps[k].eval(at);
  return out;
}

FieldComponents bracket(const FieldComponents& a, const FieldComponents& b) {
  FieldComponents out;
  for (int k = 0; k < 5; ++k) {
    Poly s;
    for (int m = 0; m < 5; ++m)
      s = s + a[m] * b[k].derivative(m) - b[m] * a[k].derivative(m);
    out[k] = s;
  }
  return out;
}

VectorFieldSample lie_bracket(const GeneratorSpec& a, const GeneratorSpec& b,
                              const JetPoint5& at) {
  const FieldComponents br = bracket(generator_polynomials(a), generator_polynomials(b));
  VectorFieldSample out;
  for (int k = 0; k < 5; ++k) out[k] = br[k].eval(at);
  return out;
}

FieldComponents TableEntry::components() const {
  if (!kind || scale == complex(0)) return {};
  FieldComponents base = generator_polynomials({*kind, subscript});
  for (Poly& p : base) p = p * scale;
  return base;
}

TableEntry table_expected(int row, int col, const Poly& rowf, const Poly& colf) {
  const Poly w = Poly::variable(kW), z = Poly::variable(kZ);
  auto entry = [](complex s, GenKind k, Poly sub) {
    return TableEntry{s, k, std::move(sub)};
  };
  const TableEntry zero{};

  // Row and column order: X1, X2, X3, X4, Y, Z, G, H.
  switch (row * 8 + col) {
    // X1 row
    case 0 * 8 + 1: return entry(-1, GenKind::Y, w);
    case 0 * 8 + 3: return entry(1, GenKind::X1, {});
    case 0 * 8 + 4: return entry(-1, GenKind::H, colf.derivative(kZ));
    case 0 * 8 + 5: return entry(-1, GenKind::Y, colf.derivative(kZ));
    case 0 * 8 + 6: return entry(1, GenKind::Z, colf.derivative(kZ));
    // X2 row
    case 1 * 8 + 0: return entry(1, GenKind::Y, w);
    case 1 * 8 + 3: return entry(1, GenKind::X2, {});
    case 1 * 8 + 4: return entry(-2, GenKind::H, z * colf.derivative(kZ));
    case 1 * 8 + 5: return entry(-1, GenKind::Y, hat_z(colf) * 2.0 + colf);
    case 1 * 8 + 6: return entry(2, GenKind::Z, hat_z(colf));
    // X3 row; the Y-column subscript is (w a_w - a) ^ s, written hat_w
    case 2 * 8 + 4: return entry(-1, GenKind::H, wedge_s(hat_w(colf)));
    case 2 * 8 + 5: return entry(1, GenKind::Z, hat_w(colf));
    case 2 * 8 + 6: return entry(1, GenKind::G, hat_w(colf));
    case 2 * 8 + 7: return entry(1, GenKind::H, hat_w(colf));
    // X4 row
    case 3 * 8 + 0: return entry(-1, GenKind::X1, {});
    case 3 * 8 + 1: return entry(-1, GenKind::X2, {});
    case 3 * 8 + 4: return entry(2, GenKind::H, wedge_s(colf));
    case 3 * 8 + 5: return entry(-1, GenKind::Z, colf);
    case 3 * 8 + 7: return entry(-3, GenKind::H, colf);
    // Y row
    case 4 * 8 + 0: return entry(1, GenKind::H, rowf.derivative(kZ));
    case 4 * 8 + 1: return entry(2, GenKind::H, z * rowf.derivative(kZ));
    case 4 * 8 + 2: return entry(1, GenKind::H, wedge_s(hat_w(rowf)));
    case 4 * 8 + 3: return entry(-2, GenKind::H, wedge_s(rowf));
    case 4 * 8 + 5: return entry(1, GenKind::H, wedge(rowf, colf));
    case 4 * 8 + 6: return entry(1, GenKind::H, wedge_s(wedge(rowf, colf)));
    // Z row
    case 5 * 8 + 0: return entry(1, GenKind::Y, rowf.derivative(kZ));
    case 5 * 8 + 1: return entry(1, GenKind::Y, hat_z(rowf) * 2.0 + rowf);
    case 5 * 8 + 2: return entry(-1, GenKind::Z, hat_w(rowf));
    case 5 * 8 + 3: return entry(1, GenKind::Z, rowf);
    case 5 * 8 + 4: return entry(-1, GenKind::H, wedge(colf, rowf));
    case 5 * 8 + 5: return entry(-1, GenKind::H, wedge_s(wedge(rowf, colf)));
    case 5 * 8 + 6: return entry(1, GenKind::Z, wedge(colf, rowf));
    // G row
    case 6 * 8 + 0: return entry(-1, GenKind::Z, rowf.derivative(kZ));
    case 6 * 8 + 1: return entry(-2, GenKind::Z, hat_z(rowf));
    case 6 * 8 + 2: return entry(-1, GenKind::G, hat_w(rowf));
    case 6 * 8 + 4: return entry(-1, GenKind::H, wedge_s(wedge(colf, rowf)));
    case 6 * 8 + 5: return entry(-1, GenKind::Z, wedge(rowf, colf));
    case 6 * 8 + 6: return entry(1, GenKind::G, wedge(colf, rowf));
    case 6 * 8 + 7: return entry(1, GenKind::H, wedge(colf, rowf));
    // H row
    case 7 * 8 + 2: return entry(-1, GenKind::H, hat_w(rowf));
    case 7 * 8 + 3: return entry(3, GenKind::H, rowf);
    case 7 * 8 + 6: return entry(-1, GenKind::H, wedge(rowf, colf));
    default: return zero;
  }
}

TableCheck table_check(const GeneratorSpec& a, const GeneratorSpec& b,
                       const TableEntry& expected, const std::vector<JetPoint5>& points,
                       double tol) {
  const FieldComponents lhs = bracket(generator_polynomials(a), generator_polynomials(b));
  const FieldComponents rhs = expected.components();
  double dev = 0, scale = 0;
  for (const JetPoint5& at : points) {
    for (int k = 0; k < 5; ++k) {
      const complex l = lhs[k].eval(at), r = rhs[k].eval(at);
      dev = std::max(dev, std::abs(l - r));
      scale = std::max({scale, std::abs(l), std::abs(r)});
    }
  }
  return {dev < tol * (1.0 + scale), dev, scale};
}

TableSuiteResult table_suite(const std::array<Poly, 4>& row_coeffs,
                             const std::array<Poly, 4>& col_coeffs,
                             const std::vector<JetPoint5>& points, double tol) {
  auto spec_for = [](int idx, const Poly& coeff) -> GeneratorSpec {
    switch (idx) {
      case 0: return GeneratorSpec::x1();
      case 1: return GeneratorSpec::x2();
      case 2: return GeneratorSpec::x3();
      case 3: return GeneratorSpec::x4();
      case 4: return GeneratorSpec::y(coeff);
      case 5: return GeneratorSpec::z(coeff);
      case 6: return GeneratorSpec::g(coeff);
      default: return GeneratorSpec::h(coeff);
    }
  };
  TableSuiteResult res;
  for (int row = 0; row < 8; ++row) {
    const Poly rowf = row >= 4 ? row_coeffs[row - 4] : Poly{};
    for (int col = 0; col < 8; ++col) {
      const Poly colf = col >= 4 ? col_coeffs[col - 4] : Poly{};
      const TableEntry exp = table_expected(row, col, rowf, colf);
      const TableCheck chk =
          table_check(spec_for(row, rowf), spec_for(col, colf), exp, points, tol);
      ++res.cells_checked;
      res.max_deviation = std::max(res.max_deviation, chk.max_deviation);
      if (!chk.pass) {
        ++res.cells_failed;
        res.failing_cells.emplace_back(row, col);
      }
    }
  }
  return res;
}

namespace {

// Conjugate-function evaluation: fbar(q1, q2) = conj(f(conj q1, conj q2))
// for polynomials stored in variables (z=2, w=3) acting as (z1, z2).
complex eval_holo(const Poly& f, complex z1, complex z2) {
  return f.eval({0, 0, z1, z2, 0});
}

complex eval_anti(const Poly& f, complex z1b, complex z2b) {
  return std::conj(f.eval({0, 0, std::conj(z1b), std::conj(z2b), 0}));
}

}  // namespace

complex characteristic_cma(const CmaGenerator& gen, const Jet& u) {
  if (u.max_order < 1)
    throw Error(ErrorKind::InsufficientJetOrder, "characteristic needs order-1 jets");
  if (u.frame != FrameId::KahlerOriginal && u.frame != FrameId::Generic)
    throw Error(ErrorKind::FrameMismatch, "characteristic expects the Kahler frame");
  const Point4& zp = u.base_point;
  const Poly o1 = gen.omega.derivative(kZ), o2 = gen.omega.derivative(kW);
  const complex O1 = eval_holo(o1, zp[0], zp[2]);
  const complex O2 = eval_holo(o2, zp[0], zp[2]);
  const complex O1b = eval_anti(o1, zp[1], zp[3]);
  const complex O2b = eval_anti(o2, zp[1], zp[3]);
  const complex H = eval_holo(gen.h, zp[0], zp[2]) + eval_anti(gen.h, zp[1], zp[3]);
  const complex u1 = u.d(0), u1b = u.d(1), u2 = u.d(2), u2b = u.d(3);
  return kI * (u1 * O2 - u2 * O1 + u2b * O1b - u1b * O2b) +
         gen.c1 * (u.value() - zp[0] * u1 - zp[1] * u1b) -
         kI * gen.c2 * (zp[2] * u2 - zp[3] * u2b) + H;
}

VectorFieldSample cma_generator_components(const CmaGenerator& gen, const Point4& z,
                                           complex u_value) {
  const Poly o1 = gen.omega.derivative(kZ), o2 = gen.omega.derivative(kW);
  const complex O1 = eval_holo(o1, z[0], z[2]);
  const complex O2 = eval_holo(o2, z[0], z[2]);
  const complex O1b = eval_anti(o1, z[1], z[3]);
  const complex O2b = eval_anti(o2, z[1], z[3]);
  const complex H = eval_holo(gen.h, z[0], z[2]) + eval_anti(gen.h, z[1], z[3]);
  return {-kI * O2 + gen.c1 * z[0], kI * O2b + gen.c1 * z[1],
          kI * O1 + kI * gen.c2 * z[2], -kI * O1b - kI * gen.c2 * z[3],
          gen.c1 * u_value + H};
}

KillingDeterminant killing_determinant(const KillingConditionInput& in,
                                       KillingCondition which, double tol) {
  Eigen::Matrix4cd m;
  for (int j = 0; j < 4; ++j) {
    switch (which) {
      case KillingCondition::PhaseVandermonde: {
        const double mu = in.mu[j];
        m(j, 0) = 1;
        m(j, 1) = std::exp(complex(0, -2 * mu));
        m(j, 2) = std::exp(complex(0, 2 * mu));
        m(j, 3) = std::exp(complex(0, -4 * mu));
        break;
      }
      case KillingCondition::HeavenEqualRatios: {
        const complex b = in.beta[j], g = in.gamma[j];
        if (std::abs(b) < 1e-300)
          throw Error(ErrorKind::DivisionByZero, "beta must be nonzero");
        if (std::abs(g - b) < 1e-300)
          throw Error(ErrorKind::DivisionByZero, "gamma = beta is degenerate");
        m(j, 0) = b / (g - b);
        m(j, 1) = 1;
        m(j, 2) = g / b;
        m(j, 3) = -g * g / (b * b);
        break;
      }
      case KillingCondition::HeavenZeroRatios: {
        const complex b = in.beta[j], g = in.gamma[j];
        if (std::abs(b) < 1e-300)
          throw Error(ErrorKind::DivisionByZero, "beta must be nonzero");
        if (std::abs(g) < 1e-300)
          throw Error(ErrorKind::DivisionByZero, "gamma must be nonzero");
        m(j, 0) = b / g;
        m(j, 1) = 1;
        m(j, 2) = g / b;
        m(j, 3) = -g * g / (b * b);
        break;
      }
    }
  }
  double row_norm_product = 1;
  for (int j = 0; j < 4; ++j) row_norm_product *= m.row(j).norm();
  const complex det = m.determinant();
  return {det, row_norm_product, std::abs(det) > tol * row_norm_product};
}

TheoremReport theorem_applicability(families::FamilyId family,
                                    const ExpSumPotential& pot) {
  using families::FamilyId;
  if (pot.frame != families::family_frame(family))
    throw Error(ErrorKind::FrameMismatch, "potential frame does not match family");
  TheoremReport rep;
  const size_t n = pot.terms.size();
  rep.enough_terms = n >= 4;
  if (!rep.enough_terms) {
    rep.reason = "fewer than four terms (n = " + std::to_string(n) +
                 "); Killing vectors may exist";
    return rep;
  }

  const bool hcma = family == FamilyId::HcmaDilat || family == FamilyId::HcmaTrans;
  KillingConditionInput in;
  rep.exponents_nonzero = true;
  for (int j = 0; j < 4; ++j) {
    const Vec4c& e = pot.terms[j].exponents;
    if (hcma) {
      if (std::abs(e[0]) < 1e-12) rep.exponents_nonzero = false;
      in.mu[j] = std::arg(e[0]);
    } else {
      if (std::abs(e[1]) < 1e-12) rep.exponents_nonzero = false;
      in.beta[j] = e[1];
      in.gamma[j] = e[2];
    }
  }
  if (!rep.exponents_nonzero) {
    rep.reason = hcma ? "a leading exponent alpha_j vanishes among the first four terms"
                      : "a leading exponent beta_j vanishes among the first four terms";
    return rep;
  }

  const KillingCondition cond =
      hcma ? KillingCondition::PhaseVandermonde
           : (family == FamilyId::HeavenEqual ? KillingCondition::HeavenEqualRatios
                                              : KillingCondition::HeavenZeroRatios);
  const KillingDeterminant kd = killing_determinant(in, cond);
  rep.determinant = kd.det;
  rep.determinant_ok = kd.nondegenerate;
  if (!rep.determinant_ok) {
    rep.reason = "phase-independence determinant is degenerate";
    return rep;
  }
  rep.no_killing_vectors = true;
  rep.reason = "independence hypotheses hold for the first four terms";
  return rep;
}

}  // namespace heavenly::symmetry

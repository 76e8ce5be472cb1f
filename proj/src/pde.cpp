#include "heavenly/pde.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace heavenly::pde {

namespace {

const complex kI(0, 1);

// One monomial of an equation: signed value plus magnitude proxy built from
// the jet's term-mass companions. Accumulating both sides from the same
// expression keeps each transcription single-source.
struct Mono {
  complex v;
  double m;
};

Mono e(const Jet& j, int a) {
  MultiIndex mi{0, 0, 0, 0};
  mi[a] = 1;
  return {j.at(mi), j.mag(mi)};
}

Mono e(const Jet& j, int a, int b) {
  MultiIndex mi{0, 0, 0, 0};
  mi[a] += 1;
  mi[b] += 1;
  return {j.at(mi), j.mag(mi)};
}

Mono e(const Jet& j, const MultiIndex& mi) { return {j.at(mi), j.mag(mi)}; }

Mono operator*(const Mono& x, const Mono& y) { return {x.v * y.v, x.m * y.m}; }
Mono operator*(complex c, const Mono& x) { return {c * x.v, std::abs(c) * x.m}; }
Mono operator-(const Mono& x) { return {-x.v, x.m}; }

struct Accum {
  complex sum = 0;
  double mag = 0;
  void operator+=(const Mono& t) {
    sum += t.v;
    mag += t.m;
  }
  ResidualValue done() const { return {sum, mag}; }
};

void require_order(const Jet& j, int order, const char* what) {
  if (j.max_order < order)
    throw Error(ErrorKind::InsufficientJetOrder,
                std::string(what) + " needs jet order >= " + std::to_string(order));
}

void require_frame(const Jet& j, FrameId f, const char* what) {
  if (j.frame != f && j.frame != FrameId::Generic)
    throw Error(ErrorKind::FrameMismatch, std::string(what) + " expects frame " +
                                              frame_name(f) + ", got " +
                                              frame_name(j.frame));
}

}  // namespace

double ResidualValue::normalized() const {
  const double r = std::abs(raw);
  if (r == 0) return 0;
  return r / magnitude;  // magnitude >= |raw| whenever raw != 0
}

std::string equation_name(EquationId id) {
  switch (id) {
    case EquationId::Cma: return "cma";
    case EquationId::Hcma: return "hcma";
    case EquationId::LegendreHcma: return "legendre-hcma";
    case EquationId::PartnerConstraints: return "partner-constraints";
    case EquationId::TranslationalGeneric: return "translational-generic";
    case EquationId::TranslationalLinear: return "translational-linear";
    case EquationId::DilatationalNonlinear: return "dilatational-nonlinear";
    case EquationId::DilatationalLinear: return "dilatational-linear";
    case EquationId::SecondHeavenly: return "second-heavenly";
    case EquationId::SecondHeavenlyLinearized: return "second-heavenly-linearized";
    case EquationId::LegendreSecondHeavenly: return "legendre-second-heavenly";
    case EquationId::EqualPartnerReduction: return "equal-partner-reduction";
    case EquationId::ZeroPartnerReduction: return "zero-partner-reduction";
    case EquationId::HeavenEqualLinear: return "heaven-equal-linear";
    case EquationId::HeavenZeroLinear: return "heaven-zero-linear";
  }
  return "unknown";
}

FrameId equation_frame(EquationId id) {
  switch (id) {
    case EquationId::Cma:
    case EquationId::Hcma:
      return FrameId::KahlerOriginal;
    case EquationId::LegendreHcma:
    case EquationId::PartnerConstraints:
    case EquationId::TranslationalGeneric:
    case EquationId::TranslationalLinear:
    case EquationId::DilatationalNonlinear:
    case EquationId::DilatationalLinear:
      return FrameId::HcmaLegendre;
    case EquationId::SecondHeavenly:
    case EquationId::SecondHeavenlyLinearized:
    case EquationId::EqualPartnerReduction:
    case EquationId::ZeroPartnerReduction:
      return FrameId::HeavenOriginal;
    case EquationId::LegendreSecondHeavenly:
    case EquationId::HeavenEqualLinear:
    case EquationId::HeavenZeroLinear:
      return FrameId::HeavenLegendre;
  }
  return FrameId::Generic;
}

int equation_component_count(EquationId id) {
  switch (id) {
    case EquationId::DilatationalLinear: return 6;
    case EquationId::PartnerConstraints:
    case EquationId::TranslationalGeneric:
    case EquationId::TranslationalLinear:
    case EquationId::DilatationalNonlinear:
    case EquationId::HeavenEqualLinear:
    case EquationId::HeavenZeroLinear:
      return 3;
    case EquationId::EqualPartnerReduction:
    case EquationId::ZeroPartnerReduction:
      return 2;
    default:
      return 1;
  }
}

std::string component_label(EquationId id, int component) {
  static const char* dil_lin[6] = {
      "v_ppb = a v_p + ab v_pb",
      "v_pp = (ab + i bb) v_p - i ab v_2",
      "v_pbpb = (a - i b) v_pb + i a v_2b",
      "v_p2b = b v_p - i ab v_pb + ab v_2b",
      "v_pb2 = bb v_pb + i a v_p + a v_2",
      "v_22b = (a + ib) v_p + b v_2 + (ab - i bb) v_pb + bb v_2b",
  };
  static const char* heaven_eq[3] = {"u_rt + u_rr - u_xt", "u_xx + u_rz",
                                     "u_rx + u_xt + u_tz"};
  static const char* heaven_ze[3] = {"u_rr - u_tx", "u_rx + u_tz", "u_rz + u_xx"};
  switch (id) {
    case EquationId::DilatationalLinear: return dil_lin[component];
    case EquationId::HeavenEqualLinear: return heaven_eq[component];
    case EquationId::HeavenZeroLinear: return heaven_ze[component];
    default: break;
  }
  if (equation_component_count(id) == 1) return equation_name(id);
  return equation_name(id) + "[" + std::to_string(component) + "]";
}

ResidualValue cma_residual(const Jet& u, complex eps) {
  require_order(u, 2, "cma");
  Accum r;
  r += e(u, 0, 1) * e(u, 2, 3);     // u_11b u_22b
  r += -(e(u, 0, 3) * e(u, 1, 2)); // u_12b u_21b
  r += Mono{-eps, std::abs(eps)};
  return r.done();
}

ResidualValue leg_hcma_residual(const Jet& v) {
  require_order(v, 2, "legendre-hcma");
  require_frame(v, FrameId::HcmaLegendre, "legendre-hcma");
  Accum r;
  r += e(v, 0, 1) * e(v, 2, 3);     // v_ppb v_22b
  r += -(e(v, 0, 3) * e(v, 1, 2)); // v_p2b v_pb2
  r += -(e(v, 0, 1) * e(v, 0, 1)); // v_ppb^2
  r += e(v, 0, 0) * e(v, 1, 1);     // v_pp v_pbpb
  return r.done();
}

std::vector<ResidualValue> partner_constraint_residuals(const Jet& phi, const Jet& v) {
  require_order(v, 2, "partner constraints");
  require_order(phi, 1, "partner constraints (characteristic)");
  Accum r1, r2, r3;
  // phi_p v_pbpb - i phi_2b v_ppb - phi_pb (v_ppb - i v_p2b)
  r1 += e(phi, 0) * e(v, 1, 1);
  r1 += -kI * (e(phi, 3) * e(v, 0, 1));
  r1 += -(e(phi, 1) * e(v, 0, 1));
  r1 += kI * (e(phi, 1) * e(v, 0, 3));
  // phi_pb v_pp + i phi_2 v_ppb - phi_p (v_ppb + i v_pb2)
  r2 += e(phi, 1) * e(v, 0, 0);
  r2 += kI * (e(phi, 2) * e(v, 0, 1));
  r2 += -(e(phi, 0) * e(v, 0, 1));
  r2 += -kI * (e(phi, 0) * e(v, 1, 2));
  // phi_p phi_pb (2 v_ppb - v_22b) - (phi_pb^2 + i phi_pb phi_2b) v_pp
  //  - (phi_p^2 - i phi_p phi_2) v_pbpb
  //  + (phi_2 phi_2b + i phi_2b phi_p - i phi_2 phi_pb) v_ppb
  r3 += 2.0 * (e(phi, 0) * e(phi, 1) * e(v, 0, 1));
  r3 += -(e(phi, 0) * e(phi, 1) * e(v, 2, 3));
  r3 += -(e(phi, 1) * e(phi, 1) * e(v, 0, 0));
  r3 += -kI * (e(phi, 1) * e(phi, 3) * e(v, 0, 0));
  r3 += -(e(phi, 0) * e(phi, 0) * e(v, 1, 1));
  r3 += kI * (e(phi, 0) * e(phi, 2) * e(v, 1, 1));
  r3 += e(phi, 2) * e(phi, 3) * e(v, 0, 1);
  r3 += kI * (e(phi, 3) * e(phi, 0) * e(v, 0, 1));
  r3 += -kI * (e(phi, 2) * e(phi, 1) * e(v, 0, 1));
  return {r1.done(), r2.done(), r3.done()};
}

std::vector<ResidualValue> translational_generic_residuals(const Jet& v, complex hp,
                                                           complex hbp) {
  require_order(v, 2, "translational constraints");
  require_frame(v, FrameId::HcmaLegendre, "translational constraints");
  Accum r1, r2, r3;
  // v_pbpb - (i hb' + 1) v_ppb + i v_p2b
  r1 += e(v, 1, 1);
  r1 += -kI * hbp * e(v, 0, 1);
  r1 += -e(v, 0, 1);
  r1 += kI * e(v, 0, 3);
  // v_pp + (i h' - 1) v_ppb - i v_pb2
  r2 += e(v, 0, 0);
  r2 += kI * hp * e(v, 0, 1);
  r2 += -e(v, 0, 1);
  r2 += -kI * e(v, 1, 2);
  // 2 v_ppb - v_22b - (i hb' + 1) v_pp + (i h' - 1) v_pbpb
  //  + [h' hb' - i (h' - hb')] v_ppb
  r3 += 2.0 * e(v, 0, 1);
  r3 += -e(v, 2, 3);
  r3 += -kI * hbp * e(v, 0, 0);
  r3 += -e(v, 0, 0);
  r3 += kI * hp * e(v, 1, 1);
  r3 += -e(v, 1, 1);
  r3 += (hp * hbp) * e(v, 0, 1);
  r3 += -kI * hp * e(v, 0, 1);
  r3 += kI * hbp * e(v, 0, 1);
  return {r1.done(), r2.done(), r3.done()};
}

std::vector<ResidualValue> translational_linear_residuals(const Jet& v, complex nu) {
  return translational_generic_residuals(v, nu, std::conj(nu));
}

std::vector<ResidualValue> dilatational_nonlinear_residuals(const Jet& v) {
  require_order(v, 2, "dilatational constraints");
  require_frame(v, FrameId::HcmaLegendre, "dilatational constraints");
  Accum r1, r2, r3;
  // v_p v_pbpb - i v_2b v_ppb - v_pb (v_ppb - i v_p2b)
  r1 += e(v, 0) * e(v, 1, 1);
  r1 += -kI * (e(v, 3) * e(v, 0, 1));
  r1 += -(e(v, 1) * e(v, 0, 1));
  r1 += kI * (e(v, 1) * e(v, 0, 3));
  // v_pb v_pp + i v_2 v_ppb - v_p (v_ppb + i v_pb2)
  r2 += e(v, 1) * e(v, 0, 0);
  r2 += kI * (e(v, 2) * e(v, 0, 1));
  r2 += -(e(v, 0) * e(v, 0, 1));
  r2 += -kI * (e(v, 0) * e(v, 1, 2));
  // (v_2 v_2b + i v_2b v_p - i v_2 v_pb + 2 v_p v_pb) v_ppb
  //  - (v_pb^2 + i v_pb v_2b) v_pp - (v_p^2 - i v_p v_2) v_pbpb - v_p v_pb v_22b
  r3 += e(v, 2) * e(v, 3) * e(v, 0, 1);
  r3 += kI * (e(v, 3) * e(v, 0) * e(v, 0, 1));
  r3 += -kI * (e(v, 2) * e(v, 1) * e(v, 0, 1));
  r3 += 2.0 * (e(v, 0) * e(v, 1) * e(v, 0, 1));
  r3 += -(e(v, 1) * e(v, 1) * e(v, 0, 0));
  r3 += -kI * (e(v, 1) * e(v, 3) * e(v, 0, 0));
  r3 += -(e(v, 0) * e(v, 0) * e(v, 1, 1));
  r3 += kI * (e(v, 0) * e(v, 2) * e(v, 1, 1));
  r3 += -(e(v, 0) * e(v, 1) * e(v, 2, 3));
  return {r1.done(), r2.done(), r3.done()};
}

std::vector<ResidualValue> dilatational_linear_residuals(const Jet& v, complex a,
                                                         complex b) {
  require_order(v, 2, "dilatational linear system");
  require_frame(v, FrameId::HcmaLegendre, "dilatational linear system");
  const complex ab = std::conj(a), bb = std::conj(b);
  Accum r1, r2, r3, r4, r5, r6;
  r1 += e(v, 0, 1);
  r1 += -a * e(v, 0);
  r1 += -ab * e(v, 1);

  r2 += e(v, 0, 0);
  r2 += -(ab + kI * bb) * e(v, 0);
  r2 += kI * ab * e(v, 2);

  r3 += e(v, 1, 1);
  r3 += -(a - kI * b) * e(v, 1);
  r3 += -kI * a * e(v, 3);

  r4 += e(v, 0, 3);
  r4 += -b * e(v, 0);
  r4 += kI * ab * e(v, 1);
  r4 += -ab * e(v, 3);

  r5 += e(v, 1, 2);
  r5 += -bb * e(v, 1);
  r5 += -kI * a * e(v, 0);
  r5 += -a * e(v, 2);

  r6 += e(v, 2, 3);
  r6 += -(a + kI * b) * e(v, 0);
  r6 += -b * e(v, 2);
  r6 += -(ab - kI * bb) * e(v, 1);
  r6 += -bb * e(v, 3);
  return {r1.done(), r2.done(), r3.done(), r4.done(), r5.done(), r6.done()};
}

ResidualValue heav2_residual(const Jet& th) {
  require_order(th, 2, "second heavenly");
  require_frame(th, FrameId::HeavenOriginal, "second heavenly");
  Accum r;
  r += e(th, 0, 3);                   // theta_xw
  r += e(th, 1, 2);                   // theta_yz
  r += e(th, 0, 0) * e(th, 1, 1);     // theta_xx theta_yy
  r += -(e(th, 0, 1) * e(th, 0, 1)); // theta_xy^2
  return r.done();
}

ResidualValue defsym2_residual(const Jet& th, const Jet& phi) {
  require_order(th, 2, "linearized second heavenly (background)");
  require_order(phi, 2, "linearized second heavenly (characteristic)");
  Accum r;
  r += e(phi, 0, 3);
  r += e(phi, 1, 2);
  r += e(th, 1, 1) * e(phi, 0, 0);
  r += e(th, 0, 0) * e(phi, 1, 1);
  r += -2.0 * (e(th, 0, 1) * e(phi, 0, 1));
  return r.done();
}

ResidualValue leg_heav2_residual(const Jet& u) {
  require_order(u, 2, "legendre second heavenly");
  require_frame(u, FrameId::HeavenLegendre, "legendre second heavenly");
  // u_tt (u_xx + u_rz) + u_xt (u_rr - u_xt) - u_rt (u_rx + u_tz)
  Accum r;
  r += e(u, 0, 0) * e(u, 2, 2);
  r += e(u, 0, 0) * e(u, 1, 3);
  r += e(u, 0, 2) * e(u, 1, 1);
  r += -(e(u, 0, 2) * e(u, 0, 2));
  r += -(e(u, 0, 1) * e(u, 1, 2));
  r += -(e(u, 0, 1) * e(u, 0, 3));
  return r.done();
}

std::vector<ResidualValue> equal_partner_residuals(const Jet& th) {
  require_order(th, 2, "equal-partner reduction");
  require_frame(th, FrameId::HeavenOriginal, "equal-partner reduction");
  Accum r1, r2;
  // -theta_yw + theta_ww + theta_yy theta_wx - theta_xy theta_wy
  r1 += -e(th, 1, 3);
  r1 += e(th, 3, 3);
  r1 += e(th, 1, 1) * e(th, 0, 3);
  r1 += -(e(th, 0, 1) * e(th, 1, 3));
  // theta_xw + theta_wz + theta_xx theta_wy - theta_xy theta_wx
  r2 += e(th, 0, 3);
  r2 += e(th, 2, 3);
  r2 += e(th, 0, 0) * e(th, 1, 3);
  r2 += -(e(th, 0, 1) * e(th, 0, 3));
  return {r1.done(), r2.done()};
}

std::vector<ResidualValue> zero_partner_residuals(const Jet& th) {
  require_order(th, 2, "zero-partner reduction");
  require_frame(th, FrameId::HeavenOriginal, "zero-partner reduction");
  Accum r1, r2;
  // theta_ww + theta_yy theta_wx - theta_xy theta_wy
  r1 += e(th, 3, 3);
  r1 += e(th, 1, 1) * e(th, 0, 3);
  r1 += -(e(th, 0, 1) * e(th, 1, 3));
  // theta_wz - theta_xy theta_wx + theta_xx theta_wy
  r2 += e(th, 2, 3);
  r2 += -(e(th, 0, 1) * e(th, 0, 3));
  r2 += e(th, 0, 0) * e(th, 1, 3);
  return {r1.done(), r2.done()};
}

std::vector<ResidualValue> heaven_equal_linear_residuals(const Jet& u) {
  require_order(u, 2, "heaven-equal linear system");
  require_frame(u, FrameId::HeavenLegendre, "heaven-equal linear system");
  Accum r1, r2, r3;
  r1 += e(u, 0, 1);
  r1 += e(u, 1, 1);
  r1 += -e(u, 0, 2);
  r2 += e(u, 2, 2);
  r2 += e(u, 1, 3);
  r3 += e(u, 1, 2);
  r3 += e(u, 0, 2);
  r3 += e(u, 0, 3);
  return {r1.done(), r2.done(), r3.done()};
}

std::vector<ResidualValue> heaven_zero_linear_residuals(const Jet& u) {
  require_order(u, 2, "heaven-zero linear system");
  require_frame(u, FrameId::HeavenLegendre, "heaven-zero linear system");
  Accum r1, r2, r3;
  r1 += e(u, 1, 1);
  r1 += -e(u, 0, 2);
  r2 += e(u, 1, 2);
  r2 += e(u, 0, 3);
  r3 += e(u, 1, 3);
  r3 += e(u, 2, 2);
  return {r1.done(), r2.done(), r3.done()};
}

std::vector<ResidualValue> residual(EquationId id, const Jet& primary,
                                    const Jet* secondary, const EquationParams& p) {
  switch (id) {
    case EquationId::Cma: return {cma_residual(primary, p.eps)};
    case EquationId::Hcma: return {cma_residual(primary, complex(-1, 0))};
    case EquationId::LegendreHcma: return {leg_hcma_residual(primary)};
    case EquationId::PartnerConstraints:
      if (!secondary)
        throw Error(ErrorKind::InvalidArgument,
                    "partner constraints need (characteristic, potential) jets");
      return partner_constraint_residuals(primary, *secondary);
    case EquationId::TranslationalGeneric:
      return translational_generic_residuals(primary, p.hprime, p.hbarprime);
    case EquationId::TranslationalLinear:
      return translational_linear_residuals(primary, p.nu);
    case EquationId::DilatationalNonlinear:
      return dilatational_nonlinear_residuals(primary);
    case EquationId::DilatationalLinear:
      return dilatational_linear_residuals(primary, p.a, p.b);
    case EquationId::SecondHeavenly: return {heav2_residual(primary)};
    case EquationId::SecondHeavenlyLinearized:
      if (!secondary)
        throw Error(ErrorKind::InvalidArgument,
                    "linearized equation needs (background, characteristic) jets");
      return {defsym2_residual(primary, *secondary)};
    case EquationId::LegendreSecondHeavenly: return {leg_heav2_residual(primary)};
    case EquationId::EqualPartnerReduction: return equal_partner_residuals(primary);
    case EquationId::ZeroPartnerReduction: return zero_partner_residuals(primary);
    case EquationId::HeavenEqualLinear: return heaven_equal_linear_residuals(primary);
    case EquationId::HeavenZeroLinear: return heaven_zero_linear_residuals(primary);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown equation id");
}

DeterminingResidual determining_residual(const Jet& background, const Jet& phi) {
  require_order(background, 2, "determining equation (background)");
  require_order(phi, 2, "determining equation (characteristic)");
  if (background.frame == FrameId::HeavenOriginal ||
      background.frame == FrameId::Generic) {
    const ResidualValue r = defsym2_residual(background, phi);
    const ResidualValue f = heav2_residual(background);
    return {r.raw, r.normalized(), f.normalized()};
  }
  if (background.frame == FrameId::KahlerOriginal) {
    Accum r;
    const Jet& u = background;
    r += e(u, 2, 3) * e(phi, 0, 1);     // u_22b phi_11b
    r += e(u, 0, 1) * e(phi, 2, 3);     // u_11b phi_22b
    r += -(e(u, 1, 2) * e(phi, 0, 3)); // u_21b phi_12b
    r += -(e(u, 0, 3) * e(phi, 1, 2)); // u_12b phi_21b
    const ResidualValue rv = r.done();
    // The determining equation is shared by both signs of the field equation;
    // warn against whichever the background is closer to solving.
    const double f = std::min(cma_residual(u, complex(1, 0)).normalized(),
                              cma_residual(u, complex(-1, 0)).normalized());
    return {rv.raw, rv.normalized(), f};
  }
  throw Error(ErrorKind::FrameMismatch,
              "determining equation requires a theta-frame or Kahler-frame jet");
}

std::array<ResidualValue, 2> recursion_residual(const Jet& background, const Jet& phi,
                                                const Jet& psi) {
  require_order(background, 2, "recursion relations (potential)");
  require_order(phi, 1, "recursion relations");
  require_order(psi, 1, "recursion relations");
  if (background.frame == FrameId::HeavenOriginal ||
      background.frame == FrameId::Generic) {
    const Jet& th = background;
    Accum r1, r2;
    // psi_y - (phi_w + theta_yy phi_x - theta_xy phi_y)
    r1 += e(psi, 1);
    r1 += -e(phi, 3);
    r1 += -(e(th, 1, 1) * e(phi, 0));
    r1 += e(th, 0, 1) * e(phi, 1);
    // psi_x + (phi_z - theta_xy phi_x + theta_xx phi_y)
    r2 += e(psi, 0);
    r2 += e(phi, 2);
    r2 += -(e(th, 0, 1) * e(phi, 0));
    r2 += e(th, 0, 0) * e(phi, 1);
    return {r1.done(), r2.done()};
  }
  if (background.frame == FrameId::KahlerOriginal) {
    const Jet& u = background;
    Accum r1, r2;
    // psi_1 - i (u_12b phi_1b - u_11b phi_2b)
    r1 += e(psi, 0);
    r1 += -kI * (e(u, 0, 3) * e(phi, 1));
    r1 += kI * (e(u, 0, 1) * e(phi, 3));
    // psi_2 - i (u_22b phi_1b - u_21b phi_2b)
    r2 += e(psi, 2);
    r2 += -kI * (e(u, 2, 3) * e(phi, 1));
    r2 += kI * (e(u, 1, 2) * e(phi, 3));
    return {r1.done(), r2.done()};
  }
  throw Error(ErrorKind::FrameMismatch,
              "recursion relations require a theta-frame or Kahler-frame jet");
}

ResidualValue operator_commutator_residual(const Jet& th, const Jet& test) {
  require_order(th, 3, "operator commutator");
  require_order(test, 1, "operator commutator (test function)");
  require_frame(th, FrameId::HeavenOriginal, "operator commutator");
  // (field residual)_y (test)_x - (field residual)_x (test)_y with
  //  (field)_x = th_xxw + th_xyz + th_xxx th_yy + th_xx th_xyy - 2 th_xy th_xxy
  //  (field)_y = th_xyw + th_yyz + th_xxy th_yy + th_xx th_yyy - 2 th_xy th_xyy
  const Mono tx = e(test, 0), ty = e(test, 1);
  Accum r;
  r += e(th, MultiIndex{1, 1, 0, 1}) * tx;
  r += e(th, MultiIndex{0, 2, 1, 0}) * tx;
  r += e(th, MultiIndex{2, 1, 0, 0}) * e(th, 1, 1) * tx;
  r += e(th, 0, 0) * e(th, MultiIndex{0, 3, 0, 0}) * tx;
  r += -2.0 * (e(th, 0, 1) * e(th, MultiIndex{1, 2, 0, 0}) * tx);
  r += -(e(th, MultiIndex{2, 0, 0, 1}) * ty);
  r += -(e(th, MultiIndex{1, 1, 1, 0}) * ty);
  r += -(e(th, MultiIndex{3, 0, 0, 0}) * e(th, 1, 1) * ty);
  r += -(e(th, 0, 0) * e(th, MultiIndex{1, 2, 0, 0}) * ty);
  r += 2.0 * (e(th, 0, 1) * e(th, MultiIndex{2, 1, 0, 0}) * ty);
  return r.done();
}

namespace {

struct SuiteEquation {
  EquationId id;
  EquationParams params;
};

std::vector<SuiteEquation> suite_equations(families::FamilyId family,
                                           const families::FamilyParams& params) {
  using families::FamilyId;
  switch (family) {
    case FamilyId::HcmaDilat: {
      const auto& p = std::get<families::HcmaDilatParams>(params);
      EquationParams ep;
      ep.a = p.a;
      ep.b = p.b;
      return {{EquationId::DilatationalLinear, ep},
              {EquationId::DilatationalNonlinear, {}},
              {EquationId::LegendreHcma, {}}};
    }
    case FamilyId::HcmaTrans: {
      const auto& p = std::get<families::HcmaTransParams>(params);
      EquationParams ep;
      ep.nu = p.nu;
      return {{EquationId::TranslationalLinear, ep}, {EquationId::LegendreHcma, {}}};
    }
    case FamilyId::HeavenEqual:
      return {{EquationId::HeavenEqualLinear, {}},
              {EquationId::LegendreSecondHeavenly, {}}};
    case FamilyId::HeavenZero:
      return {{EquationId::HeavenZeroLinear, {}},
              {EquationId::LegendreSecondHeavenly, {}}};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown family");
}

}  // namespace

ResidualReport residual_suite(families::FamilyId family,
                              const families::FamilyParams& params,
                              const ExpSumPotential& pot,
                              const std::vector<Point4>& points, int workers) {
  if (pot.frame != families::family_frame(family))
    throw Error(ErrorKind::FrameMismatch, "potential frame does not match family");
  const auto eqs = suite_equations(family, params);

  ResidualReport rep;
  rep.family = family;
  rep.point_count = static_cast<int>(points.size());
  for (const auto& se : eqs)
    for (int c = 0; c < equation_component_count(se.id); ++c)
      rep.rows.push_back({se.id, c, component_label(se.id, c), 0, 0, 0, {}});

  const size_t n_rows = rep.rows.size();
  std::vector<std::vector<ResidualValue>> per_point(points.size());

  auto run_range = [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      const Jet J = jet(pot, points[i], 2);
      std::vector<ResidualValue> vals;
      vals.reserve(n_rows);
      for (const auto& se : eqs)
        for (ResidualValue rv : residual(se.id, J, nullptr, se.params))
          vals.push_back(rv);
      per_point[i] = std::move(vals);
    }
  };

  if (workers <= 1 || points.size() < 2) {
    run_range(0, points.size());
  } else {
    const size_t w = std::min<size_t>(workers, points.size());
    std::vector<std::thread> threads;
    const size_t chunk = (points.size() + w - 1) / w;
    for (size_t t = 0; t < w; ++t) {
      const size_t lo = t * chunk, hi = std::min(points.size(), lo + chunk);
      if (lo < hi) threads.emplace_back(run_range, lo, hi);
    }
    for (auto& th : threads) th.join();
  }

  // Merge in point order.
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t r = 0; r < n_rows; ++r) {
      const double nz = per_point[i][r].normalized();
      SuiteRow& row = rep.rows[r];
      row.mean_normalized += nz / static_cast<double>(points.size());
      row.max_raw = std::max(row.max_raw, std::abs(per_point[i][r].raw));
      if (nz > row.max_normalized) {
        row.max_normalized = nz;
        row.worst_point = points[i];
      }
      rep.max_normalized = std::max(rep.max_normalized, nz);
    }
  }
  return rep;
}

InvarianceReport functional_invariance_check(const families::HcmaDilatParams& params,
                                             const ExpSumPotential& pot,
                                             const ScalarC2& f,
                                             const std::vector<Point4>& points) {
  const auto provider = compose_scalar(pot, f);
  InvarianceReport rep;
  rep.function_name = f.name;
  rep.point_count = static_cast<int>(points.size());
  for (const Point4& x : points) {
    const Jet J = provider->jet_at(x, 2);
    for (const ResidualValue& rv : dilatational_nonlinear_residuals(J))
      rep.max_nonlinear_normalized =
          std::max(rep.max_nonlinear_normalized, rv.normalized());
    for (const ResidualValue& rv :
         dilatational_linear_residuals(J, params.a, params.b))
      rep.max_linear_normalized = std::max(rep.max_linear_normalized, rv.normalized());
  }
  return rep;
}

}  // namespace heavenly::pde

#include "heavenly/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "heavenly/pde.hpp"

namespace heavenly::geometry {

namespace {

const complex kI(0, 1);

// Symmetric product of one-forms: (a . b)_ij = (a_i b_j + a_j b_i)/2, so that
// ds^2 coefficients land as G with ds^2 = sum G_ab dx^a dx^b.
void add_sym(Mat4c& g, const Vec4c& a, const Vec4c& b, complex coeff) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[i][j] += coeff * 0.5 * (a[i] * b[j] + a[j] * b[i]);
}

Vec4c basis_form(int k) {
  Vec4c v{0, 0, 0, 0};
  v[k] = 1;
  return v;
}

double hessian_scale(const Jet& j) {
  double s = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) s = std::max(s, std::abs(j.d(a, b)));
  return s;
}

}  // namespace

std::string signature_class_name(SignatureClass c) {
  switch (c) {
    case SignatureClass::Euclidean: return "euclidean";
    case SignatureClass::UltraHyperbolic: return "ultra-hyperbolic";
    case SignatureClass::Lorentzian: return "lorentzian";
    case SignatureClass::Degenerate: return "degenerate";
  }
  return "unknown";
}

Point4 RealChart::lift(const RealPoint4& x) const {
  if (kind == Kind::ConjugatePairs)
    return {complex(x[0], x[1]), complex(x[0], -x[1]), complex(x[2], x[3]),
            complex(x[2], -x[3])};
  return {complex(x[0]), complex(x[1]), complex(x[2]), complex(x[3])};
}

MetricSample metric_kahler(const Jet& u) {
  if (u.max_order < 2)
    throw Error(ErrorKind::InsufficientJetOrder, "Kahler metric needs order-2 jets");
  if (u.frame != FrameId::KahlerOriginal && u.frame != FrameId::Generic)
    throw Error(ErrorKind::FrameMismatch, "Kahler metric expects the Kahler frame");
  MetricSample s;
  s.frame = FrameId::KahlerOriginal;
  s.point = u.base_point;
  s.components = zero4c();
  // u_11b dz1 dz1b + u_12b dz1 dz2b + u_21b dz2 dz1b + u_22b dz2 dz2b
  add_sym(s.components, basis_form(0), basis_form(1), u.d(0, 1));
  add_sym(s.components, basis_form(0), basis_form(3), u.d(0, 3));
  add_sym(s.components, basis_form(2), basis_form(1), u.d(1, 2));
  add_sym(s.components, basis_form(2), basis_form(3), u.d(2, 3));
  s.leading = u.d(0, 1);
  s.hessian_det = u.d(0, 1) * u.d(2, 3) - u.d(0, 3) * u.d(1, 2);
  s.leading_scale = u.mag({1, 1, 0, 0});
  s.det_scale = u.mag({1, 1, 0, 0}) * u.mag({0, 0, 1, 1}) +
                u.mag({1, 0, 0, 1}) * u.mag({0, 1, 1, 0});
  const double scale = hessian_scale(u);
  s.degenerate = std::abs(s.leading) <= 1e-12 * scale ||
                 std::abs(s.hessian_det) <= 1e-12 * scale * scale;
  return s;
}

TetradCheck tetrad_check(const Jet& u, int eps, double field_tol) {
  const MetricSample direct = metric_kahler(u);
  const complex u11b = u.d(0, 1);
  if (!(u11b.real() > 0) || std::abs(u11b.imag()) > 1e-10 * std::abs(u11b))
    throw Error(ErrorKind::NonPositiveLeadingEntry,
                "tetrad requires u_11b > 0 at the point");
  const complex root = std::sqrt(u11b);
  // l = (u_11b dz1 + u_21b dz2)/sqrt(u_11b),  m = dz2/sqrt(u_11b)
  const Vec4c l = {u11b / root, 0, u.d(1, 2) / root, 0};
  const Vec4c lbar = {0, u11b / root, 0, u.d(0, 3) / root};
  const Vec4c m = {0, 0, 1.0 / root, 0};
  const Vec4c mbar = {0, 0, 0, 1.0 / root};
  Mat4c tetrad = zero4c();
  add_sym(tetrad, l, lbar, 1.0);
  add_sym(tetrad, m, mbar, complex(eps, 0));
  double dev = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      dev = std::max(dev, std::abs(tetrad[i][j] - direct.components[i][j]));
  const double field = pde::cma_residual(u, complex(eps, 0)).normalized();
  return {dev, field, field <= field_tol};
}

MetricSample metric_hcma_legendre(const Jet& v) {
  if (v.max_order < 2)
    throw Error(ErrorKind::InsufficientJetOrder, "metric needs order-2 jets");
  if (v.frame != FrameId::HcmaLegendre && v.frame != FrameId::Generic)
    throw Error(ErrorKind::FrameMismatch, "expects the Legendre HCMA frame");
  const complex vpp = v.d(0, 0), vpbpb = v.d(1, 1), vppb = v.d(0, 1);
  const complex vpb2 = v.d(1, 2), vp2b = v.d(0, 3);
  const complex det = vpp * vpbpb - vppb * vppb;
  const double scale = hessian_scale(v);
  if (std::abs(vppb) <= 1e-12 * scale)
    throw Error(ErrorKind::DegenerateMetric, "v_ppb vanishes at the point");
  if (std::abs(det) <= 1e-12 * scale * scale)
    throw Error(ErrorKind::DegenerateMetric,
                "v_pp v_pbpb - v_ppb^2 vanishes at the point");

  MetricSample s;
  s.frame = FrameId::HcmaLegendre;
  s.point = v.base_point;
  s.components = zero4c();
  // omega = v_ppb dp + v_pb2 dz2 and its conjugate-structure partner
  const Vec4c omega = {vppb, 0, vpb2, 0};
  const Vec4c omegab = {0, vppb, 0, vp2b};
  add_sym(s.components, omega, omega, vpp / det);
  add_sym(s.components, omegab, omegab, vpbpb / det);
  add_sym(s.components, omega, omegab, (vpp * vpbpb + vppb * vppb) / (vppb * det));
  add_sym(s.components, basis_form(2), basis_form(3), -det / vppb);
  s.leading = vppb;
  s.hessian_det = det;
  s.leading_scale = v.mag({1, 1, 0, 0});
  s.det_scale = v.mag({2, 0, 0, 0}) * v.mag({0, 2, 0, 0}) +
                v.mag({1, 1, 0, 0}) * v.mag({1, 1, 0, 0});
  return s;
}

MetricSample metric_heaven_legendre(const Jet& u) {
  if (u.max_order < 2)
    throw Error(ErrorKind::InsufficientJetOrder, "metric needs order-2 jets");
  if (u.frame != FrameId::HeavenLegendre && u.frame != FrameId::Generic)
    throw Error(ErrorKind::FrameMismatch, "expects the Legendre heaven frame");
  const complex utt = u.d(0, 0), utr = u.d(0, 1), utx = u.d(0, 2), utz = u.d(0, 3);
  const complex urr = u.d(1, 1), urx = u.d(1, 2), urz = u.d(1, 3), uxx = u.d(2, 2);
  const complex delta = utt * urr - utr * utr;
  const double scale = hessian_scale(u);
  if (std::abs(utt) <= 1e-12 * scale)
    throw Error(ErrorKind::DegenerateMetric, "u_tt vanishes at the point");
  if (std::abs(delta) <= 1e-12 * scale * scale)
    throw Error(ErrorKind::DegenerateMetric,
                "u_tt u_rr - u_rt^2 vanishes at the point");

  MetricSample s;
  s.frame = FrameId::HeavenLegendre;
  s.point = u.base_point;
  s.components = zero4c();
  const Vec4c omega = {utt, utr, utx, utz};
  // sigma = u_tt omega + (u_tt u_rx - u_tr u_tx) dz
  Vec4c sigma;
  for (int k = 0; k < 4; ++k) sigma[k] = utt * omega[k];
  sigma[3] += utt * urx - utr * utx;
  add_sym(s.components, sigma, sigma, 1.0 / (utt * delta));
  add_sym(s.components, basis_form(3), basis_form(3), -(utt * uxx - utx * utx) / utt);
  add_sym(s.components, omega, basis_form(2), -1.0);
  const Vec4c eta = {utr, urr, urx, urz};
  add_sym(s.components, eta, basis_form(3), -1.0);
  s.leading = utt;
  s.hessian_det = delta;
  s.leading_scale = u.mag({2, 0, 0, 0});
  s.det_scale = u.mag({2, 0, 0, 0}) * u.mag({0, 2, 0, 0}) +
                u.mag({1, 1, 0, 0}) * u.mag({1, 1, 0, 0});
  return s;
}

namespace {

SignatureReport classify(const Eigen::Vector4d& ev) {
  SignatureReport rep;
  for (int i = 0; i < 4; ++i) rep.eigenvalues[i] = ev(i);
  const double radius = std::max({std::abs(ev(0)), std::abs(ev(3)), 1e-300});
  const double tol = 1e-10 * radius;
  for (int i = 0; i < 4; ++i) {
    if (ev(i) > tol)
      ++rep.n_plus;
    else if (ev(i) < -tol)
      ++rep.n_minus;
  }
  if (rep.n_plus + rep.n_minus < 4)
    rep.classification = SignatureClass::Degenerate;
  else if (rep.n_plus == 4 || rep.n_minus == 4)
    rep.classification = SignatureClass::Euclidean;
  else if (rep.n_plus == 2)
    rep.classification = SignatureClass::UltraHyperbolic;
  else
    rep.classification = SignatureClass::Lorentzian;
  return rep;
}

}  // namespace

RealifiedMetric realify(const MetricSample& sample, const RealChart& chart) {
  const bool paired = frame_info(sample.frame).conjugate_paired;
  if (chart.kind == RealChart::Kind::ConjugatePairs && !paired)
    throw Error(ErrorKind::FrameMismatch, "frame has no conjugate pairing");
  if (chart.kind == RealChart::Kind::Identity && paired)
    throw Error(ErrorKind::FrameMismatch, "conjugate-paired frame needs a pair chart");

  // J maps real differentials to frame differentials; G_real = J^T G J.
  Mat4c jac = zero4c();
  if (chart.kind == RealChart::Kind::ConjugatePairs) {
    jac[0][0] = 1; jac[0][1] = kI;
    jac[1][0] = 1; jac[1][1] = -kI;
    jac[2][2] = 1; jac[2][3] = kI;
    jac[3][2] = 1; jac[3][3] = -kI;
  } else {
    for (int i = 0; i < 4; ++i) jac[i][i] = 1;
  }

  Mat4c gr = zero4c();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      complex s = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += jac[i][a] * sample.components[i][j] * jac[j][b];
      gr[a][b] = s;
    }

  RealifiedMetric out;
  out.max_imag = 0;
  Eigen::Matrix4d m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      out.max_imag = std::max(out.max_imag, std::abs(gr[a][b].imag()));
      out.components[a][b] = gr[a][b].real();
      m(a, b) = gr[a][b].real();
    }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (m + m.transpose()));
  const double radius =
      std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(3)));
  if (out.max_imag > 1e-8 * std::max(radius, 1e-300))
    throw Error(ErrorKind::ResidualImaginaryPart,
                "realified metric has imaginary parts of size " +
                    std::to_string(out.max_imag));
  out.signature = classify(es.eigenvalues());
  return out;
}

MetricField hcma_metric_field(ExpSumPotential v) {
  const RealChart chart = RealChart::conjugate_pairs();
  return [v = std::move(v), chart](const RealPoint4& x) {
    const Jet J = jet(v, chart.lift(x), 2);
    return realify(metric_hcma_legendre(J), chart).components;
  };
}

MetricField heaven_metric_field(ExpSumPotential u) {
  const RealChart chart = RealChart::identity();
  return [u = std::move(u), chart](const RealPoint4& x) {
    const Jet J = jet(u, chart.lift(x), 2);
    return realify(metric_heaven_legendre(J), chart).components;
  };
}

MetricField kahler_metric_field(std::shared_ptr<JetProvider> u) {
  const RealChart chart = RealChart::conjugate_pairs();
  return [u = std::move(u), chart](const RealPoint4& x) {
    const Jet J = u->jet_at(chart.lift(x), 2);
    return realify(metric_kahler(J), chart).components;
  };
}

namespace {

using Eigen::Matrix4d;

Matrix4d eval(const MetricField& f, RealPoint4 x) {
  const Mat4d g = f(x);
  Matrix4d m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m(a, b) = g[a][b];
  return m;
}

RealPoint4 shifted(RealPoint4 x, int dir, double h) {
  x[dir] += h;
  return x;
}

// First and second metric derivatives by central differences with one
// Richardson level: R(h) = (4 D(h/2) - D(h)) / 3.
struct MetricDerivs {
  Matrix4d g;
  std::array<Matrix4d, 4> d1;
  std::array<std::array<Matrix4d, 4>, 4> d2;
};

MetricDerivs metric_derivs(const MetricField& f, const RealPoint4& x, double h) {
  MetricDerivs out;
  out.g = eval(f, x);
  auto d1_at = [&](int a, double hh) -> Matrix4d {
    return (eval(f, shifted(x, a, hh)) - eval(f, shifted(x, a, -hh))) / (2 * hh);
  };
  auto d2_same = [&](int a, double hh) -> Matrix4d {
    return (eval(f, shifted(x, a, hh)) - 2 * out.g + eval(f, shifted(x, a, -hh))) /
           (hh * hh);
  };
  auto d2_mixed = [&](int a, int b, double hh) -> Matrix4d {
    RealPoint4 pp = shifted(shifted(x, a, hh), b, hh);
    RealPoint4 pm = shifted(shifted(x, a, hh), b, -hh);
    RealPoint4 mp = shifted(shifted(x, a, -hh), b, hh);
    RealPoint4 mm = shifted(shifted(x, a, -hh), b, -hh);
    return (eval(f, pp) - eval(f, pm) - eval(f, mp) + eval(f, mm)) / (4 * hh * hh);
  };
  for (int a = 0; a < 4; ++a) {
    out.d1[a] = (4 * d1_at(a, h / 2) - d1_at(a, h)) / 3;
    out.d2[a][a] = (4 * d2_same(a, h / 2) - d2_same(a, h)) / 3;
    for (int b = a + 1; b < 4; ++b) {
      out.d2[a][b] = (4 * d2_mixed(a, b, h / 2) - d2_mixed(a, b, h)) / 3;
      out.d2[b][a] = out.d2[a][b];
    }
  }
  return out;
}

struct CurvatureCore {
  std::array<double, 64> gamma;
  std::array<double, 256> riemann;
  std::array<double, 16> ricci;
};

int idx3(int a, int b, int c) { return (a * 4 + b) * 4 + c; }
int idx4(int a, int b, int c, int d) { return ((a * 4 + b) * 4 + c) * 4 + d; }

CurvatureCore assemble(const MetricDerivs& md) {
  const double det = md.g.determinant();
  if (!(std::abs(det) > 1e-14))
    throw Error(ErrorKind::DegenerateMetric, "metric not invertible in FD stencil");
  const Matrix4d ginv = md.g.inverse();

  // Gamma^a_{bc} = g^{ae} (d_b g_ec + d_c g_eb - d_e g_bc) / 2
  CurvatureCore out{};
  auto gamma_at = [&](int a, int b, int c) { return out.gamma[idx3(a, b, c)]; };
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = b; c < 4; ++c) {
        double s = 0;
        for (int e = 0; e < 4; ++e)
          s += ginv(a, e) *
               (md.d1[b](e, c) + md.d1[c](e, b) - md.d1[e](b, c));
        out.gamma[idx3(a, b, c)] = 0.5 * s;
        out.gamma[idx3(a, c, b)] = 0.5 * s;
      }

  // d_d Gamma^a_{bc} with d g^{ae} = -(g^-1 dg g^-1)^{ae}
  std::array<Matrix4d, 4> dginv;
  for (int d = 0; d < 4; ++d) dginv[d] = -ginv * md.d1[d] * ginv;
  std::array<double, 256> dgamma{};
  for (int d = 0; d < 4; ++d)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = b; c < 4; ++c) {
          double s = 0;
          for (int e = 0; e < 4; ++e) {
            s += dginv[d](a, e) * (md.d1[b](e, c) + md.d1[c](e, b) - md.d1[e](b, c));
            s += ginv(a, e) *
                 (md.d2[d][b](e, c) + md.d2[d][c](e, b) - md.d2[d][e](b, c));
          }
          dgamma[idx4(d, a, b, c)] = 0.5 * s;
          dgamma[idx4(d, a, c, b)] = 0.5 * s;
        }

  // R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
  //            + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double s = dgamma[idx4(c, a, d, b)] - dgamma[idx4(d, a, c, b)];
          for (int e = 0; e < 4; ++e)
            s += gamma_at(a, c, e) * gamma_at(e, d, b) -
                 gamma_at(a, d, e) * gamma_at(e, c, b);
          out.riemann[idx4(a, b, c, d)] = s;
        }

  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      double s = 0;
      for (int a = 0; a < 4; ++a) s += out.riemann[idx4(a, b, a, d)];
      out.ricci[b * 4 + d] = s;
    }
  return out;
}

double norm_of(const double* p, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += p[i] * p[i];
  return std::sqrt(s);
}

}  // namespace

CurvatureSample curvature(const MetricField& field, const RealPoint4& x, double fd_step) {
  const CurvatureCore coarse = assemble(metric_derivs(field, x, fd_step));
  const CurvatureCore fine = assemble(metric_derivs(field, x, fd_step / 2));

  CurvatureSample out;
  out.point = x;
  out.fd_step = fd_step / 2;
  out.christoffel = fine.gamma;
  out.riemann = fine.riemann;
  out.ricci = fine.ricci;
  out.riemann_norm = norm_of(fine.riemann.data(), 256);
  out.ricci_norm = norm_of(fine.ricci.data(), 16);
  double err = 0;
  for (int i = 0; i < 16; ++i) {
    const double d = fine.ricci[i] - coarse.ricci[i];
    err += d * d;
  }
  out.error_estimate = std::sqrt(err);
  if (!std::isfinite(out.riemann_norm) || !std::isfinite(out.ricci_norm) ||
      !std::isfinite(out.error_estimate))
    throw Error(ErrorKind::IllConditioned,
                "curvature stencil produced non-finite values");
  if (out.error_estimate > std::max(out.riemann_norm, out.ricci_norm) &&
      out.error_estimate > 1e-12)
    throw Error(ErrorKind::IllConditioned,
                "FD error estimate exceeds the computed curvature norms");
  return out;
}

RealVectorField RealVectorField::translation(const Vec4d& direction) {
  return {[direction](const RealPoint4&) { return direction; },
          [](const RealPoint4&) { return zero4d(); }};
}

RealVectorField RealVectorField::euler() {
  return {[](const RealPoint4& x) {
            return Vec4d{x[0], x[1], x[2], x[3]};
          },
          [](const RealPoint4&) {
            Mat4d j = zero4d();
            for (int i = 0; i < 4; ++i) j[i][i] = 1;
            return j;
          }};
}

Mat4d lie_derivative_metric(const MetricField& field, const RealVectorField& v,
                            const RealPoint4& x, double fd_step) {
  const Mat4d g = field(x);
  std::array<Matrix4d, 4> dg;
  for (int c = 0; c < 4; ++c) {
    auto d1 = [&](double h) -> Matrix4d {
      return (eval(field, shifted(x, c, h)) - eval(field, shifted(x, c, -h))) / (2 * h);
    };
    dg[c] = (4 * d1(fd_step / 2) - d1(fd_step)) / 3;
  }
  const Vec4d vc = v.components(x);
  const Mat4d jac = v.jacobian(x);
  Mat4d out = zero4d();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0;
      for (int c = 0; c < 4; ++c)
        s += vc[c] * dg[c](a, b) + g[c][b] * jac[c][a] + g[a][c] * jac[c][b];
      out[a][b] = s;
    }
  return out;
}

Vec4d phase_annihilating_translation(const ExpSumPotential& pot) {
  // Each term phase restricted to the conjugate slice has the real gradient
  // (2 Re a, -2 Im a, 2 Re b, -2 Im b) for exponents (a, conj a, b, conj b).
  // Any unit vector in the joint null space translates every phase.
  Eigen::MatrixXd grads(std::max<size_t>(pot.terms.size(), 1), 4);
  grads.setZero();
  for (size_t j = 0; j < pot.terms.size(); ++j) {
    const complex a = pot.terms[j].exponents[0], b = pot.terms[j].exponents[2];
    grads(j, 0) = a.real();
    grads(j, 1) = -a.imag();
    grads(j, 2) = b.real();
    grads(j, 3) = -b.imag();
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(grads);
  lu.setThreshold(1e-10);
  const Eigen::MatrixXd kernel = lu.kernel();
  if (lu.rank() >= 4 || kernel.cols() == 0)
    throw Error(ErrorKind::Incompatible,
                "term phases span all four directions; no translation symmetry");
  Eigen::Vector4d dir = kernel.col(0).normalized();
  return {dir(0), dir(1), dir(2), dir(3)};
}

bool well_conditioned(const MetricSample& sample, double margin) {
  return std::abs(sample.leading) > margin * sample.leading_scale &&
         std::abs(sample.hessian_det) > margin * sample.det_scale;
}

}  // namespace heavenly::geometry

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "heavenly/expsum.hpp"

namespace heavenly::geometry {

/// 4x4 symmetric metric components at a point, written against the frame's
/// coordinate differentials with the convention ds^2 = sum G_ab dx^a dx^b.
struct MetricSample {
  FrameId frame;
  Point4 point;
  Mat4c components;
  complex leading;      // v_ppb, u_tt, or u_11b
  complex hessian_det;  // v_pp v_pbpb - v_ppb^2, u_tt u_rr - u_rt^2, or det u_ijb
  double leading_scale = 0;  // term-mass magnitudes of the same entries
  double det_scale = 0;
  bool degenerate = false;
};

enum class SignatureClass { Euclidean, UltraHyperbolic, Lorentzian, Degenerate };
std::string signature_class_name(SignatureClass c);

struct SignatureReport {
  std::array<double, 4> eigenvalues;  // ascending
  int n_plus = 0;
  int n_minus = 0;
  SignatureClass classification = SignatureClass::Degenerate;
};

/// Linear pullback from real coordinates to the frame's differentials.
/// ConjugatePairs realifies (q, qbar, s, sbar) frames through
/// q = x1 + i x2, s = x3 + i x4; Identity keeps real Heaven coordinates.
struct RealChart {
  enum class Kind { ConjugatePairs, Identity } kind;
  static RealChart conjugate_pairs() { return {Kind::ConjugatePairs}; }
  static RealChart identity() { return {Kind::Identity}; }
  Point4 lift(const RealPoint4& x) const;
};

/// Kahler metric u_ijb dz^i dzbar^j from an order-2 jet.
MetricSample metric_kahler(const Jet& u);

/// Max componentwise deviation between the Kahler metric and the
/// Newman-Penrose coframe form l (x) lbar + eps m (x) mbar.
/// Requires u_11b > 0; warns (via return) when the field-equation residual
/// at the point is above `field_tol`.
struct TetradCheck {
  double deviation;
  double field_residual;  // normalized, against the given eps
  bool field_ok;
};
TetradCheck tetrad_check(const Jet& u, int eps, double field_tol = 1e-10);

/// Legendre-transformed ultra-hyperbolic metric on {dp, dpbar, dz2, dz2bar}.
MetricSample metric_hcma_legendre(const Jet& v);

/// Legendre-transformed second heavenly metric on {dt, dr, dx, dz}.
MetricSample metric_heaven_legendre(const Jet& u);

struct RealifiedMetric {
  Mat4d components;
  SignatureReport signature;
  double max_imag;  // largest imaginary part discarded
};

/// Pullback to real coordinates plus eigenvalue signature. Throws
/// ResidualImaginaryPart when imaginary parts exceed 1e-8 of the spectral
/// radius.
RealifiedMetric realify(const MetricSample& sample, const RealChart& chart);

/// A real metric field over real coordinates; inputs to the
/// finite-difference curvature and Lie-derivative operators.
using MetricField = std::function<Mat4d(const RealPoint4&)>;

/// Conjugate-slice realification of the Legendre HCMA metric of `v`.
MetricField hcma_metric_field(ExpSumPotential v);
/// Real-coordinate Legendre heaven metric of `u` (real-parameter solutions).
MetricField heaven_metric_field(ExpSumPotential u);
/// Realified Kahler metric of a jet-provider potential (test backgrounds).
MetricField kahler_metric_field(std::shared_ptr<JetProvider> u);

struct CurvatureSample {
  RealPoint4 point;
  double fd_step;
  std::array<double, 64> christoffel;   // Gamma^a_{bc}
  std::array<double, 256> riemann;      // R^a_{bcd}
  std::array<double, 16> ricci;         // R_{bd}
  double riemann_norm = 0;
  double ricci_norm = 0;
  double error_estimate = 0;  // step-halving estimate on the Ricci entries
};

/// Levi-Civita curvature by central differences of the metric with one
/// Richardson level. Gamma^a_{bc} = g^{ae}(dg_ebc terms)/2; Riemann and Ricci
/// assembled from Gamma and its analytic derivative in (g, dg, d2g).
CurvatureSample curvature(const MetricField& field, const RealPoint4& x,
                          double fd_step = 1e-3);

struct RealVectorField {
  std::function<Vec4d(const RealPoint4&)> components;
  std::function<Mat4d(const RealPoint4&)> jacobian;

  static RealVectorField translation(const Vec4d& direction);
  static RealVectorField euler();  // V^a = x^a
};

/// (L_V g)_ab = V^c d_c g_ab + g_cb d_a V^c + g_ac d_b V^c, with d_c g by
/// central differences.
Mat4d lie_derivative_metric(const MetricField& field, const RealVectorField& v,
                            const RealPoint4& x, double fd_step = 1e-3);

/// A unit real-chart translation annihilating every term phase on the
/// conjugate slice: an exact symmetry direction of the metric whenever the
/// phases span fewer than four directions. Throws Incompatible when no such
/// direction exists.
Vec4d phase_annihilating_translation(const ExpSumPotential& pot);

/// Well-conditioned test: degeneracy quantities above `margin` of their
/// term-mass scales. Curvature stencils want a wider margin than pointwise
/// metric evaluation.
bool well_conditioned(const MetricSample& sample, double margin = 1e-3);

}  // namespace heavenly::geometry

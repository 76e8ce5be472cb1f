#pragma once

// Shared test fixtures: random family parameters with exponents kept inside
// the well-conditioned box (|exponent| <= 2, |coordinate| <= 1), plus
// closed-form backgrounds used as independent references.

#include <vector>

#include "heavenly/families.hpp"
#include "heavenly/geometry.hpp"
#include "heavenly/random.hpp"

namespace heavenly::testsupport {

using families::FamilyId;
using families::FamilyParams;

inline families::HcmaDilatParams random_dilat_params(Rng& rng, int n) {
  families::HcmaDilatParams p;
  p.a = rng.complex_in_annulus(0.15, 0.25);
  p.b = rng.complex_in_disk(0.25);
  const double theta = std::arg(p.a);
  for (int j = 0; j < n; ++j) {
    double mu = 0;
    // keep chi away from its zero and the phases pairwise separated, so no
    // term degenerates and the metric Hessian determinant stays alive
    for (;;) {
      mu = rng.uniform(-3.141592653589793, 3.141592653589793);
      if (std::abs(std::cos(theta + mu)) < 0.2) continue;
      bool separated = true;
      for (double prev : p.mu)
        if (std::abs(std::sin(mu - prev)) < 0.2) separated = false;
      if (separated) break;
    }
    p.mu.push_back(mu);
    p.c.push_back(rng.uniform(0.2, 1.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0));
  }
  return p;
}

inline families::HcmaTransParams random_trans_params(Rng& rng, int n) {
  families::HcmaTransParams p;
  p.nu = rng.complex_in_disk(1.0);
  for (int j = 0; j < n; ++j) {
    complex alpha;
    for (;;) {
      alpha = rng.complex_in_annulus(0.15, 0.5);
      bool separated = true;
      for (complex prev : p.alpha)
        if (std::abs(std::sin(std::arg(alpha) - std::arg(prev))) < 0.2)
          separated = false;
      if (separated) break;
    }
    p.alpha.push_back(alpha);
    p.c.push_back(rng.uniform(0.2, 1.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0));
  }
  return p;
}

inline families::HeavenParams random_heaven_params(Rng& rng, FamilyId id, int n,
                                                   bool real_only = false) {
  families::HeavenParams p;
  for (int j = 0; j < n; ++j) {
    complex beta, gamma;
    if (real_only) {
      // drawing the ratio q = gamma/beta over a wide two-sided range keeps
      // the exponent rows of different terms genuinely independent (the
      // metric Hessian determinant lives on the spread of beta/(gamma-beta))
      beta = complex(rng.uniform(0.3, 0.7) * (rng.uniform() < 0.5 ? -1 : 1));
      double q;
      for (;;) {
        q = rng.uniform(0.4, 1.6) * (rng.uniform() < 0.5 ? -1 : 1);
        if (id == FamilyId::HeavenEqual && std::abs(q - 1.0) < 0.4) continue;
        break;
      }
      gamma = q * beta;
    } else {
      for (;;) {
        beta = rng.complex_in_annulus(0.35, 0.7);
        gamma = rng.complex_in_annulus(0.35, 0.7);
        if (id == FamilyId::HeavenEqual && std::abs(gamma - beta) < 0.35) continue;
        break;
      }
    }
    p.beta.push_back(beta);
    p.gamma.push_back(gamma);
    p.c.push_back(real_only ? complex(rng.uniform(-1, 1))
                            : rng.complex_in_annulus(0.2, 1.0));
  }
  return p;
}

inline FamilyParams random_params(Rng& rng, FamilyId id, int n, bool real_only = false) {
  switch (id) {
    case FamilyId::HcmaDilat: return random_dilat_params(rng, n);
    case FamilyId::HcmaTrans: return random_trans_params(rng, n);
    default: return random_heaven_params(rng, id, n, real_only);
  }
}

inline Point4 random_point(Rng& rng, FrameId frame, double box = 1.0) {
  if (frame_info(frame).conjugate_paired)
    return conjugate_slice(complex(rng.uniform(-box, box), rng.uniform(-box, box)),
                           complex(rng.uniform(-box, box), rng.uniform(-box, box)));
  return {complex(rng.uniform(-box, box)), complex(rng.uniform(-box, box)),
          complex(rng.uniform(-box, box)), complex(rng.uniform(-box, box))};
}

inline std::vector<Point4> random_points(Rng& rng, FrameId frame, int n,
                                         double box = 1.0) {
  std::vector<Point4> pts;
  for (int i = 0; i < n; ++i) pts.push_back(random_point(rng, frame, box));
  return pts;
}

/// Order-2 jets of the closed-form Kahler potential
/// u = z1 z1b + eps z2 z2b (flat solution of the field equation).
inline Jet flat_kahler_jet(int eps, const Point4& x) {
  Jet j = Jet::zero(FrameId::KahlerOriginal, x, 2);
  auto set = [&j](const MultiIndex& m, complex v) {
    const int r = multi_index_rank(m);
    j.values[r] = v;
    j.magnitudes[r] = std::abs(v);
  };
  set({0, 0, 0, 0}, x[0] * x[1] + double(eps) * x[2] * x[3]);
  set({1, 0, 0, 0}, x[1]);
  set({0, 1, 0, 0}, x[0]);
  set({0, 0, 1, 0}, double(eps) * x[3]);
  set({0, 0, 0, 1}, double(eps) * x[2]);
  set({1, 1, 0, 0}, 1);
  set({0, 0, 1, 1}, eps);
  return j;
}

/// Jets of theta = x a(z) + y b(w) with polynomial a, b: exact solutions of
/// the second heavenly equation for any a, b.
struct SeparableTheta {
  std::vector<double> a;  // coefficients of a(z)
  std::vector<double> b;  // coefficients of b(w)

  static double poly_eval(const std::vector<double>& c, double t, int deriv) {
    double sum = 0;
    for (size_t k = deriv; k < c.size(); ++k) {
      double coef = c[k];
      for (int d = 0; d < deriv; ++d) coef *= double(k - d);
      sum += coef * std::pow(t, double(k - deriv));
    }
    return sum;
  }

  Jet jet_at(const Point4& x, int max_order) const {
    Jet j = Jet::zero(FrameId::HeavenOriginal, x, max_order);
    const auto& idx = multi_indices_up_to(max_order);
    const double xr = x[0].real(), yr = x[1].real(), zr = x[2].real(),
                 wr = x[3].real();
    for (size_t i = 0; i < idx.size(); ++i) {
      const MultiIndex& m = idx[i];
      double v = 0;
      // d^m [x a(z)] survives only for m_x <= 1, m_y = m_w = 0
      if (m[1] == 0 && m[3] == 0 && m[0] <= 1)
        v += (m[0] == 1 ? 1.0 : xr) * poly_eval(a, zr, m[2]);
      // d^m [y b(w)] survives only for m_y <= 1, m_x = m_z = 0
      if (m[0] == 0 && m[2] == 0 && m[1] <= 1)
        v += (m[1] == 1 ? 1.0 : yr) * poly_eval(b, wr, m[3]);
      j.values[i] = v;
      j.magnitudes[i] = std::abs(v);
    }
    return j;
  }
};

}  // namespace heavenly::testsupport

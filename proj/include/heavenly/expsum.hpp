#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "heavenly/types.hpp"

namespace heavenly {

/// Multi-index of partial-derivative orders, one entry per slot.
using MultiIndex = std::array<int, 4>;

inline int total_degree(const MultiIndex& m) { return m[0] + m[1] + m[2] + m[3]; }

/// All multi-indices with total degree <= max_order, in graded
/// lexicographic order (by degree, then slot-0-major lexicographic).
const std::vector<MultiIndex>& multi_indices_up_to(int max_order);

/// Position of m within multi_indices_up_to(any order >= |m|).
int multi_index_rank(const MultiIndex& m);

/// One exponential term  C * exp(e1 x1 + e2 x2 + e3 x3 + e4 x4).
struct ExpTerm {
  complex amplitude;
  Vec4c exponents;
};

/// Finite sum of exponential terms over a 4-coordinate frame. Closed under
/// differentiation in every slot. In conjugate-paired frames the terms carry
/// exponents with slot1 = conj(slot0), slot3 = conj(slot2) and real
/// amplitudes, which makes the sum real-valued on conjugate slices.
struct ExpSumPotential {
  FrameId frame = FrameId::Generic;
  std::vector<ExpTerm> terms;

  /// Merge terms whose exponent vectors are exactly equal (bitwise).
  ExpSumPotential merged() const;
};

/// Exponent magnitude above which exp() is considered out of range.
inline constexpr double kDefaultExpBound = 700.0;

/// Term mass  sum_j |C_j| e^{Re Phi_j}, the local magnitude scale.
double term_mass(const ExpSumPotential& pot, const Point4& x);

complex evaluate(const ExpSumPotential& pot, const Point4& x,
                 double exp_bound = kDefaultExpBound);

/// Derivative in one slot: each amplitude is multiplied by its slot exponent.
ExpSumPotential differentiate(const ExpSumPotential& pot, int slot);

/// Structural check: slot1 = conj(slot0), slot3 = conj(slot2), Im C = 0.
bool has_conjugation_structure(const ExpSumPotential& pot);

/// Synthesize a conjugate-slice point (q, conj(q), s, conj(s)).
Point4 conjugate_slice(complex q, complex s);

/// All partial derivatives of a potential at one point, up to max_order.
/// `values` follows multi_indices_up_to(max_order); `magnitudes` carries the
/// same entries accumulated with absolute values term by term, used as the
/// roundoff scale when residuals are normalized.
struct Jet {
  FrameId frame = FrameId::Generic;
  Point4 base_point{};
  int max_order = 0;
  std::vector<complex> values;
  std::vector<double> magnitudes;

  complex at(const MultiIndex& m) const;
  double mag(const MultiIndex& m) const;
  complex value() const { return values.empty() ? complex(0) : values[0]; }

  /// Convenience for second-derivative entries: d(i,j) = d^2/dx_i dx_j.
  complex d(int i, int j) const;
  complex d(int i) const;

  static Jet zero(FrameId frame, const Point4& x, int max_order);
};

Jet jet(const ExpSumPotential& pot, const Point4& x, int max_order,
        double exp_bound = kDefaultExpBound);

/// Deterministic, pure jet source; lets the equation and metric code accept
/// exponential sums and closed-form test potentials uniformly.
class JetProvider {
 public:
  virtual ~JetProvider() = default;
  virtual Jet jet_at(const Point4& x, int max_order) const = 0;
};

class ExpSumProvider final : public JetProvider {
 public:
  explicit ExpSumProvider(ExpSumPotential pot, double exp_bound = kDefaultExpBound)
      : pot_(std::move(pot)), exp_bound_(exp_bound) {}
  Jet jet_at(const Point4& x, int max_order) const override {
    return jet(pot_, x, max_order, exp_bound_);
  }
  const ExpSumPotential& potential() const { return pot_; }

 private:
  ExpSumPotential pot_;
  double exp_bound_;
};

/// Wraps an arbitrary jet-valued function (closed-form test potentials).
class FunctionJetProvider final : public JetProvider {
 public:
  using Fn = std::function<Jet(const Point4&, int)>;
  explicit FunctionJetProvider(Fn fn) : fn_(std::move(fn)) {}
  Jet jet_at(const Point4& x, int max_order) const override {
    return fn_(x, max_order);
  }

 private:
  Fn fn_;
};

/// A scalar C^2 function with its first two derivatives.
struct ScalarC2 {
  std::string name;
  std::function<complex(complex)> f, df, d2f;

  static ScalarC2 identity();
  static ScalarC2 square();
  static ScalarC2 cube();
  static ScalarC2 exponential();
};

/// Jets of f(v) up to order 2 by the chain and product rules:
///   (f o v)_k  = f'(v) v_k
///   (f o v)_kl = f''(v) v_k v_l + f'(v) v_kl
std::shared_ptr<JetProvider> compose_scalar(ExpSumPotential pot, ScalarC2 f,
                                            double exp_bound = kDefaultExpBound);

/// Central-difference estimate of the multi-index derivative of `provider`
/// values, with one Richardson extrapolation level. Test oracle: consumes
/// order-0 jets only, independent of the analytic jet path.
complex fd_oracle(const JetProvider& provider, const Point4& x,
                  const MultiIndex& m, double step);

}  // namespace heavenly

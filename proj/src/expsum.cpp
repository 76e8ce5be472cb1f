#include "heavenly/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace heavenly {

const CoordinateFrame& frame_info(FrameId id) {
  static const CoordinateFrame kFrames[] = {
      {FrameId::KahlerOriginal, {"z1", "z1bar", "z2", "z2bar"}, true},
      {FrameId::HcmaLegendre, {"p", "pbar", "z2", "z2bar"}, true},
      {FrameId::HeavenOriginal, {"x", "y", "z", "w"}, false},
      {FrameId::HeavenLegendre, {"t", "r", "x", "z"}, false},
      {FrameId::Generic, {"x1", "x2", "x3", "x4"}, false},
  };
  return kFrames[static_cast<int>(id)];
}

std::string frame_name(FrameId id) {
  switch (id) {
    case FrameId::KahlerOriginal: return "kahler-original";
    case FrameId::HcmaLegendre: return "hcma-legendre";
    case FrameId::HeavenOriginal: return "heaven-original";
    case FrameId::HeavenLegendre: return "heaven-legendre";
    case FrameId::Generic: return "generic";
  }
  return "unknown";
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateTerm: return "DegenerateTerm";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::Incompatible: return "Incompatible";
    case ErrorKind::FrameMismatch: return "FrameMismatch";
    case ErrorKind::InsufficientJetOrder: return "InsufficientJetOrder";
    case ErrorKind::NonPositiveLeadingEntry: return "NonPositiveLeadingEntry";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::ResidualImaginaryPart: return "ResidualImaginaryPart";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

double frobenius(const Mat4d& m) {
  double s = 0;
  for (const auto& row : m)
    for (double v : row) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Mat4d& m) {
  double s = 0;
  for (const auto& row : m)
    for (double v : row) s = std::max(s, std::abs(v));
  return s;
}

double max_abs(const Mat4c& m) {
  double s = 0;
  for (const auto& row : m)
    for (const complex& v : row) s = std::max(s, std::abs(v));
  return s;
}

namespace {

// Graded lexicographic: ascending total degree, slot-0-major within a degree.
std::vector<MultiIndex> build_indices(int max_order) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= max_order; ++d) {
    for (int m0 = d; m0 >= 0; --m0)
      for (int m1 = d - m0; m1 >= 0; --m1)
        for (int m2 = d - m0 - m1; m2 >= 0; --m2)
          out.push_back({m0, m1, m2, d - m0 - m1 - m2});
  }
  return out;
}

constexpr int kMaxJetOrder = 8;

const std::map<MultiIndex, int>& rank_table() {
  static const std::map<MultiIndex, int> table = [] {
    std::map<MultiIndex, int> t;
    const auto all = build_indices(kMaxJetOrder);
    for (size_t i = 0; i < all.size(); ++i) t[all[i]] = static_cast<int>(i);
    return t;
  }();
  return table;
}

}  // namespace

const std::vector<MultiIndex>& multi_indices_up_to(int max_order) {
  static std::vector<std::vector<MultiIndex>> cache = [] {
    std::vector<std::vector<MultiIndex>> c;
    for (int d = 0; d <= kMaxJetOrder; ++d) c.push_back(build_indices(d));
    return c;
  }();
  if (max_order < 0 || max_order > kMaxJetOrder)
    throw Error(ErrorKind::InvalidArgument, "jet order out of range");
  return cache[max_order];
}

int multi_index_rank(const MultiIndex& m) {
  auto it = rank_table().find(m);
  if (it == rank_table().end())
    throw Error(ErrorKind::InvalidArgument, "multi-index out of range");
  return it->second;
}

ExpSumPotential ExpSumPotential::merged() const {
  ExpSumPotential out;
  out.frame = frame;
  for (const ExpTerm& t : terms) {
    auto same = std::find_if(out.terms.begin(), out.terms.end(), [&](const ExpTerm& u) {
      return u.exponents == t.exponents;
    });
    if (same != out.terms.end())
      same->amplitude += t.amplitude;
    else
      out.terms.push_back(t);
  }
  return out;
}

namespace {

complex phase(const ExpTerm& t, const Point4& x) {
  return t.exponents[0] * x[0] + t.exponents[1] * x[1] + t.exponents[2] * x[2] +
         t.exponents[3] * x[3];
}

void check_bound(complex phi, double exp_bound) {
  if (phi.real() > exp_bound)
    throw Error(ErrorKind::Overflow, "exponent real part exceeds bound " +
                                         std::to_string(exp_bound));
}

}  // namespace

double term_mass(const ExpSumPotential& pot, const Point4& x) {
  double mass = 0;
  for (const ExpTerm& t : pot.terms)
    mass += std::abs(t.amplitude) * std::exp(phase(t, x).real());
  return mass;
}

complex evaluate(const ExpSumPotential& pot, const Point4& x, double exp_bound) {
  complex sum = 0;
  for (const ExpTerm& t : pot.terms) {
    const complex phi = phase(t, x);
    check_bound(phi, exp_bound);
    sum += t.amplitude * std::exp(phi);
  }
  return sum;
}

ExpSumPotential differentiate(const ExpSumPotential& pot, int slot) {
  if (slot < 0 || slot > 3)
    throw Error(ErrorKind::InvalidArgument, "slot must be in 0..3");
  ExpSumPotential out = pot;
  for (ExpTerm& t : out.terms) t.amplitude *= t.exponents[slot];
  return out;
}

bool has_conjugation_structure(const ExpSumPotential& pot) {
  for (const ExpTerm& t : pot.terms) {
    if (t.exponents[1] != std::conj(t.exponents[0])) return false;
    if (t.exponents[3] != std::conj(t.exponents[2])) return false;
    if (t.amplitude.imag() != 0.0) return false;
  }
  return true;
}

Point4 conjugate_slice(complex q, complex s) {
  return {q, std::conj(q), s, std::conj(s)};
}

complex Jet::at(const MultiIndex& m) const {
  const int r = multi_index_rank(m);
  if (r >= static_cast<int>(values.size()))
    throw Error(ErrorKind::InsufficientJetOrder,
                "jet of order " + std::to_string(max_order) + " lacks entry of degree " +
                    std::to_string(total_degree(m)));
  return values[r];
}

double Jet::mag(const MultiIndex& m) const {
  const int r = multi_index_rank(m);
  if (r >= static_cast<int>(magnitudes.size()))
    throw Error(ErrorKind::InsufficientJetOrder, "jet magnitude entry missing");
  return magnitudes[r];
}

complex Jet::d(int i, int j) const {
  MultiIndex m{0, 0, 0, 0};
  m[i] += 1;
  m[j] += 1;
  return at(m);
}

complex Jet::d(int i) const {
  MultiIndex m{0, 0, 0, 0};
  m[i] = 1;
  return at(m);
}

Jet Jet::zero(FrameId frame, const Point4& x, int max_order) {
  Jet j;
  j.frame = frame;
  j.base_point = x;
  j.max_order = max_order;
  j.values.assign(multi_indices_up_to(max_order).size(), complex(0));
  j.magnitudes.assign(j.values.size(), 0.0);
  return j;
}

Jet jet(const ExpSumPotential& pot, const Point4& x, int max_order, double exp_bound) {
  if (max_order < 0 || max_order > 4)
    throw Error(ErrorKind::InvalidArgument, "jet order must be in 0..4");
  Jet out = Jet::zero(pot.frame, x, max_order);
  const auto& idx = multi_indices_up_to(max_order);
  for (const ExpTerm& t : pot.terms) {
    const complex phi = phase(t, x);
    check_bound(phi, exp_bound);
    const complex e = t.amplitude * std::exp(phi);
    const double emag = std::abs(t.amplitude) * std::exp(phi.real());
    // Slot-exponent powers up to max_order.
    complex pw[4][5];
    double pwmag[4][5];
    for (int k = 0; k < 4; ++k) {
      pw[k][0] = 1;
      pwmag[k][0] = 1;
      for (int o = 1; o <= max_order; ++o) {
        pw[k][o] = pw[k][o - 1] * t.exponents[k];
        pwmag[k][o] = pwmag[k][o - 1] * std::abs(t.exponents[k]);
      }
    }
    for (size_t i = 0; i < idx.size(); ++i) {
      const MultiIndex& m = idx[i];
      const complex c = pw[0][m[0]] * pw[1][m[1]] * pw[2][m[2]] * pw[3][m[3]];
      out.values[i] += c * e;
      out.magnitudes[i] += pwmag[0][m[0]] * pwmag[1][m[1]] * pwmag[2][m[2]] *
                           pwmag[3][m[3]] * emag;
    }
  }
  return out;
}

ScalarC2 ScalarC2::identity() {
  return {"identity", [](complex v) { return v; }, [](complex) { return complex(1); },
          [](complex) { return complex(0); }};
}

ScalarC2 ScalarC2::square() {
  return {"square", [](complex v) { return v * v; }, [](complex v) { return 2.0 * v; },
          [](complex) { return complex(2); }};
}

ScalarC2 ScalarC2::cube() {
  return {"cube", [](complex v) { return v * v * v; },
          [](complex v) { return 3.0 * v * v; }, [](complex v) { return 6.0 * v; }};
}

ScalarC2 ScalarC2::exponential() {
  return {"exp", [](complex v) { return std::exp(v); },
          [](complex v) { return std::exp(v); }, [](complex v) { return std::exp(v); }};
}

namespace {

class ComposedProvider final : public JetProvider {
 public:
  ComposedProvider(ExpSumPotential pot, ScalarC2 f, double exp_bound)
      : pot_(std::move(pot)), f_(std::move(f)), exp_bound_(exp_bound) {}

  Jet jet_at(const Point4& x, int max_order) const override {
    if (max_order > 2)
      throw Error(ErrorKind::InsufficientJetOrder,
                  "composed jets are available up to order 2");
    const Jet base = jet(pot_, x, 2, exp_bound_);
    Jet out = Jet::zero(pot_.frame, x, max_order);
    const complex v = base.value();
    const complex f0 = f_.f(v), f1 = f_.df(v), f2 = f_.d2f(v);
    const double a0 = std::abs(f0), a1 = std::abs(f1), a2 = std::abs(f2);
    out.values[0] = f0;
    out.magnitudes[0] = a0;
    if (max_order >= 1) {
      for (int k = 0; k < 4; ++k) {
        MultiIndex mk{0, 0, 0, 0};
        mk[k] = 1;
        const int r = multi_index_rank(mk);
        out.values[r] = f1 * base.at(mk);
        out.magnitudes[r] = a1 * base.mag(mk);
      }
    }
    if (max_order >= 2) {
      for (int k = 0; k < 4; ++k) {
        for (int l = k; l < 4; ++l) {
          MultiIndex mk{0, 0, 0, 0}, ml{0, 0, 0, 0}, mkl{0, 0, 0, 0};
          mk[k] = 1;
          ml[l] = 1;
          mkl[k] += 1;
          mkl[l] += 1;
          const int r = multi_index_rank(mkl);
          out.values[r] = f2 * base.at(mk) * base.at(ml) + f1 * base.at(mkl);
          out.magnitudes[r] = a2 * base.mag(mk) * base.mag(ml) + a1 * base.mag(mkl);
        }
      }
    }
    return out;
  }

 private:
  ExpSumPotential pot_;
  ScalarC2 f_;
  double exp_bound_;
};

// Central stencils of second-order accuracy for d^n/dt^n, offsets and weights.
struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;  // divided by h^n by the caller
};

const Stencil& stencil(int n) {
  static const Stencil s[5] = {
      {{0}, {1.0}},
      {{-1, 1}, {-0.5, 0.5}},
      {{-1, 0, 1}, {1.0, -2.0, 1.0}},
      {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}},
      {{-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}},
  };
  return s[n];
}

complex fd_estimate(const JetProvider& provider, const Point4& x, const MultiIndex& m,
                    double h) {
  // Tensor product of per-slot central stencils.
  std::array<const Stencil*, 4> st{&stencil(m[0]), &stencil(m[1]), &stencil(m[2]),
                                   &stencil(m[3])};
  complex sum = 0;
  const size_t n0 = st[0]->offsets.size(), n1 = st[1]->offsets.size(),
               n2 = st[2]->offsets.size(), n3 = st[3]->offsets.size();
  for (size_t i0 = 0; i0 < n0; ++i0)
    for (size_t i1 = 0; i1 < n1; ++i1)
      for (size_t i2 = 0; i2 < n2; ++i2)
        for (size_t i3 = 0; i3 < n3; ++i3) {
          Point4 q = x;
          q[0] += h * st[0]->offsets[i0];
          q[1] += h * st[1]->offsets[i1];
          q[2] += h * st[2]->offsets[i2];
          q[3] += h * st[3]->offsets[i3];
          const double w = st[0]->weights[i0] * st[1]->weights[i1] *
                           st[2]->weights[i2] * st[3]->weights[i3];
          sum += w * provider.jet_at(q, 0).value();
        }
  return sum / std::pow(h, total_degree(m));
}

}  // namespace

std::shared_ptr<JetProvider> compose_scalar(ExpSumPotential pot, ScalarC2 f,
                                            double exp_bound) {
  return std::make_shared<ComposedProvider>(std::move(pot), std::move(f), exp_bound);
}

complex fd_oracle(const JetProvider& provider, const Point4& x, const MultiIndex& m,
                  double step) {
  if (total_degree(m) > 4)
    throw Error(ErrorKind::InvalidArgument, "fd_oracle supports degree <= 4");
  if (step <= 0) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  if (total_degree(m) == 0) return provider.jet_at(x, 0).value();
  const complex coarse = fd_estimate(provider, x, m, step);
  const complex fine = fd_estimate(provider, x, m, step / 2);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace heavenly

#include "heavenly/families.hpp"

#include <cmath>

namespace heavenly::families {

namespace {
constexpr double kDegenerate = 1e-12;
}

std::string family_name(FamilyId id) {
  switch (id) {
    case FamilyId::HcmaDilat: return "hcma-dilat";
    case FamilyId::HcmaTrans: return "hcma-trans";
    case FamilyId::HeavenEqual: return "heaven-equal";
    case FamilyId::HeavenZero: return "heaven-zero";
  }
  return "unknown";
}

FamilyId family_from_name(const std::string& name) {
  if (name == "hcma-dilat") return FamilyId::HcmaDilat;
  if (name == "hcma-trans") return FamilyId::HcmaTrans;
  if (name == "heaven-equal") return FamilyId::HeavenEqual;
  if (name == "heaven-zero") return FamilyId::HeavenZero;
  throw Error(ErrorKind::InvalidArgument, "unknown family '" + name + "'");
}

FrameId family_frame(FamilyId id) {
  switch (id) {
    case FamilyId::HcmaDilat:
    case FamilyId::HcmaTrans:
      return FrameId::HcmaLegendre;
    case FamilyId::HeavenEqual:
    case FamilyId::HeavenZero:
      return FrameId::HeavenLegendre;
  }
  return FrameId::Generic;
}

complex solve_alpha_polar(complex a, double mu) {
  const double r = std::abs(a);
  if (r == 0) throw Error(ErrorKind::DivisionByZero, "a must be nonzero");
  const double theta = std::arg(a);
  const double chi = 2.0 * r * std::cos(theta + mu);
  if (std::abs(chi) < kDegenerate * 2.0 * r)
    throw Error(ErrorKind::DegenerateTerm,
                "chi = 2|a| cos(arg a + mu) vanishes at mu = " + std::to_string(mu));
  return chi * complex(std::cos(mu), std::sin(mu));
}

complex beta_from_alpha_dilat(complex a, complex b, complex alpha) {
  const complex abar = std::conj(a);
  if (std::abs(abar) == 0)
    throw Error(ErrorKind::DivisionByZero, "a must be nonzero");
  const complex bbar = std::conj(b);
  return complex(0, 1) * (alpha * alpha - (abar + complex(0, 1) * bbar) * alpha) / abar;
}

complex beta_from_alpha_trans(complex nu, complex alpha) {
  if (std::abs(alpha) < kDegenerate)
    throw Error(ErrorKind::DivisionByZero, "alpha must be nonzero");
  const complex i(0, 1);
  return (nu + i - i * alpha / std::conj(alpha)) * alpha;
}

complex bridge_dilat_trans(complex a, complex nu) {
  if (std::abs(std::conj(a) + a) > kDegenerate * std::abs(a))
    throw Error(ErrorKind::Incompatible, "requires conj(a) = -a (purely imaginary a)");
  return (std::conj(nu) - complex(0, 1)) * a;
}

HeavenExponents exponents_heaven(FamilyId family, complex beta, complex gamma) {
  const double scale = std::max({std::abs(beta), std::abs(gamma), 1.0});
  if (std::abs(beta) < kDegenerate)
    throw Error(ErrorKind::DivisionByZero, "beta must be nonzero");
  if (family == FamilyId::HeavenEqual) {
    if (std::abs(gamma - beta) < kDegenerate * scale)
      throw Error(ErrorKind::DivisionByZero, "gamma = beta is degenerate");
    return {beta * beta / (gamma - beta), -gamma * gamma / beta};
  }
  if (family == FamilyId::HeavenZero) {
    if (std::abs(gamma) < kDegenerate)
      throw Error(ErrorKind::DivisionByZero, "gamma must be nonzero");
    return {beta * beta / gamma, -gamma * gamma / beta};
  }
  throw Error(ErrorKind::InvalidArgument, "not a heaven family");
}

namespace {

ExpSumPotential build_hcma_dilat(const HcmaDilatParams& p) {
  if (p.mu.size() != p.c.size())
    throw Error(ErrorKind::InvalidArgument, "mu and c must have equal length");
  ExpSumPotential out;
  out.frame = FrameId::HcmaLegendre;
  for (size_t j = 0; j < p.mu.size(); ++j) {
    const complex alpha = solve_alpha_polar(p.a, p.mu[j]);
    const complex beta = beta_from_alpha_dilat(p.a, p.b, alpha);
    out.terms.push_back(
        {complex(p.c[j], 0), {alpha, std::conj(alpha), beta, std::conj(beta)}});
  }
  return out;
}

ExpSumPotential build_hcma_trans(const HcmaTransParams& p) {
  if (p.alpha.size() != p.c.size())
    throw Error(ErrorKind::InvalidArgument, "alpha and c must have equal length");
  ExpSumPotential out;
  out.frame = FrameId::HcmaLegendre;
  for (size_t j = 0; j < p.alpha.size(); ++j) {
    const complex beta = beta_from_alpha_trans(p.nu, p.alpha[j]);
    out.terms.push_back(
        {complex(p.c[j], 0), {p.alpha[j], std::conj(p.alpha[j]), beta, std::conj(beta)}});
  }
  return out;
}

ExpSumPotential build_heaven(FamilyId id, const HeavenParams& p) {
  if (p.beta.size() != p.gamma.size() || p.beta.size() != p.c.size())
    throw Error(ErrorKind::InvalidArgument, "beta, gamma, c must have equal length");
  ExpSumPotential out;
  out.frame = FrameId::HeavenLegendre;
  for (size_t j = 0; j < p.beta.size(); ++j) {
    const HeavenExponents e = exponents_heaven(id, p.beta[j], p.gamma[j]);
    // slots (t, r, x, z) carry (alpha, beta, gamma, delta)
    out.terms.push_back({p.c[j], {e.alpha, p.beta[j], p.gamma[j], e.delta}});
  }
  return out;
}

double rel_residual(complex lhs, complex rhs) {
  const double scale = std::abs(lhs) + std::abs(rhs);
  if (scale == 0) return 0;
  return std::abs(lhs - rhs) / scale;
}

}  // namespace

ExpSumPotential build_solution(FamilyId family, const FamilyParams& params) {
  switch (family) {
    case FamilyId::HcmaDilat:
      return build_hcma_dilat(std::get<HcmaDilatParams>(params));
    case FamilyId::HcmaTrans:
      return build_hcma_trans(std::get<HcmaTransParams>(params));
    case FamilyId::HeavenEqual:
    case FamilyId::HeavenZero:
      return build_heaven(family, std::get<HeavenParams>(params));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown family");
}

ConstraintReport validate(FamilyId family, const FamilyParams& params,
                          const ExpSumPotential& pot) {
  if (pot.frame != family_frame(family))
    throw Error(ErrorKind::FrameMismatch, "potential frame does not match family");
  ConstraintReport rep;
  rep.family = family;

  auto push = [&rep](int term, const std::string& name, double r) {
    rep.residuals.push_back({term, name, r});
    rep.max_residual = std::max(rep.max_residual, r);
  };

  const bool hcma =
      family == FamilyId::HcmaDilat || family == FamilyId::HcmaTrans;
  if (hcma) rep.conjugation_ok = has_conjugation_structure(pot);

  for (size_t j = 0; j < pot.terms.size(); ++j) {
    const Vec4c& e = pot.terms[j].exponents;
    const int t = static_cast<int>(j);
    switch (family) {
      case FamilyId::HcmaDilat: {
        const auto& p = std::get<HcmaDilatParams>(params);
        const complex alpha = e[0], beta = e[2];
        // |alpha|^2 = a alpha + conj(a) conj(alpha)
        push(t, "alpha-modulus",
             rel_residual(std::norm(alpha),
                          p.a * alpha + std::conj(p.a) * std::conj(alpha)));
        push(t, "beta-from-alpha",
             rel_residual(beta, beta_from_alpha_dilat(p.a, p.b, alpha)));
        if (std::abs(alpha) < kDegenerate) rep.zero_exponent_terms.push_back(t);
        break;
      }
      case FamilyId::HcmaTrans: {
        const auto& p = std::get<HcmaTransParams>(params);
        const complex alpha = e[0], beta = e[2];
        if (std::abs(alpha) < kDegenerate) {
          rep.zero_exponent_terms.push_back(t);
          push(t, "alpha-nonzero", 1.0);
          break;
        }
        push(t, "beta-from-alpha",
             rel_residual(beta, beta_from_alpha_trans(p.nu, alpha)));
        break;
      }
      case FamilyId::HeavenEqual:
      case FamilyId::HeavenZero: {
        const complex alpha = e[0], beta = e[1], gamma = e[2], delta = e[3];
        if (std::abs(beta) < kDegenerate) {
          rep.zero_exponent_terms.push_back(t);
          push(t, "beta-nonzero", 1.0);
          break;
        }
        const HeavenExponents ref = exponents_heaven(family, beta, gamma);
        push(t, "alpha-relation", rel_residual(alpha, ref.alpha));
        push(t, "delta-relation", rel_residual(delta, ref.delta));
        break;
      }
    }
  }
  return rep;
}

}  // namespace heavenly::families

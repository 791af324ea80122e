#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sswalk/error.hpp"
#include "sswalk/lattice.hpp"
#include "sswalk/params.hpp"
#include "sswalk/walk.hpp"

// Birth eigenspaces B_+- = ker(S +- 1) cap ker(C + 1): eigenvectors of U with
// eigenvalue +-1 that the discriminant T cannot see.
//
// Every element has the form Psi_j = (-(q_j/(p_j +- 1)) psi_j(. + e_j), psi_j)
// where (psi_1, ..., psi_n) solves
//   sum_j [ -(q_j/(p_j +- 1)) conj(Phi_{j,1}) psi_j(x + e_j) + conj(Phi_{j,2}) psi_j(x) ] = 0
// for every x != 0. The construction below solves it axis by axis.

namespace sswalk {

/// +1 selects B_+ (eigenvalue +1, S Psi = -Psi), -1 selects B_- (eigenvalue -1).
enum class Sign : int { Plus = 1, Minus = -1 };

inline double sign_value(Sign s) { return static_cast<double>(static_cast<int>(s)); }
inline char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

enum class Multiplicity { Zero, One, Infinite };

inline const char *to_string(Multiplicity m) {
  switch (m) {
  case Multiplicity::Zero: return "0";
  case Multiplicity::One: return "1";
  case Multiplicity::Infinite: return "inf";
  }
  return "?";
}

enum class BirthCase { BothZero, Phi1Zero, Phi2Zero, ModLessOne, ModGreaterOne, ModOne };

inline const char *to_string(BirthCase c) {
  switch (c) {
  case BirthCase::BothZero: return "BothZero";
  case BirthCase::Phi1Zero: return "Phi1Zero";
  case BirthCase::Phi2Zero: return "Phi2Zero";
  case BirthCase::ModLessOne: return "ModLessOne";
  case BirthCase::ModGreaterOne: return "ModGreaterOne";
  case BirthCase::ModOne: return "ModOne";
  }
  return "?";
}

/// Components of Phi at or below this modulus count as zero.
inline constexpr double kZeroComponent = 1e-12;
/// Relative tolerance for deciding |r| = 1.
inline constexpr double kUnitModulusTolerance = 1e-12;
/// Tail mass discarded when truncating a geometric profile.
inline constexpr double kTailMass = 1e-24;

/// q_j / (p_j +- 1): the coupling between Psi_{j,1}(x) and psi_j(x + e_j).
inline cplx lift_coefficient(const WalkParameters &params, int j, Sign sign) {
  return params.q(j) / (params.p(j) + sign_value(sign));
}

/// r_j = (q_j/(p_j +- 1)) conj(Phi_{j,1}) / conj(Phi_{j,2}), defined when Phi_{j,1} Phi_{j,2} != 0.
inline std::optional<cplx> decay_ratio(const WalkParameters &params, int j, Sign sign) {
  const cplx phi1 = params.phi(j, 0);
  const cplx phi2 = params.phi(j, 1);
  if (std::abs(phi1) <= kZeroComponent || std::abs(phi2) <= kZeroComponent) return std::nullopt;
  return lift_coefficient(params, j, sign) * std::conj(phi1) / std::conj(phi2);
}

inline BirthCase classify_axis(const WalkParameters &params, int j, Sign sign) {
  const bool z1 = std::abs(params.phi(j, 0)) <= kZeroComponent;
  const bool z2 = std::abs(params.phi(j, 1)) <= kZeroComponent;
  if (z1 && z2) return BirthCase::BothZero;
  if (z1) return BirthCase::Phi1Zero;
  if (z2) return BirthCase::Phi2Zero;
  const double m = std::abs(*decay_ratio(params, j, sign));
  if (std::abs(m - 1.0) <= kUnitModulusTolerance) return BirthCase::ModOne;
  return m < 1.0 ? BirthCase::ModLessOne : BirthCase::ModGreaterOne;
}

/// dim B_+-: infinite for n >= 2; for n = 1 it is 1 unless
/// |q Phi_1| = |(p +- 1) Phi_2|.
inline Multiplicity classify_multiplicity(const WalkParameters &params, Sign sign) {
  if (params.n() >= 2) return Multiplicity::Infinite;
  const double lhs = std::abs(params.q(0) * params.phi(0, 0));
  const double rhs = std::abs((params.p(0) + sign_value(sign)) * params.phi(0, 1));
  return std::abs(lhs - rhs) <= kUnitModulusTolerance ? Multiplicity::Zero : Multiplicity::One;
}

struct BirthSpec {
  Sign sign = Sign::Plus;
  std::vector<BirthCase> case_per_axis;
  std::vector<std::optional<cplx>> r_per_axis;
  std::vector<cplx> free_params;
};

inline BirthSpec make_birth_spec(const WalkParameters &params, Sign sign) {
  BirthSpec spec;
  spec.sign = sign;
  for (int j = 0; j < params.n(); ++j) {
    spec.case_per_axis.push_back(classify_axis(params, j, sign));
    spec.r_per_axis.push_back(decay_ratio(params, j, sign));
    spec.free_params.emplace_back(0.0);
  }
  return spec;
}

/// Number of geometric terms kept so that the discarded tail
/// sum_{c > R} |rho|^{2c} stays below kTailMass (rho = min(|r|, 1/|r|)).
inline std::int64_t truncation_radius(double modulus) {
  const double rho = modulus < 1.0 ? modulus : 1.0 / modulus;
  if (!(rho > 0.0 && rho < 1.0))
    throw WalkError(ErrorKind::CaseUnavailable, "no geometric decay for |r| = " + std::to_string(modulus));
  const double decay = -2.0 * std::log(rho);
  const double target = -std::log(kTailMass) - std::log(1.0 - rho * rho);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(target / decay)));
}

/// One axis of the recipe: a field psi_j with psi_j(x) = r_j psi_j(x + e_j) off
/// the origin, seeded with `seed`.
///
/// BothZero -> seed delta_0, Phi1Zero -> seed delta_0, Phi2Zero -> seed delta_{e_j},
/// ModLessOne -> psi(c e_j) = r^{-c} seed for c <= 0,
/// ModGreaterOne -> psi(c e_j) = r^{-c+1} seed for c > 0.
inline ScalarField construct_psi_component(const WalkParameters &params, int j, Sign sign,
                                           cplx seed) {
  const int n = params.n();
  const BirthCase c = classify_axis(params, j, sign);
  if (c == BirthCase::ModOne)
    throw WalkError(ErrorKind::CaseUnavailable,
                    "|r| = 1 on axis " + std::to_string(j + 1) + ": only the zero field solves the recurrence");
  std::int64_t reach = 1;
  std::optional<cplx> r = decay_ratio(params, j, sign);
  if (r) reach = truncation_radius(std::abs(*r)) + 1;
  std::vector<std::int64_t> radii(static_cast<std::size_t>(n), 2);
  radii[static_cast<std::size_t>(j)] = reach + 2;
  ScalarField psi(LatticeWindow::zero_padded(radii), FieldSpace::Full);
  Site x(static_cast<std::size_t>(n), 0);
  auto set = [&](std::int64_t along, cplx v) {
    x[static_cast<std::size_t>(j)] = along;
    psi[psi.window().index(x)] = v;
  };
  switch (c) {
  case BirthCase::BothZero:
  case BirthCase::Phi1Zero:
    set(0, seed);
    break;
  case BirthCase::Phi2Zero:
    set(1, seed);
    break;
  case BirthCase::ModLessOne: {
    // psi(-m) = r^m seed, built by repeated multiplication so psi(x) = r psi(x+1) exactly.
    cplx v = seed;
    for (std::int64_t m = 0; m < reach; ++m) {
      set(-m, v);
      v *= *r;
    }
    break;
  }
  case BirthCase::ModGreaterOne: {
    const cplx inv = 1.0 / *r;
    cplx v = seed;
    for (std::int64_t m = 1; m <= reach; ++m) {
      set(m, v);
      v *= inv;
    }
    break;
  }
  case BirthCase::ModOne:
    break;
  }
  return psi;
}

struct BirthVector {
  BirthSpec spec;
  WaveFunction state;
  /// ||Psi(x)||^2 per site of state.window(); closed form when available (n = 1).
  std::vector<double> profile;
  bool profile_closed_form = false;
  double residual = 0.0;       ///< ||U Psi -+ Psi||
  double shift_residual = 0.0; ///< max_x |(S Psi +- Psi)(x)|
  double coin_residual = 0.0;  ///< max_{x != 0} |<Phi, Psi(x)>|
};

struct BirthChecks {
  double residual;
  double shift_residual;
  double coin_residual;
};

/// Membership checks against B_+- computed on the state's own window. Pass
/// homogeneous = true to test against the defect-free coin instead.
inline BirthChecks birth_checks(const WalkParameters &params, const WaveFunction &psi, Sign sign,
                                bool homogeneous = false) {
  const double s = sign_value(sign);
  const WaveFunction coin = homogeneous ? apply_homogeneous_coin(params, psi) : apply_coin(params, psi);
  WaveFunction u = apply_shift(params, coin);
  WaveFunction target = psi;
  target *= s;
  const double residual = (u - target).norm();
  WaveFunction sp = apply_shift(params, psi);
  WaveFunction shifted = psi;
  shifted *= s;
  sp += shifted;
  double shift_res = 0.0;
  for (const cplx &a : sp.data()) shift_res = std::max(shift_res, std::abs(a));
  const LatticeWindow &w = psi.window();
  double coin_res = 0.0;
  for (std::size_t site = 0; site < w.size(); ++site) {
    if (!homogeneous && w.is_origin(site)) continue;
    cplx overlap{};
    for (int j = 0; j < params.n(); ++j)
      for (int k = 0; k < 2; ++k) overlap += std::conj(params.phi(j, k)) * psi.at(site, j, k);
    coin_res = std::max(coin_res, std::abs(overlap));
  }
  return {residual, shift_res, coin_res};
}

namespace detail {

inline void fill_profile_from_state(BirthVector &bv) {
  const LatticeWindow &w = bv.state.window();
  bv.profile.assign(w.size(), 0.0);
  for (std::size_t s = 0; s < w.size(); ++s) bv.profile[s] = bv.state.site_norm_sq(s);
  bv.profile_closed_form = false;
}

} // namespace detail

/// Builds Psi_j,1(x) = -(q_j/(p_j +- 1)) psi_j(x + e_j), Psi_j,2(x) = psi_j(x),
/// normalizes, and records the eigen-residual and membership checks.
inline BirthVector assemble_birth_vector(const WalkParameters &params, Sign sign,
                                         const std::vector<ScalarField> &components,
                                         double max_residual = 1e-8) {
  const int n = params.n();
  if (static_cast<int>(components.size()) != n)
    throw WalkError(ErrorKind::DimensionError, "need one psi component per axis");
  std::vector<std::int64_t> radii(static_cast<std::size_t>(n), 1);
  for (const ScalarField &f : components) {
    if (f.dim() != n) throw WalkError(ErrorKind::WindowMismatch, "component has the wrong dimension");
    if (f.window().periodic()) throw WalkError(ErrorKind::WindowMismatch, "components must be ZeroPadded");
    for (int j = 0; j < n; ++j)
      radii[static_cast<std::size_t>(j)] =
          std::max(radii[static_cast<std::size_t>(j)], f.window().radii()[static_cast<std::size_t>(j)]);
  }
  // One extra site on every side keeps U Psi inside the window.
  for (auto &r : radii) r += 2;
  const LatticeWindow w = LatticeWindow::zero_padded(radii);
  WaveFunction psi(w);
  for (int j = 0; j < n; ++j) {
    const ScalarField f = components[static_cast<std::size_t>(j)].embedded(w);
    const cplx lift = lift_coefficient(params, j, sign);
    for (std::size_t s = 0; s < w.size(); ++s) {
      const std::size_t up = w.neighbor(s, j, +1);
      psi.at(s, j, 0) = -lift * (up == LatticeWindow::npos ? cplx{} : f[up]);
      psi.at(s, j, 1) = f[s];
    }
  }
  const double norm = psi.norm();
  if (norm == 0.0) throw WalkError(ErrorKind::ZeroVector, "all psi components vanish");
  psi *= 1.0 / norm;

  BirthVector bv;
  bv.spec = make_birth_spec(params, sign);
  bv.state = std::move(psi);
  const BirthChecks checks = birth_checks(params, bv.state, sign);
  bv.residual = checks.residual;
  bv.shift_residual = checks.shift_residual;
  bv.coin_residual = checks.coin_residual;
  detail::fill_profile_from_state(bv);
  if (!(bv.residual <= max_residual))
    throw WalkError(ErrorKind::ResidualTooLarge,
                    "||U Psi -+ Psi|| = " + std::to_string(bv.residual) + " exceeds " +
                        std::to_string(max_residual));
  return bv;
}

/// Seeds that normalize the one-dimensional recipe; only the entry for the
/// active case is set.
struct NormalizationConstants {
  BirthCase birth_case = BirthCase::ModOne;
  std::optional<double> a, b, t, u;

  double seed() const {
    if (a) return *a;
    if (b) return *b;
    if (t) return *t;
    if (u) return *u;
    return 0.0;
  }
};

inline NormalizationConstants normalization_constants(const WalkParameters &params, Sign sign) {
  if (params.n() != 1) throw WalkError(ErrorKind::DimensionError, "normalization constants are one-dimensional");
  if (classify_multiplicity(params, sign) == Multiplicity::Zero)
    throw WalkError(ErrorKind::CaseUnavailable, std::string("M") + sign_char(sign) + " = 0");
  const double p = params.p(0);
  const double s = sign_value(sign);
  const double lift_sq = std::norm(lift_coefficient(params, 0, sign));
  const double f1 = std::norm(params.phi(0, 0));
  const double f2 = std::norm(params.phi(0, 1));
  NormalizationConstants out;
  out.birth_case = classify_axis(params, 0, sign);
  switch (out.birth_case) {
  case BirthCase::Phi1Zero:
    out.a = 1.0 / std::sqrt(1.0 + lift_sq);
    break;
  case BirthCase::Phi2Zero:
    out.b = 1.0 / std::sqrt(1.0 + lift_sq);
    break;
  case BirthCase::ModLessOne:
    out.t = 1.0 / std::sqrt((1.0 + lift_sq) * (1.0 + s * p) * f2 /
                            (-(1.0 - s * p) * f1 + (1.0 + s * p) * f2));
    break;
  case BirthCase::ModGreaterOne:
    out.u = 1.0 / std::sqrt((1.0 + lift_sq) * (1.0 - s * p) * f1 /
                            ((1.0 - s * p) * f1 - (1.0 + s * p) * f2));
    break;
  default:
    throw WalkError(ErrorKind::CaseUnavailable, to_string(out.birth_case));
  }
  return out;
}

/// ||Psi_+-(x)||^2 in closed form for n = 1.
///
/// Geometric cases use |Phi_1|^{2(1 - delta(x))} (decaying side x <= 0) and
/// |Phi_2|^{2(1 - delta(x))} with |r|^{-2x} (decaying side x >= 0); these are
/// the placements that follow from evaluating Psi_+- site by site.
inline double closed_form_profile(const WalkParameters &params, Sign sign, std::int64_t x) {
  const NormalizationConstants nc = normalization_constants(params, sign);
  const double p = params.p(0);
  const double s = sign_value(sign);
  const double f1 = std::norm(params.phi(0, 0));
  const double f2 = std::norm(params.phi(0, 1));
  switch (nc.birth_case) {
  case BirthCase::Phi1Zero:
    if (x == -1) return (1.0 - s * p) / 2.0;
    if (x == 0) return (1.0 + s * p) / 2.0;
    return 0.0;
  case BirthCase::Phi2Zero:
    if (x == 0) return (1.0 - s * p) / 2.0;
    if (x == 1) return (1.0 + s * p) / 2.0;
    return 0.0;
  case BirthCase::ModLessOne: {
    if (x > 0) return 0.0;
    const double r2 = std::norm(*decay_ratio(params, 0, sign));
    const double num = -f1 + f2 + s * p;
    const double den = 2.0 * (x == 0 ? 1.0 : f1) * f2;
    return num / den * std::pow(r2, -static_cast<double>(x));
  }
  case BirthCase::ModGreaterOne: {
    if (x < 0) return 0.0;
    const double r2 = std::norm(*decay_ratio(params, 0, sign));
    const double num = f1 - f2 - s * p;
    const double den = 2.0 * f1 * (x == 0 ? 1.0 : f2);
    return num / den * std::pow(r2, -static_cast<double>(x));
  }
  default:
    throw WalkError(ErrorKind::CaseUnavailable, to_string(nc.birth_case));
  }
}

/// Normalized witness of B_+-.
///
/// n = 1: the recipe seeded with the normalization constant, with the
/// closed-form profile attached. n >= 2: the first axis whose case admits a
/// nonzero solution carries the recipe, every other axis is zero; if every
/// axis has |r_j| = 1 the finite-support kernel element anchored at (1, 1) is
/// used instead.
inline BirthVector finite_support_member(const WalkParameters &params, Sign sign,
                                         std::int64_t a, std::int64_t b);

inline BirthVector birth_vector(const WalkParameters &params, Sign sign) {
  const int n = params.n();
  if (n == 1) {
    if (classify_multiplicity(params, sign) == Multiplicity::Zero)
      throw WalkError(ErrorKind::CaseUnavailable, std::string("M") + sign_char(sign) + " = 0");
    const NormalizationConstants nc = normalization_constants(params, sign);
    std::vector<ScalarField> comps{construct_psi_component(params, 0, sign, nc.seed())};
    BirthVector bv = assemble_birth_vector(params, sign, comps);
    bv.spec.free_params[0] = nc.seed();
    const LatticeWindow &w = bv.state.window();
    for (std::size_t s = 0; s < w.size(); ++s)
      bv.profile[s] = closed_form_profile(params, sign, w.coordinate(s, 0));
    bv.profile_closed_form = true;
    return bv;
  }
  for (int j = 0; j < n; ++j) {
    if (classify_axis(params, j, sign) == BirthCase::ModOne) continue;
    std::vector<ScalarField> comps;
    for (int i = 0; i < n; ++i) {
      if (i == j) {
        comps.push_back(construct_psi_component(params, j, sign, 1.0));
      } else {
        comps.emplace_back(LatticeWindow::zero_padded(n, 1), FieldSpace::Full);
      }
    }
    BirthVector bv = assemble_birth_vector(params, sign, comps);
    // The effective seed is psi_j at its anchor site after normalization.
    const BirthCase c = bv.spec.case_per_axis[static_cast<std::size_t>(j)];
    Site anchor(static_cast<std::size_t>(n), 0);
    if (c == BirthCase::Phi2Zero || c == BirthCase::ModGreaterOne) anchor[static_cast<std::size_t>(j)] = 1;
    bv.spec.free_params[static_cast<std::size_t>(j)] = bv.state.value(anchor, j, 1);
    return bv;
  }
  return finite_support_member(params, sign, 1, 1);
}

/// Element of the homogeneous kernel supported next to the anchor (a, b, 0, ...).
/// With A_j psi(x) = alpha_j psi(x + e_j) + beta_j psi(x),
/// alpha_j = -(q_j/(p_j +- 1)) conj(Phi_{j,1}) and beta_j = conj(Phi_{j,2}), the
/// coin condition reads A_1 psi_1 + A_2 psi_2 = 0, solved by
/// psi_1 = A_2 delta_(a,b), psi_2 = -A_1 delta_(a,b).
inline BirthVector finite_support_member(const WalkParameters &params, Sign sign, std::int64_t a,
                                         std::int64_t b) {
  const int n = params.n();
  if (n < 2) throw WalkError(ErrorKind::DimensionError, "finite-support family needs n >= 2");
  const cplx alpha1 = -lift_coefficient(params, 0, sign) * std::conj(params.phi(0, 0));
  const cplx beta1 = std::conj(params.phi(0, 1));
  const cplx alpha2 = -lift_coefficient(params, 1, sign) * std::conj(params.phi(1, 0));
  const cplx beta2 = std::conj(params.phi(1, 1));
  if (alpha1 == cplx{} && beta1 == cplx{} && alpha2 == cplx{} && beta2 == cplx{})
    throw WalkError(ErrorKind::AnchorClash, "kernel element vanishes identically");
  std::vector<std::int64_t> radii(static_cast<std::size_t>(n), 1);
  radii[0] = std::abs(a) + 2;
  radii[1] = std::abs(b) + 2;
  const LatticeWindow w = LatticeWindow::zero_padded(radii);
  ScalarField psi1(w), psi2(w);
  Site x(static_cast<std::size_t>(n), 0);
  auto at = [&](std::int64_t x1, std::int64_t x2) {
    x[0] = x1;
    x[1] = x2;
    return w.index(x);
  };
  psi1[at(a, b - 1)] += alpha2;
  psi1[at(a, b)] += beta2;
  psi2[at(a - 1, b)] -= alpha1;
  psi2[at(a, b)] -= beta1;
  std::vector<ScalarField> comps{psi1, psi2};
  for (int j = 2; j < n; ++j) comps.emplace_back(w, FieldSpace::Full);
  return assemble_birth_vector(params, sign, comps);
}

inline std::vector<BirthVector>
finite_support_family(const WalkParameters &params, Sign sign,
                      const std::vector<std::pair<std::int64_t, std::int64_t>> &anchors) {
  std::vector<BirthVector> out;
  out.reserve(anchors.size());
  for (const auto &[a, b] : anchors) out.push_back(finite_support_member(params, sign, a, b));
  return out;
}

/// Gram matrix G_{ab} = <v_a, v_b>, filled in a fixed pair order.
inline Eigen::MatrixXcd gram_matrix(const std::vector<BirthVector> &family) {
  const auto m = static_cast<Eigen::Index>(family.size());
  Eigen::MatrixXcd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index k = i; k < m; ++k) {
      g(i, k) = inner_product(family[static_cast<std::size_t>(i)].state,
                              family[static_cast<std::size_t>(k)].state);
      g(k, i) = std::conj(g(i, k));
    }
  return g;
}

inline double smallest_gram_eigenvalue(const std::vector<BirthVector> &family) {
  if (family.empty()) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram_matrix(family), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

} // namespace sswalk

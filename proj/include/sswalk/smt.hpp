#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "sswalk/error.hpp"
#include "sswalk/lattice.hpp"
#include "sswalk/params.hpp"
#include "sswalk/walk.hpp"

// Operators behind the spectral mapping theorem for the one-defect walk.
//
//   dtilde : H -> l^2(Z^n),          (dtilde Psi)(x) = <chi(x), Psi(x)>
//   iota   : l^2(Z^n\{0}) -> l^2(Z^n) extension by zero at the origin
//   d      = iota^* dtilde           (a coisometry, d d^* = 1)
//   Ttilde = dtilde S dtilde^*,  T = d S d^* = iota^* Ttilde iota = iota^* T0tilde iota
//
// Fields on l^2(Z^n\{0}) are ScalarFields tagged FieldSpace::Punctured.

namespace sswalk {

namespace detail {

inline void require_space(const ScalarField &f, FieldSpace space) {
  if (f.space() != space)
    throw WalkError(ErrorKind::SpaceMismatch,
                    space == FieldSpace::Full ? "expected a field on l^2(Z^n)"
                                              : "expected a field on l^2(Z^n \\ {0})");
}

inline cplx read(const ScalarField &f, std::size_t site) {
  return site == LatticeWindow::npos ? cplx{} : f[site];
}

} // namespace detail

/// iota: zero-extension of a punctured field.
inline ScalarField iota(const ScalarField &phi) {
  detail::require_space(phi, FieldSpace::Punctured);
  ScalarField out = phi.retagged(FieldSpace::Full);
  out[out.window().origin_index()] = cplx{};
  return out;
}

/// iota^*: restriction to Z^n \ {0}.
inline ScalarField iota_adjoint(const ScalarField &psi) {
  detail::require_space(psi, FieldSpace::Full);
  ScalarField out = psi.retagged(FieldSpace::Punctured);
  out[out.window().origin_index()] = cplx{};
  return out;
}

inline ScalarField apply_dtilde(const WalkParameters &params, const WaveFunction &psi) {
  const LatticeWindow &w = psi.window();
  detail::require_dimension(params, w);
  ScalarField out(w, FieldSpace::Full);
  for (std::size_t s = 0; s < w.size(); ++s) {
    const bool origin = w.is_origin(s);
    cplx acc{};
    for (int j = 0; j < params.n(); ++j)
      for (int k = 0; k < 2; ++k) acc += std::conj(params.chi(origin, j, k)) * psi.at(s, j, k);
    out[s] = acc;
  }
  return out;
}

inline WaveFunction apply_dtilde_adjoint(const WalkParameters &params, const ScalarField &psi) {
  detail::require_space(psi, FieldSpace::Full);
  const LatticeWindow &w = psi.window();
  detail::require_dimension(params, w);
  WaveFunction out(w);
  for (std::size_t s = 0; s < w.size(); ++s) {
    const bool origin = w.is_origin(s);
    for (int j = 0; j < params.n(); ++j)
      for (int k = 0; k < 2; ++k) out.at(s, j, k) = params.chi(origin, j, k) * psi[s];
  }
  return out;
}

inline ScalarField apply_d(const WalkParameters &params, const WaveFunction &psi) {
  return iota_adjoint(apply_dtilde(params, psi));
}

inline WaveFunction apply_d_adjoint(const WalkParameters &params, const ScalarField &phi) {
  return apply_dtilde_adjoint(params, iota(phi));
}

struct CoinIdentityDeviation {
  double via_dtilde = 0.0; ///< max_x |((2 dtilde^* dtilde - 1) Psi - C Psi)(x)|
  double via_d = 0.0;      ///< max_x |((2 d^* d - 1) Psi - C Psi)(x)|
  double max() const { return std::max(via_dtilde, via_d); }
};

/// Compares C against its factorizations through dtilde and d on one state.
inline CoinIdentityDeviation coin_identity_check(const WalkParameters &params,
                                                 const WaveFunction &psi) {
  const WaveFunction coin = apply_coin(params, psi);
  WaveFunction via_dtilde = apply_dtilde_adjoint(params, apply_dtilde(params, psi));
  via_dtilde *= 2.0;
  via_dtilde -= psi;
  WaveFunction via_d = apply_d_adjoint(params, apply_d(params, psi));
  via_d *= 2.0;
  via_d -= psi;
  return {max_site_deviation(via_dtilde, coin), max_site_deviation(via_d, coin)};
}

/// mu_j = q_j conj(Phi_{j,1}) Phi_{j,2}.
inline cplx hopping(const WalkParameters &params, int j) {
  return params.q(j) * std::conj(params.phi(j, 0)) * params.phi(j, 1);
}

/// V_0 = sum_j p_j (|Phi_{j,1}|^2 - |Phi_{j,2}|^2).
inline double onsite_potential(const WalkParameters &params) {
  double v = 0.0;
  for (int j = 0; j < params.n(); ++j)
    v += params.p(j) * (std::norm(params.phi(j, 0)) - std::norm(params.phi(j, 1)));
  return v;
}

/// (T0tilde psi)(x) = sum_j (mu_j psi(x + e_j) + conj(mu_j) psi(x - e_j)) + V_0 psi(x).
inline ScalarField apply_T0tilde(const WalkParameters &params, const ScalarField &psi) {
  detail::require_space(psi, FieldSpace::Full);
  const LatticeWindow &w = psi.window();
  detail::require_dimension(params, w);
  const double v0 = onsite_potential(params);
  ScalarField out(w, FieldSpace::Full);
  for (std::size_t s = 0; s < w.size(); ++s) {
    cplx acc = v0 * psi[s];
    for (int j = 0; j < params.n(); ++j) {
      const cplx mu = hopping(params, j);
      acc += mu * detail::read(psi, w.neighbor(s, j, +1)) +
             std::conj(mu) * detail::read(psi, w.neighbor(s, j, -1));
    }
    out[s] = acc;
  }
  return out;
}

/// Ttilde = sum_j (D_j + D_j^*) + V with D_j = q_j chi_{j,1}^* L_j chi_{j,2} and
/// V = sum_j p_j (|chi_{j,1}|^2 - |chi_{j,2}|^2); every chi factor vanishes at 0.
inline ScalarField apply_Ttilde(const WalkParameters &params, const ScalarField &psi) {
  detail::require_space(psi, FieldSpace::Full);
  const LatticeWindow &w = psi.window();
  detail::require_dimension(params, w);
  ScalarField out(w, FieldSpace::Full);
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (w.is_origin(s)) continue;
    cplx acc{};
    for (int j = 0; j < params.n(); ++j) {
      const double p = params.p(j);
      const cplx q = params.q(j);
      const cplx phi1 = params.phi(j, 0);
      const cplx phi2 = params.phi(j, 1);
      acc += p * (std::norm(phi1) - std::norm(phi2)) * psi[s];
      const std::size_t up = w.neighbor(s, j, +1);
      if (up != LatticeWindow::npos && !w.is_origin(up))
        acc += q * std::conj(phi1) * phi2 * psi[up];
      const std::size_t down = w.neighbor(s, j, -1);
      if (down != LatticeWindow::npos && !w.is_origin(down))
        acc += std::conj(q) * phi1 * std::conj(phi2) * psi[down];
    }
    out[s] = acc;
  }
  return out;
}

/// T = iota^* T0tilde iota on l^2(Z^n \ {0}).
inline ScalarField apply_T(const WalkParameters &params, const ScalarField &phi) {
  return iota_adjoint(apply_T0tilde(params, iota(phi)));
}

/// T = d S d^*, evaluated literally through the walk's shift operator.
inline ScalarField apply_T_via_shift(const WalkParameters &params, const ScalarField &phi) {
  return apply_d(params, apply_shift(params, apply_d_adjoint(params, phi)));
}

struct DenseOperator {
  Eigen::MatrixXcd entries;
  std::string basis;
  Eigen::Index dimension() const { return entries.rows(); }
};

struct DenseOptions {
  /// Largest matrix dimension that may be assembled.
  Eigen::Index max_dimension = 4096;
};

namespace detail {

inline void require_dense_budget(double dim, const DenseOptions &options) {
  if (dim > static_cast<double>(options.max_dimension))
    throw WalkError(ErrorKind::ResourceLimit,
                    "dense operator of dimension " + std::to_string(static_cast<long long>(dim)) +
                        " exceeds the budget " + std::to_string(options.max_dimension));
}

} // namespace detail

/// Matrix of U on the period-N torus with the defect at 0. Basis: sites in
/// lexicographic order, then components (j, k).
inline DenseOperator build_dense_U(const WalkParameters &params, std::int64_t period,
                                   const DenseOptions &options = {}) {
  if (period < 1) throw WalkError(ErrorKind::ConfigError, "torus period must be positive");
  detail::require_dense_budget(2.0 * params.n() * std::pow(static_cast<double>(period), params.n()),
                               options);
  const LatticeWindow w = LatticeWindow::torus(params.n(), period);
  const auto dim = static_cast<Eigen::Index>(w.size() * static_cast<std::size_t>(2 * params.n()));
  DenseOperator op{Eigen::MatrixXcd::Zero(dim, dim),
                   "torus N=" + std::to_string(period) + ", site-major lexicographic, then (j,k)"};
  WaveFunction basis(w);
  for (Eigen::Index c = 0; c < dim; ++c) {
    basis.data()[static_cast<std::size_t>(c)] = 1.0;
    const WaveFunction col = apply_evolution(params, basis);
    basis.data()[static_cast<std::size_t>(c)] = 0.0;
    for (Eigen::Index r = 0; r < dim; ++r) op.entries(r, c) = col.data()[static_cast<std::size_t>(r)];
  }
  return op;
}

/// Matrix of T on the torus minus the origin. Basis: torus sites in
/// lexicographic order with the origin skipped.
inline DenseOperator build_dense_T(const WalkParameters &params, std::int64_t period,
                                   const DenseOptions &options = {}) {
  if (period < 2) throw WalkError(ErrorKind::ConfigError, "torus period must be at least 2");
  detail::require_dense_budget(std::pow(static_cast<double>(period), params.n()) - 1.0, options);
  const LatticeWindow w = LatticeWindow::torus(params.n(), period);
  const std::size_t origin = w.origin_index();
  const auto dim = static_cast<Eigen::Index>(w.size() - 1);
  auto to_row = [origin](std::size_t site) {
    return static_cast<Eigen::Index>(site < origin ? site : site - 1);
  };
  DenseOperator op{Eigen::MatrixXcd::Zero(dim, dim),
                   "torus N=" + std::to_string(period) + " minus origin, lexicographic"};
  ScalarField basis(w, FieldSpace::Punctured);
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (s == origin) continue;
    basis[s] = 1.0;
    const ScalarField col = apply_T(params, basis);
    basis[s] = 0.0;
    for (std::size_t r = 0; r < w.size(); ++r) {
      if (r == origin) continue;
      op.entries(to_row(r), to_row(s)) = col[r];
    }
  }
  return op;
}

/// max |(A^* A - I)_{ij}|
inline double unitarity_deviation(const DenseOperator &op) {
  const Eigen::MatrixXcd g = op.entries.adjoint() * op.entries;
  return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

/// max |(A - A^*)_{ij}|
inline double hermiticity_deviation(const DenseOperator &op) {
  return (op.entries - op.entries.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace sswalk

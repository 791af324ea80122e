#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "sswalk/error.hpp"
#include "sswalk/lattice.hpp"
#include "sswalk/params.hpp"

namespace sswalk {

namespace detail {

inline void require_dimension(const WalkParameters &params, const LatticeWindow &window) {
  if (params.n() != window.dim())
    throw WalkError(ErrorKind::WindowMismatch,
                    "parameters are " + std::to_string(params.n()) +
                        "-dimensional but the window is " + std::to_string(window.dim()) +
                        "-dimensional");
}

inline cplx read(const WaveFunction &psi, std::size_t site, int j, int k) {
  return site == LatticeWindow::npos ? cplx{} : psi.at(site, j, k);
}

} // namespace detail

/// S = (+)_j S_j with
///   (S_j psi)(x) = (p_j psi_1(x) + q_j psi_2(x + e_j),
///                   conj(q_j) psi_1(x - e_j) - p_j psi_2(x)).
inline WaveFunction apply_shift(const WalkParameters &params, const WaveFunction &psi) {
  const LatticeWindow &w = psi.window();
  detail::require_dimension(params, w);
  WaveFunction out(w);
  for (std::size_t s = 0; s < w.size(); ++s) {
    for (int j = 0; j < params.n(); ++j) {
      const double p = params.p(j);
      const cplx q = params.q(j);
      const std::size_t up = w.neighbor(s, j, +1);
      const std::size_t down = w.neighbor(s, j, -1);
      out.at(s, j, 0) = p * psi.at(s, j, 0) + q * detail::read(psi, up, j, 1);
      out.at(s, j, 1) = std::conj(q) * detail::read(psi, down, j, 0) - p * psi.at(s, j, 1);
    }
  }
  return out;
}

namespace detail {

inline void reflect_about(std::span<const cplx> in, std::span<cplx> out,
                          const WalkParameters &params, bool zero_chi) {
  if (zero_chi) {
    for (std::size_t c = 0; c < in.size(); ++c) out[c] = -in[c];
    return;
  }
  cplx overlap{};
  for (int j = 0; j < params.n(); ++j)
    for (int k = 0; k < 2; ++k)
      overlap += std::conj(params.phi(j, k)) * in[static_cast<std::size_t>(2 * j + k)];
  for (int j = 0; j < params.n(); ++j)
    for (int k = 0; k < 2; ++k) {
      const auto c = static_cast<std::size_t>(2 * j + k);
      out[c] = 2.0 * overlap * params.phi(j, k) - in[c];
    }
}

} // namespace detail

/// (C Psi)(x) = 2 <chi(x), Psi(x)> chi(x) - Psi(x); C(0) = -1.
inline WaveFunction apply_coin(const WalkParameters &params, const WaveFunction &psi) {
  const LatticeWindow &w = psi.window();
  detail::require_dimension(params, w);
  WaveFunction out(w);
  for (std::size_t s = 0; s < w.size(); ++s)
    detail::reflect_about(psi.site_view(s), out.site_view(s), params, w.is_origin(s));
  return out;
}

/// Defect-free coin 2|Phi><Phi| - 1 at every site, origin included.
inline WaveFunction apply_homogeneous_coin(const WalkParameters &params,
                                           const WaveFunction &psi) {
  const LatticeWindow &w = psi.window();
  detail::require_dimension(params, w);
  WaveFunction out(w);
  for (std::size_t s = 0; s < w.size(); ++s)
    detail::reflect_about(psi.site_view(s), out.site_view(s), params, false);
  return out;
}

/// U = S C.
inline WaveFunction apply_evolution(const WalkParameters &params, const WaveFunction &psi) {
  return apply_shift(params, apply_coin(params, psi));
}

struct EvolveOptions {
  /// Largest number of lattice sites a light-cone window may hold.
  std::size_t site_budget = std::size_t{1} << 22;
};

/// Window on which `steps` applications of U never touch the boundary.
inline LatticeWindow light_cone_window(const WaveFunction &psi0, std::int64_t steps,
                                       const EvolveOptions &options = {}) {
  const std::int64_t r0 = std::max<std::int64_t>(psi0.support_radius(), 0);
  const std::int64_t radius = r0 + steps + 1;
  double sites = 1.0;
  for (int j = 0; j < psi0.dim(); ++j) sites *= static_cast<double>(2 * radius + 1);
  if (sites > static_cast<double>(options.site_budget))
    throw WalkError(ErrorKind::ResourceLimit,
                    "light-cone window of radius " + std::to_string(radius) + " needs " +
                        std::to_string(static_cast<long long>(sites)) + " sites (budget " +
                        std::to_string(options.site_budget) + ")");
  return LatticeWindow::zero_padded(psi0.dim(), radius);
}

/// Calls visit(t, U^t psi0) for t = 0..steps on an exact light-cone window,
/// so the result coincides with the infinite-lattice dynamics.
inline void evolve_fold(const WalkParameters &params, const WaveFunction &psi0,
                        std::int64_t steps,
                        const std::function<void(std::int64_t, const WaveFunction &)> &visit,
                        const EvolveOptions &options = {}) {
  if (steps < 0) throw WalkError(ErrorKind::ConfigError, "negative step count");
  detail::require_dimension(params, psi0.window());
  if (psi0.window().periodic())
    throw WalkError(ErrorKind::WindowMismatch, "evolve expects a ZeroPadded initial state");
  WaveFunction psi = psi0.embedded(light_cone_window(psi0, steps, options));
  visit(0, psi);
  for (std::int64_t t = 1; t <= steps; ++t) {
    psi = apply_evolution(params, psi);
    visit(t, psi);
  }
}

/// Snapshots U^t psi0 for t = 0..steps.
inline std::vector<WaveFunction> evolve(const WalkParameters &params, const WaveFunction &psi0,
                                        std::int64_t steps, const EvolveOptions &options = {}) {
  std::vector<WaveFunction> snapshots;
  snapshots.reserve(static_cast<std::size_t>(steps) + 1);
  evolve_fold(
      params, psi0, steps,
      [&](std::int64_t, const WaveFunction &psi) { snapshots.push_back(psi); }, options);
  return snapshots;
}

} // namespace sswalk

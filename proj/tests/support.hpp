#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "sswalk/sswalk.hpp"

namespace testing_support {

using sswalk::cplx;

inline cplx unit_phase(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, angle(rng));
}

/// Random admissible parameters: |p_j| < 0.95, |q_j| = sqrt(1 - p_j^2) with a
/// random phase, Phi a random unit vector in C^{2n}.
inline sswalk::RawParameters random_raw(std::mt19937_64 &rng, int n) {
  std::uniform_real_distribution<double> pd(-0.95, 0.95);
  std::normal_distribution<double> g(0.0, 1.0);
  sswalk::RawParameters raw;
  double norm_sq = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p = pd(rng);
    raw.p.push_back(p);
    raw.q.push_back(std::sqrt(1.0 - p * p) * unit_phase(rng));
    std::array<cplx, 2> phi{cplx{g(rng), g(rng)}, cplx{g(rng), g(rng)}};
    norm_sq += std::norm(phi[0]) + std::norm(phi[1]);
    raw.phi.push_back(phi);
  }
  const double scale = 1.0 / std::sqrt(norm_sq);
  for (auto &pair : raw.phi)
    for (auto &c : pair) c *= scale;
  return raw;
}

inline sswalk::WalkParameters random_params(std::mt19937_64 &rng, int n) {
  return sswalk::validate_params(random_raw(rng, n));
}

/// Random state supported on |x_j| <= support, living on `window`.
inline sswalk::WaveFunction random_state(std::mt19937_64 &rng, const sswalk::LatticeWindow &window,
                                         std::int64_t support) {
  std::normal_distribution<double> g(0.0, 1.0);
  sswalk::WaveFunction psi(window);
  for (std::size_t s = 0; s < window.size(); ++s) {
    bool inside = true;
    for (int j = 0; j < window.dim(); ++j)
      if (std::abs(window.coordinate(s, j)) > support) inside = false;
    if (!inside) continue;
    for (auto &a : psi.site_view(s)) a = {g(rng), g(rng)};
  }
  psi *= 1.0 / psi.norm();
  return psi;
}

inline sswalk::ScalarField random_field(std::mt19937_64 &rng, const sswalk::LatticeWindow &window,
                                        std::int64_t support,
                                        sswalk::FieldSpace space = sswalk::FieldSpace::Full) {
  std::normal_distribution<double> g(0.0, 1.0);
  sswalk::ScalarField f(window, space);
  for (std::size_t s = 0; s < window.size(); ++s) {
    bool inside = true;
    for (int j = 0; j < window.dim(); ++j)
      if (std::abs(window.coordinate(s, j)) > support) inside = false;
    if (inside) f[s] = {g(rng), g(rng)};
  }
  if (space == sswalk::FieldSpace::Punctured) f[window.origin_index()] = cplx{};
  return f;
}

inline double max_abs(const sswalk::WaveFunction &psi) {
  double m = 0.0;
  for (const cplx &a : psi.data()) m = std::max(m, std::abs(a));
  return m;
}

/// Parameters with |r_+| and |r_-| both at least `margin` away from 1.
inline sswalk::WalkParameters random_bound_state_params(std::mt19937_64 &rng, double margin = 0.05) {
  for (;;) {
    const sswalk::WalkParameters params = random_params(rng, 1);
    bool ok = true;
    for (sswalk::Sign s : {sswalk::Sign::Plus, sswalk::Sign::Minus}) {
      const auto r = sswalk::decay_ratio(params, 0, s);
      if (!r || std::abs(std::abs(*r) - 1.0) < margin) ok = false;
    }
    if (ok) return params;
  }
}

} // namespace testing_support

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "sswalk/error.hpp"

namespace sswalk {

using cplx = std::complex<double>;

/// Unchecked model parameters as they come from a config file or a test.
struct RawParameters {
  std::vector<double> p;
  std::vector<cplx> q;
  std::vector<std::array<cplx, 2>> phi;

  bool operator==(const RawParameters &) const = default;
};

/// Validated parameters of the one-defect split-step walk on Z^n.
///
/// Axis j carries the shift block (p_j, q_j) with p_j^2 + |q_j|^2 = 1 and
/// |p_j| < 1, and the coin vector Phi = (Phi_1, ..., Phi_n) has unit norm in
/// C^{2n}. Instances only come out of validate_params().
class WalkParameters {
public:
  static constexpr double kTolerance = 1e-12;

  int n() const noexcept { return static_cast<int>(p_.size()); }
  double p(int j) const { return p_[static_cast<std::size_t>(j)]; }
  cplx q(int j) const { return q_[static_cast<std::size_t>(j)]; }
  cplx phi(int j, int k) const {
    return phi_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
  }
  const std::array<cplx, 2> &phi_axis(int j) const {
    return phi_[static_cast<std::size_t>(j)];
  }

  /// chi(x) restricted to component (j, k): Phi_{j,k} off the origin, 0 on it.
  cplx chi(bool at_origin, int j, int k) const {
    return at_origin ? cplx{} : phi(j, k);
  }

  RawParameters raw() const { return {p_, q_, phi_}; }

  friend WalkParameters validate_params(const RawParameters &raw);

private:
  WalkParameters() = default;

  std::vector<double> p_;
  std::vector<cplx> q_;
  std::vector<std::array<cplx, 2>> phi_;
};

inline WalkParameters validate_params(const RawParameters &raw) {
  const std::size_t n = raw.p.size();
  if (n == 0 || raw.q.size() != n || raw.phi.size() != n) {
    throw WalkError(ErrorKind::DimensionError,
                    "p, q and phi must have the same positive length (got " +
                        std::to_string(raw.p.size()) + ", " +
                        std::to_string(raw.q.size()) + ", " +
                        std::to_string(raw.phi.size()) + ")");
  }
  double phi_norm_sq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double p = raw.p[j];
    const double q2 = std::norm(raw.q[j]);
    if (!std::isfinite(p) || !std::isfinite(q2) ||
        std::abs(p * p + q2 - 1.0) > WalkParameters::kTolerance) {
      throw WalkError(ErrorKind::UnitarityViolation,
                      "p^2 + |q|^2 != 1 on axis " + std::to_string(j + 1));
    }
    if (std::abs(p) >= 1.0 - WalkParameters::kTolerance) {
      throw WalkError(ErrorKind::DegenerateShift,
                      "|p| = 1 on axis " + std::to_string(j + 1) +
                          " means no shift along that axis");
    }
    phi_norm_sq += std::norm(raw.phi[j][0]) + std::norm(raw.phi[j][1]);
  }
  if (!std::isfinite(phi_norm_sq) ||
      std::abs(phi_norm_sq - 1.0) > WalkParameters::kTolerance) {
    throw WalkError(ErrorKind::UnnormalizedChi,
                    "||Phi||^2 = " + std::to_string(phi_norm_sq) + " != 1");
  }
  WalkParameters out;
  out.p_ = raw.p;
  out.q_ = raw.q;
  out.phi_ = raw.phi;
  return out;
}

namespace presets {

/// p = 3/5, q = 4/5, Phi = (1/sqrt2, 1/sqrt2); both birth eigenvalues present.
inline WalkParameters reference_1d() {
  const double s = 1.0 / std::sqrt(2.0);
  return validate_params({{0.6}, {cplx{0.8, 0.0}}, {{cplx{s}, cplx{s}}}});
}

/// p = 0, q = 1, Phi = (1/sqrt2, 1/sqrt2); no birth eigenvectors.
inline WalkParameters hadamard_like_1d() {
  const double s = 1.0 / std::sqrt(2.0);
  return validate_params({{0.0}, {cplx{1.0, 0.0}}, {{cplx{s}, cplx{s}}}});
}

/// p = (3/5, 3/5), q = (4/5, 4/5), Phi_j = (1/2, 1/2).
inline WalkParameters reference_2d() {
  return validate_params({{0.6, 0.6},
                          {cplx{0.8}, cplx{0.8}},
                          {{cplx{0.5}, cplx{0.5}}, {cplx{0.5}, cplx{0.5}}}});
}

} // namespace presets

} // namespace sswalk

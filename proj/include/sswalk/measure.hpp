#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sswalk/birth.hpp"
#include "sswalk/error.hpp"
#include "sswalk/lattice.hpp"
#include "sswalk/params.hpp"
#include "sswalk/walk.hpp"

namespace sswalk {

/// Axis-aligned box of sites, enumerated lexicographically.
struct SiteBox {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;

  static SiteBox range(std::int64_t a, std::int64_t b) { return {{a}, {b}}; }
  static SiteBox cube(int n, std::int64_t radius) {
    return {std::vector<std::int64_t>(static_cast<std::size_t>(n), -radius),
            std::vector<std::int64_t>(static_cast<std::size_t>(n), radius)};
  }

  int dim() const { return static_cast<int>(lo.size()); }
  std::size_t size() const {
    std::size_t s = 1;
    for (std::size_t j = 0; j < lo.size(); ++j)
      s *= static_cast<std::size_t>(std::max<std::int64_t>(0, hi[j] - lo[j] + 1));
    return s;
  }
  Site site(std::size_t i) const {
    Site x(lo.size());
    for (std::size_t j = lo.size(); j-- > 0;) {
      const auto ext = static_cast<std::size_t>(hi[j] - lo[j] + 1);
      x[j] = lo[j] + static_cast<std::int64_t>(i % ext);
      i /= ext;
    }
    return x;
  }
};

/// A real-valued measure on the sites of a box.
struct SiteMeasure {
  SiteBox box;
  std::vector<double> values;

  double total() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
};

struct MeasureReport {
  SiteBox sites;
  SiteMeasure nu_analytic;
  SiteMeasure nu_empirical;
  double overlap_plus = 0.0;  ///< |<Psi_+, Psi_0>|^2
  double overlap_minus = 0.0; ///< |<Psi_-, Psi_0>|^2
  std::int64_t horizon = 0;
  double sup_error = 0.0;
  double total_mass_analytic = 0.0;
};

/// Birth eigenvectors entering the time-averaged measure; absent when M = 0.
struct BirthPair {
  std::optional<BirthVector> plus;
  std::optional<BirthVector> minus;
};

inline BirthPair birth_pair(const WalkParameters &params) {
  BirthPair pair;
  if (classify_multiplicity(params, Sign::Plus) != Multiplicity::Zero) pair.plus = birth_vector(params, Sign::Plus);
  if (classify_multiplicity(params, Sign::Minus) != Multiplicity::Zero)
    pair.minus = birth_vector(params, Sign::Minus);
  return pair;
}

namespace detail {

inline void require_normalized(const WaveFunction &psi0) {
  if (std::abs(psi0.norm() - 1.0) > 1e-12)
    throw WalkError(ErrorKind::UnnormalizedInitial,
                    "||Psi_0|| = " + std::to_string(psi0.norm()) + " (must be 1)");
}

} // namespace detail

/// Squared overlaps (|<Psi_+, Psi_0>|^2, |<Psi_-, Psi_0>|^2).
inline std::pair<double, double> birth_overlaps(const BirthPair &pair, const WaveFunction &psi0) {
  const double op = pair.plus ? std::norm(inner_product(pair.plus->state, psi0)) : 0.0;
  const double om = pair.minus ? std::norm(inner_product(pair.minus->state, psi0)) : 0.0;
  return {op, om};
}

/// nu_inf(x) = sum_{s = +-} |<Psi_s, Psi_0>|^2 ||Psi_s(x)||^2 for n = 1.
inline SiteMeasure analytic_measure(const WalkParameters &params, const WaveFunction &psi0, SiteBox sites) {
  if (params.n() != 1 || psi0.dim() != 1 || sites.dim() != 1)
    throw WalkError(ErrorKind::DimensionError, "the time-averaged limit measure is available for n = 1 only");
  detail::require_normalized(psi0);
  const BirthPair pair = birth_pair(params);
  const auto [op, om] = birth_overlaps(pair, psi0);
  SiteMeasure nu{sites, std::vector<double>(sites.size(), 0.0)};
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const std::int64_t x = sites.site(i)[0];
    double v = 0.0;
    if (pair.plus) v += op * closed_form_profile(params, Sign::Plus, x);
    if (pair.minus) v += om * closed_form_profile(params, Sign::Minus, x);
    nu.values[i] = v;
  }
  return nu;
}

/// Cesaro mean (1/T) sum_{t < T} ||(U^t Psi_0)(x)||^2 on the sites of the box.
inline SiteMeasure empirical_measure(const WalkParameters &params, const WaveFunction &psi0,
                                     std::int64_t horizon, SiteBox sites,
                                     const EvolveOptions &options = {}) {
  if (horizon < 1) throw WalkError(ErrorKind::ConfigError, "averaging horizon must be >= 1");
  if (sites.dim() != params.n()) throw WalkError(ErrorKind::DimensionError, "site box has the wrong dimension");
  detail::require_normalized(psi0);
  SiteMeasure nu{sites, std::vector<double>(sites.size(), 0.0)};
  std::vector<std::size_t> lookup;
  evolve_fold(
      params, psi0, horizon - 1,
      [&](std::int64_t t, const WaveFunction &psi) {
        if (t == 0) {
          lookup.resize(sites.size());
          for (std::size_t i = 0; i < sites.size(); ++i) lookup[i] = psi.window().index(sites.site(i));
        }
        for (std::size_t i = 0; i < sites.size(); ++i)
          if (lookup[i] != LatticeWindow::npos) nu.values[i] += psi.site_norm_sq(lookup[i]);
      },
      options);
  for (double &v : nu.values) v /= static_cast<double>(horizon);
  return nu;
}

/// Largest sitewise |analytic - empirical| over a common box.
inline double sup_error(const SiteMeasure &a, const SiteMeasure &b) {
  if (a.values.size() != b.values.size() || a.box.lo != b.box.lo || a.box.hi != b.box.hi)
    throw WalkError(ErrorKind::WindowMismatch, "measures cover different sites");
  double e = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) e = std::max(e, std::abs(a.values[i] - b.values[i]));
  return e;
}

inline MeasureReport compare(const SiteMeasure &analytic, const SiteMeasure &empirical) {
  MeasureReport r;
  r.sites = analytic.box;
  r.nu_analytic = analytic;
  r.nu_empirical = empirical;
  r.sup_error = sup_error(analytic, empirical);
  return r;
}

/// Analytic and empirical measures for n = 1 with overlaps and totals filled in.
inline MeasureReport measure_report(const WalkParameters &params, const WaveFunction &psi0,
                                    std::int64_t horizon, SiteBox sites,
                                    const EvolveOptions &options = {}) {
  const SiteMeasure analytic = analytic_measure(params, psi0, sites);
  const SiteMeasure empirical = empirical_measure(params, psi0, horizon, sites, options);
  MeasureReport r = compare(analytic, empirical);
  const auto [op, om] = birth_overlaps(birth_pair(params), psi0);
  r.overlap_plus = op;
  r.overlap_minus = om;
  r.horizon = horizon;
  r.total_mass_analytic = op + om;
  return r;
}

} // namespace sswalk

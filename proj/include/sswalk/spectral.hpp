#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sswalk/birth.hpp"
#include "sswalk/error.hpp"
#include "sswalk/params.hpp"
#include "sswalk/smt.hpp"

namespace sswalk {

/// Band endpoints closer than this are treated as touching (a value, or +-1).
inline constexpr double kBandEdgeTolerance = 1e-12;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double v, double slack = 0.0) const { return v >= lo - slack && v <= hi + slack; }
};

/// Closed arc {e^{i xi} : xi in [from, to]} traversed counter-clockwise.
struct Arc {
  double from = 0.0;
  double to = 0.0;
};

struct PointEigenvalue {
  int eigenvalue = 1;
  Multiplicity multiplicity = Multiplicity::Zero;
};

struct SpectralSummary {
  std::vector<cplx> mu_j;
  double mu = 0.0;
  double V0 = 0.0;
  Interval band;
  std::vector<Arc> arcs;
  std::vector<PointEigenvalue> point_spectrum;
};

/// Arcs of the unit circle whose cosine lies in [lo, hi] (clamped to [-1, 1]).
inline std::vector<Arc> arcs_for_band(Interval band) {
  auto snap = [](double v) {
    if (std::abs(v - 1.0) <= kBandEdgeTolerance) return 1.0;
    if (std::abs(v + 1.0) <= kBandEdgeTolerance) return -1.0;
    return std::clamp(v, -1.0, 1.0);
  };
  const double lo = snap(band.lo);
  const double hi = snap(band.hi);
  const double pi = std::numbers::pi;
  const double a_hi = std::acos(hi); // smallest angle in the upper arc
  const double a_lo = std::acos(lo); // largest angle in the upper arc
  if (lo <= -1.0 && hi >= 1.0) return {{0.0, 2.0 * pi}};
  if (hi >= 1.0) return {{-a_lo, a_lo}};
  if (lo <= -1.0) return {{a_hi, 2.0 * pi - a_hi}};
  return {{a_hi, a_lo}, {-a_lo, -a_hi}};
}

inline SpectralSummary summarize(const WalkParameters &params) {
  SpectralSummary s;
  for (int j = 0; j < params.n(); ++j) {
    s.mu_j.push_back(hopping(params, j));
    s.mu += std::abs(s.mu_j.back());
  }
  s.V0 = onsite_potential(params);
  s.band = {s.V0 - 2.0 * s.mu, s.V0 + 2.0 * s.mu};
  s.arcs = arcs_for_band(s.band);
  s.point_spectrum = {{+1, classify_multiplicity(params, Sign::Plus)},
                      {-1, classify_multiplicity(params, Sign::Minus)}};
  return s;
}

/// sum_j 2 |mu_j| cos(k_j + arg mu_j) + V_0.
inline double fourier_symbol(const WalkParameters &params, std::span<const double> k) {
  if (static_cast<int>(k.size()) != params.n())
    throw WalkError(ErrorKind::DimensionError, "momentum has the wrong dimension");
  double v = onsite_potential(params);
  for (int j = 0; j < params.n(); ++j) {
    const cplx mu = hopping(params, j);
    v += 2.0 * std::abs(mu) * std::cos(k[static_cast<std::size_t>(j)] + std::arg(mu));
  }
  return v;
}

/// Eigenvalues of a unitary matrix, sorted by argument in (-pi, pi].
inline std::vector<cplx> torus_spectrum_unitary(const DenseOperator &op, double unit_tolerance = 1e-8) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.entries, false);
  if (es.info() != Eigen::Success)
    throw WalkError(ErrorKind::EigensolverFailure, "complex eigensolver did not converge");
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (const cplx &l : ev)
    if (std::abs(std::abs(l) - 1.0) > unit_tolerance)
      throw WalkError(ErrorKind::EigensolverFailure,
                      "eigenvalue off the unit circle by " + std::to_string(std::abs(std::abs(l) - 1.0)));
  std::sort(ev.begin(), ev.end(), [](const cplx &a, const cplx &b) {
    const double aa = std::arg(a), ab = std::arg(b);
    return aa != ab ? aa < ab : a.real() < b.real();
  });
  return ev;
}

/// Eigenvalues of a Hermitian matrix, ascending.
inline std::vector<double> torus_spectrum_hermitian(const DenseOperator &op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.entries, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw WalkError(ErrorKind::EigensolverFailure, "Hermitian eigensolver did not converge");
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end());
  return ev;
}

enum class EigenClass { Band, PlusOne, MinusOne, Outlier };

inline const char *to_string(EigenClass c) {
  switch (c) {
  case EigenClass::Band: return "band";
  case EigenClass::PlusOne: return "plus_one";
  case EigenClass::MinusOne: return "minus_one";
  case EigenClass::Outlier: return "outlier";
  }
  return "?";
}

inline EigenClass classify_eigenvalue(cplx lambda, Interval band, double exclusion, double margin) {
  if (std::abs(lambda - cplx{1.0}) <= exclusion) return EigenClass::PlusOne;
  if (std::abs(lambda + cplx{1.0}) <= exclusion) return EigenClass::MinusOne;
  return band.contains(std::cos(std::arg(lambda)), margin) ? EigenClass::Band : EigenClass::Outlier;
}

struct CoverageMetrics {
  double hausdorff = 0.0;
  double max_gap = 0.0;
  std::size_t outliers = 0;
  std::size_t plus_one = 0;
  std::size_t minus_one = 0;
  bool inconclusive = false;
};

/// Hausdorff distance between a finite set of reals and the band, the largest
/// gap between consecutive values inside the band (margin-widened), and the
/// number of values beyond the margin.
inline CoverageMetrics band_coverage_values(std::vector<double> values, Interval band, double margin) {
  CoverageMetrics m;
  if (values.empty()) {
    m.inconclusive = true;
    return m;
  }
  std::sort(values.begin(), values.end());
  double to_band = 0.0;
  for (double v : values) {
    const double d = v < band.lo ? band.lo - v : (v > band.hi ? v - band.hi : 0.0);
    to_band = std::max(to_band, d);
    if (!band.contains(v, margin)) ++m.outliers;
  }
  // sup over the band of the distance to the nearest value: attained at an
  // endpoint or at a midpoint between consecutive values.
  auto nearest = [&](double b) {
    auto it = std::lower_bound(values.begin(), values.end(), b);
    double d = std::numeric_limits<double>::infinity();
    if (it != values.end()) d = std::min(d, *it - b);
    if (it != values.begin()) d = std::min(d, b - *std::prev(it));
    return d;
  };
  double from_band = std::max(nearest(band.lo), nearest(band.hi));
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double mid = 0.5 * (values[i] + values[i + 1]);
    if (band.contains(mid)) from_band = std::max(from_band, nearest(mid));
  }
  m.hausdorff = std::max(to_band, from_band);
  std::vector<double> inside;
  for (double v : values)
    if (band.contains(v, margin)) inside.push_back(v);
  for (std::size_t i = 0; i + 1 < inside.size(); ++i)
    m.max_gap = std::max(m.max_gap, inside[i + 1] - inside[i]);
  return m;
}

/// Coverage of the band by cos(arg lambda) for the eigenvalues of U, skipping
/// those within `exclusion` of +1 or -1.
inline CoverageMetrics band_coverage(std::span<const cplx> eigenvalues, Interval band,
                                     double exclusion = 1e-6, double margin = 0.0) {
  std::vector<double> cosines;
  std::size_t plus = 0, minus = 0;
  for (const cplx &l : eigenvalues) {
    const EigenClass c = classify_eigenvalue(l, band, exclusion, margin);
    if (c == EigenClass::PlusOne) {
      ++plus;
    } else if (c == EigenClass::MinusOne) {
      ++minus;
    } else {
      cosines.push_back(std::cos(std::arg(l)));
    }
  }
  CoverageMetrics m = band_coverage_values(std::move(cosines), band, margin);
  m.plus_one = plus;
  m.minus_one = minus;
  return m;
}

inline double max_consecutive_gap(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double g = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) g = std::max(g, values[i + 1] - values[i]);
  return g;
}

enum class ProbeVerdict { OutsideBandNonzero, InsideBandDivergent, Inconclusive };

inline const char *to_string(ProbeVerdict v) {
  switch (v) {
  case ProbeVerdict::OutsideBandNonzero: return "OutsideBandNonzero";
  case ProbeVerdict::InsideBandDivergent: return "InsideBandDivergent";
  case ProbeVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct ProbeReport {
  double lambda = 0.0;
  double integral_value = 0.0;
  std::optional<double> closed_form;
  std::vector<double> refinement_values;
  std::vector<std::uint64_t> refinement_nodes;
  ProbeVerdict verdict = ProbeVerdict::Inconclusive;
};

/// 2 pi sign(b) / sqrt(b^2 - a^2), the value of int_0^{2pi} dk / (a cos k + b) for |b| > |a|.
inline double resolvent_closed_form(double a, double b) {
  return 2.0 * std::numbers::pi * (b > 0 ? 1.0 : -1.0) / std::sqrt(b * b - a * a);
}

/// int_0^{2pi} dk / (2 mu cos k + V_0 - lambda) for n = 1 and lambda outside the
/// closed band, by adaptive Gauss-Kronrod quadrature.
inline ProbeReport resolvent_integral(const WalkParameters &params, double lambda,
                                      double relative_tolerance = 1e-8) {
  if (params.n() != 1) throw WalkError(ErrorKind::DimensionError, "resolvent probe is one-dimensional");
  const SpectralSummary s = summarize(params);
  if (s.band.contains(lambda, kBandEdgeTolerance))
    throw WalkError(ErrorKind::ProbeDomainError,
                    "lambda = " + std::to_string(lambda) + " lies in the closed band");
  const double a = 2.0 * s.mu;
  const double b = s.V0 - lambda;
  auto f = [a, b](double k) { return 1.0 / (a * std::cos(k) + b); };
  double error = 0.0;
  const double pi = std::numbers::pi;
  ProbeReport r;
  r.lambda = lambda;
  // Split at the extremum k = pi so each panel is monotone.
  r.integral_value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, pi, 30, relative_tolerance, &error) +
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, pi, 2.0 * pi, 30, relative_tolerance, &error);
  r.closed_form = resolvent_closed_form(a, b);
  r.refinement_values = {r.integral_value};
  r.refinement_nodes = {0};
  bool same_sign = true;
  const int grid = 1024;
  const double first = f(0.0);
  for (int i = 0; i < grid; ++i)
    if (f(2.0 * pi * i / grid) * first <= 0.0) same_sign = false;
  r.verdict = (std::abs(r.integral_value) > 1e-6 && same_sign) ? ProbeVerdict::OutsideBandNonzero
                                                              : ProbeVerdict::Inconclusive;
  return r;
}

struct DivergenceOptions {
  int levels = 4;
  double threshold = 1e4;
  /// Total node cap for multi-axis tensor grids.
  std::uint64_t max_nodes = std::uint64_t{1} << 24;
};

namespace detail {

/// int over [0, 2pi) minus the h-neighbourhoods of the zeros of a cos k + b,
/// of 1 / (a cos k + b)^2.
inline double excised_square_resolvent(double a, double b, double h) {
  const double pi = std::numbers::pi;
  std::vector<std::pair<double, double>> holes;
  const double c = -b / a;
  if (c >= -1.0 && c <= 1.0) {
    const double k0 = std::acos(c);
    holes = {{k0 - h, k0 + h}, {2.0 * pi - k0 - h, 2.0 * pi - k0 + h}};
  }
  // Work on [-pi, pi) so that holes near 0 or 2pi stay contiguous.
  for (auto &[l, r] : holes)
    if (l > pi) {
      l -= 2.0 * pi;
      r -= 2.0 * pi;
    }
  std::sort(holes.begin(), holes.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto &hole : holes) {
    if (!merged.empty() && hole.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, hole.second);
    else
      merged.push_back(hole);
  }
  auto f = [a, b](double k) {
    const double v = a * std::cos(k) + b;
    return 1.0 / (v * v);
  };
  double total = 0.0;
  double cursor = -pi;
  // Panels grow geometrically away from both ends, where the integrand peaks.
  auto integrate = [&](double l, double r) {
    if (r <= l) return;
    std::vector<double> cuts{l, r};
    for (double w = h; l + w < 0.5 * (l + r); w *= 2.0) {
      cuts.push_back(l + w);
      cuts.push_back(r - w);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double err = 0.0;
      total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 12,
                                                                            1e-11, &err);
    }
  };
  const double end = pi;
  for (auto [l, r] : merged) {
    l = std::max(l, -pi);
    r = std::min(r, end);
    integrate(cursor, l);
    cursor = std::max(cursor, r);
  }
  integrate(cursor, end);
  return total;
}

} // namespace detail

/// Squared-resolvent integral int dk / |sum_j 2|mu_j| cos k_j + V_0 - lambda|^2
/// restricted to axes with mu_j != 0, evaluated on grids that close in on
/// its singular set level by level. For lambda inside the open band the
/// values grow without bound.
///
/// One active axis: level l excises windows of half-width 2 pi / 2^(10 + l)
/// around the two zeros and integrates the rest adaptively. Several axes: a
/// tensor midpoint grid (at most max_nodes nodes) from which level l drops the
/// nodes with |denominator| < 2 mu / 2^(4 + l).
inline ProbeReport divergence_probe(const WalkParameters &params, double lambda,
                                    const DivergenceOptions &options = {}) {
  if (options.levels < 3) throw WalkError(ErrorKind::ConfigError, "divergence probe needs at least 3 levels");
  const SpectralSummary s = summarize(params);
  if (!(s.mu > 0.0) || !(lambda > s.band.lo + kBandEdgeTolerance && lambda < s.band.hi - kBandEdgeTolerance))
    throw WalkError(ErrorKind::ProbeDomainError,
                    "lambda = " + std::to_string(lambda) + " is not inside the open band");
  std::vector<double> weights;
  for (const cplx &m : s.mu_j)
    if (std::abs(m) > 0.0) weights.push_back(2.0 * std::abs(m));
  const double offset = s.V0 - lambda;
  const double pi = std::numbers::pi;
  ProbeReport r;
  r.lambda = lambda;
  if (weights.size() == 1) {
    for (int level = 1; level <= options.levels; ++level) {
      const std::uint64_t nodes = std::uint64_t{1} << (10 + level);
      const double h = 2.0 * pi / static_cast<double>(nodes);
      r.refinement_values.push_back(detail::excised_square_resolvent(weights[0], offset, h));
      r.refinement_nodes.push_back(nodes);
    }
  } else {
    const auto axes = static_cast<int>(weights.size());
    int bits = static_cast<int>(std::floor(std::log2(static_cast<double>(options.max_nodes)) / axes));
    bits = std::max(bits, 1);
    const std::uint64_t m = std::uint64_t{1} << bits;
    const double h = 2.0 * pi / static_cast<double>(m);
    std::vector<std::vector<double>> cosines(weights.size(), std::vector<double>(m));
    for (std::size_t a = 0; a < weights.size(); ++a)
      for (std::uint64_t i = 0; i < m; ++i)
        cosines[a][i] = weights[a] * std::cos((static_cast<double>(i) + 0.5) * h);
    std::vector<double> thresholds;
    for (int level = 1; level <= options.levels; ++level)
      thresholds.push_back(2.0 * s.mu / std::pow(2.0, 4 + level));
    std::vector<double> sums(thresholds.size(), 0.0);
    std::uint64_t total = 1;
    for (int a = 0; a < axes; ++a) total *= m;
    const double cell = std::pow(h, axes);
    std::vector<std::uint64_t> idx(weights.size(), 0);
    for (std::uint64_t node = 0; node < total; ++node) {
      double v = offset;
      for (std::size_t a = 0; a < weights.size(); ++a) v += cosines[a][idx[a]];
      const double av = std::abs(v);
      const double contrib = cell / (v * v);
      for (std::size_t l = 0; l < thresholds.size(); ++l)
        if (av >= thresholds[l]) sums[l] += contrib;
      for (std::size_t a = weights.size(); a-- > 0;) {
        if (++idx[a] < m) break;
        idx[a] = 0;
      }
    }
    r.refinement_values = sums;
    r.refinement_nodes.assign(sums.size(), total);
  }
  r.integral_value = r.refinement_values.back();
  bool increasing = true;
  for (std::size_t i = 0; i + 1 < r.refinement_values.size(); ++i)
    if (!(r.refinement_values[i + 1] > r.refinement_values[i])) increasing = false;
  r.verdict = (increasing && r.integral_value > options.threshold) ? ProbeVerdict::InsideBandDivergent
                                                                    : ProbeVerdict::Inconclusive;
  return r;
}

} // namespace sswalk

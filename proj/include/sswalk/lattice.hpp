#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "sswalk/error.hpp"

namespace sswalk {

using cplx = std::complex<double>;
using Site = std::vector<std::int64_t>;

enum class WindowKind { ZeroPadded, PeriodicTorus };

/// A finite box of Z^n.
///
/// ZeroPadded(radii) holds the sites with |x_j| <= radii[j]; anything outside
/// reads as zero. PeriodicTorus(periods) holds x_j in
/// {-floor(N/2), ..., ceil(N/2) - 1} with arithmetic mod N. Sites are indexed
/// lexicographically in (x_1, ..., x_n), x_1 most significant.
class LatticeWindow {
public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  LatticeWindow() = default;

  LatticeWindow(WindowKind kind, std::vector<std::int64_t> radii)
      : kind_(kind), radii_(std::move(radii)) {
    if (radii_.empty())
      throw WalkError(ErrorKind::DimensionError, "window needs at least one axis");
    const std::size_t n = radii_.size();
    lower_.resize(n);
    extent_.resize(n);
    stride_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (kind_ == WindowKind::ZeroPadded) {
        if (radii_[j] < 0)
          throw WalkError(ErrorKind::DimensionError, "negative window radius");
        lower_[j] = -radii_[j];
        extent_[j] = 2 * radii_[j] + 1;
      } else {
        if (radii_[j] < 1)
          throw WalkError(ErrorKind::DimensionError, "torus period must be >= 1");
        lower_[j] = -(radii_[j] / 2);
        extent_[j] = radii_[j];
      }
    }
    std::size_t stride = 1;
    for (std::size_t j = n; j-- > 0;) {
      stride_[j] = stride;
      stride *= static_cast<std::size_t>(extent_[j]);
    }
    size_ = stride;
  }

  static LatticeWindow zero_padded(std::vector<std::int64_t> radii) {
    return {WindowKind::ZeroPadded, std::move(radii)};
  }
  static LatticeWindow zero_padded(int n, std::int64_t radius) {
    return zero_padded(std::vector<std::int64_t>(static_cast<std::size_t>(n), radius));
  }
  static LatticeWindow torus(int n, std::int64_t period) {
    return {WindowKind::PeriodicTorus,
            std::vector<std::int64_t>(static_cast<std::size_t>(n), period)};
  }

  WindowKind kind() const noexcept { return kind_; }
  bool periodic() const noexcept { return kind_ == WindowKind::PeriodicTorus; }
  int dim() const noexcept { return static_cast<int>(radii_.size()); }
  const std::vector<std::int64_t> &radii() const noexcept { return radii_; }
  std::size_t size() const noexcept { return size_; }
  std::int64_t lower(int j) const { return lower_[static_cast<std::size_t>(j)]; }
  std::int64_t upper(int j) const {
    return lower_[static_cast<std::size_t>(j)] + extent_[static_cast<std::size_t>(j)] - 1;
  }
  std::int64_t extent(int j) const { return extent_[static_cast<std::size_t>(j)]; }

  std::int64_t coordinate(std::size_t index, int j) const {
    const auto uj = static_cast<std::size_t>(j);
    return lower_[uj] + static_cast<std::int64_t>((index / stride_[uj]) %
                                                  static_cast<std::size_t>(extent_[uj]));
  }

  Site site(std::size_t index) const {
    Site x(radii_.size());
    for (int j = 0; j < dim(); ++j) x[static_cast<std::size_t>(j)] = coordinate(index, j);
    return x;
  }

  /// Index of x, or npos when x lies outside a ZeroPadded window. Torus
  /// coordinates are reduced mod N first.
  std::size_t index(std::span<const std::int64_t> x) const {
    if (x.size() != radii_.size())
      throw WalkError(ErrorKind::WindowMismatch, "site has the wrong dimension");
    std::size_t idx = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      std::int64_t offset = x[j] - lower_[j];
      if (periodic()) {
        offset %= extent_[j];
        if (offset < 0) offset += extent_[j];
      } else if (offset < 0 || offset >= extent_[j]) {
        return npos;
      }
      idx += static_cast<std::size_t>(offset) * stride_[j];
    }
    return idx;
  }

  std::size_t origin_index() const {
    return index(Site(radii_.size(), 0));
  }

  bool is_origin(std::size_t index) const {
    for (int j = 0; j < dim(); ++j)
      if (coordinate(index, j) != 0) return false;
    return true;
  }

  /// Index of x + step * e_j (step = +1 or -1), npos past a ZeroPadded edge.
  std::size_t neighbor(std::size_t index, int j, int step) const {
    const auto uj = static_cast<std::size_t>(j);
    const auto offset = static_cast<std::int64_t>((index / stride_[uj]) %
                                                  static_cast<std::size_t>(extent_[uj]));
    std::int64_t next = offset + step;
    if (next < 0 || next >= extent_[uj]) {
      if (!periodic()) return npos;
      next = (next + extent_[uj]) % extent_[uj];
    }
    return index + static_cast<std::size_t>(next) * stride_[uj] -
           static_cast<std::size_t>(offset) * stride_[uj];
  }

  bool contains(std::span<const std::int64_t> x) const { return index(x) != npos; }

  friend bool operator==(const LatticeWindow &a, const LatticeWindow &b) {
    return a.kind_ == b.kind_ && a.radii_ == b.radii_;
  }

private:
  WindowKind kind_ = WindowKind::ZeroPadded;
  std::vector<std::int64_t> radii_;
  std::vector<std::int64_t> lower_;
  std::vector<std::int64_t> extent_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
};

inline void require_same_window(const LatticeWindow &a, const LatticeWindow &b) {
  if (!(a == b)) throw WalkError(ErrorKind::WindowMismatch, "operands live on different windows");
}

/// Finitely supported element of l^2(Z^n; C^{2n}).
///
/// Amplitudes are stored site-major; within a site the 2n components are
/// ordered (j, k) with j = 1..n outer and k = 1, 2 inner.
class WaveFunction {
public:
  WaveFunction() = default;
  explicit WaveFunction(LatticeWindow window)
      : window_(std::move(window)),
        amplitudes_(window_.size() * static_cast<std::size_t>(2 * window_.dim())) {}

  const LatticeWindow &window() const noexcept { return window_; }
  int dim() const noexcept { return window_.dim(); }
  std::size_t components() const noexcept { return static_cast<std::size_t>(2 * dim()); }

  cplx &at(std::size_t site, int j, int k) {
    return amplitudes_[site * components() + static_cast<std::size_t>(2 * j + k)];
  }
  cplx at(std::size_t site, int j, int k) const {
    return amplitudes_[site * components() + static_cast<std::size_t>(2 * j + k)];
  }
  std::span<cplx> site_view(std::size_t site) {
    return {amplitudes_.data() + site * components(), components()};
  }
  std::span<const cplx> site_view(std::size_t site) const {
    return {amplitudes_.data() + site * components(), components()};
  }

  /// Amplitude at an arbitrary site; zero outside a ZeroPadded window.
  cplx value(std::span<const std::int64_t> x, int j, int k) const {
    const std::size_t idx = window_.index(x);
    return idx == LatticeWindow::npos ? cplx{} : at(idx, j, k);
  }

  std::vector<cplx> &data() noexcept { return amplitudes_; }
  const std::vector<cplx> &data() const noexcept { return amplitudes_; }

  double site_norm_sq(std::size_t site) const {
    double s = 0.0;
    for (const cplx &a : site_view(site)) s += std::norm(a);
    return s;
  }

  double norm_sq() const {
    double s = 0.0;
    for (const cplx &a : amplitudes_) s += std::norm(a);
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  /// Largest max_j |x_j| over sites carrying a nonzero amplitude; -1 if zero.
  std::int64_t support_radius() const {
    std::int64_t r = -1;
    for (std::size_t s = 0; s < window_.size(); ++s) {
      if (site_norm_sq(s) == 0.0) continue;
      for (int j = 0; j < dim(); ++j) r = std::max(r, std::abs(window_.coordinate(s, j)));
    }
    return r;
  }

  /// Copy onto another window of the same dimension, dropping what falls outside.
  WaveFunction embedded(const LatticeWindow &target) const {
    if (target.dim() != dim())
      throw WalkError(ErrorKind::WindowMismatch, "cannot embed across dimensions");
    WaveFunction out(target);
    for (std::size_t s = 0; s < window_.size(); ++s) {
      if (site_norm_sq(s) == 0.0) continue;
      const std::size_t t = target.index(window_.site(s));
      if (t == LatticeWindow::npos) continue;
      auto dst = out.site_view(t);
      auto src = site_view(s);
      std::copy(src.begin(), src.end(), dst.begin());
    }
    return out;
  }

  WaveFunction &operator*=(cplx c) {
    for (cplx &a : amplitudes_) a *= c;
    return *this;
  }
  WaveFunction &operator+=(const WaveFunction &o) {
    require_same_window(window_, o.window_);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) amplitudes_[i] += o.amplitudes_[i];
    return *this;
  }
  WaveFunction &operator-=(const WaveFunction &o) {
    require_same_window(window_, o.window_);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) amplitudes_[i] -= o.amplitudes_[i];
    return *this;
  }
  friend WaveFunction operator+(WaveFunction a, const WaveFunction &b) { return a += b; }
  friend WaveFunction operator-(WaveFunction a, const WaveFunction &b) { return a -= b; }
  friend WaveFunction operator*(cplx c, WaveFunction a) { return a *= c; }

private:
  LatticeWindow window_;
  std::vector<cplx> amplitudes_;
};

/// <a, b> = sum_x sum_{j,k} conj(a) b, matched by site coordinates so the two
/// states may live on different ZeroPadded windows.
inline cplx inner_product(const WaveFunction &a, const WaveFunction &b) {
  if (a.dim() != b.dim())
    throw WalkError(ErrorKind::WindowMismatch, "inner product across dimensions");
  cplx s{};
  if (a.window() == b.window()) {
    for (std::size_t i = 0; i < a.data().size(); ++i) s += std::conj(a.data()[i]) * b.data()[i];
    return s;
  }
  for (std::size_t i = 0; i < a.window().size(); ++i) {
    const std::size_t k = b.window().index(a.window().site(i));
    if (k == LatticeWindow::npos) continue;
    auto va = a.site_view(i);
    auto vb = b.site_view(k);
    for (std::size_t c = 0; c < va.size(); ++c) s += std::conj(va[c]) * vb[c];
  }
  return s;
}

/// Largest sitewise Euclidean distance between two states on the same window.
inline double max_site_deviation(const WaveFunction &a, const WaveFunction &b) {
  require_same_window(a.window(), b.window());
  double worst = 0.0;
  for (std::size_t s = 0; s < a.window().size(); ++s) {
    double d = 0.0;
    auto va = a.site_view(s);
    auto vb = b.site_view(s);
    for (std::size_t c = 0; c < va.size(); ++c) d += std::norm(va[c] - vb[c]);
    worst = std::max(worst, std::sqrt(d));
  }
  return worst;
}

/// Which scalar space a field belongs to: l^2(Z^n) or l^2(Z^n \ {0}).
enum class FieldSpace { Full, Punctured };

/// One complex amplitude per site. Punctured fields keep the origin entry at
/// zero and nothing reads it.
class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(LatticeWindow window, FieldSpace space = FieldSpace::Full)
      : window_(std::move(window)), space_(space), values_(window_.size()) {}

  const LatticeWindow &window() const noexcept { return window_; }
  FieldSpace space() const noexcept { return space_; }
  int dim() const noexcept { return window_.dim(); }

  cplx &operator[](std::size_t i) { return values_[i]; }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx value(std::span<const std::int64_t> x) const {
    const std::size_t idx = window_.index(x);
    return idx == LatticeWindow::npos ? cplx{} : values_[idx];
  }
  std::vector<cplx> &data() noexcept { return values_; }
  const std::vector<cplx> &data() const noexcept { return values_; }

  double norm_sq() const {
    double s = 0.0;
    for (const cplx &v : values_) s += std::norm(v);
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  ScalarField embedded(const LatticeWindow &target) const {
    if (target.dim() != dim())
      throw WalkError(ErrorKind::WindowMismatch, "cannot embed across dimensions");
    ScalarField out(target, space_);
    for (std::size_t s = 0; s < window_.size(); ++s) {
      if (values_[s] == cplx{}) continue;
      const std::size_t t = target.index(window_.site(s));
      if (t != LatticeWindow::npos) out.values_[t] = values_[s];
    }
    return out;
  }

  /// Same values, re-tagged. Callers are responsible for the origin entry.
  ScalarField retagged(FieldSpace space) const {
    ScalarField out = *this;
    out.space_ = space;
    return out;
  }

  friend double max_deviation(const ScalarField &a, const ScalarField &b) {
    require_same_window(a.window_, b.window_);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values_.size(); ++i)
      worst = std::max(worst, std::abs(a.values_[i] - b.values_[i]));
    return worst;
  }

  friend cplx inner_product(const ScalarField &a, const ScalarField &b) {
    require_same_window(a.window_, b.window_);
    cplx s{};
    for (std::size_t i = 0; i < a.values_.size(); ++i) s += std::conj(a.values_[i]) * b.values_[i];
    return s;
  }

private:
  LatticeWindow window_;
  FieldSpace space_ = FieldSpace::Full;
  std::vector<cplx> values_;
};

/// delta_x (x) v as a state on `window`.
inline WaveFunction delta_state(const LatticeWindow &window, const Site &x,
                                std::span<const cplx> components) {
  WaveFunction psi(window);
  const std::size_t idx = window.index(x);
  if (idx == LatticeWindow::npos)
    throw WalkError(ErrorKind::WindowMismatch, "delta site outside the window");
  if (components.size() != psi.components())
    throw WalkError(ErrorKind::DimensionError, "delta state needs 2n components");
  auto dst = psi.site_view(idx);
  std::copy(components.begin(), components.end(), dst.begin());
  return psi;
}

} // namespace sswalk

#include <catch_amalgamated.hpp>

#include <random>

#include "support.hpp"

using namespace sswalk;

namespace {

double state_profile_at(const BirthVector &bv, std::int64_t x) {
  const std::size_t s = bv.state.window().index(Site{x});
  return s == LatticeWindow::npos ? 0.0 : bv.state.site_norm_sq(s);
}

double profile_sum(const BirthVector &bv) {
  double sum = 0.0;
  for (double v : bv.profile) sum += v;
  return sum;
}

/// Closed-form norm^2 of the unnormalized recipe with unit seed:
/// (1 + |lift|^2) * sum_{m >= 0} rho^{2m}, rho = min(|r|, 1/|r|).
double geometric_norm_sq(const WalkParameters &params, Sign sign) {
  const double lift_sq = std::norm(lift_coefficient(params, 0, sign));
  const double m = std::abs(*decay_ratio(params, 0, sign));
  const double rho = m < 1.0 ? m : 1.0 / m;
  return (1.0 + lift_sq) / (1.0 - rho * rho);
}

} // namespace

TEST_CASE("decay ratios and normalization at the reference parameters", "[birth][example]") {
  const WalkParameters pstar = presets::reference_1d();
  CHECK(std::abs(*decay_ratio(pstar, 0, Sign::Plus) - cplx{0.5, 0.0}) < 1e-15);
  CHECK(std::abs(*decay_ratio(pstar, 0, Sign::Minus) - cplx{-2.0, 0.0}) < 1e-15);
  CHECK(classify_axis(pstar, 0, Sign::Plus) == BirthCase::ModLessOne);
  CHECK(classify_axis(pstar, 0, Sign::Minus) == BirthCase::ModGreaterOne);

  const NormalizationConstants plus = normalization_constants(pstar, Sign::Plus);
  const NormalizationConstants minus = normalization_constants(pstar, Sign::Minus);
  REQUIRE(plus.t);
  REQUIRE(minus.u);
  // Geometric-series oracle: t^2 = 1 / ((1 + 1/4) * 4/3), u^2 = 1 / ((1 + 4) * 4/3).
  CHECK(std::abs(*plus.t * *plus.t - 1.0 / geometric_norm_sq(pstar, Sign::Plus)) < 1e-12);
  CHECK(std::abs(*minus.u * *minus.u - 1.0 / geometric_norm_sq(pstar, Sign::Minus)) < 1e-12);
  CHECK(std::abs(*plus.t * *plus.t - 0.6) < 1e-12);
  CHECK(std::abs(*minus.u * *minus.u - 0.15) < 1e-12);
}

TEST_CASE("reference profiles: closed form and direct construction", "[birth][example]") {
  const WalkParameters pstar = presets::reference_1d();
  const BirthVector plus = birth_vector(pstar, Sign::Plus);
  const BirthVector minus = birth_vector(pstar, Sign::Minus);
  const std::vector<std::pair<std::int64_t, double>> nu_plus{{0, 0.6}, {-1, 0.3}, {-2, 0.075}, {1, 0.0}};
  const std::vector<std::pair<std::int64_t, double>> nu_minus{{0, 0.6}, {1, 0.3}, {-1, 0.0}};
  for (const auto &[x, v] : nu_plus) {
    CHECK(std::abs(closed_form_profile(pstar, Sign::Plus, x) - v) < 1e-12);
    CHECK(std::abs(state_profile_at(plus, x) - v) < 1e-12);
  }
  for (const auto &[x, v] : nu_minus) {
    CHECK(std::abs(closed_form_profile(pstar, Sign::Minus, x) - v) < 1e-12);
    CHECK(std::abs(state_profile_at(minus, x) - v) < 1e-12);
  }
  CHECK(std::abs(profile_sum(plus) - 1.0) < 1e-10);
  CHECK(std::abs(profile_sum(minus) - 1.0) < 1e-10);
  CHECK(plus.profile_closed_form);
}

TEST_CASE("random one-dimensional bound states", "[birth][property]") {
  std::mt19937_64 rng(30);
  for (int trial = 0; trial < 40; ++trial) {
    const WalkParameters params = testing_support::random_bound_state_params(rng);
    for (Sign sign : {Sign::Plus, Sign::Minus}) {
      const BirthVector bv = birth_vector(params, sign);
      CHECK(bv.residual <= 1e-10);
      CHECK(bv.shift_residual <= 1e-12);
      CHECK(bv.coin_residual <= 1e-12);
      CHECK(std::abs(bv.state.norm() - 1.0) < 1e-12);
      CHECK(std::abs(profile_sum(bv) - 1.0) < 1e-10);
      const LatticeWindow &w = bv.state.window();
      double worst = 0.0;
      for (std::size_t s = 0; s < w.size(); ++s)
        worst = std::max(worst, std::abs(bv.profile[s] - bv.state.site_norm_sq(s)));
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("profiles do not depend on the global phase of Phi", "[birth][property]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const WalkParameters params = testing_support::random_bound_state_params(rng);
    RawParameters raw = params.raw();
    const cplx phase = testing_support::unit_phase(rng);
    for (auto &c : raw.phi[0]) c *= phase;
    const WalkParameters rotated = validate_params(raw);
    for (Sign sign : {Sign::Plus, Sign::Minus})
      for (std::int64_t x = -5; x <= 5; ++x)
        CHECK(std::abs(closed_form_profile(params, sign, x) - closed_form_profile(rotated, sign, x)) < 1e-14);
  }
}

TEST_CASE("vanishing Phi components give two-site bound states", "[birth][example]") {
  RawParameters raw = presets::reference_1d().raw();
  for (int zero = 0; zero < 2; ++zero) {
    raw.phi[0] = {cplx{zero == 0 ? 0.0 : 1.0, 0.0}, cplx{zero == 0 ? 1.0 : 0.0, 0.0}};
    const WalkParameters params = validate_params(raw);
    for (Sign sign : {Sign::Plus, Sign::Minus}) {
      CHECK(classify_axis(params, 0, sign) == (zero == 0 ? BirthCase::Phi1Zero : BirthCase::Phi2Zero));
      const BirthVector bv = birth_vector(params, sign);
      CHECK(bv.residual < 1e-14);
      CHECK(std::abs(profile_sum(bv) - 1.0) < 1e-14);
      const LatticeWindow &w = bv.state.window();
      for (std::size_t s = 0; s < w.size(); ++s)
        CHECK(std::abs(bv.profile[s] - bv.state.site_norm_sq(s)) < 1e-14);
    }
  }
}

TEST_CASE("p = 0 with a balanced coin has no birth eigenvectors", "[birth][example]") {
  const WalkParameters h0 = presets::hadamard_like_1d();
  for (Sign sign : {Sign::Plus, Sign::Minus}) {
    CHECK(classify_multiplicity(h0, sign) == Multiplicity::Zero);
    CHECK(classify_axis(h0, 0, sign) == BirthCase::ModOne);
    try {
      birth_vector(h0, sign);
      FAIL("constructed a vector with M = 0");
    } catch (const WalkError &e) {
      CHECK((e.kind() == ErrorKind::CaseUnavailable || e.kind() == ErrorKind::ZeroVector));
    }
    CHECK_THROWS_AS(construct_psi_component(h0, 0, sign, 1.0), WalkError);
  }
}

TEST_CASE("truncation keeps the discarded tail below the target", "[birth][property]") {
  for (double m : {0.01, 0.3, 0.5, 0.9, 0.99, 2.0, 1.0 / 0.97}) {
    const std::int64_t R = truncation_radius(m);
    const double rho = m < 1.0 ? m : 1.0 / m;
    const double tail = std::pow(rho, 2.0 * static_cast<double>(R + 1)) / (1.0 - rho * rho);
    CHECK(tail <= kTailMass * 1.0000001);
  }
  CHECK_THROWS_AS(truncation_radius(1.0), WalkError);
}

TEST_CASE("two-dimensional finite-support family", "[birth][example]") {
  const WalkParameters plane = presets::reference_2d();
  for (Sign sign : {Sign::Plus, Sign::Minus}) {
    CHECK(classify_multiplicity(plane, sign) == Multiplicity::Infinite);
    std::vector<std::pair<std::int64_t, std::int64_t>> anchors;
    for (std::int64_t a = 0; a <= 2; ++a)
      for (std::int64_t b = 0; b <= 2; ++b) anchors.emplace_back(a, b);
    const std::vector<BirthVector> family = finite_support_family(plane, sign, anchors);
    REQUIRE(family.size() == 9);
    for (const BirthVector &v : family) {
      CHECK(v.residual <= 1e-12);
      // Members lie in the kernel of the defect-free coin as well.
      const BirthChecks homogeneous = birth_checks(plane, v.state, sign, true);
      CHECK(homogeneous.residual <= 1e-12);
      CHECK(homogeneous.coin_residual <= 1e-12);
    }
    CHECK(smallest_gram_eigenvalue(family) > 1e-6);

    const BirthVector witness = birth_vector(plane, sign);
    CHECK(witness.residual <= 1e-10);
    CHECK(std::abs(witness.state.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("random two-dimensional families stay in the eigenspace", "[birth][property]") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const WalkParameters params = testing_support::random_params(rng, 2);
    for (Sign sign : {Sign::Plus, Sign::Minus}) {
      const BirthVector v = finite_support_member(params, sign, trial - 5, 3 - trial);
      CHECK(v.residual <= 1e-12);
      CHECK(v.shift_residual <= 1e-12);
      CHECK(v.coin_residual <= 1e-12);
    }
  }
}

TEST_CASE("degenerate anchors are reported", "[birth][errors]") {
  RawParameters raw;
  raw.p = {0.6, 0.6, 0.6};
  raw.q = {cplx{0.8}, cplx{0.8}, cplx{0.8}};
  const double h = 1.0 / std::sqrt(2.0);
  raw.phi = {{cplx{}, cplx{}}, {cplx{}, cplx{}}, {cplx{h}, cplx{h}}};
  const WalkParameters params = validate_params(raw);
  try {
    finite_support_member(params, Sign::Plus, 0, 0);
    FAIL("vanishing kernel element accepted");
  } catch (const WalkError &e) {
    CHECK(e.kind() == ErrorKind::AnchorClash);
  }
  CHECK_THROWS_AS(finite_support_member(presets::reference_1d(), Sign::Plus, 0, 0), WalkError);
}

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fgcensus/census.hpp"
#include "fgcensus/spectral.hpp"

using namespace fgc;

namespace {
std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eedULL);
  return gen;
}

CharacterPoint random_point(int k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> e(static_cast<std::size_t>(k));
  for (double& x : e) x = u(rng());
  return CharacterPoint(std::move(e));
}
}  // namespace

TEST_CASE("adjacency value") {
  CHECK(adjacency_value(CharacterPoint::zero(2)) == doctest::Approx(4.0));
  CHECK(adjacency_value(CharacterPoint({0.5, 0.5})) == doctest::Approx(-4.0));
  CHECK(adjacency_value(CharacterPoint({0.25, 0.25})) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(adjacency_value(CharacterPoint::zero(3)) == doctest::Approx(6.0));
  for (int t = 0; t < 100; ++t) {
    double a = adjacency_value(random_point(3));
    CHECK(a <= 6.0 + 1e-12);
    CHECK(a >= -6.0 - 1e-12);
  }
}

TEST_CASE("character points reduce mod 1") {
  CharacterPoint p({1.25, -0.25});
  CHECK(p.eps[0] == doctest::Approx(0.25));
  CHECK(p.eps[1] == doctest::Approx(0.75));
}

TEST_CASE("eigenpair at the distinguished adjacency values") {
  EigenPair triv = eigenpair(4.0, 2);
  CHECK(triv.lambda1.real() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(triv.lambda2.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(triv.lambda1.imag() == 0.0);

  EigenPair sign = eigenpair(-4.0, 2);
  CHECK(sign.lambda1.real() == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
  CHECK(sign.lambda2.real() == doctest::Approx(-1.0).epsilon(1e-13));

  EigenPair mid = eigenpair(0.0, 2);
  CHECK(mid.lambda1.real() == doctest::Approx(0.0));
  CHECK(mid.lambda1.imag() == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(std::abs(mid.lambda2) == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("eigenpair algebra over random adjacency values") {
  for (int k : {2, 3}) {
    const double q = 2.0 * k - 1.0;
    std::uniform_real_distribution<double> u(-2.0 * k, 2.0 * k);
    for (int t = 0; t < 10000; ++t) {
      double a = u(rng());
      EigenPair e = eigenpair(a, k);
      std::complex<double> prod = e.lambda1 * e.lambda2;
      std::complex<double> sum = e.lambda1 + e.lambda2;
      CHECK(std::abs(prod - 1.0 / q) <= 1e-12);
      CHECK(std::abs(sum - a / q) <= 1e-12);
      if (std::abs(a) < 2.0 * std::sqrt(q) - 1e-9) {
        CHECK(std::abs(e.lambda1) == doctest::Approx(1.0 / std::sqrt(q)).epsilon(1e-12));
        CHECK(std::abs(e.lambda2) == doctest::Approx(1.0 / std::sqrt(q)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("half-torus shift symmetry: lambda2(eps + 1/2) = -lambda1(eps)") {
  for (int t = 0; t < 50; ++t) {
    CharacterPoint p = random_point(2);
    std::vector<double> shifted = p.eps;
    for (double& x : shifted) x += 0.5;
    EigenPair a = eigenpair(adjacency_value(p), 2);
    EigenPair b = eigenpair(adjacency_value(CharacterPoint(std::move(shifted))), 2);
    CHECK(std::abs(b.lambda2 + a.lambda1) <= 1e-12);
  }
}

TEST_CASE("closed-form character count examples") {
  CHECK(char_count_closed_form(CharacterPoint::zero(2), 2, 2).real() ==
        doctest::Approx(12.0).epsilon(1e-13));
  CHECK(char_count_closed_form(CharacterPoint({0.5, 0.5}), 2, 1).real() ==
        doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(char_count_closed_form(CharacterPoint::zero(2), 2, 1).real() ==
        doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("closed form reproduces the exact counts at the trivial character") {
  for (int m = 1; m <= 30; ++m) {
    std::complex<double> v = char_count_closed_form(CharacterPoint::zero(2), 2, m);
    CHECK(v.imag() == 0.0);
    CHECK(CheckedInt128(static_cast<long long>(std::llround(v.real()))) ==
          cyclically_reduced_word_count(2, m));
  }
  // Rank 3: integral exactness holds while 5^m stays below 2^53.
  for (int m = 1; m <= 22; ++m) {
    std::complex<double> v = char_count_closed_form(CharacterPoint::zero(3), 3, m);
    CHECK(CheckedInt128(static_cast<long long>(std::llround(v.real()))) ==
          cyclically_reduced_word_count(3, m));
  }
  for (int m = 23; m <= 30; ++m) {
    std::complex<double> v = char_count_closed_form(CharacterPoint::zero(3), 3, m);
    CHECK(v.real() ==
          doctest::Approx(cyclically_reduced_word_count(3, m).to_double()).epsilon(1e-12));
  }
}

TEST_CASE("closed form matches enumerated character sums to m=10") {
  for (int k : {2, 3}) {
    const int top = 10;
    CountTable oracle = count_table_up_to(k, top, "oracle", {}, 2);
    const double q = 2.0 * k - 1.0;
    for (int t = 0; t < 20; ++t) {
      CharacterPoint p = random_point(k);
      for (int m = 1; m <= top; ++m) {
        std::complex<double> lhs = character_sum_from_table(oracle, m, p);
        std::complex<double> rhs = char_count_closed_form(p, k, m);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::pow(q, m));
      }
    }
  }
}

TEST_CASE("generating function identity check") {
  CountTable oracle2 = count_table_up_to(2, 8, "oracle");
  CHECK(ihara_identity_check(CharacterPoint::zero(2), 2, 8, oracle2) <= 1e-9);
  for (int t = 0; t < 5; ++t)
    CHECK(ihara_identity_check(random_point(2), 2, 8, oracle2) <= 1e-9);
  CountTable oracle3 = count_table_up_to(3, 6, "oracle");
  CHECK(ihara_identity_check(CharacterPoint({0.5, 0.5, 0.5}), 3, 6, oracle3) <= 1e-9);
}

TEST_CASE("scaled eigenpower limit") {
  CHECK(scaled_eigenpower({0.0, 0.0}, 2, 100) == doctest::Approx(1.0));
  CHECK(std::abs(scaled_eigenpower({1.0, 0.0}, 2, 10000) - std::exp(-0.5)) < 1e-3);
  CHECK(std::abs(scaled_eigenpower({1.0, 1.0}, 2, 10000) - std::exp(-1.0)) < 1e-3);
}

TEST_CASE("scaled eigenpower empirical rate") {
  // |lambda_1(eps0/(rho sqrt m))^m - exp(-|eps0|^2/2)| <= 10/m for m >= 100.
  for (double nx : {0.5, 1.0, 2.0}) {
    for (long long m : {100LL, 400LL, 1600LL, 6400LL}) {
      double got = scaled_eigenpower({nx, 0.0}, 2, m);
      double want = std::exp(-nx * nx / 2.0);
      CHECK(std::abs(got - want) <= 10.0 / static_cast<double>(m));
    }
  }
}

TEST_CASE("finite character sieve structure") {
  auto pts = finite_character_sieve({1, 1}, {0, 0});
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].eps.eps[0] == 0.0);
  CHECK(std::abs(pts[0].weight - std::complex<double>(1.0, 0.0)) <= 1e-15);

  auto four = finite_character_sieve({2, 2}, {0, 0});
  REQUIRE(four.size() == 4);
  for (const auto& p : four) {
    CHECK(std::abs(p.weight - std::complex<double>(0.25, 0.0)) <= 1e-15);
    for (double e : p.eps.eps) CHECK((e == 0.0 || e == 0.5));
  }
}

TEST_CASE("sieve acts as a congruence indicator") {
  auto indicator = [](const std::vector<SievePoint>& pts, const Homology& phi) {
    std::complex<double> s(0.0, 0.0);
    for (const auto& p : pts) s += p.weight * character_value(phi, p.eps);
    return s;
  };
  auto pts00 = finite_character_sieve({2, 2}, {0, 0});
  CHECK(std::abs(indicator(pts00, {2, 1})) <= 1e-12);
  auto pts01 = finite_character_sieve({2, 2}, {0, 1});
  CHECK(std::abs(indicator(pts01, {2, 1}) - 1.0) <= 1e-12);

  auto pts = finite_character_sieve({3, 2}, {1, 0});
  for (long long x = -4; x <= 4; ++x) {
    for (long long y = -4; y <= 4; ++y) {
      double want = (((x % 3) + 3) % 3 == 1 && ((y % 2) + 2) % 2 == 0) ? 1.0 : 0.0;
      CHECK(std::abs(indicator(pts, {x, y}) - want) <= 1e-12);
    }
  }
}

#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "orthoplex/concentration.hpp"

using namespace orthoplex;

namespace {

std::uint64_t brute_deficit(unsigned d, unsigned n, unsigned K, int a, bool surface) {
  return oracle::count_ball(d, n, [&](const oracle::Point& x) {
    if (surface && oracle::l1(x) != n) return false;
    int small = 0;
    for (int v : x) {
      if (static_cast<unsigned>(std::abs(v)) <= K) small += std::abs(v);
    }
    return small <= static_cast<int>(n) - a;
  });
}

}  // namespace

TEST_CASE("deficit_count") {
  for (unsigned d = 1; d <= 4; ++d) {
    for (unsigned n = 0; n <= 6; ++n) {
      const auto r = deficit_count(d, n, 1, 0, false);
      CHECK(r.bad_count == r.total);
      CHECK(r.total == delannoy(d, n));
      CHECK(r.fraction == 1.0);
      for (unsigned a = 0; a <= n; ++a) {
        CHECK(deficit_count(d, n, n, a, false).bad_count == delannoy(d, n - a));
      }
    }
  }
  CHECK(deficit_count(6, 4, 1, 2, false).bad_count == brute_deficit(6, 4, 1, 2, false));
  for (unsigned d = 1; d <= 4; ++d) {
    for (unsigned n = 0; n <= 6; ++n) {
      for (unsigned K = 1; K <= 2; ++K) {
        for (int a = -1; a <= static_cast<int>(n); ++a) {
          for (bool surface : {false, true}) {
            CAPTURE(d);
            CAPTURE(n);
            CAPTURE(K);
            CAPTURE(a);
            const auto r = deficit_count(d, n, K, a, surface);
            CHECK(r.bad_count == brute_deficit(d, n, K, a, surface));
            CHECK(r.total == (surface ? sphere_count(d, n) : delannoy(d, n)));
          }
        }
      }
    }
  }
  CHECK_THROWS_AS(deficit_count(3, 2, 1, 3, false), std::invalid_argument);
  Guards tight;
  tight.dp_budget = 50;
  CHECK_THROWS_AS(deficit_count(10, 10, 2, 3, false, tight), GuardViolation);
}

TEST_CASE("deficit fraction decreasing in a, smallest_deficit") {
  double previous = 2.0;
  for (unsigned a = 0; a <= 40; ++a) {
    const double f = deficit_count(200, 40, 1, a, false).fraction;
    CHECK(f <= previous);
    previous = f;
  }
  const auto a = smallest_deficit(200, 40, 1, 0.05);
  REQUIRE(a.has_value());
  CHECK(deficit_count(200, 40, 1, static_cast<std::int64_t>(*a), false).fraction <= 0.05);
  if (*a > 0) CHECK(deficit_count(200, 40, 1, static_cast<std::int64_t>(*a) - 1, false).fraction > 0.05);
  CHECK(smallest_deficit(3, 2, 1, 1.0) == std::optional<std::uint64_t>(0));
}

TEST_CASE("few_ones_count") {
  CHECK(few_ones_count(2, 2).bad_count == 4);
  CHECK(few_ones_count(5, 0).bad_count == 1);
  for (unsigned d = 1; d <= 5; ++d) {
    for (unsigned n = 0; n <= 7; ++n) {
      const auto expected = oracle::count_ball(d, n, [n](const oracle::Point& x) {
        if (oracle::l1(x) != n) return false;
        unsigned ones = 0;
        for (int v : x) ones += std::abs(v) == 1;
        return 2 * ones <= n;
      });
      const auto r = few_ones_count(d, n);
      CHECK(r.bad_count == expected);
      CHECK(r.total == sphere_count(d, n));
    }
  }
}

TEST_CASE("large_coordinate_count") {
  CHECK(large_coordinate_count(2, 2, 1).bad_count == 0);
  CHECK(large_coordinate_count_at(2, 2, 2).bad_count == 4);
  CHECK(large_coordinate_count_at(2, 2, 2).total == 13);
  CHECK(large_coordinate_count_at(20, 10, 6).threshold == 6);
  CHECK_THROWS_AS(large_coordinate_count_at(2, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(large_coordinate_count(2, 2, 0), std::invalid_argument);
  for (unsigned d = 1; d <= 4; ++d) {
    for (unsigned n = 0; n <= 7; ++n) {
      for (unsigned t = 1; t <= n + 1; ++t) {
        const auto expected = oracle::count_ball(d, n, [t](const oracle::Point& x) {
          for (int v : x) {
            if (static_cast<unsigned>(std::abs(v)) >= t) return true;
          }
          return false;
        });
        CHECK(large_coordinate_count_at(d, n, t).bad_count == expected);
      }
    }
  }
  // In the regime n <= d^{K/(K+1)} the fraction decays like 1/d.
  for (std::uint64_t d = 400; d <= 6400; d *= 2) {
    const auto n = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(d)));
    CHECK(large_coordinate_count(d, n, 1).fraction * static_cast<double>(d) <= 1e-4);
  }
}

TEST_CASE("shell_ratio") {
  CHECK(shell_l_star(25, 2.0, 1) == 11);
  for (unsigned l = 1; l <= 5; ++l) {
    const auto ratio = shell_ratio(25, 200, 2.0, l);
    const auto ls = shell_l_star(25, 2.0, l);
    BigRational quotient(support_shell_count(25, 25 - ls - 1, 200), support_shell_count(25, 25 - ls, 200));
    quotient.canonicalize();
    CHECK(ratio == quotient);
    BigRational closed((25 - ls) * (25 - ls), 2 * (ls + 1) * (200 - 25 + ls + 1));
    closed.canonicalize();
    CHECK(ratio == closed);
  }
  // n >= d^{3/2} and C >= 2 keep the ratio at most 1/2.
  for (unsigned d = 4; d <= 100; d += 6) {
    const auto n = static_cast<std::uint64_t>(std::ceil(std::pow(d, 1.5)));
    for (unsigned l = 1; shell_l_star(d, 2.0, l) + 1 <= d; ++l) CHECK(shell_ratio(d, n, 2.0, l) <= BigRational(1, 2));
  }
  CHECK_THROWS_AS(shell_ratio(25, 200, 2.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(shell_ratio(25, 200, 2.0, 15), std::invalid_argument);
  CHECK_THROWS_AS(shell_ratio(25, 13, 2.0, 1), std::invalid_argument);
}

TEST_CASE("second_moment") {
  const auto small = second_moment(2, 1);
  CHECK(small.moment == BigRational(2, 5));
  CHECK(second_moment(3, 0).moment == 0);
  CHECK(std::isnan(second_moment(3, 0).ratio_to_alpha_sq));
  for (unsigned n = 0; n <= 30; ++n) {
    BigRational expected(n * (n + 1), 3);
    expected.canonicalize();
    CHECK(second_moment(1, n).moment == expected);
  }
  for (unsigned d = 1; d <= 4; ++d) {
    for (unsigned n = 0; n <= 6; ++n) {
      std::uint64_t sum = 0;
      const auto points = oracle::ball_points(d, n);
      for (const auto& x : points) sum += static_cast<std::uint64_t>(x[0] * x[0]);
      BigRational expected(sum, points.size());
      expected.canonicalize();
      CHECK(second_moment(d, n).moment == expected);
    }
  }
  for (unsigned n : {100u, 200u, 400u}) {
    const double ratio = second_moment(10, n).ratio_to_alpha_sq;
    CHECK(ratio > 1.0);
    CHECK(ratio < 4.0);
  }
}

TEST_CASE("clt_tail_probability") {
  const auto zero = clt_tail_probability(200, 0.0, 20000, 1);
  CHECK(zero.threshold == -1);
  CHECK(zero.estimate > 0.3);
  CHECK(zero.estimate < 0.5);
  CHECK(zero.gaussian == doctest::Approx(0.5 * std::erfc(1.0 / std::sqrt(200.0 / 6.0) / std::sqrt(2.0))));

  const auto tail = clt_tail_probability(50, 1.0, 100000, 4);
  CHECK(tail.threshold == -11);
  CHECK(tail.samples == 100000);
  CHECK(tail.standard_error == doctest::Approx(std::sqrt(tail.estimate * (1 - tail.estimate) / 1e5)));

  const auto one = clt_tail_probability(30, 0.5, 50000, 9, 1);
  const auto four = clt_tail_probability(30, 0.5, 50000, 9, 4);
  CHECK(one.hits == four.hits);

  double previous = 1.0;
  for (double C : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    double mean = 0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) mean += clt_tail_probability(30, C, 20000, seed).estimate;
    CHECK(mean / 4 <= previous);
    previous = mean / 4;
  }
  CHECK_THROWS_AS(clt_tail_probability(50, 1.0, 9999, 1), std::invalid_argument);
}

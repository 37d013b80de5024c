#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "orthoplex/lattice_ops.hpp"

using namespace orthoplex;

namespace {

GridFunction random_interior(unsigned d, unsigned L, unsigned support, std::mt19937_64& rng) {
  GridFunction f(d, L);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = f.point_of(i);
    bool inside = true;
    for (int v : x) inside = inside && static_cast<unsigned>(std::abs(v)) <= support;
    if (inside) f[i] = u(rng);
  }
  return f;
}

// Zero-extended average at x by brute force over the box oracle.
double direct_average(const GridFunction& f, const std::vector<int>& x, unsigned R, bool sphere) {
  const unsigned d = f.dimension();
  double sum = 0;
  std::uint64_t count = 0;
  oracle::for_each_in_box(d, static_cast<int>(R), [&](const oracle::Point& y) {
    const unsigned norm = oracle::l1(y);
    if (norm > R || (sphere && norm != R)) return;
    ++count;
    std::vector<int> z(d);
    for (unsigned i = 0; i < d; ++i) z[i] = x[i] + y[i];
    if (f.contains(z)) sum += f.at(z);
  });
  return sum / static_cast<double>(count);
}

}  // namespace

TEST_CASE("GridFunction layout") {
  GridFunction f(2, 3);
  CHECK(f.size() == 49);
  CHECK(f.index_of(std::vector<int>{-3, -3}) == 0);
  CHECK(f.index_of(std::vector<int>{-3, -2}) == 1);
  CHECK(f.point_of(48) == std::vector<int>{3, 3});
  CHECK_THROWS_AS(f.index_of(std::vector<int>{4, 0}), std::out_of_range);
  CHECK_THROWS_AS(GridFunction(5, 1), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(0, 1), std::invalid_argument);
  Guards tight;
  tight.box_cells = 100;
  CHECK_THROWS_AS(GridFunction(3, 3, tight), GuardViolation);
  const auto delta = GridFunction::delta(3, 2);
  CHECK(delta.norm(1) == 1.0);
  CHECK(delta.at(std::vector<int>{0, 0, 0}) == 1.0);
}

TEST_CASE("averages of a delta") {
  const auto delta = GridFunction::delta(2, 4);
  const auto ball = ball_average(delta, 1);
  const auto sphere = sphere_average(delta, 2);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto x = ball.point_of(i);
    const unsigned norm = oracle::l1(x);
    CHECK(ball[i] == doctest::Approx(norm <= 1 ? 0.2 : 0.0));
    CHECK(sphere[i] == doctest::Approx(norm == 2 ? 0.125 : 0.0));
  }
  CHECK(ball_average(delta, 0).values() == delta.values());
  CHECK(sphere_average(delta, 0).values() == delta.values());

  GridFunction ones(2, 12);
  for (auto& v : ones.values()) v = 1.0;
  CHECK(ball_average(ones, 5).at(std::vector<int>{0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("averages match brute force with zero extension") {
  std::mt19937_64 rng(7);
  for (unsigned d = 1; d <= 3; ++d) {
    const auto f = random_interior(d, 4, 4, rng);
    for (unsigned R : {1u, 2u, 3u}) {
      const auto ball = ball_average(f, R);
      const auto sphere = sphere_average(f, R);
      for (std::size_t i = 0; i < f.size(); i += 3) {
        const auto x = f.point_of(i);
        CHECK(std::abs(ball[i] - direct_average(f, x, R, false)) <= 1e-12);
        CHECK(std::abs(sphere[i] - direct_average(f, x, R, true)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("contraction and sphere/ball partition") {
  std::mt19937_64 rng(11);
  for (unsigned d = 1; d <= 4; ++d) {
    const unsigned support = 2;
    const unsigned R_max = d <= 2 ? 10 : (d == 3 ? 6 : 3);
    const unsigned L = support + R_max;
    const auto f = random_interior(d, L, support, rng);
    for (unsigned R = 0; R <= R_max; ++R) {
      const auto avg = ball_average(f, R);
      for (double p : {1.0, 2.0, static_cast<double>(INFINITY)}) CHECK(avg.norm(p) <= f.norm(p) * (1 + 1e-12));
    }
    // |B_R| M_R f = sum_k |S_k| S_k f.
    const unsigned R = std::min(R_max, 4u);
    const auto ball = ball_average(f, R);
    std::vector<double> total(f.size(), 0.0);
    for (unsigned k = 0; k <= R; ++k) {
      const auto s = sphere_average(f, k);
      const double weight = sphere_count(d, k).get_d();
      for (std::size_t i = 0; i < f.size(); ++i) total[i] += weight * s[i];
    }
    const double b = delannoy(d, R).get_d();
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(b * ball[i] - total[i]) <= 1e-10);
  }
}

TEST_CASE("RadiusSet") {
  CHECK(RadiusSet::dyadic().realize(10) == std::vector<unsigned>{1, 2, 4, 8});
  CHECK(RadiusSet::full_range().realize(3) == std::vector<unsigned>{0, 1, 2, 3});
  CHECK(RadiusSet::interval(2, 5).realize(4) == std::vector<unsigned>{2, 3, 4});
  CHECK(RadiusSet::explicit_list({5, 1, 3}).realize(4) == std::vector<unsigned>{1, 3});
  CHECK(RadiusSet::parse("list:4,2").realize(100) == std::vector<unsigned>{2, 4});
  CHECK(RadiusSet::parse("interval:1:3").realize(100) == std::vector<unsigned>{1, 2, 3});
  CHECK(RadiusSet::parse("dyadic:4").realize(100) == std::vector<unsigned>{1, 2, 4});
  CHECK(RadiusSet::parse("full:2").realize(100) == std::vector<unsigned>{0, 1, 2});
  CHECK_THROWS_AS(RadiusSet::parse("cubes"), std::invalid_argument);
}

TEST_CASE("maximal_function") {
  std::mt19937_64 rng(5);
  const auto f = random_interior(2, 6, 3, rng);
  const auto m0 = maximal_function(f, RadiusSet::explicit_list({0}), AverageKind::ball);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(m0[i] == std::abs(f[i]));

  const auto m03 = maximal_function(f, RadiusSet::explicit_list({0, 3}), AverageKind::ball);
  const auto a3 = ball_average(f, 3);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(m03[i] == doctest::Approx(std::max(std::abs(f[i]), std::abs(a3[i]))).epsilon(1e-14));
  }

  const auto small = maximal_function(f, RadiusSet::explicit_list({1, 4}), AverageKind::ball);
  const auto large = maximal_function(f, RadiusSet::interval(0, 6), AverageKind::ball);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(small[i] <= large[i] + 1e-15);

  const auto delta = GridFunction::delta(2, 10);
  const auto dyadic = maximal_function(delta, RadiusSet::parse("dyadic:8"), AverageKind::ball);
  CHECK(dyadic.at(std::vector<int>{0, 0}) == doctest::Approx(0.2));
  const auto with_zero = maximal_function(delta, RadiusSet::parse("full:8"), AverageKind::ball);
  CHECK(with_zero.at(std::vector<int>{0, 0}) == 1.0);

  const auto sphere = maximal_function(delta, RadiusSet::explicit_list({2}), AverageKind::sphere);
  CHECK(sphere.at(std::vector<int>{1, 1}) == doctest::Approx(0.125));

  CHECK_THROWS_AS(maximal_function(f, RadiusSet::interval(50, 60), AverageKind::ball),
                  std::invalid_argument);
}

TEST_CASE("operator_norm_probe") {
  const auto single = operator_norm_probe(2, RadiusSet::explicit_list({3}), 2.0, 6, 1, 32, 3);
  CHECK(single.ratio <= 1.0 + 1e-12);

  const auto trivial = operator_norm_probe(2, RadiusSet::explicit_list({0}), 2.0, 1, 1);
  CHECK(trivial.ratio == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(trivial.best_trial == "delta");

  const auto probe = operator_norm_probe(2, RadiusSet::interval(1, 10), 2.0, 8, 3, 32, 8);
  CHECK(probe.ratio > 1.0);
  CHECK(probe.ratio < 5.0);
  CHECK(probe.radii.size() == 10);
  CHECK(probe.half_width == 18);

  const auto again = operator_norm_probe(2, RadiusSet::interval(1, 10), 2.0, 8, 3, 32, 8);
  CHECK(again.ratio == probe.ratio);
  CHECK(again.best_trial == probe.best_trial);

  Guards tight;
  tight.box_cells = 1000;
  CHECK_THROWS_AS(operator_norm_probe(3, RadiusSet::dyadic(), 2.0, 2, 1, 32, 2, tight), GuardViolation);
}

TEST_CASE("FrequencyPoint and torus_partition") {
  const FrequencyPoint xi({0.75, -0.5, 1.25});
  CHECK(xi.coordinates()[0] == doctest::Approx(-0.25));
  CHECK(xi.coordinates()[1] == doctest::Approx(-0.5));
  CHECK(xi.coordinates()[2] == doctest::Approx(0.25));
  CHECK(FrequencyPoint({0.5, 0.5}).torus_norm() == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(character(0.25) - std::complex<double>(0.0, -1.0)) <= 1e-15);

  CHECK(torus_partition(FrequencyPoint({0.0, 0.0, 0.0})) == TorusPart::T0);
  CHECK(torus_partition(FrequencyPoint({0.5, 0.5, 0.5})) == TorusPart::T1);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int t = 0; t < 200; ++t) {
    const FrequencyPoint p({u(rng), u(rng), u(rng), u(rng)});
    if (std::abs(p.torus_norm() - p.antipode().torus_norm()) < 1e-9) continue;
    CHECK(torus_partition(p) != torus_partition(p.antipode()));
  }
}

TEST_CASE("multipliers") {
  CHECK(multiplier_m(5, 7, FrequencyPoint({0, 0, 0, 0, 0})) == std::complex<double>(1.0, 0.0));
  CHECK(multiplier_s(5, 7, FrequencyPoint({0, 0, 0, 0, 0})) == std::complex<double>(1.0, 0.0));
  const auto m = multiplier_m(1, 1, FrequencyPoint({0.5}));
  CHECK(m.real() == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(m.imag()) <= 1e-15);

  SUBCASE("DP equals direct summation on seeded triples") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<unsigned> dd(1, 4), nn(0, 8);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int t = 0; t < 100; ++t) {
      const unsigned d = dd(rng), n = nn(rng);
      std::vector<double> c(d);
      for (auto& v : c) v = u(rng);
      const FrequencyPoint xi(c);
      CAPTURE(d);
      CAPTURE(n);
      CHECK(std::abs(multiplier_m(d, n, xi) - oracle::direct_multiplier(d, n, xi.coordinates(), 0)) <= 1e-12);
      CHECK(std::abs(multiplier_s(d, n, xi) - oracle::direct_multiplier(d, n, xi.coordinates(), n)) <= 1e-12);
    }
  }
  SUBCASE("realness, periodicity, sphere identity, boundedness") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int t = 0; t < 50; ++t) {
      const unsigned d = 1 + t % 30, n = 1 + (t * 7) % 40;
      std::vector<double> c(d);
      for (auto& v : c) v = u(rng);
      const FrequencyPoint xi(c);
      const auto value = multiplier_m(d, n, xi);
      CHECK(std::abs(value.imag()) <= 1e-10);
      CHECK(std::abs(value) <= 1 + 1e-10);
      auto shifted = c;
      shifted[t % d] += 1.0;
      CHECK(std::abs(multiplier_m(d, n, FrequencyPoint(shifted)) - value) <= 1e-10);
      const double b = delannoy(d, n).get_d(), b1 = delannoy(d, n - 1).get_d(), s = sphere_count(d, n).get_d();
      const auto lhs = s * multiplier_s(d, n, xi);
      const auto rhs = b * value - b1 * multiplier_m(d, n - 1, xi);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * b);
    }
  }
  const FrequencyPoint xi2({0.1, 0.3});
  CHECK(std::abs(multiplier_s(2, 2, xi2) - oracle::direct_multiplier(2, 2, xi2.coordinates(), 2)) <= 1e-12);

  Guards tight;
  tight.dp_budget = 100;
  CHECK_THROWS_AS(multiplier_m(50, 50, FrequencyPoint(std::vector<double>(50, 0.1)), tight), GuardViolation);
}

TEST_CASE("multiplier_bound_scan") {
  const auto scan = multiplier_bound_scan(4, 64, 200, 1);
  CHECK(scan.local_points > 0);
  CHECK(scan.global_points > 0);
  CHECK(std::isfinite(scan.local_constant));
  CHECK(scan.local_constant <= 10.0);
  const auto doubled = multiplier_bound_scan(4, 64, 400, 1);
  CHECK(doubled.global_constant < 2 * scan.global_constant);
  CHECK(scan.global_constant < 2 * doubled.global_constant);
  const auto repeat = multiplier_bound_scan(4, 64, 200, 1);
  CHECK(repeat.local_constant == scan.local_constant);
  CHECK(repeat.global_constant == scan.global_constant);
  CHECK_THROWS_AS(multiplier_bound_scan(4, 4, 10, 1), std::invalid_argument);
}

TEST_CASE("beta_multiplier and composition classes") {
  CHECK(beta_multiplier(2, CompositionProfile{{1}}, FrequencyPoint({0.25, 0.0})).real() ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(beta_multiplier(3, CompositionProfile{{1, 1}}, FrequencyPoint({0, 0, 0})) == std::complex<double>(1, 0));
  CHECK(beta_multiplier(3, CompositionProfile{{0, 0}}, FrequencyPoint({0.3, 0.1, 0.2})) ==
        std::complex<double>(1, 0));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (unsigned d = 1; d <= 3; ++d) {
    const FrequencyPoint xi({u(rng), u(rng), u(rng)});
    const FrequencyPoint x(std::vector<double>(xi.coordinates().begin(), xi.coordinates().begin() + d));
    // The ball of radius 2 is the disjoint union of the classes with |j| <= d and j_1 + 2 j_2 <= 2.
    std::complex<double> weighted = 0;
    for (unsigned j1 = 0; j1 <= d; ++j1) {
      for (unsigned j2 = 0; j1 + j2 <= d; ++j2) {
        if (j1 + 2 * j2 > 2) continue;
        const CompositionProfile profile{{j1, j2}};
        const double size = composition_class_count(d, profile).get_d();
        const auto beta = beta_multiplier(d, profile, x);
        CHECK(std::abs(beta) <= 1 + 1e-12);
        weighted += size * beta;
      }
    }
    CHECK(std::abs(weighted / delannoy(d, 2).get_d() - multiplier_m(d, 2, x)) <= 1e-12);

    if (d < 2) continue;
    std::uint64_t visited = 0;
    for_each_composition_class_point(d, CompositionProfile{{1, 0, 1}}, [&](std::span<const int> p) {
      unsigned ones = 0, threes = 0;
      for (int v : p) {
        ones += std::abs(v) == 1;
        threes += std::abs(v) == 3;
        CHECK((v == 0 || std::abs(v) == 1 || std::abs(v) == 3));
      }
      CHECK(ones == 1);
      CHECK(threes == 1);
      ++visited;
    });
    CHECK(composition_class_count(d, CompositionProfile{{1, 0, 1}}) == visited);
  }
}

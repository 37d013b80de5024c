#include "orthoplex/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace orthoplex {

namespace {

constexpr unsigned kTailShards = 64;

double ratio_of(const BigCount& num, const BigCount& den) {
  if (den == 0) return 0.0;
  return BigRational(num, den).get_d();
}

void check_budget(const Guards& guards, std::uint64_t d, std::uint64_t per_coordinate,
                  const std::string& what) {
  if (d > 0 && per_coordinate > guards.dp_budget / d) {
    throw GuardViolation("dp_budget", what + " needs " + std::to_string(d) + " x " +
                                          std::to_string(per_coordinate) + " DP updates");
  }
}

// Two-index table indexed [t][c] with t in [0, n], c in [0, width).
struct Table {
  std::uint64_t rows;
  std::uint64_t width;
  std::vector<BigCount> cells;

  Table(std::uint64_t n, std::uint64_t w) : rows(n + 1), width(w), cells(rows * w) {}
  BigCount& at(std::uint64_t t, std::uint64_t c) { return cells[t * width + c]; }
  const BigCount& at(std::uint64_t t, std::uint64_t c) const { return cells[t * width + c]; }
};

// Adds 2 * sum_{k >= first} old[t - k][c] into next[t][c] for every t, c:
// the contribution of one coordinate with |v| = k >= first that leaves c alone.
void add_large_moves(const Table& old, Table& next, std::uint64_t first) {
  std::vector<BigCount> prefix(old.width);
  for (std::uint64_t t = first; t < old.rows; ++t) {
    const std::uint64_t u = t - first;  // old rows 0..u feed row t
    for (std::uint64_t c = 0; c < old.width; ++c) {
      prefix[c] += old.at(u, c);
      next.at(t, c) += 2 * prefix[c];
    }
  }
}

}  // namespace

ConcentrationReport deficit_count(std::uint64_t d, std::uint64_t n, std::uint64_t K, std::int64_t a,
                                  bool surface, const Guards& guards) {
  if (a > static_cast<std::int64_t>(n)) throw std::invalid_argument("deficit_count requires a <= n");
  check_budget(guards, d, (n + 1) * (n + 1) * (std::min(K, n) + 2), "deficit_count");

  // Small part above n - a can never come back down, so those states are dropped.
  const std::uint64_t cap =
      a <= 0 ? n : n - static_cast<std::uint64_t>(a);  // largest admissible small part
  Table table(n, cap + 1);
  table.at(0, 0) = 1;
  const std::uint64_t small_max = std::min(K, n);
  for (std::uint64_t i = 0; i < d; ++i) {
    Table next(n, cap + 1);
    for (std::uint64_t t = 0; t <= n; ++t) {
      for (std::uint64_t s = 0; s <= cap; ++s) {
        const BigCount& v = table.at(t, s);
        if (v == 0) continue;
        next.at(t, s) += v;
        for (std::uint64_t k = 1; k <= small_max && t + k <= n && s + k <= cap; ++k) {
          next.at(t + k, s + k) += 2 * v;
        }
      }
    }
    add_large_moves(table, next, small_max + 1);
    table = std::move(next);
  }

  ConcentrationReport report;
  report.d = d;
  report.n = n;
  report.K = K;
  report.a = a;
  report.threshold = cap;
  report.surface = surface;
  for (std::uint64_t t = surface ? n : 0; t <= n; ++t) {
    for (std::uint64_t s = 0; s <= cap; ++s) report.bad_count += table.at(t, s);
  }
  report.total = surface ? sphere_count(d, n) : delannoy(d, n);
  report.fraction = ratio_of(report.bad_count, report.total);
  return report;
}

std::optional<std::uint64_t> smallest_deficit(std::uint64_t d, std::uint64_t n, std::uint64_t K,
                                              double target, bool surface, const Guards& guards) {
  // The bad set shrinks as a grows, so the admissible a form a suffix of [0, n].
  const auto ok = [&](std::uint64_t a) {
    return deficit_count(d, n, K, static_cast<std::int64_t>(a), surface, guards).fraction <= target;
  };
  if (!ok(n)) return std::nullopt;
  std::uint64_t lo = 0, hi = n;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

ConcentrationReport few_ones_count(std::uint64_t d, std::uint64_t n, const Guards& guards) {
  const std::uint64_t limit = n / 2;   // admissible number of +-1 coordinates
  const std::uint64_t width = limit + 2;  // last column absorbs "more than limit"
  check_budget(guards, d, (n + 1) * width * 3, "few_ones_count");

  Table table(n, width);
  table.at(0, 0) = 1;
  for (std::uint64_t i = 0; i < d; ++i) {
    Table next(n, width);
    for (std::uint64_t t = 0; t <= n; ++t) {
      for (std::uint64_t c = 0; c < width; ++c) {
        const BigCount& v = table.at(t, c);
        if (v == 0) continue;
        next.at(t, c) += v;
        if (t + 1 <= n) next.at(t + 1, std::min(c + 1, width - 1)) += 2 * v;
      }
    }
    add_large_moves(table, next, 2);
    table = std::move(next);
  }

  ConcentrationReport report;
  report.d = d;
  report.n = n;
  report.threshold = limit;
  report.surface = true;
  for (std::uint64_t c = 0; c <= limit; ++c) report.bad_count += table.at(n, c);
  report.total = sphere_count(d, n);
  report.fraction = ratio_of(report.bad_count, report.total);
  return report;
}

ConcentrationReport large_coordinate_count_at(std::uint64_t d, std::uint64_t n,
                                              std::uint64_t threshold, const Guards& guards) {
  if (threshold == 0) throw std::invalid_argument("large-coordinate threshold must be >= 1");
  ConcentrationReport report;
  report.d = d;
  report.n = n;
  report.threshold = threshold;
  report.total = delannoy(d, n);
  report.bad_count = report.total - bounded_ball_count(d, n, threshold - 1, guards);
  report.fraction = ratio_of(report.bad_count, report.total);
  return report;
}

ConcentrationReport large_coordinate_count(std::uint64_t d, std::uint64_t n, std::uint64_t K,
                                           const Guards& guards) {
  if (K == 0) throw std::invalid_argument("large_coordinate_count requires K >= 1");
  auto report = large_coordinate_count_at(d, n, 6 * K, guards);
  report.K = K;
  return report;
}

std::uint64_t shell_l_star(std::uint64_t d, double C, std::uint64_t l) {
  if (!(C >= 0.0) || !std::isfinite(C)) throw std::invalid_argument("C must be finite and >= 0");
  return static_cast<std::uint64_t>(std::floor(C * std::sqrt(static_cast<double>(d)))) + l;
}

BigRational shell_ratio(std::uint64_t d, std::uint64_t n, double C, std::uint64_t l) {
  if (l == 0) throw std::invalid_argument("shell_ratio requires l >= 1");
  const std::uint64_t ls = shell_l_star(d, C, l);
  if (ls + 1 > d) {
    throw std::invalid_argument("shell_ratio requires l* + 1 <= d (l* = " + std::to_string(ls) +
                                ", d = " + std::to_string(d) + ")");
  }
  if (n + ls < d) {
    throw std::invalid_argument("shell_ratio requires n > d - l* - 1 (n = " + std::to_string(n) +
                                ", d - l* - 1 = " + std::to_string(d - ls - 1) + ")");
  }
  const std::uint64_t s = d - ls;
  BigRational quotient(support_shell_count(d, s - 1, n), support_shell_count(d, s, n));
  quotient.canonicalize();

  BigCount top = BigCount(d - ls) * (d - ls);
  BigCount bottom = BigCount(2) * (ls + 1) * (n - d + ls + 1);
  BigRational closed(top, bottom);
  closed.canonicalize();
  if (closed != quotient) throw std::logic_error("shell ratio closed form disagrees with shell counts");
  return quotient;
}

SecondMomentReport second_moment(std::uint64_t d, std::uint64_t n) {
  if (d == 0) throw std::invalid_argument("second_moment requires d >= 1");
  // Slice x_1 = +-j has 2 D(d-1, n-j) points for j >= 1.
  BigCount sum = 0;
  for (std::uint64_t j = 1; j <= n; ++j) sum += BigCount(2) * j * j * delannoy(d - 1, n - j);
  SecondMomentReport report;
  report.d = d;
  report.n = n;
  report.moment = BigRational(sum, delannoy(d, n));
  report.moment.canonicalize();
  const double alpha = static_cast<double>(n) / static_cast<double>(d);
  report.ratio_to_alpha_sq = n == 0 ? std::nan("") : report.moment.get_d() / (alpha * alpha);
  return report;
}

TailEstimate clt_tail_probability(std::uint64_t d_star, double C, std::uint64_t samples,
                                  std::uint64_t seed, unsigned threads) {
  if (d_star == 0) throw std::invalid_argument("clt_tail_probability requires d* >= 1");
  if (samples < 10'000) throw std::invalid_argument("clt_tail_probability requires samples >= 10^4");
  if (!(C >= 0.0) || !std::isfinite(C)) throw std::invalid_argument("C must be finite and >= 0");

  // Integer square root of 2 C^2 d*, corrected for rounding near perfect squares.
  const double x = 2.0 * C * C * static_cast<double>(d_star);
  auto root = static_cast<std::int64_t>(std::floor(std::sqrt(x)));
  while (static_cast<double>(root + 1) * static_cast<double>(root + 1) <= x) ++root;
  while (root > 0 && static_cast<double>(root) * static_cast<double>(root) > x) --root;

  TailEstimate out;
  out.d_star = d_star;
  out.C = C;
  out.threshold = -root - 1;
  out.samples = samples;
  out.seed = seed;

  const double threshold = static_cast<double>(out.threshold);
  const std::uint64_t terms = 2 * d_star;
  std::vector<std::uint64_t> hits(kTailShards, 0);
  const auto run_shard = [&](unsigned shard) {
    const std::uint64_t count = samples / kTailShards + (shard < samples % kTailShards ? 1 : 0);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), shard};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uniform(-0.5, 0.5);
    std::uint64_t local = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      double sum = 0;
      for (std::uint64_t k = 0; k < terms; ++k) sum += uniform(rng);
      if (sum <= threshold) ++local;
    }
    hits[shard] = local;
  };

  const unsigned workers = std::clamp(threads, 1u, kTailShards);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (unsigned shard = w; shard < kTailShards; shard += workers) run_shard(shard);
    });
  }
  for (auto& t : pool) t.join();

  for (auto h : hits) out.hits += h;
  const double p = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.estimate = p;
  out.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  const double sigma = std::sqrt(static_cast<double>(terms) / 12.0);
  out.gaussian = 0.5 * std::erfc(-threshold / sigma / std::sqrt(2.0));
  return out;
}

}  // namespace orthoplex

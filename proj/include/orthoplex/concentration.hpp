#pragma once

// Exact counts of the "badly concentrated" parts of B_n ∩ Z^d and S_n ∩ Z^d,
// plus a seeded Monte Carlo for a sum-of-uniforms tail.

#include <cstdint>
#include <optional>

#include "orthoplex/exact_counts.hpp"
#include "orthoplex/guards.hpp"

namespace orthoplex {

struct ConcentrationReport {
  std::uint64_t d = 0;
  std::uint64_t n = 0;
  std::uint64_t K = 0;          // small-coordinate cutoff (deficit) or 0
  std::int64_t a = 0;           // deficit (deficit_count only)
  std::uint64_t threshold = 0;  // n - a, floor(n/2) or the large-coordinate bound
  bool surface = false;         // counted on S_n rather than B_n
  BigCount bad_count;
  BigCount total;
  double fraction = 0;  // bad_count / total
};

// Points x of B_n (S_n if surface) with sum_i |x_i| 1{|x_i| <= K} <= n - a.
// Two-dimensional budget DP over (l1 used, small part used). Requires a <= n.
ConcentrationReport deficit_count(std::uint64_t d, std::uint64_t n, std::uint64_t K, std::int64_t a,
                                  bool surface, const Guards& guards = {});

// Smallest a in [0, n] with deficit fraction <= target, or nullopt if none.
std::optional<std::uint64_t> smallest_deficit(std::uint64_t d, std::uint64_t n, std::uint64_t K,
                                              double target, bool surface = false,
                                              const Guards& guards = {});

// Points of S_n with at most n/2 coordinates equal to +-1.
ConcentrationReport few_ones_count(std::uint64_t d, std::uint64_t n, const Guards& guards = {});

// Points of B_n with |x_i| >= threshold for some i. Requires threshold >= 1.
ConcentrationReport large_coordinate_count_at(std::uint64_t d, std::uint64_t n,
                                              std::uint64_t threshold, const Guards& guards = {});
// Same with threshold 6K. Requires K >= 1.
ConcentrationReport large_coordinate_count(std::uint64_t d, std::uint64_t n, std::uint64_t K,
                                           const Guards& guards = {});

// floor(C sqrt d) + l.
std::uint64_t shell_l_star(std::uint64_t d, double C, std::uint64_t l);

// |shell of support d-l*-1| / |shell of support d-l*| in B_n, which equals
// (d-l*)^2 / (2 (l*+1) (n-d+l*+1)). Requires l* + 1 <= d and n >= d - l*.
BigRational shell_ratio(std::uint64_t d, std::uint64_t n, double C, std::uint64_t l);

struct SecondMomentReport {
  std::uint64_t d = 0;
  std::uint64_t n = 0;
  BigRational moment;            // average of x_1^2 over B_n ∩ Z^d
  double ratio_to_alpha_sq = 0;  // moment / (n/d)^2; NaN when n = 0
};

SecondMomentReport second_moment(std::uint64_t d, std::uint64_t n);

struct TailEstimate {
  std::uint64_t d_star = 0;
  double C = 0;
  std::int64_t threshold = 0;  // -floor(sqrt(2 C^2 d*)) - 1
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
  double estimate = 0;
  double standard_error = 0;  // binomial
  double gaussian = 0;        // Phi(threshold / sqrt(2 d* / 12))
};

// P(U_1 + ... + U_{2d*} <= threshold), U_i iid uniform on [-1/2, 1/2].
// Samples are split over a fixed number of shards, each with its own
// mt19937_64 stream seeded from (seed, shard), so the result does not depend
// on the thread count. Requires samples >= 10^4.
TailEstimate clt_tail_probability(std::uint64_t d_star, double C, std::uint64_t samples,
                                  std::uint64_t seed, unsigned threads = 1);

}  // namespace orthoplex

#include "orthoplex/exact_counts.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace orthoplex {

double log_count(const BigCount& value) {
  if (sgn(value) <= 0) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

BigCount binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigCount result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    result *= static_cast<unsigned long>(n - i);
    mpz_divexact_ui(result.get_mpz_t(), result.get_mpz_t(), static_cast<unsigned long>(i + 1));
  }
  return result;
}

std::uint64_t LatticePoint::l1_norm() const {
  std::uint64_t total = 0;
  for (int c : coordinates) total += static_cast<std::uint64_t>(c < 0 ? -static_cast<std::int64_t>(c) : c);
  return total;
}

std::uint64_t CompositionProfile::total() const {
  std::uint64_t sum = 0;
  for (unsigned j : multiplicities) sum += j;
  return sum;
}

EhrhartPolynomial::EhrhartPolynomial(unsigned dimension, std::vector<BigRational> coefficients)
    : dimension_(dimension), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != dimension_ + 1u) {
    throw std::invalid_argument("Ehrhart polynomial of dimension d needs d+1 coefficients");
  }
}

BigRational EhrhartPolynomial::evaluate(const BigRational& n) const {
  BigRational acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * n + *it;
  }
  acc.canonicalize();
  return acc;
}

BigCount EhrhartPolynomial::evaluate_count(std::uint64_t n) const {
  const BigRational value = evaluate(BigRational(BigCount(static_cast<unsigned long>(n))));
  if (value.get_den() != 1) {
    throw std::logic_error("Ehrhart polynomial evaluated to a non-integer");
  }
  return value.get_num();
}

BigCount delannoy(std::uint64_t d, std::uint64_t n) {
  const std::uint64_t top = std::min(d, n);
  BigCount sum = 0;
  BigCount choose_d = 1;  // C(d, k)
  BigCount choose_n = 1;  // C(n, k)
  BigCount power = 1;     // 2^k
  for (std::uint64_t k = 0; k <= top; ++k) {
    sum += power * choose_d * choose_n;
    choose_d *= static_cast<unsigned long>(d - k);
    mpz_divexact_ui(choose_d.get_mpz_t(), choose_d.get_mpz_t(), static_cast<unsigned long>(k + 1));
    choose_n *= static_cast<unsigned long>(n - k);
    mpz_divexact_ui(choose_n.get_mpz_t(), choose_n.get_mpz_t(), static_cast<unsigned long>(k + 1));
    power <<= 1;
  }
#ifndef NDEBUG
  if (d * n <= 400) assert(sum == delannoy_by_recurrence(d, n));
#endif
  return sum;
}

std::vector<std::vector<BigCount>> delannoy_table(std::uint64_t max_d, std::uint64_t max_n) {
  std::vector<std::vector<BigCount>> table(max_d + 1, std::vector<BigCount>(max_n + 1, 1));
  for (std::uint64_t i = 1; i <= max_d; ++i) {
    for (std::uint64_t j = 1; j <= max_n; ++j) {
      table[i][j] = table[i - 1][j] + table[i][j - 1] + table[i - 1][j - 1];
    }
  }
  return table;
}

BigCount delannoy_by_recurrence(std::uint64_t d, std::uint64_t n) {
  // Only two rows are alive at a time.
  std::vector<BigCount> prev(n + 1, 1), cur(n + 1, 1);
  for (std::uint64_t i = 1; i <= d; ++i) {
    cur[0] = 1;
    for (std::uint64_t j = 1; j <= n; ++j) cur[j] = prev[j] + cur[j - 1] + prev[j - 1];
    std::swap(prev, cur);
  }
  return prev[n];
}

BigCount sphere_count(std::uint64_t d, std::uint64_t n) {
  if (n == 0) return 1;
  return delannoy(d, n) - delannoy(d, n - 1);
}

BigCount support_shell_count(std::uint64_t d, std::uint64_t s, std::uint64_t n) {
  if (s > d) throw std::invalid_argument("support size s must not exceed the dimension d");
  BigCount result = binomial(d, s) * binomial(n, s);
  result <<= static_cast<mp_bitcnt_t>(s);
  return result;
}

BigCount bounded_ball_count(std::uint64_t d, std::uint64_t n, std::uint64_t m,
                            const Guards& guards) {
  const std::uint64_t width = std::min(n, m);
  if (d > 0 && (n + 1) > guards.dp_budget / d) {
    throw GuardViolation("dp_budget", "bounded_ball_count needs d*(n+1) = " +
                                          std::to_string(d) + "*" + std::to_string(n + 1) +
                                          " cell updates");
  }
  // ways[b]: number of prefixes with l1 budget exactly b.
  std::vector<BigCount> ways(n + 1, 0), next(n + 1, 0);
  ways[0] = 1;
  for (std::uint64_t coord = 0; coord < d; ++coord) {
    // Convolution with the profile 1 + 2(z + ... + z^width), kept as a
    // sliding window sum over ways[b-width .. b-1].
    BigCount window = 0;
    for (std::uint64_t b = 0; b <= n; ++b) {
      next[b] = ways[b] + 2 * window;
      window += ways[b];
      if (b >= width) window -= ways[b - width];
    }
    std::swap(ways, next);
  }
  BigCount total = 0;
  for (const auto& w : ways) total += w;
  return total;
}

BigCount composition_class_count(std::uint64_t d, const CompositionProfile& profile) {
  const std::uint64_t used = profile.total();
  if (used > d) {
    throw std::invalid_argument("composition profile uses " + std::to_string(used) +
                                " coordinates but d = " + std::to_string(d));
  }
  BigCount result = 1;
  std::uint64_t remaining = d;
  for (unsigned j : profile.multiplicities) {
    result *= binomial(remaining, j);
    remaining -= j;
  }
  result <<= static_cast<mp_bitcnt_t>(used);
  return result;
}

EhrhartPolynomial ehrhart_polynomial(unsigned d, const Guards& guards) {
  if (d > guards.ehrhart_max_dimension) {
    throw GuardViolation("ehrhart_dimension", "d = " + std::to_string(d) + " exceeds limit " +
                                                  std::to_string(guards.ehrhart_max_dimension));
  }
  // falling[k] = coefficients of n(n-1)...(n-k+1) in powers of n.
  std::vector<BigRational> coefficients(d + 1, 0);
  std::vector<BigCount> falling{1};
  BigCount factorial = 1;
  for (unsigned k = 0; k <= d; ++k) {
    if (k > 0) {
      std::vector<BigCount> grown(falling.size() + 1, 0);
      for (std::size_t i = 0; i < falling.size(); ++i) {
        grown[i + 1] += falling[i];
        grown[i] -= falling[i] * static_cast<unsigned long>(k - 1);
      }
      falling = std::move(grown);
      factorial *= k;
    }
    BigCount weight = binomial(d, k);
    weight <<= k;
    for (std::size_t i = 0; i < falling.size(); ++i) {
      coefficients[i] += BigRational(weight * falling[i], factorial);
    }
  }
  for (auto& c : coefficients) c.canonicalize();
  return EhrhartPolynomial(d, std::move(coefficients));
}

namespace {

void check_enumeration_guard(unsigned d, unsigned n, const Guards& guards) {
  const BigCount count = delannoy(d, n);
  if (count > BigCount(static_cast<unsigned long>(
                  std::min<std::uint64_t>(guards.enumeration_limit, std::numeric_limits<unsigned long>::max())))) {
    throw GuardViolation("enumeration", "|B_" + std::to_string(n) + " ∩ Z^" + std::to_string(d) +
                                            "| = " + count.get_str() + " points");
  }
}

// Lexicographic walk with remaining-budget pruning. When `exact` is set the
// last coordinate is forced to +-remaining so only the sphere is visited.
void walk(std::vector<int>& point, unsigned index, int remaining, bool exact,
          const PointVisitor& visit) {
  const unsigned d = static_cast<unsigned>(point.size());
  if (index == d) {
    visit(point);
    return;
  }
  if (exact && index + 1 == d) {
    point[index] = -remaining;
    visit(point);
    if (remaining != 0) {
      point[index] = remaining;
      visit(point);
    }
    return;
  }
  for (int v = -remaining; v <= remaining; ++v) {
    point[index] = v;
    walk(point, index + 1, remaining - (v < 0 ? -v : v), exact, visit);
  }
}

}  // namespace

void for_each_ball_point(unsigned d, unsigned n, const PointVisitor& visit, const Guards& guards) {
  check_enumeration_guard(d, n, guards);
  std::vector<int> point(d, 0);
  walk(point, 0, static_cast<int>(n), false, visit);
}

void for_each_sphere_point(unsigned d, unsigned n, const PointVisitor& visit,
                           const Guards& guards) {
  check_enumeration_guard(d, n, guards);
  std::vector<int> point(d, 0);
  if (d == 0) {
    if (n == 0) visit(point);
    return;
  }
  walk(point, 0, static_cast<int>(n), true, visit);
}

std::vector<LatticePoint> enumerate_ball(unsigned d, unsigned n, const Guards& guards) {
  std::vector<LatticePoint> points;
  for_each_ball_point(
      d, n,
      [&](std::span<const int> x) { points.push_back(LatticePoint{{x.begin(), x.end()}}); },
      guards);
  return points;
}

}  // namespace orthoplex

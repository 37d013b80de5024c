#pragma once

// Exact lattice-point counts for the l1 ball B_n = {x in Z^d : |x_1|+...+|x_d| <= n}
// and its boundary S_n, plus refined subsets. All counts are GMP integers.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "orthoplex/guards.hpp"

namespace orthoplex {

using BigCount = mpz_class;
using BigRational = mpq_class;

// Natural log of a positive count without converting through double (which
// overflows once the count passes ~1e308).
double log_count(const BigCount& value);

BigCount binomial(std::uint64_t n, std::uint64_t k);

struct LatticePoint {
  std::vector<int> coordinates;

  std::size_t dimension() const { return coordinates.size(); }
  std::uint64_t l1_norm() const;
  bool in_ball(std::uint64_t n) const { return l1_norm() <= n; }

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

// K-tuple (j_1, ..., j_K): j_k coordinates equal to +-k, the rest zero.
struct CompositionProfile {
  std::vector<unsigned> multiplicities;

  unsigned max_magnitude() const { return static_cast<unsigned>(multiplicities.size()); }
  std::uint64_t total() const;  // |j| = sum of j_k
};

// i(B_1^d, n) = sum_k c_k n^k with rational c_k. Evaluating at an integer
// n >= 0 gives delannoy(d, n).
class EhrhartPolynomial {
 public:
  EhrhartPolynomial(unsigned dimension, std::vector<BigRational> coefficients);

  unsigned dimension() const { return dimension_; }
  const std::vector<BigRational>& coefficients() const { return coefficients_; }
  BigRational evaluate(const BigRational& n) const;
  // Throws std::logic_error if the value at n is not an integer.
  BigCount evaluate_count(std::uint64_t n) const;

 private:
  unsigned dimension_;
  std::vector<BigRational> coefficients_;
};

// D(d, n) = sum_k 2^k C(d,k) C(n,k). d = 0 or n = 0 gives 1.
BigCount delannoy(std::uint64_t d, std::uint64_t n);

// Table T[i][j] = D(i, j) for i <= max_d, j <= max_n from the king-path
// recurrence D(i,j) = D(i-1,j) + D(i,j-1) + D(i-1,j-1).
std::vector<std::vector<BigCount>> delannoy_table(std::uint64_t max_d, std::uint64_t max_n);

BigCount delannoy_by_recurrence(std::uint64_t d, std::uint64_t n);

// |S_n ∩ Z^d|.
BigCount sphere_count(std::uint64_t d, std::uint64_t n);

// Points of B_n with exactly s nonzero coordinates: 2^s C(d,s) C(n,s).
BigCount support_shell_count(std::uint64_t d, std::uint64_t s, std::uint64_t n);

// Points of B_n with max_i |x_i| <= m.
BigCount bounded_ball_count(std::uint64_t d, std::uint64_t n, std::uint64_t m,
                            const Guards& guards = {});

// |D_j| = 2^{|j|} d! / (j_1! ... j_K! (d-|j|)!).
BigCount composition_class_count(std::uint64_t d, const CompositionProfile& profile);

EhrhartPolynomial ehrhart_polynomial(unsigned d, const Guards& guards = {});

using PointVisitor = std::function<void(std::span<const int>)>;

// Visits every x in B_n ∩ Z^d exactly once in lexicographic order.
// Throws GuardViolation("enumeration", ...) if delannoy(d, n) exceeds the limit.
void for_each_ball_point(unsigned d, unsigned n, const PointVisitor& visit,
                         const Guards& guards = {});

// Same for S_n ∩ Z^d (points with l1 norm exactly n).
void for_each_sphere_point(unsigned d, unsigned n, const PointVisitor& visit,
                           const Guards& guards = {});

std::vector<LatticePoint> enumerate_ball(unsigned d, unsigned n, const Guards& guards = {});

}  // namespace orthoplex

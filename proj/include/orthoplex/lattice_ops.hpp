#pragma once

// Desk-scale testbed for the discrete ball/sphere averages on Z^d, their
// maximal functions, and the Fourier multipliers of those averages on T^d.
//
// Fourier convention: e(y) = exp(-2 pi i y), and the multiplier of an average
// over a finite set A is |A|^{-1} sum_{x in A} e(x . xi).

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orthoplex/exact_counts.hpp"
#include "orthoplex/guards.hpp"

namespace orthoplex {

// Real function on the box [-L, L]^d, d <= 4, stored densely.
//
// Point x maps to index sum_i (x_i + L) * (2L+1)^{d-1-i}: the first coordinate
// is the most significant digit, so index order equals lexicographic order.
class GridFunction {
 public:
  static constexpr unsigned kMaxDimension = 4;

  GridFunction(unsigned dimension, unsigned half_width, const Guards& guards = {});

  static GridFunction delta(unsigned dimension, unsigned half_width, const Guards& guards = {});

  unsigned dimension() const { return dimension_; }
  unsigned half_width() const { return half_width_; }
  std::size_t side() const { return 2 * static_cast<std::size_t>(half_width_) + 1; }
  std::size_t size() const { return values_.size(); }

  bool contains(std::span<const int> point) const;
  // Throws std::out_of_range for points outside the box.
  std::size_t index_of(std::span<const int> point) const;
  std::vector<int> point_of(std::size_t index) const;

  double at(std::span<const int> point) const { return values_[index_of(point)]; }
  double& at(std::span<const int> point) { return values_[index_of(point)]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  // l^p norm over the box; p = +inf gives the sup norm.
  double norm(double p) const;

 private:
  unsigned dimension_;
  unsigned half_width_;
  std::vector<double> values_;
};

enum class AverageKind { ball, sphere };

std::string_view to_string(AverageKind kind);
AverageKind parse_average_kind(std::string_view name);

// Averages use zero extension: f is 0 outside its box, and the result is
// reported on the same box. Values are exact for the zero-extended f at every
// point; for an f supported on all of Z^d they are exact on the sub-box of
// half-width L - R, see valid_half_width.
GridFunction ball_average(const GridFunction& f, unsigned radius, const Guards& guards = {});
GridFunction sphere_average(const GridFunction& f, unsigned radius, const Guards& guards = {});

inline int valid_half_width(unsigned half_width, unsigned radius) {
  return static_cast<int>(half_width) - static_cast<int>(radius);
}

// A set of radii E. Realizing it clamps to radii <= max_radius and sorts.
class RadiusSet {
 public:
  enum class Kind { full_range, dyadic, explicit_list, interval };

  static RadiusSet full_range();                    // {0, 1, 2, ...}
  static RadiusSet dyadic();                        // {1, 2, 4, 8, ...}
  static RadiusSet explicit_list(std::vector<unsigned> radii);
  static RadiusSet interval(unsigned lo, unsigned hi);  // {lo, ..., hi}

  // "full", "dyadic", "list:1,2,4", "interval:1:10"; "full" and "dyadic"
  // accept an optional ":max" suffix that becomes an interval/list bound.
  static RadiusSet parse(std::string_view text);

  Kind kind() const { return kind_; }
  std::vector<unsigned> realize(unsigned max_radius) const;

 private:
  RadiusSet(Kind kind, std::vector<unsigned> params) : kind_(kind), params_(std::move(params)) {}

  Kind kind_;
  std::vector<unsigned> params_;
};

// sup_{R in E} |A_R f| pointwise, A_R the ball or sphere average. Radii are
// clamped to d * 2L (beyond that every stencil covers the whole box).
// Throws std::invalid_argument if no radius survives realization.
GridFunction maximal_function(const GridFunction& f, const RadiusSet& radii, AverageKind kind,
                              const Guards& guards = {});

struct NormProbeReport {
  double ratio = 0;              // max over trials of ||M_* f||_p / ||f||_p
  std::string best_trial;        // "delta", "box", "sign:<k>" or "sparse:<k>"
  std::uint64_t seed = 0;
  unsigned half_width = 0;       // box used for the computation
  unsigned support_half_width = 0;
  std::vector<unsigned> radii;   // realized E
};

// Empirical lower bound for the l^p -> l^p norm of the ball maximal operator
// over E. Trial 0 is the delta, trial 1 the indicator of [-s, s]^d, and later
// trials alternate random signs and random sparse values. All are supported in
// [-s, s]^d and the box has half-width s + max(E), so the whole support of
// M_* f is inside it and no truncation bias enters. E is realized up to
// max_radius. Throws GuardViolation("box_cells", ...) if the box is too big.
NormProbeReport operator_norm_probe(unsigned d, const RadiusSet& radii, double p,
                                    unsigned trials, std::uint64_t seed,
                                    unsigned max_radius = 32, unsigned support_half_width = 2,
                                    const Guards& guards = {});

// Point of T^d; coordinates are reduced into [-1/2, 1/2) on construction.
class FrequencyPoint {
 public:
  explicit FrequencyPoint(std::vector<double> coordinates);

  std::size_t dimension() const { return coordinates_.size(); }
  const std::vector<double>& coordinates() const { return coordinates_; }
  // sqrt(sum_i sin^2(pi xi_i)), in [0, sqrt(d)].
  double torus_norm() const;
  // xi + (1/2, ..., 1/2).
  FrequencyPoint antipode() const;

 private:
  std::vector<double> coordinates_;
};

// e(y) = exp(-2 pi i y).
std::complex<double> character(double y);

// Multiplier of the ball average, m_n(xi), by budget DP over coordinates.
std::complex<double> multiplier_m(unsigned d, unsigned n, const FrequencyPoint& xi,
                                  const Guards& guards = {});
// Multiplier of the sphere average, s_n(xi).
std::complex<double> multiplier_s(unsigned d, unsigned n, const FrequencyPoint& xi,
                                  const Guards& guards = {});

struct MultiplierScan {
  unsigned d = 0;
  unsigned n = 0;
  double alpha = 0;
  std::uint64_t seed = 0;
  // max |m_n - 1| / (alpha ||xi||)^2 over sampled xi != 0 with alpha ||xi|| <= 1
  double local_constant = 0;
  // max |m_n| / ((alpha ||xi||)^{-1} + alpha^{-1/7}) over sampled xi != 0
  double global_constant = 0;
  std::size_t local_points = 0;
  std::size_t global_points = 0;
};

// Samples `samples` uniform points on T^d, plus axis-aligned points and points
// of small norm stratified in alpha ||xi|| over [1e-3, 1]. Requires n > d.
MultiplierScan multiplier_bound_scan(unsigned d, unsigned n, unsigned samples, std::uint64_t seed,
                                     const Guards& guards = {});

// Visits the points of {-K..K}^d with exactly j_k coordinates equal to +-k.
void for_each_composition_class_point(unsigned d, const CompositionProfile& profile,
                                      const PointVisitor& visit, const Guards& guards = {});

// beta_j(xi) = |D_j|^{-1} sum_{x in D_j} e(x . xi), by enumeration.
std::complex<double> beta_multiplier(unsigned d, const CompositionProfile& profile,
                                     const FrequencyPoint& xi, const Guards& guards = {});

enum class TorusPart { T0, T1 };

// T0 iff ||xi|| <= ||xi + 1/2||.
TorusPart torus_partition(const FrequencyPoint& xi);

}  // namespace orthoplex

#pragma once

// Coefficient extraction from the generating functions
//   h(z)^d          = sum_n |S_n ∩ Z^d| z^n,
//   h(z)^d / (1-z)  = sum_n |B_n ∩ Z^d| z^n,     h(z) = (1+z)/(1-z),
// by the trapezoidal rule on the circle |z| = radius. The integrand is
// periodic and analytic, so the error decays geometrically in the node count.

#include <complex>
#include <cstdint>
#include <string_view>

namespace orthoplex {

enum class Kernel { sphere, ball };

std::string_view to_string(Kernel kernel);
Kernel parse_kernel(std::string_view name);

struct ContourSpec {
  double radius = 0.5;
  unsigned nodes = 512;
  Kernel kernel = Kernel::ball;

  // 0 < radius < 1, nodes >= 16 and even; throws std::invalid_argument.
  void validate() const;
};

// The closed-form saddle r(n/d), capped at 0.9; n = 0 uses r(1/(2d)).
double default_contour_radius(std::uint64_t d, std::uint64_t n);
ContourSpec default_contour_spec(std::uint64_t d, std::uint64_t n, Kernel kernel,
                                 unsigned nodes = 512);

// Trapezoidal sum kept as exp(log_scale) * scaled so that large d does not
// overflow. Node terms are formed as exp(d log h(z) - n log z [- log(1-z)]).
struct ContourValue {
  double log_scale = 0;
  std::complex<double> scaled;

  std::complex<double> value() const { return scaled * std::exp(log_scale); }
};

// Throws NumericalError naming the node index if a node term is not finite.
ContourValue contour_integral(std::uint64_t d, std::uint64_t n, const ContourSpec& spec);

// Real part of contour_integral(...).value(); NumericalError if it overflows.
double contour_count(std::uint64_t d, std::uint64_t n, const ContourSpec& spec);

// Ball count as the cumulative sum of sphere-kernel integrals k = 0..n, each at
// the given radius and node count; an alternative route to the 1/(1-z) kernel.
double contour_ball_by_cumulative_sum(std::uint64_t d, std::uint64_t n, double radius,
                                      unsigned nodes);

// The contour integral at the saddle radius split into the arc |arg z| <= delta
// (W1) and the rest (W2). Both are stored divided by exp(log_scale), where
// log_scale = d log h(r) - n log r.
struct SaddleSplit {
  double delta = 0;
  double radius = 0;
  Kernel kernel = Kernel::ball;
  double log_scale = 0;
  std::complex<double> w1;
  std::complex<double> w2;

  // Re((W1 + W2) / (2 pi i)), unscaled.
  double count() const;
  // |W2| / (h(r)^d r^{-n}).
  double w2_ratio() const { return std::abs(w2); }
  // (W1 + W2) / (2 pi i) / exp(log_scale).
  std::complex<double> scaled_total() const;
};

// Requires 1 <= n <= d and 0 < delta <= pi.
SaddleSplit saddle_split(std::uint64_t d, std::uint64_t n, double delta,
                         Kernel kernel = Kernel::ball, unsigned nodes = 2048);

// Largest value of |f(z) - f(r) - (beta/2)(z-r)^2| * alpha^2 / (45 |z-r|^3)
// over `samples` points z = r e^{i theta}, 0 < |theta| <= delta, where
// f(z) = log h(z) - alpha log z. A result <= 1 means the cubic Taylor bound
// holds at every sampled point. Requires 1 <= n <= d.
double taylor_remainder_check(std::uint64_t d, std::uint64_t n, unsigned samples,
                              double delta = 0.05);

}  // namespace orthoplex

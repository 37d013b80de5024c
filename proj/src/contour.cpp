#include "orthoplex/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "orthoplex/asymptotics.hpp"
#include "orthoplex/guards.hpp"

namespace orthoplex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxDefaultRadius = 0.9;

using cd = std::complex<double>;

// log of the integrand times z^{n+1}, i.e. of h(z)^d z^{-n} [/(1-z)], with the
// log z branch continued along theta.
cd log_term(std::uint64_t d, std::uint64_t n, double radius, double theta, Kernel kernel) {
  const cd z = std::polar(radius, theta);
  cd value = static_cast<double>(d) * (std::log(1.0 + z) - std::log(1.0 - z)) -
             static_cast<double>(n) * cd(std::log(radius), theta);
  if (kernel == Kernel::ball) value -= std::log(1.0 - z);
  return value;
}

std::vector<cd> node_logs(std::uint64_t d, std::uint64_t n, double radius, unsigned nodes,
                          Kernel kernel) {
  std::vector<cd> logs(nodes);
  for (unsigned j = 0; j < nodes; ++j) {
    const double theta = kTwoPi * j / nodes;
    logs[j] = log_term(d, n, radius, theta, kernel);
    if (!std::isfinite(logs[j].real()) || !std::isfinite(logs[j].imag())) {
      throw NumericalError("contour node " + std::to_string(j) + " of " + std::to_string(nodes) +
                           " produced a non-finite log term");
    }
  }
  return logs;
}

double max_real(const std::vector<cd>& logs) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& l : logs) best = std::max(best, l.real());
  return best;
}

}  // namespace

std::string_view to_string(Kernel kernel) { return kernel == Kernel::ball ? "ball" : "sphere"; }

Kernel parse_kernel(std::string_view name) {
  if (name == "ball") return Kernel::ball;
  if (name == "sphere") return Kernel::sphere;
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "' (expected ball|sphere)");
}

void ContourSpec::validate() const {
  if (!(radius > 0.0 && radius < 1.0)) {
    throw std::invalid_argument("contour radius must lie in (0, 1), got " + std::to_string(radius));
  }
  if (nodes < 16 || nodes % 2 != 0) {
    throw std::invalid_argument("contour node count must be even and >= 16, got " +
                                std::to_string(nodes));
  }
}

double default_contour_radius(std::uint64_t d, std::uint64_t n) {
  if (d == 0) return 0.5;
  // n = 0 is treated as n = 1/2: a large radius would only add cancellation.
  const double alpha = (n == 0 ? 0.5 : static_cast<double>(n)) / static_cast<double>(d);
  return std::min(saddle_radius(alpha), kMaxDefaultRadius);
}

ContourSpec default_contour_spec(std::uint64_t d, std::uint64_t n, Kernel kernel, unsigned nodes) {
  return ContourSpec{default_contour_radius(d, n), nodes, kernel};
}

ContourValue contour_integral(std::uint64_t d, std::uint64_t n, const ContourSpec& spec) {
  spec.validate();
  const auto logs = node_logs(d, n, spec.radius, spec.nodes, spec.kernel);
  const double scale = max_real(logs);
  cd sum = 0;
  for (const auto& l : logs) sum += std::exp(l - scale);
  return ContourValue{scale, sum / static_cast<double>(spec.nodes)};
}

double contour_count(std::uint64_t d, std::uint64_t n, const ContourSpec& spec) {
  const double value = contour_integral(d, n, spec).value().real();
  if (!std::isfinite(value)) {
    throw NumericalError("contour_count overflowed double range for d=" + std::to_string(d) +
                         ", n=" + std::to_string(n));
  }
  return value;
}

double contour_ball_by_cumulative_sum(std::uint64_t d, std::uint64_t n, double radius,
                                      unsigned nodes) {
  double total = 0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    total += contour_count(d, k, ContourSpec{radius, nodes, Kernel::sphere});
  }
  return total;
}

double SaddleSplit::count() const { return std::exp(log_scale) * scaled_total().real(); }

std::complex<double> SaddleSplit::scaled_total() const {
  return (w1 + w2) / cd(0.0, kTwoPi);
}

SaddleSplit saddle_split(std::uint64_t d, std::uint64_t n, double delta, Kernel kernel,
                         unsigned nodes) {
  if (n == 0 || n > d) throw std::invalid_argument("saddle_split requires 1 <= n <= d");
  if (!(delta > 0.0 && delta <= std::numbers::pi)) {
    throw std::invalid_argument("saddle_split requires 0 < delta <= pi");
  }
  const SaddleParams p = saddle_params(d, n);
  ContourSpec{p.r, nodes, kernel}.validate();

  SaddleSplit split;
  split.delta = delta;
  split.radius = p.r;
  split.kernel = kernel;
  split.log_scale = static_cast<double>(d) * std::log(p.h_r) - static_cast<double>(n) * std::log(p.r);

  // dz = i z dtheta, so each node contributes i (2 pi / M) h(z)^d z^{-n} [/(1-z)].
  const cd step(0.0, kTwoPi / nodes);
  for (unsigned j = 0; j < nodes; ++j) {
    double theta = kTwoPi * j / nodes;
    if (theta > std::numbers::pi) theta -= kTwoPi;
    const cd l = log_term(d, n, p.r, theta, kernel) - split.log_scale;
    if (!std::isfinite(l.real()) || !std::isfinite(l.imag())) {
      throw NumericalError("saddle_split node " + std::to_string(j) + " is not finite");
    }
    const cd term = step * std::exp(l);
    (std::abs(theta) <= delta ? split.w1 : split.w2) += term;
  }
  return split;
}

double taylor_remainder_check(std::uint64_t d, std::uint64_t n, unsigned samples, double delta) {
  if (n == 0 || n > d) throw std::invalid_argument("taylor_remainder_check requires 1 <= n <= d");
  if (samples == 0) throw std::invalid_argument("taylor_remainder_check needs samples >= 1");
  const SaddleParams p = saddle_params(d, n);
  const double alpha = p.alpha;
  const auto f = [alpha](cd z) { return std::log(1.0 + z) - std::log(1.0 - z) - alpha * std::log(z); };
  const cd f_r = f(cd(p.r, 0.0));

  // Alternate signs, magnitudes delta*k/half for k = 1..half; theta = 0 is never hit.
  const unsigned half = (samples + 1) / 2;
  double worst = 0;
  for (unsigned i = 0; i < samples; ++i) {
    const double magnitude = delta * static_cast<double>(i / 2 + 1) / half;
    const double theta = (i % 2 == 0) ? magnitude : -magnitude;
    const cd z = std::polar(p.r, theta);
    const cd offset = z - p.r;
    const double remainder = std::abs(f(z) - f_r - 0.5 * p.beta * offset * offset);
    const double bound = 45.0 * std::pow(std::abs(offset), 3) / (alpha * alpha);
    worst = std::max(worst, remainder / bound);
  }
  return worst;
}

}  // namespace orthoplex

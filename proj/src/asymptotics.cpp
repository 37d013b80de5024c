#include "orthoplex/asymptotics.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace orthoplex {

namespace {

constexpr unsigned kMaxBOrder = 12;

EstimateReport make_report(EstimateKind kind, std::uint64_t d, std::uint64_t n, double log_value) {
  return EstimateReport{d, n, log_value, std::exp(log_value), kind};
}

// log((1+r)/(1-r)) without losing digits for small r.
double log_h(double r) { return std::log1p(r) - std::log1p(-r); }

void require_positive(std::uint64_t d, std::uint64_t n) {
  if (d == 0 || n == 0) throw std::invalid_argument("d and n must be positive");
}

std::complex<double> g_of(std::complex<double> z) {
  const std::complex<double> root = std::sqrt(1.0 + z * z);
  const std::complex<double> r = z / (1.0 + root);
  return (std::log(1.0 + r) - std::log(1.0 - r)) / z - std::log(2.0 / (1.0 + root));
}

// Trapezoidal Cauchy integral on |alpha| = 1/2: g is analytic for |alpha| < 1,
// so the aliasing error is (1/2)^M and rounding contributes ~eps * 4^k to b_k.
std::array<double, kMaxBOrder + 1> compute_b_coefficients() {
  constexpr int nodes = 512;
  constexpr double radius = 0.5;
  std::array<std::complex<double>, kMaxBOrder + 1> acc{};
  for (int j = 0; j < nodes; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / nodes;
    const std::complex<double> z = std::polar(radius, theta);
    const std::complex<double> g = g_of(z);
    const std::complex<double> z2_inv = 1.0 / (z * z);
    std::complex<double> weight = 1.0;
    for (unsigned k = 0; k <= kMaxBOrder; ++k) {
      acc[k] += g * weight;
      weight *= z2_inv;
    }
  }
  std::array<double, kMaxBOrder + 1> out{};
  for (unsigned k = 0; k <= kMaxBOrder; ++k) out[k] = acc[k].real() / nodes;
  return out;
}

const std::array<double, kMaxBOrder + 1>& cached_b_coefficients() {
  static const auto table = compute_b_coefficients();
  return table;
}

}  // namespace

std::string_view to_string(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::uniform: return "uniform";
    case EstimateKind::binomial_form: return "binomial";
    case EstimateKind::volume_form: return "volume";
    case EstimateKind::pemantle_wilson: return "pw";
  }
  return "unknown";
}

EstimateKind parse_estimate_kind(std::string_view name) {
  if (name == "uniform") return EstimateKind::uniform;
  if (name == "binomial") return EstimateKind::binomial_form;
  if (name == "volume") return EstimateKind::volume_form;
  if (name == "pw") return EstimateKind::pemantle_wilson;
  throw std::invalid_argument("unknown estimator '" + std::string(name) +
                              "' (expected uniform|binomial|volume|pw)");
}

double saddle_radius(double alpha) { return alpha / (1.0 + std::sqrt(1.0 + alpha * alpha)); }

SaddleParams saddle_params(std::uint64_t d, std::uint64_t n) {
  require_positive(d, n);
  SaddleParams p;
  p.d = d;
  p.n = n;
  p.alpha = static_cast<double>(n) / static_cast<double>(d);
  p.r = saddle_radius(p.alpha);
  p.h_r = (1.0 + p.r) / (1.0 - p.r);
  p.beta = p.alpha * p.alpha / p.r + p.alpha / (p.r * p.r);
  return p;
}

EstimateReport uniform_estimate(std::uint64_t d, std::uint64_t n) {
  require_positive(d, n);
  if (n > d) {
    throw std::invalid_argument("uniform_estimate requires n <= d; for n > d evaluate (d, n) = (" +
                                std::to_string(n) + ", " + std::to_string(d) +
                                ") using D(d,n) = D(n,d)");
  }
  const SaddleParams p = saddle_params(d, n);
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  return make_report(EstimateKind::uniform, d, n,
                     dd * log_h(p.r) - nn * std::log(p.r) - 0.5 * std::log(nn));
}

double uniform_estimate_explicit_log(std::uint64_t d, std::uint64_t n) {
  require_positive(d, n);
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  const double s = std::hypot(dd, nn);
  // d/(s-n) = (s+n)/d and n/(s-d) = (s+d)/n since (s-n)(s+n) = d^2, (s-d)(s+d) = n^2.
  return dd * std::log((s + nn) / dd) + nn * std::log((s + dd) / nn) - 0.5 * std::log(nn);
}

std::vector<double> b_coefficients(unsigned max_order) {
  if (max_order > kMaxBOrder) {
    throw std::invalid_argument("b_coefficients supports max_order <= " +
                                std::to_string(kMaxBOrder));
  }
  const auto& table = cached_b_coefficients();
  return {table.begin(), table.begin() + max_order + 1};
}

double b_series(double alpha, unsigned order) {
  if (!(std::abs(alpha) <= 0.5)) throw std::invalid_argument("b_series requires |alpha| <= 1/2");
  if (order == 0 || order > kMaxBOrder) {
    throw std::invalid_argument("b_series order must be in [1, " + std::to_string(kMaxBOrder) + "]");
  }
  const auto& b = cached_b_coefficients();
  const double a2 = alpha * alpha;
  double power = a2;
  double sum = 0;
  for (unsigned k = 1; k <= order; ++k) {
    sum += b[k] * power;
    power *= a2;
  }
  return sum;
}

EstimateReport binomial_form_estimate(std::uint64_t d, std::uint64_t n) {
  if (d == 0) throw std::invalid_argument("d must be positive");
  if (2 * n > d) throw std::invalid_argument("binomial_form_estimate requires n <= d/2");
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  const double alpha = nn / dd;
  const double log_choose = std::lgamma(dd + 1) - std::lgamma(nn + 1) - std::lgamma(dd - nn + 1);
  return make_report(EstimateKind::binomial_form, d, n,
                     nn * std::log(2.0) + log_choose + nn * alpha / 2 + nn * alpha * alpha / 4);
}

BigRational exact_volume(std::uint64_t d, std::uint64_t n) {
  BigCount numerator;
  mpz_ui_pow_ui(numerator.get_mpz_t(), static_cast<unsigned long>(2 * n), static_cast<unsigned long>(d));
  BigCount factorial;
  mpz_fac_ui(factorial.get_mpz_t(), static_cast<unsigned long>(d));
  BigRational volume(numerator, factorial);
  volume.canonicalize();
  return volume;
}

EstimateReport volume_form_estimate(std::uint64_t d, std::uint64_t n) {
  if (d == 0) throw std::invalid_argument("d must be positive");
  if (n < 2 * d) throw std::invalid_argument("volume_form_estimate requires n >= 2d");
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  const double alpha = nn / dd;
  const double log_volume = dd * std::log(2.0 * nn) - std::lgamma(dd + 1);
  return make_report(EstimateKind::volume_form, d, n, log_volume + dd / (12.0 * alpha * alpha));
}

EstimateReport pemantle_wilson_estimate(std::uint64_t d, std::uint64_t n) {
  require_positive(d, n);
  if (n > d) throw std::invalid_argument("pemantle_wilson_estimate requires n <= d");
  const SaddleParams p = saddle_params(d, n);
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  const double a = p.alpha;
  const double root = std::sqrt(1.0 + a * a);
  // 1 + a - sqrt(1+a^2) rewritten to avoid cancellation at small a.
  const double gap = a - a * a / (1.0 + root);
  const double log_shape = 0.5 * (std::log(a) - std::log(dd) - 2.0 * std::log(gap) - std::log(root));
  const double log_value = -0.5 * std::log(2.0 * std::numbers::pi) + dd * log_h(p.r) -
                           nn * std::log(p.r) + log_shape;
  return make_report(EstimateKind::pemantle_wilson, d, n, log_value);
}

EstimateReport estimate(EstimateKind kind, std::uint64_t d, std::uint64_t n) {
  switch (kind) {
    case EstimateKind::uniform: return uniform_estimate(d, n);
    case EstimateKind::binomial_form: return binomial_form_estimate(d, n);
    case EstimateKind::volume_form: return volume_form_estimate(d, n);
    case EstimateKind::pemantle_wilson: return pemantle_wilson_estimate(d, n);
  }
  throw std::invalid_argument("unknown estimator");
}

}  // namespace orthoplex

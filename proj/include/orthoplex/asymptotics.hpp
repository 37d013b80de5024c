#pragma once

// Closed-form estimates for D(d, n) = |B_n ∩ Z^d| and the saddle-point
// quantities behind them. Every estimator reports a natural log; the linear
// value overflows once d is in the hundreds.

#include <cstdint>
#include <string_view>
#include <vector>

#include "orthoplex/exact_counts.hpp"

namespace orthoplex {

// alpha = n/d, r = (sqrt(1+alpha^2)-1)/alpha, h(r) = (1+r)/(1-r),
// beta = f''(r) = alpha^2/r + alpha/r^2 for f(z) = log h(z) - alpha log z.
struct SaddleParams {
  std::uint64_t d = 0;
  std::uint64_t n = 0;
  double alpha = 0;
  double r = 0;
  double h_r = 0;
  double beta = 0;
};

enum class EstimateKind { uniform, binomial_form, volume_form, pemantle_wilson };

std::string_view to_string(EstimateKind kind);
EstimateKind parse_estimate_kind(std::string_view name);

struct EstimateReport {
  std::uint64_t d = 0;
  std::uint64_t n = 0;
  double log_estimate = 0;
  double estimate = 0;  // exp(log_estimate); +inf when it overflows
  EstimateKind which = EstimateKind::uniform;
};

// Saddle radius as a function of alpha > 0. Uses alpha/(1+sqrt(1+alpha^2)),
// algebraically the same closed form without the cancellation at small alpha.
double saddle_radius(double alpha);

SaddleParams saddle_params(std::uint64_t d, std::uint64_t n);

// ((1+r)/(1-r))^d r^{-n} / sqrt(n), for 1 <= n <= d. Larger n must be swapped
// by the caller (D(d,n) = D(n,d)); passing n > d throws std::invalid_argument.
EstimateReport uniform_estimate(std::uint64_t d, std::uint64_t n);

// log of (d/(sqrt(d^2+n^2)-n))^d (n/(sqrt(d^2+n^2)-d))^n / sqrt(n), the same
// estimator written directly in d and n.
double uniform_estimate_explicit_log(std::uint64_t d, std::uint64_t n);

// Taylor coefficients b_0..b_max_order of
//   g(alpha) = alpha^{-1}(log(1+r) - log(1-r)) - log(2r/alpha) = sum_k b_k alpha^{2k}.
// Computed once and cached; max_order <= 12.
std::vector<double> b_coefficients(unsigned max_order);

// sum_{k=1}^{order} b_k alpha^{2k} for |alpha| <= 1/2, order <= 12.
double b_series(double alpha, unsigned order);

// 2^n C(d,n) exp(n alpha/2 + n alpha^2/4); requires 2n <= d. The O(n alpha^3)
// term is dropped.
EstimateReport binomial_form_estimate(std::uint64_t d, std::uint64_t n);

// (2n)^d / d!, the Lebesgue measure of B_n^d.
BigRational exact_volume(std::uint64_t d, std::uint64_t n);

// Vol(B_n) exp(d/(12 alpha^2)); requires n >= 2d. The O(d/alpha^3) term is dropped.
EstimateReport volume_form_estimate(std::uint64_t d, std::uint64_t n);

// Asymptotic from the singularity analysis of the bivariate generating function, 1 <= n <= d.
EstimateReport pemantle_wilson_estimate(std::uint64_t d, std::uint64_t n);

EstimateReport estimate(EstimateKind kind, std::uint64_t d, std::uint64_t n);

}  // namespace orthoplex

#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: brute-force odometers over boxes, direct character sums, and an
// exact rational power series for the b-coefficients.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Point = std::vector<int>;

// Calls visit(x) for every x in {-m..m}^d, last coordinate fastest.
inline void for_each_in_box(unsigned d, int m, const std::function<void(const Point&)>& visit) {
  Point x(d, -m);
  while (true) {
    visit(x);
    int i = static_cast<int>(d) - 1;
    while (i >= 0 && x[i] == m) x[i--] = -m;
    if (i < 0) return;
    ++x[i];
  }
}

inline unsigned l1(const Point& x) {
  unsigned s = 0;
  for (int v : x) s += static_cast<unsigned>(std::abs(v));
  return s;
}

inline std::vector<Point> ball_points(unsigned d, unsigned n) {
  std::vector<Point> out;
  for_each_in_box(d, static_cast<int>(n), [&](const Point& x) {
    if (l1(x) <= n) out.push_back(x);
  });
  return out;
}

inline std::uint64_t count_ball(unsigned d, unsigned n, const std::function<bool(const Point&)>& keep) {
  std::uint64_t c = 0;
  for_each_in_box(d, static_cast<int>(n), [&](const Point& x) {
    if (l1(x) <= n && keep(x)) ++c;
  });
  return c;
}

// |A|^{-1} sum_{x in A} exp(-2 pi i x.xi) over the points of B_n with
// l1 norm in [lo, n].
inline std::complex<double> direct_multiplier(unsigned d, unsigned n, const std::vector<double>& xi,
                                              unsigned lo) {
  std::complex<double> sum = 0;
  std::uint64_t count = 0;
  for (const auto& x : ball_points(d, n)) {
    if (l1(x) < lo) continue;
    double phase = 0;
    for (unsigned i = 0; i < d; ++i) phase += x[i] * xi[i];
    sum += std::polar(1.0, -2.0 * std::numbers::pi * phase);
    ++count;
  }
  return sum / static_cast<double>(count);
}

// Truncated power series in w with rational coefficients.
using Series = std::vector<mpq_class>;

inline Series mul(const Series& a, const Series& b) {
  Series c(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// Exact b_0..b_order, where g(alpha) = sum_k b_k alpha^{2k}, from
// g = 2q sum_j (w q^2)^j / (2j+1) + log(1+u), w = alpha^2, s = sqrt(1+w),
// q = 1/(1+s), u = (s-1)/2.
inline std::vector<mpq_class> b_coefficients_exact(unsigned order) {
  const std::size_t N = order + 1;
  // s - 1 = sum_{k>=1} binom(1/2, k) w^k.
  Series s_minus_1(N, 0);
  mpq_class binom = 1;
  for (std::size_t k = 1; k < N; ++k) {
    binom *= mpq_class(1, 2) - mpq_class(static_cast<long>(k) - 1);
    binom /= static_cast<long>(k);
    s_minus_1[k] = binom;
  }
  Series u(N, 0);
  for (std::size_t k = 0; k < N; ++k) u[k] = s_minus_1[k] / 2;

  // q = 1/(2(1+u)) = (1/2) sum_m (-u)^m.
  Series q(N, 0), power(N, 0);
  power[0] = 1;
  for (std::size_t m = 0; m < N; ++m) {
    for (std::size_t k = 0; k < N; ++k) q[k] += (m % 2 == 0 ? 1 : -1) * power[k] / 2;
    power = mul(power, u);
  }
  // log(1+u) = sum_{m>=1} (-1)^{m+1} u^m / m.
  Series log1pu(N, 0);
  power.assign(N, 0);
  power[0] = 1;
  for (std::size_t m = 1; m < N + 1; ++m) {
    power = mul(power, u);
    for (std::size_t k = 0; k < N; ++k) log1pu[k] += (m % 2 == 1 ? 1 : -1) * power[k] / static_cast<long>(m);
  }
  // 2q sum_j (w q^2)^j / (2j+1).
  Series wq2 = mul(q, q);
  wq2.insert(wq2.begin(), 0);
  wq2.resize(N);
  Series inner(N, 0);
  power.assign(N, 0);
  power[0] = 1;
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t k = 0; k < N; ++k) inner[k] += power[k] / static_cast<long>(2 * j + 1);
    power = mul(power, wq2);
  }
  Series g = mul(q, inner);
  for (std::size_t k = 0; k < N; ++k) {
    g[k] = 2 * g[k] + log1pu[k];
    g[k].canonicalize();
  }
  return g;
}

}  // namespace oracle

// Invariant suites behind `orthoplex verify`.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cli.hpp"
#include "orthoplex/asymptotics.hpp"
#include "orthoplex/concentration.hpp"
#include "orthoplex/contour.hpp"
#include "orthoplex/exact_counts.hpp"
#include "orthoplex/lattice_ops.hpp"

namespace orthoplex::cli {

namespace {

struct Outcome {
  bool pass = true;
  std::int64_t cases = 0;
  std::string detail;

  // Records one case; keeps the first failure message.
  void expect(bool ok, const std::function<std::string()>& what) {
    ++cases;
    if (!ok && pass) {
      pass = false;
      detail = what();
    }
  }
};

struct Check {
  std::string suite;
  std::string name;
  std::function<Outcome()> run;
};

std::string str(const BigCount& v) { return v.get_str(); }

// Brute force over the box [-n, n]^d, independent of the library walkers.
struct Tally {
  BigCount ball, sphere;
  std::vector<BigCount> by_support;   // index s
  std::vector<BigCount> by_max;       // points of B_n with max |x_i| == m
  BigCount few_ones;                  // on S_n
  std::map<std::tuple<unsigned, unsigned, bool>, BigCount> deficit;  // (K, a, surface)
};

Tally tally(unsigned d, unsigned n) {
  Tally t;
  t.by_support.assign(d + 1, 0);
  t.by_max.assign(n + 1, 0);
  std::vector<int> x(d, -static_cast<int>(n));
  const int side = 2 * static_cast<int>(n) + 1;
  std::uint64_t total = 1;
  for (unsigned i = 0; i < d; ++i) total *= static_cast<std::uint64_t>(side);
  for (std::uint64_t c = 0; c < total; ++c) {
    unsigned norm = 0, support = 0, biggest = 0, ones = 0;
    for (int v : x) {
      const unsigned a = static_cast<unsigned>(std::abs(v));
      norm += a;
      support += a != 0;
      ones += a == 1;
      biggest = std::max(biggest, a);
    }
    if (norm <= n) {
      ++t.ball;
      ++t.by_support[support];
      ++t.by_max[biggest];
      if (norm == n) {
        ++t.sphere;
        if (2 * ones <= n) ++t.few_ones;
      }
      for (unsigned K = 1; K <= 2; ++K) {
        unsigned small = 0;
        for (int v : x) {
          if (static_cast<unsigned>(std::abs(v)) <= K) small += static_cast<unsigned>(std::abs(v));
        }
        for (unsigned a = 0; a <= std::min(3u, n); ++a) {
          if (small + a <= n) {
            ++t.deficit[{K, a, false}];
            if (norm == n) ++t.deficit[{K, a, true}];
          }
        }
      }
    }
    for (int i = static_cast<int>(d) - 1; i >= 0; --i) {
      if (x[i] < static_cast<int>(n)) {
        ++x[i];
        break;
      }
      x[i] = -static_cast<int>(n);
    }
  }
  return t;
}

BigCount get(const std::map<std::tuple<unsigned, unsigned, bool>, BigCount>& m, unsigned K, unsigned a,
             bool surface) {
  const auto it = m.find({K, a, surface});
  return it == m.end() ? BigCount(0) : it->second;
}

std::string at(std::uint64_t d, std::uint64_t n) {
  return "d=" + std::to_string(d) + " n=" + std::to_string(n);
}

std::vector<Check> count_checks(const VerifyOptions& o) {
  auto tallies = std::make_shared<std::map<std::pair<unsigned, unsigned>, Tally>>();
  for (unsigned d = 1; d <= o.max_d; ++d) {
    for (unsigned n = 0; n <= o.max_n; ++n) (*tallies)[{d, n}] = tally(d, n);
  }
  std::vector<Check> checks;
  const auto over = [tallies](std::function<void(unsigned, unsigned, const Tally&, Outcome&)> body) {
    return [tallies, body] {
      Outcome out;
      for (const auto& [key, t] : *tallies) body(key.first, key.second, t, out);
      return out;
    };
  };
  checks.push_back({"counts", "delannoy_vs_enumeration", over([](unsigned d, unsigned n, const Tally& t, Outcome& o) {
                      const auto v = delannoy(d, n);
                      o.expect(v == t.ball, [&] { return at(d, n) + ": " + str(v) + " != " + str(t.ball); });
                    })});
  checks.push_back({"counts", "sphere_vs_enumeration", over([](unsigned d, unsigned n, const Tally& t, Outcome& o) {
                      const auto v = sphere_count(d, n);
                      o.expect(v == t.sphere, [&] { return at(d, n) + ": " + str(v) + " != " + str(t.sphere); });
                    })});
  checks.push_back({"counts", "support_shell_vs_enumeration",
                    over([](unsigned d, unsigned n, const Tally& t, Outcome& o) {
                      for (unsigned s = 0; s <= d; ++s) {
                        const auto v = support_shell_count(d, s, n);
                        o.expect(v == t.by_support[s], [&] { return at(d, n) + " s=" + std::to_string(s); });
                      }
                    })});
  checks.push_back({"counts", "bounded_vs_enumeration", over([](unsigned d, unsigned n, const Tally& t, Outcome& o) {
                      BigCount cumulative = 0;
                      for (unsigned m = 0; m <= n; ++m) {
                        cumulative += t.by_max[m];
                        const auto v = bounded_ball_count(d, n, m);
                        o.expect(v == cumulative, [&] { return at(d, n) + " m=" + std::to_string(m); });
                      }
                    })});
  checks.push_back({"counts", "deficit_vs_enumeration", over([](unsigned d, unsigned n, const Tally& t, Outcome& o) {
                      for (unsigned K = 1; K <= 2; ++K) {
                        for (unsigned a = 0; a <= std::min(3u, n); ++a) {
                          for (bool surface : {false, true}) {
                            const auto v = deficit_count(d, n, K, a, surface).bad_count;
                            o.expect(v == get(t.deficit, K, a, surface), [&] {
                              return at(d, n) + " K=" + std::to_string(K) + " a=" + std::to_string(a) +
                                     (surface ? " surface" : " ball");
                            });
                          }
                        }
                      }
                    })});
  checks.push_back({"counts", "few_ones_vs_enumeration", over([](unsigned d, unsigned n, const Tally& t, Outcome& o) {
                      const auto v = few_ones_count(d, n).bad_count;
                      o.expect(v == t.few_ones, [&] { return at(d, n) + ": " + str(v) + " != " + str(t.few_ones); });
                    })});
  checks.push_back({"counts", "composition_class_vs_enumeration", [o] {
                      Outcome out;
                      for (unsigned d = 1; d <= o.max_d; ++d) {
                        std::map<std::pair<unsigned, unsigned>, BigCount> seen;
                        std::vector<int> x(d, -2);
                        std::uint64_t total = 1;
                        for (unsigned i = 0; i < d; ++i) total *= 5;
                        for (std::uint64_t c = 0; c < total; ++c) {
                          unsigned j1 = 0, j2 = 0;
                          for (int v : x) {
                            j1 += std::abs(v) == 1;
                            j2 += std::abs(v) == 2;
                          }
                          ++seen[{j1, j2}];
                          for (int i = static_cast<int>(d) - 1; i >= 0; --i) {
                            if (x[i] < 2) {
                              ++x[i];
                              break;
                            }
                            x[i] = -2;
                          }
                        }
                        for (unsigned j1 = 0; j1 <= d; ++j1) {
                          for (unsigned j2 = 0; j1 + j2 <= d; ++j2) {
                            const auto v = composition_class_count(d, CompositionProfile{{j1, j2}});
                            out.expect(v == seen[{j1, j2}], [&] {
                              return "d=" + std::to_string(d) + " j=(" + std::to_string(j1) + "," +
                                     std::to_string(j2) + ")";
                            });
                          }
                        }
                      }
                      return out;
                    }});
  const unsigned big = std::max(30u, std::max(o.max_d, o.max_n));
  checks.push_back({"counts", "recurrence_and_symmetry", [big] {
                      Outcome out;
                      const auto table = delannoy_table(big, big);
                      for (unsigned d = 0; d <= big; ++d) {
                        for (unsigned n = 0; n <= big; ++n) {
                          out.expect(table[d][n] == delannoy(d, n), [&] { return "table " + at(d, n); });
                          out.expect(table[d][n] == table[n][d], [&] { return "symmetry " + at(d, n); });
                        }
                      }
                      return out;
                    }});
  checks.push_back({"counts", "shell_sum_and_sphere_difference", [big] {
                      Outcome out;
                      for (unsigned d = 1; d <= big; ++d) {
                        for (unsigned n = 1; n <= big; ++n) {
                          BigCount sum = 0;
                          for (unsigned s = 0; s <= d; ++s) sum += support_shell_count(d, s, n);
                          out.expect(sum == delannoy(d, n), [&] { return "shell sum " + at(d, n); });
                          out.expect(sphere_count(d, n) == delannoy(d, n) - delannoy(d, n - 1),
                                     [&] { return "sphere difference " + at(d, n); });
                        }
                      }
                      return out;
                    }});
  checks.push_back({"counts", "ehrhart_evaluation_and_positivity", [] {
                      Outcome out;
                      for (unsigned d = 1; d <= 12; ++d) {
                        const auto poly = ehrhart_polynomial(d);
                        for (const auto& c : poly.coefficients()) {
                          out.expect(c > 0, [&] { return "nonpositive coefficient at d=" + std::to_string(d); });
                        }
                        for (unsigned n = 0; n <= 20; ++n) {
                          out.expect(poly.evaluate_count(n) == delannoy(d, n), [&] { return "evaluation " + at(d, n); });
                        }
                      }
                      return out;
                    }});
  return checks;
}

std::vector<Check> asymptotic_checks() {
  std::vector<Check> checks;
  checks.push_back({"asymptotics", "published_b_coefficients", [] {
                      Outcome out;
                      const auto b = b_coefficients(2);
                      const double expected[] = {1.0, 1.0 / 12.0, -3.0 / 160.0};
                      for (int k = 0; k < 3; ++k) {
                        out.expect(std::abs(b[k] - expected[k]) <= 1e-8, [&] {
                          return "b" + std::to_string(k) + " = " + format_real(b[k]);
                        });
                      }
                      return out;
                    }});
  checks.push_back({"asymptotics", "saddle_bounds", [] {
                      Outcome out;
                      for (unsigned d = 1; d <= 200; ++d) {
                        for (unsigned n = 1; n <= d; ++n) {
                          const auto p = saddle_params(d, n);
                          const double a = p.alpha;
                          out.expect(p.r >= a / (std::numbers::sqrt2 + 1.0) * (1 - 1e-15) && p.r <= a / 2,
                                     [&] { return "r out of range at " + at(d, n); });
                          out.expect(p.beta >= 4.0 / a && p.beta <= 9.0 / a,
                                     [&] { return "beta out of range at " + at(d, n); });
                        }
                      }
                      return out;
                    }});
  checks.push_back({"asymptotics", "explicit_form_matches", [] {
                      Outcome out;
                      for (unsigned d = 1; d <= 200; ++d) {
                        for (unsigned n = 1; n <= d; ++n) {
                          const double u = uniform_estimate(d, n).log_estimate;
                          const double e = uniform_estimate_explicit_log(d, n);
                          out.expect(std::abs(u - e) <= 1e-10 * std::max(1.0, std::abs(u)),
                                     [&] { return at(d, n); });
                        }
                      }
                      return out;
                    }});
  checks.push_back({"asymptotics", "uniform_ratio_band", [] {
                      Outcome out;
                      const auto table = delannoy_table(120, 120);
                      for (unsigned d = 1; d <= 120; ++d) {
                        for (unsigned n = 1; n <= d; ++n) {
                          const double ratio =
                              std::exp(log_count(table[d][n]) - uniform_estimate(d, n).log_estimate);
                          out.expect(ratio >= 0.3 && ratio <= 0.7, [&] {
                            return at(d, n) + " ratio " + format_real(ratio);
                          });
                        }
                      }
                      return out;
                    }});
  checks.push_back({"asymptotics", "volume_lower_bound", [] {
                      Outcome out;
                      for (unsigned d = 1; d <= 20; ++d) {
                        for (unsigned n = 1; n <= 50; ++n) {
                          out.expect(BigRational(delannoy(d, n)) >= exact_volume(d, n),
                                     [&] { return at(d, n); });
                        }
                      }
                      return out;
                    }});
  return checks;
}

std::vector<Check> contour_checks() {
  std::vector<Check> checks;
  checks.push_back({"contour", "ball_and_sphere_vs_exact", [] {
                      Outcome out;
                      for (unsigned d = 1; d <= 30; ++d) {
                        for (unsigned n = 0; n <= 30; ++n) {
                          for (Kernel k : {Kernel::ball, Kernel::sphere}) {
                            const double exact = (k == Kernel::ball ? delannoy(d, n) : sphere_count(d, n)).get_d();
                            const double v = contour_count(d, n, default_contour_spec(d, n, k));
                            out.expect(std::abs(v - exact) <= 1e-8 * exact, [&] {
                              return at(d, n) + " " + std::string(to_string(k)) + " " + format_real(v);
                            });
                          }
                        }
                      }
                      return out;
                    }});
  checks.push_back({"contour", "node_doubling_stable", [] {
                      Outcome out;
                      for (unsigned d = 1; d <= 30; d += 3) {
                        for (unsigned n = 0; n <= 30; n += 3) {
                          const double a = contour_count(d, n, default_contour_spec(d, n, Kernel::ball, 512));
                          const double b = contour_count(d, n, default_contour_spec(d, n, Kernel::ball, 1024));
                          out.expect(std::abs(a - b) <= 1e-10 * std::abs(b), [&] { return at(d, n); });
                        }
                      }
                      return out;
                    }});
  checks.push_back({"contour", "saddle_split_reassembles", [] {
                      Outcome out;
                      for (unsigned d = 2; d <= 40; d += 2) {
                        for (unsigned n = 1; n <= d; n += 3) {
                          const auto split = saddle_split(d, n, 0.05);
                          const double exact = delannoy(d, n).get_d();
                          out.expect(std::abs(split.count() - exact) <= 1e-8 * exact, [&] { return at(d, n); });
                        }
                      }
                      return out;
                    }});
  checks.push_back({"contour", "taylor_remainder_bound", [] {
                      Outcome out;
                      for (unsigned d = 10; d <= 400; d *= 2) {
                        for (unsigned n = 1; n <= d; n += std::max(1u, d / 7)) {
                          const double worst = taylor_remainder_check(d, n, 64);
                          out.expect(worst <= 1.0, [&] { return at(d, n) + " " + format_real(worst); });
                        }
                      }
                      return out;
                    }});
  return checks;
}

GridFunction random_function(unsigned d, unsigned half_width, unsigned support, std::mt19937_64& rng) {
  GridFunction f(d, half_width);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  const int s = static_cast<int>(support);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = f.point_of(i);
    if (std::all_of(x.begin(), x.end(), [s](int c) { return std::abs(c) <= s; })) f[i] = value(rng);
  }
  return f;
}

std::vector<Check> lattice_checks(const VerifyOptions& o) {
  std::vector<Check> checks;
  const unsigned seed = 7;
  checks.push_back({"lattice", "single_average_contraction", [] {
                      Outcome out;
                      std::mt19937_64 rng(seed);
                      for (unsigned d = 1; d <= 3; ++d) {
                        for (unsigned R = 0; R <= 4; ++R) {
                          const auto f = random_function(d, 6, 2, rng);
                          for (auto kind : {AverageKind::ball, AverageKind::sphere}) {
                            const auto g = kind == AverageKind::ball ? ball_average(f, R) : sphere_average(f, R);
                            for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
                              out.expect(g.norm(p) <= f.norm(p) * (1 + 1e-10), [&] {
                                return "d=" + std::to_string(d) + " R=" + std::to_string(R) + " p=" + format_real(p);
                              });
                            }
                          }
                        }
                      }
                      return out;
                    }});
  checks.push_back({"lattice", "sphere_ball_partition", [] {
                      Outcome out;
                      std::mt19937_64 rng(seed + 1);
                      for (unsigned d = 1; d <= 3; ++d) {
                        const auto f = random_function(d, 5, 2, rng);
                        for (unsigned R = 0; R <= 4; ++R) {
                          const auto ball = ball_average(f, R);
                          std::vector<double> sum(f.size(), 0.0);
                          for (unsigned k = 0; k <= R; ++k) {
                            const auto s = sphere_average(f, k);
                            const double w = sphere_count(d, k).get_d();
                            for (std::size_t i = 0; i < f.size(); ++i) sum[i] += w * s[i];
                          }
                          const double w = delannoy(d, R).get_d();
                          double worst = 0;
                          for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(w * ball[i] - sum[i]));
                          out.expect(worst <= 1e-10 * w, [&] { return "d=" + std::to_string(d) + " R=" + std::to_string(R); });
                        }
                      }
                      return out;
                    }});
  checks.push_back({"lattice", "multiplier_dp_vs_direct", [] {
                      Outcome out;
                      std::mt19937_64 rng(seed + 2);
                      std::uniform_real_distribution<double> uniform(-0.5, 0.5);
                      for (int trial = 0; trial < 30; ++trial) {
                        const unsigned d = 1 + trial % 4;
                        const unsigned n = trial % 7;
                        std::vector<double> c(d);
                        for (auto& v : c) v = uniform(rng);
                        const FrequencyPoint xi(c);
                        std::complex<double> ball = 0, sphere = 0;
                        for_each_ball_point(d, n, [&](std::span<const int> x) {
                          double phase = 0;
                          unsigned norm = 0;
                          for (unsigned i = 0; i < d; ++i) {
                            phase += x[i] * xi.coordinates()[i];
                            norm += static_cast<unsigned>(std::abs(x[i]));
                          }
                          ball += character(phase);
                          if (norm == n) sphere += character(phase);
                        });
                        ball /= delannoy(d, n).get_d();
                        sphere /= sphere_count(d, n).get_d();
                        out.expect(std::abs(multiplier_m(d, n, xi) - ball) <= 1e-12 &&
                                       std::abs(multiplier_s(d, n, xi) - sphere) <= 1e-12,
                                   [&] { return "trial " + std::to_string(trial); });
                      }
                      return out;
                    }});
  checks.push_back({"lattice", "class_multipliers_recombine", [] {
                      // sum_j |D_j| beta_j over profiles with sum_k k j_k <= n equals |B_n| m_n.
                      Outcome out;
                      std::mt19937_64 rng(seed + 3);
                      std::uniform_real_distribution<double> uniform(-0.5, 0.5);
                      for (unsigned d = 1; d <= 3; ++d) {
                        for (unsigned n = 0; n <= 4; ++n) {
                          std::vector<double> c(d);
                          for (auto& v : c) v = uniform(rng);
                          const FrequencyPoint xi(c);
                          std::complex<double> total = 0;
                          const std::function<void(std::vector<unsigned>&, unsigned, unsigned)> walk =
                              [&](std::vector<unsigned>& j, unsigned used, unsigned budget) {
                                const unsigned k = static_cast<unsigned>(j.size()) + 1;
                                if (k > n) {
                                  CompositionProfile p{j};
                                  if (p.total() <= d) {
                                    total += composition_class_count(d, p).get_d() * beta_multiplier(d, p, xi);
                                  }
                                  return;
                                }
                                for (unsigned m = 0; used + m <= d && m * k <= budget; ++m) {
                                  j.push_back(m);
                                  walk(j, used + m, budget - m * k);
                                  j.pop_back();
                                }
                              };
                          std::vector<unsigned> j;
                          if (n == 0) {
                            total = 1.0;
                          } else {
                            walk(j, 0, n);
                          }
                          const auto expected = delannoy(d, n).get_d() * multiplier_m(d, n, xi);
                          out.expect(std::abs(total - expected) <= 1e-9 * std::max(1.0, std::abs(expected)),
                                     [&] { return at(d, n); });
                        }
                      }
                      return out;
                    }});
  checks.push_back({"lattice", "torus_partition_antipode", [o] {
                      Outcome out;
                      std::mt19937_64 rng(seed + 4);
                      std::uniform_real_distribution<double> uniform(-0.5, 0.5);
                      for (int trial = 0; trial < 200; ++trial) {
                        std::vector<double> c(1 + trial % std::max(1u, o.max_d));
                        for (auto& v : c) v = uniform(rng);
                        const FrequencyPoint xi(c);
                        const double a = xi.torus_norm(), b = xi.antipode().torus_norm();
                        if (a == b) continue;
                        out.expect(torus_partition(xi) != torus_partition(xi.antipode()),
                                   [&] { return "trial " + std::to_string(trial); });
                      }
                      return out;
                    }});
  return checks;
}

std::vector<Check> concentration_checks() {
  std::vector<Check> checks;
  checks.push_back({"concentration", "deficit_monotone", [] {
                      Outcome out;
                      for (unsigned d = 1; d <= 8; ++d) {
                        for (unsigned K = 1; K <= 3; ++K) {
                          for (unsigned n = 0; n <= 10; ++n) {
                            for (unsigned a = 0; a <= n; ++a) {
                              const auto here = deficit_count(d, n, K, a, false).bad_count;
                              if (a > 0) {
                                out.expect(here <= deficit_count(d, n, K, a - 1, false).bad_count,
                                           [&] { return "in a at " + at(d, n); });
                              }
                              if (a < n) {
                                out.expect(here <= deficit_count(d, n + 1, K, a, false).bad_count,
                                           [&] { return "in n at " + at(d, n); });
                              }
                            }
                          }
                        }
                      }
                      return out;
                    }});
  checks.push_back({"concentration", "deficit_trivial_cases", [] {
                      Outcome out;
                      for (unsigned d = 1; d <= 6; ++d) {
                        for (unsigned n = 0; n <= 8; ++n) {
                          const auto all = deficit_count(d, n, 1, 0, false);
                          out.expect(all.bad_count == all.total, [&] { return "a=0 " + at(d, n); });
                          for (unsigned a = 0; a <= n; ++a) {
                            out.expect(deficit_count(d, n, n + 1, a, false).bad_count == delannoy(d, n - a),
                                       [&] { return "K>=n " + at(d, n); });
                          }
                        }
                      }
                      return out;
                    }});
  checks.push_back({"concentration", "shell_ratio_identity", [] {
                      Outcome out;
                      for (unsigned l = 1; l <= 5; ++l) {
                        const auto q = shell_ratio(25, 200, 2.0, l);  // throws on mismatch
                        out.expect(q > 0, [&] { return "l=" + std::to_string(l); });
                      }
                      return out;
                    }});
  checks.push_back({"concentration", "second_moment_closed_forms", [] {
                      Outcome out;
                      out.expect(second_moment(2, 1).moment == BigRational(2, 5), [] { return "(2,1)"; });
                      for (unsigned n = 0; n <= 50; ++n) {
                        BigRational expected(BigCount(n) * (n + 1), 3);
                        expected.canonicalize();
                        out.expect(second_moment(1, n).moment == expected, [&] { return "d=1 n=" + std::to_string(n); });
                      }
                      return out;
                    }});
  checks.push_back({"concentration", "clt_tail_symmetric_case", [] {
                      Outcome out;
                      const auto t = clt_tail_probability(50, 0.0, 20000, 11, 1);
                      out.expect(t.estimate > 0.3 && t.estimate < 0.5, [&] { return format_real(t.estimate); });
                      return out;
                    }});
  return checks;
}

}  // namespace

std::vector<Row> run_verify(const VerifyOptions& options, bool& all_passed) {
  const std::string& s = options.suite;
  const bool all = s == "all";
  if (!all && s != "counts" && s != "asymptotics" && s != "contour" && s != "lattice" && s != "concentration") {
    throw std::invalid_argument("unknown suite '" + s + "' (expected counts|asymptotics|contour|lattice|concentration|all)");
  }
  if (options.max_d == 0 || options.max_d > 6 || options.max_n > 9) {
    throw std::invalid_argument("verify brute force needs 1 <= --max-d <= 6 and --max-n <= 9");
  }
  std::vector<Check> checks;
  const auto append = [&](std::vector<Check> more) {
    for (auto& c : more) checks.push_back(std::move(c));
  };
  if (all || s == "counts") append(count_checks(options));
  if (all || s == "asymptotics") append(asymptotic_checks());
  if (all || s == "contour") append(contour_checks());
  if (all || s == "lattice") append(lattice_checks(options));
  if (all || s == "concentration") append(concentration_checks());

  const auto rows = parallel_rows(checks.size(), options.threads, [&](std::size_t i) {
    Outcome outcome;
    try {
      outcome = checks[i].run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    Row row;
    row.text("subcommand", "verify").text("suite", checks[i].suite).text("check", checks[i].name);
    row.text("status", outcome.pass ? "pass" : "fail").integer("cases", outcome.cases);
    row.text("detail", outcome.detail);
    return std::vector<Row>{row};
  });
  all_passed = std::all_of(rows.begin(), rows.end(),
                           [](const Row& r) { return r.find("status")->text == "pass"; });
  return rows;
}

}  // namespace orthoplex::cli

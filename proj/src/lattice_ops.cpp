#include "orthoplex/lattice_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace orthoplex {

namespace {

using cd = std::complex<double>;

std::size_t checked_cells(unsigned dimension, std::size_t side, const Guards& guards) {
  std::size_t cells = 1;
  for (unsigned i = 0; i < dimension; ++i) {
    if (cells > guards.box_cells / side) {
      throw GuardViolation("box_cells", "box of side " + std::to_string(side) + " in dimension " +
                                            std::to_string(dimension) + " exceeds " +
                                            std::to_string(guards.box_cells) + " cells");
    }
    cells *= side;
  }
  return cells;
}

// Flattened list of offsets (count * d ints) for the ball or sphere of radius R.
std::vector<int> stencil(unsigned d, unsigned radius, AverageKind kind, const Guards& guards) {
  std::vector<int> offsets;
  const auto push = [&](std::span<const int> x) { offsets.insert(offsets.end(), x.begin(), x.end()); };
  if (kind == AverageKind::ball) {
    for_each_ball_point(d, radius, push, guards);
  } else {
    for_each_sphere_point(d, radius, push, guards);
  }
  return offsets;
}

// out(x) = sum_{o in offsets} f(x - o), with f zero outside its box.
// Implemented as a scatter from the nonzero values of f.
std::vector<double> scatter_sum(const GridFunction& f, const std::vector<int>& offsets) {
  const unsigned d = f.dimension();
  const int half = static_cast<int>(f.half_width());
  const std::size_t side = f.side();
  std::vector<std::size_t> stride(d, 1);
  for (int i = static_cast<int>(d) - 2; i >= 0; --i) stride[i] = stride[i + 1] * side;

  std::vector<double> out(f.size(), 0.0);
  const std::size_t count = d == 0 ? 0 : offsets.size() / d;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const double value = f[idx];
    if (value == 0.0) continue;
    const std::vector<int> y = f.point_of(idx);
    for (std::size_t k = 0; k < count; ++k) {
      const int* o = &offsets[k * d];
      std::size_t target = 0;
      bool inside = true;
      for (unsigned i = 0; i < d; ++i) {
        const int x = y[i] + o[i];
        if (x < -half || x > half) {
          inside = false;
          break;
        }
        target += static_cast<std::size_t>(x + half) * stride[i];
      }
      if (inside) out[target] += value;
    }
  }
  return out;
}

GridFunction average(const GridFunction& f, unsigned radius, AverageKind kind, const Guards& guards) {
  const unsigned d = f.dimension();
  const double count = (kind == AverageKind::ball ? delannoy(d, radius) : sphere_count(d, radius)).get_d();
  GridFunction out(d, f.half_width(), guards);
  auto sums = scatter_sum(f, stencil(d, radius, kind, guards));
  for (std::size_t i = 0; i < sums.size(); ++i) out[i] = sums[i] / count;
  return out;
}

double reduce_to_torus(double x) { return x - std::floor(x + 0.5); }

struct BudgetDp {
  std::vector<cd> slices;  // slices[b] * 2^exponent = sum over x with |x|_1 = b of e(x . xi)
  long exponent = 0;
};

// value * 2^exponent / count. Rescaling by powers of two is exact, so xi = 0
// gives exactly 1 whenever the count is representable.
cd normalize(cd value, long exponent, const BigCount& count) {
  long count_exponent = 0;
  const double mantissa = mpz_get_d_2exp(&count_exponent, count.get_mpz_t());
  const int shift = static_cast<int>(exponent - count_exponent);
  return {std::ldexp(value.real(), shift) / mantissa, std::ldexp(value.imag(), shift) / mantissa};
}

BudgetDp budget_dp(unsigned d, unsigned n, const FrequencyPoint& xi, const Guards& guards) {
  if (xi.dimension() != d) {
    throw std::invalid_argument("frequency point has dimension " + std::to_string(xi.dimension()) +
                                ", expected " + std::to_string(d));
  }
  const std::uint64_t per_coordinate = (static_cast<std::uint64_t>(n) + 1) * (n + 2) / 2;
  if (d > 0 && per_coordinate > guards.dp_budget / d) {
    throw GuardViolation("dp_budget", "multiplier DP needs d*(n+1)(n+2)/2 = " +
                                          std::to_string(d) + "*" + std::to_string(per_coordinate) +
                                          " updates");
  }
  BudgetDp dp;
  dp.slices.assign(n + 1, cd(0.0, 0.0));
  dp.slices[0] = 1.0;
  std::vector<cd> next(n + 1), profile(n + 1);
  for (unsigned i = 0; i < d; ++i) {
    const double frequency = xi.coordinates()[i];
    profile[0] = 1.0;
    for (unsigned k = 1; k <= n; ++k) {
      profile[k] = character(k * frequency) + character(-static_cast<double>(k) * frequency);
    }
    for (unsigned b = 0; b <= n; ++b) {
      cd acc = 0;
      for (unsigned k = 0; k <= b; ++k) acc += dp.slices[b - k] * profile[k];
      next[b] = acc;
    }
    std::swap(dp.slices, next);
    double peak = 0;
    for (const auto& v : dp.slices) peak = std::max(peak, std::abs(v));
    if (peak > 0) {
      int shift = 0;
      std::frexp(peak, &shift);
      for (auto& v : dp.slices) v = {std::ldexp(v.real(), -shift), std::ldexp(v.imag(), -shift)};
      dp.exponent += shift;
    }
  }
  return dp;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

}  // namespace

GridFunction::GridFunction(unsigned dimension, unsigned half_width, const Guards& guards)
    : dimension_(dimension), half_width_(half_width) {
  if (dimension == 0 || dimension > kMaxDimension) {
    throw std::invalid_argument("GridFunction dimension must be in [1, 4], got " +
                                std::to_string(dimension));
  }
  values_.assign(checked_cells(dimension, side(), guards), 0.0);
}

GridFunction GridFunction::delta(unsigned dimension, unsigned half_width, const Guards& guards) {
  GridFunction f(dimension, half_width, guards);
  const std::vector<int> origin(dimension, 0);
  f.at(origin) = 1.0;
  return f;
}

bool GridFunction::contains(std::span<const int> point) const {
  if (point.size() != dimension_) return false;
  const int half = static_cast<int>(half_width_);
  return std::all_of(point.begin(), point.end(), [half](int x) { return x >= -half && x <= half; });
}

std::size_t GridFunction::index_of(std::span<const int> point) const {
  if (!contains(point)) throw std::out_of_range("point outside the GridFunction box");
  std::size_t index = 0;
  for (int x : point) index = index * side() + static_cast<std::size_t>(x + static_cast<int>(half_width_));
  return index;
}

std::vector<int> GridFunction::point_of(std::size_t index) const {
  if (index >= values_.size()) throw std::out_of_range("GridFunction index out of range");
  std::vector<int> point(dimension_);
  for (int i = static_cast<int>(dimension_) - 1; i >= 0; --i) {
    point[i] = static_cast<int>(index % side()) - static_cast<int>(half_width_);
    index /= side();
  }
  return point;
}

double GridFunction::norm(double p) const {
  if (std::isinf(p)) {
    double best = 0;
    for (double v : values_) best = std::max(best, std::abs(v));
    return best;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("norm exponent must be >= 1");
  double sum = 0;
  for (double v : values_) sum += std::pow(std::abs(v), p);
  return std::pow(sum, 1.0 / p);
}

std::string_view to_string(AverageKind kind) { return kind == AverageKind::ball ? "ball" : "sphere"; }

AverageKind parse_average_kind(std::string_view name) {
  if (name == "ball") return AverageKind::ball;
  if (name == "sphere") return AverageKind::sphere;
  throw std::invalid_argument("unknown average kind '" + std::string(name) + "'");
}

GridFunction ball_average(const GridFunction& f, unsigned radius, const Guards& guards) {
  return average(f, radius, AverageKind::ball, guards);
}

GridFunction sphere_average(const GridFunction& f, unsigned radius, const Guards& guards) {
  return average(f, radius, AverageKind::sphere, guards);
}

RadiusSet RadiusSet::full_range() { return RadiusSet(Kind::full_range, {}); }
RadiusSet RadiusSet::dyadic() { return RadiusSet(Kind::dyadic, {}); }
RadiusSet RadiusSet::explicit_list(std::vector<unsigned> radii) {
  return RadiusSet(Kind::explicit_list, std::move(radii));
}
RadiusSet RadiusSet::interval(unsigned lo, unsigned hi) {
  if (lo > hi) throw std::invalid_argument("radius interval needs lo <= hi");
  return RadiusSet(Kind::interval, {lo, hi});
}

RadiusSet RadiusSet::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string rest = colon == std::string_view::npos ? "" : std::string(text.substr(colon + 1));
  const auto parse_uint = [&](const std::string& s) -> unsigned {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || s[0] == '-') {
      throw std::invalid_argument("unparseable radius '" + s + "' in '" + std::string(text) + "'");
    }
    return static_cast<unsigned>(v);
  };
  std::vector<unsigned> values;
  if (!rest.empty()) {
    std::stringstream ss(rest);
    std::string item;
    const char sep = head == "interval" ? ':' : ',';
    while (std::getline(ss, item, sep)) values.push_back(parse_uint(item));
  }
  if (head == "full") {
    if (values.empty()) return full_range();
    if (values.size() == 1) return interval(0, values[0]);
  } else if (head == "dyadic") {
    if (values.empty()) return dyadic();
    if (values.size() == 1) {
      std::vector<unsigned> radii;
      for (unsigned long r = 1; r <= values[0]; r *= 2) radii.push_back(static_cast<unsigned>(r));
      return explicit_list(std::move(radii));
    }
  } else if (head == "list") {
    if (!values.empty()) return explicit_list(std::move(values));
  } else if (head == "interval") {
    if (values.size() == 2) return interval(values[0], values[1]);
  }
  throw std::invalid_argument("unparseable radius set '" + std::string(text) +
                              "' (expected full[:max] | dyadic[:max] | list:a,b,... | interval:lo:hi)");
}

std::vector<unsigned> RadiusSet::realize(unsigned max_radius) const {
  std::vector<unsigned> radii;
  switch (kind_) {
    case Kind::full_range:
      for (unsigned r = 0; r <= max_radius; ++r) radii.push_back(r);
      break;
    case Kind::dyadic:
      for (unsigned long r = 1; r <= max_radius; r *= 2) radii.push_back(static_cast<unsigned>(r));
      break;
    case Kind::explicit_list:
      for (unsigned r : params_) {
        if (r <= max_radius) radii.push_back(r);
      }
      break;
    case Kind::interval:
      for (unsigned r = params_[0]; r <= std::min(params_[1], max_radius); ++r) radii.push_back(r);
      break;
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

GridFunction maximal_function(const GridFunction& f, const RadiusSet& radii, AverageKind kind,
                              const Guards& guards) {
  const unsigned d = f.dimension();
  const auto realized = radii.realize(d * 2 * f.half_width());
  if (realized.empty()) throw std::invalid_argument("radius set is empty after realization");

  GridFunction result(d, f.half_width(), guards);
  std::vector<double> ball_sum(f.size(), 0.0);
  std::size_t next = 0;
  for (unsigned r = 0; r <= realized.back(); ++r) {
    const auto shell = scatter_sum(f, stencil(d, r, AverageKind::sphere, guards));
    if (kind == AverageKind::ball) {
      for (std::size_t i = 0; i < shell.size(); ++i) ball_sum[i] += shell[i];
    }
    if (realized[next] != r) continue;
    ++next;
    const auto& sums = kind == AverageKind::ball ? ball_sum : shell;
    const double count = (kind == AverageKind::ball ? delannoy(d, r) : sphere_count(d, r)).get_d();
    for (std::size_t i = 0; i < sums.size(); ++i) {
      result[i] = std::max(result[i], std::abs(sums[i] / count));
    }
  }
  return result;
}

NormProbeReport operator_norm_probe(unsigned d, const RadiusSet& radii, double p, unsigned trials,
                                    std::uint64_t seed, unsigned max_radius,
                                    unsigned support_half_width, const Guards& guards) {
  if (!(p >= 1.0)) throw std::invalid_argument("operator_norm_probe needs p >= 1");
  if (trials == 0) throw std::invalid_argument("operator_norm_probe needs at least one trial");
  const auto realized = radii.realize(max_radius);
  if (realized.empty()) throw std::invalid_argument("radius set is empty after realization");

  NormProbeReport report;
  report.seed = seed;
  report.support_half_width = support_half_width;
  report.half_width = support_half_width + realized.back();
  report.radii = realized;
  const RadiusSet exact = RadiusSet::explicit_list(realized);

  // Validates the box against the guard before any work.
  GridFunction f(d, report.half_width, guards);
  const int s = static_cast<int>(support_half_width);
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = f.point_of(i);
    if (std::all_of(x.begin(), x.end(), [s](int c) { return c >= -s && c <= s; })) support.push_back(i);
  }

  report.ratio = -1;
  for (unsigned t = 0; t < trials; ++t) {
    std::fill(f.values().begin(), f.values().end(), 0.0);
    std::string name;
    if (t == 0) {
      f.at(std::vector<int>(d, 0)) = 1.0;
      name = "delta";
    } else if (t == 1) {
      for (std::size_t i : support) f[i] = 1.0;
      name = "box";
    } else {
      auto rng = trial_rng(seed, t);
      if (t % 2 == 1) {
        std::bernoulli_distribution coin(0.5);
        for (std::size_t i : support) f[i] = coin(rng) ? 1.0 : -1.0;
        name = "sign:" + std::to_string(t);
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, support.size() - 1);
        std::uniform_real_distribution<double> value(-1.0, 1.0);
        const std::size_t k = std::max<std::size_t>(1, support.size() / 8);
        for (std::size_t j = 0; j < k; ++j) f[support[pick(rng)]] = value(rng);
        name = "sparse:" + std::to_string(t);
      }
    }
    const double denominator = f.norm(p);
    if (denominator == 0.0) continue;
    const double ratio = maximal_function(f, exact, AverageKind::ball, guards).norm(p) / denominator;
    if (ratio > report.ratio) {
      report.ratio = ratio;
      report.best_trial = name;
    }
  }
  return report;
}

FrequencyPoint::FrequencyPoint(std::vector<double> coordinates) : coordinates_(std::move(coordinates)) {
  for (auto& x : coordinates_) {
    if (!std::isfinite(x)) throw std::invalid_argument("frequency coordinates must be finite");
    x = reduce_to_torus(x);
  }
}

double FrequencyPoint::torus_norm() const {
  double sum = 0;
  for (double x : coordinates_) {
    const double s = std::sin(std::numbers::pi * x);
    sum += s * s;
  }
  return std::sqrt(sum);
}

FrequencyPoint FrequencyPoint::antipode() const {
  std::vector<double> shifted = coordinates_;
  for (auto& x : shifted) x += 0.5;
  return FrequencyPoint(std::move(shifted));
}

std::complex<double> character(double y) {
  return std::polar(1.0, -2.0 * std::numbers::pi * reduce_to_torus(y));
}

std::complex<double> multiplier_m(unsigned d, unsigned n, const FrequencyPoint& xi, const Guards& guards) {
  const BudgetDp dp = budget_dp(d, n, xi, guards);
  cd total = 0;
  for (const auto& v : dp.slices) total += v;
  return normalize(total, dp.exponent, delannoy(d, n));
}

std::complex<double> multiplier_s(unsigned d, unsigned n, const FrequencyPoint& xi, const Guards& guards) {
  const BudgetDp dp = budget_dp(d, n, xi, guards);
  return normalize(dp.slices[n], dp.exponent, sphere_count(d, n));
}

MultiplierScan multiplier_bound_scan(unsigned d, unsigned n, unsigned samples, std::uint64_t seed,
                                     const Guards& guards) {
  if (n <= d) throw std::invalid_argument("multiplier_bound_scan requires n > d");
  if (samples == 0) throw std::invalid_argument("multiplier_bound_scan needs samples >= 1");
  MultiplierScan scan;
  scan.d = d;
  scan.n = n;
  scan.seed = seed;
  scan.alpha = static_cast<double>(n) / d;
  const double alpha = scan.alpha;
  const double floor_term = std::pow(alpha, -1.0 / 7.0);

  const auto visit = [&](const FrequencyPoint& xi) {
    const double scaled = alpha * xi.torus_norm();
    if (scaled == 0.0) return;
    const cd m = multiplier_m(d, n, xi, guards);
    if (scaled <= 1.0) {
      scan.local_constant = std::max(scan.local_constant, std::abs(m - 1.0) / (scaled * scaled));
      ++scan.local_points;
    }
    scan.global_constant = std::max(scan.global_constant, std::abs(m) / (1.0 / scaled + floor_term));
    ++scan.global_points;
  };

  // Uniform points on the torus.
  {
    auto rng = trial_rng(seed, 0);
    std::uniform_real_distribution<double> uniform(-0.5, 0.5);
    for (unsigned s = 0; s < samples; ++s) {
      std::vector<double> coords(d);
      for (auto& c : coords) c = uniform(rng);
      visit(FrequencyPoint(std::move(coords)));
    }
  }
  // Axis-aligned points t e_1, t evenly spaced in (0, 1/2].
  {
    const unsigned count = std::max(8u, samples / 4);
    for (unsigned k = 1; k <= count; ++k) {
      std::vector<double> coords(d, 0.0);
      coords[0] = 0.5 * k / count;
      visit(FrequencyPoint(std::move(coords)));
    }
  }
  // Random directions scaled so that alpha ||xi|| is log-spaced in [1e-3, 1].
  {
    auto rng = trial_rng(seed, 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const unsigned count = std::max(8u, samples / 2);
    for (unsigned k = 0; k < count; ++k) {
      const double target = std::pow(10.0, -3.0 + 3.0 * (k + 0.5) / count);
      std::vector<double> coords(d);
      double length = 0;
      for (auto& c : coords) {
        c = gauss(rng);
        length += c * c;
      }
      length = std::sqrt(length);
      // ||xi|| ~ pi |xi| for small xi.
      const double euclid = target / (alpha * std::numbers::pi);
      for (auto& c : coords) c *= euclid / length;
      visit(FrequencyPoint(std::move(coords)));
    }
  }
  return scan;
}

void for_each_composition_class_point(unsigned d, const CompositionProfile& profile,
                                      const PointVisitor& visit, const Guards& guards) {
  if (profile.total() > d) {
    throw std::invalid_argument("composition profile uses more than d coordinates");
  }
  const unsigned K = profile.max_magnitude();
  const std::uint64_t side = 2 * static_cast<std::uint64_t>(K) + 1;
  std::uint64_t cells = 1;
  for (unsigned i = 0; i < d; ++i) {
    if (cells > guards.enumeration_limit / side) {
      throw GuardViolation("enumeration", "{-" + std::to_string(K) + ".." + std::to_string(K) +
                                              "}^" + std::to_string(d) + " is too large to enumerate");
    }
    cells *= side;
  }
  std::vector<int> x(d, -static_cast<int>(K));
  std::vector<unsigned> seen(K + 1);
  for (std::uint64_t c = 0; c < cells; ++c) {
    std::fill(seen.begin(), seen.end(), 0u);
    for (int v : x) ++seen[static_cast<unsigned>(v < 0 ? -v : v)];
    bool match = true;
    for (unsigned k = 1; k <= K && match; ++k) match = seen[k] == profile.multiplicities[k - 1];
    if (match) visit(x);
    // Odometer increment, last coordinate fastest.
    for (int i = static_cast<int>(d) - 1; i >= 0; --i) {
      if (x[i] < static_cast<int>(K)) {
        ++x[i];
        break;
      }
      x[i] = -static_cast<int>(K);
    }
  }
}

std::complex<double> beta_multiplier(unsigned d, const CompositionProfile& profile,
                                     const FrequencyPoint& xi, const Guards& guards) {
  if (xi.dimension() != d) throw std::invalid_argument("frequency point dimension mismatch");
  cd sum = 0;
  std::uint64_t count = 0;
  for_each_composition_class_point(
      d, profile,
      [&](std::span<const int> x) {
        double phase = 0;
        for (unsigned i = 0; i < d; ++i) phase += x[i] * xi.coordinates()[i];
        sum += character(phase);
        ++count;
      },
      guards);
  return sum / static_cast<double>(count);
}

TorusPart torus_partition(const FrequencyPoint& xi) {
  return xi.torus_norm() <= xi.antipode().torus_norm() ? TorusPart::T0 : TorusPart::T1;
}

}  // namespace orthoplex

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "orthoplex/asymptotics.hpp"
#include "orthoplex/concentration.hpp"
#include "orthoplex/contour.hpp"
#include "orthoplex/exact_counts.hpp"
#include "orthoplex/guards.hpp"
#include "orthoplex/lattice_ops.hpp"

namespace orthoplex::cli {

namespace {

std::uint64_t parse_uint(std::string_view text, std::string_view context) {
  const std::string s(text);
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    if (!s.empty() && s[0] != '-' && s[0] != '+') value = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw std::invalid_argument("unparseable integer '" + s + "' in '" + std::string(context) + "'");
  }
  return value;
}

double parse_double(std::string_view text, std::string_view context) {
  const std::string s(text);
  if (s == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || std::isnan(value)) {
    throw std::invalid_argument("unparseable number '" + s + "' in '" + std::string(context) + "'");
  }
  return value;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

// --- options ---------------------------------------------------------------

struct Args {
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool skip_invalid = false;
  std::vector<std::string> raises;

  std::string d, n, n_of_d, m, s = "all", K, a, threshold, C, l, alpha, delta, d_star;
  double n_scale = 1.0;
  std::string which = "uniform";
  std::string method = "sum";
  std::string kernel = "ball";
  std::string kind = "ball";
  std::string radius = "saddle";
  std::string radii = "dyadic";
  std::string p = "2";
  std::string f = "delta";
  std::string xi;
  std::string profile;
  std::string max_radius = "32";
  unsigned nodes = 512;
  unsigned split_nodes = 2048;
  unsigned order = 6;
  unsigned half_width = 4;
  unsigned support = 2;
  unsigned trials = 8;
  unsigned scan_samples = 200;
  std::uint64_t tail_samples = 1'000'000;
  unsigned random_xi = 0;
  unsigned max_d = 5;
  unsigned max_n = 7;
  std::string suite = "all";
  bool with_exact = false;
  bool surface = false;
  double target = -1.0;
};

struct Context {
  Guards guards;
  std::string guard_tag;  // empty unless --unsafe-raise-guard was used
  unsigned threads = 1;
};

Row start(const std::string& subcommand) {
  Row row;
  row.text("subcommand", subcommand);
  return row;
}

void finish(Row& row, const Context& ctx, const char* provenance) {
  row.text("provenance", provenance);
  if (!ctx.guard_tag.empty()) row.text("unsafe_guards", ctx.guard_tag);
}

void raise_guard(Context& ctx, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("--unsafe-raise-guard expects NAME=VALUE, got '" + spec + "'");
  }
  const std::string name = spec.substr(0, eq);
  const std::string text = spec.substr(eq + 1);
  const std::uint64_t value =
      text == "inf" ? std::numeric_limits<std::uint64_t>::max() : parse_uint(text, spec);
  if (name == "enumeration") {
    ctx.guards.enumeration_limit = value;
  } else if (name == "dp_budget") {
    ctx.guards.dp_budget = value;
  } else if (name == "box_cells") {
    ctx.guards.box_cells = value;
  } else if (name == "ehrhart_dimension") {
    ctx.guards.ehrhart_max_dimension =
        static_cast<unsigned>(std::min<std::uint64_t>(value, std::numeric_limits<unsigned>::max()));
  } else {
    throw std::invalid_argument("unknown guard '" + name +
                                "' (expected enumeration|dp_budget|box_cells|ehrhart_dimension)");
  }
  if (!ctx.guard_tag.empty()) ctx.guard_tag += ';';
  ctx.guard_tag += spec;
}

using Tuple = std::pair<std::uint64_t, std::uint64_t>;

std::vector<std::uint64_t> required_range(const std::string& text, const char* flag) {
  if (text.empty()) throw std::invalid_argument(std::string("missing required option ") + flag);
  return parse_range(text);
}

std::vector<Tuple> dn_tuples(const Args& args) {
  const auto ds = required_range(args.d, "--d");
  if (!args.n.empty() && !args.n_of_d.empty()) {
    throw std::invalid_argument("--n and --n-of-d are mutually exclusive");
  }
  std::vector<Tuple> tuples;
  if (!args.n_of_d.empty()) {
    const NOfD rule = parse_n_of_d(args.n_of_d);
    for (auto d : ds) tuples.emplace_back(d, n_of_d(rule, d, args.n_scale));
    return tuples;
  }
  const auto ns = required_range(args.n, "--n");
  for (auto d : ds) {
    for (auto n : ns) tuples.emplace_back(d, n);
  }
  return tuples;
}

// Runs one task per item; with --skip-invalid, items whose task throws
// std::invalid_argument produce no rows.
template <typename T, typename F>
std::vector<Row> sweep(const std::vector<T>& items, const Args& args, const Context& ctx, F task) {
  return parallel_rows(items.size(), ctx.threads, [&](std::size_t i) -> std::vector<Row> {
    try {
      return task(items[i]);
    } catch (const std::invalid_argument&) {
      if (args.skip_invalid) return {};
      throw;
    }
  });
}

std::string join_ints(std::span<const int> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(x[i]);
  }
  return s + ")";
}

std::string join_reals(const std::vector<double>& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ',';
    s += format_real(x[i]);
  }
  return s + ")";
}

std::string rational_text(const BigRational& q) { return q.get_str(); }

double parse_p(const std::string& text) {
  const double p = parse_double(text, "--p");
  if (!(p >= 1.0)) throw std::invalid_argument("--p must be >= 1 or inf");
  return p;
}

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

GridFunction make_function(unsigned d, unsigned half_width, const std::string& kind, unsigned support,
                           std::uint64_t seed, const Guards& guards) {
  GridFunction f(d, half_width, guards);
  if (kind == "delta") {
    f.at(std::vector<int>(d, 0)) = 1.0;
    return f;
  }
  if (kind != "sign" && kind != "sparse" && kind != "uniform") {
    throw std::invalid_argument("unknown function '" + kind + "' (expected delta|sign|sparse|uniform)");
  }
  auto rng = seeded(seed, 0);
  const int s = static_cast<int>(std::min(support, half_width));
  std::bernoulli_distribution coin(kind == "sparse" ? 0.125 : 0.5);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = f.point_of(i);
    if (!std::all_of(x.begin(), x.end(), [s](int c) { return c >= -s && c <= s; })) continue;
    if (kind == "sign") {
      f[i] = coin(rng) ? 1.0 : -1.0;
    } else if (kind == "uniform") {
      f[i] = value(rng);
    } else if (coin(rng)) {
      f[i] = value(rng);
    }
  }
  return f;
}

std::vector<FrequencyPoint> frequency_points(const Args& args, unsigned d) {
  std::vector<FrequencyPoint> points;
  if (!args.xi.empty()) {
    auto coords = parse_real_list(args.xi);
    if (coords.size() == 1) coords.assign(d, coords[0]);
    if (coords.size() != d) {
      throw std::invalid_argument("--xi has " + std::to_string(coords.size()) +
                                  " coordinates, expected 1 or " + std::to_string(d));
    }
    points.emplace_back(std::move(coords));
  }
  if (args.random_xi > 0) {
    auto rng = seeded(args.seed, d);
    std::uniform_real_distribution<double> uniform(-0.5, 0.5);
    for (unsigned k = 0; k < args.random_xi; ++k) {
      std::vector<double> coords(d);
      for (auto& c : coords) c = uniform(rng);
      points.emplace_back(std::move(coords));
    }
  }
  if (points.empty()) throw std::invalid_argument("give --xi and/or --random-xi");
  return points;
}

CompositionProfile parse_profile(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("missing required option --profile");
  CompositionProfile profile;
  for (const auto& part : split(text, ',')) {
    profile.multiplicities.push_back(static_cast<unsigned>(parse_uint(part, text)));
  }
  return profile;
}

// --- subcommands -------------------------------------------------------------

std::vector<Row> cmd_delannoy(const Args& args, const Context& ctx) {
  if (args.method != "sum" && args.method != "recurrence") {
    throw std::invalid_argument("--method must be sum or recurrence");
  }
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    Row row = start("delannoy");
    row.integer("d", t.first).integer("n", t.second);
    row.count("count", args.method == "sum" ? delannoy(t.first, t.second)
                                              : delannoy_by_recurrence(t.first, t.second));
    finish(row, ctx, "exact");
    return std::vector<Row>{row};
  });
}

std::vector<Row> cmd_sphere(const Args& args, const Context& ctx) {
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    Row row = start("sphere");
    row.integer("d", t.first).integer("n", t.second).count("count", sphere_count(t.first, t.second));
    finish(row, ctx, "exact");
    return std::vector<Row>{row};
  });
}

std::vector<Row> cmd_shell(const Args& args, const Context& ctx) {
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    const auto [d, n] = t;
    std::vector<std::uint64_t> supports;
    if (args.s == "all") {
      for (std::uint64_t s = 0; s <= d; ++s) supports.push_back(s);
    } else {
      supports = parse_range(args.s);
    }
    std::vector<Row> rows;
    for (auto s : supports) {
      Row row = start("shell");
      row.integer("d", d).integer("n", n).integer("s", s).count("count", support_shell_count(d, s, n));
      finish(row, ctx, "exact");
      rows.push_back(std::move(row));
    }
    return rows;
  });
}

std::vector<Row> cmd_bounded(const Args& args, const Context& ctx) {
  const auto ms = required_range(args.m, "--m");
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    std::vector<Row> rows;
    for (auto m : ms) {
      Row row = start("bounded");
      row.integer("d", t.first).integer("n", t.second).integer("m", m);
      row.count("count", bounded_ball_count(t.first, t.second, m, ctx.guards));
      finish(row, ctx, "exact");
      rows.push_back(std::move(row));
    }
    return rows;
  });
}

std::vector<Row> cmd_ehrhart(const Args& args, const Context& ctx) {
  return sweep(required_range(args.d, "--d"), args, ctx, [&](std::uint64_t d) {
    const auto poly = ehrhart_polynomial(static_cast<unsigned>(d), ctx.guards);
    std::vector<Row> rows;
    for (std::size_t k = 0; k < poly.coefficients().size(); ++k) {
      Row row = start("ehrhart");
      row.integer("d", d).integer("k", static_cast<std::int64_t>(k));
      row.text("coefficient", rational_text(poly.coefficients()[k]));
      row.real("coefficient_real", poly.coefficients()[k].get_d());
      finish(row, ctx, "exact");
      rows.push_back(std::move(row));
    }
    return rows;
  });
}

std::vector<Row> cmd_estimate(const Args& args, const Context& ctx) {
  const EstimateKind kind = parse_estimate_kind(args.which);
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    const auto report = estimate(kind, t.first, t.second);
    Row row = start("estimate");
    row.integer("d", t.first).integer("n", t.second).text("which", std::string(to_string(kind)));
    row.real("log_estimate", report.log_estimate).real("estimate", report.estimate);
    if (args.with_exact) {
      const BigCount exact = delannoy(t.first, t.second);
      const double log_exact = log_count(exact);
      row.count("exact", exact).real("log_exact", log_exact);
      row.real("ratio", std::exp(log_exact - report.log_estimate));
    }
    finish(row, ctx, "estimate");
    return std::vector<Row>{row};
  });
}

std::vector<Row> cmd_bseries(const Args& args, const Context& ctx) {
  std::vector<Row> rows;
  if (args.alpha.empty()) {
    const auto b = b_coefficients(args.order);
    for (std::size_t k = 0; k < b.size(); ++k) {
      Row row = start("bseries");
      row.integer("k", static_cast<std::int64_t>(k)).real("b", b[k]);
      finish(row, ctx, "quadrature");
      rows.push_back(std::move(row));
    }
    return rows;
  }
  for (double alpha : parse_real_list(args.alpha)) {
    Row row = start("bseries");
    row.real("alpha", alpha).integer("order", args.order).real("series", b_series(alpha, args.order));
    finish(row, ctx, "quadrature");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> cmd_contour(const Args& args, const Context& ctx) {
  const Kernel kernel = parse_kernel(args.kernel);
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    const auto [d, n] = t;
    ContourSpec spec = default_contour_spec(d, n, kernel, args.nodes);
    if (args.radius != "saddle") spec.radius = parse_double(args.radius, "--radius");
    const auto value = contour_integral(d, n, spec);
    const double count = value.value().real();
    Row row = start("contour");
    row.integer("d", d).integer("n", n).text("kernel", std::string(to_string(kernel)));
    row.real("radius", spec.radius).integer("nodes", spec.nodes);
    row.real("log_scale", value.log_scale).real("value", count);
    if (args.with_exact) {
      const BigCount exact = kernel == Kernel::ball ? delannoy(d, n) : sphere_count(d, n);
      row.count("exact", exact);
      row.real("relative_error", std::abs(count - exact.get_d()) / exact.get_d());
    }
    finish(row, ctx, "quadrature");
    return std::vector<Row>{row};
  });
}

std::vector<Row> cmd_saddle_split(const Args& args, const Context& ctx) {
  const Kernel kernel = parse_kernel(args.kernel);
  const auto deltas = parse_real_list(args.delta.empty() ? "0.05" : args.delta);
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    std::vector<Row> rows;
    for (double delta : deltas) {
      const auto split = saddle_split(t.first, t.second, delta, kernel, args.split_nodes);
      Row row = start("saddle-split");
      row.integer("d", t.first).integer("n", t.second).real("delta", delta);
      row.text("kernel", std::string(to_string(kernel))).real("radius", split.radius);
      row.real("log_scale", split.log_scale);
      row.real("w1_re", split.w1.real()).real("w1_im", split.w1.imag());
      row.real("w2_re", split.w2.real()).real("w2_im", split.w2.imag());
      row.real("w2_ratio", split.w2_ratio()).real("count", split.count());
      finish(row, ctx, "quadrature");
      rows.push_back(std::move(row));
    }
    return rows;
  });
}

std::vector<Row> grid_rows(const char* name, const GridFunction& f, const GridFunction& result,
                           const Context& ctx, const std::function<void(Row&)>& params) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < f.size(); ++i) {
    Row row = start(name);
    params(row);
    row.text("x", join_ints(f.point_of(i))).real("f", f[i]).real("value", result[i]);
    finish(row, ctx, "exact");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> cmd_average(const Args& args, const Context& ctx) {
  const unsigned d = static_cast<unsigned>(parse_uint(args.d, "--d"));
  const unsigned R = static_cast<unsigned>(parse_uint(args.radius == "saddle" ? "1" : args.radius, "--radius"));
  const AverageKind kind = parse_average_kind(args.kind);
  const auto f = make_function(d, args.half_width, args.f, args.support, args.seed, ctx.guards);
  const auto result = kind == AverageKind::ball ? ball_average(f, R, ctx.guards)
                                                : sphere_average(f, R, ctx.guards);
  return grid_rows("average", f, result, ctx, [&](Row& row) {
    row.integer("d", d).integer("radius", R).text("kind", std::string(to_string(kind)));
  });
}

std::vector<Row> cmd_maximal(const Args& args, const Context& ctx) {
  const unsigned d = static_cast<unsigned>(parse_uint(args.d, "--d"));
  const AverageKind kind = parse_average_kind(args.kind);
  const RadiusSet radii = RadiusSet::parse(args.radii);
  const auto f = make_function(d, args.half_width, args.f, args.support, args.seed, ctx.guards);
  const auto result = maximal_function(f, radii, kind, ctx.guards);
  return grid_rows("maximal", f, result, ctx, [&](Row& row) {
    row.integer("d", d).text("radii", args.radii).text("kind", std::string(to_string(kind)));
  });
}

std::vector<Row> cmd_norm_probe(const Args& args, const Context& ctx) {
  const RadiusSet radii = RadiusSet::parse(args.radii);
  const double p = parse_p(args.p);
  std::vector<Tuple> tuples;
  for (auto d : required_range(args.d, "--d")) {
    for (auto r : parse_range(args.max_radius)) tuples.emplace_back(d, r);
  }
  return sweep(tuples, args, ctx, [&](const Tuple& t) {
    const auto report = operator_norm_probe(static_cast<unsigned>(t.first), radii, p, args.trials,
                                            args.seed, static_cast<unsigned>(t.second), args.support,
                                            ctx.guards);
    Row row = start("norm-probe");
    row.integer("d", t.first).text("radii", args.radii).integer("max_radius", t.second);
    row.real("p", p).integer("trials", args.trials).integer("seed", static_cast<std::int64_t>(args.seed));
    row.integer("radius_count", static_cast<std::int64_t>(report.radii.size()));
    row.integer("half_width", report.half_width).real("ratio", report.ratio);
    row.text("best_trial", report.best_trial);
    finish(row, ctx, "monte_carlo");
    return std::vector<Row>{row};
  });
}

std::vector<Row> cmd_multiplier(const Args& args, const Context& ctx) {
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    const auto [d, n] = t;
    std::vector<Row> rows;
    for (const auto& xi : frequency_points(args, static_cast<unsigned>(d))) {
      const auto m = multiplier_m(static_cast<unsigned>(d), static_cast<unsigned>(n), xi, ctx.guards);
      const auto s = multiplier_s(static_cast<unsigned>(d), static_cast<unsigned>(n), xi, ctx.guards);
      Row row = start("multiplier");
      row.integer("d", d).integer("n", n).text("xi", join_reals(xi.coordinates()));
      row.real("torus_norm", xi.torus_norm());
      row.text("part", torus_partition(xi) == TorusPart::T0 ? "T0" : "T1");
      row.real("m_re", m.real()).real("m_im", m.imag()).real("m_abs", std::abs(m));
      row.real("s_re", s.real()).real("s_im", s.imag()).real("s_abs", std::abs(s));
      finish(row, ctx, "exact");
      rows.push_back(std::move(row));
    }
    return rows;
  });
}

std::vector<Row> cmd_mult_scan(const Args& args, const Context& ctx) {
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    const auto scan = multiplier_bound_scan(static_cast<unsigned>(t.first), static_cast<unsigned>(t.second),
                                            args.scan_samples, args.seed, ctx.guards);
    Row row = start("mult-scan");
    row.integer("d", t.first).integer("n", t.second).real("alpha", scan.alpha);
    row.integer("samples", args.scan_samples).integer("seed", static_cast<std::int64_t>(args.seed));
    row.real("local_constant", scan.local_constant).real("global_constant", scan.global_constant);
    row.integer("local_points", static_cast<std::int64_t>(scan.local_points));
    row.integer("global_points", static_cast<std::int64_t>(scan.global_points));
    finish(row, ctx, "monte_carlo");
    return std::vector<Row>{row};
  });
}

std::vector<Row> cmd_beta(const Args& args, const Context& ctx) {
  const CompositionProfile profile = parse_profile(args.profile);
  return sweep(required_range(args.d, "--d"), args, ctx, [&](std::uint64_t d) {
    std::vector<Row> rows;
    for (const auto& xi : frequency_points(args, static_cast<unsigned>(d))) {
      const auto beta = beta_multiplier(static_cast<unsigned>(d), profile, xi, ctx.guards);
      Row row = start("beta");
      row.integer("d", d).text("profile", args.profile).text("xi", join_reals(xi.coordinates()));
      row.count("class_count", composition_class_count(d, profile));
      row.real("beta_re", beta.real()).real("beta_im", beta.imag());
      finish(row, ctx, "exact");
      rows.push_back(std::move(row));
    }
    return rows;
  });
}

void add_report(Row& row, const ConcentrationReport& r) {
  row.count("bad_count", r.bad_count).count("total", r.total).real("fraction", r.fraction);
}

std::vector<Row> cmd_deficit(const Args& args, const Context& ctx) {
  const auto Ks = required_range(args.K, "--K");
  const bool search = args.target >= 0.0;
  if (!search && args.a.empty()) throw std::invalid_argument("give --a or --target");
  const auto as = search ? std::vector<std::uint64_t>{} : parse_range(args.a);
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    const auto [d, n] = t;
    std::vector<Row> rows;
    for (auto K : Ks) {
      if (search) {
        const auto a = smallest_deficit(d, n, K, args.target, args.surface, ctx.guards);
        Row row = start("deficit");
        row.integer("d", d).integer("n", n).integer("K", K).boolean("surface", args.surface);
        row.real("target", args.target).integer("smallest_a", a ? static_cast<std::int64_t>(*a) : -1);
        if (a) {
          add_report(row, deficit_count(d, n, K, static_cast<std::int64_t>(*a), args.surface, ctx.guards));
        } else {
          add_report(row, ConcentrationReport{});
        }
        finish(row, ctx, "exact");
        rows.push_back(std::move(row));
        continue;
      }
      for (auto a : as) {
        const auto r = deficit_count(d, n, K, static_cast<std::int64_t>(a), args.surface, ctx.guards);
        Row row = start("deficit");
        row.integer("d", d).integer("n", n).integer("K", K).integer("a", static_cast<std::int64_t>(a));
        row.boolean("surface", args.surface);
        add_report(row, r);
        finish(row, ctx, "exact");
        rows.push_back(std::move(row));
      }
    }
    return rows;
  });
}

std::vector<Row> cmd_few_ones(const Args& args, const Context& ctx) {
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    const auto r = few_ones_count(t.first, t.second, ctx.guards);
    Row row = start("few-ones");
    row.integer("d", t.first).integer("n", t.second).integer("max_ones", r.threshold);
    add_report(row, r);
    row.real("fraction_over_2pow", r.fraction * std::exp2(static_cast<double>(t.second) / 2.0));
    finish(row, ctx, "exact");
    return std::vector<Row>{row};
  });
}

std::vector<Row> cmd_large_coord(const Args& args, const Context& ctx) {
  if (args.K.empty() == args.threshold.empty()) throw std::invalid_argument("give exactly one of --K, --threshold");
  const bool by_k = !args.K.empty();
  const auto values = parse_range(by_k ? args.K : args.threshold);
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    std::vector<Row> rows;
    for (auto v : values) {
      const auto r = by_k ? large_coordinate_count(t.first, t.second, v, ctx.guards)
                          : large_coordinate_count_at(t.first, t.second, v, ctx.guards);
      Row row = start("large-coord");
      row.integer("d", t.first).integer("n", t.second).integer("threshold", r.threshold);
      add_report(row, r);
      row.real("fraction_times_d", r.fraction * static_cast<double>(t.first));
      finish(row, ctx, "exact");
      rows.push_back(std::move(row));
    }
    return rows;
  });
}

std::vector<Row> cmd_shell_ratio(const Args& args, const Context& ctx) {
  const auto Cs = parse_real_list(args.C.empty() ? "2" : args.C);
  const auto ls = required_range(args.l, "--l");
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    std::vector<Row> rows;
    for (double C : Cs) {
      for (auto l : ls) {
        const auto q = shell_ratio(t.first, t.second, C, l);
        Row row = start("shell-ratio");
        row.integer("d", t.first).integer("n", t.second).real("C", C).integer("l", l);
        row.integer("l_star", shell_l_star(t.first, C, l));
        row.text("ratio", rational_text(q)).real("ratio_real", q.get_d());
        finish(row, ctx, "exact");
        rows.push_back(std::move(row));
      }
    }
    return rows;
  });
}

std::vector<Row> cmd_second_moment(const Args& args, const Context& ctx) {
  return sweep(dn_tuples(args), args, ctx, [&](const Tuple& t) {
    const auto r = second_moment(t.first, t.second);
    Row row = start("second-moment");
    row.integer("d", t.first).integer("n", t.second);
    row.text("moment", rational_text(r.moment)).real("moment_real", r.moment.get_d());
    row.real("ratio_to_alpha_sq", r.ratio_to_alpha_sq);
    finish(row, ctx, "exact");
    return std::vector<Row>{row};
  });
}

std::vector<Row> cmd_clt_tail(const Args& args, const Context& ctx) {
  const auto ds = required_range(args.d_star, "--d-star");
  const auto Cs = parse_real_list(args.C.empty() ? "1" : args.C);
  std::vector<Row> rows;
  // The Monte Carlo itself is sharded across threads, so tuples run in order.
  for (auto d : ds) {
    for (double C : Cs) {
      const auto t = clt_tail_probability(d, C, args.tail_samples, args.seed, ctx.threads);
      Row row = start("clt-tail");
      row.integer("d_star", d).real("C", C).integer("threshold", t.threshold);
      row.integer("samples", static_cast<std::int64_t>(t.samples));
      row.integer("seed", static_cast<std::int64_t>(t.seed));
      row.integer("hits", static_cast<std::int64_t>(t.hits));
      row.real("estimate", t.estimate).real("stderr", t.standard_error).real("gaussian", t.gaussian);
      finish(row, ctx, "monte_carlo");
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_output(const std::vector<Row>& rows, Format format, const std::string& path,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    emit(rows, format, out);
    return;
  }
  std::filesystem::path target(path);
  if (target.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      target = std::filesystem::path(dir) / target;
    }
  }
  std::ofstream file(target, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::ios_base::failure("cannot open '" + target.string() + "' for writing: " +
                                 std::strerror(errno));
  }
  emit(rows, format, file);
  file.flush();
  if (!file) throw std::ios_base::failure("write to '" + target.string() + "' failed");
}

void add_common(CLI::App* sub, Args& args) {
  sub->add_option("--format", args.format, "csv or json")->capture_default_str();
  sub->add_option("--out", args.out, "output file (relative paths use $" + std::string(kOutputDirEnv) + ")");
  sub->add_option("--seed", args.seed, "random seed")->capture_default_str();
  sub->add_option("--threads", args.threads, "worker threads; output order is fixed")->capture_default_str();
  sub->add_flag("--skip-invalid", args.skip_invalid, "drop sweep points outside an operation's domain");
  sub->add_option("--unsafe-raise-guard", args.raises,
                  "NAME=VALUE|inf for enumeration, dp_budget, box_cells, ehrhart_dimension; tags rows");
}

void add_dn(CLI::App* sub, Args& args) {
  sub->add_option("--d", args.d, "dimension range: 7, 1:10, 1:10:3 or 2,4,8");
  sub->add_option("--n", args.n, "radius range");
  sub->add_option("--n-of-d", args.n_of_d, "n as floor(scale*f(d)): sqrt|linear|pow32|square");
  sub->add_option("--n-scale", args.n_scale, "scale for --n-of-d")->capture_default_str();
}

}  // namespace

std::vector<std::uint64_t> parse_range(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty range");
  std::vector<std::uint64_t> values;
  if (text.find(',') != std::string_view::npos) {
    for (const auto& part : split(text, ',')) values.push_back(parse_uint(part, text));
    return values;
  }
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {parse_uint(parts[0], text)};
  if (parts.size() > 3) throw std::invalid_argument("unparseable range '" + std::string(text) + "'");
  const auto lo = parse_uint(parts[0], text);
  const auto hi = parse_uint(parts[1], text);
  const auto step = parts.size() == 3 ? parse_uint(parts[2], text) : 1;
  if (step == 0) throw std::invalid_argument("range step must be positive in '" + std::string(text) + "'");
  if (lo > hi) throw std::invalid_argument("empty range '" + std::string(text) + "'");
  for (std::uint64_t v = lo; v <= hi; v += step) {
    values.push_back(v);
    if (hi - v < step) break;
  }
  return values;
}

std::vector<double> parse_real_list(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty list");
  std::vector<double> values;
  const auto colon = split(text, ':');
  if (colon.size() == 3) {
    const double lo = parse_double(colon[0], text);
    const double hi = parse_double(colon[1], text);
    const double step = parse_double(colon[2], text);
    if (!(step > 0) || lo > hi) throw std::invalid_argument("unparseable real range '" + std::string(text) + "'");
    const auto count = static_cast<std::uint64_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::uint64_t k = 0; k <= count; ++k) values.push_back(lo + static_cast<double>(k) * step);
    return values;
  }
  if (colon.size() != 1) throw std::invalid_argument("unparseable real list '" + std::string(text) + "'");
  for (const auto& part : split(text, ',')) values.push_back(parse_double(part, text));
  return values;
}

NOfD parse_n_of_d(std::string_view name) {
  if (name == "sqrt") return NOfD::sqrt;
  if (name == "linear") return NOfD::linear;
  if (name == "pow32") return NOfD::pow32;
  if (name == "square") return NOfD::square;
  throw std::invalid_argument("unknown n-of-d rule '" + std::string(name) +
                              "' (expected sqrt|linear|pow32|square)");
}

std::uint64_t n_of_d(NOfD rule, std::uint64_t d, double scale) {
  if (!(scale > 0) || !std::isfinite(scale)) throw std::invalid_argument("--n-scale must be positive");
  if (scale == 1.0) {
    switch (rule) {
      case NOfD::sqrt: return isqrt(d);
      case NOfD::linear: return d;
      case NOfD::pow32: return isqrt(d * d * d);
      case NOfD::square: return d * d;
    }
  }
  const double x = static_cast<double>(d);
  double f = 0;
  switch (rule) {
    case NOfD::sqrt: f = std::sqrt(x); break;
    case NOfD::linear: f = x; break;
    case NOfD::pow32: f = x * std::sqrt(x); break;
    case NOfD::square: f = x * x; break;
  }
  return static_cast<std::uint64_t>(std::floor(scale * f));
}

std::vector<Row> parallel_rows(std::size_t count, unsigned threads,
                               const std::function<std::vector<Row>(std::size_t)>& task) {
  std::vector<std::vector<Row>> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::vector<Row> rows;
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    for (auto& row : results[i]) rows.push_back(std::move(row));
  }
  return rows;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Args args;
  CLI::App app{"orthoplex: lattice points in l1 balls, their asymptotics and averaging operators"};
  app.require_subcommand(1);

  using Handler = std::vector<Row> (*)(const Args&, const Context&);
  std::map<CLI::App*, Handler> handlers;
  const auto add = [&](const char* name, const char* help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, args);
    handlers[sub] = h;
    return sub;
  };

  auto* sub = add("delannoy", "exact |B_n ∩ Z^d|", cmd_delannoy);
  add_dn(sub, args);
  sub->add_option("--method", args.method, "sum or recurrence")->capture_default_str();

  add_dn(add("sphere", "exact |S_n ∩ Z^d|", cmd_sphere), args);

  sub = add("shell", "points of B_n with exactly s nonzero coordinates", cmd_shell);
  add_dn(sub, args);
  sub->add_option("--s", args.s, "support sizes (range) or all")->capture_default_str();

  sub = add("bounded", "points of B_n with every |x_i| <= m", cmd_bounded);
  add_dn(sub, args);
  sub->add_option("--m", args.m, "coordinate bound range");

  sub = add("ehrhart", "Ehrhart polynomial coefficients of the cross-polytope", cmd_ehrhart);
  sub->add_option("--d", args.d, "dimension range");

  sub = add("estimate", "asymptotic estimates of |B_n ∩ Z^d|", cmd_estimate);
  add_dn(sub, args);
  sub->add_option("--which", args.which, "uniform|binomial|volume|pw")->capture_default_str();
  sub->add_flag("--with-exact", args.with_exact, "also print the exact count and the ratio");

  sub = add("bseries", "coefficients b_k or partial sums of the b-series", cmd_bseries);
  sub->add_option("--order", args.order, "highest order")->capture_default_str();
  sub->add_option("--alpha", args.alpha, "evaluate the series at these alpha values");

  sub = add("contour", "coefficient extraction by the trapezoidal rule", cmd_contour);
  add_dn(sub, args);
  sub->add_option("--radius", args.radius, "contour radius or saddle")->capture_default_str();
  sub->add_option("--nodes", args.nodes, "trapezoid nodes")->capture_default_str();
  sub->add_option("--kernel", args.kernel, "ball or sphere")->capture_default_str();
  sub->add_flag("--with-exact", args.with_exact, "compare with the exact count");

  sub = add("saddle-split", "split the saddle-radius contour into the arc |theta|<=delta and the rest",
            cmd_saddle_split);
  add_dn(sub, args);
  sub->add_option("--delta", args.delta, "arc half-widths")->capture_default_str();
  sub->add_option("--nodes", args.split_nodes, "trapezoid nodes")->capture_default_str();
  sub->add_option("--kernel", args.kernel, "ball or sphere")->capture_default_str();

  sub = add("average", "ball or sphere average of a test function on a box", cmd_average);
  sub->add_option("--d", args.d, "dimension (1-4)");
  sub->add_option("--radius", args.radius, "radius R");
  sub->add_option("--kind", args.kind, "ball or sphere")->capture_default_str();
  sub->add_option("--half-width", args.half_width, "box half-width L")->capture_default_str();
  sub->add_option("--f", args.f, "delta|sign|sparse|uniform")->capture_default_str();
  sub->add_option("--support", args.support, "support half-width of random f")->capture_default_str();

  sub = add("maximal", "maximal function over a radius set", cmd_maximal);
  sub->add_option("--d", args.d, "dimension (1-4)");
  sub->add_option("--radii", args.radii, "full[:max] | dyadic[:max] | list:a,b | interval:lo:hi")
      ->capture_default_str();
  sub->add_option("--kind", args.kind, "ball or sphere")->capture_default_str();
  sub->add_option("--half-width", args.half_width, "box half-width L")->capture_default_str();
  sub->add_option("--f", args.f, "delta|sign|sparse|uniform")->capture_default_str();
  sub->add_option("--support", args.support, "support half-width of random f")->capture_default_str();

  sub = add("norm-probe", "empirical l^p norm of the ball maximal operator", cmd_norm_probe);
  sub->add_option("--d", args.d, "dimension range (1-4)");
  sub->add_option("--radii", args.radii, "radius set")->capture_default_str();
  sub->add_option("--p", args.p, "exponent, >= 1 or inf")->capture_default_str();
  sub->add_option("--trials", args.trials, "trial functions")->capture_default_str();
  sub->add_option("--max-radius", args.max_radius, "largest radius (range)")->capture_default_str();
  sub->add_option("--support", args.support, "support half-width of trial functions")->capture_default_str();

  sub = add("multiplier", "ball and sphere multipliers m_n(xi), s_n(xi)", cmd_multiplier);
  add_dn(sub, args);
  sub->add_option("--xi", args.xi, "frequency, comma separated (one value is broadcast)");
  sub->add_option("--random-xi", args.random_xi, "number of seeded uniform frequencies");

  sub = add("mult-scan", "sampled constants of the local and global multiplier bounds", cmd_mult_scan);
  add_dn(sub, args);
  sub->add_option("--samples", args.scan_samples, "uniform samples")->capture_default_str();

  sub = add("beta", "multiplier of the composition class with given multiplicities", cmd_beta);
  sub->add_option("--d", args.d, "dimension range");
  sub->add_option("--profile", args.profile, "multiplicities j_1,...,j_K");
  sub->add_option("--xi", args.xi, "frequency");
  sub->add_option("--random-xi", args.random_xi, "number of seeded uniform frequencies");

  sub = add("deficit", "points whose small coordinates carry at most n-a of the l1 mass", cmd_deficit);
  add_dn(sub, args);
  sub->add_option("--K", args.K, "small-coordinate cutoff range");
  sub->add_option("--a", args.a, "deficit range");
  sub->add_option("--target", args.target, "report the smallest a with fraction <= target");
  sub->add_flag("--surface", args.surface, "count on S_n instead of B_n");

  add_dn(add("few-ones", "points of S_n with at most n/2 coordinates equal to +-1", cmd_few_ones), args);

  sub = add("large-coord", "points of B_n with some |x_i| >= 6K (or >= threshold)", cmd_large_coord);
  add_dn(sub, args);
  sub->add_option("--K", args.K, "K range (threshold 6K)");
  sub->add_option("--threshold", args.threshold, "explicit threshold range");

  sub = add("shell-ratio", "ratio of consecutive support shells around l* = floor(C sqrt d) + l",
            cmd_shell_ratio);
  add_dn(sub, args);
  sub->add_option("--C", args.C, "constants C")->capture_default_str();
  sub->add_option("--l", args.l, "offsets l >= 1");

  add_dn(add("second-moment", "average of x_1^2 over B_n ∩ Z^d", cmd_second_moment), args);

  sub = add("clt-tail", "Monte Carlo tail of a sum of 2d* uniforms", cmd_clt_tail);
  sub->add_option("--d-star", args.d_star, "d* range");
  sub->add_option("--C", args.C, "constants C")->capture_default_str();
  sub->add_option("--samples", args.tail_samples, "samples (>= 10000)")->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suites and print a pass/fail table");
  add_common(verify, args);
  verify->add_option("--suite", args.suite, "counts|asymptotics|contour|lattice|concentration|all")
      ->capture_default_str();
  verify->add_option("--max-d", args.max_d, "largest dimension for brute-force checks")->capture_default_str();
  verify->add_option("--max-n", args.max_n, "largest radius for brute-force checks")->capture_default_str();

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Context ctx;
    ctx.threads = std::max(1u, args.threads);
    for (const auto& spec : args.raises) raise_guard(ctx, spec);
    const Format format = parse_format(args.format);

    if (verify->parsed()) {
      VerifyOptions options{args.suite, args.max_d, args.max_n, ctx.threads};
      bool passed = true;
      auto rows = run_verify(options, passed);
      for (auto& row : rows) finish(row, ctx, "exact");
      write_output(rows, format, args.out, out);
      if (!passed) err << "verify: at least one check failed\n";
      return passed ? kExitOk : kExitVerifyFailed;
    }
    for (const auto& [subapp, handler] : handlers) {
      if (subapp->parsed()) {
        write_output(handler(args, ctx), format, args.out, out);
        return kExitOk;
      }
    }
    err << "no subcommand given\n";
    return kExitUsage;
  } catch (const GuardViolation& e) {
    err << "error: " << e.what() << "\n(raise with --unsafe-raise-guard " << e.guard() << "=VALUE)\n";
    return kExitGuard;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace orthoplex::cli

#include "pqbernstein/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "pqbernstein/analysis.hpp"
#include "pqbernstein/bernstein.hpp"
#include "pqbernstein/pq_calculus.hpp"
#include "pqbernstein/target_function.hpp"

namespace pqb::cli {

namespace {

constexpr double kPartitionTolerance = 1e-12;
constexpr double kMomentTolerance = 1e-11;
constexpr double kEndpointTolerance = 1e-13;
constexpr double kIdentityTolerance = 1e-13;  // relative to [n]
constexpr double kNodeGapTolerance = 1e-13;
constexpr double kPositivitySlack = 1e-15;
constexpr int kOracleMaxN = 30;
constexpr int kVerifyGrid = 101;

std::string fmt(double v) { return format_double(v); }

std::string short_fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

KeyValues header(const RunConfig& config) {
  KeyValues kv{{"command", config.command}};
  if (!config.reproducible) kv.emplace_back("timestamp", utc_timestamp());
  return kv;
}

OperatorSpec spec_from(const RunConfig& config, int n, double p, double q) {
  return OperatorSpec(config.n.value_or(n), PQParams(config.p.value_or(p), config.q.value_or(q)));
}

TargetFunction function_from(const RunConfig& config) {
  if (!config.poly.empty()) return TargetFunction::polynomial(config.poly);
  return TargetFunction::builtin(config.function);
}

void add_spec_params(KeyValues& kv, const OperatorSpec& spec) {
  kv.emplace_back("n", std::to_string(spec.degree()));
  kv.emplace_back("p", fmt(spec.params().p()));
  kv.emplace_back("q", fmt(spec.params().q()));
}

std::string yes_no(bool v) { return v ? "true" : "false"; }

// ---------------------------------------------------------------------------
// verify helpers

struct CheckRow {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct Check {
  std::string name;
  double tolerance;
  double worst = 0.0;
  void record(double deviation) {
    // NaN must surface as a failure.
    if (std::isnan(deviation) || deviation > worst) worst = deviation;
  }
  CheckRow row() const { return {name, worst, tolerance, !std::isnan(worst) && worst <= tolerance}; }
};

double relative_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::vector<int> verify_degrees(const RunConfig& config) {
  if (config.n) return {*config.n};
  return {1, 2, 3, 5, 10, 20, 30, 50};
}

std::vector<PQParams> verify_params(const RunConfig& config) {
  if (config.p || config.q) return {PQParams(config.p.value_or(0.95), config.q.value_or(0.9))};
  return {PQParams(0.5, 0.25), PQParams(0.7, 0.5),  PQParams(0.8, 0.6),
          PQParams(0.95, 0.9), PQParams(1.0, 0.7), PQParams(1.0, 0.99)};
}

// ---------------------------------------------------------------------------
// trend helpers

std::vector<TrendVariant> variants_from(const RunConfig& config, TrendKind kind,
                                        const OperatorSpec& base) {
  if (config.values.empty()) {
    auto defaults = default_trend(kind);
    // Explicit n/p/q re-anchor the default variant list on a new base.
    if (!(config.n || config.p || config.q)) return defaults.variants;
    switch (kind) {
      case TrendKind::vary_q: {
        std::vector<double> qs;
        for (const auto& v : defaults.variants) qs.push_back(v.q);
        return vary_q(base, qs);
      }
      case TrendKind::vary_n: {
        std::vector<int> ns;
        for (const auto& v : defaults.variants) ns.push_back(v.n);
        return vary_n(base, ns);
      }
      case TrendKind::vary_pq:
        return vary_pq(base, std::vector<std::pair<double, double>>{
                                 {base.params().p(), base.params().q()}});
    }
  }
  switch (kind) {
    case TrendKind::vary_q: {
      std::vector<double> qs;
      for (const auto& v : config.values) qs.push_back(std::stod(v));
      return vary_q(base, qs);
    }
    case TrendKind::vary_n: {
      std::vector<int> ns;
      for (const auto& v : config.values) ns.push_back(std::stoi(v));
      return vary_n(base, ns);
    }
    case TrendKind::vary_pq: {
      std::vector<std::pair<double, double>> pqs;
      for (const auto& v : config.values) {
        const auto colon = v.find(':');
        if (colon == std::string::npos) {
          throw std::invalid_argument("vary_pq values must be p:q pairs, got '" + v + "'");
        }
        pqs.emplace_back(std::stod(v.substr(0, colon)), std::stod(v.substr(colon + 1)));
      }
      return vary_pq(base, pqs);
    }
  }
  return {};
}

OperatorSpec trend_base(const RunConfig& config, TrendKind kind) {
  const auto defaults = default_trend(kind);
  const auto& b = defaults.base;
  return spec_from(config, b.degree(), b.params().p(), b.params().q());
}

std::string variant_label(const TrendVariant& v) {
  return "B(n=" + std::to_string(v.n) + ";p=" + short_fmt(v.p) + ";q=" + short_fmt(v.q) + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// commands

CommandResult cmd_eval(const RunConfig& config) {
  const auto spec = spec_from(config, 10, 0.95, 0.9);
  const auto f = function_from(config);
  const auto grid = Grid::uniform(config.grid);
  const auto samples = curve_samples(spec, f, grid, config.use_original);

  CommandResult result;
  auto& t = result.table;
  t.params = header(config);
  add_spec_params(t.params, spec);
  t.params.emplace_back("function", f.name());
  t.params.emplace_back("grid", std::to_string(grid.resolution()));
  t.params.emplace_back("use_original", yes_no(config.use_original));
  t.columns = {"x", "f", "B"};
  if (config.use_original) t.columns.emplace_back("B_original");

  double worst = 0.0;
  for (const auto& s : samples) {
    std::vector<Cell> row{s.x, s.f, s.b};
    if (s.b_original) row.emplace_back(*s.b_original);
    t.rows.push_back(std::move(row));
    worst = std::max(worst, std::abs(s.b - s.f));
  }
  t.verdicts.emplace_back("sup_error", fmt(worst));
  return result;
}

CommandResult cmd_moments(const RunConfig& config) {
  const auto spec = spec_from(config, 10, 0.95, 0.9);
  const auto grid = Grid::uniform(config.grid);

  CommandResult result;
  auto& t = result.table;
  t.params = header(config);
  add_spec_params(t.params, spec);
  t.params.emplace_back("grid", std::to_string(grid.resolution()));
  t.columns = {"x", "B_m0", "closed_m0", "B_m1", "closed_m1", "B_m2", "closed_m2"};

  std::vector<std::vector<double>> curves;
  for (int m = 0; m <= 2; ++m) {
    curves.push_back(operator_curve(spec, TargetFunction::monomial(m), grid));
  }
  double worst[3] = {0.0, 0.0, 0.0};
  const auto xs = grid.points();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<Cell> row{xs[i]};
    for (int m = 0; m <= 2; ++m) {
      const double closed = moment_closed_form(spec, m, xs[i]);
      row.emplace_back(curves[m][i]);
      row.emplace_back(closed);
      worst[m] = std::max(worst[m], std::abs(curves[m][i] - closed));
    }
    t.rows.push_back(std::move(row));
  }
  const double tolerance[3] = {kPartitionTolerance, kPartitionTolerance, kMomentTolerance};
  for (int m = 0; m <= 2; ++m) {
    t.verdicts.emplace_back("max_deviation_m" + std::to_string(m), fmt(worst[m]));
    result.checks_passed = result.checks_passed && worst[m] <= tolerance[m];
  }
  t.verdicts.emplace_back("status", result.checks_passed ? "pass" : "fail");
  return result;
}

CommandResult cmd_verify(const RunConfig& config) {
  const auto degrees = verify_degrees(config);
  const auto lattice = verify_params(config);
  const auto grid = Grid::uniform(kVerifyGrid);
  const auto cubic = TargetFunction::builtin("paper_cubic");
  const auto one = TargetFunction::monomial(0);
  const auto t1 = TargetFunction::monomial(1);
  const auto t2 = TargetFunction::monomial(2);

  Check partition{"partition_of_unity", kPartitionTolerance};
  Check positivity{"basis_positivity", kPositivitySlack};
  Check moment1{"moment_m1", kPartitionTolerance};
  Check moment2{"moment_m2_closed_form", kMomentTolerance};
  Check oracle{"binomial_oracle_n<=30", 1e-12};
  Check scaled{"scaled_binomial_oracle_n<=30", 1e-12};
  Check symmetry{"binomial_symmetry_n<=30", 1e-12};
  Check identity{"second_moment_identity", kIdentityTolerance};
  Check endpoints{"endpoint_interpolation", kEndpointTolerance};
  Check node_gaps{"node_monotonicity", kNodeGapTolerance};
  Check original{"original_partition_of_unity", kPartitionTolerance};
  // Margin by which the unnormalized operator misses 1, minus the floor
  // 0.01 (1-p). Negated so that "defect shown everywhere" means <= 0.
  Check defect{"original_defect_exhibited", 0.0};
  defect.worst = -std::numeric_limits<double>::infinity();

  for (const auto& params : lattice) {
    for (int n : degrees) {
      const OperatorSpec spec(n, params);
      const PreparedOperator op(spec);
      const auto s_one = op.sample(one);
      const auto s_t1 = op.sample(t1);
      const auto s_t2 = op.sample(t2);
      std::vector<double> basis_values(static_cast<std::size_t>(n) + 1);
      std::vector<double> scratch(basis_values.size());

      for (double x : grid.points()) {
        op.fill_basis(x, basis_values);
        double sum = 0.0;
        for (double b : basis_values) {
          sum += b;
          positivity.record(-b);
        }
        partition.record(std::abs(sum - 1.0));
        partition.record(std::abs(op.evaluate(x, s_one, scratch) - 1.0));
        moment1.record(std::abs(op.evaluate(x, s_t1, scratch) - x));
        moment2.record(std::abs(op.evaluate(x, s_t2, scratch) - moment_closed_form(spec, 2, x)));
      }

      if (n <= kOracleMaxN) {
        const double p = params.p();
        const auto row = pq_binomial_row(n, params);
        const auto srow = scaled_binomial_row(n, params);
        for (int k = 0; k <= n; ++k) {
          const double expected = pq_binomial_oracle(n, k, params);
          oracle.record(relative_diff(row[k], expected));
          scaled.record(relative_diff(srow[k] * std::pow(p, k * (n - k)), expected));
          symmetry.record(relative_diff(pq_binomial_oracle(n, n - k, params), row[k]));
        }
      }

      identity.record(second_moment_identity_check(spec) / pq_integer(n, params));

      endpoints.record(std::abs(apply_operator(spec, cubic, 0.0) - cubic(0.0)));
      endpoints.record(std::abs(apply_operator(spec, cubic, 1.0) - cubic(1.0)));

      const auto& t = op.node_values();
      const double s_n = pq_integer_scaled(n, params);
      double r_pow = 1.0;
      for (int k = 0; k < n; ++k) {
        const double gap = t[k + 1] - t[k];
        // Strictness is only checkable while the exact gap is resolvable.
        const bool resolvable = r_pow / s_n > 4 * std::numeric_limits<double>::epsilon();
        if (gap < 0.0 || (resolvable && !(gap > 0.0))) {
          node_gaps.record(std::numeric_limits<double>::infinity());
        }
        node_gaps.record(std::abs(gap - r_pow / s_n));
        r_pow *= params.ratio();
      }

      if (config.use_original) {
        const auto curve = operator_curve(spec, one, grid, OperatorForm::original);
        double worst = 0.0;
        for (double v : curve) worst = std::max(worst, std::abs(v - 1.0));
        original.record(worst);
        if (params.p() < 1.0 && n >= 2) {
          defect.record(0.01 * (1.0 - params.p()) - worst);
        } else {
          // Where p = 1 or n = 1 the two operators coincide: no defect expected.
          defect.record(worst - kPartitionTolerance);
        }
      }
    }
  }

  std::vector<CheckRow> rows;
  for (const Check* c : {&partition, &positivity, &moment1, &moment2, &oracle, &scaled,
                         &symmetry, &identity, &endpoints, &node_gaps}) {
    rows.push_back(c->row());
  }
  if (config.use_original) {
    if (config.expect_defect) {
      auto row = defect.row();
      row.pass = defect.worst < 0.0;
      rows.push_back(row);
    } else {
      rows.push_back(original.row());
    }
  }

  CommandResult result;
  auto& table = result.table;
  table.params = header(config);
  std::string ns;
  for (int n : degrees) ns += (ns.empty() ? "" : ";") + std::to_string(n);
  std::string pqs;
  for (const auto& pq : lattice) {
    pqs += (pqs.empty() ? "" : ";") + short_fmt(pq.p()) + ":" + short_fmt(pq.q());
  }
  table.params.emplace_back("n_values", ns);
  table.params.emplace_back("pq_lattice", pqs);
  table.params.emplace_back("use_original", yes_no(config.use_original));
  table.params.emplace_back("expect_defect", yes_no(config.expect_defect));
  table.columns = {"check", "max_deviation", "tolerance", "status"};
  for (const auto& r : rows) {
    table.rows.push_back({r.name, r.deviation, r.tolerance, std::string(r.pass ? "pass" : "fail")});
    result.checks_passed = result.checks_passed && r.pass;
  }
  table.verdicts.emplace_back("status", result.checks_passed ? "pass" : "fail");
  return result;
}

CommandResult cmd_converge(const RunConfig& config) {
  const auto seq = ParamSequence::from_name(config.rule);
  const auto f = function_from(config);
  const auto grid = Grid::uniform(config.grid);
  std::vector<int> ns = config.n_values;
  if (ns.empty()) {
    if (config.n_min < 1 || config.n_max < config.n_min) {
      throw std::invalid_argument("invalid n range " + std::to_string(config.n_min) + ".." +
                                  std::to_string(config.n_max));
    }
    for (int n = config.n_min; n <= config.n_max; ++n) ns.push_back(n);
  }
  const auto report = korovkin_experiment(seq, ns, grid, &f, config.threshold);

  CommandResult result;
  auto& t = result.table;
  t.params = header(config);
  t.params.emplace_back("rule", report.rule);
  t.params.emplace_back("rule_description", report.rule_description);
  t.params.emplace_back("function", f.name());
  t.params.emplace_back("grid", std::to_string(grid.resolution()));
  t.params.emplace_back("threshold", fmt(report.threshold));
  t.columns = {"n", "p_n", "q_n", "error_m0", "error_m1", "error_m2", "bound", "error_f"};
  for (const auto& r : report.rows) {
    t.rows.push_back({static_cast<double>(r.n), r.p, r.q, r.error_m0, r.error_m1, r.error_m2,
                      r.bound, r.error_f.value_or(std::nan(""))});
  }
  t.verdicts = {
      {"m0_m1_exact", yes_no(report.m0_m1_exact)},
      {"m2_within_bound", yes_no(report.m2_within_bound)},
      {"m2_decreasing", yes_no(report.m2_decreasing)},
      {"convergence", report.m2_below_threshold ? "convergence" : "no-convergence"},
  };
  result.checks_passed = report.m0_m1_exact && report.m2_within_bound;
  return result;
}

CommandResult cmd_trend(const RunConfig& config) {
  const auto kind = trend_kind_from_string(config.kind);
  const auto base = trend_base(config, kind);
  const auto variants = variants_from(config, kind, base);
  const auto f = function_from(config);
  const auto grid = Grid::uniform(config.grid);
  const auto report = trend_experiment(kind, f, grid, variants);

  CommandResult result;
  auto& t = result.table;
  t.params = header(config);
  t.params.emplace_back("kind", to_string(kind));
  t.params.emplace_back("function", f.name());
  t.params.emplace_back("grid", std::to_string(grid.resolution()));
  t.columns = {"n", "p", "q", "sup_error"};
  for (const auto& r : report.rows) {
    t.rows.push_back({static_cast<double>(r.variant.n), r.variant.p, r.variant.q, r.sup_error});
  }
  t.verdicts.emplace_back("weakly_decreasing", yes_no(report.weakly_decreasing));
  return result;
}

CommandResult cmd_figure(const RunConfig& config) {
  const auto kind = trend_kind_from_string(config.kind);
  const auto base = trend_base(config, kind);
  const auto variants = variants_from(config, kind, base);
  const auto f = function_from(config);
  const auto grid = Grid::uniform(config.grid);
  const auto report = trend_experiment(kind, f, grid, variants);

  CommandResult result;
  auto& t = result.table;
  t.params = header(config);
  t.params.emplace_back("figure", to_string(kind));
  t.params.emplace_back("function", f.name());
  t.params.emplace_back("grid", std::to_string(grid.resolution()));
  t.params.emplace_back("curves", std::to_string(report.rows.size() + 1));
  t.columns = {"x", "f"};

  std::vector<std::vector<double>> curves;
  for (const auto& r : report.rows) {
    const OperatorSpec spec(r.variant.n, PQParams(r.variant.p, r.variant.q));
    curves.push_back(operator_curve(spec, f, grid));
    t.columns.push_back(variant_label(r.variant));
  }
  const auto xs = grid.points();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<Cell> row{xs[i], f(xs[i])};
    for (const auto& c : curves) row.emplace_back(c[i]);
    t.rows.push_back(std::move(row));
  }
  for (const auto& r : report.rows) {
    t.verdicts.emplace_back("sup_error:" + variant_label(r.variant), fmt(r.sup_error));
  }
  t.verdicts.emplace_back("weakly_decreasing", yes_no(report.weakly_decreasing));
  return result;
}

// ---------------------------------------------------------------------------
// config file

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void apply_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '-', '_');
    try {
      if (key == "n") {
        config.n = std::stoi(value);
      } else if (key == "p") {
        config.p = std::stod(value);
      } else if (key == "q") {
        config.q = std::stod(value);
      } else if (key == "function") {
        config.function = value;
      } else if (key == "poly") {
        config.poly.clear();
        for (const auto& c : split_list(value)) config.poly.push_back(std::stod(c));
      } else if (key == "grid") {
        config.grid = std::stoi(value);
      } else if (key == "output") {
        config.output = value;
      } else if (key == "format") {
        if (value != "csv" && value != "json") throw std::invalid_argument("format: csv|json");
        config.format = value == "json" ? Format::json : Format::csv;
      } else if (key == "reproducible") {
        config.reproducible = parse_bool(value);
      } else if (key == "use_original") {
        config.use_original = parse_bool(value);
      } else if (key == "expect_defect") {
        config.expect_defect = parse_bool(value);
      } else if (key == "rule") {
        config.rule = value;
      } else if (key == "n_min") {
        config.n_min = std::stoi(value);
      } else if (key == "n_max") {
        config.n_max = std::stoi(value);
      } else if (key == "n_values") {
        config.n_values.clear();
        for (const auto& v : split_list(value)) config.n_values.push_back(std::stoi(v));
      } else if (key == "threshold") {
        config.threshold = std::stod(value);
      } else if (key == "kind" || key == "figure") {
        config.kind = value;
      } else if (key == "values") {
        config.values = split_list(value);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::logic_error& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// dispatch

namespace {

std::optional<std::string> find_config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return std::nullopt;
}

struct Overrides {
  int n = 0;
  double p = 0.0;
  double q = 0.0;
  std::string format;
  CLI::Option* n_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* q_opt = nullptr;
  CLI::Option* format_opt = nullptr;
};

void add_common(CLI::App& sub, RunConfig& config, Overrides& o, std::string& config_path) {
  o.n_opt = sub.add_option("--n", o.n, "Operator degree (1..200)");
  o.p_opt = sub.add_option("--p", o.p, "Parameter p, 0 < q < p <= 1");
  o.q_opt = sub.add_option("--q", o.q, "Parameter q, 0 < q < p <= 1");
  sub.add_option("--function", config.function, "Builtin target function");
  sub.add_option("--poly", config.poly, "Polynomial coefficients c0,c1,...")->delimiter(',');
  sub.add_option("--grid", config.grid, "Grid resolution (points)");
  sub.add_option("--output", config.output, "Output path (default stdout)");
  o.format_opt = sub.add_option("--format", o.format, "csv or json")
                     ->check(CLI::IsMember({"csv", "json"}));
  sub.add_flag("--reproducible", config.reproducible, "Omit the timestamp field");
  sub.add_option("--config", config_path, "key=value config file");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    if (auto path = find_config_path(argc, argv)) apply_config_file(*path, config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"(p,q)-Bernstein operator experiments"};
  app.require_subcommand(1);
  std::string config_path;

  struct Sub {
    const char* name;
    const char* help;
    CommandResult (*fn)(const RunConfig&);
  };
  const Sub subs[] = {
      {"eval", "Sample f and B(f;x) on a grid", cmd_eval},
      {"moments", "Compare B(t^m;x) with the closed forms, m = 0,1,2", cmd_moments},
      {"verify", "Run the invariant suite over an (n,p,q) lattice", cmd_verify},
      {"converge", "Korovkin experiment along a (p_n,q_n) rule", cmd_converge},
      {"trend", "Sup error across parameter variants", cmd_trend},
      {"figure", "Multi-curve figure data for the plots renderer", cmd_figure},
  };
  std::vector<Overrides> overrides(std::size(subs));
  std::vector<CLI::App*> apps;

  for (std::size_t i = 0; i < std::size(subs); ++i) {
    auto* sub = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(*sub, config, overrides[i], config_path);
    const std::string name = subs[i].name;
    if (name == "eval" || name == "verify") {
      sub->add_flag("--use-original", config.use_original, "Include the unnormalized operator");
    }
    if (name == "verify") {
      sub->add_flag("--expect-defect", config.expect_defect,
                    "With --use-original: pass iff the unnormalized operator fails B(1)=1");
    }
    if (name == "converge") {
      sub->add_option("--rule", config.rule, "half_harmonic | log_rule | constant(p,q)");
      sub->add_option("--n-min", config.n_min, "First degree");
      sub->add_option("--n-max", config.n_max, "Last degree");
      sub->add_option("--n-values", config.n_values, "Explicit degrees")->delimiter(',');
      sub->add_option("--threshold", config.threshold, "Convergence threshold for error_m2");
    }
    if (name == "trend" || name == "figure") {
      sub->add_option("--kind,--id", config.kind, "vary_q | vary_n | vary_pq");
      if (name == "figure") sub->add_option("figure_id", config.kind, "Figure id: vary_q, vary_n or vary_pq");
      sub->add_option("--values", config.values, "q's, n's, or p:q pairs")->delimiter(',');
    }
    apps.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::size_t chosen = 0;
  for (std::size_t i = 0; i < apps.size(); ++i) {
    if (apps[i]->parsed()) chosen = i;
  }
  const auto& o = overrides[chosen];
  if (o.n_opt->count() > 0) config.n = o.n;
  if (o.p_opt->count() > 0) config.p = o.p;
  if (o.q_opt->count() > 0) config.q = o.q;
  if (o.format_opt->count() > 0) config.format = o.format == "json" ? Format::json : Format::csv;
  config.command = subs[chosen].name;

  CommandResult result;
  try {
    result = subs[chosen].fn(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ostringstream buffer;
  if (config.format == Format::json) {
    write_json(result.table, buffer);
  } else {
    write_csv(result.table, buffer);
  }
  if (config.output.empty()) {
    out << buffer.str();
    out.flush();
  } else {
    std::ofstream file(config.output, std::ios::binary | std::ios::trunc);
    file << buffer.str();
    file.close();
    if (!file) {
      err << "error: cannot write " << config.output << '\n';
      return kExitUsage;
    }
  }
  if (!result.checks_passed) {
    err << config.command << ": one or more checks failed\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

}  // namespace pqb::cli

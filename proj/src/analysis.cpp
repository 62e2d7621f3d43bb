#include "pqbernstein/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "pqbernstein/kernels.hpp"

namespace pqb {

// ---------------------------------------------------------------------------
// Grid

Grid Grid::uniform(int resolution) {
  if (resolution < 2) {
    throw std::invalid_argument("grid resolution must be at least 2, got " +
                                std::to_string(resolution));
  }
  std::vector<double> points(static_cast<std::size_t>(resolution));
  const double last = resolution - 1;
  for (int i = 0; i < resolution; ++i) points[i] = i / last;
  return Grid(std::move(points));
}

Grid Grid::from_points(std::vector<double> points) {
  if (points.size() < 2 || points.front() != 0.0 || points.back() != 1.0) {
    throw std::invalid_argument("grid must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i] > points[i - 1])) {
      throw std::invalid_argument("grid points must be strictly increasing");
    }
  }
  return Grid(std::move(points));
}

// ---------------------------------------------------------------------------
// ParamSequence

ParamSequence ParamSequence::half_harmonic() {
  return {"half_harmonic", "p_n = 1 - 1/(2n), q_n = 1 - 1/n", [](int n) {
            return std::pair{1.0 - 1.0 / (2.0 * n), 1.0 - 1.0 / n};
          }};
}

ParamSequence ParamSequence::log_rule() {
  return {"log_rule", "p_n = 1 - 1/(n ln(n+2)), q_n = 1 - 2/(n ln(n+2))", [](int n) {
            const double scale = n * std::log(n + 2.0);
            return std::pair{1.0 - 1.0 / scale, 1.0 - 2.0 / scale};
          }};
}

ParamSequence ParamSequence::constant(double p, double q) {
  PQParams checked(p, q);
  char buf[96];
  std::snprintf(buf, sizeof buf, "constant(%.17g,%.17g)", p, q);
  return {buf, "p_n = p, q_n = q for all n (negative control)",
          [checked](int) { return std::pair{checked.p(), checked.q()}; }};
}

ParamSequence ParamSequence::from_name(const std::string& name) {
  if (name == "half_harmonic") return half_harmonic();
  if (name == "log_rule") return log_rule();
  if (name.starts_with("constant(") && name.ends_with(")")) {
    const std::string inner = name.substr(9, name.size() - 10);
    const auto comma = inner.find(',');
    if (comma != std::string::npos) {
      std::size_t used_p = 0;
      std::size_t used_q = 0;
      try {
        const std::string ps = inner.substr(0, comma);
        const std::string qs = inner.substr(comma + 1);
        const double p = std::stod(ps, &used_p);
        const double q = std::stod(qs, &used_q);
        if (used_p == ps.size() && used_q == qs.size()) return constant(p, q);
      } catch (const std::logic_error&) {
        // fall through to the generic message
      }
    }
  }
  throw std::invalid_argument("unknown sequence rule '" + name +
                              "'; known: half_harmonic, log_rule, constant(p,q)");
}

PQParams ParamSequence::at(int n) const {
  if (n < 1) throw std::invalid_argument("sequence index must be positive");
  const auto [p, q] = rule_(n);
  try {
    return PQParams(p, q);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("rule " + name_ + " at n = " + std::to_string(n) + ": " +
                                e.what());
  }
}

// ---------------------------------------------------------------------------
// Curves and errors

std::vector<double> operator_curve(const OperatorSpec& spec, const TargetFunction& f,
                                   const Grid& grid, OperatorForm form, Execution exec) {
  const PreparedOperator op(spec, form);
  const auto samples = op.sample(f);
  std::vector<double> out(grid.points().size());
  if (exec == Execution::parallel) {
    kernels::evaluate_parallel(op, samples, grid.points(), out);
  } else {
    kernels::evaluate_serial(op, samples, grid.points(), out);
  }
  return out;
}

namespace {

std::vector<double> tabulate(const TargetFunction& f, const Grid& grid, Execution exec) {
  std::vector<double> out(grid.points().size());
  if (exec == Execution::parallel) {
    kernels::tabulate_parallel(f, grid.points(), out);
  } else {
    kernels::tabulate_serial(f, grid.points(), out);
  }
  return out;
}

double max_diff(std::span<const double> a, std::span<const double> b, Execution exec) {
  return exec == Execution::parallel ? kernels::max_abs_difference_parallel(a, b)
                                     : kernels::max_abs_difference_serial(a, b);
}

}  // namespace

double sup_error(const OperatorSpec& spec, const TargetFunction& f, const Grid& grid,
                 Execution exec) {
  const auto approx = operator_curve(spec, f, grid, OperatorForm::revised, exec);
  const auto exact = tabulate(f, grid, exec);
  return max_diff(approx, exact, exec);
}

double second_moment_bound(const OperatorSpec& spec) {
  // 2 p^{n-1}/[n] written without p^{n-1} so it survives small p.
  return 2.0 / pq_integer_scaled(spec.degree(), spec.params());
}

double second_moment_error_closed_form(const OperatorSpec& spec, const Grid& grid) {
  double peak = 0.0;
  for (double x : grid.points()) peak = std::max(peak, x - x * x);
  return peak / pq_integer_scaled(spec.degree(), spec.params());
}

std::vector<CurveSample> curve_samples(const OperatorSpec& spec, const TargetFunction& f,
                                       const Grid& grid, bool with_original, Execution exec) {
  const auto b = operator_curve(spec, f, grid, OperatorForm::revised, exec);
  const auto fx = tabulate(f, grid, exec);
  std::vector<double> b_orig;
  if (with_original) b_orig = operator_curve(spec, f, grid, OperatorForm::original, exec);

  std::vector<CurveSample> out(b.size());
  const auto xs = grid.points();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {xs[i], fx[i], b[i], std::nullopt};
    if (with_original) out[i].b_original = b_orig[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiments

KorovkinReport korovkin_experiment(const ParamSequence& seq, std::span<const int> n_values,
                                   const Grid& grid, const TargetFunction* f, double threshold,
                                   Execution exec) {
  if (n_values.empty()) throw std::invalid_argument("korovkin_experiment: empty n range");

  KorovkinReport report;
  report.rule = seq.name();
  report.rule_description = seq.description();
  report.threshold = threshold;
  if (f != nullptr) report.function = f->name();

  const auto m0 = TargetFunction::monomial(0);
  const auto m1 = TargetFunction::monomial(1);
  const auto m2 = TargetFunction::monomial(2);

  for (int n : n_values) {
    const OperatorSpec spec(n, seq.at(n));
    KorovkinRow row;
    row.n = n;
    row.p = spec.params().p();
    row.q = spec.params().q();
    row.error_m0 = sup_error(spec, m0, grid, exec);
    row.error_m1 = sup_error(spec, m1, grid, exec);
    row.error_m2 = sup_error(spec, m2, grid, exec);
    row.bound = second_moment_bound(spec);
    if (f != nullptr) row.error_f = sup_error(spec, *f, grid, exec);

    report.m0_m1_exact = report.m0_m1_exact && row.error_m0 <= kExactTolerance &&
                         row.error_m1 <= kExactTolerance;
    report.m2_within_bound = report.m2_within_bound && row.error_m2 <= row.bound + kBoundSlack;
    if (!report.rows.empty()) {
      report.m2_decreasing = report.m2_decreasing && row.error_m2 < report.rows.back().error_m2;
    }
    report.rows.push_back(row);
  }
  report.m2_below_threshold = report.rows.back().error_m2 <= threshold;
  return report;
}

std::string to_string(TrendKind kind) {
  switch (kind) {
    case TrendKind::vary_q:
      return "vary_q";
    case TrendKind::vary_n:
      return "vary_n";
    case TrendKind::vary_pq:
      return "vary_pq";
  }
  return "unknown";
}

TrendKind trend_kind_from_string(const std::string& id) {
  if (id == "vary_q") return TrendKind::vary_q;
  if (id == "vary_n") return TrendKind::vary_n;
  if (id == "vary_pq") return TrendKind::vary_pq;
  throw std::invalid_argument("unknown figure id '" + id + "'; known: vary_q, vary_n, vary_pq");
}

std::vector<TrendVariant> vary_q(const OperatorSpec& base, std::span<const double> qs) {
  std::vector<TrendVariant> out;
  for (double q : qs) out.push_back({base.degree(), base.params().p(), q});
  return out;
}

std::vector<TrendVariant> vary_n(const OperatorSpec& base, std::span<const int> ns) {
  std::vector<TrendVariant> out;
  for (int n : ns) out.push_back({n, base.params().p(), base.params().q()});
  return out;
}

std::vector<TrendVariant> vary_pq(const OperatorSpec& base,
                                  std::span<const std::pair<double, double>> pqs) {
  std::vector<TrendVariant> out;
  for (const auto& [p, q] : pqs) out.push_back({base.degree(), p, q});
  return out;
}

TrendDefaults default_trend(TrendKind kind) {
  switch (kind) {
    case TrendKind::vary_q: {
      const OperatorSpec base(10, PQParams(0.95, 0.9));
      const double qs[] = {0.5, 0.7, 0.9, 0.94};
      return {base, vary_q(base, qs)};
    }
    case TrendKind::vary_n: {
      const OperatorSpec base(10, PQParams(0.98, 0.95));
      const int ns[] = {5, 10, 20, 40};
      return {base, vary_n(base, ns)};
    }
    case TrendKind::vary_pq: {
      const OperatorSpec base(10, PQParams(0.95, 0.9));
      const std::pair<double, double> pqs[] = {
          {0.9, 0.85}, {0.95, 0.9}, {0.98, 0.95}, {0.995, 0.99}};
      return {base, vary_pq(base, pqs)};
    }
  }
  throw std::invalid_argument("unknown trend kind");
}

TrendReport trend_experiment(TrendKind kind, const TargetFunction& f, const Grid& grid,
                             std::span<const TrendVariant> variants, Execution exec) {
  if (variants.empty()) throw std::invalid_argument("trend_experiment: empty variant list");

  TrendReport report;
  report.kind = kind;
  report.function = f.name();
  for (const auto& v : variants) {
    const OperatorSpec spec(v.n, PQParams(v.p, v.q));
    report.rows.push_back({v, sup_error(spec, f, grid, exec)});
  }

  auto key = [kind](const TrendRow& row) {
    switch (kind) {
      case TrendKind::vary_q:
        return row.variant.q;
      case TrendKind::vary_n:
        return static_cast<double>(row.variant.n);
      case TrendKind::vary_pq:
        return row.variant.p + row.variant.q;
    }
    return 0.0;
  };
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [&](const TrendRow& a, const TrendRow& b) { return key(a) < key(b); });

  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (report.rows[i].sup_error > report.rows[i - 1].sup_error + kTrendSlack) {
      report.weakly_decreasing = false;
    }
  }
  return report;
}

}  // namespace pqb

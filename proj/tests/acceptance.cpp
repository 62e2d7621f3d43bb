// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed here and nowhere else.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "pqbernstein/analysis.hpp"
#include "pqbernstein/bernstein.hpp"
#include "pqbernstein/pq_calculus.hpp"
#include "pqbernstein/target_function.hpp"
#include "test_support.hpp"

using namespace pqb;
namespace oracle = pqb::testing::oracle;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string description;
  double time_limit_s;  // 0: no limit
  std::function<Outcome()> run;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double rel(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Shared sampler for the first two criteria: 1000 (n <= 50, p, q, x).
struct Sample {
  OperatorSpec spec;
  double x;
};

std::vector<Sample> lemma_samples() {
  auto rng = pqb::testing::make_rng(20240101);
  std::vector<Sample> out;
  for (int i = 0; i < 1000; ++i) {
    const int n = pqb::testing::uniform_int(rng, 1, 50);
    const auto pq = pqb::testing::random_params(rng);
    out.push_back({OperatorSpec(n, pq), pqb::testing::uniform(rng, 0.0, 1.0)});
  }
  return out;
}

Outcome lemma_constant() {
  const auto one = TargetFunction::monomial(0);
  double worst = 0.0;
  for (const auto& s : lemma_samples()) {
    worst = std::max(worst, std::abs(apply_operator(s.spec, one, s.x) - 1.0));
  }
  return {worst <= 1e-12, "max |B(1;x)-1| = " + sci(worst) + " (tol 1e-12)"};
}

Outcome lemma_identity() {
  const auto t = TargetFunction::monomial(1);
  double worst = 0.0;
  for (const auto& s : lemma_samples()) {
    worst = std::max(worst, std::abs(apply_operator(s.spec, t, s.x) - s.x));
  }
  return {worst <= 1e-12, "max |B(t;x)-x| = " + sci(worst) + " (tol 1e-12)"};
}

Outcome lemma_second_moment() {
  auto rng = pqb::testing::make_rng(20240102);
  const auto t2 = TargetFunction::monomial(2);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int n = pqb::testing::uniform_int(rng, 1, 100);
    const auto pq = pqb::testing::random_params(rng);
    const OperatorSpec spec(n, pq);
    const double in = pq_integer(n, pq);
    const double a = std::pow(pq.p(), n - 1) / in;
    const double b = pq.q() * pq_integer(n - 1, pq) / in;
    for (int j = 0; j <= 10; ++j) {
      const double x = j / 10.0;
      worst = std::max(worst, std::abs(apply_operator(spec, t2, x) - (a * x + b * x * x)));
    }
  }
  return {worst <= 1e-11, "max |B(t^2;x) - closed form| = " + sci(worst) + " (tol 1e-11)"};
}

Outcome proof_identity() {
  double worst = 0.0;  // relative to [n]
  for (double p : {0.6, 0.8, 0.95, 1.0 - 1e-9}) {
    const PQParams pq(p, 0.9 * p);
    for (int n = 1; n <= 60; ++n) {
      const double residual = second_moment_identity_check(OperatorSpec(n, pq));
      worst = std::max(worst, residual / pq_integer(n, pq));
    }
  }
  return {worst <= 1e-13, "max |q[n-1] - ([n] - p^{n-1})| / [n] = " + sci(worst) + " (tol 1e-13)"};
}

Outcome second_moment_bound_check() {
  auto rng = pqb::testing::make_rng(20240103);
  const auto grid = Grid::uniform();
  const auto t2 = TargetFunction::monomial(2);
  double worst_excess = -1.0;
  double worst_mismatch = 0.0;
  for (int i = 0; i < 500; ++i) {
    const OperatorSpec spec(pqb::testing::uniform_int(rng, 1, 100),
                            pqb::testing::random_params(rng));
    const double measured = sup_error(spec, t2, grid);
    worst_excess = std::max(worst_excess, measured - second_moment_bound(spec));
    worst_mismatch =
        std::max(worst_mismatch, std::abs(measured - second_moment_error_closed_form(spec, grid)));
  }
  const bool pass = worst_excess <= 1e-12 && worst_mismatch <= 1e-11;
  return {pass, "max(sup err - bound) = " + sci(worst_excess) +
                    " (tol 1e-12); max |sup err - analytic| = " + sci(worst_mismatch) +
                    " (tol 1e-11)"};
}

Outcome korovkin_convergence() {
  const int ns[] = {10, 50, 100, 200};
  const auto report = korovkin_experiment(ParamSequence::half_harmonic(), ns, Grid::uniform());
  bool decreasing = true;
  std::string errors;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    if (i > 0 && !(report.rows[i].error_m2 < report.rows[i - 1].error_m2)) decreasing = false;
    errors += (i ? ", " : "") + sci(report.rows[i].error_m2);
  }
  const double last = report.rows.back().error_m2;
  return {last <= 0.01 && decreasing,
          "m=2 sup errors at n=10,50,100,200: " + errors + " (n=200 tol 0.01, strictly decreasing)"};
}

Outcome negative_control() {
  const double err =
      sup_error(OperatorSpec(200, PQParams(0.9, 0.8)), TargetFunction::monomial(2), Grid::uniform());
  return {err >= 0.01, "m=2 sup error at n=200 = " + sci(err) + " (must be >= 0.01)"};
}

Outcome corrigendum_defect() {
  const OperatorSpec spec(2, PQParams(0.5, 0.25));
  const auto one = TargetFunction::monomial(0);
  const double original = apply_operator_original(spec, one, 0.0);
  const double revised = apply_operator(spec, one, 0.0);
  const bool pass = std::abs(original - 0.5) <= 1e-15 && std::abs(revised - 1.0) <= 1e-15;
  return {pass, "unnormalized B(1;0) = " + std::to_string(original) +
                    ", normalized B(1;0) = " + std::to_string(revised)};
}

Outcome q_bernstein_reduction() {
  auto rng = pqb::testing::make_rng(20240104);
  const auto cubic = TargetFunction::builtin("paper_cubic");
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int n = pqb::testing::uniform_int(rng, 1, 30);
    const double q = pqb::testing::uniform(rng, 0.01, 0.999);
    const double x = pqb::testing::uniform(rng, 0.0, 1.0);
    const double ours = apply_operator(OperatorSpec(n, PQParams(1.0, q)), cubic, x);
    worst = std::max(worst, std::abs(ours - oracle::q_bernstein(n, q, cubic, x)));
  }
  return {worst <= 1e-12, "max |B_{n,1,q} - q-Bernstein| = " + sci(worst) + " (tol 1e-12)"};
}

Outcome binomial_oracle() {
  const double ps[] = {0.2, 0.5, 0.7, 0.9, 1.0};
  const double ratios[] = {0.1, 0.3, 0.5, 0.7, 0.95};
  double worst = 0.0;
  double worst_sym = 0.0;
  for (double p : ps) {
    for (double r : ratios) {
      const PQParams pq(p, p * r);
      for (int n = 0; n <= 12; ++n) {
        for (int k = 0; k <= n; ++k) {
          const double c = pq_binomial(n, k, pq);
          worst = std::max(worst, rel(c, pq_binomial_oracle(n, k, pq)));
          worst_sym = std::max(worst_sym, rel(c, pq_binomial(n, n - k, pq)));
        }
      }
    }
  }
  return {worst <= 1e-12 && worst_sym <= 1e-12,
          "max rel diff vs factorial ratio = " + sci(worst) + ", symmetry = " + sci(worst_sym) +
              " (tol 1e-12)"};
}

Outcome figure_trend() {
  const auto cubic = TargetFunction::builtin("paper_cubic");
  const OperatorSpec base(10, PQParams(0.95, 0.9));
  const double qs[] = {0.5, 0.7, 0.9, 0.94};
  const auto report = trend_experiment(TrendKind::vary_q, cubic, Grid::uniform(), vary_q(base, qs));
  std::string errors;
  bool weakly = true;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    if (i > 0 && report.rows[i].sup_error > report.rows[i - 1].sup_error + kTrendSlack) {
      weakly = false;
    }
    errors += (i ? ", " : "") + sci(report.rows[i].sup_error);
  }
  return {weakly && report.weakly_decreasing, "sup errors for q=0.5,0.7,0.9,0.94: " + errors};
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), got);
  status = pclose(pipe.release());
  return out;
}

Outcome cli_determinism() {
  const std::string cmd = std::string(PQBERN_EXE) + " converge --rule half_harmonic --n-max 60 "
                          "--reproducible";
  int s1 = 0;
  int s2 = 0;
  const auto a = capture(cmd, s1);
  const auto b = capture(cmd, s2);
  const bool pass = s1 == 0 && s2 == 0 && !a.empty() && a == b;
  return {pass, std::to_string(a.size()) + " bytes, exit " + std::to_string(s1) + "/" +
                    std::to_string(s2) + (a == b ? ", identical" : ", DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"A01", "B(1;x) = 1 on 1000 random samples", 5.0, lemma_constant},
      {"A02", "B(t;x) = x on 1000 random samples", 0.0, lemma_identity},
      {"A03", "B(t^2;x) closed form on 500 specs x 11 points", 0.0, lemma_second_moment},
      {"A04", "q[n-1] = [n] - p^{n-1} on the lattice", 0.0, proof_identity},
      {"A05", "second-moment sup error within 2p^{n-1}/[n]", 0.0, second_moment_bound_check},
      {"A06", "Korovkin convergence with p_n=1-1/(2n), q_n=1-1/n", 10.0, korovkin_convergence},
      {"A07", "no convergence for constant (p,q) = (0.9,0.8)", 0.0, negative_control},
      {"A08", "unnormalized operator misses B(1;0) = 1", 0.0, corrigendum_defect},
      {"A09", "p = 1 reduces to the q-Bernstein operator", 0.0, q_bernstein_reduction},
      {"A10", "recurrence binomials match factorial ratios", 0.0, binomial_oracle},
      {"A11", "sup error weakly decreasing in q (paper_cubic)", 0.0, figure_trend},
      {"A12", "converge --reproducible is byte-identical", 0.0, cli_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && seconds > c.time_limit_s) {
      outcome.pass = false;
      outcome.detail += "; exceeded time limit " + std::to_string(c.time_limit_s) + " s";
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3fs", seconds);
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.description << " -- "
              << outcome.detail << " [" << timing << "]\n";
    if (!outcome.pass) ++failures;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}

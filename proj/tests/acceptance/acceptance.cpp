// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "rpwalk/experiment.hpp"
#include "rpwalk/graded_poly.hpp"
#include "rpwalk/rough_metrics.hpp"

using namespace rpwalk;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o) {
  std::printf("%s criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

// Every check whose name starts with `prefix`; all must pass and at least one must exist.
Outcome checks_with_prefix(const ExperimentReport& r, const std::string& prefix, std::string* worst = nullptr) {
  int seen = 0;
  bool ok = true;
  double worst_value = -1e300;
  for (const auto& c : r.checks) {
    if (c.name.rfind(prefix, 0) != 0) continue;
    ++seen;
    ok = ok && c.pass;
    worst_value = std::max(worst_value, c.value);
  }
  if (worst) *worst = num(worst_value);
  return {ok && seen > 0, std::to_string(seen) + " checks '" + prefix + "...'"};
}

const Check* find(const ExperimentReport& r, const std::string& prefix) {
  for (const auto& c : r.checks)
    if (c.name.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}

Outcome algebraic_core() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> dd(1, 3), nn(1, 4), steps(1, 8);
  std::uniform_real_distribution<double> u(-1.0, 1.0), lam(-2.0, 2.0), tt(0.0, 1.0);
  auto random_lie = [&](int d, int N) {
    LieElement a(d, N);
    for (int m = 1; m <= N; ++m)
      for (auto& x : a.level(m)) x = u(rng);
    return a;
  };
  double worst[4] = {0, 0, 0, 0};
  const int cases = 1000;
  for (int i = 0; i < cases; ++i) {
    const int d = dd(rng), N = nn(rng);
    const auto x = exp(random_lie(d, N)), y = exp(random_lie(d, N)), z = exp(random_lie(d, N));
    worst[0] = std::max(worst[0], max_abs_diff((x * y) * z, x * (y * z)));
    const auto a = random_lie(d, N);
    worst[1] = std::max({worst[1], max_abs_diff(log(exp(a)), a), max_abs_diff(exp(log(x)), x)});
    const double l = lam(rng);
    worst[2] = std::max(worst[2], max_abs_diff(dilate(l, x * y), dilate(l, x) * dilate(l, y)));
    const int n = steps(rng);
    std::vector<double> samples(static_cast<std::size_t>((n + 1) * d));
    for (auto& s : samples) s = u(rng);
    const auto path = lift_linear_chords(samples, d, N);
    double ts[3] = {tt(rng), tt(rng), tt(rng)};
    std::sort(ts, ts + 3);
    worst[3] = std::max(worst[3], max_abs_diff(increment(path, ts[0], ts[2]),
                                               increment(path, ts[0], ts[1]) * increment(path, ts[1], ts[2])));
  }
  const double secs = seconds_since(t0);
  const double w = std::max({worst[0], worst[1], worst[2], worst[3]});
  return {w <= 1e-10 && secs < 10.0,
          "1000 cases each; max errors assoc " + num(worst[0]) + ", exp/log " + num(worst[1]) + ", dilation " +
              num(worst[2]) + ", Chen " + num(worst[3]) + "; " + num(secs) + " s (limit 10 s)"};
}

Outcome step3_machinery() {
  const auto t0 = Clock::now();
  const auto r = run_experiment(default_config(ExperimentKind::symbolic_audit));
  const double secs = seconds_since(t0);
  const auto* deg = find(r, "degree(TP)");
  const auto* mom = find(r, "walk_moment equals");
  const auto* quartic = find(r, "d=1 Rademacher quartic");
  const bool ok = deg && mom && quartic && deg->pass && mom->pass && quartic->pass && secs < 60.0;
  return {ok, (deg ? deg->name : "missing degree check") + "; " + (mom ? mom->name : "missing moment check") +
                  "; quartic 3k^2-2k " + (quartic && quartic->pass ? "ok" : "wrong") + "; " + num(secs) +
                  " s (limit 60 s)"};
}

Outcome exponent_calculus() {
  const auto a = tightness_exponents(4.0, 2), b = tightness_exponents(5.0, 2);
  bool cutoff = true;
  for (int N = 2; N <= 4; ++N)
    for (int i = 5; i <= 64; ++i) {
      const double p = i / 8.0 + 0.5;
      cutoff = cutoff && tightness_exponents(p, N).rough_path_admissible == (p >= 4.0);
    }
  const bool ok = a.q0 == 4 && b.p_star == 4 && a.alpha_star_exact == make_rational(3, 8) && cutoff;
  return {ok, "q0(4,2)=" + std::to_string(a.q0) + ", p*(5)=" + std::to_string(b.p_star) +
                  ", alpha*(4)=" + to_string(a.alpha_star_exact) + ", cutoff p>=4 for N=2,3,4 " +
                  (cutoff ? "exact" : "wrong")};
}

Outcome moment_scaling() {
  const auto t0 = Clock::now();
  const auto r = run_experiment(default_config(ExperimentKind::moment_scaling));
  const double secs = seconds_since(t0);
  const double slope = r.results["fit"]["slope"].get<double>();
  return {slope >= 1.8 && slope <= 2.2 && secs < 120.0,
          "slope " + num(slope) + " (target [1.8, 2.2]); " + num(secs) + " s (limit 120 s)"};
}

Outcome levy_area() {
  const auto t0 = Clock::now();
  const auto r = run_experiment(default_config(ExperimentKind::levy_area));
  const double secs = seconds_since(t0);
  std::string worst;
  auto o = checks_with_prefix(r, "gap to Brownian area oracle", &worst);
  o.pass = o.pass && secs < 300.0;
  o.detail += ", worst " + worst + " combined SE (limit 3); " + num(secs) + " s (limit 300 s)";
  return o;
}

Outcome holder_bracket() {
  const auto t0 = Clock::now();
  const auto r = run_experiment(default_config(ExperimentKind::holder_threshold));
  const double secs = seconds_since(t0);
  const auto* stable = find(r, "alpha=0.45: quantiles stable");
  const auto* grow = find(r, "alpha=0.75: quantiles grow");
  const bool ok = stable && grow && stable->pass && grow->pass && secs < 600.0;
  return {ok, std::string("alpha=0.45 max relative deviation ") + (stable ? num(stable->value) : "missing") +
                  " (limit 0.10); alpha=0.75 slope z " + (grow ? num(grow->value) : "missing") +
                  " (limit >= 3); " + num(secs) + " s (limit 600 s)"};
}

Outcome wong_zakai() {
  const auto t0 = Clock::now();
  const auto r = run_experiment(default_config(ExperimentKind::wong_zakai));
  const double secs = seconds_since(t0);
  std::string worst;
  auto o = checks_with_prefix(r, "gap for sigmoid", &worst);
  o.pass = o.pass && secs < 600.0;
  o.detail += ", worst " + worst + " combined SE (limit 3); " + num(secs) + " s (limit 600 s)";
  return o;
}

// Identical config and seed, run twice; bodies must match byte for byte.
Outcome determinism() {
  int identical = 0, total = 0;
  std::string mismatched;
  for (auto k : all_experiments()) {
    auto c = default_config(k);
    c.replicas = std::min<std::int64_t>(c.replicas, 640);
    c.oracle_replicas = 1280;
    c.oracle_steps = 512;
    if (k == ExperimentKind::holder_threshold) c.n_schedule = {64, 128, 256};
    if (k == ExperimentKind::symbolic_audit) c.replicas = 200;
    const auto a = run_experiment(c).body().dump();
    const auto b = run_experiment(c).body().dump();
    c.threads = 2;
    const auto t = run_experiment(c).body().dump();
    ++total;
    if (a == b && a == t)
      ++identical;
    else
      mismatched += std::string(" ") + std::string(to_string(k));
  }
  return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                  " experiments reproduce identical bodies (1 and 2 threads)" +
                                  (mismatched.empty() ? "" : "; differ:" + mismatched)};
}

void run(int id, const std::string& title, const std::function<Outcome()>& f) {
  try {
    report(id, title, f());
  } catch (const std::exception& e) {
    report(id, title, {false, std::string("exception: ") + e.what()});
  }
}

}  // namespace

int main() {
  run(1, "algebraic core", algebraic_core);
  run(2, "exact moment machinery", step3_machinery);
  run(3, "exponent calculus", exponent_calculus);
  run(4, "moment scaling slope", moment_scaling);
  run(5, "Levy area law", levy_area);
  run(6, "Hoelder tightness bracket", holder_bracket);
  run(7, "Wong-Zakai", wong_zakai);
  run(8, "determinism", determinism);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures ? 1 : 0;
}

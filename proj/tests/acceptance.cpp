// Acceptance runner: one PASS/FAIL line per criterion, thresholds pinned here.
//
//   acceptance          run every criterion
//   acceptance 3 5      run the listed criteria only
//
// Exit status is 0 only when every selected criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sopt/calibration.hpp"
#include "sopt/gallery.hpp"
#include "sopt/resources.hpp"
#include "sopt/sampling.hpp"
#include "sopt/transformers.hpp"

using namespace sopt;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
  std::function<Outcome()> body;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string zeros(Natural n) { return std::string(n, '0'); }

constexpr Natural kBigFuel = 1'000'000'000;
const UniPoly kGenerous({64, 128, 64});  // 64 (x+1)^2

std::vector<Oracle> reg_tables(std::uint64_t seed, std::size_t count) {
  sampling::Rng rng(seed);
  std::vector<Oracle> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampling::random_reg_table(rng));
  return out;
}

Oracle echo_plus_one() {
  return Oracle::adaptive([](std::string_view q, const Oracle::Entries&) { return std::string(q) + "1"; });
}

// 1 -------------------------------------------------------------------------
Outcome majorant_suite() {
  constexpr int kSamples = 10'000;
  sampling::Rng rng(1001);
  int failures = 0;
  for (int i = 0; i < kSamples; ++i) {
    const auto t = sampling::random_description(rng, {4, 2, 3, 2, 3});
    const auto l = sampling::random_length_fn(rng, {16, 64, false, 0});
    const Natural n = sampling::uniform(rng, 0, 16);
    if (!check_majorant_bound(t, l, n).pass) ++failures;
  }
  return {failures == 0, fmt("%d samples, %d failures", kSamples, failures)};
}

// 2 -------------------------------------------------------------------------
Outcome composition_suite() {
  constexpr int kPairs = 1000;
  sampling::Rng rng(1002);
  auto sample_l = [&] { return sampling::random_length_fn(rng, {16, 16, false, 0}); };
  int second_bad = 0, function_bad = 0;
  for (int i = 0; i < kPairs; ++i) {
    const auto p = sampling::random_description(rng, {3, 2, 2, 2, 2});
    const auto q = sampling::random_description(rng, {3, 2, 2, 2, 2});
    const auto r = subst_second_arg(p, q);
    const auto l = sample_l();
    const Natural n = sampling::uniform(rng, 0, 4);
    if (eval_description(r, l, n) != eval_description(p, l, eval_description(q, l, n))) ++second_bad;
  }
  for (int i = 0; i < kPairs; ++i) {
    const auto p = sampling::random_description(rng, {2, 2, 2, 2, 2});
    const auto q = sampling::random_description(rng, {3, 2, 2, 1, 2});
    const auto r = subst_function_arg(p, q);
    const auto l = sample_l();
    const Natural n = sampling::uniform(rng, 0, 4);
    const auto q_of_l = [&](Natural m) { return eval_description(q, l, m); };
    if (eval_description(r, l, n) != eval_with(p, q_of_l, n)) ++function_bad;
  }
  return {second_bad == 0 && function_bad == 0,
          fmt("%d pairs each; second-argument mismatches %d, function-argument mismatches %d", kPairs, second_bad,
              function_bad)};
}

// 3 -------------------------------------------------------------------------
Outcome iterated_apply_values() {
  const Machine m = gallery::iterated_apply_machine();
  int bad = 0;
  Natural last_time = 0;
  for (std::size_t k = 0; k <= 10; ++k) {
    const auto r = run(m, Oracle::doubling(), zeros(k));
    if (!r.halted() || r.output != zeros(Natural{1} << k) || r.trace.time < (Natural{1} << k)) ++bad;
    last_time = r.trace.time;
  }
  return {bad == 0, fmt("k = 0..10, %d mismatches, time at k=10: %llu", bad, (unsigned long long)last_time)};
}

// 4 -------------------------------------------------------------------------
Outcome step_count_and_revisions() {
  const Machine ia = gallery::iterated_apply_machine();
  const auto oracles = calibration::mixed_oracles(1004, 195);
  sampling::Rng rng(1005);
  int pairs = 0, step_fail = 0;
  for (const auto& o : oracles)
    for (int j = 0; j < 6; ++j) {
      const std::size_t len = sampling::uniform(rng, 0, o.kind() == Oracle::Kind::Pattern ? 8 : 12);
      const auto r = run(ia, o, sampling::random_bits(rng, len));
      ++pairs;
      if (!check_step_count(r.trace, *ia.bounds.step_count).pass()) ++step_fail;
    }
  int flr_fail = 0;
  const Machine ml = gallery::max_length_machine();
  for (Natural N = 0; N <= 8; ++N)
    if (!gallery::flr_stress(ml, N).exceeded) ++flr_fail;
  return {pairs >= 1000 && step_fail == 0 && flr_fail == 0,
          fmt("%d pairs, %d step-count failures; finite-revision stress N=0..8: %d without overflow", pairs, step_fail,
              flr_fail)};
}

// 5 -------------------------------------------------------------------------
Outcome clocking_soundness() {
  const Machine ml = gallery::max_length_machine();
  sampling::Rng rng(1006);
  const auto regs = reg_tables(1007, 1000);
  struct Config {
    Natural N;
    UniPoly p;
  };
  int runs = 0, guarantee_fail = 0, in_budget = 0, disagree = 0;
  for (const Config& cfg : {Config{10, kGenerous}, Config{2, UniPoly({40, 40})}}) {
    const Machine c = clock_finite_revision(ml, cfg.N, cfg.p);
    auto guarantees = [&](const Trace& tr) {
      ++runs;
      if (!tr.halted || count_revisions(tr).strict_increases > cfg.N + 1 ||
          !check_step_count(tr, *c.bounds.step_count).pass())
        ++guarantee_fail;
    };
    for (const auto& o : regs) {
      const std::string a = sampling::random_bits(rng, sampling::uniform(rng, 0, 6));
      const auto clocked = run(c, o, a);
      guarantees(clocked.trace);
      const auto plain = run(ml, o, a);
      if (respects_clock(plain.trace, cfg.N, cfg.p)) {
        ++in_budget;
        if (clocked.output != plain.output) ++disagree;
      }
    }
    for (Natural k = 0; k <= 8; ++k) guarantees(gallery::flr_stress(c, k).run.trace);
    for (const char* a : {"", "0", "0110"}) {
      Oracle echo = echo_plus_one();
      guarantees(run(c, echo, a).trace);
    }
  }
  return {guarantee_fail == 0 && disagree == 0 && in_budget >= 1000,
          fmt("%d clocked runs, %d guarantee failures; %d in-budget reg samples, %d disagreements", runs,
              guarantee_fail, in_budget, disagree)};
}

// 6 -------------------------------------------------------------------------
Outcome majorant_clock() {
  const Machine ml = gallery::max_length_machine();
  const Machine c = clock_with_majorant(ml, *ml.bounds.running_time);
  sampling::Rng rng(1008);
  int disagree = 0, not_bounded = 0, runs = 0, guarantee_fail = 0;
  auto guarantees = [&](const Trace& tr) {
    ++runs;
    if (!tr.halted || count_revisions(tr).strict_increases > *c.bounds.revisions ||
        !check_step_count(tr, *c.bounds.step_count).pass())
      ++guarantee_fail;
  };
  for (const auto& o : reg_tables(1009, 1000)) {
    const std::string a = sampling::random_bits(rng, sampling::uniform(rng, 0, 6));
    const auto plain = run(ml, o, a);
    if (!check_running_time(plain.trace, *ml.bounds.running_time, length_fn_of(o)).pass()) ++not_bounded;
    const auto clocked = run(c, o, a);
    guarantees(clocked.trace);
    if (clocked.output != plain.output) ++disagree;
  }
  sampling::Rng adv(1010);
  for (int i = 0; i < 200; ++i) guarantees(run(c, sampling::random_table(adv), zeros(sampling::uniform(adv, 0, 5))).trace);
  for (Natural k = 0; k <= 6; ++k) guarantees(gallery::flr_stress(c, k).run.trace);
  Oracle echo = echo_plus_one();
  guarantees(run(c, echo, "", kBigFuel).trace);
  return {disagree == 0 && not_bounded == 0 && guarantee_fail == 0,
          fmt("1000 reg oracles: %d disagreements, %d outside the frozen bound; %d clocked runs on all oracles, %d "
              "guarantee failures (revisions <= %llu)",
              disagree, not_bounded, runs, guarantee_fail, (unsigned long long)*c.bounds.revisions)};
}

// 7 -------------------------------------------------------------------------
Outcome retraction() {
  int not_identity = 0, not_monotone = 0, not_idempotent = 0;
  for (const auto& o : reg_tables(1011, 1000)) {
    const Oracle r = retract_to_reg(o);
    bool same = true;
    for_each_string(8, [&](const std::string& a) { same = same && r.answer(a) == o.answer(a); });
    if (!same) ++not_identity;
  }
  sampling::Rng rng(1012);
  for (int i = 0; i < 1000; ++i) {
    const Oracle o = sampling::random_table(rng);
    const Oracle r = retract_to_reg(o), rr = retract_to_reg(r);
    if (!is_length_monotone(r, 6).pass) ++not_monotone;
    bool same = true;
    for_each_string(6, [&](const std::string& a) { same = same && rr.answer(a) == r.answer(a); });
    if (!same) ++not_idempotent;
  }
  return {not_identity == 0 && not_monotone == 0 && not_idempotent == 0,
          fmt("1000 reg oracles: %d not fixed; 1000 arbitrary tables: %d non-monotone images, %d not idempotent",
              not_identity, not_monotone, not_idempotent)};
}

// 8 -------------------------------------------------------------------------
Outcome separation() {
  const Machine bf = gallery::bruteforce_length_machine();
  const Machine c = clock_with_majorant(bf, *bf.bounds.running_time);
  bool ok = true;
  std::string detail;
  for (std::size_t n = 0; n <= 1; ++n) {
    const auto clocked = gallery::delayed_growth_adversary(c, n);
    const auto plain = gallery::delayed_growth_adversary(bf, n, kBigFuel);
    const Natural need = Natural{1} << gallery::delayed_growth_input_length(n);
    const bool clocked_wrong = clocked.converged && clocked.class_a.pass && clocked.on_phi.halted() &&
                               clocked.on_phi.output != clocked.correct_output;
    const bool plain_right = plain.converged && plain.class_a.pass && plain.agrees && plain.on_psi.trace.time >= need;
    ok = ok && clocked_wrong && plain_right;
    detail += fmt("n=%zu: clocked output length %zu vs %zu, unclocked time on companion %llu >= %llu; ", n,
                  clocked.on_phi.output.size(), clocked.correct_output.size(),
                  (unsigned long long)plain.on_psi.trace.time, (unsigned long long)need);
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

// 9 -------------------------------------------------------------------------
std::string trace_artifacts() {
  std::ostringstream os;
  const auto oracles = calibration::mixed_oracles(1013, 20);
  const std::vector<Machine> machines{gallery::iterated_apply_machine(), gallery::max_length_machine(),
                                      gallery::bruteforce_length_machine(), gallery::abort_early_machine(),
                                      clock_finite_revision(gallery::max_length_machine(), 2, UniPoly({40, 40}))};
  for (const auto& m : machines)
    for (const auto& o : oracles)
      for (std::size_t n = 0; n <= 4; ++n) {
        const auto r = run(m, o, zeros(n));
        os << m.name << ' ' << o.describe() << ' ' << r.output << '\n';
        write_trace(os, r.trace);
      }
  for (Natural N = 0; N <= 3; ++N) write_trace(os, gallery::flr_stress(gallery::max_length_machine(), N).run.trace);
  return os.str();
}

std::vector<Natural> frozen_fits() {
  return {calibration::iterated_apply_scale(), calibration::max_length_scale(), calibration::identity_scale(),
          calibration::bruteforce_scale(), calibration::compose_scale(), calibration::clock_scale()};
}

Outcome determinism() {
  const std::string a = trace_artifacts(), b = trace_artifacts();
  const auto f1 = frozen_fits(), f2 = frozen_fits();
  const std::vector<Natural> frozen{gallery::frozen::kIteratedApply, gallery::frozen::kMaxLength,
                                    gallery::frozen::kIdentity,      gallery::frozen::kBruteForce,
                                    gallery::frozen::kCompose,       kClockStepScale};
  const bool same_traces = a == b;
  return {same_traces && f1 == f2 && f1 == frozen,
          fmt("trace artifacts %zu bytes, %s; refitted constants %s and %s the frozen values", a.size(),
              same_traces ? "byte-identical" : "DIFFERENT", f1 == f2 ? "stable" : "UNSTABLE",
              f1 == frozen ? "equal" : "DIFFER FROM")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "majorant bound", 30, majorant_suite},
      {2, "composition calculus", 10, composition_suite},
      {3, "iterated-apply values", 10, iterated_apply_values},
      {4, "step-count and revision semantics", 60, step_count_and_revisions},
      {5, "finite-revision clock soundness", 60, clocking_soundness},
      {6, "majorant clock on length-monotone oracles", 60, majorant_clock},
      {7, "retraction onto length-monotone oracles", 30, retraction},
      {8, "separation on the sparse class", 120, separation},
      {9, "determinism", 120, determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("criterion %d [%s]: %s — %s; %.2f s (limit %.0f s)%s\n", c.id, c.title, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, c.time_limit_s, in_time ? "" : " TIME LIMIT EXCEEDED");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

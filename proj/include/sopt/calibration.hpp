#pragma once

// Worst-case fits behind the frozen constants. Every routine here is seeded
// and deterministic; the tests recompute each fit and compare it with the
// frozen value it justifies.

#include <cstdint>
#include <string>
#include <vector>

#include "sopt/gallery.hpp"
#include "sopt/sampling.hpp"

namespace sopt::calibration {

/// A measured run and the size function it is charged against.
struct TimedRun {
  Trace trace;
  LengthFn l;
};

inline Natural ceil_div(Natural a, Natural b) { return b == 0 ? kSaturated : a / b + (a % b != 0 ? 1 : 0); }

/// Least C with n <= C * shape(o(n)) at every step of every trace.
inline Natural fit_step_count_scale(const std::vector<Trace>& traces, const UniPoly& shape) {
  Natural c = 1;
  for (const auto& tr : traces)
    for (const auto& s : profile_segments(tr)) c = std::max(c, ceil_div(s.last, shape.saturating(s.value)));
  return c;
}

/// Least C with time <= C * shape(l, n) on every run.
inline Natural fit_running_time_scale(const std::vector<TimedRun>& runs, const Description& shape) {
  Natural c = 1;
  for (const auto& r : runs)
    c = std::max(c, ceil_div(r.trace.time, eval_saturating(shape, r.l, r.trace.input_length)));
  return c;
}

/// Pure oracles with exact length functions: seeded reg and arbitrary tables
/// plus the linear patterns.
inline std::vector<Oracle> mixed_oracles(std::uint64_t seed, std::size_t tables) {
  sampling::Rng rng(seed);
  std::vector<Oracle> out{Oracle::constant(""), Oracle::constant("1"), Oracle::doubling(), Oracle::pad(UniPoly({1, 1})),
                          Oracle::pad(UniPoly({3, 2}))};
  for (std::size_t i = 0; i < tables; ++i)
    out.push_back(i % 2 == 0 ? sampling::random_reg_table(rng) : sampling::random_table(rng));
  return out;
}

/// Seeded random inputs of every length 0..max_len.
inline std::vector<std::string> inputs(std::uint64_t seed, std::size_t max_len) {
  sampling::Rng rng(seed);
  std::vector<std::string> out;
  for (std::size_t n = 0; n <= max_len; ++n) out.push_back(sampling::random_bits(rng, n));
  return out;
}

inline std::vector<TimedRun> timed_runs(const Machine& m, const std::vector<Oracle>& oracles,
                                        const std::vector<std::string>& ins) {
  std::vector<TimedRun> out;
  for (const auto& o : oracles) {
    const LengthFn l = length_fn_of(o);
    for (const auto& a : ins) out.push_back({run(m, o, a).trace, l});
  }
  return out;
}

inline std::vector<Trace> traces(const Machine& m, const std::vector<Oracle>& oracles,
                                 const std::vector<std::string>& ins) {
  std::vector<Trace> out;
  for (const auto& o : oracles)
    for (const auto& a : ins) out.push_back(run(m, o, a).trace);
  return out;
}

// ---------------------------------------------------------------------------
// The fits

inline Natural iterated_apply_scale() {
  return fit_step_count_scale(traces(gallery::iterated_apply_machine(), mixed_oracles(101, 200), inputs(102, 8)),
                              gallery::iterated_apply_step_count(1));
}

inline Natural max_length_scale() {
  return fit_running_time_scale(timed_runs(gallery::max_length_machine(), mixed_oracles(201, 200), inputs(202, 8)),
                                gallery::max_length_time(1));
}

inline Natural identity_scale() {
  return fit_running_time_scale(timed_runs(gallery::identity_machine(), mixed_oracles(301, 4), inputs(302, 16)),
                                gallery::identity_time(1));
}

/// Class-A stand-ins: the delayed-growth pattern of depth 2, whose spikes
/// cover every length the brute-force budget l(l(3(n+2))) reaches for n <= 10.
inline Natural bruteforce_scale() {
  const Oracle o = make_delayed_growth(2);
  return fit_running_time_scale(timed_runs(gallery::bruteforce_length_machine(), {o}, inputs(401, 10)),
                                gallery::bruteforce_time(1));
}

inline Natural compose_scale() {
  const auto oracles = mixed_oracles(501, 60);
  const auto ins = inputs(502, 6);
  const Machine ml = gallery::max_length_machine(), id = gallery::identity_machine();
  Natural c = 1;
  for (const auto& [M, N] : {std::pair{ml, id}, std::pair{ml, ml}, std::pair{id, ml}}) {
    const Description shape = gallery::compose_time(*M.bounds.running_time, *N.bounds.running_time, 1);
    c = std::max(c, fit_running_time_scale(timed_runs(compose_machines(M, N), oracles, ins), shape));
  }
  return c;
}

/// Runs of both clocks, on tables, patterns and the finite-revision adversary.
inline Natural clock_scale() {
  const auto oracles = mixed_oracles(601, 40);
  const auto ins = inputs(602, 5);
  const Machine ml = gallery::max_length_machine();
  Natural c = 1;
  auto fold = [&](const Machine& clocked, const UniPoly& p, Natural phases) {
    const UniPoly shape = clock_step_count(p, phases, 1);
    c = std::max(c, fit_step_count_scale(traces(clocked, oracles, ins), shape));
    for (Natural n = 0; n <= 4; ++n) {
      const auto rep = gallery::flr_stress(clocked, n);
      c = std::max(c, fit_step_count_scale({rep.run.trace}, shape));
    }
  };
  for (Natural N = 0; N <= 3; ++N)
    for (const UniPoly& p : {UniPoly({1, 1}), UniPoly({4, 0, 2}), UniPoly({64, 128, 64})})
      fold(clock_finite_revision(ml, N, p), p, N + 2);
  for (const Machine& m : {ml, gallery::identity_machine()}) {
    const Majorant mj = majorant(*m.bounds.running_time);
    fold(clock_with_majorant(m, *m.bounds.running_time), mj.bound, mj.height + 3);
  }
  return c;
}

}  // namespace sopt::calibration

#pragma once

// Example functionals as machines, their frozen resource bounds, and the
// adversaries that defeat finite length revision and restricted clocks.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sopt/macros.hpp"
#include "sopt/resources.hpp"
#include "sopt/transformers.hpp"

namespace sopt::gallery {

// ---------------------------------------------------------------------------
// Frozen constants. Each is the worst case of a seeded fit (see the fit_*
// routines below, which recompute them) and is asserted by the test suite.

namespace frozen {
/// iterated-apply step-count t(m) = C (m+1)^2
inline constexpr Natural kIteratedApply = 26;
/// max-length running time C (n + n l(n) + n^2 + l(n) + 1)
inline constexpr Natural kMaxLength = 21;
/// brute-force length running time on class A: C (l(l(3n+6)) + 1)(n + l(n) + 1)
inline constexpr Natural kBruteForce = 1;
/// identity running time C (n + l(n) + 1)
inline constexpr Natural kIdentity = 12;
/// composition bound scale
inline constexpr Natural kCompose = 1;
}  // namespace frozen

// ---------------------------------------------------------------------------
// Bound shapes

inline Description scale_description(Description d, Natural c) {
  d.node = MultiPoly::constant(d.node.arity(), c) * d.node;
  return d;
}

inline UniPoly iterated_apply_step_count(Natural c = frozen::kIteratedApply) {
  return UniPoly::constant(c) * UniPoly({1, 1}) * UniPoly({1, 1});
}

/// C (n + n l(n) + n^2 + l(n) + 1): root over the leaf X_0.
inline Description max_length_time(Natural c = frozen::kMaxLength) {
  const auto x0 = MultiPoly::variable(2, 0), x1 = MultiPoly::variable(2, 1);
  const MultiPoly root = x0 + x0 * x1 + x0 * x0 + x1 + MultiPoly::constant(2, 1);
  return scale_description(Description::node_of(root, {Description::leaf(UniPoly::identity())}), c);
}

/// C (l(l(3n+6)) + 1)(n + l(n) + 1): children l(3n+6) and n.
inline Description bruteforce_time(Natural c = frozen::kBruteForce) {
  const auto x0 = MultiPoly::variable(3, 0), x1 = MultiPoly::variable(3, 1), x2 = MultiPoly::variable(3, 2);
  const auto one = MultiPoly::constant(3, 1);
  const Description inner =
      Description::node_of(MultiPoly::variable(2, 1), {Description::leaf(UniPoly({6, 3}))});
  return scale_description(
      Description::node_of((x1 + one) * (x0 + x2 + one), {inner, Description::leaf(UniPoly::identity())}), c);
}

/// C (n + l(n) + 1)
inline Description identity_time(Natural c = frozen::kIdentity) {
  const MultiPoly root = MultiPoly::variable(2, 0) + MultiPoly::variable(2, 1) + MultiPoly::constant(2, 1);
  return scale_description(Description::node_of(root, {Description::leaf(UniPoly::identity())}), c);
}

/// C (T(S(l,.),n) + S(l, T(S(l,.),n)) * T(S(l,.),n)): the composition bound.
inline Description compose_time(const Description& T, const Description& S, Natural c = frozen::kCompose) {
  const Description ts = subst_function_arg(T, S);
  return scale_description(sum_descriptions(ts, product_descriptions(subst_second_arg(S, ts), ts)), c);
}

// ---------------------------------------------------------------------------
// Machines. Tape 0 input, 1 output, 2 oracle, 3+ work.

namespace detail {
using namespace sopt::ops;
namespace mac = sopt::macros;

inline Block append_symbol(std::size_t t, Sym s) {
  return seq(Block{while_sym(t, symset::kBit, {right(t)}), write(t, s)}, mac::rewind(t));
}

/// best := 0^{|oracle|} when the answer is longer.
inline Block keep_longest(std::size_t best) {
  return mac::length_compare(kOracleTape, best, {}, {}, mac::copy_as(kOracleTape, best, Sym::Zero));
}
}  // namespace detail

/// phi^{|a|}(0): copy the input to a memory tape, write 0 on the oracle tape,
/// and query once per input symbol.
inline Machine iterated_apply_machine() {
  using namespace detail;
  const Block body = seq(mac::copy(kInputTape, 3), mac::write_literal(kOracleTape, "0"),
                         Block{while_sym(3, symset::kBit, seq(mac::drop_last(3), Block{query()}))},
                         mac::copy(kOracleTape, kOutputTape));
  Machine m{build(body, 4), "iterated-apply", {}};
  m.bounds.step_count = iterated_apply_step_count();
  return m;
}

/// 0^{max{|phi(0^k)| : k <= |a|}}
inline Machine max_length_machine() {
  using namespace detail;
  const std::size_t counter = 3, best = 4;
  const Block body =
      seq(Block{loop(seq(mac::copy(counter, kOracleTape), Block{query()}, keep_longest(best),
                         mac::length_compare(counter, kInputTape, append_symbol(counter, Sym::Zero), {brk()},
                                             {brk()})))},
          mac::copy(best, kOutputTape));
  Machine m{build(body, 5), "max-length", {}};
  m.bounds.running_time = max_length_time();
  return m;
}

/// 0^{|phi|(|a|)} by querying every string of length <= |a|.
inline Machine bruteforce_length_machine() {
  using namespace detail;
  const std::size_t s = 3, best = 4;
  const Block body =
      seq(Block{loop(seq(mac::length_compare(s, kInputTape, {}, {}, {brk()}), mac::copy(s, kOracleTape),
                         Block{query()}, keep_longest(best), mac::next_string(s)))},
          mac::copy(best, kOutputTape));
  Machine m{build(body, 5), "bruteforce-length", {}};
  m.bounds.running_time = bruteforce_time();
  return m;
}

/// Brute force that gives up (output epsilon) once it has asked more than
/// twice as many queries as the longest answer found so far.
inline Machine abort_early_machine() {
  using namespace detail;
  const std::size_t s = 3, best = 4, count = 5, twice = 6;
  const Block on_longer = seq(mac::copy_as(kOracleTape, best, Sym::Zero), mac::copy_as(kOracleTape, twice, Sym::Zero),
                              Block{while_sym(twice, symset::kBit, {right(twice)})},
                              mac::append_as(kOracleTape, twice, Sym::Zero), mac::rewind(twice));
  const Block body =
      seq(Block{loop(seq(mac::length_compare(s, kInputTape, {}, {}, {brk()}), mac::copy(s, kOracleTape),
                         Block{query()}, mac::length_compare(kOracleTape, best, {}, {}, on_longer),
                         append_symbol(count, Sym::One), mac::length_compare(count, twice, {}, {}, {halt()}),
                         mac::next_string(s)))},
          mac::copy(best, kOutputTape));
  return {build(body, 7), "abort-early", {}};
}

/// The identity functional phi -> phi: forwards its input to the oracle and
/// returns the answer.
inline Machine identity_machine() {
  using namespace detail;
  const Block body = seq(mac::copy(kInputTape, kOracleTape), Block{query()}, mac::copy(kOracleTape, kOutputTape));
  Machine m{build(body, 3), "identity", {}};
  m.bounds.running_time = identity_time();
  return m;
}

inline Machine constant_machine(const std::string& bits) {
  if (!is_bit_string(bits)) throw std::invalid_argument("constant output must be a bit string");
  Machine m{build(macros::write_literal(kOutputTape, bits), 3), "constant:" + bits, {}};
  m.bounds.running_time = Description::leaf(UniPoly::constant(4 * bits.size() + 2));
  return m;
}

/// Gallery lookup by name: iterated-apply, max-length, bruteforce-length,
/// abort-early, identity, constant:<bits>.
inline std::optional<Machine> by_name(std::string_view name) {
  if (name == "iterated-apply") return iterated_apply_machine();
  if (name == "max-length") return max_length_machine();
  if (name == "bruteforce-length") return bruteforce_length_machine();
  if (name == "abort-early") return abort_early_machine();
  if (name == "identity") return identity_machine();
  if (name.substr(0, 9) == "constant:") return constant_machine(std::string(name.substr(9)));
  return std::nullopt;
}

inline std::vector<std::string> machine_names() {
  return {"iterated-apply", "max-length", "bruteforce-length", "abort-early", "identity", "constant:<bits>"};
}

// ---------------------------------------------------------------------------
// Reference functionals

/// max{|phi(0^k)| : k <= n}
inline Natural max_length_value(const Oracle& o, Natural n) {
  Natural best = 0;
  for (Natural k = 0; k <= n; ++k) best = std::max(best, o.answer_length(std::string(k, '0')));
  return best;
}

/// phi^{n}(0)
inline std::string iterated_apply_value(const Oracle& o, Natural n) {
  std::string v = "0";
  for (Natural k = 0; k < n; ++k) v = o.answer(v);
  return v;
}

// ---------------------------------------------------------------------------
// Adversary against finite length revision

struct FlrReport {
  Natural N = 0;
  std::string input;
  RunOutcome run;                    // against the adaptive oracle
  RevisionCount revisions;
  bool exceeded = false;             // more than N strict increases
  Oracle finalized = Oracle::constant("");
  std::optional<std::string> planted;  // unqueried 0^m, m <= N, given 0^{time+1}
  std::string correct_output;        // max-length functional on the finalized oracle
  std::string replay_output;         // M on the finalized oracle
  bool output_wrong = false;
  bool replay_identical = false;     // the finalized oracle reproduces the run
};

/// Answers M's i-th fresh query with 0^{N+i} on input 0^N, then finalizes by
/// planting 0^{time+1} on an unqueried 0^m with m <= N, if there is one.
inline FlrReport flr_stress(const Machine& M, Natural N, Natural fuel = kDefaultFuel) {
  FlrReport r;
  r.N = N;
  r.input.assign(N, '0');
  Oracle adaptive = Oracle::adaptive(
      [N](std::string_view, const Oracle::Entries& memo) { return std::string(N + memo.size() + 1, '0'); });
  r.run = run(M.program, adaptive, r.input, fuel);
  r.revisions = count_revisions(r.run.trace);
  r.exceeded = r.revisions.strict_increases > N;

  Oracle::Entries entries = adaptive.entries();
  for (Natural m = 0; m <= N; ++m) {
    std::string z(m, '0');
    if (!entries.contains(z)) {
      entries.emplace(z, std::string(r.run.trace.time + 1, '0'));
      r.planted = z;
      break;
    }
  }
  r.finalized = Oracle::table(std::move(entries));
  r.correct_output.assign(max_length_value(r.finalized, N), '0');
  Oracle replay = r.finalized;
  const RunOutcome again = run(M.program, replay, r.input, fuel);
  r.replay_output = again.output;
  r.replay_identical = again.trace == r.run.trace && again.output == r.run.output;
  r.output_wrong = again.output != r.correct_output;
  return r;
}

// ---------------------------------------------------------------------------
// Adversary against restricted clocks on the sparse class A

struct DelayedGrowthReport {
  std::size_t n = 0;
  std::string input;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<std::string> planted_while_running;  // forced plants (all others of that length were epsilon)
  std::vector<std::string> planted_at_finalize;    // plants on strings the run never asked
  Oracle phi = Oracle::constant("");               // finalized phi_n
  Oracle psi = Oracle::constant("");               // phi_n cut to lengths <= |input|
  RunOutcome on_phi;
  RunOutcome on_psi;
  std::string correct_output;                      // 0^{|phi|(|input|)}
  bool agrees = false;
  bool replay_identical = false;                   // finalize planting did not disturb the run
  ClassAVerdict class_a;
};

/// Input length 2^{2^{n+1}} - 1, so the lengths 2^{2^m}, m <= n, are the tower
/// lengths within reach and brute force needs at least 2^{|input|} steps.
inline Natural delayed_growth_input_length(std::size_t n) { return tower_length(n + 1) - 1; }

/// Replays M from scratch against a table that starts as constant epsilon.
/// Whenever M is about to ask the last unasked string of a watched tower
/// length g(m) = 2^{2^m} <= |input| while every other string of that length
/// has answered epsilon, that string gets 0^{2^{g(m)}} and the replay starts
/// over. At the fixpoint, each tower length still without a spike gets one on
/// its first unasked string, which leaves the run unchanged.
inline DelayedGrowthReport delayed_growth_adversary(const Machine& M, std::size_t n, Natural fuel = kDefaultFuel,
                                                    std::size_t max_iterations = 64) {
  if (n > 1) throw BudgetExceeded("delayed-growth adversary is desk scale: n <= 1");
  DelayedGrowthReport r;
  r.n = n;
  const Natural L = delayed_growth_input_length(n);
  r.input.assign(L, '0');
  Oracle::Entries entries;
  std::vector<bool> spiked(n + 1, false);
  std::vector<std::set<std::string>> asked(n + 1);

  while (r.iterations < max_iterations) {
    ++r.iterations;
    Oracle current = Oracle::table(entries);
    Config c(M.program, r.input);
    for (auto& s : asked) s.clear();
    std::optional<std::string> plant;
    std::size_t plant_level = 0;
    while (!c.halted && c.steps < fuel) {
      if (auto q = c.pending_query(M.program)) {
        const auto m = tower_index(q->size());
        if (m && *m <= n && !spiked[*m] && !asked[*m].contains(*q)) {
          if (asked[*m].size() + 1 == pow2(q->size())) {
            plant = *q;
            plant_level = *m;
            break;
          }
          asked[*m].insert(*q);
        }
      }
      step(M.program, c, current);
    }
    if (!plant) {
      r.converged = true;
      break;
    }
    entries[*plant] = std::string(pow2(tower_length(plant_level)), '0');
    spiked[plant_level] = true;
    r.planted_while_running.push_back(*plant);
  }

  // Runs are replayed on the final tables below; the asked sets are from the last replay.
  const Oracle before = Oracle::table(entries);
  for (std::size_t m = 0; m <= n; ++m) {
    if (spiked[m]) continue;
    const Natural g = tower_length(m);
    std::string s;
    // Shortlex order: the first string of length g the run never asked.
    bool found = false;
    for_each_string(static_cast<std::size_t>(g), [&](const std::string& a) {
      if (!found && a.size() == g && !asked[m].contains(a)) {
        s = a;
        found = true;
      }
    });
    if (!found) continue;
    entries[s] = std::string(pow2(g), '0');
    spiked[m] = true;
    r.planted_at_finalize.push_back(s);
  }

  r.phi = Oracle::table(entries);
  Oracle::Entries cut;
  for (const auto& [k, v] : entries)
    if (k.size() <= L) cut.emplace(k, v);
  r.psi = Oracle::table(std::move(cut));

  Oracle b = before, p = r.phi, s = r.psi;
  const RunOutcome pre = run(M.program, b, r.input, fuel);
  r.on_phi = run(M.program, p, r.input, fuel);
  r.on_psi = run(M.program, s, r.input, fuel);
  r.replay_identical = pre.trace == r.on_phi.trace && pre.output == r.on_phi.output;
  r.correct_output.assign(size_fn(r.phi, L).value, '0');
  r.agrees = r.on_phi.halted() && r.on_phi.output == r.correct_output;
  r.class_a = in_class_A(r.phi, n);
  return r;
}

}  // namespace sopt::gallery

#pragma once

// Machine and oracle transformers: composition, the two clocks and the
// retraction onto length-monotone oracles.
//
// Transformers work on expanded programs: the input machine's instructions are
// copied verbatim (tapes and successors remapped) and the new bookkeeping is
// compiled from macros around them. Input machines are expected to keep their
// tapes tidy (no blank before the last symbol), as every macro-built machine does.

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "sopt/macros.hpp"
#include "sopt/oracle.hpp"
#include "sopt/resources.hpp"
#include "sopt/sopoly.hpp"

namespace sopt {

namespace detail {

using namespace sopt::ops;
namespace mac = sopt::macros;

struct Splice {
  std::vector<Assembler::Ref> entry_of;  // label per original instruction
};

/// Copies `p` into the assembler with tapes renamed by `tape_map`.
/// `wrap(i, target)` may redirect the edge into instruction i (for ticks);
/// `on_query(next)` returns the continuation that follows a query, or with
/// `replace_queries` the code that runs instead of it; `on_halt` replaces
/// halting (nullopt keeps the halt instruction).
template <class Wrap, class OnQuery>
Splice splice(Assembler& as, const Program& p, const std::vector<std::size_t>& tape_map, Wrap wrap, OnQuery on_query,
              std::optional<Assembler::Ref> on_halt, bool replace_queries = false) {
  Splice s;
  s.entry_of.resize(p.code.size());
  std::vector<Assembler::Ref> raw(p.code.size());
  for (std::size_t i = 0; i < p.code.size(); ++i) {
    s.entry_of[i] = as.label();
    raw[i] = as.label();
  }
  for (std::size_t i = 0; i < p.code.size(); ++i) {
    const Instr& in = p.code[i];
    const auto tape = static_cast<std::uint32_t>(tape_map.at(in.tape));
    Assembler::Ref pc = 0;
    switch (in.op) {
      case Op::Halt:
        if (on_halt) {
          as.bind(raw[i], *on_halt);
          as.bind(s.entry_of[i], wrap(i, raw[i]));
          continue;
        }
        pc = as.emit({Op::Halt, 0, 0, 0, 0});
        break;
      case Op::Query:
        if (replace_queries) {
          as.bind(raw[i], on_query(s.entry_of[in.next]));
          as.bind(s.entry_of[i], wrap(i, raw[i]));
          continue;
        }
        pc = as.emit({Op::Query, static_cast<std::uint32_t>(kOracleTape), 0, on_query(s.entry_of[in.next]), 0});
        break;
      case Op::Test:
      case Op::TestStart:
        pc = as.emit({in.op, tape, in.arg, s.entry_of[in.next], s.entry_of[in.alt]});
        break;
      default:
        pc = as.emit({in.op, tape, in.arg, s.entry_of[in.next], 0});
        break;
    }
    as.bind(raw[i], pc);
    as.bind(s.entry_of[i], wrap(i, raw[i]));
  }
  return s;
}

/// Output epsilon and halt, from any state of the output tape.
inline Block abort_with_epsilon() { return seq(mac::rewind(kOutputTape), Block{write(kOutputTape, Sym::Blank), halt()}); }

/// Tapes used by the clocks, beyond the simulated machine's own.
struct ClockTapes {
  std::size_t revisions;  // R: unary revisions left
  std::size_t recorded;   // L: unary recorded length (max of input and answers)
  std::size_t budget;     // S: unary budget, head = steps spent
  std::size_t save;       // H: saved oracle head
  std::size_t save2;      // H2: saved budget head
  std::size_t pow;        // P: scratch power
  std::size_t prod;       // Q: scratch product
  std::size_t total;

  explicit ClockTapes(std::size_t base)
      : revisions(base), recorded(base + 1), budget(base + 2), save(base + 3), save2(base + 4), pow(base + 5),
        prod(base + 6), total(base + 7) {}
};

/// S := 1^{p(|L|)}, all involved heads rewound. S must be rewound beforehand.
inline Block unary_poly(const UniPoly& p, std::size_t L, std::size_t S, std::size_t P, std::size_t Q) {
  Block b = mac::erase(S);
  const auto& c = p.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    b = seq(b, mac::erase(P), mac::write_literal(P, "1"));
    for (std::size_t k = 0; k < i; ++k) {
      // Q := P * |L| in unary, then P := Q.
      b = seq(b, mac::erase(Q),
              Block{while_sym(L, symset::kBit, seq(mac::append_as(P, Q, Sym::One), Block{right(L)}))},
              mac::rewind(L), mac::rewind(Q), mac::copy(Q, P));
    }
    for (Natural k = 0; k < c[i]; ++k) b = seq(b, mac::append_as(P, S, Sym::One));
  }
  return seq(b, mac::rewind(S), mac::erase(P), mac::erase(Q));
}

/// Ticks before every simulated instruction: abort when the budget is spent.
inline auto make_ticker(Assembler& as, std::size_t S, Assembler::Ref abort) {
  return [&as, S, abort](std::size_t, Assembler::Ref target) {
    const auto mv = as.emit({Op::MoveRight, static_cast<std::uint32_t>(S), 0, target, 0});
    return as.emit({Op::Test, static_cast<std::uint32_t>(S), symset::kOne, mv, abort});
  };
}

inline std::vector<std::size_t> identity_map(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), 0);
  return m;
}

/// p-hat(m) = (deg+2)(maxcoef+1)(m+1)^{deg+1}: dominates the cost of writing
/// p(m) in unary and of the unary arithmetic producing it.
inline UniPoly p_hat(const UniPoly& p) {
  Natural maxc = 0;
  for (Natural c : p.coefficients()) maxc = std::max(maxc, c);
  UniPoly r = UniPoly::constant(mul(p.degree() + 2, maxc + 1));
  for (std::size_t i = 0; i <= p.degree(); ++i) r = r * UniPoly({1, 1});
  return r;
}

}  // namespace detail

/// Scale of the clocks' constructed step-counts; measured once and frozen (see
/// the gallery's fitting routines, which recompute it).
inline constexpr Natural kClockStepScale = 1;

/// Step-count admitted by a clocked machine with budget polynomial p and
/// `phases` revision-bounded phases: K * phases * (p-hat(m) + m + 1)^2.
inline UniPoly clock_step_count(const UniPoly& p, Natural phases, Natural scale = kClockStepScale) {
  const UniPoly base = detail::p_hat(p) + UniPoly({1, 1});
  return UniPoly::constant(mul(scale, phases)) * base * base;
}

/// Whether a run stays inside the clock (N, p): at most N length revisions
/// and every step n within the budget p(o(n-1)) granted before it.
inline bool respects_clock(const Trace& tr, Natural N, const UniPoly& p) {
  if (count_revisions(tr).strict_increases > N) return false;
  for (const auto& s : profile_segments(tr)) {
    // Steps s.first+1 .. s.last+1 (capped by the run) are granted p(s.value).
    const Natural last_step = std::min(tr.time, s.last + 1);
    if (last_step > s.first && last_step > p.saturating(s.value)) return false;
  }
  return true;
}

/// Simulates M under a revision counter N and a budget p(recorded length).
/// Aborts with epsilon on the (N+1)-th revision or when the budget runs out.
inline Machine clock_finite_revision(const Machine& M, Natural N, const UniPoly& p) {
  using namespace sopt::ops;
  namespace mac = sopt::macros;
  const Program& prog = M.program;
  const detail::ClockTapes T(prog.tapes);
  Assembler as;
  const auto halt_pc = as.emit({Op::Halt, 0, 0, 0, 0});
  const auto abort = as.compile(detail::abort_with_epsilon(), halt_pc);

  const Block on_revision =
      seq(Block{if_sym(T.revisions, symset::kBlank, detail::abort_with_epsilon(), mac::drop_last(T.revisions))},
          mac::copy_as(kOracleTape, T.recorded, Sym::One), mac::rewind_counting(T.budget, T.save2),
          detail::unary_poly(p, T.recorded, T.budget, T.pow, T.prod), mac::advance_by(T.save2, T.budget),
          mac::erase(T.save2));
  const Block handler = seq(mac::rewind_counting(kOracleTape, T.save),
                            mac::length_compare(kOracleTape, T.recorded, {}, {}, on_revision),
                            mac::advance_by(T.save, kOracleTape), mac::erase(T.save));

  auto sp = detail::splice(as, prog, detail::identity_map(prog.tapes), detail::make_ticker(as, T.budget, abort),
                           [&](Assembler::Ref next) { return as.compile(handler, next); }, std::nullopt);

  const Block prologue = seq(mac::write_literal(T.revisions, std::string(N, '1')),
                             mac::copy_as(kInputTape, T.recorded, Sym::One),
                             detail::unary_poly(p, T.recorded, T.budget, T.pow, T.prod));
  const auto entry = as.compile(prologue, sp.entry_of[prog.entry]);

  Machine out;
  out.program = as.finish(T.total, entry);
  out.name = "clock(" + M.name + ", N=" + std::to_string(N) + ", p=" + p.to_string() + ")";
  out.bounds.revisions = N + 1;
  out.bounds.step_count = clock_step_count(p, N + 2);
  return out;
}

/// With (N, p) the majorant of T: probes 0^{p(m)} N times to raise m, budgets
/// p(m), probes once more at that length, then simulates M and aborts with
/// epsilon on budget exhaustion or on any further length revision.
inline Machine clock_with_majorant(const Machine& M, const Description& T) {
  using namespace sopt::ops;
  namespace mac = sopt::macros;
  const Majorant mj = majorant(T);
  const Program& prog = M.program;
  const detail::ClockTapes tp(prog.tapes);
  Assembler as;
  const auto halt_pc = as.emit({Op::Halt, 0, 0, 0, 0});
  const auto abort = as.compile(detail::abort_with_epsilon(), halt_pc);

  const Block handler =
      seq(mac::rewind_counting(kOracleTape, tp.save),
          mac::length_compare(kOracleTape, tp.recorded, {}, {}, detail::abort_with_epsilon()),
          mac::advance_by(tp.save, kOracleTape), mac::erase(tp.save));
  auto sp = detail::splice(as, prog, detail::identity_map(prog.tapes), detail::make_ticker(as, tp.budget, abort),
                           [&](Assembler::Ref next) { return as.compile(handler, next); }, std::nullopt);

  auto probe = [&] {
    return seq(mac::copy_as(tp.budget, kOracleTape, Sym::Zero), Block{query()},
               mac::length_compare(kOracleTape, tp.recorded, {}, {}, mac::copy_as(kOracleTape, tp.recorded, Sym::One)));
  };
  Block prologue = mac::copy_as(kInputTape, tp.recorded, Sym::One);
  for (std::size_t i = 0; i < mj.height; ++i)
    prologue = seq(prologue, detail::unary_poly(mj.bound, tp.recorded, tp.budget, tp.pow, tp.prod), probe());
  prologue = seq(prologue, detail::unary_poly(mj.bound, tp.recorded, tp.budget, tp.pow, tp.prod), probe(),
                 mac::erase(kOracleTape));
  const auto entry = as.compile(prologue, sp.entry_of[prog.entry]);

  Machine out;
  out.program = as.finish(tp.total, entry);
  out.name = "majorant-clock(" + M.name + ")";
  out.bounds.revisions = mj.height + 2;
  out.bounds.step_count = clock_step_count(mj.bound, mj.height + 3);
  return out;
}

/// The machine computing M^{N^phi}: M's oracle tape becomes a work tape W; on
/// each of M's queries N runs with W as its input against the real oracle, and
/// its output replaces W's content. N's code is inlined once per query site.
inline Machine compose_machines(const Machine& M, const Machine& N) {
  using namespace sopt::ops;
  namespace mac = sopt::macros;
  const Program& pm = M.program;
  const Program& pn = N.program;
  const std::size_t W = 3;
  std::vector<std::size_t> mmap(pm.tapes);
  for (std::size_t i = 0; i < pm.tapes; ++i) mmap[i] = i < kOracleTape ? i : i == kOracleTape ? W : i + 1;
  const std::size_t out_n = pm.tapes + 1;
  std::vector<std::size_t> nmap(pn.tapes);
  for (std::size_t i = 0; i < pn.tapes; ++i)
    nmap[i] = i == kInputTape ? W : i == kOutputTape ? out_n : i == kOracleTape ? kOracleTape : out_n + (i - 2);
  const std::size_t save = out_n + (pn.tapes - 2);
  const std::size_t total = save + 1;

  Assembler as;
  // After N halts: rewind and clean N's tapes, move its output into W, restore W's head.
  Block cleanup;
  for (std::size_t i = 0; i < pn.tapes; ++i)
    if (i != kInputTape && i != kOutputTape) cleanup = seq(cleanup, mac::rewind(nmap[i]), mac::erase(nmap[i]));
  const Block after_n = seq(mac::rewind(W), mac::rewind(out_n), mac::copy(out_n, W), mac::erase(out_n), cleanup,
                            mac::advance_by(save, W), mac::erase(save));

  auto on_query = [&](Assembler::Ref next) {
    const auto post = as.compile(after_n, next);
    auto inner = detail::splice(as, pn, nmap, [](std::size_t, Assembler::Ref t) { return t; },
                                [&](Assembler::Ref n2) { return n2; }, post);
    return as.compile(mac::rewind_counting(W, save), inner.entry_of[pn.entry]);
  };
  auto sp = detail::splice(as, pm, mmap, [](std::size_t, Assembler::Ref t) { return t; }, on_query, std::nullopt,
                           /*query_runs_inner=*/true);
  Machine out;
  out.program = as.finish(total, sp.entry_of[pm.entry]);
  out.name = "compose(" + M.name + ", " + N.name + ")";
  return out;
}

/// Repaired retraction onto length-monotone oracles: with
/// m(n) = max_{k<=n} |phi(0^k)|, a is answered by phi(a) cut or zero-padded to
/// length m(|a|). With `printed` the unrepaired m(n) = |phi(0^n)| is used.
inline Oracle retract_to_reg(const Oracle& o, bool printed = false) {
  if (!o.is_pure()) throw std::invalid_argument("retraction needs a pure oracle");
  auto f = [o, printed](std::string_view a) {
    Natural m = 0;
    if (printed) {
      m = o.answer_length(std::string(a.size(), '0'));
    } else {
      for (std::size_t k = 0; k <= a.size(); ++k) m = std::max(m, o.answer_length(std::string(k, '0')));
    }
    std::string v = o.answer(a);
    v.resize(m, '0');
    return v;
  };
  return Oracle::derived(f, std::string(printed ? "retract-printed(" : "retract(") + o.describe() + ")");
}

/// The oracle b -> N^phi(b) seen by M inside compose(M, N).
inline Oracle machine_oracle(const Machine& N, const Oracle& phi, Natural fuel = kDefaultFuel) {
  if (!phi.is_pure()) throw std::invalid_argument("machine oracle needs a pure inner oracle");
  return Oracle::derived(
      [N, phi, fuel](std::string_view b) {
        Oracle inner = phi;
        const auto r = run(N.program, inner, b, fuel);
        if (!r.halted()) throw std::runtime_error("inner machine ran out of fuel");
        return r.output;
      },
      N.name + "^(" + phi.describe() + ")");
}

}  // namespace sopt

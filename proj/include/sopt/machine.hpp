#pragma once

// Instrumented oracle machine.
//
// A program is a finite graph of primitives over one-way infinite tapes with
// symbols {0, 1, blank}. Tape 0 is the read-only input, tape 1 the output,
// tape 2 the combined oracle query/answer tape; the rest are work tapes. Every
// primitive costs one step. Entering the query state replaces the whole oracle
// tape with phi(b), where b is the content up to the first blank, and leaves
// the head where it was.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sopt/oracle.hpp"
#include "sopt/sopoly.hpp"
#include "sopt/trace.hpp"

namespace sopt {

enum class Sym : std::uint8_t { Zero = 0, One = 1, Blank = 2 };

inline constexpr std::size_t kInputTape = 0;
inline constexpr std::size_t kOutputTape = 1;
inline constexpr std::size_t kOracleTape = 2;
inline constexpr std::size_t kMinTapes = 3;

/// Symbol sets for tests.
namespace symset {
inline constexpr std::uint8_t kZero = 1U << 0;
inline constexpr std::uint8_t kOne = 1U << 1;
inline constexpr std::uint8_t kBlank = 1U << 2;
inline constexpr std::uint8_t kBit = kZero | kOne;
inline constexpr std::uint8_t kAll = kBit | kBlank;
inline constexpr std::uint8_t of(Sym s) { return static_cast<std::uint8_t>(1U << static_cast<unsigned>(s)); }
}  // namespace symset

enum class Op : std::uint8_t {
  MoveLeft,   // stays put on cell 0
  MoveRight,
  Write,      // arg: Sym
  Test,       // arg: symbol set; next if the scanned symbol is in it, alt otherwise
  TestStart,  // next if the head is on cell 0, alt otherwise
  Query,
  Halt,
};

struct Instr {
  Op op = Op::Halt;
  std::uint32_t tape = 0;
  std::uint8_t arg = 0;
  std::uint32_t next = 0;
  std::uint32_t alt = 0;
  bool operator==(const Instr&) const = default;
};

struct Program {
  std::size_t tapes = kMinTapes;
  std::uint32_t entry = 0;
  std::vector<Instr> code;

  void validate() const {
    if (tapes < kMinTapes) throw std::invalid_argument("program needs input, output and oracle tapes");
    if (code.empty()) throw std::invalid_argument("program has no instructions");
    if (entry >= code.size()) throw std::invalid_argument("entry out of range");
    for (std::size_t i = 0; i < code.size(); ++i) {
      const Instr& in = code[i];
      const auto where = " at instruction " + std::to_string(i);
      if (in.tape >= tapes) throw std::invalid_argument("tape index out of range" + where);
      if (in.op != Op::Halt && in.next >= code.size()) throw std::invalid_argument("successor out of range" + where);
      if ((in.op == Op::Test || in.op == Op::TestStart) && in.alt >= code.size())
        throw std::invalid_argument("branch target out of range" + where);
      if (in.op == Op::Write && in.tape == kInputTape) throw std::invalid_argument("write to input tape" + where);
      if (in.op == Op::Write && in.arg > 2) throw std::invalid_argument("bad symbol" + where);
    }
  }

  bool operator==(const Program&) const = default;
};

/// Claims about a machine. Checked by the resources module, never trusted.
struct DeclaredBounds {
  std::optional<UniPoly> step_count;
  std::optional<Natural> revisions;
  std::optional<Description> running_time;
};

struct Machine {
  Program program;
  std::string name;
  DeclaredBounds bounds;
};

class Tape {
 public:
  Tape() = default;
  explicit Tape(std::string_view bits) {
    cells_.reserve(bits.size());
    for (char c : bits) cells_.push_back(c == '1' ? Sym::One : Sym::Zero);
  }

  Sym read() const { return head_ < cells_.size() ? cells_[head_] : Sym::Blank; }
  void write(Sym s) {
    if (head_ >= cells_.size()) {
      if (s == Sym::Blank) return;
      cells_.resize(head_ + 1, Sym::Blank);
    }
    cells_[head_] = s;
  }
  void left() {
    if (head_ > 0) --head_;
  }
  void right() { ++head_; }
  std::size_t head() const { return head_; }

  /// Cells 0 up to the first blank.
  std::string content() const {
    std::string s;
    for (Sym c : cells_) {
      if (c == Sym::Blank) break;
      s.push_back(c == Sym::One ? '1' : '0');
    }
    return s;
  }
  std::size_t content_length() const {
    std::size_t n = 0;
    while (n < cells_.size() && cells_[n] != Sym::Blank) ++n;
    return n;
  }

  void replace(std::string_view bits) {
    cells_.clear();
    for (char c : bits) cells_.push_back(c == '1' ? Sym::One : Sym::Zero);
  }

  bool operator==(const Tape&) const = default;

 private:
  std::vector<Sym> cells_;
  std::size_t head_ = 0;
};

struct Config {
  std::vector<Tape> tapes;
  std::uint32_t pc = 0;
  Natural steps = 0;
  bool halted = false;

  Config(const Program& p, std::string_view input) : tapes(p.tapes), pc(p.entry) { tapes[kInputTape] = Tape(input); }

  /// The string the next query would ask, if the next instruction is a query.
  std::optional<std::string> pending_query(const Program& p) const {
    if (halted || p.code[pc].op != Op::Query) return std::nullopt;
    return tapes[kOracleTape].content();
  }
};

struct Event {
  enum class Kind { Plain, Query, Halt };
  Kind kind = Kind::Plain;
  Natural query_length = 0;
  Natural answer_length = 0;
};

/// One deterministic transition.
inline Event step(const Program& p, Config& c, Oracle& oracle) {
  if (c.halted) throw std::logic_error("step on a halted configuration");
  const Instr& in = p.code[c.pc];
  Tape& t = c.tapes[in.tape];
  ++c.steps;
  switch (in.op) {
    case Op::MoveLeft:
      t.left();
      c.pc = in.next;
      return {};
    case Op::MoveRight:
      t.right();
      c.pc = in.next;
      return {};
    case Op::Write:
      t.write(static_cast<Sym>(in.arg));
      c.pc = in.next;
      return {};
    case Op::Test:
      c.pc = (in.arg & symset::of(t.read())) != 0 ? in.next : in.alt;
      return {};
    case Op::TestStart:
      c.pc = t.head() == 0 ? in.next : in.alt;
      return {};
    case Op::Query: {
      Tape& q = c.tapes[kOracleTape];
      const std::string b = q.content();
      const std::string a = oracle.query(b);
      q.replace(a);
      c.pc = in.next;
      return {Event::Kind::Query, b.size(), a.size()};
    }
    case Op::Halt:
      c.halted = true;
      return {Event::Kind::Halt, 0, 0};
  }
  throw std::logic_error("unknown opcode");
}

inline constexpr Natural kDefaultFuel = 10'000'000;

struct RunOutcome {
  enum class Status { Halted, FuelExhausted };
  Status status = Status::FuelExhausted;
  std::string output;
  Trace trace;

  bool halted() const { return status == Status::Halted; }
};

inline RunOutcome run(const Program& p, Oracle& oracle, std::string_view input, Natural fuel = kDefaultFuel) {
  if (!is_bit_string(input)) throw std::invalid_argument("input must be a bit string");
  Config c(p, input);
  RunOutcome out;
  out.trace.input_length = input.size();
  while (!c.halted && c.steps < fuel) {
    const Event e = step(p, c, oracle);
    if (e.kind == Event::Kind::Query) out.trace.queries.push_back({c.steps, e.query_length, e.answer_length});
  }
  out.trace.time = c.steps;
  out.trace.halted = c.halted;
  out.status = c.halted ? RunOutcome::Status::Halted : RunOutcome::Status::FuelExhausted;
  out.output = c.tapes[kOutputTape].content();
  return out;
}

inline RunOutcome run(const Machine& m, Oracle& oracle, std::string_view input, Natural fuel = kDefaultFuel) {
  return run(m.program, oracle, input, fuel);
}

/// Convenience for pure oracles passed by value.
inline RunOutcome run(const Machine& m, const Oracle& oracle, std::string_view input, Natural fuel = kDefaultFuel) {
  Oracle copy = oracle;
  return run(m.program, copy, input, fuel);
}

}  // namespace sopt

#pragma once

// Structured programs and their expansion into the primitive graph.
//
// Control flow (sequencing, branching back to a loop head, break) is the
// edge structure of the graph and costs nothing; only primitives and tests
// are steps. A structured program falls through to an implicit halt.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sopt/machine.hpp"

namespace sopt {

class MalformedProgram : public std::invalid_argument {
 public:
  explicit MalformedProgram(const std::string& what) : std::invalid_argument(what) {}
};

struct Node;
using Block = std::vector<Node>;

struct Node {
  enum class Kind {
    Prim,           // op, tape, arg
    If,             // scanned symbol of `tape` in `mask` ? body : other
    IfStart,        // head of `tape` on cell 0 ? body : other
    While,          // while scanned symbol in `mask`: body
    WhileNotStart,  // while head not on cell 0: body
    Loop,           // forever: body (leave with Break)
    Break,
    Compare,        // lengths of `tape` and `tape2`: body (<), other (=), third (>); heads rewound first
  };
  Kind kind = Kind::Prim;
  Op op = Op::Halt;
  std::uint32_t tape = 0;
  std::uint32_t tape2 = 0;
  std::uint8_t arg = 0;
  Block body;
  Block other;
  Block third;
};

namespace ops {

inline Node prim(Op op, std::size_t tape = 0, std::uint8_t arg = 0) {
  Node n;
  n.op = op;
  n.tape = static_cast<std::uint32_t>(tape);
  n.arg = arg;
  return n;
}
inline Node left(std::size_t t) { return prim(Op::MoveLeft, t); }
inline Node right(std::size_t t) { return prim(Op::MoveRight, t); }
inline Node write(std::size_t t, Sym s) { return prim(Op::Write, t, static_cast<std::uint8_t>(s)); }
inline Node query() { return prim(Op::Query, kOracleTape); }
inline Node halt() { return prim(Op::Halt); }

inline Node if_sym(std::size_t t, std::uint8_t mask, Block then, Block otherwise = {}) {
  Node n;
  n.kind = Node::Kind::If;
  n.tape = static_cast<std::uint32_t>(t);
  n.arg = mask;
  n.body = std::move(then);
  n.other = std::move(otherwise);
  return n;
}
inline Node if_start(std::size_t t, Block then, Block otherwise = {}) {
  Node n;
  n.kind = Node::Kind::IfStart;
  n.tape = static_cast<std::uint32_t>(t);
  n.body = std::move(then);
  n.other = std::move(otherwise);
  return n;
}
inline Node while_sym(std::size_t t, std::uint8_t mask, Block body) {
  Node n;
  n.kind = Node::Kind::While;
  n.tape = static_cast<std::uint32_t>(t);
  n.arg = mask;
  n.body = std::move(body);
  return n;
}
inline Node while_not_start(std::size_t t, Block body) {
  Node n;
  n.kind = Node::Kind::WhileNotStart;
  n.tape = static_cast<std::uint32_t>(t);
  n.body = std::move(body);
  return n;
}
inline Node loop(Block body) {
  Node n;
  n.kind = Node::Kind::Loop;
  n.body = std::move(body);
  return n;
}
inline Node brk() {
  Node n;
  n.kind = Node::Kind::Break;
  return n;
}
inline Node compare(std::size_t a, std::size_t b, Block less, Block equal, Block greater) {
  Node n;
  n.kind = Node::Kind::Compare;
  n.tape = static_cast<std::uint32_t>(a);
  n.tape2 = static_cast<std::uint32_t>(b);
  n.body = std::move(less);
  n.other = std::move(equal);
  n.third = std::move(greater);
  return n;
}

/// Concatenates blocks.
template <class... Bs>
Block seq(Bs&&... bs) {
  Block out;
  (out.insert(out.end(), std::make_move_iterator(bs.begin()), std::make_move_iterator(bs.end())), ...);
  return out;
}

}  // namespace ops

/// Lays out instructions. Targets are either program counters or labels that
/// are bound later; `finish` resolves labels and rejects instruction-free cycles.
class Assembler {
 public:
  using Ref = std::uint32_t;
  static constexpr Ref kLabelBit = 0x8000'0000U;

  explicit Assembler(std::vector<Instr> code = {}) : code_(std::move(code)) {}

  Ref label() {
    binds_.push_back(std::nullopt);
    return static_cast<Ref>(binds_.size() - 1) | kLabelBit;
  }
  void bind(Ref label, Ref target) { binds_.at(label & ~kLabelBit) = target; }

  Ref emit(Instr in) {
    code_.push_back(in);
    return static_cast<Ref>(code_.size() - 1);
  }

  std::uint32_t size() const { return static_cast<std::uint32_t>(code_.size()); }
  Instr& at(std::uint32_t pc) { return code_.at(pc); }

  Ref compile(const Block& block, Ref next, std::optional<Ref> brk = std::nullopt) {
    Ref cur = next;
    for (auto it = block.rbegin(); it != block.rend(); ++it) cur = compile(*it, cur, brk);
    return cur;
  }

  Ref compile(const Node& n, Ref next, std::optional<Ref> brk) {
    using K = Node::Kind;
    switch (n.kind) {
      case K::Prim:
        return emit({n.op, n.tape, n.arg, next, 0});
      case K::If: {
        const Ref t = compile(n.body, next, brk);
        const Ref e = compile(n.other, next, brk);
        return emit({Op::Test, n.tape, n.arg, t, e});
      }
      case K::IfStart: {
        const Ref t = compile(n.body, next, brk);
        const Ref e = compile(n.other, next, brk);
        return emit({Op::TestStart, n.tape, 0, t, e});
      }
      case K::While: {
        const Ref head = label();
        const Ref body = compile(n.body, head, next);
        const Ref test = emit({Op::Test, n.tape, n.arg, body, next});
        bind(head, test);
        return test;
      }
      case K::WhileNotStart: {
        const Ref head = label();
        const Ref body = compile(n.body, head, next);
        // TestStart jumps to `next` when at the start, so the branches swap.
        const Ref test = emit({Op::TestStart, n.tape, 0, next, body});
        bind(head, test);
        return test;
      }
      case K::Loop: {
        const Ref head = label();
        const Ref body = compile(n.body, head, next);
        bind(head, body);
        return head;
      }
      case K::Break:
        if (!brk) throw MalformedProgram("break outside of a loop");
        return *brk;
      case K::Compare: {
        const std::size_t a = n.tape, b = n.tape2;
        auto rewound = [&](const Block& tail) {
          using namespace ops;
          return seq(Block{while_not_start(a, {left(a)}), while_not_start(b, {left(b)})}, Block(tail));
        };
        const Ref lt = compile(rewound(n.body), next, brk);
        const Ref eq = compile(rewound(n.other), next, brk);
        const Ref gt = compile(rewound(n.third), next, brk);
        const Ref head = label();
        const Ref step_b = emit({Op::MoveRight, static_cast<std::uint32_t>(b), 0, head, 0});
        const Ref step_a = emit({Op::MoveRight, static_cast<std::uint32_t>(a), 0, step_b, 0});
        const Ref b_in_a = emit({Op::Test, static_cast<std::uint32_t>(b), symset::kBit, step_a, gt});
        const Ref b_out_a = emit({Op::Test, static_cast<std::uint32_t>(b), symset::kBit, lt, eq});
        const Ref test_a = emit({Op::Test, static_cast<std::uint32_t>(a), symset::kBit, b_in_a, b_out_a});
        bind(head, test_a);
        return test_a;
      }
    }
    throw MalformedProgram("unknown node kind");
  }

  Program finish(std::size_t tapes, Ref entry) {
    Program p;
    p.tapes = tapes;
    for (Instr& in : code_) {
      if (in.op == Op::Halt) {
        in.next = in.alt = 0;
        continue;
      }
      in.next = resolve(in.next);
      if (in.op == Op::Test || in.op == Op::TestStart) in.alt = resolve(in.alt);
      else in.alt = 0;
    }
    p.entry = resolve(entry);
    p.code = std::move(code_);
    p.validate();
    return p;
  }

 private:
  Ref resolve(Ref r) const {
    std::size_t hops = 0;
    while (r & kLabelBit) {
      const auto& b = binds_.at(r & ~kLabelBit);
      if (!b) throw MalformedProgram("unbound label");
      r = *b;
      if (++hops > binds_.size()) throw MalformedProgram("loop without any instruction");
    }
    return r;
  }

  std::vector<Instr> code_;
  std::vector<std::optional<Ref>> binds_;
};

/// Expands a structured program; falling off the end halts.
inline Program build(const Block& body, std::size_t tapes) {
  Assembler as;
  const auto end = as.emit({Op::Halt, 0, 0, 0, 0});
  const auto entry = as.compile(body, end);
  return as.finish(tapes, entry);
}

}  // namespace sopt

#pragma once

// Program text format (JSON).
//
// Structured:  { "tapes": k, "body": [ node, ... ] }
//   primitives  {"op": "left"|"right", "tape": t}  {"op": "write", "tape": t, "sym": "0"|"1"|"_"}
//               {"op": "query"}  {"op": "halt"}
//   control     {"if": {"tape": t, "syms": "01_"}, "then": [...], "else": [...]}
//               {"if_start": t, "then": [...], "else": [...]}
//               {"while": {"tape": t, "syms": "1"}, "body": [...]}
//               {"while_not_start": t, "body": [...]}
//               {"loop": [...]}  {"break": true}
//               {"compare": [a, b], "less": [...], "equal": [...], "greater": [...]}
//   macros      {"macro": "rewind"|"erase"|"increment"|"decrement"|"next_string"|"drop_last", "tape": t}
//               {"macro": "write_literal", "tape": t, "bits": "0110"}
//               {"macro": "copy", "src": s, "dst": d}
//               {"macro": "copy_as", "src": s, "dst": d, "sym": "1"}
//               {"macro": "repeat_n", "counter": c, "body": [...]}
//
// Expanded:    { "tapes": k, "entry": e, "code": [ {"op": ..., "tape": t, "next": n, "alt": a, ...}, ... ] }
//
// Machine:     a program in either form plus optional "name" and
//              "bounds": {"step_count": [coefs], "revisions": N, "running_time": description}

#include <nlohmann/json.hpp>

#include "sopt/macros.hpp"
#include "sopt/sopoly_io.hpp"

namespace sopt {

namespace detail {

inline Sym sym_from(const std::string& s) {
  if (s == "0") return Sym::Zero;
  if (s == "1") return Sym::One;
  if (s == "_") return Sym::Blank;
  throw MalformedProgram("bad symbol: " + s);
}

inline std::string sym_name(Sym s) { return s == Sym::Zero ? "0" : s == Sym::One ? "1" : "_"; }

inline std::uint8_t mask_from(const std::string& s) {
  std::uint8_t m = 0;
  for (char c : s) m |= symset::of(sym_from(std::string(1, c)));
  if (m == 0) throw MalformedProgram("empty symbol set");
  return m;
}

inline std::string mask_name(std::uint8_t m) {
  std::string s;
  if (m & symset::kZero) s += '0';
  if (m & symset::kOne) s += '1';
  if (m & symset::kBlank) s += '_';
  return s;
}

inline Block block_from_json(const nlohmann::json& j);

inline Block node_from_json(const nlohmann::json& j) {
  using namespace ops;
  namespace m = macros;
  auto blk = [&](const char* key) { return j.contains(key) ? block_from_json(j.at(key)) : Block{}; };
  auto tape = [&](const char* key) { return j.at(key).get<std::size_t>(); };
  if (j.contains("op")) {
    const auto op = j.at("op").get<std::string>();
    if (op == "left") return {left(tape("tape"))};
    if (op == "right") return {right(tape("tape"))};
    if (op == "write") return {write(tape("tape"), sym_from(j.at("sym").get<std::string>()))};
    if (op == "query") return {query()};
    if (op == "halt") return {halt()};
    throw MalformedProgram("unknown primitive: " + op);
  }
  if (j.contains("if")) {
    const auto& c = j.at("if");
    return {if_sym(c.at("tape").get<std::size_t>(), mask_from(c.at("syms").get<std::string>()), blk("then"), blk("else"))};
  }
  if (j.contains("if_start")) return {if_start(tape("if_start"), blk("then"), blk("else"))};
  if (j.contains("while")) {
    const auto& c = j.at("while");
    return {while_sym(c.at("tape").get<std::size_t>(), mask_from(c.at("syms").get<std::string>()), blk("body"))};
  }
  if (j.contains("while_not_start")) return {while_not_start(tape("while_not_start"), blk("body"))};
  if (j.contains("loop")) return {loop(block_from_json(j.at("loop")))};
  if (j.contains("break")) return {brk()};
  if (j.contains("compare")) {
    const auto ab = j.at("compare").get<std::vector<std::size_t>>();
    if (ab.size() != 2) throw MalformedProgram("compare needs two tapes");
    return m::length_compare(ab[0], ab[1], blk("less"), blk("equal"), blk("greater"));
  }
  if (j.contains("macro")) {
    const auto name = j.at("macro").get<std::string>();
    if (name == "rewind") return m::rewind(tape("tape"));
    if (name == "erase") return m::erase(tape("tape"));
    if (name == "increment") return m::increment(tape("tape"));
    if (name == "decrement") return m::decrement(tape("tape"));
    if (name == "next_string") return m::next_string(tape("tape"));
    if (name == "drop_last") return m::drop_last(tape("tape"));
    if (name == "write_literal") {
      const auto bits = j.at("bits").get<std::string>();
      if (!is_bit_string(bits)) throw MalformedProgram("write_literal needs a bit string");
      return m::write_literal(tape("tape"), bits);
    }
    if (name == "copy") return m::copy(tape("src"), tape("dst"));
    if (name == "copy_as") return m::copy_as(tape("src"), tape("dst"), sym_from(j.at("sym").get<std::string>()));
    if (name == "repeat_n") return m::repeat_n(tape("counter"), blk("body"));
    throw MalformedProgram("unknown macro: " + name);
  }
  throw MalformedProgram("unrecognized program node: " + j.dump());
}

inline Block block_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw MalformedProgram("block must be an array");
  Block out;
  for (const auto& n : j) {
    Block b = node_from_json(n);
    out.insert(out.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
  }
  return out;
}

inline const char* op_name(Op op) {
  switch (op) {
    case Op::MoveLeft: return "left";
    case Op::MoveRight: return "right";
    case Op::Write: return "write";
    case Op::Test: return "test";
    case Op::TestStart: return "test_start";
    case Op::Query: return "query";
    case Op::Halt: return "halt";
  }
  return "?";
}

inline Op op_from(const std::string& s) {
  for (Op op : {Op::MoveLeft, Op::MoveRight, Op::Write, Op::Test, Op::TestStart, Op::Query, Op::Halt})
    if (s == op_name(op)) return op;
  throw MalformedProgram("unknown opcode: " + s);
}

}  // namespace detail

/// Loads either form; the structured form is expanded.
inline Program program_from_json(const nlohmann::json& j) {
  try {
    const auto tapes = j.at("tapes").get<std::size_t>();
    if (j.contains("body")) return build(detail::block_from_json(j.at("body")), tapes);
    Program p;
    p.tapes = tapes;
    p.entry = j.value("entry", 0U);
    for (const auto& ij : j.at("code")) {
      Instr in;
      in.op = detail::op_from(ij.at("op").get<std::string>());
      in.tape = ij.value("tape", 0U);
      if (in.op == Op::Write) in.arg = static_cast<std::uint8_t>(detail::sym_from(ij.at("sym").get<std::string>()));
      if (in.op == Op::Test) in.arg = detail::mask_from(ij.at("syms").get<std::string>());
      in.next = ij.value("next", 0U);
      in.alt = ij.value("alt", 0U);
      p.code.push_back(in);
    }
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedProgram(std::string("malformed program: ") + e.what());
  }
}

inline nlohmann::json to_json(const Program& p) {
  auto code = nlohmann::json::array();
  for (const Instr& in : p.code) {
    nlohmann::json ij{{"op", detail::op_name(in.op)}};
    if (in.op != Op::Halt) ij["tape"] = in.tape;
    if (in.op == Op::Write) ij["sym"] = detail::sym_name(static_cast<Sym>(in.arg));
    if (in.op == Op::Test) ij["syms"] = detail::mask_name(in.arg);
    if (in.op != Op::Halt) ij["next"] = in.next;
    if (in.op == Op::Test || in.op == Op::TestStart) ij["alt"] = in.alt;
    code.push_back(std::move(ij));
  }
  return {{"tapes", p.tapes}, {"entry", p.entry}, {"code", code}};
}

/// A machine file: program plus name and declared bounds.
inline Machine machine_from_json(const nlohmann::json& j) {
  Machine m;
  m.program = program_from_json(j);
  m.name = j.value("name", std::string("machine"));
  if (j.contains("bounds")) {
    const auto& b = j.at("bounds");
    try {
      if (b.contains("step_count")) m.bounds.step_count = unipoly_from_json(b.at("step_count"));
      if (b.contains("revisions")) m.bounds.revisions = b.at("revisions").get<Natural>();
      if (b.contains("running_time")) m.bounds.running_time = description_from_json(b.at("running_time"));
    } catch (const nlohmann::json::exception& e) {
      throw MalformedProgram(std::string("malformed bounds: ") + e.what());
    }
  }
  return m;
}

inline nlohmann::json to_json(const Machine& m) {
  nlohmann::json j = to_json(m.program);
  j["name"] = m.name;
  nlohmann::json b = nlohmann::json::object();
  if (m.bounds.step_count) b["step_count"] = to_json(*m.bounds.step_count);
  if (m.bounds.revisions) b["revisions"] = *m.bounds.revisions;
  if (m.bounds.running_time) b["running_time"] = to_json(*m.bounds.running_time);
  if (!b.empty()) j["bounds"] = b;
  return j;
}

}  // namespace sopt

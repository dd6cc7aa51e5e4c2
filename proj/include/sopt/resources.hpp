#pragma once

// Resource predicates over traces: the length-revision profile o, revision
// counts, step-counts, running-time bounds and Cook's opt bound.

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sopt/sopoly.hpp"
#include "sopt/trace.hpp"

namespace sopt {

/// o(0) = input length; o(n) = max(o(n-1), answer length if step n is a query).
inline std::vector<Natural> revision_profile(const Trace& tr) {
  std::vector<Natural> o(tr.time + 1, tr.input_length);
  auto q = tr.queries.begin();
  for (Natural n = 1; n <= tr.time; ++n) {
    o[n] = o[n - 1];
    if (q != tr.queries.end() && q->step == n) {
      o[n] = std::max(o[n], q->answer_length);
      ++q;
    }
  }
  return o;
}

/// Maximal runs of constant o: o(n) = value for first <= n <= last.
struct ProfileSegment {
  Natural first = 0;
  Natural last = 0;
  Natural value = 0;
};

inline std::vector<ProfileSegment> profile_segments(const Trace& tr) {
  std::vector<ProfileSegment> segs{{0, tr.time, tr.input_length}};
  for (const auto& q : tr.queries) {
    if (q.answer_length <= segs.back().value) continue;
    segs.back().last = q.step - 1;
    segs.push_back({q.step, tr.time, q.answer_length});
  }
  return segs;
}

struct RevisionCount {
  Natural strict_increases = 0;  // steps where o strictly grows
  Natural range_size = 0;        // #o(omega) = strict_increases + 1
};

inline RevisionCount count_revisions(const Trace& tr) {
  const auto segs = profile_segments(tr);
  return {segs.size() - 1, segs.size()};
}

/// Cook's m: max of input length and all answer lengths = o(time).
inline Natural cook_m(const Trace& tr) { return profile_segments(tr).back().value; }

struct Verdict {
  enum class Result { Pass, Fail, Inconclusive };
  Result result = Result::Pass;
  std::string check;
  std::optional<Natural> witness_step;
  Natural observed = 0;
  Natural bound = 0;
  std::string note;

  bool pass() const { return result == Result::Pass; }
  bool fail() const { return result == Result::Fail; }
};

inline const char* to_string(Verdict::Result r) {
  switch (r) {
    case Verdict::Result::Pass: return "pass";
    case Verdict::Result::Fail: return "fail";
    case Verdict::Result::Inconclusive: return "inconclusive";
  }
  return "?";
}

// Bounds are evaluated with saturation: a bound past 2^64 exceeds any
// observable time, so clamping never turns a failure into a pass.

/// n <= t(o(n)) for every n <= time; reports the least violating n.
inline Verdict check_step_count(const Trace& tr, const UniPoly& t) {
  Verdict v;
  v.check = "step-count";
  v.observed = tr.time;
  for (const auto& s : profile_segments(tr)) {
    const Natural allowed = t.saturating(s.value);
    if (s.last > allowed) {
      v.result = Verdict::Result::Fail;
      v.witness_step = std::max(s.first, allowed + 1);
      v.bound = allowed;
      return v;
    }
    v.bound = allowed;
  }
  return v;
}

/// time <= t(m)
inline Verdict check_opt(const Trace& tr, const UniPoly& t) {
  Verdict v;
  v.check = "opt";
  v.observed = tr.time;
  v.bound = t.saturating(cook_m(tr));
  if (v.observed > v.bound) {
    v.result = Verdict::Result::Fail;
    v.witness_step = v.bound + 1;
  }
  return v;
}

/// time <= T(l, input length), l the size function of the run's oracle.
/// With a lower-bound l, T(l) under-approximates the true bound, so only a
/// pass is conclusive; a failure is reported as inconclusive.
inline Verdict check_running_time(const Trace& tr, const Description& bound, const LengthFn& l) {
  Verdict v;
  v.check = "running-time";
  v.observed = tr.time;
  v.bound = eval_saturating(bound, l, tr.input_length);
  if (v.observed > v.bound) {
    v.witness_step = v.bound + 1;
    if (l.lower_bound) {
      v.result = Verdict::Result::Inconclusive;
      v.note = "size function is only a lower bound";
    } else {
      v.result = Verdict::Result::Fail;
    }
  }
  return v;
}

inline nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j{{"check", v.check}, {"verdict", to_string(v.result)}, {"observed", v.observed}, {"bound", v.bound}};
  if (v.witness_step) j["witness_step"] = *v.witness_step;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

// Trace file: a header line, then one line per event in step order. Runs of
// plain steps are written as "first-last plain".
//
//   sopt-trace 1 input_length <n> time <t> status <halted|fuel-exhausted>
//   1-12 plain
//   13 query <query_length> <answer_length>
//   14-56 plain
//   57 halt

inline void write_trace(std::ostream& os, const Trace& tr) {
  os << "sopt-trace 1 input_length " << tr.input_length << " time " << tr.time << " status "
     << (tr.halted ? "halted" : "fuel-exhausted") << '\n';
  const Natural plain_end = tr.halted ? tr.time - 1 : tr.time;
  Natural next = 1;
  auto plain_until = [&](Natural last) {
    if (last < next) return;
    if (last == next) os << next << " plain\n";
    else os << next << '-' << last << " plain\n";
  };
  for (const auto& q : tr.queries) {
    plain_until(q.step - 1);
    os << q.step << " query " << q.query_length << ' ' << q.answer_length << '\n';
    next = q.step + 1;
  }
  plain_until(plain_end);
  if (tr.halted) os << tr.time << " halt\n";
}

inline Trace read_trace(std::istream& is) {
  Trace tr;
  std::string line, magic, key;
  int version = 0;
  if (!std::getline(is, line)) throw std::invalid_argument("empty trace file");
  {
    std::istringstream hs(line);
    std::string status;
    hs >> magic >> version;
    if (magic != "sopt-trace" || version != 1) throw std::invalid_argument("not a trace file");
    while (hs >> key) {
      if (key == "input_length") hs >> tr.input_length;
      else if (key == "time") hs >> tr.time;
      else if (key == "status") hs >> status;
      else throw std::invalid_argument("unknown trace header field: " + key);
    }
    tr.halted = status == "halted";
  }
  Natural expected = 1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string range, kind;
    ls >> range >> kind;
    const auto dash = range.find('-');
    const Natural first = std::stoull(range.substr(0, dash));
    const Natural last = dash == std::string::npos ? first : std::stoull(range.substr(dash + 1));
    if (first != expected || last < first) throw std::invalid_argument("trace events out of order: " + line);
    if (kind == "query") {
      QueryEvent q{first, 0, 0};
      if (!(ls >> q.query_length >> q.answer_length)) throw std::invalid_argument("bad query line: " + line);
      tr.queries.push_back(q);
    } else if (kind != "plain" && kind != "halt") {
      throw std::invalid_argument("unknown event kind: " + kind);
    }
    expected = last + 1;
  }
  if (expected != tr.time + 1) throw std::invalid_argument("trace events do not cover the declared time");
  return tr;
}

inline std::string trace_to_string(const Trace& tr) {
  std::ostringstream os;
  write_trace(os, tr);
  return os.str();
}

}  // namespace sopt

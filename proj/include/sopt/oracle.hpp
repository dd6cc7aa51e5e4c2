#pragma once

// Oracles: total functions on binary strings.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "sopt/natural.hpp"
#include "sopt/sopoly.hpp"

namespace sopt {

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_bit_string(std::string_view s) { return s.find_first_not_of("01") == std::string_view::npos; }

/// Default exhaustive budget: strings of length <= 16, i.e. 2^17 - 1 queries.
inline constexpr std::size_t kDefaultExhaustiveBudget = 16;

/// Calls f(s) for every binary string of length <= max_len, shortest first,
/// lexicographic within a length.
template <class F>
void for_each_string(std::size_t max_len, F&& f) {
  std::string s;
  for (std::size_t len = 0; len <= max_len; ++len) {
    s.assign(len, '0');
    while (true) {
      f(std::as_const(s));
      std::size_t i = len;
      while (i > 0 && s[i - 1] == '1') s[--i] = '0';
      if (i == 0) break;
      s[i - 1] = '1';
    }
  }
}

/// 2^{2^m}: the sparse lengths at which delayed-growth oracles spike.
inline Natural tower_length(std::size_t m) { return pow2(pow2(m)); }

/// Returns m if len == 2^{2^m}.
inline std::optional<std::size_t> tower_index(Natural len) {
  for (std::size_t m = 0; m < 6; ++m)
    if (tower_length(m) == len) return m;
  return std::nullopt;
}

class Oracle {
 public:
  enum class Kind { Table, Pattern, Adaptive, Derived };
  enum class Pattern { Constant, Doubling, Pad, Exponential, DelayedGrowth };

  using Entries = std::map<std::string, std::string, std::less<>>;
  /// Consulted on the first query of each string; sees all earlier answers.
  using Policy = std::function<std::string(std::string_view query, const Entries& memo)>;
  using Function = std::function<std::string(std::string_view)>;

  static Oracle table(Entries entries, std::string default_value = "") {
    Oracle o(Kind::Table);
    o.entries_ = std::make_shared<Entries>(std::move(entries));
    o.default_ = std::move(default_value);
    return o;
  }

  static Oracle constant(std::string value) {
    Oracle o = pattern(Pattern::Constant);
    o.default_ = std::move(value);
    return o;
  }
  static Oracle doubling() { return pattern(Pattern::Doubling); }
  /// a -> 0^{p(|a|)}
  static Oracle pad(UniPoly p) {
    Oracle o = pattern(Pattern::Pad);
    o.poly_ = std::move(p);
    return o;
  }
  /// a -> 0^{2^{|a|}}
  static Oracle exponential() { return pattern(Pattern::Exponential); }

  /// 0^{2^{2^m}} -> 0^{2^{2^{2^m}}} for m <= depth, epsilon elsewhere.
  static Oracle delayed_growth(std::size_t depth) {
    if (depth > 2) throw BudgetExceeded("delayed growth beyond depth 2 needs answers longer than 2^64 bits");
    Oracle o = pattern(Pattern::DelayedGrowth);
    o.depth_ = depth;
    return o;
  }

  static Oracle adaptive(Policy policy) {
    Oracle o(Kind::Adaptive);
    o.policy_ = std::move(policy);
    o.entries_ = std::make_shared<Entries>();
    return o;
  }

  /// A pure oracle given by a function, e.g. a retraction or a machine's output.
  static Oracle derived(Function f, std::string label) {
    Oracle o(Kind::Derived);
    o.function_ = std::make_shared<Function>(std::move(f));
    o.label_ = std::move(label);
    return o;
  }

  Kind kind() const { return kind_; }
  Pattern pattern_kind() const { return pattern_; }
  bool is_pure() const { return kind_ != Kind::Adaptive; }
  const Entries& entries() const { return *entries_; }
  const std::string& default_value() const { return default_; }
  const UniPoly& pad_poly() const { return poly_; }
  std::size_t depth() const { return depth_; }
  const std::string& label() const { return label_; }

  /// Adaptive oracles memoize: the policy runs once per distinct query.
  std::string query(std::string_view a) {
    if (kind_ != Kind::Adaptive) return answer(a);
    if (auto it = entries_->find(a); it != entries_->end()) return it->second;
    if (entries_.use_count() > 1) entries_ = std::make_shared<Entries>(*entries_);
    std::string v = policy_(a, *entries_);
    entries_->emplace(std::string(a), v);
    return v;
  }

  /// Value of a pure oracle. Adaptive oracles only answer from their memo.
  std::string answer(std::string_view a) const {
    switch (kind_) {
      case Kind::Table: {
        auto it = entries_->find(a);
        return it == entries_->end() ? default_ : it->second;
      }
      case Kind::Pattern:
        return pattern_answer(a);
      case Kind::Derived:
        return (*function_)(a);
      case Kind::Adaptive:
        break;
    }
    throw std::logic_error("adaptive oracle has no pure answer function");
  }

  /// |answer(a)| without materializing closed-form answers.
  Natural answer_length(std::string_view a) const {
    if (kind_ == Kind::Pattern) {
      const Natural n = a.size();
      switch (pattern_) {
        case Pattern::Constant: return default_.size();
        case Pattern::Doubling: return mul(2, n);
        case Pattern::Pad: return poly_(n);
        case Pattern::Exponential: return pow2(n);
        case Pattern::DelayedGrowth: return delayed_spike(a).value_or(0);
      }
    }
    return answer(a).size();
  }

  /// Freezes an adaptive oracle into the table it has answered so far.
  Oracle finalized(std::string default_value = "") const {
    if (kind_ != Kind::Adaptive) return *this;
    return table(*entries_, std::move(default_value));
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::Table: return "table(" + std::to_string(entries_->size()) + " entries)";
      case Kind::Adaptive: return "adaptive(" + std::to_string(entries_->size()) + " answered)";
      case Kind::Derived: return label_;
      case Kind::Pattern: break;
    }
    switch (pattern_) {
      case Pattern::Constant: return "constant:" + default_;
      case Pattern::Doubling: return "doubling";
      case Pattern::Pad: return "pad:" + poly_.to_string();
      case Pattern::Exponential: return "exponential";
      case Pattern::DelayedGrowth: return "delayed_growth:" + std::to_string(depth_);
    }
    return "?";
  }

 private:
  explicit Oracle(Kind k) : kind_(k) {}
  static Oracle pattern(Pattern p) {
    Oracle o(Kind::Pattern);
    o.pattern_ = p;
    return o;
  }

  std::optional<Natural> delayed_spike(std::string_view a) const {
    auto m = tower_index(a.size());
    if (!m || *m > depth_) return std::nullopt;
    if (a.find('1') != std::string_view::npos) return std::nullopt;
    return pow2(a.size());
  }

  std::string pattern_answer(std::string_view a) const {
    switch (pattern_) {
      case Pattern::Constant: return default_;
      case Pattern::Doubling: return std::string(a) + std::string(a);
      case Pattern::Pad:
      case Pattern::Exponential:
      case Pattern::DelayedGrowth: {
        const Natural len = answer_length(a);
        if (len > (Natural{1} << 32)) throw BudgetExceeded("closed-form answer too long to materialize");
        return std::string(len, '0');
      }
    }
    return {};
  }

  Kind kind_;
  Pattern pattern_ = Pattern::Constant;
  std::shared_ptr<Entries> entries_ = std::make_shared<Entries>();
  std::string default_;
  UniPoly poly_;
  std::size_t depth_ = 0;
  Policy policy_;
  std::shared_ptr<Function> function_;
  std::string label_;
};

struct SizeValue {
  Natural value = 0;
  bool exact = true;
};

/// max |o(a)| over |a| <= n by enumerating every string; the reference route.
inline Natural size_fn_bruteforce(const Oracle& o, std::size_t n, std::size_t budget = kDefaultExhaustiveBudget) {
  if (n > budget) throw BudgetExceeded("exhaustive size function beyond budget");
  Natural best = 0;
  for_each_string(n, [&](const std::string& a) { best = std::max(best, o.answer_length(a)); });
  return best;
}

/// |o|(n). Exact for tables and patterns, brute force for derived oracles and
/// a lower bound from the memo for adaptive ones.
inline SizeValue size_fn(const Oracle& o, Natural n, std::size_t budget = kDefaultExhaustiveBudget) {
  using K = Oracle::Kind;
  using P = Oracle::Pattern;
  switch (o.kind()) {
    case K::Table: {
      Natural best = 0;
      Natural covered = 0;
      for (const auto& [k, v] : o.entries()) {
        if (k.size() > n) continue;
        best = std::max<Natural>(best, v.size());
        ++covered;
      }
      // 2^{n+1} - 1 strings have length <= n; any gap is answered by the default.
      const bool gap = n >= 62 || covered < pow2(n + 1) - 1;
      if (gap) best = std::max<Natural>(best, o.default_value().size());
      return {best, true};
    }
    case K::Pattern:
      switch (o.pattern_kind()) {
        case P::Constant: return {o.default_value().size(), true};
        case P::Doubling: return {mul(2, n), true};
        case P::Pad: return {o.pad_poly()(n), true};
        case P::Exponential: return {pow2(n), true};
        case P::DelayedGrowth: {
          Natural best = 0;
          for (std::size_t m = 0; m <= o.depth(); ++m)
            if (tower_length(m) <= n) best = pow2(tower_length(m));
          return {best, true};
        }
      }
      break;
    case K::Derived:
      return {size_fn_bruteforce(o, n, budget), true};
    case K::Adaptive: {
      Natural best = 0;
      for (const auto& [k, v] : o.entries())
        if (k.size() <= n) best = std::max<Natural>(best, v.size());
      return {best, false};
    }
  }
  return {0, false};
}

/// The size function as a LengthFn. Exact when the oracle's size function is
/// eventually constant or affine; otherwise tabulated to `bound` with a
/// constant tail and flagged as a lower bound.
inline LengthFn length_fn_of(const Oracle& o, std::size_t bound = kDefaultExhaustiveBudget) {
  using K = Oracle::Kind;
  using P = Oracle::Pattern;
  auto tabulate = [&](std::size_t upto) {
    std::vector<Natural> t;
    for (std::size_t i = 0; i <= upto; ++i) t.push_back(size_fn(o, i, std::max(bound, upto)).value);
    return t;
  };
  if (o.kind() == K::Table) {
    std::size_t longest = 0;
    for (const auto& [k, v] : o.entries()) longest = std::max(longest, k.size());
    return LengthFn(tabulate(longest + 1));
  }
  if (o.kind() == K::Pattern) {
    switch (o.pattern_kind()) {
      case P::Constant: return LengthFn({o.default_value().size()});
      case P::Doubling: return LengthFn::linear(2);
      case P::Pad:
        if (o.pad_poly().degree() <= 1) return LengthFn::linear(o.pad_poly().coefficient(1), o.pad_poly().coefficient(0));
        break;
      case P::Exponential: break;
      case P::DelayedGrowth: return LengthFn(tabulate(static_cast<std::size_t>(tower_length(o.depth()))));
    }
  }
  LengthFn l(tabulate(bound));
  l.lower_bound = true;
  return l;
}

struct MonotoneVerdict {
  bool pass = true;
  std::string shorter;  // witness: |shorter| <= |longer| but |o(shorter)| > |o(longer)|
  std::string longer;
};

/// Exhaustive check of |a| <= |b| => |o(a)| <= |o(b)| over strings of length <= bound.
inline MonotoneVerdict is_length_monotone(const Oracle& o, std::size_t bound,
                                          std::size_t budget = kDefaultExhaustiveBudget) {
  if (!o.is_pure()) throw std::invalid_argument("length monotonicity needs a pure oracle");
  if (bound > budget) throw BudgetExceeded("length-monotone check beyond budget");
  Natural prev_max = 0;
  std::string prev_arg;
  bool have_prev = false;
  for (std::size_t len = 0; len <= bound; ++len) {
    Natural lo = 0, hi = 0;
    std::string arg_lo, arg_hi;
    bool first = true;
    for_each_string(len, [&](const std::string& a) {
      if (a.size() != len) return;
      const Natural v = o.answer_length(a);
      if (first || v < lo) lo = v, arg_lo = a;
      if (first || v > hi) hi = v, arg_hi = a;
      first = false;
    });
    if (have_prev && prev_max > lo) return {false, prev_arg, arg_lo};
    if (hi > lo) return {false, arg_hi, arg_lo};
    if (!have_prev || hi > prev_max) prev_max = hi, prev_arg = arg_hi;
    have_prev = true;
  }
  return {};
}

struct ClassAVerdict {
  bool pass = true;
  std::optional<std::size_t> failing_level;
};

/// |o|(2^{2^n}) >= 2^{2^{2^n}} for every n <= depth.
inline ClassAVerdict in_class_A(const Oracle& o, std::size_t depth) {
  if (depth > 2) throw BudgetExceeded("class A membership is only checkable to depth 2");
  for (std::size_t n = 0; n <= depth; ++n) {
    const Natural g = tower_length(n);
    const SizeValue s = size_fn(o, g, static_cast<std::size_t>(g));
    if (s.value < pow2(g)) return {false, n};
  }
  return {};
}

inline Oracle make_delayed_growth(std::size_t depth) { return Oracle::delayed_growth(depth); }

}  // namespace sopt

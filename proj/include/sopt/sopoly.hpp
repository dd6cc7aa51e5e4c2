#pragma once

// Second-order polynomials as description trees.
//
// A description is an ordered tree whose nodes are multivariate polynomials
// with natural coefficients. A node with k children has arity k + 1: X_0 is
// the scalar argument n and X_i is bound to l(value of child i).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sopt/natural.hpp"

namespace sopt {

using Exponents = std::vector<std::uint32_t>;

/// Single-variable polynomial with natural coefficients, coefficient i for X^i.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Natural> coefficients) : coef_(std::move(coefficients)) { trim(); }

  static UniPoly identity() { return UniPoly({0, 1}); }
  static UniPoly constant(Natural c) { return UniPoly({c}); }

  const std::vector<Natural>& coefficients() const { return coef_; }
  Natural coefficient(std::size_t i) const { return i < coef_.size() ? coef_[i] : 0; }
  std::size_t degree() const { return coef_.empty() ? 0 : coef_.size() - 1; }
  bool is_zero() const { return coef_.empty(); }

  Natural operator()(Natural x) const {
    Natural r = 0;
    for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) r = add(mul(r, x), *it);
    return r;
  }

  /// Evaluation clamped at kSaturated instead of throwing.
  Natural saturating(Natural x) const {
    Natural r = 0;
    for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) r = sat_add(sat_mul(r, x), *it);
    return r;
  }

  /// Coefficient-wise maximum. On naturals this dominates both arguments pointwise.
  friend UniPoly max(const UniPoly& a, const UniPoly& b) {
    std::vector<Natural> c(std::max(a.coef_.size(), b.coef_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::max(a.coefficient(i), b.coefficient(i));
    return UniPoly(std::move(c));
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<Natural> c(std::max(a.coef_.size(), b.coef_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = add(a.coefficient(i), b.coefficient(i));
    return UniPoly(std::move(c));
  }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Natural> c(a.coef_.size() + b.coef_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coef_.size(); ++i)
      for (std::size_t j = 0; j < b.coef_.size(); ++j)
        c[i + j] = add(c[i + j], mul(a.coef_[i], b.coef_[j]));
    return UniPoly(std::move(c));
  }

  /// a(b(X))
  friend UniPoly compose(const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    for (auto it = a.coef_.rbegin(); it != a.coef_.rend(); ++it) r = r * b + UniPoly::constant(*it);
    return r;
  }

  bool operator==(const UniPoly&) const = default;

  std::string to_string() const {
    if (coef_.empty()) return "0";
    std::string s;
    for (std::size_t i = coef_.size(); i-- > 0;) {
      if (coef_[i] == 0) continue;
      if (!s.empty()) s += " + ";
      if (i == 0 || coef_[i] != 1) s += std::to_string(coef_[i]);
      if (i >= 1) s += "n";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

 private:
  void trim() {
    while (!coef_.empty() && coef_.back() == 0) coef_.pop_back();
  }

  std::vector<Natural> coef_;
};

/// Multivariate polynomial in X_0..X_{arity-1}. Zero coefficients are never stored.
class MultiPoly {
 public:
  using Terms = std::map<Exponents, Natural>;

  MultiPoly() : arity_(1) {}
  explicit MultiPoly(std::size_t arity) : arity_(arity) {
    if (arity == 0) throw std::invalid_argument("polynomial arity must be at least 1");
  }

  static MultiPoly constant(std::size_t arity, Natural c) {
    MultiPoly p(arity);
    p.add_term(Exponents(arity, 0), c);
    return p;
  }

  static MultiPoly variable(std::size_t arity, std::size_t index) {
    if (index >= arity) throw std::invalid_argument("variable index out of range");
    MultiPoly p(arity);
    Exponents e(arity, 0);
    e[index] = 1;
    p.add_term(e, 1);
    return p;
  }

  /// Embed a single-variable polynomial as a polynomial in X_0.
  static MultiPoly from_uni(const UniPoly& u, std::size_t arity = 1) {
    MultiPoly p(arity);
    for (std::size_t i = 0; i < u.coefficients().size(); ++i) {
      Exponents e(arity, 0);
      e[0] = static_cast<std::uint32_t>(i);
      p.add_term(e, u.coefficient(i));
    }
    return p;
  }

  std::size_t arity() const { return arity_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponents& e, Natural c) {
    if (e.size() != arity_) throw std::invalid_argument("exponent vector length does not match arity");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) it->second = sopt::add(it->second, c);
  }

  Natural operator()(std::span<const Natural> x) const {
    if (x.size() != arity_) throw std::invalid_argument("point dimension does not match arity");
    Natural r = 0;
    for (const auto& [e, c] : terms_) {
      Natural m = c;
      for (std::size_t i = 0; i < arity_; ++i)
        if (e[i] != 0) m = mul(m, pow(x[i], e[i]));
      r = sopt::add(r, m);
    }
    return r;
  }

  /// Evaluation clamped at kSaturated instead of throwing.
  Natural saturating(std::span<const Natural> x) const {
    if (x.size() != arity_) throw std::invalid_argument("point dimension does not match arity");
    Natural r = 0;
    for (const auto& [e, c] : terms_) {
      Natural m = c;
      for (std::size_t i = 0; i < arity_; ++i)
        if (e[i] != 0) m = sat_mul(m, sat_pow(x[i], e[i]));
      r = sat_add(r, m);
    }
    return r;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    a.require_same_arity(b);
    MultiPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.require_same_arity(b);
    MultiPoly r(a.arity_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.arity_);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, mul(ca, cb));
      }
    return r;
  }

  MultiPoly power(std::uint32_t k) const {
    MultiPoly r = constant(arity_, 1);
    for (std::uint32_t i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Rename variables into a polynomial of arity `new_arity`: X_i becomes X_{target[i]}.
  MultiPoly remap(std::size_t new_arity, std::span<const std::size_t> target) const {
    if (target.size() != arity_) throw std::invalid_argument("remap table size does not match arity");
    MultiPoly r(new_arity);
    for (const auto& [e, c] : terms_) {
      Exponents ne(new_arity, 0);
      for (std::size_t i = 0; i < arity_; ++i) {
        if (target[i] >= new_arity) throw std::invalid_argument("remap target out of range");
        ne[target[i]] += e[i];
      }
      r.add_term(ne, c);
    }
    return r;
  }

  /// Substitute X_i := args[i]; all args share one arity, which becomes the result's arity.
  MultiPoly substitute(std::span<const MultiPoly> args) const {
    if (args.size() != arity_) throw std::invalid_argument("substitution needs one polynomial per variable");
    const std::size_t out = args.front().arity();
    MultiPoly r(out);
    for (const auto& [e, c] : terms_) {
      MultiPoly m = constant(out, c);
      for (std::size_t i = 0; i < arity_; ++i)
        if (e[i] != 0) m = m * args[i].power(e[i]);
      r = r + m;
    }
    return r;
  }

  /// q(n) := t(n, ..., n)
  UniPoly diagonal() const {
    std::vector<Natural> c;
    for (const auto& [e, coef] : terms_) {
      std::size_t d = 0;
      for (auto x : e) d += x;
      if (c.size() <= d) c.resize(d + 1, 0);
      c[d] = sopt::add(c[d], coef);
    }
    return UniPoly(std::move(c));
  }

  bool operator==(const MultiPoly&) const = default;

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms_) {
      if (!s.empty()) s += " + ";
      bool any = false;
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (any) mono += "*";
        mono += "X" + std::to_string(i);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        any = true;
      }
      if (!any) s += std::to_string(c);
      else if (c == 1) s += mono;
      else s += std::to_string(c) + "*" + mono;
    }
    return s;
  }

 private:
  void require_same_arity(const MultiPoly& o) const {
    if (arity_ != o.arity_) throw std::invalid_argument("polynomial arities differ");
  }

  std::size_t arity_;
  Terms terms_;
};

/// Monotone l: table of values at 0..B, extended past B by a tail rule.
class LengthFn {
 public:
  enum class Tail { Constant, Affine };

  LengthFn() : table_{0} {}
  LengthFn(std::vector<Natural> table, Tail tail = Tail::Constant, Natural slope = 0)
      : table_(std::move(table)), tail_(tail), slope_(slope) {
    if (table_.empty()) throw std::invalid_argument("length function table must not be empty");
    for (std::size_t i = 1; i < table_.size(); ++i)
      if (table_[i] < table_[i - 1]) throw std::invalid_argument("length function is not monotone");
    if (tail_ == Tail::Constant) slope_ = 0;
  }

  static LengthFn identity(std::size_t bound = 0) {
    std::vector<Natural> t(bound + 1);
    for (std::size_t i = 0; i <= bound; ++i) t[i] = i;
    return {std::move(t), Tail::Affine, 1};
  }

  static LengthFn linear(Natural slope, Natural offset = 0) { return {{offset}, Tail::Affine, slope}; }

  Natural operator()(Natural n) const {
    if (n < table_.size()) return table_[n];
    const Natural last = table_.back();
    if (tail_ == Tail::Constant) return last;
    return add(last, mul(slope_, n - (table_.size() - 1)));
  }

  Natural saturating(Natural n) const {
    if (n < table_.size()) return table_[n];
    if (tail_ == Tail::Constant) return table_.back();
    return sat_add(table_.back(), sat_mul(slope_, n - (table_.size() - 1)));
  }

  const std::vector<Natural>& table() const { return table_; }
  Tail tail() const { return tail_; }
  Natural slope() const { return slope_; }

  /// Set when the values are only certified lower bounds of a size function.
  bool lower_bound = false;

 private:
  std::vector<Natural> table_;
  Tail tail_ = Tail::Constant;
  Natural slope_ = 0;
};

struct Description {
  MultiPoly node;
  std::vector<Description> children;

  static Description leaf(MultiPoly p) {
    if (p.arity() != 1) throw std::invalid_argument("leaf polynomial must have arity 1");
    return {std::move(p), {}};
  }
  static Description leaf(const UniPoly& p) { return leaf(MultiPoly::from_uni(p)); }

  static Description node_of(MultiPoly p, std::vector<Description> kids) {
    Description d{std::move(p), std::move(kids)};
    if (d.node.arity() != d.children.size() + 1)
      throw std::invalid_argument("node arity must equal number of children + 1");
    return d;
  }

  bool is_leaf() const { return children.empty(); }

  std::size_t height() const {
    std::size_t h = 0;
    for (const auto& c : children) h = std::max(h, c.height() + 1);
    return h;
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& c : children) s += c.size();
    return s;
  }

  /// Throws std::invalid_argument if any node violates the arity rule.
  void validate() const {
    if (node.arity() != children.size() + 1)
      throw std::invalid_argument("node arity " + std::to_string(node.arity()) + " but " +
                                  std::to_string(children.size()) + " children");
    for (const auto& c : children) c.validate();
  }

  template <class F>
  void for_each_node(F&& f) const {
    f(*this);
    for (const auto& c : children) c.for_each_node(f);
  }

  bool operator==(const Description&) const = default;
};

/// Evaluates against any monotone callable l: Natural -> Natural.
template <class L>
Natural eval_with(const Description& t, const L& l, Natural n) {
  std::vector<Natural> x;
  x.reserve(t.children.size() + 1);
  x.push_back(n);
  for (const auto& c : t.children) x.push_back(l(eval_with(c, l, n)));
  return t.node(x);
}

inline Natural eval_description(const Description& t, const LengthFn& l, Natural n) { return eval_with(t, l, n); }

/// Like eval_description, but values beyond 64 bits clamp to kSaturated.
/// Sound for upper-bound checks because every node is monotone.
inline Natural eval_saturating(const Description& t, const LengthFn& l, Natural n) {
  std::vector<Natural> x;
  x.reserve(t.children.size() + 1);
  x.push_back(n);
  for (const auto& c : t.children) x.push_back(l.saturating(eval_saturating(c, l, n)));
  return t.node.saturating(x);
}

namespace detail {

// Root merge shared by sum and product: both roots keep X_0, P's child
// variables stay in place and Q's are shifted past them.
template <class Combine>
Description merge_roots(const Description& p, const Description& q, Combine combine) {
  const std::size_t k = p.children.size();
  const std::size_t m = q.children.size();
  const std::size_t arity = k + m + 1;
  std::vector<std::size_t> tp(k + 1), tq(m + 1);
  for (std::size_t i = 0; i <= k; ++i) tp[i] = i;
  tq[0] = 0;
  for (std::size_t j = 1; j <= m; ++j) tq[j] = k + j;
  Description r;
  r.node = combine(p.node.remap(arity, tp), q.node.remap(arity, tq));
  r.children = p.children;
  r.children.insert(r.children.end(), q.children.begin(), q.children.end());
  return r;
}

}  // namespace detail

inline Description sum_descriptions(const Description& p, const Description& q) {
  return detail::merge_roots(p, q, [](const MultiPoly& a, const MultiPoly& b) { return a + b; });
}

inline Description product_descriptions(const Description& p, const Description& q) {
  return detail::merge_roots(p, q, [](const MultiPoly& a, const MultiPoly& b) { return a * b; });
}

/// P+(l,n) = l(P(l,n))
inline Description apply_plus(const Description& t) {
  return Description::node_of(MultiPoly::variable(2, 1), {t});
}

/// (l,n) -> P(l, Q(l,n))
///
/// Every node of P reads its scalar argument through X_0, so at every node X_0
/// is replaced by Q's root polynomial and Q's root children are appended.
inline Description subst_second_arg(const Description& p, const Description& q) {
  const std::size_t k = p.children.size();
  const std::size_t mq = q.children.size();
  const std::size_t arity = 1 + k + mq;

  std::vector<std::size_t> tq(mq + 1);
  tq[0] = 0;
  for (std::size_t j = 1; j <= mq; ++j) tq[j] = k + j;
  const MultiPoly q_root = q.node.remap(arity, tq);

  std::vector<MultiPoly> args;
  args.reserve(k + 1);
  args.push_back(q_root);
  for (std::size_t i = 1; i <= k; ++i) args.push_back(MultiPoly::variable(arity, i));

  Description r;
  r.node = p.node.substitute(args);
  for (const auto& c : p.children) r.children.push_back(subst_second_arg(c, q));
  r.children.insert(r.children.end(), q.children.begin(), q.children.end());
  return r;
}

/// (l,n) -> P(Q(l,.), n)
///
/// Each edge of P to a child C stands for l(C). With Q as the new length
/// argument it must stand for Q(l, C'), where C' is the transformed child.
/// That value is the root of subst_second_arg(Q, C'), so its root polynomial
/// is inlined for X_i and its children are hung below the node.
inline Description subst_function_arg(const Description& p, const Description& q) {
  if (p.is_leaf()) return p;
  std::vector<Description> inner;
  inner.reserve(p.children.size());
  for (const auto& c : p.children) inner.push_back(subst_second_arg(q, subst_function_arg(c, q)));

  std::size_t arity = 1;
  for (const auto& s : inner) arity += s.children.size();

  std::vector<MultiPoly> args;
  args.push_back(MultiPoly::variable(arity, 0));
  Description r;
  std::size_t offset = 1;
  for (const auto& s : inner) {
    std::vector<std::size_t> target(s.children.size() + 1);
    target[0] = 0;
    for (std::size_t j = 1; j <= s.children.size(); ++j) target[j] = offset + j - 1;
    args.push_back(s.node.remap(arity, target));
    offset += s.children.size();
    r.children.insert(r.children.end(), s.children.begin(), s.children.end());
  }
  r.node = p.node.substitute(args);
  return r;
}

struct Majorant {
  std::size_t height = 0;
  UniPoly bound;
  bool operator==(const Majorant&) const = default;
};

inline Majorant majorant(const Description& t) {
  UniPoly p = UniPoly::identity();
  t.for_each_node([&](const Description& d) { p = max(p, d.node.diagonal()); });
  return {t.height(), std::move(p)};
}

/// p_0 = p(n), p_{i+1} = p(max(n, l(p_i))).
inline Natural eval_pN(const Majorant& m, const LengthFn& l, Natural n, std::size_t i) {
  Natural v = m.bound(n);
  for (std::size_t k = 0; k < i; ++k) v = m.bound(std::max(n, l(v)));
  return v;
}

struct MajorantCheck {
  bool pass = false;
  Natural value = 0;
  Natural bound = 0;
};

inline MajorantCheck check_majorant_bound(const Description& t, const LengthFn& l, Natural n) {
  const Majorant m = majorant(t);
  MajorantCheck c;
  c.value = eval_description(t, l, n);
  c.bound = eval_pN(m, l, n, m.height);
  c.pass = c.value <= c.bound;
  return c;
}

/// The value of revision_iterate(p, N) at (l, n), computed directly with
/// saturation: v = p(n), then N times v = p(v + l(v)).
inline Natural revision_iterate_saturating(const UniPoly& p, std::size_t revisions, const LengthFn& l, Natural n) {
  Natural v = p.saturating(n);
  for (std::size_t i = 0; i < revisions; ++i) v = p.saturating(sat_add(v, l.saturating(v)));
  return v;
}

/// (p o (l + id))^N (p(n)): the running time a machine with step-count p and
/// at most N length revisions is guaranteed to respect.
inline Description revision_iterate(const UniPoly& p, std::size_t revisions) {
  Description d = Description::leaf(p);
  // p(X_0 + X_1) over the identity leaf denotes p(n + l(n)).
  MultiPoly sum = MultiPoly::variable(2, 0) + MultiPoly::variable(2, 1);
  std::vector<MultiPoly> args{sum};
  const Description step =
      Description::node_of(MultiPoly::from_uni(p).substitute(args), {Description::leaf(UniPoly::identity())});
  for (std::size_t i = 0; i < revisions; ++i) d = subst_second_arg(step, d);
  return d;
}

}  // namespace sopt

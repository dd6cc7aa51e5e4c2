#pragma once

// Seeded generators for property sweeps: descriptions, monotone length
// functions and table oracles (length-monotone or arbitrary).

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "sopt/oracle.hpp"
#include "sopt/sopoly.hpp"

namespace sopt::sampling {

using Rng = std::mt19937_64;

inline Natural uniform(Rng& rng, Natural lo, Natural hi) { return std::uniform_int_distribution<Natural>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

struct DescriptionParams {
  std::size_t max_depth = 4;
  std::size_t max_children = 2;
  std::size_t max_terms = 3;
  std::uint32_t max_degree = 2;  // per monomial, total degree
  Natural max_coef = 3;
};

inline std::string random_bits(Rng& rng, std::size_t len) {
  std::string s(len, '0');
  for (char& c : s) c = coin(rng) ? '1' : '0';
  return s;
}

inline MultiPoly random_multipoly(Rng& rng, std::size_t arity, const DescriptionParams& prm) {
  MultiPoly p(arity);
  const std::size_t terms = uniform(rng, 1, prm.max_terms);
  for (std::size_t t = 0; t < terms; ++t) {
    Exponents e(arity, 0);
    const std::uint32_t deg = static_cast<std::uint32_t>(uniform(rng, 0, prm.max_degree));
    for (std::uint32_t d = 0; d < deg; ++d) ++e[uniform(rng, 0, arity - 1)];
    p.add_term(e, uniform(rng, 1, prm.max_coef));
  }
  return p;
}

inline Description random_description(Rng& rng, const DescriptionParams& prm = {}, std::size_t depth_left = 0) {
  if (depth_left == 0) depth_left = prm.max_depth + 1;
  const std::size_t kids = depth_left <= 1 ? 0 : uniform(rng, 0, prm.max_children);
  std::vector<Description> children;
  for (std::size_t i = 0; i < kids; ++i) children.push_back(random_description(rng, prm, depth_left - 1));
  return Description::node_of(random_multipoly(rng, kids + 1, prm), std::move(children));
}

struct LengthFnParams {
  std::size_t max_table = 16;  // values at 0..max_table
  Natural max_value = 64;
  bool allow_affine = false;
  Natural max_slope = 2;
};

inline LengthFn random_length_fn(Rng& rng, const LengthFnParams& prm = {}) {
  const std::size_t len = uniform(rng, 1, prm.max_table + 1);
  std::vector<Natural> v(len);
  for (auto& x : v) x = uniform(rng, 0, prm.max_value);
  std::sort(v.begin(), v.end());
  if (prm.allow_affine && coin(rng)) return LengthFn(std::move(v), LengthFn::Tail::Affine, uniform(rng, 0, prm.max_slope));
  return LengthFn(std::move(v));
}

struct TableParams {
  std::size_t max_key_length = 4;  // all strings up to this length get entries
  std::size_t max_answer = 8;
};

/// A length-monotone table: every string of length k <= K answers with a
/// random string of length f(k), f non-decreasing; longer strings get a
/// default of length >= f(K).
inline Oracle random_reg_table(Rng& rng, const TableParams& prm = {}) {
  const std::size_t K = prm.max_key_length;
  std::vector<Natural> f(K + 1);
  for (auto& x : f) x = uniform(rng, 0, prm.max_answer);
  std::sort(f.begin(), f.end());
  Oracle::Entries e;
  for_each_string(K, [&](const std::string& a) { e.emplace(a, random_bits(rng, f[a.size()])); });
  return Oracle::table(std::move(e), random_bits(rng, uniform(rng, f[K], prm.max_answer)));
}

/// An arbitrary table over strings up to length K (each present with
/// probability 1/2) with random answer lengths.
inline Oracle random_table(Rng& rng, const TableParams& prm = {}) {
  Oracle::Entries e;
  for_each_string(prm.max_key_length, [&](const std::string& a) {
    if (coin(rng)) e.emplace(a, random_bits(rng, uniform(rng, 0, prm.max_answer)));
  });
  return Oracle::table(std::move(e), random_bits(rng, uniform(rng, 0, prm.max_answer)));
}

}  // namespace sopt::sampling

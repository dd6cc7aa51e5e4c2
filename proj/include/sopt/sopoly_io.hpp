#pragma once

// JSON forms:
//   description: { "poly": [ { "exps": [e0, ..., ek], "coef": c } ], "children": [ ... ] }
//   unipoly:     [c0, c1, ...]
//   length fn:   { "table": [v0, ..., vB], "tail": "constant" | "affine", "slope": s }

#include <nlohmann/json.hpp>

#include "sopt/sopoly.hpp"

namespace sopt {

inline nlohmann::json to_json(const MultiPoly& p) {
  auto arr = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) arr.push_back({{"exps", e}, {"coef", c}});
  return arr;
}

inline nlohmann::json to_json(const Description& d) {
  auto kids = nlohmann::json::array();
  for (const auto& c : d.children) kids.push_back(to_json(c));
  return {{"poly", to_json(d.node)}, {"children", kids}};
}

inline nlohmann::json to_json(const UniPoly& p) { return p.coefficients(); }

inline nlohmann::json to_json(const LengthFn& l) {
  nlohmann::json j{{"table", l.table()}, {"tail", l.tail() == LengthFn::Tail::Affine ? "affine" : "constant"}};
  if (l.tail() == LengthFn::Tail::Affine) j["slope"] = l.slope();
  return j;
}

/// Parses a description; the arity rule is checked on every node.
inline Description description_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("poly")) throw std::invalid_argument("description node needs a \"poly\" field");
  std::vector<Description> kids;
  if (j.contains("children"))
    for (const auto& c : j.at("children")) kids.push_back(description_from_json(c));
  const std::size_t arity = kids.size() + 1;
  MultiPoly p(arity);
  for (const auto& m : j.at("poly")) {
    auto exps = m.at("exps").get<Exponents>();
    if (exps.size() != arity)
      throw std::invalid_argument("monomial has " + std::to_string(exps.size()) + " exponents but node has " +
                                  std::to_string(kids.size()) + " children");
    p.add_term(exps, m.at("coef").get<Natural>());
  }
  return Description::node_of(std::move(p), std::move(kids));
}

inline UniPoly unipoly_from_json(const nlohmann::json& j) { return UniPoly(j.get<std::vector<Natural>>()); }

inline LengthFn length_fn_from_json(const nlohmann::json& j) {
  auto table = j.at("table").get<std::vector<Natural>>();
  const std::string tail = j.value("tail", "constant");
  if (tail == "constant") return LengthFn(std::move(table));
  if (tail == "affine") return LengthFn(std::move(table), LengthFn::Tail::Affine, j.value("slope", Natural{0}));
  throw std::invalid_argument("unknown tail rule: " + tail);
}

}  // namespace sopt

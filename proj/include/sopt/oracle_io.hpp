#pragma once

// Oracle spec files:
//   { "kind": "table", "entries": { "0": "11", ... }, "default": "" }
//   { "kind": "pattern", "name": "constant", "value": "0" }
//   { "kind": "pattern", "name": "doubling" | "exponential" }
//   { "kind": "pattern", "name": "pad", "poly": [c0, c1, ...] }
//   { "kind": "pattern", "name": "delayed_growth", "depth": d }
//
// Shorthand accepted on the command line: doubling, exponential, empty,
// constant:<bits>, pad:<c0>,<c1>,..., delayed:<d>.

#include <sstream>

#include <nlohmann/json.hpp>

#include "sopt/oracle.hpp"

namespace sopt {

inline Oracle oracle_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "table") {
    Oracle::Entries entries;
    if (j.contains("entries"))
      for (const auto& [k, v] : j.at("entries").items()) {
        auto s = v.get<std::string>();
        if (!is_bit_string(k) || !is_bit_string(s)) throw std::invalid_argument("table entries must be bit strings");
        entries.emplace(k, s);
      }
    auto def = j.value("default", std::string{});
    if (!is_bit_string(def)) throw std::invalid_argument("default must be a bit string");
    return Oracle::table(std::move(entries), std::move(def));
  }
  if (kind == "pattern") {
    const std::string name = j.at("name").get<std::string>();
    if (name == "constant") {
      auto v = j.value("value", std::string{});
      if (!is_bit_string(v)) throw std::invalid_argument("constant must be a bit string");
      return Oracle::constant(v);
    }
    if (name == "doubling") return Oracle::doubling();
    if (name == "exponential") return Oracle::exponential();
    if (name == "pad") return Oracle::pad(UniPoly(j.at("poly").get<std::vector<Natural>>()));
    if (name == "delayed_growth") return Oracle::delayed_growth(j.at("depth").get<std::size_t>());
    throw std::invalid_argument("unknown pattern: " + name);
  }
  throw std::invalid_argument("unknown or non-serializable oracle kind: " + kind);
}

inline nlohmann::json to_json(const Oracle& o) {
  using K = Oracle::Kind;
  using P = Oracle::Pattern;
  if (o.kind() == K::Table || o.kind() == K::Adaptive) {
    nlohmann::json e = nlohmann::json::object();
    for (const auto& [k, v] : o.entries()) e[k] = v;
    return {{"kind", "table"}, {"entries", e}, {"default", o.default_value()}};
  }
  if (o.kind() == K::Derived) throw std::invalid_argument("derived oracles have no spec form");
  switch (o.pattern_kind()) {
    case P::Constant: return {{"kind", "pattern"}, {"name", "constant"}, {"value", o.default_value()}};
    case P::Doubling: return {{"kind", "pattern"}, {"name", "doubling"}};
    case P::Exponential: return {{"kind", "pattern"}, {"name", "exponential"}};
    case P::Pad: return {{"kind", "pattern"}, {"name", "pad"}, {"poly", o.pad_poly().coefficients()}};
    case P::DelayedGrowth: return {{"kind", "pattern"}, {"name", "delayed_growth"}, {"depth", o.depth()}};
  }
  return {};
}

/// Parses the command-line shorthand; returns nullopt if `s` is not one.
inline std::optional<Oracle> oracle_from_shorthand(std::string_view s) {
  auto arg = [&](std::string_view prefix) -> std::optional<std::string> {
    if (s.substr(0, prefix.size()) == prefix) return std::string(s.substr(prefix.size()));
    return std::nullopt;
  };
  if (s == "doubling") return Oracle::doubling();
  if (s == "exponential") return Oracle::exponential();
  if (s == "empty") return Oracle::constant("");
  if (auto v = arg("constant:")) {
    if (!is_bit_string(*v)) throw std::invalid_argument("constant must be a bit string");
    return Oracle::constant(*v);
  }
  if (auto v = arg("delayed:")) return Oracle::delayed_growth(std::stoul(*v));
  if (auto v = arg("pad:")) {
    std::vector<Natural> c;
    std::stringstream ss(*v);
    for (std::string tok; std::getline(ss, tok, ',');) c.push_back(std::stoull(tok));
    return Oracle::pad(UniPoly(std::move(c)));
  }
  return std::nullopt;
}

}  // namespace sopt

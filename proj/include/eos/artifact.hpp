#pragma once

// JSON persistence of a construction. Keys are emitted in sorted order and
// addresses in lexicographic order, so equal constructions serialize to equal
// bytes.

#include <json.hpp>

#include <algorithm>
#include <string>
#include <variant>
#include <vector>

#include "eos/constructor.hpp"
#include "eos/errors.hpp"
#include "eos/odometer.hpp"
#include "eos/order_term.hpp"
#include "eos/rotation.hpp"

namespace eos {

using json = nlohmann::json;

using AnySystem = std::variant<Odometer, Rotation>;

// "odometer" or "rotation:<cf-spec>".
inline AnySystem parse_system(const std::string& text) {
  if (text == "odometer") return Odometer{};
  if (text.rfind("rotation:", 0) == 0) return Rotation(text.substr(9));
  if (text == "rotation") return Rotation("golden");
  throw ParseError("unknown system '" + text + "'", 0);
}

template <DynamicalSystem Sys>
json artifact_to_json(const Sys& sys, const Construction<typename Sys::Point>& c) {
  json j;
  j["system"] = sys.name();
  j["endpoints"] = {{"x", sys.format_point(c.family.x)}, {"y", sys.format_point(c.family.y)}};
  j["target_term"] = render_term(c.target);
  json eps = json::array();
  for (const auto& e : c.family.epsilons) eps.push_back(e.to_string());
  j["epsilons"] = eps;
  json stages = json::array();
  for (const auto& st : c.family.stages) {
    json pts = json::array();
    for (const auto& p : st.points) pts.push_back(sys.format_point(p));
    stages.push_back({{"eps", st.eps.to_string()}, {"points", pts}});
  }
  j["stages"] = stages;

  std::vector<std::pair<Address, std::string>> addrs;
  addrs.reserve(c.trace.addresses.size());
  for (const auto& [p, a] : c.trace.addresses) addrs.emplace_back(a, sys.format_point(p));
  std::sort(addrs.begin(), addrs.end());
  json ja = json::array();
  for (const auto& [a, p] : addrs) ja.push_back({{"address", a}, {"point", p}});
  json anchors = json::array();
  for (const auto& [a, p] : c.trace.anchors) anchors.push_back({{"path", a}, {"point", sys.format_point(p)}});
  json blocks = json::array();
  for (const auto& b : c.trace.blocks)
    blocks.push_back({{"path", b.path},
                      {"first_stage", b.first_stage},
                      {"anchor_in", b.anchor_in},
                      {"anchor_out", b.anchor_out},
                      {"sizes", b.sizes},
                      {"overhang_in", b.overhang_in},
                      {"overhang_out", b.overhang_out}});
  j["trace"] = {{"addresses", ja},
                {"anchors", anchors},
                {"blocks", blocks},
                {"predicted_sizes", c.trace.predicted_sizes}};
  return j;
}

// Throws ParseError (or SemanticError for an invalid term) on malformed input.
template <DynamicalSystem Sys>
Construction<typename Sys::Point> artifact_from_json(const Sys& sys, const json& j) {
  using Point = typename Sys::Point;
  Construction<Point> c;
  try {
    c.family.x = sys.parse_point(j.at("endpoints").at("x").get<std::string>());
    c.family.y = sys.parse_point(j.at("endpoints").at("y").get<std::string>());
    c.target = parse_term(j.at("target_term").get<std::string>());
    for (const auto& e : j.at("epsilons")) c.family.epsilons.push_back(Rational::parse(e.get<std::string>()));
    for (const auto& st : j.at("stages")) {
      EpsilonChain<Point> chain;
      chain.eps = Rational::parse(st.at("eps").get<std::string>());
      for (const auto& p : st.at("points")) chain.points.push_back(sys.parse_point(p.get<std::string>()));
      c.family.stages.push_back(std::move(chain));
    }
    const json& tr = j.at("trace");
    for (const auto& a : tr.at("addresses"))
      c.trace.addresses.emplace(sys.parse_point(a.at("point").get<std::string>()), a.at("address").get<Address>());
    if (tr.contains("anchors"))
      for (const auto& a : tr.at("anchors"))
        c.trace.anchors.emplace_back(a.at("path").get<Address>(), sys.parse_point(a.at("point").get<std::string>()));
    if (tr.contains("blocks"))
      for (const auto& b : tr.at("blocks")) {
        BlockRecord r;
        r.path = b.at("path").get<Address>();
        r.first_stage = b.at("first_stage").get<int>();
        r.anchor_in = b.at("anchor_in").get<std::string>();
        r.anchor_out = b.at("anchor_out").get<std::string>();
        r.sizes = b.at("sizes").get<std::vector<std::size_t>>();
        r.overhang_in = b.at("overhang_in").get<std::size_t>();
        r.overhang_out = b.at("overhang_out").get<std::size_t>();
        c.trace.blocks.push_back(std::move(r));
      }
    if (tr.contains("predicted_sizes")) c.trace.predicted_sizes = tr.at("predicted_sizes").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed artifact: ") + e.what(), 0);
  } catch (const std::overflow_error& e) {
    throw ParseError(std::string("malformed artifact: ") + e.what(), 0);
  }
  return c;
}

}  // namespace eos

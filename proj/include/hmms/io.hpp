// Copyright 2026 The hereditary-mms Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON documents for instances and allocations.
//
// Instance:
//   { "name": "...", "seed": 7, "n": 2, "m": 3,
//     "items": [{"id": 0, "class": "a"}, ...],
//     "set_system": {"type": "explicit", "maximal_sets": [[0], [1, 2]]}
//               or {"type": "capacity", "classes": [{"items": [0, 1], "capacity": 1}]},
//     "valuations": [{"agent": 0, "values": {"0": "3", "1": "2", "2": "2"}}]
//     -- or, when every agent is identical --
//     "identical_agents": {"values": {...}} }
//
// Rationals are "num/den" strings; integers may be given as JSON numbers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hmms/allocator.hpp"
#include "hmms/errors.hpp"
#include "hmms/instance.hpp"
#include "hmms/rational.hpp"

namespace hmms {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') ++line;
  }
  return line;
}

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), line_of(text, e.byte));
  }
}

inline const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError("expected an object", 0, path);
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing field", 0, path.empty() ? key : path + "." + key);
  return *it;
}

inline std::uint64_t as_uint(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw ParseError("expected a non-negative integer", 0, path);
  }
  return j.get<std::uint64_t>();
}

inline Rational as_rational(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
  } catch (const InputError& e) {
    throw ParseError(e.what(), 0, path);
  }
  throw ParseError("expected a rational string \"num/den\"", 0, path);
}

inline ItemSet as_item_set(const Json& j, std::size_t m, const std::string& path) {
  if (!j.is_array()) throw ParseError("expected an array of item ids", 0, path);
  ItemSet s(m);
  for (std::size_t k = 0; k < j.size(); ++k) {
    auto id = as_uint(j[k], path + "[" + std::to_string(k) + "]");
    if (id >= m) throw ParseError("unknown item id " + std::to_string(id), 0, path + "[" + std::to_string(k) + "]");
    s.insert(static_cast<ItemId>(id));
  }
  return s;
}

inline Json item_array(const ItemSet& s) {
  Json a = Json::array();
  s.for_each([&](ItemId j) { a.push_back(j); });
  return a;
}

inline Json values_object(const Valuation& v) {
  Json o = Json::object();
  for (std::size_t j = 0; j < v.item_count(); ++j) o[std::to_string(j)] = v.values()[j].str();
  return o;
}

inline Valuation parse_values(const Json& j, std::size_t m, const std::string& path) {
  if (!j.is_object()) throw ParseError("expected an object of item values", 0, path);
  std::vector<std::optional<Rational>> vals(m);
  for (const auto& [key, value] : j.items()) {
    std::size_t id = 0;
    try {
      std::size_t used = 0;
      id = std::stoul(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ParseError("item key is not an integer id", 0, path + "." + key);
    }
    if (id >= m) throw ParseError("unknown item id " + key, 0, path + "." + key);
    vals[id] = as_rational(value, path + "." + key);
    if (vals[id]->sign() < 0) throw ParseError("negative item value", 0, path + "." + key);
  }
  std::vector<Rational> out;
  out.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (!vals[k]) throw ParseError("missing value for item " + std::to_string(k), 0, path);
    out.push_back(std::move(*vals[k]));
  }
  return Valuation(std::move(out));
}

}  // namespace detail

inline std::string serialize_instance(const Instance& inst) {
  Json doc;
  doc["name"] = inst.name;
  if (inst.seed) doc["seed"] = *inst.seed;
  doc["n"] = inst.n();
  doc["m"] = inst.m();
  Json items = Json::array();
  for (std::size_t j = 0; j < inst.m(); ++j) {
    Json it;
    it["id"] = j;
    if (!inst.item_labels.empty()) it["class"] = inst.item_labels[j];
    items.push_back(std::move(it));
  }
  doc["items"] = std::move(items);

  Json ss;
  if (inst.spec.is_capacity()) {
    ss["type"] = "capacity";
    Json classes = Json::array();
    for (const auto& c : inst.spec.as_capacity().classes) {
      Json cj;
      cj["items"] = detail::item_array(c.members);
      cj["capacity"] = c.capacity;
      classes.push_back(std::move(cj));
    }
    ss["classes"] = std::move(classes);
  } else {
    ss["type"] = "explicit";
    Json sets = Json::array();
    for (const auto& s : inst.spec.as_explicit().maximal_sets) sets.push_back(detail::item_array(s));
    ss["maximal_sets"] = std::move(sets);
  }
  doc["set_system"] = std::move(ss);

  if (inst.n() > 1 && inst.identical_agents()) {
    doc["identical_agents"] = Json{{"values", detail::values_object(inst.valuations.front())}};
  } else {
    Json vals = Json::array();
    for (std::size_t a = 0; a < inst.n(); ++a) {
      Json vj;
      vj["agent"] = a;
      vj["values"] = detail::values_object(inst.valuations[a]);
      vals.push_back(std::move(vj));
    }
    doc["valuations"] = std::move(vals);
  }
  return doc.dump(1) + "\n";
}

inline Instance parse_instance(std::string_view text) {
  using detail::field;
  const Json doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("instance document must be an object");

  Instance inst;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("expected a string", 0, "name");
    inst.name = it->get<std::string>();
  }
  if (auto it = doc.find("seed"); it != doc.end()) inst.seed = detail::as_uint(*it, "seed");
  const std::size_t n = detail::as_uint(field(doc, "n", ""), "n");
  if (n == 0) throw ParseError("instance needs at least one agent", 0, "n");

  const Json& items = field(doc, "items", "");
  if (!items.is_array()) throw ParseError("expected an array", 0, "items");
  const std::size_t m = items.size();
  if (auto it = doc.find("m"); it != doc.end() && detail::as_uint(*it, "m") != m) {
    throw ParseError("m disagrees with the item list", 0, "m");
  }
  bool labelled = false;
  std::vector<std::string> labels(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::string path = "items[" + std::to_string(k) + "]";
    if (detail::as_uint(field(items[k], "id", path), path + ".id") != k) {
      throw ParseError("item ids must be dense and in order", 0, path + ".id");
    }
    if (auto it = items[k].find("class"); it != items[k].end()) {
      if (!it->is_string()) throw ParseError("expected a string", 0, path + ".class");
      labels[k] = it->get<std::string>();
      labelled = true;
    }
  }
  if (labelled) inst.item_labels = std::move(labels);

  const Json& ss = field(doc, "set_system", "");
  const Json& type = field(ss, "type", "set_system");
  if (!type.is_string()) throw ParseError("expected a string", 0, "set_system.type");
  try {
    if (type == "capacity") {
      const Json& classes = field(ss, "classes", "set_system");
      if (!classes.is_array()) throw ParseError("expected an array", 0, "set_system.classes");
      std::vector<CapacityClass> cls;
      for (std::size_t k = 0; k < classes.size(); ++k) {
        const std::string path = "set_system.classes[" + std::to_string(k) + "]";
        cls.push_back({detail::as_item_set(field(classes[k], "items", path), m, path + ".items"),
                       detail::as_uint(field(classes[k], "capacity", path), path + ".capacity")});
      }
      inst.spec = SetSystem::capacity(m, std::move(cls));
    } else if (type == "explicit") {
      const Json& sets = field(ss, "maximal_sets", "set_system");
      if (!sets.is_array()) throw ParseError("expected an array", 0, "set_system.maximal_sets");
      std::vector<ItemSet> maximal;
      for (std::size_t k = 0; k < sets.size(); ++k) {
        maximal.push_back(detail::as_item_set(sets[k], m, "set_system.maximal_sets[" + std::to_string(k) + "]"));
      }
      inst.spec = SetSystem::explicit_maximal(m, std::move(maximal));
    } else {
      throw ParseError("unknown set-system variant '" + type.get<std::string>() + "'", 0, "set_system.type");
    }
  } catch (const InputError& e) {
    throw ParseError(e.what(), 0, "set_system");
  }

  if (auto it = doc.find("identical_agents"); it != doc.end()) {
    Valuation shared = detail::parse_values(field(*it, "values", "identical_agents"), m, "identical_agents.values");
    inst.valuations.assign(n, shared);
  } else {
    const Json& vals = field(doc, "valuations", "");
    if (!vals.is_array()) throw ParseError("expected an array", 0, "valuations");
    if (vals.size() != n) throw ParseError("expected one valuation per agent", 0, "valuations");
    inst.valuations.resize(n);
    std::vector<bool> seen(n, false);
    for (std::size_t k = 0; k < n; ++k) {
      const std::string path = "valuations[" + std::to_string(k) + "]";
      auto a = detail::as_uint(field(vals[k], "agent", path), path + ".agent");
      if (a >= n || seen[a]) throw ParseError("agent ids must be distinct and below n", 0, path + ".agent");
      seen[a] = true;
      inst.valuations[a] = detail::parse_values(field(vals[k], "values", path), m, path + ".values");
    }
  }
  return inst;
}

/// An allocation together with the run parameters that produced it.
struct AllocationDocument {
  Allocation allocation;
  std::string instance_name;
  std::string method;
  std::optional<Rational> alpha;
  std::optional<Rational> delta;
  EstimateVector mu;  // empty when the method uses no estimates
  std::size_t iterations = 0;

  friend bool operator==(const AllocationDocument&, const AllocationDocument&) = default;
};

/// min over allocated agents with a positive estimate of value / mu.
inline std::optional<Rational> min_ratio_to_mu(const Allocation& alloc, const EstimateVector& mu) {
  std::optional<Rational> best;
  if (mu.empty()) return best;
  for (const auto& e : alloc.trace) {
    if (e.agent >= mu.size() || mu[e.agent].sign() <= 0) continue;
    Rational r = e.value / mu[e.agent];
    if (!best || r < *best) best = r;
  }
  return best;
}

inline std::string serialize_allocation(const AllocationDocument& d) {
  const Allocation& a = d.allocation;
  Json doc;
  doc["instance"] = d.instance_name;
  doc["method"] = d.method;
  doc["n"] = a.bundles.size();
  doc["m"] = a.item_count;
  doc["alpha"] = d.alpha ? Json(d.alpha->str()) : Json(nullptr);
  doc["delta"] = d.delta ? Json(d.delta->str()) : Json(nullptr);
  doc["iterations"] = d.iterations;
  Json mu = Json::array();
  for (const auto& x : d.mu) mu.push_back(x.str());
  doc["mu"] = std::move(mu);

  Json bundles = Json::array();
  for (std::size_t ag = 0; ag < a.bundles.size(); ++ag) {
    if (!a.bundles[ag]) continue;
    bundles.push_back(Json{{"agent", ag}, {"items", detail::item_array(*a.bundles[ag])}});
  }
  doc["bundles"] = std::move(bundles);
  doc["unallocated"] = a.unallocated;

  Json trace = Json::array();
  for (const auto& e : a.trace) {
    trace.push_back(Json{{"phase", e.phase},
                         {"agent", e.agent},
                         {"bundle", e.bundle},
                         {"value", e.value.str()},
                         {"threshold", e.threshold.str()},
                         {"minimal_set", e.minimal_set}});
  }
  doc["trace"] = std::move(trace);

  auto ratio = min_ratio_to_mu(a, d.mu);
  doc["summary"] = Json{{"allocated", a.allocated_count()},
                        {"unallocated", a.unallocated.size()},
                        {"min_ratio_to_mu", ratio ? Json(ratio->str()) : Json(nullptr)}};
  return doc.dump(1) + "\n";
}

inline std::string serialize_allocation(const Allocation& a) {
  AllocationDocument d;
  d.allocation = a;
  return serialize_allocation(d);
}

inline AllocationDocument parse_allocation(std::string_view text) {
  using detail::field;
  const Json doc = detail::parse_json(text);
  if (!doc.is_object()) throw ParseError("allocation document must be an object");
  AllocationDocument d;
  if (auto it = doc.find("instance"); it != doc.end() && it->is_string()) d.instance_name = it->get<std::string>();
  if (auto it = doc.find("method"); it != doc.end() && it->is_string()) d.method = it->get<std::string>();
  if (auto it = doc.find("alpha"); it != doc.end() && !it->is_null()) d.alpha = detail::as_rational(*it, "alpha");
  if (auto it = doc.find("delta"); it != doc.end() && !it->is_null()) d.delta = detail::as_rational(*it, "delta");
  if (auto it = doc.find("iterations"); it != doc.end()) d.iterations = detail::as_uint(*it, "iterations");
  if (auto it = doc.find("mu"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("expected an array", 0, "mu");
    for (std::size_t k = 0; k < it->size(); ++k) d.mu.push_back(detail::as_rational((*it)[k], "mu[" + std::to_string(k) + "]"));
  }

  Allocation& a = d.allocation;
  const std::size_t n = detail::as_uint(field(doc, "n", ""), "n");
  a.item_count = detail::as_uint(field(doc, "m", ""), "m");
  a.bundles.assign(n, std::nullopt);

  const Json& bundles = field(doc, "bundles", "");
  if (!bundles.is_array()) throw ParseError("expected an array", 0, "bundles");
  for (std::size_t k = 0; k < bundles.size(); ++k) {
    const std::string path = "bundles[" + std::to_string(k) + "]";
    auto ag = detail::as_uint(field(bundles[k], "agent", path), path + ".agent");
    if (ag >= n) throw ParseError("agent id out of range", 0, path + ".agent");
    if (a.bundles[ag]) throw ParseError("agent listed twice", 0, path + ".agent");
    a.bundles[ag] = detail::as_item_set(field(bundles[k], "items", path), a.item_count, path + ".items");
  }
  const Json& un = field(doc, "unallocated", "");
  if (!un.is_array()) throw ParseError("expected an array", 0, "unallocated");
  for (std::size_t k = 0; k < un.size(); ++k) {
    auto ag = detail::as_uint(un[k], "unallocated[" + std::to_string(k) + "]");
    if (ag >= n) throw ParseError("agent id out of range", 0, "unallocated[" + std::to_string(k) + "]");
    a.unallocated.push_back(static_cast<AgentId>(ag));
  }

  const Json& trace = field(doc, "trace", "");
  if (!trace.is_array()) throw ParseError("expected an array", 0, "trace");
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const std::string path = "trace[" + std::to_string(k) + "]";
    const Json& t = trace[k];
    TraceEvent e;
    e.phase = detail::as_uint(field(t, "phase", path), path + ".phase");
    e.agent = static_cast<AgentId>(detail::as_uint(field(t, "agent", path), path + ".agent"));
    const Json& b = field(t, "bundle", path);
    if (!b.is_array()) throw ParseError("expected an array", 0, path + ".bundle");
    for (std::size_t q = 0; q < b.size(); ++q) {
      e.bundle.push_back(static_cast<ItemId>(detail::as_uint(b[q], path + ".bundle[" + std::to_string(q) + "]")));
    }
    e.value = detail::as_rational(field(t, "value", path), path + ".value");
    e.threshold = detail::as_rational(field(t, "threshold", path), path + ".threshold");
    if (auto it = t.find("minimal_set"); it != t.end()) {
      if (!it->is_boolean()) throw ParseError("expected a boolean", 0, path + ".minimal_set");
      e.minimal_set = it->get<bool>();
    }
    a.trace.push_back(std::move(e));
  }
  return d;
}

/// One trace record per line.
inline std::string trace_text(const Allocation& a) {
  std::string out;
  for (const auto& e : a.trace) out += trace_line(e) + "\n";
  return out;
}

}  // namespace hmms

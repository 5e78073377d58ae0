#include "coflow/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace coflow {

using json = nlohmann::ordered_json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw StructuralError(std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw StructuralError(std::string("missing field \"") + key + "\"");
  return obj.at(key);
}

std::int64_t as_int(const json& value, const char* what) {
  if (!value.is_number_integer()) throw StructuralError(std::string(what) + " must be an integer");
  return value.get<std::int64_t>();
}

Rational as_rational(const json& value, const char* what) {
  if (value.is_number_integer()) return from_int(value.get<std::int64_t>());
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw StructuralError(std::string(what) + ": " + e.what());
    }
  }
  throw StructuralError(std::string(what) + " must be an integer or a \"p/q\" string");
}

}  // namespace

Instance instance_from_json(const std::string& text) {
  const json doc = parse(text);
  const auto left = as_int(field(doc, "left"), "left");
  const auto right = as_int(field(doc, "right"), "right");
  const json& list = field(doc, "coflows");
  if (!list.is_array()) throw StructuralError("coflows must be a list");
  std::vector<Coflow> coflows;
  for (const json& c : list) {
    Coflow coflow;
    coflow.weight = c.contains("weight") ? as_rational(c.at("weight"), "weight") : Rational(1);
    coflow.release = c.contains("release") ? as_int(c.at("release"), "release") : 0;
    const json& flows = field(c, "flows");
    if (!flows.is_array()) throw StructuralError("flows must be a list");
    for (const json& f : flows) {
      coflow.flows.push_back(Flow{static_cast<int>(as_int(field(f, "u"), "u")),
                                  static_cast<int>(as_int(field(f, "v"), "v")),
                                  f.contains("mult") ? as_int(f.at("mult"), "mult") : 1});
    }
    coflows.push_back(std::move(coflow));
  }
  return Instance(static_cast<int>(left), static_cast<int>(right), std::move(coflows));
}

std::string instance_to_json(const Instance& instance) {
  json doc;
  doc["left"] = instance.left_count();
  doc["right"] = instance.right_count();
  doc["coflows"] = json::array();
  for (const Coflow& c : instance.coflows()) {
    json flows = json::array();
    for (const Flow& f : c.flows) flows.push_back({{"u", f.u}, {"v", f.v}, {"mult", f.mult}});
    doc["coflows"].push_back({{"weight", to_string(c.weight)}, {"release", c.release}, {"flows", flows}});
  }
  return doc.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
  const json doc = parse(text);
  const json& slots = field(doc, "slots");
  if (!slots.is_object()) throw StructuralError("slots must be an object");
  Schedule out;
  for (const auto& [key, entries] : slots.items()) {
    Slot t = 0;
    try {
      std::size_t used = 0;
      t = std::stoll(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw StructuralError("slot key \"" + key + "\" is not an integer");
    }
    if (!entries.is_array()) throw StructuralError("slot " + key + " must hold a list");
    for (const json& e : entries) {
      const auto j = as_int(field(e, "coflow"), "coflow");
      if (j < 0) throw StructuralError("negative coflow index in slot " + key);
      out.add(t, ScheduleEntry{static_cast<std::size_t>(j), static_cast<int>(as_int(field(e, "u"), "u")),
                               static_cast<int>(as_int(field(e, "v"), "v"))});
    }
  }
  return out;
}

std::string schedule_to_json(const Schedule& schedule) {
  // Keys ordered numerically, not lexically.
  std::ostringstream os;
  os << "{\n  \"slots\": {";
  bool first = true;
  for (const auto& [t, entries] : schedule.expand()) {
    json list = json::array();
    for (const ScheduleEntry& e : entries) list.push_back({{"coflow", e.coflow}, {"u", e.u}, {"v", e.v}});
    os << (first ? "\n" : ",\n") << "    \"" << t << "\": " << list.dump();
    first = false;
  }
  os << (first ? "}\n}\n" : "\n  }\n}\n");
  return os.str();
}

DeadlineProfile profile_from_json(const Instance& instance, const std::string& text) {
  const json doc = parse(text);
  const json& list = field(doc, "deadlines");
  if (!list.is_array()) throw StructuralError("deadlines must be a list");
  std::vector<Rational> deadlines;
  for (const json& d : list) deadlines.push_back(as_rational(d, "deadline"));
  if (deadlines.size() != instance.size()) throw StructuralError("deadline count does not match coflow count");
  std::optional<Rational> theta;
  if (doc.contains("theta") && !doc.at("theta").is_null()) theta = as_rational(doc.at("theta"), "theta");
  try {
    return make_profile(instance, std::move(deadlines), theta);
  } catch (const std::invalid_argument& e) {
    throw StructuralError(e.what());
  }
}

std::string profile_to_json(const DeadlineProfile& profile) {
  json doc;
  doc["theta"] = profile.theta ? json(to_string(*profile.theta)) : json(nullptr);
  doc["deadlines"] = json::array();
  for (const Rational& d : profile.deadlines) doc["deadlines"].push_back(to_string(d));
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace coflow

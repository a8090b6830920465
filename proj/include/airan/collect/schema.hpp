#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "airan/error.hpp"
#include "airan/sim/node.hpp"
#include "airan/sim/time.hpp"

namespace airan::collect {

enum class AttrType : std::uint8_t { Number, String, Bool };

std::string to_string(AttrType t);

/// Typed attribute value carried by telemetry records.
using Value = std::variant<double, std::string, bool>;

inline AttrType type_of(const Value& v) {
  switch (v.index()) {
    case 0: return AttrType::Number;
    case 1: return AttrType::String;
    default: return AttrType::Bool;
  }
}

std::string to_string(const Value& v);

/// Declared attribute catalog for a scenario. Filters are type-checked
/// against it and records validated before delivery.
class AttrSchema {
 public:
  void declare(const std::string& name, AttrType type) { attrs_[name] = type; }

  bool has(const std::string& name) const { return attrs_.count(name) > 0; }

  AttrType type(const std::string& name) const {
    auto it = attrs_.find(name);
    if (it == attrs_.end()) raise(Errc::UnknownField, name);
    return it->second;
  }

  const std::map<std::string, AttrType>& attrs() const { return attrs_; }

  /// The attribute set every scenario starts from. Scenarios may declare
  /// more on top.
  static AttrSchema standard();

 private:
  std::map<std::string, AttrType> attrs_;
};

/// One telemetry sample taken at a source node.
struct DataRecord {
  std::optional<sim::NodeId> ue;
  sim::NodeId gnb;
  sim::SimTime time{};
  std::map<std::string, Value> attrs;

  const Value* find(const std::string& name) const {
    auto it = attrs.find(name);
    return it == attrs.end() ? nullptr : &it->second;
  }

  double num(const std::string& name) const {
    const Value* v = find(name);
    if (!v) raise(Errc::MissingAttribute, name);
    return std::get<double>(*v);
  }

  /// Checks every attribute against the schema. Throws UnknownField or
  /// TypeError on drift.
  void validate(const AttrSchema& schema) const;
};

/// Approximate wire size of a record for budget accounting: fixed header
/// plus a per-attribute cost.
std::uint64_t record_bits(const DataRecord& r);

}  // namespace airan::collect

#include "airan/collect/schema.hpp"

#include "airan/sim/trace.hpp"

namespace airan::collect {

std::string to_string(AttrType t) {
  switch (t) {
    case AttrType::Number: return "number";
    case AttrType::String: return "string";
    case AttrType::Bool: return "bool";
  }
  return "?";
}

std::string to_string(const Value& v) {
  switch (v.index()) {
    case 0: return sim::fmt_double(std::get<double>(v));
    case 1: return std::get<std::string>(v);
    default: return std::get<bool>(v) ? "true" : "false";
  }
}

AttrSchema AttrSchema::standard() {
  AttrSchema s;
  s.declare("velocity", AttrType::Number);     // km/h
  s.declare("rsrp", AttrType::Number);         // dBm
  s.declare("sinr", AttrType::Number);         // dB
  s.declare("prb_util", AttrType::Number);     // fraction of cell PRBs
  s.declare("app_type", AttrType::String);
  s.declare("battery_low", AttrType::Bool);
  s.declare("position_x", AttrType::Number);   // meters
  s.declare("position_y", AttrType::Number);
  s.declare("tcp_rtt", AttrType::Number);      // ms
  s.declare("packet_loss", AttrType::Number);  // fraction
  s.declare("ttft", AttrType::Number);         // ms, app-server QoE
  s.declare("domain", AttrType::String);       // source domain stamp
  return s;
}

void DataRecord::validate(const AttrSchema& schema) const {
  for (const auto& [name, value] : attrs) {
    if (!schema.has(name)) raise(Errc::UnknownField, name);
    if (schema.type(name) != type_of(value))
      raise(Errc::TypeError, name + " declared " + to_string(schema.type(name)) + ", carries " +
                                 to_string(type_of(value)));
    if (name == "prb_util") {
      const double f = std::get<double>(value);
      if (f < 0.0 || f > 1.0) raise(Errc::ValidationError, "prb_util out of [0,1]");
    }
  }
}

std::uint64_t record_bits(const DataRecord& r) {
  std::uint64_t bits = 128;  // header: ids + timestamp
  for (const auto& [name, value] : r.attrs) {
    (void)name;
    bits += value.index() == 1 ? 8ull * std::get<std::string>(value).size() + 16 : 64;
  }
  return bits;
}

}  // namespace airan::collect

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "airan/collect/schema.hpp"
#include "airan/sim/node.hpp"
#include "airan/sim/time.hpp"

namespace airan::collect {

// Domains outside the RAN that feed the AI node: application servers (QoE
// metrics such as time-to-first-token), the core network, and OAM counters.
enum class SourceDomain : std::uint8_t { AppServer, Core, Oam };

std::string to_string(SourceDomain d);

/// One configured external source: the attributes it can produce and a
/// scripted column per attribute, replayed row by row (wrapping around).
struct SourceAdapter {
  SourceDomain domain = SourceDomain::AppServer;
  AttrSchema schema;
  std::map<std::string, std::vector<Value>> series;

  void validate() const;  // columns declared in schema, equal non-zero length
  std::size_t rows() const;
};

/// Registry of cross-domain adapters. collect() pulls the next `count`
/// records from a source, stamped with a `domain` attribute and the
/// requesting time, restricted to the requested attributes.
class CrossDomainHub {
 public:
  void configure(SourceAdapter adapter);
  bool configured(SourceDomain d) const { return adapters_.count(d) > 0; }

  /// Throws SourceUnavailable for an unconfigured domain and UnknownField
  /// when a requested attribute is outside the source schema.
  std::vector<DataRecord> collect(SourceDomain d, const std::vector<std::string>& attrs,
                                  std::size_t count, sim::SimTime now);

 private:
  struct State {
    SourceAdapter adapter;
    std::size_t cursor = 0;
  };
  std::map<SourceDomain, State> adapters_;
};

}  // namespace airan::collect

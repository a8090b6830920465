#include "airan/collect/crossdomain.hpp"

#include "airan/error.hpp"

namespace airan::collect {

std::string to_string(SourceDomain d) {
  switch (d) {
    case SourceDomain::AppServer: return "app_server";
    case SourceDomain::Core: return "core";
    case SourceDomain::Oam: return "oam";
  }
  return "?";
}

void SourceAdapter::validate() const {
  if (series.empty()) raise(Errc::ValidationError, "adapter has no scripted columns");
  std::size_t len = 0;
  for (const auto& [name, col] : series) {
    const AttrType t = schema.type(name);  // UnknownField on undeclared column
    for (const Value& v : col)
      if (type_of(v) != t)
        raise(Errc::TypeError, "column " + name + " holds a value of the wrong type");
    if (len == 0) len = col.size();
    if (col.empty() || col.size() != len)
      raise(Errc::ValidationError, "adapter columns must share one non-zero length");
  }
}

std::size_t SourceAdapter::rows() const {
  return series.empty() ? 0 : series.begin()->second.size();
}

void CrossDomainHub::configure(SourceAdapter adapter) {
  adapter.validate();
  adapters_[adapter.domain] = State{std::move(adapter), 0};
}

std::vector<DataRecord> CrossDomainHub::collect(SourceDomain d,
                                                const std::vector<std::string>& attrs,
                                                std::size_t count, sim::SimTime now) {
  auto it = adapters_.find(d);
  if (it == adapters_.end())
    raise(Errc::SourceUnavailable, to_string(d) + " adapter is not configured");
  State& st = it->second;
  for (const std::string& a : attrs)
    if (st.adapter.series.count(a) == 0)
      raise(Errc::UnknownField, "source " + to_string(d) + " does not produce " + a);

  const sim::NodeId origin =
      d == SourceDomain::Oam ? sim::NodeId::oam() : sim::NodeId::core();
  const std::size_t n = st.adapter.rows();
  std::vector<DataRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    DataRecord r;
    r.gnb = origin;
    r.time = now;
    r.attrs.emplace("domain", to_string(d));
    for (const std::string& a : attrs)
      r.attrs.emplace(a, st.adapter.series.at(a)[st.cursor % n]);
    ++st.cursor;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace airan::collect

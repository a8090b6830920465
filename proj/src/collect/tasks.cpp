#include "airan/collect/tasks.hpp"

#include <algorithm>

namespace airan::collect {

namespace {

using sim::NodeId;
using sim::NodeKind;
using sim::SimTime;

SimTime next_boundary(SimTime now, SimTime period) {
  return SimTime{(now.us / period.us + 1) * period.us};
}

}  // namespace

std::string to_string(DeadlineClass c) {
  switch (c) {
    case DeadlineClass::RealTime: return "REAL_TIME";
    case DeadlineClass::NearRt: return "NEAR_RT";
    case DeadlineClass::Oam: return "OAM";
  }
  return "?";
}

sim::SimTime deadline_of(DeadlineClass c) {
  switch (c) {
    case DeadlineClass::RealTime: return sim::kRealTimeDeadline;
    case DeadlineClass::NearRt: return sim::kNearRtDeadline;
    case DeadlineClass::Oam: return sim::kOamReportInterval;
  }
  return {};
}

sim::SimTime reporting_period(DeadlineClass c) {
  switch (c) {
    case DeadlineClass::RealTime: return SimTime::sec(1);  // budget window only
    case DeadlineClass::NearRt: return SimTime::msec(500);
    case DeadlineClass::Oam: return sim::kOamReportInterval;
  }
  return {};
}

Collector::Collector(sim::Engine& eng, AttrSchema schema)
    : eng_(eng), schema_(std::move(schema)) {
  link_load_ = [](NodeId, SimTime) { return 0.3; };
}

TaskHandle Collector::install_task(CollectionTask task) {
  if (task.volume_budget_bits == 0)
    raise(Errc::BudgetInvalid, "task " + task.task_id + ": volume budget must be positive");
  if (task.deadline_class == DeadlineClass::RealTime &&
      task.destination.kind != NodeKind::Gnb && task.destination.kind != NodeKind::AiNode)
    raise(Errc::ValidationError,
          "task " + task.task_id + ": REAL_TIME destination must be a gNB or the AI node");
  for (const std::string& a : task.attributes) schema_.type(a);  // UnknownField on miss
  if (task.destination.kind != NodeKind::Gnb &&
      !eng_.topology().has_link(NodeKind::Gnb, task.destination.kind))
    raise(Errc::UnreachableDestination,
          "task " + task.task_id + ": no path from cells to " + to_string(task.destination));

  TaskState st;
  st.def = std::move(task);
  if (st.def.filter) st.matcher = compile_filter(st.def.filter);
  const TaskHandle h = static_cast<TaskHandle>(tasks_.size());
  tasks_.push_back(std::move(st));

  if (tasks_[h].def.deadline_class != DeadlineClass::RealTime) {
    const SimTime period = reporting_period(tasks_[h].def.deadline_class);
    eng_.schedule(next_boundary(eng_.now(), period), NodeId::ai_node(), NodeId::ai_node(),
                  sim::Timer{sim::timer::kCollectFlush, h, 0});
  }
  return h;
}

void Collector::set_bearer(std::uint32_t ue, AiBearer bearer) {
  bearer.validate();
  ue_state(ue).bearer = bearer;
}

Collector::UeState& Collector::ue_state(std::uint32_t ue) {
  auto it = ues_.find(ue);
  if (it == ues_.end()) {
    UeState st;
    st.bearer.owner_ue = NodeId::ue(ue);
    it = ues_.emplace(ue, std::move(st)).first;
  }
  return it->second;
}

bool Collector::in_scope(const TaskState& t, const DataRecord& rec) const {
  const TaskScope& s = t.def.scope;
  if (!s.cells.empty() &&
      std::find(s.cells.begin(), s.cells.end(), rec.gnb.index) == s.cells.end())
    return false;
  if (!s.ues.empty()) {
    if (!rec.ue) return false;
    if (std::find(s.ues.begin(), s.ues.end(), rec.ue->index) == s.ues.end()) return false;
  }
  if (!s.service_type.empty()) {
    const Value* v = rec.find("app_type");
    if (!v || !std::holds_alternative<std::string>(*v) ||
        std::get<std::string>(*v) != s.service_type)
      return false;
  }
  if (s.area) {
    const Value* x = rec.find("position_x");
    const Value* y = rec.find("position_y");
    if (!x || !y) return false;
    if (!s.area->contains(std::get<double>(*x), std::get<double>(*y))) return false;
  }
  if (s.time && !(rec.time >= s.time->from && rec.time < s.time->to)) return false;
  return true;
}

DataRecord Collector::project(const TaskState& t, const DataRecord& rec) const {
  if (t.def.attributes.empty()) return rec;
  DataRecord out;
  out.ue = rec.ue;
  out.gnb = rec.gnb;
  out.time = rec.time;
  for (const std::string& a : t.def.attributes)
    if (const Value* v = rec.find(a)) out.attrs.emplace(a, *v);
  return out;
}

bool Collector::within_budget(TaskState& t, std::uint64_t bits) {
  const SimTime period = reporting_period(t.def.deadline_class);
  const std::int64_t idx = eng_.now().us / period.us;
  if (idx != t.window) {
    t.window = idx;
    t.window_bits = 0;
  }
  if (t.window_bits + bits > t.def.volume_budget_bits) return false;
  t.window_bits += bits;
  return true;
}

void Collector::offer(const DataRecord& rec, NodeId source) {
  for (TaskHandle h = 0; h < tasks_.size(); ++h) {
    TaskState& t = tasks_[h];
    if (!in_scope(t, rec)) continue;
    t.stats.offered++;
    if (t.matcher && !t.matcher(rec)) continue;
    t.stats.matched++;

    DataRecord proj = project(t, rec);
    const std::uint64_t bits = record_bits(proj);
    if (!within_budget(t, bits)) {
      t.stats.budget_drops++;  // never sent, so not an in-flight message drop
      continue;
    }
    const std::uint32_t id = static_cast<std::uint32_t>(store_.size());
    store_.push_back({h, std::move(proj)});

    if (source.kind == NodeKind::Ue) {
      if (!admit_and_send(source.index, id)) {
        UeState& u = ue_state(source.index);
        u.deferred.push_back(id);
        t.stats.bearer_defers++;
        schedule_retry(source.index);
      }
    } else {
      enter_cell_pipeline(h, id, source);
    }
  }
}

bool Collector::admit_and_send(std::uint32_t ue, std::uint32_t id) {
  UeState& u = ue_state(ue);
  const StoredRecord& sr = store_.at(id);
  if (!u.bearer.allows(AiPayloadKind::TrainingData)) return true;  // swallowed, never retried
  const std::int64_t epoch = eng_.now().us / u.bearer.epoch.us;
  if (epoch != u.epoch) {
    u.epoch = epoch;
    u.epoch_bits = 0;
  }
  const std::uint64_t bits = record_bits(sr.rec);
  const std::uint64_t wire = bits + kReportHeaderBits;
  if (admit_ai_traffic(u.bearer, u.epoch_bits + wire,
                       link_load_(NodeId::ue(ue), eng_.now())) == Admission::Defer)
    return false;
  u.epoch_bits += wire;
  max_ai_share_ = std::max(max_ai_share_, u.bearer.share_of(u.epoch_bits));

  const std::uint32_t batch = static_cast<std::uint32_t>(batches_.size());
  batches_.push_back({id});
  batch_emitted_.push_back(eng_.now());
  sim::CollectionReport rep{sr.task, batch, 1, bits, sr.rec.time};
  eng_.send(NodeId::ue(ue), eng_.attachment().gnb_of(ue), rep, wire);
  return true;
}

void Collector::schedule_retry(std::uint32_t ue) {
  UeState& u = ue_state(ue);
  if (u.retry_scheduled) return;
  u.retry_scheduled = true;
  eng_.schedule(next_boundary(eng_.now(), u.bearer.epoch), NodeId::ue(ue), NodeId::ue(ue),
                sim::Timer{sim::timer::kBearerEpoch, ue, 0});
}

void Collector::enter_cell_pipeline(TaskHandle h, std::uint32_t id, NodeId node) {
  TaskState& t = tasks_[h];
  const DataRecord& rec = store_.at(id).rec;
  const std::uint64_t bits = record_bits(rec);
  if (t.def.deadline_class == DeadlineClass::RealTime) {
    Batch b;
    b.ids = {id};
    b.bits = bits;
    b.oldest = rec.time;
    emit(h, node, std::move(b));
    return;
  }
  Batch& b = t.pending[node];
  if (b.ids.empty() || rec.time < b.oldest) b.oldest = rec.time;
  b.ids.push_back(id);
  b.bits += bits;
}

void Collector::emit(TaskHandle h, NodeId node, Batch batch) {
  TaskState& t = tasks_[h];
  const std::uint32_t bid = static_cast<std::uint32_t>(batches_.size());
  batches_.push_back(std::move(batch.ids));
  batch_emitted_.push_back(eng_.now());
  sim::CollectionReport rep{h, bid, static_cast<std::uint32_t>(batches_.back().size()),
                            batch.bits, batch.oldest};
  if (node == t.def.destination) {
    deliver(h, rep);
    return;
  }
  eng_.send(node, t.def.destination, rep, batch.bits + kReportHeaderBits);
}

void Collector::deliver(TaskHandle h, const sim::CollectionReport& rep) {
  TaskState& t = tasks_[h];
  deliveries_.push_back({h, rep.sampled_at, batch_emitted_.at(rep.batch), eng_.now(),
                         rep.n_records, rep.bits});
  const std::vector<std::uint32_t>& ids = batches_.at(rep.batch);
  t.delivered_ids.insert(t.delivered_ids.end(), ids.begin(), ids.end());
  t.stats.delivered_records += rep.n_records;
  t.stats.delivered_bits += rep.bits;
}

bool Collector::on_event(const sim::Event& ev) {
  if (const auto* rep = std::get_if<sim::CollectionReport>(&ev.payload)) {
    if (!ev.is_message) return false;
    TaskState& t = tasks_.at(rep->task);
    if (ev.dst == t.def.destination) {
      deliver(rep->task, *rep);
      return true;
    }
    // Uplink leg landed on the serving cell; forward or fold into the batch.
    if (t.def.deadline_class == DeadlineClass::RealTime) {
      eng_.send(ev.dst, t.def.destination, *rep, rep->bits + kReportHeaderBits);
      return true;
    }
    Batch& b = t.pending[ev.dst];
    const std::vector<std::uint32_t>& ids = batches_.at(rep->batch);
    if (b.ids.empty() || rep->sampled_at < b.oldest) b.oldest = rep->sampled_at;
    b.ids.insert(b.ids.end(), ids.begin(), ids.end());
    b.bits += rep->bits;
    return true;
  }
  const auto* tm = std::get_if<sim::Timer>(&ev.payload);
  if (!tm) return false;

  if (tm->tag == sim::timer::kCollectFlush) {
    const TaskHandle h = static_cast<TaskHandle>(tm->a);
    TaskState& t = tasks_.at(h);
    for (auto& [node, batch] : t.pending)
      if (!batch.ids.empty()) emit(h, node, std::move(batch));
    t.pending.clear();
    const SimTime period = reporting_period(t.def.deadline_class);
    eng_.schedule(next_boundary(eng_.now(), period), NodeId::ai_node(), NodeId::ai_node(),
                  sim::Timer{sim::timer::kCollectFlush, h, 0});
    return true;
  }
  if (tm->tag == sim::timer::kBearerEpoch) {
    const std::uint32_t ue = static_cast<std::uint32_t>(tm->a);
    UeState& u = ue_state(ue);
    u.retry_scheduled = false;
    while (!u.deferred.empty()) {
      if (admit_and_send(ue, u.deferred.front())) {
        u.deferred.pop_front();
        continue;
      }
      tasks_.at(store_.at(u.deferred.front()).task).stats.bearer_defers++;
      schedule_retry(ue);
      break;
    }
    return true;
  }
  return false;
}

std::uint64_t Collector::pending_deferred() const {
  std::uint64_t n = 0;
  for (const auto& [ue, st] : ues_) n += st.deferred.size();
  return n;
}

}  // namespace airan::collect

#include "doctest.h"

#include <string>
#include <vector>

#include "airan/collect/bearer.hpp"
#include "airan/collect/crossdomain.hpp"
#include "airan/collect/filter.hpp"
#include "airan/collect/schema.hpp"
#include "airan/collect/tasks.hpp"
#include "airan/sim/engine.hpp"
#include "airan/sim/rng.hpp"

using namespace airan;
using namespace airan::collect;
using sim::NodeId;
using sim::SimTime;

namespace {

const std::vector<std::string> kStrings = {"video", "gaming", "voice", "web"};

DataRecord full_record(sim::Rng& rng) {
  DataRecord r;
  r.gnb = NodeId::gnb(0);
  r.attrs = {
      {"velocity", rng.uniform(0, 350)},
      {"rsrp", rng.uniform(-120, -80)},
      {"sinr", rng.uniform(-10, 25)},
      {"prb_util", rng.uniform01()},
      {"app_type", kStrings[rng.below(kStrings.size())]},
      {"battery_low", rng.bernoulli(0.2)},
      {"position_x", rng.uniform(0, 2000)},
      {"position_y", rng.uniform(0, 2000)},
      {"tcp_rtt", rng.uniform(5, 200)},
      {"packet_loss", rng.uniform01() * 0.2},
      {"ttft", rng.uniform(50, 2000)},
      {"domain", std::string("ran")},
  };
  return r;
}

Value gen_literal(sim::Rng& rng, AttrType t) {
  switch (t) {
    case AttrType::Number: return rng.uniform(-200, 400);
    case AttrType::String: return kStrings[rng.below(kStrings.size())];
    case AttrType::Bool: return rng.bernoulli(0.5);
  }
  return 0.0;
}

FilterPtr gen_ast(sim::Rng& rng, const AttrSchema& schema, int depth) {
  std::vector<std::pair<std::string, AttrType>> fields(schema.attrs().begin(),
                                                       schema.attrs().end());
  const std::uint64_t pick = rng.below(depth > 0 ? 5 : 2);
  if (pick >= 2) {
    if (pick == 2) return FilterExpr::make_not(gen_ast(rng, schema, depth - 1));
    FilterPtr l = gen_ast(rng, schema, depth - 1);
    FilterPtr r = gen_ast(rng, schema, depth - 1);
    return pick == 3 ? FilterExpr::make_and(l, r) : FilterExpr::make_or(l, r);
  }
  const auto& [field, type] = fields[rng.below(fields.size())];
  if (type != AttrType::Bool && rng.bernoulli(0.25)) {
    std::vector<Value> members;
    const std::uint64_t n = 1 + rng.below(3);
    for (std::uint64_t i = 0; i < n; ++i) members.push_back(gen_literal(rng, type));
    return FilterExpr::make_in(field, std::move(members));
  }
  CmpOp op;
  if (type == AttrType::Number)
    op = static_cast<CmpOp>(rng.below(6));
  else
    op = rng.bernoulli(0.5) ? CmpOp::Eq : CmpOp::Ne;
  return FilterExpr::make_cmp(field, op, gen_literal(rng, type));
}

// Test-side harness: timer-driven sample feed into a collector.
struct Harness {
  sim::Topology topo;
  sim::Engine eng;
  AttrSchema schema = AttrSchema::standard();
  Collector col;
  std::vector<DataRecord> feed;
  std::vector<NodeId> feed_src;

  explicit Harness(std::uint32_t gnbs = 2, std::uint32_t ues = 4)
      : topo(sim::Topology::standard(gnbs, ues)), eng(topo, 5), col(eng, AttrSchema::standard()) {
    eng.set_handler([this](sim::Engine&, const sim::Event& ev) {
      if (col.on_event(ev)) return;
      if (const auto* t = std::get_if<sim::Timer>(&ev.payload);
          t && t->tag == sim::timer::kSample)
        col.offer(feed[t->a], feed_src[t->a]);
    });
  }

  void push(SimTime at, DataRecord rec, NodeId src) {
    rec.time = at;
    feed.push_back(std::move(rec));
    feed_src.push_back(src);
    eng.schedule(at, src, src, sim::Timer{sim::timer::kSample, feed.size() - 1, 0});
  }
};

DataRecord radio_sample(double rsrp, double velocity = 50.0) {
  DataRecord r;
  r.gnb = NodeId::gnb(0);
  r.attrs = {{"rsrp", rsrp}, {"velocity", velocity}, {"prb_util", 0.4}};
  return r;
}

}  // namespace

TEST_CASE("filter parsing covers the documented shapes") {
  const AttrSchema schema = AttrSchema::standard();

  FilterPtr f = parse_filter("velocity > 250", schema);
  CHECK(f->kind == FilterExpr::Kind::Comparison);
  CHECK(f->field == "velocity");
  CHECK(f->op == CmpOp::Gt);
  CHECK(std::get<double>(f->literal) == 250.0);

  FilterPtr g = parse_filter("(rsrp < -105) AND (prb_util >= 0.5)", schema);
  REQUIRE(g->kind == FilterExpr::Kind::And);
  CHECK(g->lhs->field == "rsrp");
  CHECK(g->lhs->op == CmpOp::Lt);
  CHECK(std::get<double>(g->lhs->literal) == -105.0);
  CHECK(g->rhs->field == "prb_util");
  CHECK(g->rhs->op == CmpOp::Ge);
  CHECK(std::get<double>(g->rhs->literal) == 0.5);

  // Precedence: NOT binds tighter than AND, AND tighter than OR.
  FilterPtr h = parse_filter(
      "app_type == \"video\" OR prb_util > 0.8 AND NOT battery_low == true", schema);
  REQUIRE(h->kind == FilterExpr::Kind::Or);
  REQUIRE(h->rhs->kind == FilterExpr::Kind::And);
  CHECK(h->rhs->rhs->kind == FilterExpr::Kind::Not);

  // Left association of chains.
  FilterPtr c = parse_filter("sinr > 0 AND sinr < 20 AND velocity <= 30", schema);
  REQUIRE(c->kind == FilterExpr::Kind::And);
  CHECK(c->lhs->kind == FilterExpr::Kind::And);
  CHECK(c->rhs->kind == FilterExpr::Kind::Comparison);

  FilterPtr m = parse_filter("app_type IN [\"video\", \"gaming\"]", schema);
  REQUIRE(m->kind == FilterExpr::Kind::Membership);
  CHECK(m->members.size() == 2);
}

TEST_CASE("filter parse errors carry position and category") {
  const AttrSchema schema = AttrSchema::standard();

  CHECK_THROWS_WITH_AS(parse_filter("", schema), doctest::Contains("position 0"), Error);
  CHECK_THROWS_WITH_AS(parse_filter("velocity >", schema), doctest::Contains("literal"), Error);
  CHECK_THROWS_WITH_AS(parse_filter("velocity > 250)", schema),
                       doctest::Contains("end of input"), Error);
  CHECK_THROWS_WITH_AS(parse_filter("(velocity > 250", schema), doctest::Contains("')'"), Error);

  try {
    parse_filter("velocity >< 2", schema);
    FAIL("expected syntax error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SyntaxError);
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }

  try {
    parse_filter("speed > 3", schema);
    FAIL("expected unknown field");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownField);
  }

  // Type discipline: literal type must match, ordering needs numbers,
  // IN rejects booleans.
  try {
    parse_filter("velocity == \"fast\"", schema);
    FAIL("expected type error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TypeError);
  }
  CHECK_THROWS_AS(parse_filter("app_type > \"video\"", schema), Error);
  CHECK_THROWS_AS(parse_filter("battery_low IN [true]", schema), Error);
  CHECK_NOTHROW(parse_filter("battery_low == true", schema));
  CHECK_NOTHROW(parse_filter("velocity IN [10, 20, 30]", schema));
}

TEST_CASE("print then parse reproduces the structure of generated asts") {
  const AttrSchema schema = AttrSchema::standard();
  sim::Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    FilterPtr ast = gen_ast(rng, schema, 4);
    const std::string text = print_filter(*ast);
    CAPTURE(text);
    FilterPtr back = parse_filter(text, schema);
    CHECK(back->structurally_equal(*ast));
    // Printing is canonical: a second round trip yields the same text.
    CHECK(print_filter(*back) == text);
  }
}

TEST_CASE("filter evaluation boundary semantics") {
  const AttrSchema schema = AttrSchema::standard();
  FilterPtr f = parse_filter("velocity > 250", schema);

  DataRecord fast;
  fast.gnb = NodeId::gnb(0);
  fast.attrs = {{"velocity", 300.0}};
  DataRecord edge = fast;
  edge.attrs["velocity"] = 250.0;
  CHECK(eval_filter(*f, fast));
  CHECK_FALSE(eval_filter(*f, edge));  // strict inequality at the boundary

  DataRecord empty;
  empty.gnb = NodeId::gnb(0);
  try {
    eval_filter(*f, empty);
    FAIL("expected missing attribute");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingAttribute);
  }
  // The compiled path agrees.
  CHECK_THROWS_AS(compile_filter(f)(empty), Error);
}

TEST_CASE("compiled filters agree with the naive interpreter everywhere") {
  const AttrSchema schema = AttrSchema::standard();
  sim::Rng rng(7);
  std::uint64_t included = 0, total = 0;
  for (int round = 0; round < 500; ++round) {
    FilterPtr ast = gen_ast(rng, schema, 3);
    CompiledFilter compiled = compile_filter(ast);
    for (int k = 0; k < 50; ++k) {
      const DataRecord rec = full_record(rng);
      const bool naive = eval_filter(*ast, rec);
      CHECK(compiled(rec) == naive);
      included += naive ? 1 : 0;
      ++total;
    }
  }
  // The generator must exercise both outcomes heavily for the check to
  // mean anything.
  CHECK(included > total / 10);
  CHECK(included < total * 9 / 10);
}

TEST_CASE("bearer admission respects the cap and the basic load") {
  AiBearer b;
  b.owner_ue = NodeId::ue(0);
  b.link_capacity_bps = 50'000'000;
  b.epoch = SimTime::msec(100);  // 5,000,000 bits per epoch
  b.cap_fraction = 0.2;
  b.validate();

  CHECK(b.share_of(500'000) == doctest::Approx(0.1));
  CHECK(admit_ai_traffic(b, 500'000, 0.5) == Admission::Send);     // share 0.1
  CHECK(admit_ai_traffic(b, 1'250'000, 0.5) == Admission::Defer);  // share 0.25 > cap
  CHECK(admit_ai_traffic(b, 1'000'000, 0.5) == Admission::Send);   // share 0.2 == cap
  CHECK(admit_ai_traffic(b, 500'000, 0.95) == Admission::Defer);   // 0.95 + 0.1 > 1
  CHECK(admit_ai_traffic(b, 250'000, 0.95) == Admission::Send);    // 0.95 + 0.05 == 1

  AiBearer bad = b;
  bad.cap_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(admit_ai_traffic(b, 1, 1.25), Error);
}

TEST_CASE("task installation validates budget, destination and attributes") {
  Harness h;
  CollectionTask t;
  t.task_id = "bad-budget";
  t.destination = NodeId::ai_node();
  t.volume_budget_bits = 0;
  CHECK_THROWS_AS(h.col.install_task(t), Error);

  t.task_id = "rt-to-oam";
  t.volume_budget_bits = 1'000'000;
  t.deadline_class = DeadlineClass::RealTime;
  t.destination = NodeId::oam();
  try {
    h.col.install_task(t);
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ValidationError);
  }

  t.task_id = "bad-attr";
  t.deadline_class = DeadlineClass::NearRt;
  t.destination = NodeId::ai_node();
  t.attributes = {"nonexistent"};
  try {
    h.col.install_task(t);
    FAIL("expected unknown field");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownField);
  }

  // A destination kind the cells cannot reach.
  sim::Topology cut = sim::Topology::standard(2, 4);
  cut.link_latency.erase({sim::NodeKind::Gnb, sim::NodeKind::Core});
  cut.link_latency.erase({sim::NodeKind::Core, sim::NodeKind::Gnb});
  sim::Engine eng(cut, 1);
  Collector col(eng, AttrSchema::standard());
  CollectionTask far;
  far.task_id = "to-core";
  far.destination = NodeId::core();
  far.volume_budget_bits = 1'000;
  try {
    col.install_task(far);
    FAIL("expected unreachable destination");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnreachableDestination);
  }
}

TEST_CASE("real-time reports land within ten milliseconds of the sample") {
  Harness h;
  CollectionTask t;
  t.task_id = "rt";
  t.deadline_class = DeadlineClass::RealTime;
  t.destination = NodeId::ai_node();
  t.volume_budget_bits = 1'000'000;
  t.attributes = {"rsrp", "prb_util"};
  const TaskHandle rt = h.col.install_task(t);

  // Cell-side samples and one UE-side sample.
  h.push(SimTime::msec(1), radio_sample(-95), NodeId::gnb(0));
  h.push(SimTime::msec(2), radio_sample(-101), NodeId::gnb(1));
  DataRecord ue_rec = radio_sample(-99);
  ue_rec.ue = NodeId::ue(0);
  h.push(SimTime::msec(3), ue_rec, NodeId::ue(0));

  const sim::RunStats stats = h.eng.run(SimTime::sec(1));
  CHECK(stats.conserved());
  REQUIRE(h.col.deliveries().size() == 3);
  for (const Delivery& d : h.col.deliveries()) {
    CHECK(d.task == rt);
    CHECK(d.n_records == 1);
    CHECK((d.delivered_at - d.sampled_at) <= sim::kRealTimeDeadline);
  }
  CHECK(h.col.stats(rt).delivered_records == 3);
  CHECK(h.col.stats(rt).matched == 3);
}

TEST_CASE("a real-time task delivering into its own cell has no hop") {
  Harness h;
  CollectionTask t;
  t.task_id = "local";
  t.deadline_class = DeadlineClass::RealTime;
  t.destination = NodeId::gnb(0);
  t.volume_budget_bits = 1'000'000;
  h.col.install_task(t);
  h.push(SimTime::msec(4), radio_sample(-90), NodeId::gnb(0));
  h.eng.run(SimTime::sec(1));
  REQUIRE(h.col.deliveries().size() == 1);
  CHECK(h.col.deliveries()[0].delivered_at == SimTime::msec(4));
}

TEST_CASE("oam tasks batch on the fifteen-minute marks") {
  Harness h;
  CollectionTask t;
  t.task_id = "counters";
  t.deadline_class = DeadlineClass::Oam;
  t.destination = NodeId::oam();
  t.volume_budget_bits = 10'000'000;
  const TaskHandle oam = h.col.install_task(t);

  for (int k = 0; k < 30; ++k)
    h.push(SimTime::sec(k * 60 + 1), radio_sample(-95.0 - k), NodeId::gnb(0));

  const sim::RunStats stats = h.eng.run(SimTime::minutes(31));
  CHECK(stats.conserved());
  REQUIRE(h.col.deliveries().size() == 2);
  for (const Delivery& d : h.col.deliveries()) {
    CHECK(d.emitted_at.us % sim::kOamReportInterval.us == 0);
    CHECK(d.n_records == 15);
  }
  CHECK(h.col.deliveries()[0].emitted_at == SimTime::minutes(15));
  CHECK(h.col.deliveries()[1].emitted_at == SimTime::minutes(30));
  CHECK(h.col.stats(oam).delivered_records == 30);
}

TEST_CASE("near-real-time batches stay under their one second deadline") {
  Harness h;
  CollectionTask t;
  t.task_id = "nrt";
  t.deadline_class = DeadlineClass::NearRt;
  t.destination = NodeId::ai_node();
  t.volume_budget_bits = 10'000'000;
  const TaskHandle nrt = h.col.install_task(t);

  h.push(SimTime::msec(100), radio_sample(-90), NodeId::gnb(0));
  h.push(SimTime::msec(300), radio_sample(-91), NodeId::gnb(0));
  h.push(SimTime::msec(600), radio_sample(-92), NodeId::gnb(0));

  h.eng.run(SimTime::sec(2));
  REQUIRE(h.col.deliveries().size() == 2);
  CHECK(h.col.deliveries()[0].n_records == 2);
  CHECK(h.col.deliveries()[1].n_records == 1);
  for (const Delivery& d : h.col.deliveries())
    CHECK((d.delivered_at - d.sampled_at) <= sim::kNearRtDeadline);
  CHECK(h.col.stats(nrt).delivered_records == 3);
}

TEST_CASE("budget overflow drops the newest records and counts them") {
  Harness h;
  DataRecord probe = radio_sample(-90);
  probe.time = SimTime::msec(1);
  const std::uint64_t one = record_bits(probe);

  CollectionTask t;
  t.task_id = "tight";
  t.deadline_class = DeadlineClass::NearRt;
  t.destination = NodeId::ai_node();
  t.volume_budget_bits = 3 * one;  // three records per period, no more
  const TaskHandle tight = h.col.install_task(t);

  for (int k = 0; k < 5; ++k)
    h.push(SimTime::msec(10 + k), radio_sample(-90), NodeId::gnb(0));

  h.eng.run(SimTime::sec(1));
  const TaskStats& st = h.col.stats(tight);
  CHECK(st.matched == 5);
  CHECK(st.budget_drops == 2);
  CHECK(st.delivered_records == 3);
  CHECK(st.delivered_bits <= t.volume_budget_bits);
  // The survivors are the oldest three samples.
  const auto& ids = h.col.delivered_ids(tight);
  REQUIRE(ids.size() == 3);
  for (std::size_t i = 0; i < ids.size(); ++i)
    CHECK(h.col.record(ids[i]).time == SimTime::msec(10 + static_cast<std::int64_t>(i)));
}

TEST_CASE("ue reports defer at the bearer and drain epoch by epoch") {
  Harness h;
  CollectionTask t;
  t.task_id = "ue-feed";
  t.deadline_class = DeadlineClass::NearRt;
  t.destination = NodeId::ai_node();
  t.volume_budget_bits = 1'000'000;
  t.attributes = {"rsrp"};
  const TaskHandle task = h.col.install_task(t);

  // One projected record is 128 + 64 bits, plus the 128-bit report header:
  // 320 bits on the wire. With 10 kbit/s over a 100 ms epoch the bearer
  // carries 1,000 bits per epoch, so the cap of 0.35 admits exactly one
  // report per epoch (share 0.32).
  AiBearer b;
  b.owner_ue = NodeId::ue(0);
  b.link_capacity_bps = 10'000;
  b.epoch = SimTime::msec(100);
  b.cap_fraction = 0.35;
  h.col.set_bearer(0, b);

  for (int k = 0; k < 3; ++k) {
    DataRecord rec = radio_sample(-90.0 - k);
    rec.ue = NodeId::ue(0);
    h.push(SimTime::msec(1 + k), rec, NodeId::ue(0));
  }

  const sim::RunStats stats = h.eng.run(SimTime::sec(2));
  CHECK(stats.conserved());
  const TaskStats& st = h.col.stats(task);
  CHECK(st.matched == 3);
  CHECK(st.delivered_records == 3);
  CHECK(st.bearer_defers >= 2);
  CHECK(h.col.pending_deferred() == 0);
  CHECK(h.col.max_ai_share() <= 0.35);
  CHECK(h.col.max_ai_share() == doctest::Approx(0.32));
}

TEST_CASE("delivered set equals the brute-force filter of the sample log") {
  Harness h;
  CollectionTask t;
  t.task_id = "fast-ues";
  t.deadline_class = DeadlineClass::NearRt;
  t.destination = NodeId::ai_node();
  t.volume_budget_bits = 100'000'000;
  t.filter = parse_filter("velocity > 250", h.schema);
  const TaskHandle task = h.col.install_task(t);

  sim::Rng rng(31);
  std::vector<DataRecord> offered;
  for (int k = 0; k < 200; ++k) {
    // Ten percent high-speed population.
    const double v = rng.bernoulli(0.1) ? rng.uniform(251, 350) : rng.uniform(0, 240);
    DataRecord rec = radio_sample(-95, v);
    h.push(SimTime::msec(2 * k), rec, NodeId::gnb(0));
    rec.time = SimTime::msec(2 * k);
    offered.push_back(rec);
  }

  h.eng.run(SimTime::sec(2));

  std::vector<SimTime> expected;
  for (const DataRecord& r : offered)
    if (eval_filter(*t.filter, r)) expected.push_back(r.time);

  const auto& ids = h.col.delivered_ids(task);
  REQUIRE(ids.size() == expected.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    CHECK(h.col.record(ids[i]).time == expected[i]);
    CHECK(h.col.record(ids[i]).num("velocity") > 250);
  }
  CHECK(h.col.stats(task).offered == 200);
}

TEST_CASE("cross-domain adapters replay scripted series with provenance") {
  CrossDomainHub hub;

  AttrSchema app_schema;
  app_schema.declare("ttft", AttrType::Number);
  app_schema.declare("tcp_rtt", AttrType::Number);

  SourceAdapter app;
  app.domain = SourceDomain::AppServer;
  app.schema = app_schema;
  app.series["ttft"] = {120.0, 340.0, 90.0};
  app.series["tcp_rtt"] = {40.0, 55.0, 41.0};
  hub.configure(app);

  auto recs = hub.collect(SourceDomain::AppServer, {"ttft"}, 5, SimTime::sec(3));
  REQUIRE(recs.size() == 5);
  CHECK(std::get<std::string>(*recs[0].find("domain")) == "app_server");
  CHECK(recs[0].num("ttft") == 120.0);
  CHECK(recs[1].num("ttft") == 340.0);
  CHECK(recs[2].num("ttft") == 90.0);
  CHECK(recs[3].num("ttft") == 120.0);  // wrap-around
  CHECK(recs[0].time == SimTime::sec(3));
  CHECK(recs[0].gnb == NodeId::core());

  try {
    hub.collect(SourceDomain::Core, {"packet_loss"}, 1, SimTime::zero());
    FAIL("expected source unavailable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SourceUnavailable);
  }
  try {
    hub.collect(SourceDomain::AppServer, {"packet_loss"}, 1, SimTime::zero());
    FAIL("expected unknown field");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownField);
  }

  SourceAdapter ragged = app;
  ragged.series["ttft"] = {1.0};
  CHECK_THROWS_AS(hub.configure(ragged), Error);
  SourceAdapter undeclared = app;
  undeclared.series["mystery"] = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(hub.configure(undeclared), Error);
}

TEST_CASE("record validation catches schema drift") {
  const AttrSchema schema = AttrSchema::standard();
  sim::Rng rng(4);
  DataRecord ok = full_record(rng);
  CHECK_NOTHROW(ok.validate(schema));

  DataRecord drift = ok;
  drift.attrs["velocity"] = std::string("fast");
  CHECK_THROWS_AS(drift.validate(schema), Error);

  DataRecord alien = ok;
  alien.attrs["undeclared"] = 1.0;
  CHECK_THROWS_AS(alien.validate(schema), Error);

  DataRecord bad_util = ok;
  bad_util.attrs["prb_util"] = 1.5;
  CHECK_THROWS_AS(bad_util.validate(schema), Error);
}

#include "doctest.h"

#include <cstdint>
#include <set>
#include <sstream>
#include <vector>

#include "airan/error.hpp"
#include "airan/sim/engine.hpp"
#include "airan/sim/rng.hpp"
#include "airan/sim/trace.hpp"

using namespace airan;
using namespace airan::sim;

namespace {

// Reference implementations written independently of the library, used as
// oracles for the generator streams.
std::uint64_t ref_splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct RefXoshiro {
  std::uint64_t s[4];

  explicit RefXoshiro(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s) w = ref_splitmix64(x);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }
};

}  // namespace

TEST_CASE("sim time arithmetic and constants") {
  CHECK(SimTime::msec(10).us == 10'000);
  CHECK(SimTime::sec(1).us == 1'000'000);
  CHECK(SimTime::minutes(15).us == 900'000'000);
  CHECK(kRealTimeDeadline == SimTime::msec(10));
  CHECK(kOamReportInterval == SimTime::minutes(15));
  CHECK(SimTime::msec(3) + SimTime::usec(500) == SimTime::usec(3'500));
  CHECK(SimTime::sec(2) - SimTime::msec(500) == SimTime::usec(1'500'000));
  CHECK(SimTime::msec(1) < SimTime::msec(2));
  CHECK(SimTime::sec(1).seconds() == doctest::Approx(1.0));
}

TEST_CASE("node identity and naming") {
  CHECK(NodeId::gnb(3) == NodeId::gnb(3));
  CHECK(NodeId::gnb(3) != NodeId::ue(3));
  CHECK(to_string(NodeId::ai_node()) == "ai");
  CHECK(to_string(NodeId::gnb(3)) == "gnb3");
  CHECK(to_string(NodeId::ue(17)) == "ue17");
  CHECK(to_string(NodeId::oam()) == "oam");
}

TEST_CASE("rng matches an independent reference implementation") {
  Rng lib(0x1234abcdULL);
  RefXoshiro ref(0x1234abcdULL);
  for (int i = 0; i < 256; ++i) CHECK(lib.next() == ref.next());
}

TEST_CASE("rng reproducibility and stream independence") {
  Rng a(42), b(42);
  for (int i = 0; i < 64; ++i) CHECK(a.next() == b.next());

  // A node's stream depends only on (root, purpose, node id), never on how
  // many other streams were derived first.
  Rng first = derive_stream(7, streams::kTraffic, NodeId::ue(5));
  for (std::uint32_t i = 0; i < 100; ++i) (void)derive_stream(7, streams::kTraffic, NodeId::ue(i));
  Rng again = derive_stream(7, streams::kTraffic, NodeId::ue(5));
  for (int i = 0; i < 32; ++i) CHECK(first.next() == again.next());

  // Different purposes and nodes give distinct draws.
  Rng t = derive_stream(7, streams::kTraffic, NodeId::ue(5));
  Rng r = derive_stream(7, streams::kRadio, NodeId::ue(5));
  Rng o = derive_stream(7, streams::kTraffic, NodeId::ue(6));
  CHECK(t.next() != r.next());
  Rng t2 = derive_stream(7, streams::kTraffic, NodeId::ue(5));
  CHECK(t2.next() != o.next());
}

TEST_CASE("rng sampler ranges and moments") {
  Rng rng(99);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.02));

  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t v = rng.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);

  double esum = 0.0;
  for (int i = 0; i < 20000; ++i) esum += rng.exponential(2.0);
  CHECK(esum / 20000 == doctest::Approx(0.5).epsilon(0.05));

  double nsum = 0.0, nsq = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double z = rng.normal();
    nsum += z;
    nsq += z * z;
  }
  CHECK(nsum / 20000 == doctest::Approx(0.0).epsilon(0.05));
  CHECK(nsq / 20000 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("fnv-1a digest matches published vectors") {
  Fnv64 h;
  CHECK(h.value() == 0xcbf29ce484222325ULL);
  h.update("a");
  CHECK(h.value() == 0xaf63dc4c8601ec8cULL);
  Fnv64 h2;
  h2.update("foobar");
  CHECK(h2.value() == 0x85944171f73967e8ULL);
}

TEST_CASE("double formatting round-trips and stays canonical") {
  CHECK(fmt_double(0.0) == "0");
  CHECK(fmt_double(1.0) == "1");
  CHECK(fmt_double(0.1) == "0.1");
  CHECK(fmt_double(-2.5) == "-2.5");
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double v = (rng.uniform01() - 0.5) * 1e6;
    CHECK(std::stod(fmt_double(v)) == v);
  }
}

TEST_CASE("events dequeue by due time with FIFO tie-break") {
  Engine eng(Topology::standard(2, 4), 1);
  std::vector<std::uint64_t> order;
  eng.set_handler([&](Engine&, const Event& ev) {
    if (const auto* t = std::get_if<Timer>(&ev.payload)) order.push_back(t->a);
  });
  // Same due time: replay in schedule order regardless of payload.
  eng.schedule(SimTime::msec(5), NodeId::ai_node(), NodeId::ai_node(), Timer{1, 10, 0});
  eng.schedule(SimTime::msec(5), NodeId::ai_node(), NodeId::ai_node(), Timer{1, 11, 0});
  eng.schedule(SimTime::msec(2), NodeId::ai_node(), NodeId::ai_node(), Timer{1, 12, 0});
  eng.schedule(SimTime::msec(5), NodeId::ai_node(), NodeId::ai_node(), Timer{1, 13, 0});
  const RunStats stats = eng.run(SimTime::sec(1));
  CHECK(order == std::vector<std::uint64_t>{12, 10, 11, 13});
  CHECK(stats.processed == 4);
  CHECK(stats.end_clock == SimTime::msec(5));
}

TEST_CASE("scheduling in the past is rejected") {
  Engine eng(Topology::standard(2, 4), 1);
  eng.schedule(SimTime::msec(5), NodeId::ai_node(), NodeId::ai_node(), Timer{1, 0, 0});
  eng.run(SimTime::msec(5));
  CHECK_THROWS_WITH_AS(
      eng.schedule(SimTime::msec(4), NodeId::ai_node(), NodeId::ai_node(), Timer{1, 0, 0}),
      doctest::Contains("PastDue"), Error);
}

TEST_CASE("message delay is link latency plus serialization") {
  Topology topo = Topology::standard(2, 4);
  Engine eng(topo, 1);
  // UE -> gNB: 2 ms latency, 50 Mbit/s uplink. 50 Mbit serializes in
  // exactly one second, so delivery lands at t + 1.002 s.
  const SimTime due =
      eng.send(NodeId::ue(0), NodeId::gnb(0), TrafficArrival{0, 0, 1000, false}, 50'000'000);
  CHECK(due == SimTime::usec(1'002'000));

  // Zero-size message still pays the propagation latency.
  const SimTime due2 =
      eng.send(NodeId::ue(1), NodeId::gnb(0), TrafficArrival{1, 0, 0, false}, 0);
  CHECK(due2 == SimTime::msec(2));

  // Fractional serialization rounds up to the next microsecond.
  const SimTime due3 =
      eng.send(NodeId::ue(2), NodeId::gnb(0), TrafficArrival{2, 0, 75, false}, 75);
  CHECK(due3 == SimTime::usec(2'002));  // 75 bits / 50 Mbps = 1.5 us -> 2 us

  CHECK_THROWS_AS(eng.send(NodeId::ue(0), NodeId::ue(1), TrafficArrival{}, 10), Error);
}

TEST_CASE("conservation holds when the horizon cuts messages in flight") {
  Engine eng(Topology::standard(2, 4), 1);
  std::uint64_t handled = 0;
  eng.set_handler([&](Engine&, const Event& ev) {
    if (ev.is_message) ++handled;
  });
  for (std::uint32_t i = 0; i < 10; ++i) {
    // Sends at t=0; each delivery due at 2 ms + i * 1 ms.
    eng.send(NodeId::ue(i % 8), NodeId::gnb(0), TrafficArrival{i, 0, 0, false},
             static_cast<std::uint64_t>(i) * 50'000);
  }
  const RunStats stats = eng.run(SimTime::msec(5));
  CHECK(stats.sent == 10);
  CHECK(stats.delivered == handled);
  CHECK(stats.dropped == 10 - handled);
  CHECK(stats.drop_reasons.at("horizon_cut") == stats.dropped);
  CHECK(stats.conserved());
  CHECK(handled == 4);  // 2, 3, 4, 5 ms due times make the cut
}

TEST_CASE("identical runs produce identical digests, different seeds differ") {
  auto run_once = [](std::uint64_t seed) {
    Engine eng(Topology::standard(2, 8), seed);
    Rng rng = derive_stream(seed, streams::kTraffic, NodeId::ue(0));
    eng.set_handler([&](Engine& e, const Event& ev) {
      if (const auto* t = std::get_if<Timer>(&ev.payload); t && t->a < 40) {
        const std::uint64_t bits = 1000 + rng.below(9000);
        e.send(NodeId::ue(t->a % 8), NodeId::gnb((t->a / 2) % 2),
               TrafficArrival{static_cast<std::uint32_t>(t->a), 0, bits, false}, bits);
        e.schedule(e.now() + SimTime::msec(1 + static_cast<std::int64_t>(rng.below(5))),
                   NodeId::ai_node(), NodeId::ai_node(), Timer{1, t->a + 1, 0});
      }
    });
    eng.schedule(SimTime::zero(), NodeId::ai_node(), NodeId::ai_node(), Timer{1, 0, 0});
    return eng.run(SimTime::sec(2));
  };

  const RunStats a = run_once(11), b = run_once(11), c = run_once(12);
  CHECK(a.trace_hash == b.trace_hash);
  CHECK(a.processed == b.processed);
  CHECK(a.trace_hash != c.trace_hash);
  CHECK(a.conserved());
  CHECK(c.conserved());
}

TEST_CASE("trace lines record the ordered event effects") {
  Engine eng(Topology::standard(2, 4), 1, /*retain_trace=*/true);
  eng.schedule(SimTime::msec(1), NodeId::ai_node(), NodeId::gnb(0), Timer{3, 7, 0});
  eng.run(SimTime::msec(2));
  REQUIRE(eng.trace().line_count() == 1);
  const std::string& line = eng.trace().lines().front();
  CHECK(line == "1000|0|ai>gnb0|timer|tag=3 a=7 b=0");
}

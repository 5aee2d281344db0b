#include "vanetcast/cli/commands.hpp"
#include "vanetcast/protocols/protocol.hpp"
#include "vanetcast/simulation.hpp"

#include <doctest.h>

#include <algorithm>

using namespace vanetcast;

namespace {

const DeferConfig kDefer{1.0, 2, 300.0};

NodeContext at(double x, double y = 0.0, double now = 0.0)
{
    return NodeContext{0, Position{x, y}, SimTime{now}};
}

Packet copy_from(NodeId sender, Position pos, std::uint32_t seq = 1, NodeId origin = 9)
{
    return Packet{PacketId{origin, seq}, sender, pos, SimTime{0}};
}

template <class T>
std::size_t count(const Actions& a)
{
    return static_cast<std::size_t>(std::count_if(a.begin(), a.end(), [](const auto& x) { return std::holds_alternative<T>(x); }));
}

template <class T>
const T& only(const Actions& a)
{
    REQUIRE(count<T>(a) == 1);
    return std::get<T>(*std::find_if(a.begin(), a.end(), [](const auto& x) { return std::holds_alternative<T>(x); }));
}

OdamCProtocol odamc(BranchPolarity polarity = BranchPolarity::Prose, PacketListConfig lists = {})
{
    return OdamCProtocol(kDefer, lists, AngleVertex::Receiver, polarity);
}

} // namespace

TEST_CASE("flooding: first copy relayed, duplicates dropped")
{
    FloodingProtocol p;
    const auto a = p.on_receive(at(0), copy_from(1, {100, 0}));
    CHECK(only<Forward>(a).packet.hop_sender_pos == Position{0, 0});
    CHECK(count<Drop>(p.on_receive(at(0), copy_from(2, {50, 0}))) == 1);
    CHECK(count<Forward>(p.on_originate(at(0), copy_from(0, {0, 0}, 1, 0))) == 1);
    CHECK_THROWS_AS(p.on_originate(at(0), copy_from(0, {0, 0}, 1, 0)), std::logic_error);
}

TEST_CASE("wpbm: probability extremes")
{
    RngStream rng(1);
    WpbmProtocol never(0.0, rng), always(1.0, rng);
    for (std::uint32_t s = 1; s <= 50; ++s) {
        CHECK(count<Drop>(never.on_receive(at(0), copy_from(1, {100, 0}, s))) == 1);
        CHECK(count<Forward>(always.on_receive(at(0), copy_from(1, {100, 0}, s))) == 1);
        CHECK(count<Drop>(always.on_receive(at(0), copy_from(1, {100, 0}, s))) == 1);
    }
}

TEST_CASE("odam: defer, cancel on duplicate, forward on expiry")
{
    OdamProtocol p(kDefer);
    const auto first = p.on_receive(at(0), copy_from(1, {150, 0}));
    CHECK(only<SetTimer>(first).delay == 0.75);

    SUBCASE("duplicate while waiting")
    {
        const auto dup = p.on_receive(at(0), copy_from(2, {-10, 0}));
        CHECK(count<CancelTimer>(dup) == 1);
        CHECK(count<Drop>(dup) == 1);
        CHECK(p.on_timer_expiry(at(0), PacketId{9, 1}).empty());
    }
    SUBCASE("expiry then duplicate")
    {
        const auto fire = p.on_timer_expiry(at(3, 4), PacketId{9, 1});
        CHECK(only<Forward>(fire).packet.hop_sender_pos == Position{3, 4});
        const auto dup = p.on_receive(at(0), copy_from(2, {-10, 0}));
        CHECK(count<CancelTimer>(dup) == 0);
        CHECK(count<Drop>(dup) == 1);
    }
}

TEST_CASE("odam-c: origination")
{
    auto p = odamc();
    const auto a = p.on_originate(at(5), copy_from(0, {5, 0}, 1, 0));
    CHECK(count<Forward>(a) == 1);
    CHECK(count<SetTimer>(a) == 0);
    const auto* e = p.l1().find(PacketId{0, 1});
    REQUIRE(e != nullptr);
    CHECK_FALSE(e->timer_armed);
    CHECK(e->first_sender_pos == Position{5, 0});
    CHECK_THROWS_AS(p.on_originate(at(5), copy_from(0, {5, 0}, 1, 0)), DuplicateOrigination);
}

TEST_CASE("odam-c: origination into a full L1 evicts the oldest")
{
    auto p = odamc(BranchPolarity::Prose, PacketListConfig{2, 2});
    p.on_receive(at(0), copy_from(1, {100, 0}, 1));
    p.on_receive(at(0), copy_from(1, {100, 0}, 2));
    const auto a = p.on_originate(at(0), copy_from(0, {0, 0}, 1, 0));
    // the evicted entry was waiting, so its timer is stopped
    CHECK(only<CancelTimer>(a).packet_id == PacketId{9, 1});
    CHECK_FALSE(p.l1().contains(PacketId{9, 1}));
    CHECK(p.l1().contains(PacketId{0, 1}));
    CHECK(p.on_timer_expiry(at(0), PacketId{9, 1}).empty());
    CHECK(p.stale_timers() == 1);
}

TEST_CASE("odam-c: first copy arms an L1 timer from the hop distance")
{
    auto p = odamc();
    const auto a = p.on_receive(at(0), copy_from(1, {150, 0}));
    CHECK(only<SetTimer>(a).delay == 0.75);
    const auto* e = p.l1().find(PacketId{9, 1});
    REQUIRE(e != nullptr);
    CHECK(e->timer_armed);
    CHECK(e->first_sender_pos == Position{150, 0});
}

TEST_CASE("odam-c: same-side duplicate is ignored")
{
    auto p = odamc();
    p.on_receive(at(0), copy_from(1, {-130, 0}));
    const auto dup = p.on_receive(at(0), copy_from(2, {-290, 0}));
    CHECK(count<Drop>(dup) == 1);
    CHECK(count<CancelTimer>(dup) == 0);
    CHECK(count<SetTimer>(dup) == 0);
    CHECK(p.l1().find(PacketId{9, 1})->timer_armed);
    REQUIRE(p.decisions().size() == 1);
    CHECK(p.decisions()[0].theta == 0.0);
    CHECK(p.decisions()[0].outcome == AngleDecision::Outcome::Ignored);
}

TEST_CASE("odam-c: pseudocode polarity stops on a same-side duplicate")
{
    auto p = odamc(BranchPolarity::Pseudocode);
    p.on_receive(at(0), copy_from(1, {-130, 0}));
    const auto dup = p.on_receive(at(0), copy_from(2, {-290, 0}));
    CHECK(count<CancelTimer>(dup) == 1);
    CHECK(p.decisions()[0].outcome == AngleDecision::Outcome::Stopped);
    CHECK(p.on_timer_expiry(at(0), PacketId{9, 1}).empty());
}

TEST_CASE("odam-c: far-side duplicates (two-sided coverage)")
{
    auto p = odamc();
    const PacketId id{9, 1};
    p.on_receive(at(0), copy_from(1, {-200, 0}));

    // first far-side copy: L1 -> L0 with a fresh timer
    const auto promote = p.on_receive(at(0), copy_from(2, {120, 10}));
    CHECK(count<CancelTimer>(promote) == 1);
    CHECK(only<SetTimer>(promote).delay == doctest::Approx(1.0 - (120.0 * 120 + 100) / 90000.0));
    CHECK_FALSE(p.l1().contains(id));
    REQUIRE(p.l0().contains(id));
    CHECK(p.l0().find(id)->timer_armed);
    CHECK(p.decisions().back().outcome == AngleDecision::Outcome::Promoted);
    CHECK(p.decisions().back().theta >= 90.0);

    // any further copy cancels the L0 timer: this node never relays
    const auto second = p.on_receive(at(0), copy_from(3, {-250, 0}));
    CHECK(count<CancelTimer>(second) == 1);
    CHECK(count<Drop>(second) == 1);
    CHECK(p.on_timer_expiry(at(0), id).empty());

    // and later ones are plain drops
    const auto third = p.on_receive(at(0), copy_from(4, {250, 0}));
    CHECK(third.size() == 1);
    CHECK(count<Drop>(third) == 1);
}

TEST_CASE("odam-c: relays at most once from each list")
{
    auto p = odamc();
    const PacketId id{9, 1};
    p.on_receive(at(0), copy_from(1, {-200, 0}));
    CHECK(count<Forward>(p.on_timer_expiry(at(0), id)) == 1);
    CHECK(p.l1().contains(id));
    CHECK_FALSE(p.l1().find(id)->timer_armed);
    CHECK(p.on_timer_expiry(at(0), id).empty());

    p.on_receive(at(0), copy_from(2, {200, 0}));
    CHECK(count<Forward>(p.on_timer_expiry(at(0), id)) == 1);
    CHECK(p.l0().contains(id));
    CHECK(p.on_timer_expiry(at(0), id).empty());

    // L0 duplicate after the timer fired: drop, no new timer
    const auto late = p.on_receive(at(0), copy_from(3, {100, 0}));
    CHECK(late.size() == 1);
    CHECK(count<Drop>(late) == 1);
}

TEST_CASE("odam-c: degenerate angle counts as same side")
{
    auto p = odamc();
    // originator: its first sender position is its own
    p.on_originate(at(0), copy_from(0, {0, 0}, 1, 0));
    const auto echo = p.on_receive(at(0), copy_from(1, {200, 0}, 1, 0));
    CHECK(count<Drop>(echo) == 1);
    CHECK(count<SetTimer>(echo) == 0);
    REQUIRE(p.decisions().size() == 1);
    CHECK(p.decisions()[0].degenerate);
    CHECK(p.decisions()[0].theta == 0.0);
    CHECK(p.decisions()[0].outcome == AngleDecision::Outcome::Ignored);
}

TEST_CASE("odam-c: sender vertex variant")
{
    auto p = OdamCProtocol(kDefer, {}, AngleVertex::Sender, BranchPolarity::Prose);
    p.on_receive(at(0), copy_from(1, {-100, 0}));
    // angle at the first sender between it->forwarder and it->self: both point +x
    p.on_receive(at(0), copy_from(2, {100, 0}));
    CHECK(p.decisions().back().theta == 0.0);
    CHECK(p.decisions().back().outcome == AngleDecision::Outcome::Ignored);
}

TEST_CASE("odam-c: ring seam does not flip sides")
{
    auto p = odamc();
    NodeContext self{0, Position{10, 0}, SimTime{0}, 3000.0};
    p.on_receive(self, copy_from(1, {2900, 0}));
    CHECK(only<SetTimer>(p.on_receive(NodeContext{0, Position{10, 0}, SimTime{0}, 3000.0}, copy_from(2, {200, 0})))
              .delay == doctest::Approx(1.0 - 190.0 * 190.0 / 90000.0));
    CHECK(p.decisions().back().theta == 180.0);
}

TEST_CASE("defer distance is clamped to the range")
{
    CHECK(defer_for_distance(300.5, kDefer) == 0.0);
    CHECK(defer_for_distance(-1.0, kDefer) == 1.0);
}

// --------------------------------------------------------------- small networks

namespace {

RunResult run_static(std::vector<Position> pos, ProtocolKind kind, double p_fwd = 0.5, NodeId origin = 0)
{
    ProtocolConfig pc;
    pc.kind = kind;
    pc.p_fwd = p_fwd;
    pc.defer = kDefer;
    Simulation sim(StaticTopology{std::move(pos), origin, 0.0}, pc, RadioConfig{});
    return sim.run();
}

} // namespace

TEST_CASE("flooding on a five-node line")
{
    const auto r = run_static({{0, 0}, {200, 0}, {400, 0}, {600, 0}, {800, 0}}, ProtocolKind::Flooding);
    const auto& rec = r.records.at(0);
    CHECK(rec.receptions.size() == 4);
    CHECK(pdr(rec) == 1.0);
    CHECK(rec.tx_count == 5);
    for (const auto& [key, n] : r.transmissions_per_node()) CHECK(n == 1);
}

TEST_CASE("wpbm with p = 0 stops after one hop")
{
    const auto r = run_static({{0, 0}, {200, 0}, {400, 0}, {-250, 0}, {800, 0}}, ProtocolKind::Wpbm, 0.0);
    const auto& rec = r.records.at(0);
    CHECK(rec.tx_count == 1);
    CHECK(rec.receptions.size() == 2);
    CHECK(rec.receptions.contains(1));
    CHECK(rec.receptions.contains(3));
}

TEST_CASE("interference geometry")
{
    using namespace vanetcast::cli;
    const auto topo = fig1_topology();
    ProtocolConfig pc;
    pc.defer = DeferConfig{kFig1MaxDeferTime, 2, 300.0};

    SUBCASE("odam: B relays first, C is suppressed, D is cut off")
    {
        pc.kind = ProtocolKind::Odam;
        const auto r = Simulation(topo, pc, RadioConfig{}).run();
        std::vector<NodeId> relays;
        for (const auto& tx : r.transmissions) if (!tx.initial) relays.push_back(tx.node);
        CHECK(relays == std::vector<NodeId>{kFig1B});
        CHECK_FALSE(r.records[0].receptions.contains(kFig1D));
        CHECK(pdr(r.records[0]) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("odam-c: C ignores B's copy and reaches D")
    {
        pc.kind = ProtocolKind::OdamC;
        const auto r = Simulation(topo, pc, RadioConfig{}).run();
        std::vector<NodeId> relays;
        for (const auto& tx : r.transmissions) if (!tx.initial) relays.push_back(tx.node);
        // D's copy comes from C's far side, so C relays a second time
        CHECK(relays == std::vector<NodeId>{kFig1B, kFig1C, kFig1D, kFig1C});
        CHECK(r.records[0].receptions.contains(kFig1D));
        CHECK(pdr(r.records[0]) == 1.0);
        std::vector<AngleDecision> at_c;
        for (const auto& d : r.angle_decisions) {
            if (d.node == kFig1C) at_c.push_back(d.decision);
        }
        REQUIRE(at_c.size() == 2);
        CHECK(at_c[0].outcome == AngleDecision::Outcome::Ignored);
        CHECK(at_c[0].theta == 0.0);
        CHECK(at_c[1].outcome == AngleDecision::Outcome::Promoted);
        CHECK(at_c[1].theta == 180.0);
    }
    SUBCASE("replay report")
    {
        const auto report = replay_fig1();
        CHECK(report.contrast_holds);
        CHECK(report.odam.receivers == std::set<NodeId>{kFig1B, kFig1C});
        CHECK(report.odamc.receivers == std::set<NodeId>{kFig1B, kFig1C, kFig1D});
        CHECK_FALSE(replay_fig1(AngleVertex::Receiver, BranchPolarity::Pseudocode).contrast_holds);
    }
}

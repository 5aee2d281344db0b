#include "vanetcast/metrics.hpp"

#include <doctest.h>

#include <sstream>

using namespace vanetcast;

namespace {

PacketRecord record(std::uint32_t seq, double sent, std::size_t nodes)
{
    PacketRecord r;
    r.packet_id = PacketId{0, seq};
    r.origin = 0;
    r.sent_at = SimTime{sent};
    r.node_count_at_send = nodes;
    return r;
}

} // namespace

TEST_CASE("latency")
{
    auto r = record(1, 600.0, 10);
    CHECK_FALSE(latency(r).has_value());
    r.receptions[1] = SimTime{600.0013};
    CHECK(*latency(r) == doctest::Approx(0.0013));
    auto two = record(1, 0.0, 10);
    two.receptions[1] = SimTime{0.001};
    two.receptions[2] = SimTime{0.003};
    CHECK(*latency(two) == doctest::Approx(0.002));
}

TEST_CASE("pdr")
{
    auto r = record(1, 0.0, 200);
    CHECK(pdr(r) == 0.0);
    for (NodeId n = 1; n < 200; ++n) r.receptions[n] = SimTime{1.0};
    CHECK(pdr(r) == 1.0);
    CHECK_THROWS(pdr(record(1, 0.0, 1)));
}

TEST_CASE("redundancy")
{
    auto r = record(1, 0.0, 10);
    CHECK(redundancy(r) == 0.0);
    for (NodeId n = 1; n < 10; ++n) {
        r.receptions[n] = SimTime{1.0};
        r.forwarders.insert(n);
    }
    CHECK(redundancy(r) == doctest::Approx(0.9));
    // a second relay by the same node counts once
    r.forwarders.insert(3);
    CHECK(redundancy(r) == doctest::Approx(0.9));
}

TEST_CASE("aggregate: empty input")
{
    const auto t = aggregate({});
    CHECK(t.rows.empty());
    CHECK_FALSE(t.summary);
    std::ostringstream m, s;
    write_metrics_csv(m, t);
    write_summary_csv(s, t);
    CHECK(m.str() == std::string(kMetricsHeader) + "\n");
    CHECK(s.str() == std::string(kSummaryHeader) + "\n");
}

TEST_CASE("aggregate: one record")
{
    auto r = record(1, 600.0, 5);
    r.receptions[1] = SimTime{600.5};
    r.receptions[2] = SimTime{601.0};
    r.forwarders.insert(1);
    r.tx_count = 2;
    const std::vector<PacketRecord> recs{r};
    const auto t = aggregate(recs);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].pdr == 0.5);
    CHECK(t.rows[0].redundancy == 0.2);
    CHECK(*t.rows[0].latency == 0.75);
    CHECK(t.rows[0].tx_count == 2.0);
    REQUIRE(t.summary);
    CHECK(t.summary->packets == 1);
    CHECK(t.summary->pdr == t.rows[0].pdr);
    CHECK(t.summary->latency == t.rows[0].latency);

    std::ostringstream out;
    write_metrics_csv(out, t);
    CHECK(out.str() == "packet_id,send_time_s,pdr,redundancy,latency_s,tx_count\n1,600,0.5,0.2,0.75,2\n");
}

TEST_CASE("undefined latency is an empty cell and is left out of the mean")
{
    auto a = record(1, 600.0, 3);
    a.receptions[1] = SimTime{600.25};
    auto b = record(2, 650.0, 3);
    const std::vector<PacketRecord> recs{b, a};
    const auto t = aggregate(recs);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].packet_id == 1);
    CHECK(*t.summary->latency == 0.25);
    CHECK(t.summary->pdr == 0.25);

    std::ostringstream out;
    write_metrics_csv(out, t);
    CHECK(out.str().find("\n2,650,0,0,,0\n") != std::string::npos);

    std::istringstream in(out.str());
    const auto back = read_metrics_csv(in);
    REQUIRE(back.size() == 2);
    CHECK_FALSE(back[1].latency);
    CHECK(*back[0].latency == 0.25);
}

TEST_CASE("group by send time")
{
    auto a = record(2, 600.0, 3);
    auto b = record(1, 650.0, 3);
    const std::vector<PacketRecord> recs{b, a};
    CHECK(aggregate(recs, GroupBy::PacketId).rows[0].packet_id == 1);
    CHECK(aggregate(recs, GroupBy::SendTime).rows[0].packet_id == 2);
}

TEST_CASE("csv round trip keeps full precision")
{
    auto r = record(1, 600.0, 7);
    r.receptions[1] = SimTime{600.0 + 1.0 / 3.0};
    r.forwarders.insert(1);
    r.tx_count = 3;
    const std::vector<PacketRecord> recs{r};
    const auto t = aggregate(recs);
    std::stringstream io;
    write_metrics_csv(io, t);
    const auto back = read_metrics_csv(io);
    REQUIRE(back.size() == 1);
    CHECK(back[0].pdr == t.rows[0].pdr);
    CHECK(back[0].redundancy == t.rows[0].redundancy);
    CHECK(*back[0].latency == *t.rows[0].latency);
}

TEST_CASE("malformed metrics input")
{
    std::istringstream bad_header("id,pdr\n");
    CHECK_THROWS(read_metrics_csv(bad_header));
    std::istringstream bad_row(std::string(kMetricsHeader) + "\n1,2,3\n");
    CHECK_THROWS(read_metrics_csv(bad_row));
}

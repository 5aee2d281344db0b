#pragma once

#include "vanetcast/sim/time.hpp"
#include "vanetcast/types.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace vanetcast {

/// Everything the simulator learned about one packet.
struct PacketRecord
{
    PacketId packet_id;
    NodeId origin = kNoNode;
    SimTime sent_at;
    std::map<NodeId, SimTime> receptions; // first reception per node
    std::set<NodeId> forwarders;          // relays, excluding the origin's initial send
    std::size_t tx_count = 0;             // every transmission, initial send included
    std::size_t node_count_at_send = 0;
};

/// Mean first-reception delay; nullopt when nobody received the packet.
std::optional<double> latency(const PacketRecord& rec);

/// Fraction of non-origin nodes that received the packet.
double pdr(const PacketRecord& rec);

/// Fraction of all nodes that relayed the packet at least once.
double redundancy(const PacketRecord& rec);

struct MetricsRow
{
    std::uint32_t packet_id = 0;
    double send_time = 0.0;
    double pdr = 0.0;
    double redundancy = 0.0;
    std::optional<double> latency;
    double tx_count = 0.0;
};

struct MetricsSummary
{
    std::size_t packets = 0;
    double pdr = 0.0;
    double redundancy = 0.0;
    std::optional<double> latency; // mean over packets with a defined latency
    double tx_count = 0.0;
};

struct MetricsTable
{
    std::vector<MetricsRow> rows;
    std::optional<MetricsSummary> summary; // absent for an empty table
};

enum class GroupBy
{
    PacketId,
    SendTime,
};

MetricsTable aggregate(std::span<const PacketRecord> records, GroupBy group_by = GroupBy::PacketId);

/// Mean of the rows; nullopt when there are none.
std::optional<MetricsSummary> summarize(std::span<const MetricsRow> rows);

inline constexpr const char* kMetricsHeader = "packet_id,send_time_s,pdr,redundancy,latency_s,tx_count";
inline constexpr const char* kSummaryHeader = "packets,pdr,redundancy,latency_s,tx_count";

void write_metrics_csv(std::ostream& out, const MetricsTable& table);
void write_summary_csv(std::ostream& out, const MetricsTable& table);

/// Parses a file written by write_metrics_csv.
std::vector<MetricsRow> read_metrics_csv(std::istream& in);

} // namespace vanetcast

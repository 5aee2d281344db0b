#include "vanetcast/metrics.hpp"

#include "vanetcast/format.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vanetcast {

std::optional<double> latency(const PacketRecord& rec)
{
    if (rec.receptions.empty()) {
        return std::nullopt;
    }
    double sum = 0.0;
    for (const auto& [node, at] : rec.receptions) {
        sum += at - rec.sent_at;
    }
    return sum / static_cast<double>(rec.receptions.size());
}

double pdr(const PacketRecord& rec)
{
    if (rec.node_count_at_send < 2) {
        throw std::invalid_argument("pdr needs at least two nodes");
    }
    return static_cast<double>(rec.receptions.size()) / static_cast<double>(rec.node_count_at_send - 1);
}

double redundancy(const PacketRecord& rec)
{
    if (rec.node_count_at_send < 1) {
        throw std::invalid_argument("redundancy needs at least one node");
    }
    return static_cast<double>(rec.forwarders.size()) / static_cast<double>(rec.node_count_at_send);
}

std::optional<MetricsSummary> summarize(std::span<const MetricsRow> rows)
{
    if (rows.empty()) {
        return std::nullopt;
    }
    MetricsSummary s;
    s.packets = rows.size();
    double latency_sum = 0.0;
    std::size_t latency_n = 0;
    for (const auto& r : rows) {
        s.pdr += r.pdr;
        s.redundancy += r.redundancy;
        s.tx_count += r.tx_count;
        if (r.latency) {
            latency_sum += *r.latency;
            ++latency_n;
        }
    }
    const auto n = static_cast<double>(rows.size());
    s.pdr /= n;
    s.redundancy /= n;
    s.tx_count /= n;
    if (latency_n > 0) {
        s.latency = latency_sum / static_cast<double>(latency_n);
    }
    return s;
}

MetricsTable aggregate(std::span<const PacketRecord> records, GroupBy group_by)
{
    MetricsTable table;
    table.rows.reserve(records.size());
    for (const auto& rec : records) {
        table.rows.push_back(MetricsRow{rec.packet_id.seq, rec.sent_at.seconds, pdr(rec), redundancy(rec),
                                        latency(rec), static_cast<double>(rec.tx_count)});
    }
    if (group_by == GroupBy::PacketId) {
        std::stable_sort(table.rows.begin(), table.rows.end(),
                         [](const MetricsRow& a, const MetricsRow& b) { return a.packet_id < b.packet_id; });
    } else {
        std::stable_sort(table.rows.begin(), table.rows.end(),
                         [](const MetricsRow& a, const MetricsRow& b) { return a.send_time < b.send_time; });
    }
    table.summary = summarize(table.rows);
    return table;
}

namespace {

std::string cell(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string{};
}

} // namespace

void write_metrics_csv(std::ostream& out, const MetricsTable& table)
{
    out << kMetricsHeader << '\n';
    for (const auto& r : table.rows) {
        out << r.packet_id << ',' << format_double(r.send_time) << ',' << format_double(r.pdr) << ','
            << format_double(r.redundancy) << ',' << cell(r.latency) << ',' << format_double(r.tx_count) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const MetricsTable& table)
{
    out << kSummaryHeader << '\n';
    if (table.summary) {
        const auto& s = *table.summary;
        out << s.packets << ',' << format_double(s.pdr) << ',' << format_double(s.redundancy) << ','
            << cell(s.latency) << ',' << format_double(s.tx_count) << '\n';
    }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader) {
        throw std::runtime_error("metrics file has an unexpected header");
    }
    std::vector<MetricsRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (cells.size() != 6) {
            throw std::runtime_error("malformed metrics row: " + line);
        }
        MetricsRow r;
        r.packet_id = static_cast<std::uint32_t>(std::stoul(cells[0]));
        r.send_time = std::stod(cells[1]);
        r.pdr = std::stod(cells[2]);
        r.redundancy = std::stod(cells[3]);
        if (!cells[4].empty()) r.latency = std::stod(cells[4]);
        r.tx_count = std::stod(cells[5]);
        rows.push_back(r);
    }
    return rows;
}

} // namespace vanetcast

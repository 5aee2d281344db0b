#include "vanetcast/sim/engine.hpp"

#include "vanetcast/format.hpp"

namespace vanetcast {

std::string_view to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::TxStart: return "TxStart";
    case EventKind::TxEnd: return "TxEnd";
    case EventKind::Rx: return "Rx";
    case EventKind::TimerExpiry: return "TimerExpiry";
    case EventKind::MobilityTick: return "MobilityTick";
    case EventKind::TrafficSource: return "TrafficSource";
    }
    return "Unknown";
}

SchedulingInPast::SchedulingInPast(SimTime requested, SimTime clock)
    : std::logic_error("event scheduled at t=" + format_double(requested.seconds) +
                       " before clock t=" + format_double(clock.seconds))
{
}

std::string format_trace_line(const Event& event)
{
    std::string line = format_double(event.time.seconds);
    line += '\t';
    line += std::to_string(event.seq);
    line += '\t';
    line += to_string(event.kind);
    line += '\t';

    std::string summary;
    const auto& p = event.payload;
    if (p.node != kNoNode) {
        summary += "node=" + std::to_string(p.node);
    }
    if (p.packet) {
        if (!summary.empty()) summary += ' ';
        summary += "pkt=" + to_string(*p.packet);
    }
    if (p.peer != kNoNode) {
        if (!summary.empty()) summary += ' ';
        summary += "from=" + std::to_string(p.peer);
    }
    line += summary.empty() ? "-" : summary;
    return line;
}

Ticket Engine::schedule(SimTime time, EventKind kind, EventPayload payload, Handler handler)
{
    if (time < clock_) {
        throw SchedulingInPast(time, clock_);
    }
    const std::uint64_t seq = next_seq_++;
    pending_.emplace(seq, Pending{Event{time, seq, kind, std::move(payload)}, std::move(handler)});
    queue_.push(QueueKey{time, seq});
    return Ticket{seq};
}

bool Engine::cancel(Ticket ticket)
{
    return pending_.erase(ticket.seq) > 0;
}

std::size_t Engine::run_until(SimTime t_end)
{
    std::size_t processed = 0;
    while (!queue_.empty() && queue_.top().time <= t_end) {
        const QueueKey key = queue_.top();
        queue_.pop();
        auto it = pending_.find(key.seq);
        if (it == pending_.end()) {
            continue; // cancelled
        }
        Pending entry = std::move(it->second);
        pending_.erase(it);

        clock_ = entry.event.time;
        if (observer_) {
            observer_(entry.event);
        }
        if (entry.handler) {
            entry.handler();
        }
        ++processed;
    }
    if (clock_ < t_end) {
        clock_ = t_end;
    }
    return processed;
}

} // namespace vanetcast

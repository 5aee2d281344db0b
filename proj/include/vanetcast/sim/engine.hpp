#pragma once

#include "vanetcast/sim/time.hpp"
#include "vanetcast/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vanetcast {

enum class EventKind
{
    TxStart,
    TxEnd,
    Rx,
    TimerExpiry,
    MobilityTick,
    TrafficSource,
};

std::string_view to_string(EventKind kind);

/// Kind-specific data carried for tracing. Unused fields stay at their defaults.
struct EventPayload
{
    NodeId node = kNoNode;
    std::optional<PacketId> packet;
    NodeId peer = kNoNode;
};

struct Event
{
    SimTime time;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::MobilityTick;
    EventPayload payload;
};

/// Handle returned by Engine::schedule; the event's sequence number.
struct Ticket
{
    std::uint64_t seq = 0;
    friend constexpr bool operator==(Ticket, Ticket) = default;
};

class SchedulingInPast : public std::logic_error
{
public:
    SchedulingInPast(SimTime requested, SimTime clock);
};

/// `time<TAB>seq<TAB>kind<TAB>payload-summary`, no trailing newline.
std::string format_trace_line(const Event& event);

/**
 * Single-threaded discrete-event engine.
 *
 * Events are executed in strict (time, seq) order; seq is assigned at
 * scheduling time, so simultaneous events run in the order they were
 * scheduled. Cancelled events are dropped lazily when they reach the head of
 * the queue.
 */
class Engine
{
public:
    using Handler = std::function<void()>;
    using Observer = std::function<void(const Event&)>;

    Engine() = default;
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    SimTime now() const { return clock_; }

    Ticket schedule(SimTime time, EventKind kind, EventPayload payload, Handler handler);

    /// True iff the event was still pending.
    bool cancel(Ticket ticket);

    bool is_pending(Ticket ticket) const { return pending_.contains(ticket.seq); }
    std::size_t pending_count() const { return pending_.size(); }

    /// Executes every pending event with time <= t_end, then sets the clock to t_end.
    std::size_t run_until(SimTime t_end);

    /// Called with each event just before its handler runs.
    void set_observer(Observer observer) { observer_ = std::move(observer); }

private:
    struct Pending
    {
        Event event;
        Handler handler;
    };

    struct QueueKey
    {
        SimTime time;
        std::uint64_t seq;
        // min-heap on (time, seq)
        bool operator<(const QueueKey& o) const { return time != o.time ? time > o.time : seq > o.seq; }
    };

    SimTime clock_{};
    std::uint64_t next_seq_ = 0;
    std::priority_queue<QueueKey> queue_;
    std::unordered_map<std::uint64_t, Pending> pending_;
    Observer observer_;
};

} // namespace vanetcast

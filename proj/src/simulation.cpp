#include "vanetcast/simulation.hpp"

#include "vanetcast/format.hpp"

#include <cmath>
#include <ostream>

namespace vanetcast {

std::map<std::pair<NodeId, PacketId>, std::size_t> RunResult::transmissions_per_node() const
{
    std::map<std::pair<NodeId, PacketId>, std::size_t> counts;
    for (const auto& tx : transmissions) {
        ++counts[{tx.node, tx.packet}];
    }
    return counts;
}

Simulation::Simulation(const ScenarioConfig& cfg, RunOptions options)
    : scenario_(cfg),
      options_(options),
      radio_(cfg.radio),
      end_time_(cfg.sim_end),
      mobility_rng_(RngFamily(cfg.seed).stream("mobility")),
      wpbm_rng_(RngFamily(cfg.seed).stream("wpbm"))
{
    validate(cfg);
    vehicles_ = init_vehicles(cfg.layout(), cfg.road());
    medium_ = std::make_unique<Medium>(radio_, vehicles_.size(), RngFamily(cfg.seed).stream("medium"),
                                       cfg.road_length);

    const ProtocolConfig protocol = cfg.protocol_config();
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
        nodes_.push_back(make_protocol(protocol, wpbm_rng_));
    }

    for (double t : cfg.send_times()) {
        engine_.schedule(SimTime{t}, EventKind::TrafficSource, {}, [this] { on_traffic_source(); });
    }
    schedule_mobility_tick(1);
}

Simulation::Simulation(const StaticTopology& topology, const ProtocolConfig& protocol, const RadioConfig& radio,
                       std::uint64_t seed, RunOptions options)
    : options_(options),
      radio_(radio),
      mobility_rng_(RngFamily(seed).stream("mobility")),
      wpbm_rng_(RngFamily(seed).stream("wpbm"))
{
    if (topology.positions.size() < 2 || topology.origin >= topology.positions.size()) {
        throw std::invalid_argument("static topology needs >= 2 nodes and a valid origin");
    }
    medium_ = std::make_unique<Medium>(radio_, topology.positions.size(), RngFamily(seed).stream("medium"));
    for (std::size_t i = 0; i < topology.positions.size(); ++i) {
        Vehicle v;
        v.id = static_cast<NodeId>(i);
        v.pos = topology.positions[i];
        vehicles_.push_back(v);
        nodes_.push_back(make_protocol(protocol, wpbm_rng_));
    }
    source_ = topology.origin;
    // every event of a static run resolves within a few defer periods
    end_time_ = topology.send_time + 3600.0;
    engine_.schedule(SimTime{topology.send_time}, EventKind::TrafficSource, EventPayload{topology.origin, std::nullopt, kNoNode},
                     [this] { on_traffic_source(); });
}

Simulation::~Simulation() = default;

RunResult Simulation::run()
{
    positions_.clear();
    for (const auto& v : vehicles_) positions_.push_back(v.pos);
    next_seq_.assign(vehicles_.size(), 0);

    if (options_.event_trace != nullptr) {
        engine_.set_observer([out = options_.event_trace](const Event& e) { *out << format_trace_line(e) << '\n'; });
    }
    if (options_.position_trace != nullptr) {
        *options_.position_trace << "time,node_id,x,y,speed,lane\n";
        write_positions();
    }

    result_.events_processed = engine_.run_until(SimTime{end_time_});
    result_.medium = medium_->stats();
    result_.source = source_;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (const auto* odamc = dynamic_cast<const OdamCProtocol*>(nodes_[i].get())) {
            for (const auto& d : odamc->decisions()) {
                result_.angle_decisions.push_back(NodeAngleDecision{static_cast<NodeId>(i), d});
            }
            result_.stale_timers += odamc->stale_timers();
            result_.evictions += odamc->evictions();
        }
    }
    return std::move(result_);
}

void Simulation::schedule_mobility_tick(std::size_t index)
{
    const double t = static_cast<double>(index) * scenario_->mobility_dt;
    if (t > end_time_) {
        return;
    }
    engine_.schedule(SimTime{t}, EventKind::MobilityTick, {}, [this, index] {
        on_mobility_tick();
        schedule_mobility_tick(index + 1);
    });
}

void Simulation::on_mobility_tick()
{
    mobility_step(vehicles_, scenario_->road(), scenario_->mobility_dt, scenario_->mobility(), &mobility_rng_);
    for (std::size_t i = 0; i < vehicles_.size(); ++i) positions_[i] = vehicles_[i].pos;
    if (options_.position_trace != nullptr) {
        write_positions();
    }
}

void Simulation::write_positions()
{
    auto& out = *options_.position_trace;
    const std::string t = format_double(engine_.now().seconds);
    for (const auto& v : vehicles_) {
        out << t << ',' << v.id << ',' << format_double(v.pos.x) << ',' << format_double(v.pos.y) << ','
            << format_double(v.speed) << ',' << v.lane << '\n';
    }
}

NodeId Simulation::pick_source() const
{
    if (scenario_->source_node) {
        return *scenario_->source_node;
    }
    const double mid = scenario_->road_length / 2.0;
    NodeId best = 0;
    double best_d = std::abs(vehicles_[0].pos.x - mid);
    for (const auto& v : vehicles_) {
        const double d = std::abs(v.pos.x - mid);
        if (d < best_d) {
            best_d = d;
            best = v.id;
        }
    }
    return best;
}

void Simulation::on_traffic_source()
{
    if (!source_) {
        source_ = pick_source();
    }
    originate(*source_);
}

NodeContext Simulation::context(NodeId node) const
{
    return NodeContext{node, positions_[node], engine_.now(), scenario_ ? scenario_->road_length : 0.0};
}

void Simulation::originate(NodeId node)
{
    const NodeContext self = context(node);
    Packet packet{PacketId{node, ++next_seq_[node]}, node, self.pos, self.now};

    PacketRecord rec;
    rec.packet_id = packet.id;
    rec.origin = node;
    rec.sent_at = self.now;
    rec.node_count_at_send = vehicles_.size();
    record_index_.emplace(packet.id, result_.records.size());
    result_.records.push_back(std::move(rec));

    apply(node, nodes_[node]->on_originate(self, packet), true);
}

void Simulation::apply(NodeId node, const Actions& actions, bool initial)
{
    for (const auto& action : actions) {
        if (const auto* fwd = std::get_if<Forward>(&action)) {
            engine_.schedule(engine_.now(), EventKind::TxStart, EventPayload{node, fwd->packet.id},
                             [this, node, packet = fwd->packet, initial] { transmit(node, packet, initial); });
        } else if (const auto* set = std::get_if<SetTimer>(&action)) {
            const auto key = std::make_pair(node, set->packet_id);
            if (auto it = timers_.find(key); it != timers_.end()) {
                engine_.cancel(it->second);
            }
            timers_[key] = engine_.schedule(engine_.now() + set->delay, EventKind::TimerExpiry,
                                            EventPayload{node, set->packet_id},
                                            [this, node, id = set->packet_id] { on_timer(node, id); });
        } else if (const auto* cancel = std::get_if<CancelTimer>(&action)) {
            if (auto it = timers_.find({node, cancel->packet_id}); it != timers_.end()) {
                engine_.cancel(it->second);
                timers_.erase(it);
            }
        }
    }
}

void Simulation::transmit(NodeId node, const Packet& packet, bool initial)
{
    Packet on_air = packet;
    on_air.hop_sender = node;
    on_air.hop_sender_pos = positions_[node];

    auto& rec = result_.records[record_index_.at(packet.id)];
    ++rec.tx_count;
    if (!initial) {
        rec.forwarders.insert(node);
    }
    result_.transmissions.push_back(TransmissionLog{engine_.now(), node, packet.id, initial});

    const Transmission tx{on_air, node, on_air.hop_sender_pos, engine_.now(), radio_.airtime()};
    medium_->broadcast(tx, positions_, engine_, [this](NodeId r, const Packet& p) { deliver(r, p); });
    engine_.schedule(engine_.now() + tx.airtime, EventKind::TxEnd, EventPayload{node, packet.id}, {});
}

void Simulation::deliver(NodeId receiver, const Packet& packet)
{
    auto& rec = result_.records[record_index_.at(packet.id)];
    if (receiver != rec.origin) {
        rec.receptions.emplace(receiver, engine_.now());
    }
    apply(receiver, nodes_[receiver]->on_receive(context(receiver), packet), false);
}

void Simulation::on_timer(NodeId node, const PacketId& id)
{
    timers_.erase({node, id});
    apply(node, nodes_[node]->on_timer_expiry(context(node), id), false);
}

} // namespace vanetcast

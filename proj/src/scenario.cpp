#include "vanetcast/scenario.hpp"

#include "vanetcast/format.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <set>

namespace vanetcast {

RoadConfig ScenarioConfig::road() const
{
    return RoadConfig{lane_count, road_length, lane_width, min_gap};
}

PlatoonLayout ScenarioConfig::layout() const
{
    return PlatoonLayout{vehicle_count, vehicular_gap, flow1, flow2};
}

DeferConfig ScenarioConfig::defer() const
{
    const double max_wait =
        max_defer_time.value_or(default_max_defer_time(radio.airtime(), radio.range, radio.prop_speed));
    return DeferConfig{max_wait, epsilon, radio.range};
}

ProtocolConfig ScenarioConfig::protocol_config() const
{
    return ProtocolConfig{protocol, p_fwd, angle_vertex, branch_polarity, defer(), lists};
}

MobilityParams ScenarioConfig::mobility() const
{
    return MobilityParams{mobility_sigma, 1.0};
}

std::vector<double> ScenarioConfig::send_times() const
{
    std::vector<double> out;
    // index arithmetic keeps 600 + k * 50 exact instead of accumulating error
    for (std::size_t k = 0;; ++k) {
        const double t = first_send + static_cast<double>(k) * send_interval;
        if (t > last_send + 1e-9 * send_interval) break;
        out.push_back(t);
    }
    return out;
}

std::vector<std::string> preset_names()
{
    return {"scenario1", "scenario2", "scenario3"};
}

ScenarioConfig preset(std::string_view name)
{
    ScenarioConfig cfg; // scenario1 values are the defaults
    if (name == "scenario1") {
        return cfg;
    }
    if (name == "scenario2") {
        cfg.vehicle_count = 200;
        cfg.vehicular_gap = 100.0;
        cfg.lane_count = 4;
        return cfg;
    }
    if (name == "scenario3") {
        cfg.vehicle_count = 500;
        cfg.vehicular_gap = 5.0;
        cfg.lane_count = 3;
        return cfg;
    }
    throw UnknownPreset(name);
}

void validate(const ScenarioConfig& c)
{
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ValidationError(what);
    };
    require(c.vehicle_count >= 2, "vehicle_count must be >= 2");
    require(c.lane_count >= 1, "lane_count must be >= 1");
    require(c.road_length > 0.0, "road_length must be > 0");
    require(c.vehicular_gap >= 0.0, "vehicular_gap must be >= 0");
    require(c.lane_width > 0.0, "lane_width must be > 0");
    require(c.min_gap >= 0.0, "min_gap must be >= 0");
    require(c.flow1.speed_kmh > 0.0 && c.flow2.speed_kmh > 0.0, "flow speeds must be > 0");
    require(c.flow1.accel >= 0.0 && c.flow1.decel >= 0.0 && c.flow2.accel >= 0.0 && c.flow2.decel >= 0.0,
            "flow accelerations must be >= 0");
    require(c.mobility_dt > 0.0, "mobility.dt must be > 0");
    require(c.mobility_sigma >= 0.0 && c.mobility_sigma <= 1.0, "mobility.sigma must be in [0, 1]");
    require(!c.source_node || *c.source_node < c.vehicle_count, "source_node must name an existing vehicle");
    require(c.first_send >= 0.0, "first_send must be >= 0");
    require(c.send_interval > 0.0, "send_interval must be > 0");
    require(c.first_send <= c.last_send && c.last_send <= c.sim_end, "need first_send <= last_send <= sim_end");
    require(c.radio.range > 0.0, "radio.range must be > 0");
    require(c.radio.data_rate > 0.0, "radio.data_rate must be > 0");
    require(c.radio.packet_size > 0.0, "radio.packet_size must be > 0");
    require(c.radio.prop_speed > 0.0, "radio.prop_speed must be > 0");
    require(c.radio.edge_loss_start >= 0.0 && c.radio.edge_loss_start <= 1.0,
            "radio.edge_loss_start must be in [0, 1]");
    require(c.radio.edge_loss_max >= 0.0 && c.radio.edge_loss_max <= 1.0, "radio.edge_loss_max must be in [0, 1]");
    require(c.p_fwd >= 0.0 && c.p_fwd <= 1.0, "protocol.p_fwd must be in [0, 1]");
    require(!c.max_defer_time || *c.max_defer_time > 0.0, "protocol.max_defer_time must be > 0");
    require(c.epsilon >= 1, "protocol.epsilon must be >= 1");
    require(c.lists.l1_capacity >= 1 && c.lists.l0_capacity >= 1, "list capacities must be >= 1");
}

namespace {

// -------------------------------------------------------------- value codecs

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view v)
{
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw std::invalid_argument("expected a number, got '" + std::string(v) + "'");
    }
    return out;
}

template <class Int>
Int to_int(std::string_view v)
{
    Int out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw std::invalid_argument("expected a non-negative integer, got '" + std::string(v) + "'");
    }
    return out;
}

std::string_view collision_name(CollisionModel m)
{
    return m == CollisionModel::Ideal ? "ideal" : "airtime-overlap";
}

struct Field
{
    const char* key;
    std::function<void(ScenarioConfig&, std::string_view)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

#define VC_DOUBLE(KEY, MEMBER)                                                                             \
    Field                                                                                                  \
    {                                                                                                      \
        KEY, [](ScenarioConfig& c, std::string_view v) { c.MEMBER = to_double(v); },                       \
            [](const ScenarioConfig& c) { return format_double(c.MEMBER); }                                \
    }

#define VC_SIZE(KEY, MEMBER)                                                                               \
    Field                                                                                                  \
    {                                                                                                      \
        KEY, [](ScenarioConfig& c, std::string_view v) { c.MEMBER = to_int<std::size_t>(v); },            \
            [](const ScenarioConfig& c) { return std::to_string(c.MEMBER); }                               \
    }

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = {
        VC_SIZE("vehicle_count", vehicle_count),
        VC_DOUBLE("vehicular_gap", vehicular_gap),
        VC_SIZE("lane_count", lane_count),
        VC_DOUBLE("road_length", road_length),
        VC_DOUBLE("lane_width", lane_width),
        VC_DOUBLE("min_gap", min_gap),
        VC_DOUBLE("flow1.speed_kmh", flow1.speed_kmh),
        VC_DOUBLE("flow1.accel", flow1.accel),
        VC_DOUBLE("flow1.decel", flow1.decel),
        VC_DOUBLE("flow2.speed_kmh", flow2.speed_kmh),
        VC_DOUBLE("flow2.accel", flow2.accel),
        VC_DOUBLE("flow2.decel", flow2.decel),
        VC_DOUBLE("mobility.dt", mobility_dt),
        VC_DOUBLE("mobility.sigma", mobility_sigma),
        Field{"source_node",
              [](ScenarioConfig& c, std::string_view v) {
                  if (v == "auto") {
                      c.source_node.reset();
                  } else {
                      c.source_node = to_int<NodeId>(v);
                  }
              },
              [](const ScenarioConfig& c) {
                  return c.source_node ? std::to_string(*c.source_node) : std::string("auto");
              }},
        VC_DOUBLE("first_send", first_send),
        VC_DOUBLE("send_interval", send_interval),
        VC_DOUBLE("last_send", last_send),
        VC_DOUBLE("sim_end", sim_end),
        VC_DOUBLE("radio.range", radio.range),
        VC_DOUBLE("radio.data_rate", radio.data_rate),
        VC_DOUBLE("radio.packet_size", radio.packet_size),
        VC_DOUBLE("radio.prop_speed", radio.prop_speed),
        Field{"radio.collision_model",
              [](ScenarioConfig& c, std::string_view v) {
                  if (v == "ideal") {
                      c.radio.collision_model = CollisionModel::Ideal;
                  } else if (v == "airtime-overlap") {
                      c.radio.collision_model = CollisionModel::AirtimeOverlap;
                  } else {
                      throw std::invalid_argument("expected ideal|airtime-overlap");
                  }
              },
              [](const ScenarioConfig& c) { return std::string(collision_name(c.radio.collision_model)); }},
        VC_DOUBLE("radio.edge_loss_start", radio.edge_loss_start),
        VC_DOUBLE("radio.edge_loss_max", radio.edge_loss_max),
        Field{"protocol",
              [](ScenarioConfig& c, std::string_view v) {
                  auto kind = parse_protocol(v);
                  if (!kind) throw std::invalid_argument("expected flooding|wpbm|odam|odam-c");
                  c.protocol = *kind;
              },
              [](const ScenarioConfig& c) { return std::string(to_string(c.protocol)); }},
        VC_DOUBLE("protocol.p_fwd", p_fwd),
        Field{"protocol.angle_vertex",
              [](ScenarioConfig& c, std::string_view v) {
                  if (v == "receiver") {
                      c.angle_vertex = AngleVertex::Receiver;
                  } else if (v == "sender") {
                      c.angle_vertex = AngleVertex::Sender;
                  } else {
                      throw std::invalid_argument("expected receiver|sender");
                  }
              },
              [](const ScenarioConfig& c) {
                  return std::string(c.angle_vertex == AngleVertex::Receiver ? "receiver" : "sender");
              }},
        Field{"protocol.branch_polarity",
              [](ScenarioConfig& c, std::string_view v) {
                  if (v == "prose") {
                      c.branch_polarity = BranchPolarity::Prose;
                  } else if (v == "pseudocode") {
                      c.branch_polarity = BranchPolarity::Pseudocode;
                  } else {
                      throw std::invalid_argument("expected prose|pseudocode");
                  }
              },
              [](const ScenarioConfig& c) {
                  return std::string(c.branch_polarity == BranchPolarity::Prose ? "prose" : "pseudocode");
              }},
        Field{"protocol.max_defer_time",
              [](ScenarioConfig& c, std::string_view v) {
                  if (v == "auto") {
                      c.max_defer_time.reset();
                  } else {
                      c.max_defer_time = to_double(v);
                  }
              },
              [](const ScenarioConfig& c) {
                  return c.max_defer_time ? format_double(*c.max_defer_time) : std::string("auto");
              }},
        Field{"protocol.epsilon", [](ScenarioConfig& c, std::string_view v) { c.epsilon = to_int<int>(v); },
              [](const ScenarioConfig& c) { return std::to_string(c.epsilon); }},
        VC_SIZE("protocol.l1_capacity", lists.l1_capacity),
        VC_SIZE("protocol.l0_capacity", lists.l0_capacity),
        Field{"seed", [](ScenarioConfig& c, std::string_view v) { c.seed = to_int<std::uint64_t>(v); },
              [](const ScenarioConfig& c) { return std::to_string(c.seed); }},
    };
    return table;
}

#undef VC_DOUBLE
#undef VC_SIZE

const Field* find_field(std::string_view key)
{
    for (const auto& f : fields()) {
        if (key == f.key) return &f;
    }
    return nullptr;
}

} // namespace

std::vector<std::string> config_keys()
{
    std::vector<std::string> keys;
    for (const auto& f : fields()) keys.emplace_back(f.key);
    return keys;
}

ScenarioConfig parse(std::string_view text)
{
    ScenarioConfig cfg = preset("scenario1");
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;

    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(line_no, "expected 'key = value'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ParseError(line_no, "expected 'key = value'");
        }
        if (!seen.insert(std::string(key)).second) {
            throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
        }

        if (key == "preset") {
            if (seen.size() != 1) {
                throw ParseError(line_no, "'preset' must come before any other key");
            }
            try {
                cfg = preset(value);
            } catch (const UnknownPreset& e) {
                throw ParseError(line_no, e.what());
            }
            continue;
        }

        const Field* field = find_field(key);
        if (field == nullptr) {
            throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
        }
        try {
            field->set(cfg, value);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, std::string(key) + ": " + e.what());
        }
    }

    validate(cfg);
    return cfg;
}

std::string render(const ScenarioConfig& cfg)
{
    std::string out;
    for (const auto& f : fields()) {
        out += f.key;
        out += " = ";
        out += f.get(cfg);
        out += '\n';
    }
    return out;
}

} // namespace vanetcast

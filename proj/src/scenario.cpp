#include "pulse_etl/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pulse_etl/errors.hpp"

namespace pulse_etl {

namespace {

// Plant parameters as written in a scenario file: `load` is the raw
// disturbance, converted to eps_eff according to the entry mode.
struct PlantParams {
    double a = 0.0;
    double b = 0.0;
    double load = 0.0;
    double q = 0.0;

    ContinuousModel to_model(DisturbanceEntry entry) const {
        return ContinuousModel{a, b, make_effective_disturbance(load, entry, b), q};
    }
};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

class KeyValues {
public:
    void add(const std::string& key, const std::string& value, int line) {
        if (!values_.emplace(key, Entry{value, line}).second) {
            throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
        }
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    double number(const std::string& key, double fallback) {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            return fallback;
        }
        used_.insert(key);
        const std::string& text = it->second.value;
        double out = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(out)) {
            throw ConfigError("line " + std::to_string(it->second.line) + ": '" + key + "' expects a number, got '" +
                              text + "'");
        }
        return out;
    }

    std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            return fallback;
        }
        used_.insert(key);
        const std::string& text = it->second.value;
        std::uint64_t out = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
            throw ConfigError("line " + std::to_string(it->second.line) + ": '" + key +
                              "' expects a non-negative integer, got '" + text + "'");
        }
        return out;
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            return fallback;
        }
        used_.insert(key);
        return it->second.value;
    }

    std::set<std::size_t> schedule_ids() const {
        std::set<std::size_t> ids;
        for (const auto& [key, entry] : values_) {
            if (key.rfind("schedule.", 0) != 0) {
                continue;
            }
            const auto dot = key.find('.', 9);
            const std::string id = key.substr(9, dot == std::string::npos ? std::string::npos : dot - 9);
            std::size_t value = 0;
            const auto res = std::from_chars(id.data(), id.data() + id.size(), value);
            if (res.ec != std::errc{} || res.ptr != id.data() + id.size() || dot == std::string::npos) {
                throw ConfigError("line " + std::to_string(entry.line) + ": malformed schedule key '" + key + "'");
            }
            ids.insert(value);
        }
        return ids;
    }

    void reject_unused() const {
        for (const auto& [key, entry] : values_) {
            if (used_.count(key) == 0) {
                throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
            }
        }
    }

private:
    struct Entry {
        std::string value;
        int line;
    };
    std::map<std::string, Entry> values_;
    std::set<std::string> used_;
};

DisturbanceEntry parse_entry(const std::string& s) {
    if (s == "additive") {
        return DisturbanceEntry::additive;
    }
    if (s == "input_side") {
        return DisturbanceEntry::input_side;
    }
    throw ConfigError("entry_mode must be 'additive' or 'input_side', got '" + s + "'");
}

LearningPolicyKind parse_policy(const std::string& s) {
    if (s == "fresh_window") {
        return LearningPolicyKind::fresh_window;
    }
    if (s == "all_data") {
        return LearningPolicyKind::all_data;
    }
    throw ConfigError("learning.policy must be 'fresh_window' or 'all_data', got '" + s + "'");
}

PlantParams read_plant(KeyValues& kv, const std::string& prefix, const PlantParams& fallback) {
    PlantParams p;
    p.a = kv.number(prefix + "a", fallback.a);
    p.b = kv.number(prefix + "b", fallback.b);
    p.load = kv.number(prefix + "eps", fallback.load);
    p.q = kv.number(prefix + "q", fallback.q);
    return p;
}

} // namespace

const char* to_string(DisturbanceEntry entry) noexcept {
    return entry == DisturbanceEntry::input_side ? "input_side" : "additive";
}

const char* to_string(LearningPolicyKind kind) noexcept {
    return kind == LearningPolicyKind::fresh_window ? "fresh_window" : "all_data";
}

void Scenario::validate() const {
    if (truth_schedule.empty()) {
        throw ConfigError("scenario has no true plant");
    }
    const ScheduleEntry& first = truth_schedule.front();
    const bool first_at_zero = (first.at_event && *first.at_event == 0) || (first.at_time_s && *first.at_time_s == 0.0);
    if (!first_at_zero) {
        throw ConfigError("the first true plant must be active from the start");
    }
    for (std::size_t i = 0; i < truth_schedule.size(); ++i) {
        const ScheduleEntry& e = truth_schedule[i];
        if (e.at_event.has_value() == e.at_time_s.has_value()) {
            throw ConfigError("schedule entry " + std::to_string(i) + " needs exactly one of at_event / at_s");
        }
        e.model.validate();
        if (i == 0) {
            continue;
        }
        const ScheduleEntry& prev = truth_schedule[i - 1];
        if (e.at_event) {
            if (i > 1 && !prev.at_event) {
                throw ConfigError("schedule mixes event- and time-based activation");
            }
            if (prev.at_event && *e.at_event <= *prev.at_event) {
                throw ConfigError("schedule activation points must be strictly increasing");
            }
        } else {
            if (i > 1 && !prev.at_time_s) {
                throw ConfigError("schedule mixes event- and time-based activation");
            }
            const double prev_t = prev.at_time_s ? *prev.at_time_s : 0.0;
            if (*e.at_time_s <= prev_t) {
                throw ConfigError("schedule activation points must be strictly increasing");
            }
        }
    }
    nominal_model.validate();
    state_trigger.validate();
    actuator.validate();
    learn_trigger.validate();
    if (mc.m_sim < 1 || !(mc.dt > 0.0)) {
        throw ConfigError("mc.M must be >= 1 and mc.dt > 0");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("sim.dt must be positive");
    }
    if (horizon_events == 0 && !(horizon_s > 0.0)) {
        throw ConfigError("scenario needs a positive horizon (sim.horizon_events or sim.horizon_s)");
    }
    if (horizon_s < 0.0) {
        throw ConfigError("sim.horizon_s must be >= 0");
    }
    if (learning_policy.kind == LearningPolicyKind::fresh_window && !(learning_policy.window_s > 0.0)) {
        throw ConfigError("learning.window_s must be positive");
    }
}

Scenario parse_scenario(std::istream& in) {
    KeyValues kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        }
        kv.add(key, value, line_no);
    }

    Scenario s;
    s.name = kv.text("name", s.name);
    s.disturbance_entry = parse_entry(kv.text("truth.entry_mode", "additive"));

    const PlantParams truth = read_plant(kv, "truth.", PlantParams{});
    const PlantParams nominal = read_plant(kv, "nominal.", truth);
    s.truth_schedule.push_back(ScheduleEntry{std::size_t{0}, std::nullopt, truth.to_model(s.disturbance_entry)});
    s.nominal_model = nominal.to_model(s.disturbance_entry);

    PlantParams previous = truth;
    for (const std::size_t id : kv.schedule_ids()) {
        const std::string prefix = "schedule." + std::to_string(id) + ".";
        ScheduleEntry entry;
        if (kv.has(prefix + "at_event")) {
            entry.at_event = static_cast<std::size_t>(kv.integer(prefix + "at_event", 0));
        }
        if (kv.has(prefix + "at_s")) {
            entry.at_time_s = kv.number(prefix + "at_s", 0.0);
        }
        previous = read_plant(kv, prefix, previous);
        entry.model = previous.to_model(s.disturbance_entry);
        s.truth_schedule.push_back(entry);
    }
    // A purely time-based schedule reads more naturally with the initial
    // plant anchored at t = 0.
    if (s.truth_schedule.size() > 1 && s.truth_schedule[1].at_time_s) {
        s.truth_schedule[0].at_event.reset();
        s.truth_schedule[0].at_time_s = 0.0;
    }

    s.actuator.u_max = kv.number("actuator.u_max", s.actuator.u_max);
    s.state_trigger.delta = kv.number("trigger.delta", s.state_trigger.delta);

    const double eta = kv.number("learn.eta", 0.05);
    const auto n_window = static_cast<std::size_t>(kv.integer("learn.N", 2000));
    const auto m_learn = static_cast<std::size_t>(kv.integer("learn.M", 10000));
    const double tau_max = kv.number("learn.tau_max", 1.0);
    if (!(eta > 0.0 && eta < 1.0) || n_window == 0 || !(tau_max > 0.0)) {
        throw ConfigError("learn.eta must lie in (0, 1), learn.N and learn.tau_max must be positive");
    }
    s.learn_trigger = LearnTriggerConfig{eta, n_window, m_learn, tau_max, kappa(eta, n_window, tau_max)};

    s.dt = kv.number("sim.dt", s.dt);
    s.mc.m_sim = static_cast<std::size_t>(kv.integer("mc.M", m_learn));
    s.mc.dt = kv.number("mc.dt", s.dt);
    s.mc.tau_max = tau_max;
    s.horizon_events = static_cast<std::size_t>(kv.integer("sim.horizon_events", 0));
    s.horizon_s = kv.number("sim.horizon_s", 0.0);

    s.learning_policy.kind = parse_policy(kv.text("learning.policy", "all_data"));
    s.learning_policy.window_s = kv.number("learning.window_s", s.learning_policy.window_s);
    s.seed = kv.integer("seed", 0);

    kv.reject_unused();
    s.validate();
    return s;
}

Scenario parse_scenario_text(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open scenario file '" + path.string() + "'");
    }
    return parse_scenario(in);
}

} // namespace pulse_etl

#include "stairgait/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stairgait/error.hpp"

namespace stairgait {

using nlohmann::json;

void require_valid(const SimConfig& config)
{
    const auto report = validate(config);
    if (!report.ok()) {
        const auto& first = report.violations.front();
        throw ConfigError(first.field, "invalid configuration:\n" + report.to_string());
    }
}

bool ValidationReport::mentions(std::string_view field) const
{
    for (const auto& v : violations) {
        if (v.field == field) return true;
    }
    return false;
}

std::string ValidationReport::to_string() const
{
    std::ostringstream out;
    for (const auto& v : violations) {
        out << v.field << ": " << v.message << '\n';
    }
    return out.str();
}

namespace {

class Checker {
public:
    void require(bool cond, std::string field, std::string message)
    {
        if (!cond) report_.violations.push_back({std::move(field), std::move(message)});
    }
    ValidationReport take() { return std::move(report_); }

private:
    ValidationReport report_;
};

}  // namespace

ValidationReport validate(const SimConfig& c)
{
    Checker check;
    const auto& r = c.robot;
    const std::pair<const char*, double> lengths[] = {
        {"robot.l1", r.l1}, {"robot.l2", r.l2}, {"robot.l3", r.l3},
        {"robot.l4", r.l4}, {"robot.l5", r.l5}, {"robot.l6", r.l6},
        {"robot.l7", r.l7}, {"robot.l8", r.l8}, {"robot.l9", r.l9}};
    for (const auto& [name, value] : lengths) {
        check.require(std::isfinite(value) && value > 0.0, name, "link length must be > 0");
    }
    const std::pair<const char*, double> masses[] = {
        {"robot.m1", r.m1}, {"robot.m2", r.m2}, {"robot.m3", r.m3},
        {"robot.m4", r.m4}, {"robot.m5", r.m5}, {"robot.m6", r.m6},
        {"robot.m7", r.m7}, {"robot.m8", r.m8}, {"robot.m9", r.m9}};
    for (const auto& [name, value] : masses) {
        check.require(std::isfinite(value) && value >= 0.0, name, "link mass must be >= 0");
    }
    check.require(r.l1 + r.l2 > r.l6 + r.l7, "robot.l1",
                  "leg reach l1+l2 must exceed foot length l6+l7");
    check.require(r.l3 + r.l4 > r.l8 + r.l9, "robot.l3",
                  "leg reach l3+l4 must exceed foot length l8+l9");

    const auto& s = c.stairs;
    check.require(std::isfinite(s.drop) && s.drop > 0.0, "stairs.drop", "step drop must be > 0");
    check.require(std::isfinite(s.tread) && s.tread > 0.0, "stairs.tread", "tread must be > 0");
    check.require(s.n_steps >= 1, "stairs.n_steps", "at least one step");
    const double reach = std::min(r.l1 + r.l2, r.l3 + r.l4);
    check.require(s.tread <= 2.0 * reach, "stairs.tread",
                  "tread exceeds the workspace diameter 2(l1+l2)");
    const double foot = std::max(r.l6 + r.l7, r.l8 + r.l9);
    check.require(s.tread >= foot, "stairs.tread", "tread shorter than the foot");
    if (s.drop > 0.0 && s.tread > 0.0) {
        check.require(s.tread / s.drop >= std::numbers::pi / 2.0, "stairs.drop",
                      "tread/drop below pi/2: brachistochrone hip path infeasible");
    }

    const auto& t = c.timing;
    check.require(0.0 < t.t1, "timing.t1", "t1 must be > 0");
    check.require(t.t1 < t.tp, "timing.tp", "knot order requires t1 < tp");
    check.require(t.tp < t.t2, "timing.t2", "knot order requires tp < t2");
    check.require(t.t2 < t.t_stop, "timing.t_stop", "knot order requires t2 < t_stop");
    check.require(t.t_stop < t.t3, "timing.t3", "knot order requires t_stop < t3");
    check.require(t.t3 <= t.tf, "timing.tf", "knot order requires t3 <= tf");
    check.require(t.bridge_end() < t.tf, "timing.tp", "bridge end t2+(tp-t1) must precede tf");
    const double half_pi = std::numbers::pi / 2.0;
    check.require(t.theta_a > 0.0 && t.theta_a <= half_pi, "timing.theta_a",
                  "theta_a must lie in (0, pi/2]");
    check.require(t.theta_b > 0.0 && t.theta_b <= half_pi, "timing.theta_b",
                  "theta_b must lie in (0, pi/2]");
    check.require(t.theta_c0_fallback > 0.0 && t.theta_c0_fallback < 2.0 * std::numbers::pi,
                  "timing.theta_c0_fallback", "fallback theta_c0 must lie in (0, 2pi)");

    check.require(std::isfinite(c.dt) && c.dt > 0.0, "dt", "sample period must be > 0");
    if (c.dt > 0.0) {
        const double n = t.tf / c.dt;
        check.require(n >= 100.0, "dt", "tf/dt must be >= 100");
        check.require(std::abs(n - std::round(n)) < 1e-6, "dt",
                      "tf must be an integer multiple of dt");
    }
    check.require(std::isfinite(c.gravity) && c.gravity > 0.0, "gravity", "gravity must be > 0");

    const auto& ik = c.ik;
    check.require(ik.input_neurons == 2, "ik.input_neurons", "the network takes (x, z)");
    check.require(ik.output_neurons == 2, "ik.output_neurons", "the network emits two angles");
    check.require(ik.hidden_layers == 1, "ik.hidden_layers", "exactly one hidden layer");
    check.require(ik.hidden_nodes >= 1, "ik.hidden_nodes", "need at least one hidden node");
    check.require(ik.activation == "sigmoid", "ik.activation", "only sigmoid is supported");
    check.require(ik.learning_rate > 0.0, "ik.learning_rate", "learning rate must be > 0");
    check.require(ik.max_iterations >= 0, "ik.max_iterations", "must be >= 0");
    check.require(ik.error_threshold > 0.0, "ik.error_threshold", "threshold must be > 0");

    const auto& b = c.balance;
    check.require(b.zmp_start_fraction >= 0.0 && b.zmp_start_fraction <= 1.0,
                  "balance.zmp_start_fraction", "must lie in [0, 1]");
    check.require(b.zmp_end_fraction >= 0.0 && b.zmp_end_fraction <= 1.0,
                  "balance.zmp_end_fraction", "must lie in [0, 1]");
    check.require(b.reach_margin >= 0.0 && b.reach_margin < reach / 2.0,
                  "balance.reach_margin", "must lie in [0, reach/2)");
    return check.take();
}

namespace {

/// Reads one JSON object, tracking which keys were consumed so that typos
/// surface as errors instead of silently keeping defaults.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path))
    {
        if (!node_.is_object()) {
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
        }
    }

    template <typename T>
    void read(const char* key, T& out)
    {
        seen_.insert(key);
        auto it = node_.find(key);
        if (it == node_.end()) return;
        const std::string field = qualify(key);
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!it->is_number()) throw ConfigError(field, field + ": expected a number");
                out = it->template get<double>();
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!it->is_boolean()) throw ConfigError(field, field + ": expected a boolean");
                out = it->template get<bool>();
            } else if constexpr (std::is_integral_v<T>) {
                if (!it->is_number_integer()) {
                    throw ConfigError(field, field + ": expected an integer");
                }
                out = it->template get<T>();
            } else {
                if (!it->is_string()) throw ConfigError(field, field + ": expected a string");
                out = it->template get<std::string>();
            }
        } catch (const json::exception& e) {
            throw ConfigError(field, field + ": " + e.what());
        }
    }

    std::optional<Section> child(const char* key)
    {
        seen_.insert(key);
        auto it = node_.find(key);
        if (it == node_.end()) return std::nullopt;
        return Section(*it, qualify(key));
    }

    const json* raw(const char* key)
    {
        seen_.insert(key);
        auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }

    void finish() const
    {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.count(key)) {
                const std::string field = qualify(key.c_str());
                throw ConfigError(field, field + ": unknown key");
            }
        }
    }

    std::string qualify(const char* key) const
    {
        return path_.empty() ? std::string(key) : path_ + "." + key;
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

}  // namespace

SimConfig load_config(std::string_view text)
{
    json doc;
    bool blank = true;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            blank = false;
            break;
        }
    }
    if (blank) {
        doc = json::object();
    } else {
        try {
            doc = json::parse(text.begin(), text.end());
        } catch (const json::parse_error& e) {
            throw ConfigError("", std::string("parse error: ") + e.what());
        }
    }

    SimConfig c;
    Section root(doc, "");
    if (auto robot = root.child("robot")) {
        auto& r = c.robot;
        robot->read("l1", r.l1); robot->read("l2", r.l2); robot->read("l3", r.l3);
        robot->read("l4", r.l4); robot->read("l5", r.l5); robot->read("l6", r.l6);
        robot->read("l7", r.l7); robot->read("l8", r.l8); robot->read("l9", r.l9);
        robot->read("m1", r.m1); robot->read("m2", r.m2); robot->read("m3", r.m3);
        robot->read("m4", r.m4); robot->read("m5", r.m5); robot->read("m6", r.m6);
        robot->read("m7", r.m7); robot->read("m8", r.m8); robot->read("m9", r.m9);
        robot->finish();
    }
    if (auto stairs = root.child("stairs")) {
        stairs->read("drop", c.stairs.drop);
        stairs->read("tread", c.stairs.tread);
        stairs->read("n_steps", c.stairs.n_steps);
        stairs->finish();
    }
    if (auto timing = root.child("timing")) {
        auto& t = c.timing;
        timing->read("t1", t.t1); timing->read("tp", t.tp); timing->read("t2", t.t2);
        timing->read("t_stop", t.t_stop); timing->read("t3", t.t3); timing->read("tf", t.tf);
        timing->read("theta_a", t.theta_a); timing->read("theta_b", t.theta_b);
        timing->read("theta_c0_fallback", t.theta_c0_fallback);
        timing->finish();
    }
    std::string mode = std::string(to_string(c.hip_mode));
    root.read("hip_mode", mode);
    if (auto parsed = parse_hip_mode(mode)) {
        c.hip_mode = *parsed;
    } else {
        throw ConfigError("hip_mode", "hip_mode: expected brach, arc or slope, got '" + mode + "'");
    }
    root.read("dt", c.dt);
    root.read("gravity", c.gravity);
    root.read("rng_seed", c.rng_seed);
    if (auto ik = root.child("ik")) {
        auto& p = c.ik;
        ik->read("input_neurons", p.input_neurons);
        ik->read("output_neurons", p.output_neurons);
        ik->read("hidden_layers", p.hidden_layers);
        ik->read("hidden_nodes", p.hidden_nodes);
        ik->read("activation", p.activation);
        ik->read("learning_rate", p.learning_rate);
        ik->read("max_iterations", p.max_iterations);
        ik->read("error_threshold", p.error_threshold);
        ik->read("warm_start", p.warm_start);
        ik->read("use_network", p.use_network);
        ik->finish();
    }
    if (auto balance = root.child("balance")) {
        balance->read("zmp_start_fraction", c.balance.zmp_start_fraction);
        balance->read("zmp_end_fraction", c.balance.zmp_end_fraction);
        balance->read("reach_margin", c.balance.reach_margin);
        balance->finish();
    }
    root.finish();

    require_valid(c);
    return c;
}

SimConfig load_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot open config file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_config(buffer.str());
}

std::string serialize_config(const SimConfig& c)
{
    const auto& r = c.robot;
    const auto& t = c.timing;
    json doc = {
        {"robot", {{"l1", r.l1}, {"l2", r.l2}, {"l3", r.l3}, {"l4", r.l4}, {"l5", r.l5},
                   {"l6", r.l6}, {"l7", r.l7}, {"l8", r.l8}, {"l9", r.l9},
                   {"m1", r.m1}, {"m2", r.m2}, {"m3", r.m3}, {"m4", r.m4}, {"m5", r.m5},
                   {"m6", r.m6}, {"m7", r.m7}, {"m8", r.m8}, {"m9", r.m9}}},
        {"stairs", {{"drop", c.stairs.drop}, {"tread", c.stairs.tread},
                    {"n_steps", c.stairs.n_steps}}},
        {"timing", {{"t1", t.t1}, {"tp", t.tp}, {"t2", t.t2}, {"t_stop", t.t_stop},
                    {"t3", t.t3}, {"tf", t.tf}, {"theta_a", t.theta_a},
                    {"theta_b", t.theta_b}, {"theta_c0_fallback", t.theta_c0_fallback}}},
        {"hip_mode", std::string(to_string(c.hip_mode))},
        {"dt", c.dt},
        {"gravity", c.gravity},
        {"rng_seed", c.rng_seed},
        {"ik", {{"input_neurons", c.ik.input_neurons},
                {"output_neurons", c.ik.output_neurons},
                {"hidden_layers", c.ik.hidden_layers},
                {"hidden_nodes", c.ik.hidden_nodes},
                {"activation", c.ik.activation},
                {"learning_rate", c.ik.learning_rate},
                {"max_iterations", c.ik.max_iterations},
                {"error_threshold", c.ik.error_threshold},
                {"warm_start", c.ik.warm_start},
                {"use_network", c.ik.use_network}}},
        {"balance", {{"zmp_start_fraction", c.balance.zmp_start_fraction},
                     {"zmp_end_fraction", c.balance.zmp_end_fraction},
                     {"reach_margin", c.balance.reach_margin}}},
    };
    return doc.dump(2);
}

std::string config_hash(const SimConfig& config)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize_config(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace stairgait

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stairgait/config.hpp"
#include "stairgait/error.hpp"
#include "stairgait/sim.hpp"
#include "stairgait/trace_io.hpp"

namespace sg = stairgait;

namespace {

struct Common {
    std::string config_path;
    std::string hip_mode;
    std::string out_path;
    std::string format = "csv";
    int steps = 0;
};

sg::SimConfig load(const Common& opt)
{
    sg::SimConfig cfg = opt.config_path.empty() ? sg::load_config("") : sg::load_config_file(opt.config_path);
    if (!opt.hip_mode.empty()) {
        cfg.hip_mode = *sg::parse_hip_mode(opt.hip_mode);
    }
    if (opt.steps > 0) cfg.stairs.n_steps = opt.steps;
    const auto report = sg::validate(cfg);
    if (!report.ok()) {
        throw sg::ConfigError(report.violations.front().field, "invalid configuration:\n" + report.to_string());
    }
    return cfg;
}

void emit(const std::string& text, const std::string& path)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

void report_trace(const sg::GaitTrace& trace)
{
    std::cerr << "samples " << trace.size() << ", hip height " << trace.z_initial << " cm";
    if (trace.lowering() > 0.0) std::cerr << " (lowered " << trace.lowering() << " cm)";
    std::cerr << ", ik fallbacks " << trace.ik_fallbacks << "/" << trace.ik_samples << "\n";
}

nlohmann::ordered_json metrics_json(const sg::MetricsSummary& s)
{
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& m : s.modes) {
        out.push_back({{"mode", std::string(sg::to_string(m.mode))},
                       {"max_z_ci", m.max_z_ci},
                       {"nominal_height", m.nominal_height},
                       {"lowering", m.lowering},
                       {"max_acc", m.max_acc},
                       {"acc_joint", m.acc_joint},
                       {"acc_time", m.acc_time},
                       {"max_jerk", m.max_jerk},
                       {"jerk_joint", m.jerk_joint},
                       {"jerk_time", m.jerk_time},
                       {"min_clearance", m.min_clearance},
                       {"ik_fallbacks", m.ik_fallbacks}});
    }
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stair-descent gait planner for a planar 9-link toe-foot biped"};
    app.require_subcommand(1);
    Common opt;
    const std::set<std::string> modes{"brach", "arc", "slope"};

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    };
    auto add_trace_opts = [&](CLI::App* sub) {
        add_config(sub);
        sub->add_option("--hip-mode", opt.hip_mode, "hip height curve")->check(CLI::IsMember(modes));
        sub->add_option("--out", opt.out_path, "output file (default stdout)");
        sub->add_option("--format", opt.format, "trace format")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* plan = app.add_subcommand("plan", "plan one step and export the trace");
    add_trace_opts(plan);
    auto* simulate = app.add_subcommand("simulate", "plan a multi-step descent");
    add_trace_opts(simulate);
    simulate->add_option("--steps", opt.steps, "number of steps")->check(CLI::PositiveNumber);
    auto* compare = app.add_subcommand("compare", "compare the three hip curves");
    add_config(compare);
    compare->add_option("--out", opt.out_path, "also write the metrics as JSON");
    auto* check = app.add_subcommand("check", "validate a configuration");
    add_config(check);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            const auto cfg = opt.config_path.empty() ? sg::load_config("") : sg::load_config_file(opt.config_path);
            std::cout << "ok " << sg::config_hash(cfg) << "\n";
            return 0;
        }
        const sg::SimConfig cfg = load(opt);
        if (compare->parsed()) {
            const auto summary = sg::compare_modes(cfg);
            std::cout << summary.table();
            if (!opt.out_path.empty()) emit(metrics_json(summary).dump(2) + "\n", opt.out_path);
            return 0;
        }
        const int steps = simulate->parsed() ? cfg.stairs.n_steps : 1;
        const sg::GaitTrace trace = sg::simulate_descent(cfg, steps);
        report_trace(trace);
        const auto format = opt.format == "json" ? sg::TraceFormat::Json : sg::TraceFormat::Csv;
        emit(sg::export_trace(trace, format), opt.out_path);
        return 0;
    } catch (const sg::ConfigError& e) {
        std::cerr << "error [config" << (e.field().empty() ? "" : ":" + e.field()) << "]: " << e.what() << "\n";
        return 2;
    } catch (const sg::PlanningError& e) {
        std::cerr << "error [" << e.phase() << "]: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error [io]: " << e.what() << "\n";
        return 4;
    }
}

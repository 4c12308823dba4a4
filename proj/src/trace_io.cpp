#include "stairgait/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace stairgait {

namespace {

constexpr std::size_t kColumns = 32;

std::array<double, kColumns> flatten(const GaitTrace& trace, std::size_t i)
{
    std::array<double, kColumns> row{};
    std::size_t c = 0;
    row[c++] = trace.t[i];
    for (int j = 1; j <= 9; ++j) row[c++] = trace.joints[i][j];
    for (const LegPoints* p : {&trace.leg0[i], &trace.leg1[i]}) {
        for (PlanarPoint q : {p->hip, p->knee, p->ankle, p->sole, p->toe}) {
            row[c++] = q.x;
            row[c++] = q.z;
        }
    }
    row[c++] = trace.zmp_x[i];
    row[c++] = trace.cog_x[i];
    return row;
}

void append(GaitTrace& trace, const std::array<double, kColumns>& row)
{
    std::size_t c = 0;
    trace.t.push_back(row[c++]);
    JointState js;
    for (int j = 1; j <= 9; ++j) js[j] = row[c++];
    trace.joints.push_back(js);
    for (std::vector<LegPoints>* leg : {&trace.leg0, &trace.leg1}) {
        LegPoints p;
        for (PlanarPoint* q : {&p.hip, &p.knee, &p.ankle, &p.sole, &p.toe}) {
            q->x = row[c++];
            q->z = row[c++];
        }
        leg->push_back(p);
    }
    trace.zmp_x.push_back(row[c++]);
    trace.cog_x.push_back(row[c++]);
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

const std::vector<std::string>& trace_columns()
{
    static const std::vector<std::string> columns = [] {
        std::vector<std::string> c{"t"};
        for (int j = 1; j <= 9; ++j) c.push_back("theta" + std::to_string(j));
        for (const char* leg : {"leg0", "leg1"}) {
            for (const char* joint : {"H", "K", "A", "S", "T"}) {
                c.push_back(std::string(leg) + "_" + joint + "_x");
                c.push_back(std::string(leg) + "_" + joint + "_z");
            }
        }
        c.push_back("zmp_x");
        c.push_back("cog_x");
        return c;
    }();
    return columns;
}

std::string export_trace(const GaitTrace& trace, TraceFormat format)
{
    const auto& columns = trace_columns();
    if (format == TraceFormat::Csv) {
        std::string out;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            out += (c ? "," : "") + columns[c];
        }
        out += '\n';
        for (std::size_t i = 0; i < trace.size(); ++i) {
            const auto row = flatten(trace, i);
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ',';
                out += format_number(row[c]);
            }
            out += '\n';
        }
        return out;
    }

    nlohmann::ordered_json doc;
    doc["format"] = "stairgait-trace";
    doc["version"] = 1;
    doc["metadata"] = {{"config_hash", trace.config_hash},
                       {"hip_mode", std::string(to_string(trace.hip_mode))},
                       {"dt", trace.dt},
                       {"n_steps", trace.n_steps},
                       {"z_initial", trace.z_initial},
                       {"nominal_height", trace.nominal_height},
                       {"ik_samples", trace.ik_samples},
                       {"ik_fallbacks", trace.ik_fallbacks},
                       {"ik_iterations", trace.ik_iterations}};
    doc["columns"] = columns;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    std::vector<std::vector<double>> cols(columns.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto row = flatten(trace, i);
        for (std::size_t c = 0; c < row.size(); ++c) cols[c].push_back(row[c]);
    }
    for (std::size_t c = 0; c < columns.size(); ++c) data[columns[c]] = cols[c];
    doc["data"] = std::move(data);
    return doc.dump(1) + "\n";
}

void write_trace(const std::filesystem::path& path, const GaitTrace& trace, TraceFormat format)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << export_trace(trace, format);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

GaitTrace import_trace(std::string_view text, TraceFormat format)
{
    const auto& columns = trace_columns();
    GaitTrace trace;
    if (format == TraceFormat::Csv) {
        std::istringstream in{std::string(text)};
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("trace CSV has no header");
        std::string expected;
        for (std::size_t c = 0; c < columns.size(); ++c) expected += (c ? "," : "") + columns[c];
        if (line != expected) throw std::runtime_error("trace CSV header mismatch");
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            std::array<double, kColumns> row{};
            std::size_t c = 0;
            const char* p = line.c_str();
            while (true) {
                char* end = nullptr;
                if (c >= kColumns) throw std::runtime_error("too many fields on line " + std::to_string(lineno));
                row[c++] = std::strtod(p, &end);
                if (end == p) throw std::runtime_error("bad number on line " + std::to_string(lineno));
                if (*end == '\0') break;
                if (*end != ',') throw std::runtime_error("bad separator on line " + std::to_string(lineno));
                p = end + 1;
            }
            if (c != kColumns) throw std::runtime_error("too few fields on line " + std::to_string(lineno));
            append(trace, row);
        }
        if (trace.size() > 1) trace.dt = trace.t[1] - trace.t[0];
        return trace;
    }

    const auto doc = nlohmann::json::parse(text.begin(), text.end());
    if (doc.value("format", "") != "stairgait-trace") throw std::runtime_error("not a trace document");
    const auto& meta = doc.at("metadata");
    trace.config_hash = meta.at("config_hash").get<std::string>();
    trace.hip_mode = parse_hip_mode(meta.at("hip_mode").get<std::string>()).value_or(HipMode::Brachistochrone);
    trace.dt = meta.at("dt").get<double>();
    trace.n_steps = meta.at("n_steps").get<int>();
    trace.z_initial = meta.at("z_initial").get<double>();
    trace.nominal_height = meta.at("nominal_height").get<double>();
    trace.ik_samples = meta.at("ik_samples").get<int>();
    trace.ik_fallbacks = meta.at("ik_fallbacks").get<int>();
    trace.ik_iterations = meta.at("ik_iterations").get<int>();
    const auto& data = doc.at("data");
    std::vector<std::vector<double>> cols;
    for (const auto& name : columns) cols.push_back(data.at(name).get<std::vector<double>>());
    const std::size_t n = cols[0].size();
    for (const auto& c : cols) {
        if (c.size() != n) throw std::runtime_error("trace columns differ in length");
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::array<double, kColumns> row{};
        for (std::size_t c = 0; c < kColumns; ++c) row[c] = cols[c][i];
        append(trace, row);
    }
    return trace;
}

}  // namespace stairgait

#include "singlab/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace singlab {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

json ReportRow::to_json() const {
    return json{{"v", kReportSchemaVersion},
                {"id", id},
                {"command", command},
                {"input_hash", input_hash},
                {"payload", payload},
                {"wall_ms", wall_ms}};
}

std::string ReportRow::to_jsonl() const { return to_json().dump() + "\n"; }

ReportRow make_row(const std::string& id, const std::string& command,
                   const std::string& canonical_input, json payload,
                   double wall_ms) {
    std::ostringstream hash;
    hash << std::hex << std::setw(16) << std::setfill('0')
         << fnv1a64(canonical_input);
    return ReportRow{id, command, hash.str(), std::move(payload), wall_ms};
}

json to_json(const ExponentFit& fit) {
    return json{{"slope", fit.slope},
                {"intercept", fit.intercept},
                {"slope_se", fit.slope_se},
                {"r_squared", fit.r_squared},
                {"window", {fit.window_min, fit.window_max}},
                {"point_count", fit.point_count},
                {"low_confidence", fit.low_confidence}};
}

json to_json(const ShellProfile& profile) {
    json shells = json::array();
    for (const auto& s : profile.shells) {
        shells.push_back(json{{"level", s.level},
                              {"hits", s.hits},
                              {"measure", s.measure},
                              {"measure_se", s.measure_se},
                              {"contribution", s.contribution},
                              {"contribution_se", s.contribution_se}});
    }
    return json{{"shells", std::move(shells)},
                {"j_max", profile.j_max},
                {"p", profile.exponent_p},
                {"bulk", profile.bulk},
                {"bulk_se", profile.bulk_se},
                {"deep_hits", profile.deep_hits},
                {"sink_hits", profile.sink_hits},
                {"total_samples", profile.total_samples}};
}

json to_json(const IntegralVerdict& verdict, bool with_profile) {
    json out{{"kind", to_string(verdict.kind)},
             {"value", verdict.value},
             {"error_bar", verdict.error_bar},
             {"tail_growth_rate", verdict.tail_growth_rate},
             {"reason", verdict.reason},
             {"fit", to_json(verdict.fit)}};
    if (with_profile) out["profile"] = to_json(verdict.profile);
    return out;
}

json to_json(const CriticalExponentResult& result) {
    json probes = json::array();
    for (const auto& [p, kind] : result.probes)
        probes.push_back(json{{"p", p}, {"kind", to_string(kind)}});
    return json{{"gamma", result.gamma},
                {"bracket", {result.bracket_lo, result.bracket_hi}},
                {"widened", result.widened},
                {"probes", std::move(probes)}};
}

json to_json(const DimensionEstimate& est) {
    return json{{"dim", est.dim_value},
                {"method", est.method == DimensionMethod::BoxCount
                               ? "box_count"
                               : "neighborhood_volume"},
                {"fit", to_json(est.fit)}};
}

json to_json(const ExponentReport& report) {
    return json{{"alpha0", to_json(report.alpha0)},
                {"beta0", to_json(report.beta0)},
                {"alpha_dist", to_json(report.alpha_dist)},
                {"inequality_margin", report.inequality_margin},
                {"codim_warning", report.codim_warning},
                {"low_confidence", report.low_confidence}};
}

json to_json(const FlestResult& result) {
    json norms = json::array();
    for (const auto& [eps, norm] : result.norms)
        norms.push_back(json{{"eps", eps}, {"norm", norm}});
    return json{{"fit", to_json(result.fit)},
                {"bound_slope", result.bound_slope},
                {"norms", std::move(norms)}};
}

std::string csv_header() { return "id,command,input_hash,summary,wall_ms\n"; }

std::string csv_line(const ReportRow& row) {
    // Compact one-line summary: verdict kind or headline number if present.
    std::string summary;
    if (row.payload.contains("kind"))
        summary = row.payload["kind"].get<std::string>();
    else if (row.payload.contains("gamma"))
        summary = json(row.payload["gamma"]).dump();
    else if (row.payload.contains("inequality_margin"))
        summary = json(row.payload["inequality_margin"]).dump();
    else if (row.payload.contains("dim"))
        summary = json(row.payload["dim"]).dump();
    std::ostringstream os;
    os << row.id << "," << row.command << "," << row.input_hash << ","
       << summary << "," << row.wall_ms << "\n";
    return os.str();
}

std::string zero_sample_csv(const ZeroSample& sample) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (int i = 1; i <= sample.num_vars; ++i) os << "x" << i << ",";
    os << "residual,steps\n";
    for (size_t k = 0; k < sample.points.size(); ++k) {
        for (double c : sample.points[k]) os << c << ",";
        os << sample.residuals[k] << "," << sample.steps[k] << "\n";
    }
    return os.str();
}

std::string cover_csv(const std::vector<DyadicCube>& cubes) {
    std::ostringstream os;
    os << "level";
    if (!cubes.empty())
        for (int i = 1; i <= cubes.front().dim(); ++i) os << ",k" << i;
    os << "\n";
    for (const auto& cube : cubes) {
        os << cube.level;
        for (auto k : cube.index) os << "," << k;
        os << "\n";
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

void append_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

}  // namespace singlab

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "singlab/cutoff.hpp"
#include "singlab/exponents.hpp"
#include "singlab/quadrature.hpp"
#include "singlab/zero_geometry.hpp"

namespace singlab {

inline constexpr int kReportSchemaVersion = 1;

// FNV-1a, used to pair report rows with their inputs after the fact.
std::uint64_t fnv1a64(const std::string& text);

/*
 * One appended record of a run: the payload is deterministic for a fixed
 * seed/budget, wall time is carried outside it.
 */
struct ReportRow {
    std::string id;
    std::string command;
    std::string input_hash;  // hex of fnv1a64 over the canonical input text
    nlohmann::json payload;
    double wall_ms = 0.0;

    nlohmann::json to_json() const;
    std::string to_jsonl() const;
};

ReportRow make_row(const std::string& id, const std::string& command,
                   const std::string& canonical_input, nlohmann::json payload,
                   double wall_ms);

// Payload serializers for the domain results.
nlohmann::json to_json(const ExponentFit& fit);
nlohmann::json to_json(const ShellProfile& profile);
nlohmann::json to_json(const IntegralVerdict& verdict, bool with_profile = true);
nlohmann::json to_json(const CriticalExponentResult& result);
nlohmann::json to_json(const DimensionEstimate& est);
nlohmann::json to_json(const ExponentReport& report);
nlohmann::json to_json(const FlestResult& result);

// CSV emission: a flat summary line per row, plus domain-specific tables.
std::string csv_header();
std::string csv_line(const ReportRow& row);
std::string zero_sample_csv(const ZeroSample& sample);
std::string cover_csv(const std::vector<DyadicCube>& cubes);

void write_text_file(const std::string& path, const std::string& content);
void append_text_file(const std::string& path, const std::string& content);

}  // namespace singlab

#pragma once

#include "wwf/harness.hpp"
#include "wwf/series.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wwf {

inline constexpr const char* kVersion = "wwforecast 0.1.0";

// Input CSV schema: header declares either a `wval` column (schema A) or an
// `sd_above_baseline` column (schema B, transformed via wval_from_sd).
struct IngestOptions {
    bool allow_unknown_regions = false;
};

std::vector<WvalSeries> ingest(const std::filesystem::path& path,
                               const IngestOptions& options = {});

// FNV-1a checksum of the file bytes, hex-encoded.
std::string file_checksum(const std::filesystem::path& path);

struct ManifestInfo {
    std::string input_path;
    std::string input_checksum;
    std::string config_echo;     // one key=value pair per line fragment, ';' joined
    std::string timestamp;       // RFC3339-ish; empty to omit
};

// Writes summary.csv, skill_<region>.csv, distributions.csv, forecasts.csv,
// heatmap_<region>.svg and manifest.txt into outdir.
void emit_reports(const RunArtifact& artifact, const std::filesystem::path& outdir,
                  const ManifestInfo& manifest);

// Reload a stored artifact (distributions.csv + forecasts.csv) and rebuild the
// derived tables.
RunArtifact load_artifact(const std::filesystem::path& dir);

// Synthetic multi-wave dataset covering every epiweek ending in [start, end]
// for all five regions; written in schema A.
void write_synthetic_dataset(const std::filesystem::path& path, Date start, Date end,
                             std::uint64_t seed);

} // namespace wwf

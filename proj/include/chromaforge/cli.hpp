#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chromaforge/ace.hpp"
#include "chromaforge/chromakey.hpp"
#include "chromaforge/datasetgen.hpp"
#include "chromaforge/error.hpp"

namespace chromaforge {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitIo = 3, kExitProcessing = 4 };

/// One dataset build. Relative paths in the JSON file resolve against the file's directory.
struct PipelineConfig {
    std::filesystem::path captures;
    std::filesystem::path class_manifest;
    std::filesystem::path backgrounds;
    std::filesystem::path layouts;
    std::filesystem::path output;
    std::uint64_t seed = 0;
    int expected_views_per_camera = 200;
    bool fast_png = false;
    AceParams ace;
    KeyParams key;
    GenConfig generation;

    nlohmann::json to_json() const;
};

/// Parses and checks everything that can be checked without writing: paths exist, parameters
/// are valid, every layout names an existing background and every background has a layout.
/// Throws Error(Config | NotFound | MalformedInput).
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
PipelineConfig parse_pipeline_config(const nlohmann::json& j, const std::filesystem::path& base);
void validate_pipeline_config(const PipelineConfig& config);

struct PipelineResult {
    IngestReport ingest;
    std::size_t samples = 0;
    std::filesystem::path manifest;
};

/// Pipeline stages, exposed for tests and benchmarks.
IngestResult pipeline_ingest(const PipelineConfig& config);
/// Equalized backgrounds paired with their layouts, sorted by id.
std::vector<Background> pipeline_backgrounds(const PipelineConfig& config);

/// ingest -> background ACE -> generate -> darknet emission into config.output.
PipelineResult run_pipeline(const PipelineConfig& config);

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int exit_code_for(ErrorCode code);

}  // namespace chromaforge

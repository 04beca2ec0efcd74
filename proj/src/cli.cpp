#include "chromaforge/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include "chromaforge/amygdala.hpp"
#include "chromaforge/error.hpp"
#include "chromaforge/morphology.hpp"
#include "chromaforge/parallel.hpp"
#include "chromaforge/png_io.hpp"

#ifndef CHROMAFORGE_VERSION
#define CHROMAFORGE_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;

namespace chromaforge {

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::Config:
            return kExitUsage;
        case ErrorCode::NotFound:
        case ErrorCode::Io:
        case ErrorCode::MalformedInput:
        case ErrorCode::UnsupportedDepth:
            return kExitIo;
        case ErrorCode::DimensionMismatch:
        case ErrorCode::NoObject:
        case ErrorCode::Placement:
            return kExitProcessing;
    }
    return kExitProcessing;
}

// ---------------------------------------------------------------------------
// Pipeline configuration

nlohmann::json PipelineConfig::to_json() const {
    return {{"captures", captures.string()},
            {"class_manifest", class_manifest.string()},
            {"backgrounds", backgrounds.string()},
            {"layouts", layouts.string()},
            {"output", output.string()},
            {"seed", seed},
            {"expected_views_per_camera", expected_views_per_camera},
            {"fast_png", fast_png},
            {"ace", {{"slope", ace.slope}, {"samples", ace.samples}, {"degenerate_value", ace.degenerate_value}}},
            {"key",
             {{"hue_min", key.hue_min},
              {"hue_max", key.hue_max},
              {"sat_min", key.sat_min},
              {"val_min", key.val_min},
              {"open_radius", key.open_radius},
              {"close_radius", key.close_radius},
              {"despill", key.despill}}},
            {"generation", chromaforge::to_json(generation)}};
}

PipelineConfig parse_pipeline_config(const nlohmann::json& j, const fs::path& base) {
    PipelineConfig c;
    try {
        auto path_of = [&](const char* key) {
            const fs::path p = j.at(key).get<std::string>();
            return p.is_absolute() ? p : base / p;
        };
        c.captures = path_of("captures");
        c.class_manifest = path_of("class_manifest");
        c.backgrounds = path_of("backgrounds");
        c.layouts = path_of("layouts");
        c.output = path_of("output");
        if (!j.contains("seed")) throw Error(ErrorCode::Config, "config must set 'seed'");
        c.seed = j.at("seed").get<std::uint64_t>();
        c.expected_views_per_camera = j.value("expected_views_per_camera", 200);
        c.fast_png = j.value("fast_png", false);
        if (j.contains("ace")) {
            const auto& a = j.at("ace");
            c.ace.slope = a.value("slope", c.ace.slope);
            c.ace.samples = a.value("samples", c.ace.samples);
            c.ace.degenerate_value = a.value("degenerate_value", c.ace.degenerate_value);
        }
        if (j.contains("key")) {
            const auto& k = j.at("key");
            c.key.hue_min = k.value("hue_min", c.key.hue_min);
            c.key.hue_max = k.value("hue_max", c.key.hue_max);
            c.key.sat_min = k.value("sat_min", c.key.sat_min);
            c.key.val_min = k.value("val_min", c.key.val_min);
            c.key.open_radius = k.value("open_radius", c.key.open_radius);
            c.key.close_radius = k.value("close_radius", c.key.close_radius);
            c.key.despill = k.value("despill", c.key.despill);
        }
        nlohmann::json gen = j.value("generation", nlohmann::json::object());
        gen["seed"] = c.seed;
        c.generation = gen_config_from_json(gen);
        c.ace.seed = c.seed;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("pipeline config: ") + e.what());
    }
    return c;
}

namespace {

std::map<std::string, AnchorLayout> load_layouts(const fs::path& dir) {
    std::map<std::string, AnchorLayout> layouts;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        AnchorLayout l = read_layout(f);
        const std::string id = l.background_id;
        if (!layouts.emplace(id, std::move(l)).second) {
            throw Error(ErrorCode::Config, "duplicate layout for background '" + id + "'");
        }
    }
    return layouts;
}

std::map<std::string, fs::path> list_backgrounds(const fs::path& dir) {
    std::map<std::string, fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".png") out[e.path().stem().string()] = e.path();
    }
    return out;
}

void require_dir(const fs::path& p, const char* what) {
    if (!fs::is_directory(p)) {
        throw Error(ErrorCode::Config, fmt::format("{} directory not found: {}", what, p.string()));
    }
}

}  // namespace

void validate_pipeline_config(const PipelineConfig& c) {
    c.ace.validate();
    c.key.validate();
    c.generation.validate();
    if (c.expected_views_per_camera < 1) throw Error(ErrorCode::Config, "expected_views_per_camera must be >= 1");
    require_dir(c.captures, "captures");
    require_dir(c.backgrounds, "backgrounds");
    require_dir(c.layouts, "layouts");
    if (!fs::is_regular_file(c.class_manifest)) {
        throw Error(ErrorCode::Config, "class manifest not found: " + c.class_manifest.string());
    }
    try {
        read_class_manifest(c.class_manifest);
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, e.what());
    }
    const auto layouts = load_layouts(c.layouts);
    const auto backgrounds = list_backgrounds(c.backgrounds);
    if (backgrounds.empty()) throw Error(ErrorCode::Config, "no background PNGs in " + c.backgrounds.string());
    for (const auto& [id, layout] : layouts) {
        const auto it = backgrounds.find(id);
        if (it == backgrounds.end()) {
            throw Error(ErrorCode::Config, "layout references missing background '" + id + "'");
        }
        ImageBuffer img;
        try {
            img = read_png(it->second);
        } catch (const Error& e) {
            throw Error(ErrorCode::Config, e.what());
        }
        layout.validate(img.width(), img.height());
    }
    for (const auto& [id, _] : backgrounds) {
        if (!layouts.contains(id)) throw Error(ErrorCode::Config, "background '" + id + "' has no anchor layout");
    }
    if (fs::exists(c.output)) {
        if (!fs::is_directory(c.output)) throw Error(ErrorCode::Config, "output is not a directory");
        const bool previous = fs::exists(c.output / "manifest.json") || fs::exists(c.output / ".partial");
        if (!fs::is_empty(c.output) && !previous) {
            throw Error(ErrorCode::Config, "output root is not empty and holds no dataset: " + c.output.string());
        }
    }
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Config, "cannot read config " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::Config, path.string() + ": " + e.what());
    }
    PipelineConfig c = parse_pipeline_config(j, path.parent_path());
    validate_pipeline_config(c);
    return c;
}

namespace {

// Removes only what a previous build of ours wrote.
void clear_previous_dataset(const fs::path& root) {
    if (!fs::exists(root)) return;
    for (const char* dir : {"images", "labels"}) fs::remove_all(root / dir);
    for (const char* file : {"obj.names", "obj.data", "train.txt", "manifest.json", "ingest_report.json", ".partial"}) {
        fs::remove(root / file);
    }
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace

IngestResult pipeline_ingest(const PipelineConfig& c) {
    IngestOptions opts;
    opts.ace = c.ace;
    opts.key = c.key;
    opts.expected_views_per_camera = c.expected_views_per_camera;
    return ingest_capture_set(c.captures, read_class_manifest(c.class_manifest), opts);
}

std::vector<Background> pipeline_backgrounds(const PipelineConfig& c) {
    const auto layouts = load_layouts(c.layouts);
    std::vector<Background> backgrounds;
    for (const auto& [id, path] : list_backgrounds(c.backgrounds)) {
        backgrounds.push_back({id, ace(to_rgb(read_png(path)), c.ace), layouts.at(id)});
    }
    return backgrounds;
}

PipelineResult run_pipeline(const PipelineConfig& c) {
    const auto classes = read_class_manifest(c.class_manifest);
    IngestResult ingest = pipeline_ingest(c);

    PipelineResult result;
    result.ingest = ingest.report;
    clear_previous_dataset(c.output);
    fs::create_directories(c.output);
    write_json(c.output / "ingest_report.json", ingest.report.to_json());
    if (!ingest.report.ok()) {
        std::string why;
        for (const auto& f : ingest.report.fatal) why += (why.empty() ? "" : "; ") + f;
        throw Error(ErrorCode::NoObject, "ingestion failed: " + why);
    }

    const std::vector<Background> backgrounds = pipeline_backgrounds(c);
    std::vector<std::string> names;
    for (const auto& cls : classes) names.push_back(cls.name);
    const CropStore store(std::move(ingest.crops));
    DarknetWriter writer(c.output, names, c.fast_png);
    writer.open();
    DatasetManifest manifest =
        generate(store, backgrounds, c.generation, [&](LabeledSample&& s) { writer.add(s); });
    nlohmann::json echo = c.to_json();
    echo.erase("output");
    for (const char* key : {"captures", "class_manifest", "backgrounds", "layouts"}) {
        echo[key] = fs::path(echo[key].get<std::string>()).filename().string();
    }
    manifest.config = echo;
    writer.finish(manifest);
    result.samples = writer.written();
    result.manifest = c.output / "manifest.json";
    return result;
}

// ---------------------------------------------------------------------------
// Command line

namespace {

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

int report(const Streams& io, int code, const std::string& msg) {
    io.err << "ERROR " << code << ": " << msg << '\n';
    return code;
}

int cmd_ace(const Streams& io, const std::string& in, const std::string& out, AceParams params) {
    try {
        params.validate();
    } catch (const Error& e) {
        return report(io, kExitUsage, e.what());
    }
    ImageBuffer img;
    try {
        img = to_rgb(read_png(in));
    } catch (const Error& e) {
        return report(io, kExitIo, e.what());
    }
    ImageBuffer res;
    try {
        res = ace(img, params);
    } catch (const Error& e) {
        return report(io, kExitProcessing, e.what());
    }
    try {
        write_png(res, out);
    } catch (const Error& e) {
        return report(io, kExitIo, e.what());
    }
    io.out << "wrote " << out << '\n';
    return kExitOk;
}

int cmd_segment(const Streams& io, const std::string& in, const std::string& mask_out,
                const std::string& crop_out, const KeyParams& key, std::optional<AceParams> ace_params) {
    try {
        key.validate();
        if (ace_params) ace_params->validate();
    } catch (const Error& e) {
        return report(io, kExitUsage, e.what());
    }
    ImageBuffer img;
    try {
        img = to_rgb(read_png(in));
    } catch (const Error& e) {
        return report(io, kExitIo, e.what());
    }
    if (ace_params) img = ace(img, *ace_params);
    const BinaryMask mask = segment(img, key);
    try {
        write_png(mask_to_image(mask), mask_out);
    } catch (const Error& e) {
        return report(io, kExitIo, e.what());
    }
    const PixelBox box = mask.bounding_box();
    io.out << nlohmann::json{{"pixels", mask.count()}, {"bbox", {box.x, box.y, box.w, box.h}}}.dump() << '\n';
    if (!crop_out.empty()) {
        try {
            const ObjectCrop crop = matte(img, mask, 0, "object", {}, key.despill);
            write_png(crop.rgba, crop_out);
        } catch (const Error& e) {
            return report(io, exit_code_for(e.code()), e.what());
        }
    }
    return kExitOk;
}

int cmd_ingest(const Streams& io, const std::string& captures, const std::string& classes_path,
               const std::string& out_dir, const IngestOptions& opts) {
    std::vector<ClassEntry> classes;
    try {
        opts.key.validate();
        opts.ace.validate();
        if (opts.expected_views_per_camera < 1) {
            throw Error(ErrorCode::InvalidArgument, "--expected must be >= 1");
        }
        classes = read_class_manifest(classes_path);
    } catch (const Error& e) {
        return report(io, e.code() == ErrorCode::NotFound ? kExitIo : kExitUsage, e.what());
    }
    try {
        IngestResult r = ingest_capture_set(captures, classes, opts);
        fs::create_directories(out_dir);
        for (const auto& crop : r.crops) {
            const fs::path dir = fs::path(out_dir) / crop.class_name / to_string(crop.provenance.source_camera);
            fs::create_directories(dir);
            write_png(crop.rgba, dir / (std::to_string(crop.provenance.source_view) + ".png"));
        }
        write_json(fs::path(out_dir) / "ingest_report.json", r.report.to_json());
        io.out << r.crops.size() << " crops, " << r.report.failures.size() << " failures, "
               << r.report.warnings.size() << " warnings\n";
        if (!r.report.ok()) {
            std::string why;
            for (const auto& f : r.report.fatal) why += (why.empty() ? "" : "; ") + f;
            return report(io, kExitProcessing, why);
        }
    } catch (const Error& e) {
        return report(io, exit_code_for(e.code()), e.what());
    } catch (const fs::filesystem_error& e) {
        return report(io, kExitIo, e.what());
    }
    return kExitOk;
}

int cmd_generate(const Streams& io, const std::string& config_path, const std::optional<std::string>& output,
                 std::optional<std::uint64_t> seed, std::optional<int> rounds) {
    PipelineConfig cfg;
    try {
        std::ifstream in(config_path);
        if (!in) throw Error(ErrorCode::Config, "cannot read config " + config_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::Config, config_path + ": " + e.what());
        }
        if (seed) j["seed"] = *seed;
        if (rounds) j["generation"]["rounds"] = *rounds;
        cfg = parse_pipeline_config(j, fs::path(config_path).parent_path());
        if (output) cfg.output = *output;
        validate_pipeline_config(cfg);
    } catch (const Error& e) {
        return report(io, kExitUsage, e.what());
    }
    try {
        const PipelineResult r = run_pipeline(cfg);
        io.out << "manifest: " << r.manifest.string() << '\n' << "samples: " << r.samples << '\n';
    } catch (const Error& e) {
        return report(io, exit_code_for(e.code()), e.what());
    } catch (const fs::filesystem_error& e) {
        return report(io, kExitIo, e.what());
    }
    return kExitOk;
}

int cmd_stats(const Streams& io, const std::string& root, double threshold) {
    try {
        const DatasetStats st = dataset_stats(root, threshold);
        io.out << st.to_json().dump(2) << '\n';
    } catch (const Error& e) {
        return report(io, exit_code_for(e.code()), e.what());
    }
    return kExitOk;
}

int cmd_amygdala(const Streams& io, const std::string& schedule_path, const std::string& out_csv,
                 bool paper_protocol, std::uint64_t seed, double lr, const std::string& checkpoint) {
    using namespace amygdala;
    if (paper_protocol == !schedule_path.empty()) {
        return report(io, kExitUsage, "give either a schedule file or --paper-protocol");
    }
    if (!(lr >= 0.0)) return report(io, kExitUsage, "--lr must be >= 0");
    ModelConfig mc;
    mc.seed = seed;
    mc.lr = lr;
    std::vector<Step> steps;
    try {
        if (paper_protocol) {
            steps = reference_schedule(mc);
        } else {
            Schedule s = read_schedule(schedule_path);
            mc.objects = s.objects;
            mc.face_dim = static_cast<int>(s.steps.front().percept.face.size());
            steps = std::move(s.steps);
        }
    } catch (const Error& e) {
        return report(io, e.code() == ErrorCode::NotFound ? kExitIo : kExitUsage, e.what());
    }
    try {
        Model model(mc);
        const auto trajectory = run_protocol(model, steps);
        std::ofstream out(out_csv, std::ios::trunc);
        if (!out) return report(io, kExitIo, "cannot write " + out_csv);
        out << trajectory_csv(trajectory);
        if (!checkpoint.empty()) write_json(checkpoint, to_json(model));
        io.out << "wrote " << trajectory.size() << " steps to " << out_csv << '\n';
    } catch (const Error& e) {
        return report(io, exit_code_for(e.code()), e.what());
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const Streams io{out, err};
    CLI::App app{"Synthetic detection-dataset builder and preference-learning simulator", "chromaforge"};
    app.set_version_flag("--version", std::string("chromaforge ") + CHROMAFORGE_VERSION);
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = CHROMAFORGE_THREADS or auto)")->check(CLI::NonNegativeNumber);

    // ace
    auto* ace_cmd = app.add_subcommand("ace", "Automatic color equalization of one PNG");
    std::string ace_in, ace_out;
    AceParams ace_params;
    ace_cmd->add_option("input", ace_in, "Input PNG")->required();
    ace_cmd->add_option("output", ace_out, "Output PNG")->required();
    ace_cmd->add_option("--slope", ace_params.slope, "Saturation slope");
    ace_cmd->add_option("--samples", ace_params.samples, "Comparison pixels per pixel (0 = exhaustive)");
    ace_cmd->add_option("--seed", ace_params.seed, "Sampling seed");
    ace_cmd->add_option("--degenerate", ace_params.degenerate_value, "Output for flat channels");

    // segment
    auto* seg_cmd = app.add_subcommand("segment", "Chroma-key one frame into a foreground mask");
    std::string seg_in, seg_mask, seg_crop;
    KeyParams key;
    bool seg_ace = false;
    AceParams seg_ace_params;
    auto add_key_options = [&key](CLI::App* cmd) {
        cmd->add_option("--hue-min", key.hue_min);
        cmd->add_option("--hue-max", key.hue_max);
        cmd->add_option("--sat-min", key.sat_min);
        cmd->add_option("--val-min", key.val_min);
        cmd->add_option("--open-radius", key.open_radius);
        cmd->add_option("--close-radius", key.close_radius);
        cmd->add_flag("!--no-despill", key.despill, "Keep green spill on foreground pixels");
    };
    seg_cmd->add_option("input", seg_in, "Input PNG")->required();
    seg_cmd->add_option("mask", seg_mask, "Output mask PNG")->required();
    seg_cmd->add_option("--crop", seg_crop, "Also write the matted RGBA crop here");
    seg_cmd->add_flag("--ace", seg_ace, "Equalize before keying");
    seg_cmd->add_option("--samples", seg_ace_params.samples, "ACE samples when --ace is given");
    add_key_options(seg_cmd);

    // ingest
    auto* ing_cmd = app.add_subcommand("ingest", "Matte a capture directory into object crops");
    std::string ing_root, ing_classes, ing_out;
    IngestOptions ing_opts;
    ing_cmd->add_option("captures", ing_root, "Capture root (<class>/<camera>/<frame>.png)")->required();
    ing_cmd->add_option("--classes", ing_classes, "Class manifest (id<TAB>name)")->required();
    ing_cmd->add_option("--out", ing_out, "Output directory for crops and report")->required();
    ing_cmd->add_option("--expected", ing_opts.expected_views_per_camera, "Expected frames per camera");
    ing_cmd->add_option("--samples", ing_opts.ace.samples, "ACE samples (0 = exhaustive)");
    ing_cmd->add_option("--seed", ing_opts.ace.seed, "ACE sampling seed");
    ing_cmd->add_flag("!--no-ace", ing_opts.apply_ace, "Skip color equalization");
    add_key_options(ing_cmd);

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "Build a darknet dataset from a pipeline config");
    std::string gen_config;
    std::optional<std::string> gen_output;
    std::optional<std::uint64_t> gen_seed;
    std::optional<int> gen_rounds;
    gen_cmd->add_option("config", gen_config, "Pipeline config JSON")->required();
    gen_cmd->add_option("--output", gen_output, "Override the output root");
    gen_cmd->add_option("--seed", gen_seed, "Override the seed");
    gen_cmd->add_option("--rounds", gen_rounds, "Override generation rounds");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Summarize an emitted darknet tree");
    std::string stats_root;
    double stats_threshold = 0.5;
    stats_cmd->add_option("root", stats_root, "Dataset root")->required();
    stats_cmd->add_option("--threshold", stats_threshold, "Flag classes below this fraction of the mean");

    // amygdala
    auto* amy_cmd = app.add_subcommand("amygdala", "Run the SOM + perceptron preference model");
    std::string amy_schedule, amy_out, amy_checkpoint;
    bool amy_paper = false;
    std::uint64_t amy_seed = 0;
    double amy_lr = 0.5;
    amy_cmd->add_option("schedule", amy_schedule, "Schedule JSON");
    amy_cmd->add_option("--out", amy_out, "Trajectory CSV")->required();
    amy_cmd->add_flag("--paper-protocol", amy_paper, "Five interactions in situation A, then five in B");
    amy_cmd->add_option("--seed", amy_seed, "SOM initialization seed");
    amy_cmd->add_option("--lr", amy_lr, "Perceptron learning rate");
    amy_cmd->add_option("--checkpoint", amy_checkpoint, "Write the trained model here");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << "chromaforge " << CHROMAFORGE_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        return report(io, kExitUsage, e.what());
    }

    set_thread_count(threads);
    if (*ace_cmd) return cmd_ace(io, ace_in, ace_out, ace_params);
    if (*seg_cmd) {
        return cmd_segment(io, seg_in, seg_mask, seg_crop, key,
                           seg_ace ? std::optional<AceParams>(seg_ace_params) : std::nullopt);
    }
    if (*ing_cmd) {
        ing_opts.key = key;
        return cmd_ingest(io, ing_root, ing_classes, ing_out, ing_opts);
    }
    if (*gen_cmd) return cmd_generate(io, gen_config, gen_output, gen_seed, gen_rounds);
    if (*stats_cmd) return cmd_stats(io, stats_root, stats_threshold);
    if (*amy_cmd) return cmd_amygdala(io, amy_schedule, amy_out, amy_paper, amy_seed, amy_lr, amy_checkpoint);
    return report(io, kExitUsage, "no subcommand");
}

}  // namespace chromaforge

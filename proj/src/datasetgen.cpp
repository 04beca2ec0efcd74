#include "chromaforge/datasetgen.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <regex>
#include <sstream>

#include "chromaforge/error.hpp"
#include "chromaforge/parallel.hpp"
#include "chromaforge/png_io.hpp"
#include "sampling.hpp"

namespace fs = std::filesystem;

namespace chromaforge {

// ---------------------------------------------------------------------------
// Layouts and configuration

void AnchorLayout::validate(int width, int height) const {
    if (anchors.empty()) {
        throw Error(ErrorCode::Config, "layout '" + background_id + "' has no anchors");
    }
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const Anchor& a = anchors[i];
        if (a.cx < 0 || a.cy < 0 || a.cx >= width || a.cy >= height) {
            throw Error(ErrorCode::Config, "layout '" + background_id + "' anchor " +
                                               std::to_string(i) + " lies outside the background");
        }
        if (a.max_w < 1 || a.max_h < 1) {
            throw Error(ErrorCode::Config, "layout '" + background_id + "' anchor " +
                                               std::to_string(i) + " needs positive max_w/max_h");
        }
    }
}

AnchorLayout parse_layout(const nlohmann::json& j) {
    try {
        AnchorLayout layout;
        layout.background_id = j.at("background_id").get<std::string>();
        for (const auto& a : j.at("anchors")) {
            layout.anchors.push_back({a.at("cx").get<int>(), a.at("cy").get<int>(),
                                      a.at("max_w").get<int>(), a.at("max_h").get<int>()});
        }
        if (layout.background_id.empty() ||
            layout.background_id.find_first_of("/\\ ") != std::string::npos) {
            throw Error(ErrorCode::Config, "invalid background_id '" + layout.background_id + "'");
        }
        return layout;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("anchor layout: ") + e.what());
    }
}

AnchorLayout read_layout(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::NotFound, "cannot read layout " + path.string());
    try {
        return parse_layout(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, path.string() + ": " + e.what());
    }
}

nlohmann::json to_json(const AnchorLayout& layout) {
    nlohmann::json anchors = nlohmann::json::array();
    for (const auto& a : layout.anchors) {
        anchors.push_back({{"cx", a.cx}, {"cy", a.cy}, {"max_w", a.max_w}, {"max_h", a.max_h}});
    }
    return {{"background_id", layout.background_id}, {"anchors", anchors}};
}

void GenConfig::validate() const {
    if (rounds < 1) throw Error(ErrorCode::Config, "rounds must be >= 1");
    if (!(scale_lo > 0.0) || !(scale_lo <= scale_hi) || !(scale_hi <= 2.0)) {
        throw Error(ErrorCode::Config, "scale_jitter must satisfy 0 < lo <= hi <= 2");
    }
    if (max_occlusion && !(*max_occlusion >= 0.0 && *max_occlusion <= 1.0)) {
        throw Error(ErrorCode::Config, "max_occlusion must lie in [0, 1]");
    }
}

nlohmann::json to_json(const GenConfig& c) {
    nlohmann::json j;
    j["rounds"] = c.rounds;
    j["scale_jitter"] = {c.scale_lo, c.scale_hi};
    j["seed"] = c.seed;
    j["fill_policy"] = c.fill_policy == FillPolicy::AllAnchors ? "all_anchors" : "random_subset";
    j["class_balance"] =
        c.class_balance == ClassBalance::UniformByClass ? "uniform_by_class" : "uniform_by_crop";
    j["max_occlusion"] = c.max_occlusion ? nlohmann::json(*c.max_occlusion) : nlohmann::json();
    return j;
}

GenConfig gen_config_from_json(const nlohmann::json& j) {
    GenConfig c;
    try {
        c.rounds = j.value("rounds", c.rounds);
        if (j.contains("scale_jitter")) {
            const auto& s = j.at("scale_jitter");
            if (!s.is_array() || s.size() != 2) {
                throw Error(ErrorCode::Config, "scale_jitter must be [lo, hi]");
            }
            c.scale_lo = s[0].get<double>();
            c.scale_hi = s[1].get<double>();
        }
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        const std::string fill = j.value("fill_policy", std::string("all_anchors"));
        if (fill == "all_anchors") {
            c.fill_policy = FillPolicy::AllAnchors;
        } else if (fill == "random_subset") {
            c.fill_policy = FillPolicy::RandomSubset;
        } else {
            throw Error(ErrorCode::Config, "unknown fill_policy '" + fill + "'");
        }
        const std::string bal = j.value("class_balance", std::string("uniform_by_class"));
        if (bal == "uniform_by_class") {
            c.class_balance = ClassBalance::UniformByClass;
        } else if (bal == "uniform_by_crop") {
            c.class_balance = ClassBalance::UniformByCrop;
        } else {
            throw Error(ErrorCode::Config, "unknown class_balance '" + bal + "'");
        }
        if (j.contains("max_occlusion") && !j.at("max_occlusion").is_null()) {
            c.max_occlusion = j.at("max_occlusion").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("generation config: ") + e.what());
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// Placement

Label normalize(int class_id, const PixelBox& box, int w, int h) {
    return {class_id, (box.x + box.w / 2.0) / w, (box.y + box.h / 2.0) / h,
            static_cast<double>(box.w) / w, static_cast<double>(box.h) / h};
}

PixelBox denormalize(const Label& l, int w, int h) {
    const double x0 = (l.x_center - l.width / 2.0) * w;
    const double y0 = (l.y_center - l.height / 2.0) * h;
    const double x1 = (l.x_center + l.width / 2.0) * w;
    const double y1 = (l.y_center + l.height / 2.0) * h;
    const int ix0 = static_cast<int>(std::lround(x0));
    const int iy0 = static_cast<int>(std::lround(y0));
    return {ix0, iy0, static_cast<int>(std::lround(x1)) - ix0, static_cast<int>(std::lround(y1)) - iy0};
}

PlaceResult place(ImageBuffer& canvas, const ObjectCrop& crop, const Anchor& anchor, double scale) {
    if (canvas.colorspace() != ColorSpace::Rgb) {
        throw Error(ErrorCode::InvalidArgument, "placement canvas must be RGB");
    }
    if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale must be > 0");
    int sw = std::max(1, static_cast<int>(std::lround(crop.rgba.width() * scale)));
    int sh = std::max(1, static_cast<int>(std::lround(crop.rgba.height() * scale)));
    if (sw > anchor.max_w || sh > anchor.max_h) {
        const double fit = std::min(static_cast<double>(anchor.max_w) / sw,
                                    static_cast<double>(anchor.max_h) / sh);
        sw = std::max(1, static_cast<int>(std::floor(sw * fit)));
        sh = std::max(1, static_cast<int>(std::floor(sh * fit)));
    }
    const PixelBox footprint{anchor.cx - sw / 2, anchor.cy - sh / 2, sw, sh};
    if (!footprint.fits(canvas.width(), canvas.height())) {
        throw Error(ErrorCode::Placement,
                    fmt::format("{}x{} crop does not fit at anchor ({}, {})", sw, sh, anchor.cx,
                                anchor.cy));
    }
    const ImageBuffer rgba = resize_nearest(crop.rgba, sw, sh);
    BinaryMask mask = resize_nearest(crop.mask, sw, sh);
    const PixelBox tight = mask.bounding_box();
    if (tight.w == 0) {
        throw Error(ErrorCode::Placement, "scaled crop mask is empty");
    }
    for (int y = 0; y < sh; ++y) {
        for (int x = 0; x < sw; ++x) {
            if (!mask.get(x, y)) continue;
            const std::uint8_t* s = rgba.pixel(x, y);
            std::uint8_t* d = canvas.pixel(footprint.x + x, footprint.y + y);
            d[0] = s[0];
            d[1] = s[1];
            d[2] = s[2];
        }
    }
    PlaceResult r;
    r.box = {footprint.x + tight.x, footprint.y + tight.y, tight.w, tight.h};
    r.footprint = footprint;
    r.label = normalize(crop.class_id, r.box, canvas.width(), canvas.height());
    r.mask = std::move(mask);
    return r;
}

// ---------------------------------------------------------------------------
// Crop store and sampling

CropStore::CropStore(std::vector<ObjectCrop> crops) : crops_(std::move(crops)) {
    for (std::size_t i = 0; i < crops_.size(); ++i) by_class_[crops_[i].class_id].push_back(i);
    for (const auto& [id, _] : by_class_) class_ids_.push_back(id);
}

const std::vector<std::size_t>& CropStore::crops_of(int class_id) const {
    const auto it = by_class_.find(class_id);
    if (it == by_class_.end()) {
        throw Error(ErrorCode::Config, "no crops for class " + std::to_string(class_id));
    }
    return it->second;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t sample_seed(std::uint64_t seed, const std::string& background_id, int round) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ fnv1a(background_id));
    return splitmix64(h ^ static_cast<std::uint64_t>(round));
}

std::string sample_id(const std::string& background_id, int round) {
    return fmt::format("{}_{:06d}", background_id, round);
}

std::vector<PlannedPlacement> plan_sample(const CropStore& store, const AnchorLayout& layout,
                                          const GenConfig& config, std::uint64_t substream_seed) {
    if (store.empty()) throw Error(ErrorCode::Config, "crop store is empty");
    std::mt19937_64 rng(substream_seed);
    const int n = static_cast<int>(layout.anchors.size());
    std::vector<int> anchors;
    if (config.fill_policy == FillPolicy::AllAnchors) {
        anchors.resize(n);
        std::iota(anchors.begin(), anchors.end(), 0);
    } else {
        const int k = std::uniform_int_distribution<int>(1, n)(rng);
        anchors = detail::select_ascending<int>(0, static_cast<std::size_t>(n), static_cast<std::size_t>(k), rng);
    }
    std::vector<PlannedPlacement> plan;
    plan.reserve(anchors.size());
    for (const int a : anchors) {
        std::size_t crop;
        if (config.class_balance == ClassBalance::UniformByClass) {
            const auto& ids = store.class_ids();
            const int cls = ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
            const auto& pool = store.crops_of(cls);
            crop = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        } else {
            crop = std::uniform_int_distribution<std::size_t>(0, store.crops().size() - 1)(rng);
        }
        double scale = config.scale_lo;
        if (config.scale_hi > config.scale_lo) {
            scale = std::uniform_real_distribution<double>(config.scale_lo, config.scale_hi)(rng);
        }
        plan.push_back({a, crop, scale});
    }
    return plan;
}

LabeledSample render_sample(const CropStore& store, const Background& bg, const GenConfig& config,
                            int round) {
    LabeledSample s;
    s.id = sample_id(bg.id, round);
    s.background_id = bg.id;
    s.round = round;
    s.seed = sample_seed(config.seed, bg.id, round);
    s.image = bg.image;

    const auto plan = plan_sample(store, bg.layout, config, s.seed);
    std::vector<PlaceResult> pasted;
    for (const auto& p : plan) {
        const ObjectCrop& crop = store.crops()[p.crop];
        const Anchor& anchor = bg.layout.anchors[p.anchor];
        double scale = p.scale;
        std::optional<PlaceResult> r;
        try {
            r = place(s.image, crop, anchor, scale);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Placement) throw;
            if (scale > config.scale_lo) {
                scale = config.scale_lo;
                try {
                    r = place(s.image, crop, anchor, scale);
                } catch (const Error& e2) {
                    if (e2.code() != ErrorCode::Placement) throw;
                }
            }
            if (!r) {
                s.skipped.push_back(fmt::format("anchor {}: {}: {}", p.anchor, crop.key(), e.what()));
                continue;
            }
        }
        s.placements.push_back({p.anchor, p.crop, crop.class_id, scale, r->box, 0.0, true});
        pasted.push_back(std::move(*r));
    }

    // Later pastes occlude earlier ones; measure what stays visible.
    const int w = s.image.width();
    std::vector<int> owner(s.image.pixel_count(), -1);
    for (std::size_t k = 0; k < pasted.size(); ++k) {
        const PixelBox& fp = pasted[k].footprint;
        for (int y = 0; y < fp.h; ++y) {
            for (int x = 0; x < fp.w; ++x) {
                if (pasted[k].mask.get(x, y)) {
                    owner[static_cast<std::size_t>(fp.y + y) * w + fp.x + x] = static_cast<int>(k);
                }
            }
        }
    }
    for (std::size_t k = 0; k < pasted.size(); ++k) {
        const PixelBox& fp = pasted[k].footprint;
        std::size_t total = 0, visible = 0;
        for (int y = 0; y < fp.h; ++y) {
            for (int x = 0; x < fp.w; ++x) {
                if (!pasted[k].mask.get(x, y)) continue;
                ++total;
                visible += owner[static_cast<std::size_t>(fp.y + y) * w + fp.x + x] == static_cast<int>(k);
            }
        }
        Placement& pl = s.placements[k];
        pl.occlusion = total ? 1.0 - static_cast<double>(visible) / static_cast<double>(total) : 0.0;
        if (config.max_occlusion && pl.occlusion > *config.max_occlusion) {
            pl.labelled = false;
            continue;
        }
        s.labels.push_back(pasted[k].label);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Generation

nlohmann::json DatasetManifest::to_json() const {
    return {{"config", config}, {"seed", seed}, {"samples", samples}};
}

namespace {

nlohmann::json provenance_json(const LabeledSample& s, const CropStore& store) {
    nlohmann::json placements = nlohmann::json::array();
    for (const auto& p : s.placements) {
        placements.push_back({{"anchor", p.anchor},
                              {"crop", store.crops()[p.crop].key()},
                              {"class_id", p.class_id},
                              {"scale", p.scale},
                              {"box", {p.box.x, p.box.y, p.box.w, p.box.h}},
                              {"occlusion", p.occlusion},
                              {"labelled", p.labelled}});
    }
    return {{"id", s.id},
            {"background_id", s.background_id},
            {"round", s.round},
            {"seed", s.seed},
            {"labels", s.labels.size()},
            {"placements", placements},
            {"skipped", s.skipped}};
}

}  // namespace

DatasetManifest generate(const CropStore& store, const std::vector<Background>& backgrounds,
                         const GenConfig& config, const SampleSink& sink) {
    config.validate();
    if (store.empty()) throw Error(ErrorCode::Config, "crop store is empty");
    if (backgrounds.empty()) throw Error(ErrorCode::Config, "no backgrounds");
    for (const auto& bg : backgrounds) {
        if (bg.layout.background_id != bg.id) {
            throw Error(ErrorCode::Config, "missing layout for background '" + bg.id + "'");
        }
        if (bg.image.colorspace() != ColorSpace::Rgb) {
            throw Error(ErrorCode::Config, "background '" + bg.id + "' is not RGB");
        }
        bg.layout.validate(bg.image.width(), bg.image.height());
    }

    DatasetManifest manifest;
    manifest.config = to_json(config);
    manifest.seed = config.seed;

    const std::size_t total = backgrounds.size() * static_cast<std::size_t>(config.rounds);
    const int threads = thread_count();
    const std::size_t batch = static_cast<std::size_t>(std::max(1, threads)) * 4;
    std::vector<std::optional<LabeledSample>> slots(batch);

    for (std::size_t start = 0; start < total; start += batch) {
        const std::size_t count = std::min(batch, total - start);
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) {
            const std::size_t idx = start + static_cast<std::size_t>(k);
            const Background& bg = backgrounds[idx / config.rounds];
            const int round = static_cast<int>(idx % config.rounds);
            try {
                slots[k] = render_sample(store, bg, config, round);
            } catch (...) {
#pragma omp critical(chromaforge_generate_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        for (std::size_t k = 0; k < count; ++k) {
            manifest.samples.push_back(provenance_json(*slots[k], store));
            sink(std::move(*slots[k]));
            slots[k].reset();
        }
    }
    return manifest;
}

// ---------------------------------------------------------------------------
// Darknet files

std::string format_label_line(const Label& l) {
    return fmt::format("{} {:.6f} {:.6f} {:.6f} {:.6f}\n", l.class_id, l.x_center, l.y_center,
                       l.width, l.height);
}

std::string format_label_file(const std::vector<Label>& labels) {
    std::string out;
    for (const auto& l : labels) out += format_label_line(l);
    return out;
}

bool is_valid_label_line(const std::string& line) {
    static const std::regex grammar(R"(^\d+( 0\.\d{6}| 1\.000000){4}$)");
    return std::regex_match(line, grammar);
}

std::vector<Label> parse_label_text(const std::string& text) {
    std::vector<Label> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        Label l;
        std::string extra;
        if (!(ls >> l.class_id >> l.x_center >> l.y_center >> l.width >> l.height) || (ls >> extra) ||
            l.class_id < 0) {
            throw Error(ErrorCode::MalformedInput, "label line " + std::to_string(lineno) + ": '" + line + "'");
        }
        out.push_back(l);
    }
    return out;
}

std::vector<Label> parse_label_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::NotFound, "cannot read label file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_label_text(ss.str());
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open for writing: " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

constexpr const char* kPartialMarker = ".partial";

}  // namespace

DarknetWriter::DarknetWriter(fs::path root, std::vector<std::string> class_names, bool fast_png)
    : root_(std::move(root)), class_names_(std::move(class_names)), fast_png_(fast_png) {}

void DarknetWriter::fail(const std::string& what) {
    std::error_code ec;
    std::ofstream marker(root_ / kPartialMarker, std::ios::trunc);
    marker << what << '\n';
    throw Error(ErrorCode::Io, what);
}

void DarknetWriter::open() {
    try {
        fs::create_directories(root_ / "images");
        fs::create_directories(root_ / "labels");
        write_text(root_ / kPartialMarker, "in progress\n");
        std::string names;
        for (const auto& n : class_names_) names += n + "\n";
        write_text(root_ / "obj.names", names);
        write_text(root_ / "obj.data", fmt::format("classes = {}\ntrain = train.txt\nnames = obj.names\nbackup = backup/\n",
                                                   class_names_.size()));
    } catch (const std::exception& e) {
        fail(e.what());
    }
    train_.clear();
}

void DarknetWriter::add(const LabeledSample& sample) {
    try {
        for (const auto& l : sample.labels) {
            if (l.class_id < 0 || static_cast<std::size_t>(l.class_id) >= class_names_.size()) {
                throw Error(ErrorCode::Config, "label class " + std::to_string(l.class_id) +
                                                   " not in class manifest");
            }
        }
        write_png(sample.image, root_ / "images" / (sample.id + ".png"), fast_png_);
        write_text(root_ / "labels" / (sample.id + ".txt"), format_label_file(sample.labels));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Config) throw;
        fail(e.what());
    } catch (const std::exception& e) {
        fail(e.what());
    }
    train_.push_back("images/" + sample.id + ".png");
}

void DarknetWriter::finish(const DatasetManifest& manifest) {
    try {
        std::string train;
        for (const auto& t : train_) train += t + "\n";
        write_text(root_ / "train.txt", train);
        write_text(root_ / "manifest.json", manifest.to_json().dump(2) + "\n");
        fs::remove(root_ / kPartialMarker);
    } catch (const std::exception& e) {
        fail(e.what());
    }
}

void emit_darknet(const std::vector<LabeledSample>& samples, const fs::path& root,
                  const std::vector<std::string>& class_names, const DatasetManifest& manifest) {
    DarknetWriter writer(root, class_names);
    writer.open();
    for (const auto& s : samples) writer.add(s);
    writer.finish(manifest);
}

// ---------------------------------------------------------------------------
// Statistics

nlohmann::json DatasetStats::to_json() const {
    nlohmann::json per = nlohmann::json::object();
    for (std::size_t i = 0; i < per_class.size(); ++i) {
        per[i < class_names.size() ? class_names[i] : std::to_string(i)] = per_class[i];
    }
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [k, v] : boxes_per_image) hist[std::to_string(k)] = v;
    return {{"images", images},   {"boxes", boxes},         {"per_class", per},
            {"boxes_per_image", hist}, {"mean_box_area", mean_box_area}, {"flagged", flagged},
            {"problems", problems}, {"warnings", warnings}};
}

DatasetStats dataset_stats(const fs::path& root, double balance_threshold) {
    DatasetStats st;
    {
        std::ifstream names(root / "obj.names");
        if (!names) throw Error(ErrorCode::NotFound, "missing " + (root / "obj.names").string());
        std::string line;
        while (std::getline(names, line)) {
            if (!line.empty()) st.class_names.push_back(line);
        }
    }
    st.per_class.assign(st.class_names.size(), 0);
    std::ifstream train(root / "train.txt");
    if (!train) throw Error(ErrorCode::NotFound, "missing " + (root / "train.txt").string());

    double area_sum = 0.0;
    std::string rel;
    while (std::getline(train, rel)) {
        if (rel.empty()) continue;
        const fs::path image(rel);
        fs::path label = root / "labels" / image.filename();
        label.replace_extension(".txt");
        std::vector<Label> labels;
        try {
            labels = parse_label_file(label);
        } catch (const Error& e) {
            st.problems.push_back(e.what());
            continue;
        }
        ++st.images;
        ++st.boxes_per_image[labels.size()];
        for (const auto& l : labels) {
            if (static_cast<std::size_t>(l.class_id) >= st.per_class.size()) {
                st.problems.push_back(label.string() + ": class " + std::to_string(l.class_id) +
                                      " not in obj.names");
                continue;
            }
            ++st.boxes;
            ++st.per_class[l.class_id];
            area_sum += l.width * l.height;
        }
    }
    if (st.images == 0) {
        st.warnings.push_back("train.txt lists no readable images");
        return st;
    }
    st.mean_box_area = st.boxes ? area_sum / static_cast<double>(st.boxes) : 0.0;
    if (!st.per_class.empty()) {
        const double mean = static_cast<double>(st.boxes) / static_cast<double>(st.per_class.size());
        for (std::size_t i = 0; i < st.per_class.size(); ++i) {
            if (static_cast<double>(st.per_class[i]) < balance_threshold * mean) {
                st.flagged.push_back(st.class_names[i]);
            }
        }
    }
    return st;
}

}  // namespace chromaforge

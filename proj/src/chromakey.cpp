#include "chromaforge/chromakey.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "chromaforge/error.hpp"
#include "chromaforge/morphology.hpp"
#include "chromaforge/parallel.hpp"
#include "chromaforge/png_io.hpp"

namespace fs = std::filesystem;

namespace chromaforge {

void KeyParams::validate() const {
    auto in_byte = [](int v) { return v >= 0 && v <= 255; };
    if (!in_byte(hue_min) || !in_byte(hue_max) || !in_byte(sat_min) || !in_byte(val_min)) {
        throw Error(ErrorCode::InvalidArgument, "key thresholds must lie in 0-255");
    }
    if (hue_min >= hue_max) {
        throw Error(ErrorCode::InvalidArgument, "key hue window needs hue_min < hue_max");
    }
    if (open_radius < 0 || close_radius < 0) {
        throw Error(ErrorCode::InvalidArgument, "key morphology radii must be >= 0");
    }
}

const char* to_string(Camera cam) { return cam == Camera::High ? "high" : "low"; }

Camera camera_from_string(const std::string& s) {
    if (s == "high") return Camera::High;
    if (s == "low") return Camera::Low;
    throw Error(ErrorCode::InvalidArgument, "unknown camera '" + s + "'");
}

std::string ObjectCrop::key() const {
    return class_name + "/" + to_string(provenance.source_camera) + "/" +
           std::to_string(provenance.source_view);
}

BinaryMask segment(const ImageBuffer& image, const KeyParams& params) {
    params.validate();
    if (image.colorspace() != ColorSpace::Rgb) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string("segment expects an RGB image, got ") + to_string(image.colorspace()));
    }
    BinaryMask mask(image.width(), image.height());
    const auto src = image.data();
    auto bits = mask.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const Hsv hsv = rgb_to_hsv({src[3 * i], src[3 * i + 1], src[3 * i + 2]});
        bits[i] = params.keyed(hsv) ? 0 : 1;
    }
    if (params.open_radius > 0) mask = morphology(mask, MorphOp::Open, params.open_radius);
    if (params.close_radius > 0) mask = morphology(mask, MorphOp::Close, params.close_radius);
    return keep_largest_component(mask, 4);
}

ObjectCrop matte(const ImageBuffer& image, const BinaryMask& mask, int class_id,
                 std::string class_name, Provenance provenance, bool despill) {
    if (image.colorspace() != ColorSpace::Rgb) {
        throw Error(ErrorCode::InvalidArgument, "matte expects an RGB image");
    }
    if (mask.width() != image.width() || mask.height() != image.height()) {
        throw Error(ErrorCode::DimensionMismatch, "mask and image sizes differ");
    }
    const PixelBox box = mask.bounding_box();
    if (box.w == 0) {
        throw Error(ErrorCode::NoObject, "empty foreground mask");
    }
    ObjectCrop out;
    out.class_id = class_id;
    out.class_name = std::move(class_name);
    out.provenance = provenance;
    out.source_box = box;
    out.mask = mask.crop(box);
    out.rgba = ImageBuffer(box.w, box.h, ColorSpace::Rgba);
    for (int y = 0; y < box.h; ++y) {
        for (int x = 0; x < box.w; ++x) {
            const std::uint8_t* s = image.pixel(box.x + x, box.y + y);
            std::uint8_t* d = out.rgba.pixel(x, y);
            const bool fg = out.mask.get(x, y);
            d[0] = s[0];
            d[1] = (fg && despill) ? std::min(s[1], std::max(s[0], s[2])) : s[1];
            d[2] = s[2];
            d[3] = fg ? 255 : 0;
        }
    }
    return out;
}

std::vector<ClassEntry> parse_class_manifest(const std::string& text) {
    std::vector<ClassEntry> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        auto bad = [&](const std::string& why) {
            return Error(ErrorCode::MalformedInput,
                         "class manifest line " + std::to_string(lineno) + ": " + why);
        };
        if (tab == std::string::npos) throw bad("expected class_id<TAB>class_name");
        int id = -1;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + tab, id);
        if (ec != std::errc{} || ptr != line.data() + tab || id < 0) throw bad("bad class id");
        std::string name = line.substr(tab + 1);
        if (name.empty() || name.find_first_of("/\\\t") != std::string::npos) {
            throw bad("class name must be non-empty and free of path separators");
        }
        out.push_back({id, std::move(name)});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::set<std::string> names;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].id != static_cast<int>(i)) {
            throw Error(ErrorCode::MalformedInput, "class ids must be exactly 0..n-1");
        }
        if (!names.insert(out[i].name).second) {
            throw Error(ErrorCode::MalformedInput, "duplicate class name '" + out[i].name + "'");
        }
    }
    if (out.empty()) throw Error(ErrorCode::MalformedInput, "class manifest is empty");
    return out;
}

std::vector<ClassEntry> read_class_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::NotFound, "cannot read class manifest " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_class_manifest(ss.str());
}

std::size_t IngestReport::total_crops() const {
    std::size_t n = 0;
    for (const auto& c : classes) n += static_cast<std::size_t>(c.crops);
    return n;
}

nlohmann::json IngestReport::to_json() const {
    nlohmann::json j;
    j["classes"] = nlohmann::json::array();
    for (const auto& c : classes) {
        nlohmann::json cams = nlohmann::json::array();
        for (const auto& cam : c.cameras) {
            cams.push_back({{"camera", cam.camera}, {"frames", cam.frames}, {"crops", cam.crops}});
        }
        j["classes"].push_back(
            {{"class_id", c.class_id}, {"class_name", c.class_name}, {"crops", c.crops}, {"cameras", cams}});
    }
    j["failures"] = nlohmann::json::array();
    for (const auto& f : failures) {
        j["failures"].push_back({{"class_name", f.class_name},
                                 {"camera", f.camera},
                                 {"path", f.path},
                                 {"error", f.error},
                                 {"message", f.message}});
    }
    j["warnings"] = warnings;
    j["fatal"] = fatal;
    j["total_crops"] = total_crops();
    return j;
}

namespace {

struct FrameJob {
    int class_index;
    Camera camera;
    int view;
    fs::path path;
};

struct FrameOutcome {
    std::optional<ObjectCrop> crop;
    std::optional<FrameFailure> failure;
};

std::optional<int> frame_index(const fs::path& p) {
    const std::string stem = p.stem().string();
    int v = 0;
    const auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), v);
    if (ec != std::errc{} || ptr != stem.data() + stem.size() || v < 0) return std::nullopt;
    return v;
}

bool is_uniform(const ImageBuffer& img) {
    const std::uint8_t* first = img.data().data();
    const int c = img.channels();
    for (std::size_t i = 1; i < img.pixel_count(); ++i) {
        if (!std::equal(first, first + c, first + i * c)) return false;
    }
    return true;
}

}  // namespace

IngestResult ingest_capture_set(const fs::path& root, const std::vector<ClassEntry>& classes,
                                const IngestOptions& options) {
    options.key.validate();
    if (options.apply_ace) options.ace.validate();
    if (!fs::is_directory(root)) {
        throw Error(ErrorCode::NotFound, "capture directory not found: " + root.string());
    }

    IngestResult result;
    std::vector<FrameJob> jobs;
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        ClassReport cr;
        cr.class_id = classes[ci].id;
        cr.class_name = classes[ci].name;
        for (const Camera cam : {Camera::High, Camera::Low}) {
            const fs::path dir = root / classes[ci].name / to_string(cam);
            std::vector<std::pair<int, fs::path>> frames;
            if (fs::is_directory(dir)) {
                for (const auto& entry : fs::directory_iterator(dir)) {
                    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
                    if (const auto idx = frame_index(entry.path())) {
                        frames.emplace_back(*idx, entry.path());
                    } else {
                        result.report.failures.push_back(
                            {classes[ci].name, to_string(cam), entry.path().string(),
                             to_string(ErrorCode::MalformedInput), "frame name is not an index"});
                    }
                }
            }
            std::sort(frames.begin(), frames.end());
            for (auto& [idx, path] : frames) {
                jobs.push_back({static_cast<int>(ci), cam, idx, std::move(path)});
            }
            cr.cameras.push_back({to_string(cam), static_cast<int>(frames.size()), 0});
            if (static_cast<int>(frames.size()) != options.expected_views_per_camera) {
                result.report.warnings.push_back(
                    classes[ci].name + "/" + to_string(cam) + ": expected " +
                    std::to_string(options.expected_views_per_camera) + ", found " +
                    std::to_string(frames.size()));
            }
        }
        result.report.classes.push_back(std::move(cr));
    }

    std::vector<FrameOutcome> outcomes(jobs.size());
    const auto njobs = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (std::ptrdiff_t k = 0; k < njobs; ++k) {
        const FrameJob& job = jobs[k];
        const ClassEntry& cls = classes[job.class_index];
        try {
            ImageBuffer frame = to_rgb(read_png(job.path));
            // ACE maps a uniform frame to flat gray, which the key would take as one big object.
            if (is_uniform(frame)) throw Error(ErrorCode::NoObject, "uniform frame, nothing to segment");
            if (options.apply_ace) frame = ace(frame, options.ace);
            const BinaryMask mask = segment(frame, options.key);
            outcomes[k].crop = matte(frame, mask, cls.id, cls.name, {job.view, job.camera},
                                     options.key.despill);
        } catch (const Error& e) {
            outcomes[k].failure = FrameFailure{cls.name, to_string(job.camera), job.path.string(),
                                               to_string(e.code()), e.what()};
        } catch (const std::exception& e) {
            outcomes[k].failure = FrameFailure{cls.name, to_string(job.camera), job.path.string(),
                                               to_string(ErrorCode::Io), e.what()};
        }
    }

    for (std::size_t k = 0; k < jobs.size(); ++k) {
        auto& cr = result.report.classes[jobs[k].class_index];
        if (outcomes[k].crop) {
            ++cr.crops;
            ++cr.cameras[jobs[k].camera == Camera::High ? 0 : 1].crops;
            result.crops.push_back(std::move(*outcomes[k].crop));
        } else {
            result.report.failures.push_back(std::move(*outcomes[k].failure));
        }
    }
    for (const auto& cr : result.report.classes) {
        if (cr.crops == 0) result.report.fatal.push_back(cr.class_name + ": no usable frames");
    }
    return result;
}

}  // namespace chromaforge

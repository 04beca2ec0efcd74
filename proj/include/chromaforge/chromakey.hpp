#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chromaforge/ace.hpp"
#include "chromaforge/image.hpp"

namespace chromaforge {

/// Green-screen key window in 0-255 HSV. A radius of 0 skips that morphology step.
struct KeyParams {
    int hue_min = 64;
    int hue_max = 106;
    int sat_min = 77;
    int val_min = 38;
    int open_radius = 1;
    int close_radius = 2;
    bool despill = true;

    void validate() const;
    bool keyed(const Hsv& px) const {
        return px[0] >= hue_min && px[0] <= hue_max && px[1] >= sat_min && px[2] >= val_min;
    }
};

enum class Camera { High, Low };
const char* to_string(Camera cam);
Camera camera_from_string(const std::string& s);

struct Provenance {
    int source_view = 0;
    Camera source_camera = Camera::High;
};

/// Matted object cutout. Alpha is 255 exactly where mask is set, and the mask is tight:
/// its first and last rows and columns each hold at least one foreground pixel.
struct ObjectCrop {
    int class_id = 0;
    std::string class_name;
    ImageBuffer rgba;
    BinaryMask mask;
    Provenance provenance;
    /// Where the crop sat in its source frame.
    PixelBox source_box;

    /// "<class_name>/<camera>/<view>"
    std::string key() const;
};

/// Foreground mask of an RGB frame: key, open, close, then keep the largest 4-connected blob.
BinaryMask segment(const ImageBuffer& image, const KeyParams& params);

/// Throws NoObject for an empty mask and DimensionMismatch for a mask of the wrong size.
ObjectCrop matte(const ImageBuffer& image, const BinaryMask& mask, int class_id,
                 std::string class_name, Provenance provenance, bool despill = true);

struct ClassEntry {
    int id = 0;
    std::string name;
};

/// `class_id<TAB>class_name` per line. Ids must be exactly 0..n-1 (any order in the file);
/// the result is sorted by id.
std::vector<ClassEntry> read_class_manifest(const std::filesystem::path& path);
std::vector<ClassEntry> parse_class_manifest(const std::string& text);

struct IngestOptions {
    AceParams ace;
    KeyParams key;
    int expected_views_per_camera = 200;
    /// Skip the ACE stage (frames are keyed as captured).
    bool apply_ace = true;
};

struct FrameFailure {
    std::string class_name;
    std::string camera;
    std::string path;
    std::string error;  // to_string(ErrorCode)
    std::string message;
};

struct CameraCount {
    std::string camera;
    int frames = 0;
    int crops = 0;
};

struct ClassReport {
    int class_id = 0;
    std::string class_name;
    std::vector<CameraCount> cameras;
    int crops = 0;
};

struct IngestReport {
    std::vector<ClassReport> classes;
    std::vector<FrameFailure> failures;
    std::vector<std::string> warnings;
    /// Classes that produced no crops at all.
    std::vector<std::string> fatal;

    bool ok() const { return fatal.empty(); }
    std::size_t total_crops() const;
    nlohmann::json to_json() const;
};

struct IngestResult {
    std::vector<ObjectCrop> crops;  // ordered by (class id, camera, frame index)
    IngestReport report;
};

/// Reads `<root>/<class_name>/{high,low}/<frame>.png`, runs ACE, segment and matte on each
/// frame. Per-frame problems land in the report; only a missing root directory throws.
IngestResult ingest_capture_set(const std::filesystem::path& root,
                                const std::vector<ClassEntry>& classes,
                                const IngestOptions& options);

}  // namespace chromaforge

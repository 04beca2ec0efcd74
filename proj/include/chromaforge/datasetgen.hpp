#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chromaforge/chromakey.hpp"
#include "chromaforge/image.hpp"

namespace chromaforge {

struct Anchor {
    int cx = 0;
    int cy = 0;
    int max_w = 0;
    int max_h = 0;
};

struct AnchorLayout {
    std::string background_id;
    std::vector<Anchor> anchors;

    /// Needs at least one anchor, positive caps, and every centre inside width x height.
    void validate(int width, int height) const;
};

AnchorLayout parse_layout(const nlohmann::json& j);
AnchorLayout read_layout(const std::filesystem::path& path);
nlohmann::json to_json(const AnchorLayout& layout);

enum class FillPolicy { AllAnchors, RandomSubset };
enum class ClassBalance { UniformByClass, UniformByCrop };

struct GenConfig {
    int rounds = 1;
    double scale_lo = 1.0;
    double scale_hi = 1.0;
    std::uint64_t seed = 0;
    FillPolicy fill_policy = FillPolicy::AllAnchors;
    ClassBalance class_balance = ClassBalance::UniformByClass;
    /// Drop labels whose pasted pixels are hidden by later pastes beyond this fraction.
    std::optional<double> max_occlusion;

    void validate() const;
};

nlohmann::json to_json(const GenConfig& config);
GenConfig gen_config_from_json(const nlohmann::json& j);

/// Darknet box, all fields fractions of the image size.
struct Label {
    int class_id = 0;
    double x_center = 0;
    double y_center = 0;
    double width = 0;
    double height = 0;

    bool operator==(const Label&) const = default;
};

Label normalize(int class_id, const PixelBox& box, int image_width, int image_height);
PixelBox denormalize(const Label& label, int image_width, int image_height);

struct PlaceResult {
    Label label;
    PixelBox box;        // tight box of the pasted mask, canvas pixels
    PixelBox footprint;  // full pasted rectangle
    BinaryMask mask;     // pasted (scaled) mask, footprint-sized
};

/// Hard-alpha paste of `crop` centred on the anchor, after nearest-neighbour scaling and a
/// uniform downscale to honour the anchor's size cap. Throws Placement when the result would
/// leave the canvas.
PlaceResult place(ImageBuffer& canvas, const ObjectCrop& crop, const Anchor& anchor, double scale);

/// Crops grouped by class; indexes are stable positions in `crops()`.
class CropStore {
public:
    CropStore() = default;
    explicit CropStore(std::vector<ObjectCrop> crops);

    const std::vector<ObjectCrop>& crops() const noexcept { return crops_; }
    const std::vector<int>& class_ids() const noexcept { return class_ids_; }
    const std::vector<std::size_t>& crops_of(int class_id) const;
    bool empty() const noexcept { return crops_.empty(); }

private:
    std::vector<ObjectCrop> crops_;
    std::vector<int> class_ids_;
    std::map<int, std::vector<std::size_t>> by_class_;
};

struct Background {
    std::string id;
    ImageBuffer image;
    AnchorLayout layout;
};

struct PlannedPlacement {
    int anchor = 0;
    std::size_t crop = 0;
    double scale = 1.0;
};

struct Placement {
    int anchor = 0;
    std::size_t crop = 0;
    int class_id = 0;
    double scale = 1.0;
    PixelBox box;
    double occlusion = 0.0;
    bool labelled = true;
};

struct LabeledSample {
    std::string id;
    ImageBuffer image;
    std::vector<Label> labels;
    std::string background_id;
    int round = 0;
    std::uint64_t seed = 0;
    std::vector<Placement> placements;
    std::vector<std::string> skipped;
};

/// Seed of the (background, round) substream.
std::uint64_t sample_seed(std::uint64_t seed, const std::string& background_id, int round);
std::string sample_id(const std::string& background_id, int round);

/// Anchor/crop/scale choices for one sample, in anchor order.
std::vector<PlannedPlacement> plan_sample(const CropStore& store, const AnchorLayout& layout,
                                          const GenConfig& config, std::uint64_t substream_seed);

LabeledSample render_sample(const CropStore& store, const Background& background,
                            const GenConfig& config, int round);

struct DatasetManifest {
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::vector<nlohmann::json> samples;

    nlohmann::json to_json() const;
};

using SampleSink = std::function<void(LabeledSample&&)>;

/// Renders n_backgrounds x rounds samples (background-major, round-minor) and hands them to
/// `sink` in that order. Rendering runs in parallel; the sink is always called from the
/// calling thread and the output does not depend on the thread count.
DatasetManifest generate(const CropStore& store, const std::vector<Background>& backgrounds,
                         const GenConfig& config, const SampleSink& sink);

/// `class x_center y_center width height` with six decimals, newline-terminated.
std::string format_label_line(const Label& label);
std::string format_label_file(const std::vector<Label>& labels);
bool is_valid_label_line(const std::string& line);
std::vector<Label> parse_label_text(const std::string& text);
std::vector<Label> parse_label_file(const std::filesystem::path& path);

/// Streams samples into a darknet tree:
///   images/<id>.png, labels/<id>.txt, obj.names, obj.data, train.txt, manifest.json
/// A `.partial` marker exists from open() until finish() succeeds.
class DarknetWriter {
public:
    DarknetWriter(std::filesystem::path root, std::vector<std::string> class_names,
                  bool fast_png = false);

    void open();
    void add(const LabeledSample& sample);
    void finish(const DatasetManifest& manifest);

    std::size_t written() const noexcept { return train_.size(); }
    const std::filesystem::path& root() const noexcept { return root_; }

private:
    void fail(const std::string& what);

    std::filesystem::path root_;
    std::vector<std::string> class_names_;
    bool fast_png_;
    std::vector<std::string> train_;
};

void emit_darknet(const std::vector<LabeledSample>& samples, const std::filesystem::path& root,
                  const std::vector<std::string>& class_names, const DatasetManifest& manifest);

struct DatasetStats {
    std::size_t images = 0;
    std::size_t boxes = 0;
    std::vector<std::string> class_names;
    std::vector<std::size_t> per_class;
    std::map<std::size_t, std::size_t> boxes_per_image;
    double mean_box_area = 0.0;  // fraction of image area
    std::vector<std::string> flagged;
    std::vector<std::string> problems;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
};

/// Classes with fewer than balance_threshold x mean instances per class are flagged.
DatasetStats dataset_stats(const std::filesystem::path& root, double balance_threshold = 0.5);

}  // namespace chromaforge

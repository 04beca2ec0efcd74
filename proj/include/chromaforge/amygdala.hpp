#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace chromaforge::amygdala {

/// Kohonen map with exponentially decaying learning rate and Gaussian neighbourhood.
struct SomConfig {
    int rows = 8;
    int cols = 8;
    double eta0 = 0.3;
    double sigma0 = 4.0;
    double tau = 1000.0;
    /// Initial weights are uniform in [init_lo, init_hi] per component.
    double init_lo = 0.0;
    double init_hi = 1.0;
};

class SomGrid {
public:
    SomGrid() = default;
    SomGrid(const SomConfig& config, int dim, std::vector<double> weights, std::uint64_t t = 0);
    /// Seeded uniform initialisation.
    static SomGrid random(const SomConfig& config, int dim, std::uint64_t seed);

    int rows() const noexcept { return config_.rows; }
    int cols() const noexcept { return config_.cols; }
    int units() const noexcept { return config_.rows * config_.cols; }
    int dim() const noexcept { return dim_; }
    std::uint64_t t() const noexcept { return t_; }
    const SomConfig& config() const noexcept { return config_; }

    std::span<const double> unit(int index) const {
        return {weights_.data() + static_cast<std::size_t>(index) * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<double> unit(int index) {
        return {weights_.data() + static_cast<std::size_t>(index) * dim_, static_cast<std::size_t>(dim_)};
    }
    const std::vector<double>& weights() const noexcept { return weights_; }

    double learning_rate() const;
    double radius() const;

    void advance() { ++t_; }

private:
    SomConfig config_;
    int dim_ = 0;
    std::vector<double> weights_;
    std::uint64_t t_ = 0;
};

struct GridPos {
    int row = 0;
    int col = 0;
    bool operator==(const GridPos&) const = default;
};

/// Nearest unit by Euclidean distance; ties go to the lowest row-major index.
GridPos som_bmu(const SomGrid& grid, std::span<const double> x);
void som_train_step(SomGrid& grid, std::span<const double> x);

/// (sin, cos) of the hour angle, continuous across midnight.
std::vector<double> encode_hour(double hour);

struct Percept {
    std::vector<double> face;
    std::vector<double> place;
    std::vector<double> time;

    static Percept make(std::vector<double> face, double place_x, double place_y, double hour);
};

struct ModelConfig {
    int face_dim = 8;
    SomConfig face{8, 8, 0.3, 4.0, 1000.0, 0.0, 1.0};
    SomConfig place{8, 8, 0.3, 4.0, 1000.0, 0.0, 1.0};
    SomConfig time{8, 8, 0.3, 4.0, 1000.0, -1.0, 1.0};
    double lr = 0.5;
    std::vector<std::string> objects{"object A", "object B"};
    std::uint64_t seed = 0;
};

/// Face, place and time SOMs feeding one softmax layer over the concatenated one-hot BMU codes.
class Model {
public:
    explicit Model(const ModelConfig& config);

    const ModelConfig& config() const noexcept { return config_; }
    std::size_t n_objects() const noexcept { return config_.objects.size(); }
    std::size_t code_length() const;

    SomGrid face, place, time;
    /// n_objects x code_length, row-major.
    std::vector<double> weights;
    std::vector<double> bias;
    double lr;

    std::span<const double> row(std::size_t object) const {
        return {weights.data() + object * code_length(), code_length()};
    }

private:
    ModelConfig config_;
};

void check_percept(const Model& model, const Percept& p);

/// Concatenated one-hot BMU codes: exactly three entries equal 1.
std::vector<double> encode(const Model& model, const Percept& percept);
std::vector<double> softmax(std::span<const double> logits);
/// Read-only.
std::vector<double> estimate(const Model& model, const Percept& percept);
/// Trains each SOM one step, re-encodes, then takes one cross-entropy gradient step.
void interact(Model& model, const Percept& percept, std::size_t ordered_object);

struct Step {
    Percept percept;
    std::size_t object = 0;
};

/// Probability vector recorded before each interaction.
std::vector<std::vector<double>> run_protocol(Model& model, const std::vector<Step>& schedule);

struct Situation {
    Percept percept;
    std::size_t object = 0;
};

/// Situation A (face A, place A, time A -> object A) and B (face A, place B, time B -> object B).
std::pair<Situation, Situation> reference_situations(const ModelConfig& config);
/// Five interactions in situation A followed by five in situation B.
std::vector<Step> reference_schedule(const ModelConfig& config);

nlohmann::json to_json(const Model& model);
Model model_from_json(const nlohmann::json& j);

struct Schedule {
    std::vector<std::string> objects;
    std::vector<Step> steps;
};

/// {"objects": [...], "steps": [{"face": [...], "place": [x, y], "hour": h | "time": [s, c],
///   "object": index | name, "repeat": n?}, ...]}
Schedule parse_schedule(const nlohmann::json& j);
Schedule read_schedule(const std::filesystem::path& path);
nlohmann::json to_json(const Schedule& schedule);

/// `step,P(obj0),P(obj1),...` then one row per recorded step (1-based).
std::string trajectory_csv(const std::vector<std::vector<double>>& trajectory);

}  // namespace chromaforge::amygdala

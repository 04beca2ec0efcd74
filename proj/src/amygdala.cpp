#include "chromaforge/amygdala.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "chromaforge/error.hpp"

namespace chromaforge::amygdala {
namespace {

void validate(const SomConfig& c, const char* which) {
    const std::string name(which);
    if (c.rows < 1 || c.cols < 1) throw Error(ErrorCode::Config, name + " SOM needs rows, cols >= 1");
    if (!(c.eta0 > 0.0)) throw Error(ErrorCode::Config, name + " SOM eta0 must be > 0");
    if (!(c.sigma0 > 0.0) || c.sigma0 > std::max(c.rows, c.cols)) {
        throw Error(ErrorCode::Config, name + " SOM sigma0 must lie in (0, max(rows, cols)]");
    }
    if (!(c.tau > 0.0)) throw Error(ErrorCode::Config, name + " SOM tau must be > 0");
    if (!(c.init_lo <= c.init_hi)) throw Error(ErrorCode::Config, name + " SOM init range is empty");
}

void check_dim(const SomGrid& grid, std::span<const double> x) {
    if (static_cast<int>(x.size()) != grid.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    fmt::format("input has {} components, SOM expects {}", x.size(), grid.dim()));
    }
    for (const double v : x) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite input component");
    }
}

}  // namespace

SomGrid::SomGrid(const SomConfig& config, int dim, std::vector<double> weights, std::uint64_t t)
    : config_(config), dim_(dim), weights_(std::move(weights)), t_(t) {
    validate(config_, "");
    if (dim < 1) throw Error(ErrorCode::Config, "SOM dimension must be >= 1");
    if (weights_.size() != static_cast<std::size_t>(units()) * dim) {
        throw Error(ErrorCode::DimensionMismatch, "SOM weight count does not match rows x cols x dim");
    }
    for (const double w : weights_) {
        if (!std::isfinite(w)) throw Error(ErrorCode::InvalidArgument, "non-finite SOM weight");
    }
}

SomGrid SomGrid::random(const SomConfig& config, int dim, std::uint64_t seed) {
    validate(config, "");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(config.init_lo, config.init_hi);
    std::vector<double> w(static_cast<std::size_t>(config.rows) * config.cols * std::max(dim, 0));
    for (double& v : w) v = config.init_lo == config.init_hi ? config.init_lo : u(rng);
    return SomGrid(config, dim, std::move(w));
}

double SomGrid::learning_rate() const {
    return config_.eta0 * std::exp(-static_cast<double>(t_) / config_.tau);
}

double SomGrid::radius() const {
    return config_.sigma0 * std::exp(-static_cast<double>(t_) / config_.tau);
}

GridPos som_bmu(const SomGrid& grid, std::span<const double> x) {
    check_dim(grid, x);
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int u = 0; u < grid.units(); ++u) {
        const auto w = grid.unit(u);
        double d = 0.0;
        for (int k = 0; k < grid.dim(); ++k) d += (w[k] - x[k]) * (w[k] - x[k]);
        if (d < best_d) {
            best_d = d;
            best = u;
        }
    }
    return {best / grid.cols(), best % grid.cols()};
}

void som_train_step(SomGrid& grid, std::span<const double> x) {
    const GridPos bmu = som_bmu(grid, x);
    const double eta = grid.learning_rate();
    const double sigma = grid.radius();
    for (int r = 0; r < grid.rows(); ++r) {
        for (int c = 0; c < grid.cols(); ++c) {
            const double g2 = static_cast<double>((r - bmu.row) * (r - bmu.row) + (c - bmu.col) * (c - bmu.col));
            const double h = std::exp(-g2 / (2.0 * sigma * sigma));
            auto w = grid.unit(r * grid.cols() + c);
            for (int k = 0; k < grid.dim(); ++k) w[k] += eta * h * (x[k] - w[k]);
        }
    }
    grid.advance();
}

std::vector<double> encode_hour(double hour) {
    const double angle = 2.0 * std::numbers::pi * hour / 24.0;
    return {std::sin(angle), std::cos(angle)};
}

Percept Percept::make(std::vector<double> face, double place_x, double place_y, double hour) {
    return {std::move(face), {place_x, place_y}, encode_hour(hour)};
}

Model::Model(const ModelConfig& config) : lr(config.lr), config_(config) {
    if (config.objects.size() < 2) throw Error(ErrorCode::Config, "need at least two objects");
    if (!(config.lr >= 0.0)) throw Error(ErrorCode::Config, "learning rate must be >= 0");
    std::mt19937_64 seeder(config.seed);
    const std::uint64_t s_face = seeder(), s_place = seeder(), s_time = seeder();
    face = SomGrid::random(config.face, config.face_dim, s_face);
    place = SomGrid::random(config.place, 2, s_place);
    time = SomGrid::random(config.time, 2, s_time);
    weights.assign(n_objects() * code_length(), 0.0);
    bias.assign(n_objects(), 0.0);
}

std::size_t Model::code_length() const {
    return static_cast<std::size_t>(face.units() + place.units() + time.units());
}

void check_percept(const Model& model, const Percept& p) {
    check_dim(model.face, p.face);
    check_dim(model.place, p.place);
    check_dim(model.time, p.time);
}

std::vector<double> encode(const Model& model, const Percept& percept) {
    check_percept(model, percept);
    std::vector<double> code(model.code_length(), 0.0);
    const std::pair<const SomGrid*, const std::vector<double>*> parts[] = {
        {&model.face, &percept.face}, {&model.place, &percept.place}, {&model.time, &percept.time}};
    std::size_t offset = 0;
    for (const auto& [grid, x] : parts) {
        const GridPos b = som_bmu(*grid, *x);
        code[offset + static_cast<std::size_t>(b.row * grid->cols() + b.col)] = 1.0;
        offset += static_cast<std::size_t>(grid->units());
    }
    return code;
}

std::vector<double> softmax(std::span<const double> logits) {
    const double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - mx);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

namespace {

std::vector<double> logits(const Model& model, const std::vector<double>& code) {
    std::vector<double> z(model.n_objects());
    for (std::size_t o = 0; o < z.size(); ++o) {
        const auto row = model.row(o);
        double s = model.bias[o];
        for (std::size_t k = 0; k < code.size(); ++k) s += row[k] * code[k];
        z[o] = s;
    }
    return z;
}

}  // namespace

std::vector<double> estimate(const Model& model, const Percept& percept) {
    return softmax(logits(model, encode(model, percept)));
}

void interact(Model& model, const Percept& percept, std::size_t ordered_object) {
    if (ordered_object >= model.n_objects()) {
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("object id {} out of range (n_objects = {})", ordered_object, model.n_objects()));
    }
    check_percept(model, percept);
    som_train_step(model.face, percept.face);
    som_train_step(model.place, percept.place);
    som_train_step(model.time, percept.time);
    const auto code = encode(model, percept);
    const auto p = softmax(logits(model, code));
    const std::size_t len = model.code_length();
    for (std::size_t o = 0; o < model.n_objects(); ++o) {
        const double g = (o == ordered_object ? 1.0 : 0.0) - p[o];
        double* row = model.weights.data() + o * len;
        for (std::size_t k = 0; k < len; ++k) row[k] += model.lr * g * code[k];
        model.bias[o] += model.lr * g;
    }
}

std::vector<std::vector<double>> run_protocol(Model& model, const std::vector<Step>& schedule) {
    if (schedule.empty()) throw Error(ErrorCode::InvalidArgument, "empty schedule");
    std::vector<std::vector<double>> trajectory;
    trajectory.reserve(schedule.size());
    for (const auto& step : schedule) {
        trajectory.push_back(estimate(model, step.percept));
        interact(model, step.percept, step.object);
    }
    return trajectory;
}

std::pair<Situation, Situation> reference_situations(const ModelConfig& config) {
    std::vector<double> face_a(static_cast<std::size_t>(std::max(config.face_dim, 1)), 0.0);
    face_a[0] = 1.0;
    Situation a{Percept::make(face_a, 0.2, 0.25, 9.0), 0};
    Situation b{Percept::make(face_a, 0.8, 0.7, 19.0), 1};
    return {a, b};
}

std::vector<Step> reference_schedule(const ModelConfig& config) {
    const auto [a, b] = reference_situations(config);
    std::vector<Step> s;
    for (int i = 0; i < 5; ++i) s.push_back({a.percept, a.object});
    for (int i = 0; i < 5; ++i) s.push_back({b.percept, b.object});
    return s;
}

// ---------------------------------------------------------------------------
// Serialisation

namespace {

nlohmann::json som_config_json(const SomConfig& c) {
    return {{"rows", c.rows},     {"cols", c.cols},
            {"eta0", c.eta0},     {"sigma0", c.sigma0},
            {"tau", std::isinf(c.tau) ? nlohmann::json() : nlohmann::json(c.tau)},
            {"init_lo", c.init_lo}, {"init_hi", c.init_hi}};
}

SomConfig som_config_from_json(const nlohmann::json& j) {
    SomConfig c;
    c.rows = j.at("rows").get<int>();
    c.cols = j.at("cols").get<int>();
    c.eta0 = j.at("eta0").get<double>();
    c.sigma0 = j.at("sigma0").get<double>();
    c.tau = j.at("tau").is_null() ? std::numeric_limits<double>::infinity() : j.at("tau").get<double>();
    c.init_lo = j.at("init_lo").get<double>();
    c.init_hi = j.at("init_hi").get<double>();
    return c;
}

nlohmann::json grid_json(const SomGrid& g) {
    return {{"config", som_config_json(g.config())}, {"dim", g.dim()}, {"t", g.t()}, {"weights", g.weights()}};
}

SomGrid grid_from_json(const nlohmann::json& j) {
    return SomGrid(som_config_from_json(j.at("config")), j.at("dim").get<int>(),
                   j.at("weights").get<std::vector<double>>(), j.at("t").get<std::uint64_t>());
}

}  // namespace

nlohmann::json to_json(const Model& m) {
    const auto& c = m.config();
    return {{"config",
             {{"face_dim", c.face_dim},
              {"face", som_config_json(c.face)},
              {"place", som_config_json(c.place)},
              {"time", som_config_json(c.time)},
              {"lr", c.lr},
              {"objects", c.objects},
              {"seed", c.seed}}},
            {"som_face", grid_json(m.face)},
            {"som_place", grid_json(m.place)},
            {"som_time", grid_json(m.time)},
            {"weights", m.weights},
            {"bias", m.bias},
            {"lr", m.lr}};
}

Model model_from_json(const nlohmann::json& j) {
    try {
        const auto& cj = j.at("config");
        ModelConfig c;
        c.face_dim = cj.at("face_dim").get<int>();
        c.face = som_config_from_json(cj.at("face"));
        c.place = som_config_from_json(cj.at("place"));
        c.time = som_config_from_json(cj.at("time"));
        c.lr = cj.at("lr").get<double>();
        c.objects = cj.at("objects").get<std::vector<std::string>>();
        c.seed = cj.at("seed").get<std::uint64_t>();
        Model m(c);
        m.face = grid_from_json(j.at("som_face"));
        m.place = grid_from_json(j.at("som_place"));
        m.time = grid_from_json(j.at("som_time"));
        m.weights = j.at("weights").get<std::vector<double>>();
        m.bias = j.at("bias").get<std::vector<double>>();
        m.lr = j.at("lr").get<double>();
        if (m.weights.size() != m.n_objects() * m.code_length() || m.bias.size() != m.n_objects()) {
            throw Error(ErrorCode::DimensionMismatch, "checkpoint weight shapes do not match its config");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("model checkpoint: ") + e.what());
    }
}

Schedule parse_schedule(const nlohmann::json& j) {
    try {
        Schedule s;
        s.objects = j.at("objects").get<std::vector<std::string>>();
        if (s.objects.size() < 2) throw Error(ErrorCode::Config, "schedule needs at least two objects");
        for (const auto& st : j.at("steps")) {
            Percept p;
            p.face = st.at("face").get<std::vector<double>>();
            p.place = st.at("place").get<std::vector<double>>();
            if (st.contains("time")) {
                p.time = st.at("time").get<std::vector<double>>();
            } else {
                p.time = encode_hour(st.at("hour").get<double>());
            }
            std::size_t object;
            const auto& o = st.at("object");
            if (o.is_string()) {
                const auto it = std::find(s.objects.begin(), s.objects.end(), o.get<std::string>());
                if (it == s.objects.end()) {
                    throw Error(ErrorCode::Config, "unknown object '" + o.get<std::string>() + "'");
                }
                object = static_cast<std::size_t>(it - s.objects.begin());
            } else {
                object = o.get<std::size_t>();
                if (object >= s.objects.size()) throw Error(ErrorCode::Config, "object index out of range");
            }
            const int repeat = st.value("repeat", 1);
            if (repeat < 1) throw Error(ErrorCode::Config, "repeat must be >= 1");
            for (int r = 0; r < repeat; ++r) s.steps.push_back({p, object});
        }
        if (s.steps.empty()) throw Error(ErrorCode::Config, "schedule has no steps");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("schedule: ") + e.what());
    }
}

Schedule read_schedule(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::NotFound, "cannot read schedule " + path.string());
    try {
        return parse_schedule(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::MalformedInput, path.string() + ": " + e.what());
    }
}

nlohmann::json to_json(const Schedule& s) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& st : s.steps) {
        steps.push_back({{"face", st.percept.face}, {"place", st.percept.place}, {"time", st.percept.time},
                         {"object", st.object}});
    }
    return {{"objects", s.objects}, {"steps", steps}};
}

std::string trajectory_csv(const std::vector<std::vector<double>>& trajectory) {
    std::string out = "step";
    const std::size_t n = trajectory.empty() ? 0 : trajectory.front().size();
    for (std::size_t i = 0; i < n; ++i) out += fmt::format(",P(obj{})", i);
    out += '\n';
    for (std::size_t s = 0; s < trajectory.size(); ++s) {
        out += std::to_string(s + 1);
        for (const double p : trajectory[s]) out += fmt::format(",{:.9f}", p);
        out += '\n';
    }
    return out;
}

}  // namespace chromaforge::amygdala

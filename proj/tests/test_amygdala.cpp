#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "chromaforge/amygdala.hpp"
#include "chromaforge/error.hpp"

using namespace chromaforge;
using namespace chromaforge::amygdala;

namespace {

SomConfig small(int rows, int cols, double eta0 = 0.3, double sigma0 = 1.0, double tau = 1000.0) {
    return SomConfig{rows, cols, eta0, sigma0, tau, 0.0, 1.0};
}

std::vector<double> face(int dim, int index) {
    std::vector<double> v(dim, 0.0);
    v[index] = 1.0;
    return v;
}

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

Percept random_percept(std::mt19937_64& rng, int face_dim) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> f(face_dim);
    for (auto& x : f) x = u(rng);
    return Percept::make(f, u(rng), u(rng), 24.0 * u(rng));
}

}  // namespace

TEST_CASE("som_bmu examples") {
    const SomGrid two(small(2, 1), 1, {0.0, 1.0});
    const std::vector<double> x{0.4};
    CHECK(som_bmu(two, x) == GridPos{0, 0});

    const SomGrid flat(small(3, 3), 2, std::vector<double>(18, 0.5));
    const std::vector<double> y{0.9, 0.1};
    CHECK(som_bmu(flat, y) == GridPos{0, 0});

    SomGrid g = SomGrid::random(small(4, 5), 3, 11);
    const std::vector<double> target(g.unit(13).begin(), g.unit(13).end());
    CHECK(som_bmu(g, target) == GridPos{2, 3});

    const std::vector<double> wrong{1.0};
    CHECK_THROWS_AS(som_bmu(g, wrong), Error);
}

TEST_CASE("som_train_step arithmetic") {
    SomGrid one(SomConfig{1, 1, 0.5, 1.0, std::numeric_limits<double>::infinity(), 0.0, 1.0}, 1, {0.0});
    const std::vector<double> x{1.0};
    som_train_step(one, x);
    CHECK(one.unit(0)[0] == doctest::Approx(0.5));
    CHECK(one.t() == 1);

    // x equal to the BMU weight leaves that weight unchanged.
    SomGrid g = SomGrid::random(small(3, 3), 2, 3);
    const std::vector<double> at(g.unit(4).begin(), g.unit(4).end());
    som_train_step(g, at);
    CHECK(g.unit(4)[0] == at[0]);
    CHECK(g.unit(4)[1] == at[1]);

    // Neighbourhood weighting: a unit at grid distance 1 moves by eta * exp(-1 / (2 sigma^2)).
    SomGrid line(SomConfig{1, 2, 0.4, 2.0, std::numeric_limits<double>::infinity(), 0.0, 1.0}, 1, {0.0, 0.5});
    const std::vector<double> z{0.0};
    som_train_step(line, z);
    CHECK(line.unit(1)[0] == doctest::Approx(0.5 - 0.4 * std::exp(-1.0 / 8.0) * 0.5));
}

TEST_CASE("som_train_step contracts the BMU towards a fixed input") {
    SomGrid g = SomGrid::random(SomConfig{6, 6, 0.3, 3.0, 50.0, 0.0, 1.0}, 4, 9);
    const std::vector<double> x{0.3, 0.9, 0.1, 0.5};
    double prev = distance(g.unit(0), x);
    GridPos b = som_bmu(g, x);
    prev = distance(g.unit(b.row * 6 + b.col), x);
    for (int i = 0; i < 40; ++i) {
        som_train_step(g, x);
        const GridPos nb = som_bmu(g, x);
        const double d = distance(g.unit(nb.row * 6 + nb.col), x);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("SOM schedules decay and configs are validated") {
    SomGrid g(SomConfig{2, 2, 0.3, 2.0, 10.0, 0.0, 1.0}, 1, {0, 0, 0, 0}, 10);
    CHECK(g.learning_rate() == doctest::Approx(0.3 * std::exp(-1.0)));
    CHECK(g.radius() == doctest::Approx(2.0 * std::exp(-1.0)));
    CHECK_THROWS_AS(SomGrid(SomConfig{2, 2, 0.3, 5.0, 10.0, 0.0, 1.0}, 1, {0, 0, 0, 0}), Error);
    CHECK_THROWS_AS(SomGrid(small(2, 2), 1, {0, 0, 0}), Error);
}

TEST_CASE("encode_hour wraps at midnight") {
    const auto a = encode_hour(23.999);
    const auto b = encode_hour(0.0);
    CHECK(distance(a, b) < 1e-3);
    CHECK(encode_hour(6.0)[0] == doctest::Approx(1.0));
    CHECK(encode_hour(12.0)[1] == doctest::Approx(-1.0));
}

TEST_CASE("encode produces three ones") {
    ModelConfig cfg;
    cfg.face_dim = 4;
    cfg.face = cfg.place = cfg.time = small(2, 2);
    cfg.time.init_lo = -1.0;
    const Model m(cfg);
    CHECK(m.code_length() == 12);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto z = encode(m, random_percept(rng, 4));
        REQUIRE(z.size() == 12);
        CHECK(std::count(z.begin(), z.end(), 1.0) == 3);
        CHECK(std::accumulate(z.begin(), z.end(), 0.0) == 3.0);
    }
    const Percept p = Percept::make(face(4, 1), 0.5, 0.5, 10);
    CHECK(encode(m, p) == encode(m, p));
    CHECK_THROWS_AS(encode(m, Percept::make(face(3, 1), 0.5, 0.5, 10)), Error);
}

TEST_CASE("estimate: uniform start, shift invariance, read-only") {
    ModelConfig cfg;
    cfg.objects = {"a", "b", "c"};
    const Model m(cfg);
    const Percept p = Percept::make(face(8, 0), 0.2, 0.25, 9);
    for (double v : estimate(m, p)) CHECK(v == doctest::Approx(1.0 / 3.0));

    const std::vector<double> logits{0.3, -2.0, 5.0};
    std::vector<double> shifted = logits;
    for (auto& x : shifted) x += 123.0;
    const auto a = softmax(logits);
    const auto b = softmax(shifted);
    for (int i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    const std::vector<double> huge{1000.0, 0.0};
    CHECK(softmax(huge)[0] == doctest::Approx(1.0));

    Model copy = m;
    estimate(copy, p);
    CHECK(copy.face.t() == 0);
    CHECK(copy.weights == m.weights);
}

TEST_CASE("interact") {
    ModelConfig cfg;
    const Percept p = Percept::make(face(8, 0), 0.2, 0.25, 9);

    SUBCASE("raises the ordered object's probability") {
        Model m(cfg);
        const double before = estimate(m, p)[1];
        interact(m, p, 1);
        CHECK(estimate(m, p)[1] > before);
        CHECK(m.face.t() == 1);
    }
    SUBCASE("lr = 0 leaves the perceptron unchanged") {
        cfg.lr = 0.0;
        Model m(cfg);
        const auto w = m.weights;
        const auto b = m.bias;
        interact(m, p, 0);
        CHECK(m.weights == w);
        CHECK(m.bias == b);
        CHECK(m.place.t() == 1);
    }
    SUBCASE("five identical interactions reach P >= 0.9") {
        Model m(cfg);
        for (int i = 0; i < 5; ++i) interact(m, p, 0);
        CHECK(estimate(m, p)[0] >= 0.9);
    }
    SUBCASE("invalid object id") {
        Model m(cfg);
        CHECK_THROWS_AS(interact(m, p, 2), Error);
    }
}

TEST_CASE("run_protocol records the estimate before each interaction") {
    ModelConfig cfg;
    Model m(cfg);
    const auto traj = run_protocol(m, {{Percept::make(face(8, 0), 0.5, 0.5, 12), 1}});
    REQUIRE(traj.size() == 1);
    CHECK(traj[0][0] == doctest::Approx(0.5));
    CHECK(traj[0][1] == doctest::Approx(0.5));
    Model empty(cfg);
    CHECK_THROWS_AS(run_protocol(empty, {}), Error);
}

TEST_CASE("reference protocol shape") {
    ModelConfig cfg;
    cfg.seed = 3;
    Model m(cfg);
    const auto traj = run_protocol(m, reference_schedule(cfg));
    REQUIRE(traj.size() == 10);
    CHECK(traj[4][0] > traj[0][0]);
    CHECK(traj[7][1] > traj[5][1]);
    const auto post = estimate(m, reference_situations(cfg).second.percept);
    CHECK(post[1] > post[0]);
}

TEST_CASE("permutation equivariance of estimate and interact") {
    ModelConfig cfg;
    cfg.objects = {"a", "b", "c"};
    ModelConfig swapped = cfg;
    swapped.objects = {"c", "a", "b"};
    const std::vector<std::size_t> perm{1, 2, 0};  // object i of cfg is object perm[i] of swapped
    Model m(cfg), n(swapped);
    std::mt19937_64 rng(5);
    for (int step = 0; step < 20; ++step) {
        const Percept p = random_percept(rng, 8);
        const std::size_t obj = rng() % 3;
        interact(m, p, obj);
        interact(n, p, perm[obj]);
        const auto pm = estimate(m, p);
        const auto pn = estimate(n, p);
        for (std::size_t i = 0; i < 3; ++i) CHECK(pm[i] == doctest::Approx(pn[perm[i]]).epsilon(1e-12));
    }
}

TEST_CASE("cross-entropy on the trained sample does not increase") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        ModelConfig cfg;
        cfg.seed = trial;
        Model m(cfg);
        const Percept p = random_percept(rng, 8);
        const std::size_t obj = rng() % 2;
        for (int k = 0; k < 5; ++k) {
            interact(m, p, obj);
            const double before = -std::log(estimate(m, p)[obj]);
            interact(m, p, obj);
            const double after = -std::log(estimate(m, p)[obj]);
            REQUIRE(after <= before + 1e-12);
        }
    }
}

TEST_CASE("checkpoint round trip") {
    ModelConfig cfg;
    cfg.seed = 8;
    Model m(cfg);
    for (const auto& s : reference_schedule(cfg)) interact(m, s.percept, s.object);
    const Model back = model_from_json(to_json(m));
    CHECK(back.weights == m.weights);
    CHECK(back.bias == m.bias);
    CHECK(back.face.weights() == m.face.weights());
    CHECK(back.time.t() == 10);
    const Percept p = reference_situations(cfg).first.percept;
    CHECK(estimate(back, p) == estimate(m, p));
    CHECK(to_json(back) == to_json(m));
    CHECK_THROWS_AS(model_from_json(nlohmann::json::object()), Error);
}

TEST_CASE("schedule JSON") {
    const auto j = nlohmann::json::parse(R"({
        "objects": ["tea", "coffee"],
        "steps": [
            {"face": [1, 0], "place": [0.1, 0.2], "hour": 9, "object": "tea", "repeat": 3},
            {"face": [0, 1], "place": [0.7, 0.8], "time": [0, -1], "object": 1}
        ]})");
    const Schedule s = parse_schedule(j);
    REQUIRE(s.steps.size() == 4);
    CHECK(s.objects[1] == "coffee");
    CHECK(s.steps[2].object == 0);
    CHECK(s.steps[3].object == 1);
    CHECK(s.steps[3].percept.time[1] == -1.0);
    CHECK(s.steps[0].percept.time == encode_hour(9));
    const Schedule back = parse_schedule(to_json(s));
    CHECK(back.steps.size() == 4);
    CHECK(back.steps[3].percept.place == s.steps[3].percept.place);

    CHECK_THROWS_AS(parse_schedule(nlohmann::json::parse(R"({"objects": ["a"], "steps": []})")), Error);
    CHECK_THROWS_AS(parse_schedule(nlohmann::json::parse(
                        R"({"objects": ["a", "b"], "steps": [{"face": [1], "place": [0, 0], "hour": 1, "object": "z"}]})")),
                    Error);
}

TEST_CASE("trajectory CSV") {
    const std::string csv = trajectory_csv({{0.5, 0.5}, {0.25, 0.75}});
    CHECK(csv == "step,P(obj0),P(obj1)\n1,0.500000000,0.500000000\n2,0.250000000,0.750000000\n");
}

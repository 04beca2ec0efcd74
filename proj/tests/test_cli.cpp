#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chromaforge/cli.hpp"
#include "chromaforge/png_io.hpp"

using namespace chromaforge;
namespace fs = std::filesystem;

namespace {

const fs::path kFixture = CHROMAFORGE_FIXTURE_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("chromaforge_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
    }
    return files;
}

}  // namespace

TEST_CASE("cli: help and version") {
    Run r = cli({"--version"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.1.0") != std::string::npos);
    r = cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("generate") != std::string::npos);
    r = cli({"generate", "--help"});
    CHECK(r.code == 0);
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"frobnicate"}).code == kExitUsage);
}

TEST_CASE("cli: ace") {
    const fs::path dir = fresh_dir("ace");
    ImageBuffer img(12, 10, ColorSpace::Rgb);
    for (int y = 0; y < 10; ++y) {
        for (int x = 0; x < 12; ++x) img.at(x, y, 0) = static_cast<std::uint8_t>(x * 20);
    }
    write_png(img, dir / "in.png");

    Run r = cli({"ace", (dir / "in.png").string(), (dir / "out.png").string(), "--samples", "0"});
    CHECK(r.code == kExitOk);
    CHECK(read_png(dir / "out.png") == ace_exhaustive(img, AceParams{}));

    r = cli({"ace", (dir / "missing.png").string(), (dir / "o.png").string()});
    CHECK(r.code == kExitIo);
    CHECK(r.err.rfind("ERROR 3:", 0) == 0);
    CHECK(r.err.find("missing.png") != std::string::npos);

    r = cli({"ace", (dir / "in.png").string(), (dir / "o.png").string(), "--samples", "4"});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.rfind("ERROR 2:", 0) == 0);
    CHECK_FALSE(fs::exists(dir / "o.png"));

    std::ofstream(dir / "junk.png") << "not a png";
    CHECK(cli({"ace", (dir / "junk.png").string(), (dir / "o.png").string()}).code == kExitIo);
}

TEST_CASE("cli: segment") {
    const fs::path dir = fresh_dir("segment");
    ImageBuffer img(100, 100, ColorSpace::Rgb);
    for (int y = 0; y < 100; ++y) {
        for (int x = 0; x < 100; ++x) {
            const bool obj = x >= 40 && x < 60 && y >= 50 && y < 80;
            img.at(x, y, 0) = obj ? 255 : 0;
            img.at(x, y, 1) = obj ? 0 : 255;
        }
    }
    write_png(img, dir / "frame.png");
    const Run r = cli({"segment", (dir / "frame.png").string(), (dir / "mask.png").string(), "--crop",
                       (dir / "crop.png").string()});
    CHECK(r.code == kExitOk);
    CHECK(nlohmann::json::parse(r.out)["bbox"] == nlohmann::json{40, 50, 20, 30});
    const ImageBuffer crop = read_png(dir / "crop.png");
    CHECK(crop.width() == 20);
    CHECK(crop.height() == 30);

    const Run bad = cli({"segment", (dir / "frame.png").string(), (dir / "m.png").string(), "--hue-min", "200",
                         "--hue-max", "100"});
    CHECK(bad.code == kExitUsage);
}

TEST_CASE("cli: ingest and stats on the fixture") {
    const fs::path out = fresh_dir("ingest");
    Run r = cli({"ingest", (kFixture / "captures").string(), "--classes", (kFixture / "classes.txt").string(), "--out",
                 out.string(), "--expected", "3"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("12 crops, 0 failures, 0 warnings") == 0);
    CHECK(fs::exists(out / "mug" / "high" / "0.png"));
    const auto report = nlohmann::json::parse(slurp(out / "ingest_report.json"));
    CHECK(report["classes"].size() == 2);

    r = cli({"ingest", (kFixture / "captures").string(), "--classes", (out / "nope.txt").string(), "--out",
             out.string()});
    CHECK(r.code == kExitIo);

    const fs::path bad_classes = out / "classes.txt";
    std::ofstream(bad_classes) << "0\tmug\n1\tbox\n2\tghost\n";
    r = cli({"ingest", (kFixture / "captures").string(), "--classes", bad_classes.string(), "--out",
             (out / "ghost").string(), "--expected", "3"});
    CHECK(r.code == kExitProcessing);
    CHECK(r.err.find("ghost") != std::string::npos);
}

TEST_CASE("cli: generate on the fixture is counted and deterministic") {
    const fs::path a = fresh_dir("gen_a");
    const fs::path b = fresh_dir("gen_b");
    const std::string config = (kFixture / "config.json").string();

    const Run ra = cli({"generate", config, "--output", a.string()});
    REQUIRE(ra.code == kExitOk);
    CHECK(ra.out.find("samples: 8") != std::string::npos);  // 4 rounds x 2 backgrounds
    CHECK(ra.out.find("manifest.json") != std::string::npos);
    CHECK(fs::exists(a / "obj.names"));
    CHECK(fs::exists(a / "obj.data"));
    CHECK(fs::exists(a / "train.txt"));
    CHECK(fs::exists(a / "ingest_report.json"));
    CHECK_FALSE(fs::exists(a / ".partial"));

    std::size_t images = 0;
    for (const auto& e : fs::directory_iterator(a / "images")) images += e.path().extension() == ".png";
    CHECK(images == 8);

    const Run rb = cli({"--threads", "3", "generate", config, "--output", b.string()});
    REQUIRE(rb.code == kExitOk);
    CHECK(snapshot(a) == snapshot(b));

    // Re-running into an existing dataset replaces it.
    REQUIRE(cli({"generate", config, "--output", a.string(), "--rounds", "1"}).code == kExitOk);
    CHECK(slurp(a / "train.txt").size() < slurp(b / "train.txt").size());
    CHECK_FALSE(fs::exists(a / "images" / "shelf_000003.png"));

    const fs::path c = fresh_dir("gen_c");
    REQUIRE(cli({"generate", config, "--output", c.string(), "--seed", "8"}).code == kExitOk);
    CHECK(snapshot(c) != snapshot(b));
}

TEST_CASE("cli: generate rejects bad configs before writing") {
    const fs::path dir = fresh_dir("gen_bad");
    const fs::path out = dir / "out";
    auto j = nlohmann::json::parse(slurp(kFixture / "config.json"));
    for (const char* key : {"captures", "backgrounds", "layouts", "class_manifest"}) {
        j[key] = (kFixture / j[key].get<std::string>()).string();
    }
    j["output"] = out.string();

    SUBCASE("layout referencing a missing background") {
        fs::copy(kFixture / "layouts", dir / "layouts");
        auto layout = nlohmann::json::parse(slurp(dir / "layouts" / "table.json"));
        layout["background_id"] = "kitchen";
        std::ofstream(dir / "layouts" / "kitchen.json") << layout.dump();
        j["layouts"] = (dir / "layouts").string();
        std::ofstream(dir / "config.json") << j.dump();
        const Run r = cli({"generate", (dir / "config.json").string()});
        CHECK(r.code == kExitUsage);
        CHECK(r.err.find("kitchen") != std::string::npos);
    }
    SUBCASE("missing seed") {
        j.erase("seed");
        std::ofstream(dir / "config.json") << j.dump();
        CHECK(cli({"generate", (dir / "config.json").string()}).code == kExitUsage);
    }
    SUBCASE("missing captures directory") {
        j["captures"] = (dir / "nowhere").string();
        std::ofstream(dir / "config.json") << j.dump();
        const Run r = cli({"generate", (dir / "config.json").string()});
        CHECK(r.code == kExitUsage);
        CHECK(r.err.find("nowhere") != std::string::npos);
    }
    SUBCASE("malformed JSON") {
        std::ofstream(dir / "config.json") << "{ not json";
        CHECK(cli({"generate", (dir / "config.json").string()}).code == kExitUsage);
    }
    SUBCASE("output directory holding unrelated files") {
        fs::create_directories(out);
        std::ofstream(out / "precious.txt") << "keep me";
        std::ofstream(dir / "config.json") << j.dump();
        CHECK(cli({"generate", (dir / "config.json").string()}).code == kExitUsage);
        CHECK(slurp(out / "precious.txt") == "keep me");
    }
    CHECK_FALSE(fs::exists(out / "images"));
}

TEST_CASE("cli: stats") {
    const fs::path dir = fresh_dir("stats");
    REQUIRE(cli({"generate", (kFixture / "config.json").string(), "--output", dir.string(), "--rounds", "1"}).code ==
            kExitOk);
    const Run r = cli({"stats", dir.string()});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["images"] == 2);
    CHECK(j["boxes"] == 20 + 24);
    CHECK(cli({"stats", (dir / "missing").string()}).code == kExitIo);
}

TEST_CASE("cli: amygdala") {
    const fs::path dir = fresh_dir("amygdala");
    const auto csv = [&](const std::string& name) { return (dir / name).string(); };

    REQUIRE(cli({"amygdala", "--paper-protocol", "--out", csv("a.csv"), "--seed", "4", "--checkpoint",
                 csv("model.json")})
                .code == kExitOk);
    REQUIRE(cli({"amygdala", "--paper-protocol", "--out", csv("b.csv"), "--seed", "4"}).code == kExitOk);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(fs::exists(dir / "model.json"));

    std::istringstream lines(slurp(dir / "a.csv"));
    std::string line;
    std::getline(lines, line);
    CHECK(line == "step,P(obj0),P(obj1)");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        std::istringstream fields(line);
        std::string f;
        std::getline(fields, f, ',');
        CHECK(std::stoi(f) == rows);
        double sum = 0;
        while (std::getline(fields, f, ',')) sum += std::stod(f);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK(rows == 10);

    std::ofstream(dir / "schedule.json") << R"({"objects": ["tea", "coffee", "water"],
        "steps": [{"face": [1, 0, 0], "place": [0.1, 0.1], "hour": 8, "object": "coffee", "repeat": 4}]})";
    REQUIRE(cli({"amygdala", csv("schedule.json"), "--out", csv("s.csv")}).code == kExitOk);
    CHECK(slurp(dir / "s.csv").find("step,P(obj0),P(obj1),P(obj2)\n1,") == 0);

    CHECK(cli({"amygdala", "--out", csv("x.csv")}).code == kExitUsage);
    CHECK(cli({"amygdala", csv("nothing.json"), "--out", csv("x.csv")}).code == kExitIo);
    CHECK(cli({"amygdala", "--paper-protocol", "--out", csv("x.csv"), "--lr", "-1"}).code == kExitUsage);
}

// Serial reference kernels versus their OpenMP counterparts, plus end-to-end generation.
// Thread count follows CHROMAFORGE_THREADS (or --threads via the environment); the serial
// variants always run on one thread.

#include <benchmark/benchmark.h>

#include <random>

#include "chromaforge/ace.hpp"
#include "chromaforge/cli.hpp"
#include "chromaforge/datasetgen.hpp"
#include "chromaforge/morphology.hpp"
#include "chromaforge/parallel.hpp"

using namespace chromaforge;

namespace {

ImageBuffer noise_image(int w, int h) {
    std::mt19937_64 rng(1);
    ImageBuffer img(w, h, ColorSpace::Rgb);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(d(rng));
    return img;
}

BinaryMask blob_mask(int w, int h) {
    std::mt19937_64 rng(2);
    std::bernoulli_distribution b(0.55);
    BinaryMask m(w, h);
    for (auto& v : m.bits()) v = b(rng) ? 1 : 0;
    return m;
}

void ace_exhaustive_serial(benchmark::State& state) {
    const ImageBuffer img = noise_image(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
    AceParams p;
    p.samples = 0;
    for (auto _ : state) benchmark::DoNotOptimize(serial::ace_exhaustive(img, p));
    state.SetItemsProcessed(state.iterations() * img.pixel_count());
}

void ace_exhaustive_omp(benchmark::State& state) {
    const ImageBuffer img = noise_image(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
    AceParams p;
    p.samples = 0;
    for (auto _ : state) benchmark::DoNotOptimize(ace_exhaustive(img, p));
    state.SetItemsProcessed(state.iterations() * img.pixel_count());
}

void ace_sampled_serial(benchmark::State& state) {
    const ImageBuffer img = noise_image(320, 240);
    AceParams p;
    p.samples = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(serial::ace_sampled(img, p));
    state.SetItemsProcessed(state.iterations() * img.pixel_count());
}

void ace_sampled_omp(benchmark::State& state) {
    const ImageBuffer img = noise_image(320, 240);
    AceParams p;
    p.samples = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ace_sampled(img, p));
    state.SetItemsProcessed(state.iterations() * img.pixel_count());
}

void morphology_serial(benchmark::State& state) {
    const BinaryMask m = blob_mask(640, 480);
    for (auto _ : state) benchmark::DoNotOptimize(serial::morphology(m, MorphOp::Close, static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * m.size());
}

void morphology_omp(benchmark::State& state) {
    const BinaryMask m = blob_mask(640, 480);
    for (auto _ : state) benchmark::DoNotOptimize(morphology(m, MorphOp::Close, static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * m.size());
}

struct Fixture {
    CropStore store;
    std::vector<Background> backgrounds;
    GenConfig generation;

    static const Fixture& get() {
        static const Fixture f = [] {
            Fixture x;
            const PipelineConfig cfg = load_pipeline_config(std::string(CHROMAFORGE_FIXTURE_DIR) + "/config.json");
            x.store = CropStore(pipeline_ingest(cfg).crops);
            x.backgrounds = pipeline_backgrounds(cfg);
            x.generation = cfg.generation;
            x.generation.rounds = 25;
            return x;
        }();
        return f;
    }
};

// Rendering only (no PNG encoding); range(0) = worker threads, 0 = default.
void generate_samples(benchmark::State& state) {
    const Fixture& f = Fixture::get();
    set_thread_count(static_cast<int>(state.range(0)));
    std::size_t n = 0;
    for (auto _ : state) {
        generate(f.store, f.backgrounds, f.generation, [&](LabeledSample&& s) {
            benchmark::DoNotOptimize(s.image.data().data());
            ++n;
        });
    }
    set_thread_count(0);
    state.SetItemsProcessed(static_cast<std::int64_t>(n));
    state.counters["threads"] = thread_count();
}

}  // namespace

BENCHMARK(ace_exhaustive_serial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(ace_exhaustive_omp)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(ace_sampled_serial)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(ace_sampled_omp)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(morphology_serial)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(morphology_omp)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(generate_samples)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

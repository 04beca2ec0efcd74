#include <doctest.h>

#include <random>

#include "chromaforge/error.hpp"
#include "chromaforge/morphology.hpp"
#include "chromaforge/parallel.hpp"
#include "oracles.hpp"

using namespace chromaforge;

TEST_CASE("full mask is a fixed point of every op") {
    const BinaryMask full(9, 7, true);
    for (const MorphOp op : {MorphOp::Erode, MorphOp::Dilate, MorphOp::Open, MorphOp::Close}) {
        for (int r = 1; r <= 3; ++r) CHECK(morphology(full, op, r) == full);
    }
}

TEST_CASE("opening removes an isolated pixel") {
    BinaryMask m(7, 7);
    m.set(3, 3, true);
    CHECK(!morphology(m, MorphOp::Open, 1).any());
}

TEST_CASE("closing fills a one-pixel hole in a 5x5 square") {
    BinaryMask m(9, 9);
    for (int y = 2; y < 7; ++y) {
        for (int x = 2; x < 7; ++x) m.set(x, y, true);
    }
    BinaryMask holed = m;
    holed.set(4, 4, false);
    // Dilation grows the square to 7x7 and covers the hole; erosion shrinks it back to 5x5.
    CHECK(morphology(holed, MorphOp::Close, 1) == m);
}

TEST_CASE("erode shrinks an interior square by the radius") {
    BinaryMask m(12, 12);
    for (int y = 2; y < 10; ++y) {
        for (int x = 2; x < 10; ++x) m.set(x, y, true);
    }
    CHECK(morphology(m, MorphOp::Erode, 2).bounding_box() == PixelBox{4, 4, 4, 4});
    CHECK(morphology(m, MorphOp::Dilate, 1).bounding_box() == PixelBox{1, 1, 10, 10});
}

TEST_CASE("radius 0 is rejected") {
    CHECK_THROWS_AS(morphology(BinaryMask(3, 3), MorphOp::Erode, 0), Error);
    CHECK_THROWS_AS(serial::morphology(BinaryMask(3, 3), MorphOp::Dilate, -1), Error);
}

TEST_CASE("separable kernel matches the direct window scan") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 40), h = 1 + static_cast<int>(rng() % 40);
        const BinaryMask m = oracle::random_mask(w, h, 0.2 + 0.6 * (trial % 5) / 4.0, rng);
        const auto op = static_cast<MorphOp>(trial % 4);
        const int r = 1 + trial % 3;
        CHECK(morphology(m, op, r) == serial::morphology(m, op, r));
    }
}

TEST_CASE("result does not depend on the thread count") {
    std::mt19937_64 rng(5);
    const BinaryMask m = oracle::random_mask(64, 48, 0.5, rng);
    set_thread_count(1);
    const BinaryMask a = morphology(m, MorphOp::Close, 2);
    set_thread_count(4);
    const BinaryMask b = morphology(m, MorphOp::Close, 2);
    set_thread_count(0);
    CHECK(a == b);
}

TEST_CASE("dilation is monotone") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        BinaryMask a = oracle::random_mask(20, 15, 0.15, rng);
        BinaryMask b = a;
        const BinaryMask extra = oracle::random_mask(20, 15, 0.1, rng);
        for (std::size_t i = 0; i < b.size(); ++i) b.bits()[i] |= extra.bits()[i];
        const int r = 1 + trial % 3;
        const BinaryMask da = morphology(a, MorphOp::Dilate, r), db = morphology(b, MorphOp::Dilate, r);
        for (std::size_t i = 0; i < da.size(); ++i) {
            if (da.bits()[i]) REQUIRE(db.bits()[i]);
        }
    }
}

TEST_CASE("connected components: edge cases") {
    CHECK(connected_components(BinaryMask(5, 5), 4).empty());

    BinaryMask one(8, 8);
    one.set(3, 4, true);
    const auto c = connected_components(one, 8);
    REQUIRE(c.size() == 1);
    CHECK(c[0].count == 1);
    CHECK(c[0].box == PixelBox{3, 4, 1, 1});

    BinaryMask diag(4, 4);
    diag.set(1, 1, true);
    diag.set(2, 2, true);
    CHECK(connected_components(diag, 4).size() == 2);
    CHECK(connected_components(diag, 8).size() == 1);
    CHECK_THROWS_AS(connected_components(diag, 6), Error);
}

TEST_CASE("components partition the foreground with tight boxes") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const BinaryMask m = oracle::random_mask(25, 20, 0.35, rng);
        const int conn = trial % 2 ? 8 : 4;
        const auto comps = connected_components(m, conn);
        const auto labels = label_components(m, conn);
        std::size_t total = 0;
        for (const auto& comp : comps) {
            total += comp.count;
            BinaryMask only(m.width(), m.height());
            for (std::size_t i = 0; i < labels.size(); ++i) only.bits()[i] = labels[i] == comp.id;
            REQUIRE(only.bounding_box() == comp.box);
        }
        CHECK(total == m.count());
        for (std::size_t i = 0; i < labels.size(); ++i) REQUIRE((labels[i] != 0) == (m.bits()[i] != 0));
    }
}

TEST_CASE("keep_largest_component leaves exactly one component") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        const BinaryMask m = oracle::random_mask(30, 30, 0.3, rng);
        const BinaryMask k = keep_largest_component(m, 4);
        const auto before = connected_components(m, 4);
        const auto after = connected_components(k, 4);
        REQUIRE(after.size() == (before.empty() ? 0u : 1u));
        if (!before.empty()) {
            std::size_t best = 0;
            for (const auto& c : before) best = std::max(best, c.count);
            CHECK(after[0].count == best);
        }
    }
}

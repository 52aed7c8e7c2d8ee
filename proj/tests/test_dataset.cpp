#include <logicp/dataset.hpp>
#include <logicp/parallel.hpp>
#include <logicp/random.hpp>
#include <logicp/synthetic.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <set>
#include <stdexcept>

namespace logicp {
namespace {

Dataset numbered(std::size_t n, std::size_t empty_every = 0) {
    Dataset ds;
    ds.product_count = 2;
    for (std::size_t i = 0; i < n; ++i) {
        const bool empty = empty_every != 0 && i % empty_every == 0;
        ds.records.push_back({"r" + std::to_string(i), PointCloud({{double(i), 0, 0}}),
                              empty ? ProductBasket{0, 0} : ProductBasket{Quantity(i), 1}, std::nullopt});
    }
    return ds;
}

std::vector<std::string> ids(const Dataset& ds) {
    std::vector<std::string> out;
    for (const auto& r : ds.records) out.push_back(r.id);
    return out;
}

TEST(Split, SizesFollowFloor) {
    const auto [train, test] = split(numbered(10), SplitSpec{}, 0);
    EXPECT_EQ(train.size(), 6u);
    EXPECT_EQ(test.size(), 4u);
    SplitSpec spec;
    spec.train_fraction = 0.55;
    const auto [a, b] = split(numbered(11), spec, 0);
    EXPECT_EQ(a.size(), 6u);
    EXPECT_EQ(b.size(), 5u);
}

TEST(Split, IsAPartition) {
    const auto ds = numbered(100);
    for (int run = 0; run < 10; ++run) {
        const auto [train, test] = split(ds, SplitSpec{}, run);
        std::set<std::string> all;
        for (const auto& id : ids(train)) EXPECT_TRUE(all.insert(id).second);
        for (const auto& id : ids(test)) EXPECT_TRUE(all.insert(id).second);
        EXPECT_EQ(all.size(), ds.size());
    }
}

TEST(Split, DeterministicPerSeedAndRun) {
    const auto ds = numbered(100);
    SplitSpec spec;
    spec.seed = 42;
    EXPECT_EQ(ids(split(ds, spec, 3).first), ids(split(ds, spec, 3).first));
    EXPECT_NE(ids(split(ds, spec, 0).first), ids(split(ds, spec, 1).first));
    spec.seed = 43;
    EXPECT_NE(ids(split(ds, spec, 3).first), ids(split(ds, SplitSpec{0.6, 42}, 3).first));
}

TEST(Split, FixedSeedRegression) {
    // Recorded from the first run; guards against generator or shuffle drift.
    const std::vector<std::size_t> expected{7, 8, 3, 2, 6, 5, 9, 1, 0, 4};
    EXPECT_EQ(split_order(10, 7, 0), expected);
}

TEST(Split, Errors) {
    EXPECT_THROW(split(numbered(1), SplitSpec{}, 0), InvalidInput);
    EXPECT_THROW(split(numbered(10), SplitSpec{}, 10), InvalidInput);
    EXPECT_THROW(split(numbered(10), SplitSpec{}, -1), InvalidInput);
    SplitSpec spec;
    spec.train_fraction = 1.0;
    EXPECT_THROW(split(numbered(10), spec, 0), InvalidInput);
    spec.train_fraction = 0.1;
    EXPECT_THROW(split(numbered(5), spec, 0), InvalidInput);
}

TEST(DropEmpty, RemovesOnlyEmptyBaskets) {
    const auto ds = numbered(30, 3);
    const auto kept = drop_empty(ds);
    EXPECT_EQ(kept.size(), 20u);
    for (const auto& r : kept.records) EXPECT_FALSE(r.basket.is_empty());
    EXPECT_EQ(ids(drop_empty(kept)), ids(kept));
    const auto full = numbered(5);
    EXPECT_EQ(ids(drop_empty(full)), ids(full));
}

TEST(DropEmpty, KnownEmptyCountOnMimic) {
    Dataset ds;
    ds.product_count = 3;
    Rng rng(9);
    std::size_t empties = 0;
    for (int i = 0; i < 1207; ++i) {
        const bool empty = i < 736;
        empties += empty;
        ds.records.push_back({"l" + std::to_string(i), PointCloud({{0, 0, 0}}),
                              empty ? ProductBasket{0, 0, 0} : ProductBasket{1 + Quantity(rng.below(3)), 0, 0},
                              std::nullopt});
    }
    rng.shuffle(std::span<LogRecord>(ds.records));
    EXPECT_EQ(drop_empty(ds).size(), 1207 - empties);
    EXPECT_EQ(drop_empty(ds).size(), 471u);
}

TEST(DatasetTest, Validate) {
    auto ds = numbered(3);
    EXPECT_NO_THROW(ds.validate());
    ds.records[2].id = "r0";
    EXPECT_THROW(ds.validate(), InvalidInput);
    ds = numbered(3);
    ds.records[1].basket = ProductBasket{1};
    EXPECT_THROW(ds.validate(), InvalidInput);
    ds = numbered(3);
    ds.product_names = {"a"};
    EXPECT_THROW(ds.validate(), InvalidInput);
}

TEST(RngTest, StreamsAreReproducibleAndDistinct) {
    Rng a(5, 1), b(5, 1), c(5, 2);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.below(1000000), y = b.below(1000000), z = c.below(1000000);
        EXPECT_EQ(x, y);
        differs = differs || x != z;
    }
    EXPECT_TRUE(differs);
}

TEST(RngTest, RangesHold) {
    Rng rng(6);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        EXPECT_LT(rng.below(7), 7u);
        EXPECT_NEAR(norm(rng.unit_vector()), 1.0, 1e-12);
    }
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsLowestFailingIndex) {
    for (unsigned jobs : {1u, 3u}) {
        try {
            parallel_for(100, jobs, [](std::size_t i) {
                if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
            });
            FAIL() << "expected an exception";
        } catch (const std::runtime_error& e) {
            EXPECT_STREQ(e.what(), "17");
        }
    }
}

TEST(PrototypeDataset, StructureAndDistinctBaskets) {
    synth::PrototypeDatasetSpec spec;
    spec.prototypes = 6;
    spec.copies_per_prototype = 3;
    spec.points_per_scan = 50;
    const auto ds = synth::make_prototype_dataset(spec);
    EXPECT_EQ(ds.size(), 18u);
    EXPECT_EQ(ds.product_count, 19u);
    EXPECT_NO_THROW(ds.validate());
    std::set<std::vector<Quantity>> baskets;
    for (std::size_t k = 0; k < 6; ++k) {
        const auto& b = ds.records[k * 3].basket;
        baskets.insert({b.quantities().begin(), b.quantities().end()});
        EXPECT_EQ(ds.records[k * 3 + 1].basket, b);
        EXPECT_EQ(ds.records[k * 3 + 2].basket, b);
    }
    EXPECT_EQ(baskets.size(), 6u);
    const auto again = synth::make_prototype_dataset(spec);
    for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(ds.records[i].scan, again.records[i].scan);
}

}  // namespace
}  // namespace logicp

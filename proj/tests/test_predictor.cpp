#include <logicp/predictor.hpp>
#include <logicp/synthetic.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

namespace logicp {
namespace {

LogRecord record(std::string id, PointCloud scan, ProductBasket basket) {
    return {std::move(id), std::move(scan), std::move(basket), std::nullopt};
}

LogRecord feature_record(std::string id, LogFeatures f, ProductBasket basket) {
    return {std::move(id), PointCloud({{0, 0, 0}}), std::move(basket), f};
}

std::vector<LogRecord> distinct_logs(Rng& rng, std::size_t n) {
    std::vector<LogRecord> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(record("log" + std::to_string(i), synth::sample_log_surface(rng, synth::random_log_shape(rng), 200),
                             {Quantity(i), Quantity(n - i)}));
    return out;
}

TEST(MeanPredict, Examples) {
    const PointCloud s({{0, 0, 0}});
    EXPECT_EQ(mean_predict(std::vector{record("a", s, {2, 0}), record("b", s, {4, 0})}), (ProductBasket{3, 0}));
    EXPECT_EQ(mean_predict(std::vector{record("a", s, {1, 1})}), (ProductBasket{1, 1}));
    EXPECT_EQ(mean_predict(std::vector{record("a", s, {0, 1}), record("b", s, {1, 0})}), (ProductBasket{1, 1}));
    EXPECT_EQ(mean_predict(std::vector{record("a", s, {0}), record("b", s, {0}), record("c", s, {1})}),
              (ProductBasket{0}));
    EXPECT_THROW(mean_predict(std::vector<LogRecord>{}), InvalidInput);
    EXPECT_THROW(mean_predict(std::vector{record("a", s, {0}), record("b", s, {0, 1})}), InvalidInput);
}

TEST(IcpNnPredict, QueryIdenticalToTrainingScan) {
    Rng rng(1);
    const auto train = distinct_logs(rng, 6);
    const auto out = icp_nn_predict(train, train[3].scan, IcpConfig{});
    EXPECT_EQ(out.predicted, train[3].basket);
    EXPECT_EQ(out.neighbor_id, "log3");
    EXPECT_EQ(out.distance, 0.0);
}

TEST(IcpNnPredict, JitteredQueryFindsItsSource) {
    Rng rng(2);
    const auto a = synth::sample_log_surface(rng, synth::random_log_shape(rng), 300);
    const auto b = synth::sample_log_surface(rng, synth::random_log_shape(rng), 300);
    const std::vector train{record("A", a, {1, 0}), record("B", b, {0, 1})};
    const double limit = 0.001 * bounding_diagonal(a);
    std::vector<Point3> pts(a.begin(), a.end());
    for (auto& p : pts) p += Vec3{rng.uniform(-limit, limit), rng.uniform(-limit, limit), rng.uniform(-limit, limit)};
    const PointCloud query(pts);
    const auto out = icp_nn_predict(train, query, IcpConfig{});
    EXPECT_LT(icp_distance(query, a, IcpConfig{}), icp_distance(query, b, IcpConfig{}));
    EXPECT_EQ(out.predicted, (ProductBasket{1, 0}));
    EXPECT_EQ(out.neighbor_id, "A");
}

TEST(IcpNnPredict, TieGoesToLowestIndex) {
    Rng rng(3);
    const auto s = synth::sample_log_surface(rng, synth::random_log_shape(rng), 100);
    const std::vector train{record("first", s, {1}), record("second", s, {2})};
    const auto out = icp_nn_predict(train, s, IcpConfig{});
    EXPECT_EQ(out.neighbor_id, "first");
    EXPECT_EQ(out.predicted, (ProductBasket{1}));
}

TEST(IcpNnPredict, EmptyTrainingSet) {
    EXPECT_THROW(icp_nn_predict(std::vector<LogRecord>{}, PointCloud({{0, 0, 0}}), IcpConfig{}), InvalidInput);
}

TEST(IcpNnPredict, TrainingOrderDoesNotMatter) {
    Rng rng(4);
    auto train = distinct_logs(rng, 8);
    const auto query = synth::jitter(rng, apply_transform(synth::random_transform(rng, 0.05, 10), train[5].scan), 0.5);
    const auto expected = icp_nn_predict(train, query, IcpConfig{});
    for (int round = 0; round < 3; ++round) {
        rng.shuffle(std::span<LogRecord>(train));
        const auto out = icp_nn_predict(train, query, IcpConfig{});
        EXPECT_EQ(out.predicted, expected.predicted);
        EXPECT_EQ(out.neighbor_id, expected.neighbor_id);
        EXPECT_EQ(out.distance, expected.distance);
    }
}

TEST(IcpNnPredict, InvariantToRigidMotionOfQuery) {
    Rng rng(5);
    const auto train = distinct_logs(rng, 6);
    for (std::size_t k = 0; k < train.size(); ++k) {
        const auto query = synth::jitter(rng, train[k].scan, 0.5);
        const IcpNearestNeighbor nn(train);
        const auto d = nn.distances(query, IcpConfig{});
        auto sorted = d;
        std::sort(sorted.begin(), sorted.end());
        bool gaps_ok = true;
        for (std::size_t i = 1; i < sorted.size(); ++i) gaps_ok = gaps_ok && sorted[i] - sorted[i - 1] > 1e-6;
        if (!gaps_ok) continue;
        const auto moved = apply_transform(synth::random_transform(rng, 0.05, 20), query);
        EXPECT_EQ(nn.predict(moved, IcpConfig{}).predicted, nn.predict(query, IcpConfig{}).predicted);
    }
}

TEST(IcpNearestNeighborTest, ParallelMatchesSerial) {
    Rng rng(6);
    const auto train = distinct_logs(rng, 7);
    std::vector<PointCloud> queries;
    for (int i = 0; i < 4; ++i) queries.push_back(synth::jitter(rng, train[rng.below(train.size())].scan, 1.0));
    const IcpNearestNeighbor serial(train, 1), parallel(train, 4);
    const auto a = serial.predict_all(queries, IcpConfig{}, 1);
    const auto b = parallel.predict_all(queries, IcpConfig{}, 4);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].predicted, b[i].predicted);
        EXPECT_EQ(a[i].neighbor_id, b[i].neighbor_id);
        EXPECT_EQ(a[i].distance, b[i].distance);
        EXPECT_EQ(serial.predict(queries[i], IcpConfig{}, 3).distance, a[i].distance);
    }
}

TEST(FeatureKnnTest, ExactCopyWithKOne) {
    const std::vector train{feature_record("a", {1, 10, 3, 2, 0.1}, {1, 0}),
                            feature_record("b", {5, 20, 4, 3, 0.05}, {0, 1}),
                            feature_record("c", {9, 30, 6, 4, 0.07}, {2, 2})};
    const auto out = knn_feature_predict(train, *train[1].features, 1);
    EXPECT_EQ(out.predicted, (ProductBasket{0, 1}));
    EXPECT_EQ(out.neighbor_id, "b");
    EXPECT_EQ(out.distance, 0.0);
}

TEST(FeatureKnnTest, AllNeighborsEqualsMean) {
    Rng rng(7);
    std::vector<LogRecord> train;
    for (int i = 0; i < 9; ++i) {
        const double w = rng.uniform(100, 300);
        train.push_back(feature_record("r" + std::to_string(i),
                                       {rng.uniform(1e7, 1e8), rng.uniform(2000, 5000), w, w * 0.8, 0.01},
                                       {Quantity(rng.below(5)), Quantity(rng.below(5)), Quantity(rng.below(5))}));
    }
    const LogFeatures q{5e7, 3000, 200, 150, 0.02};
    EXPECT_EQ(knn_feature_predict(train, q, train.size()).predicted, mean_predict(train));
}

TEST(FeatureKnnTest, TwoClusters) {
    Rng rng(8);
    std::vector<LogRecord> train;
    for (int i = 0; i < 10; ++i) {
        const bool first = i % 2 == 0;
        const double base = first ? 1.0 : 10.0;
        train.push_back(feature_record("r" + std::to_string(i),
                                       {base * 1e6 + rng.uniform(0, 1e4), base * 1000 + rng.uniform(0, 10),
                                        base * 20 + 1, base * 20, 0.001},
                                       first ? ProductBasket{3, 0} : ProductBasket{0, 3}));
    }
    const auto out = knn_feature_predict(train, {1.002e6, 1003, 21, 20, 0.001}, 3);
    EXPECT_EQ(out.predicted, (ProductBasket{3, 0}));
}

TEST(FeatureKnnTest, Errors) {
    const std::vector train{feature_record("a", {1, 10, 3, 2, 0.1}, {1})};
    EXPECT_THROW(knn_feature_predict(train, *train[0].features, 2), InvalidInput);
    EXPECT_THROW(knn_feature_predict(train, *train[0].features, 0), InvalidInput);
    const std::vector missing{record("a", PointCloud({{0, 0, 0}}), {1})};
    EXPECT_THROW(knn_feature_predict(missing, *train[0].features, 1), InvalidInput);
}

TEST(FeatureKnnTest, TiesAtKthDistanceResolveToLowestIndex) {
    const LogFeatures same{1, 10, 3, 2, 0.1};
    const std::vector train{feature_record("a", same, {1}), feature_record("b", same, {5}),
                            feature_record("c", {2, 20, 4, 2, 0.1}, {9})};
    const auto out = knn_feature_predict(train, same, 1);
    EXPECT_EQ(out.neighbor_id, "a");
    EXPECT_EQ(out.predicted, (ProductBasket{1}));
}

}  // namespace
}  // namespace logicp

#pragma once

#include <logicp/errors.hpp>
#include <logicp/random.hpp>
#include <logicp/records.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace logicp {

struct Dataset {
    std::vector<LogRecord> records;
    std::size_t product_count = 0;
    std::vector<std::string> product_names;  ///< empty, or product_count names

    std::size_t size() const { return records.size(); }

    void validate() const {
        if (!product_names.empty() && product_names.size() != product_count)
            throw InvalidInput("dataset has " + std::to_string(product_names.size()) + " product names for " +
                               std::to_string(product_count) + " products");
        std::set<std::string> seen;
        for (const auto& r : records) {
            if (r.basket.size() != product_count)
                throw InvalidInput("log '" + r.id + "' has a basket of length " + std::to_string(r.basket.size()) +
                                   ", expected " + std::to_string(product_count));
            if (!seen.insert(r.id).second) throw InvalidInput("duplicate log id '" + r.id + "'");
        }
    }

    /// Same products, no records.
    Dataset empty_like() const { return {{}, product_count, product_names}; }
};

struct SplitSpec {
    double train_fraction = 0.6;
    std::uint64_t seed = 0;
    int runs = 10;
    bool drop_empty_baskets = false;

    void validate() const {
        if (!(train_fraction > 0.0 && train_fraction < 1.0))
            throw InvalidInput("train fraction must lie strictly between 0 and 1");
        if (runs < 1) throw InvalidInput("runs must be at least 1");
    }
};

/// Record order after the seeded shuffle for one run.
inline std::vector<std::size_t> split_order(std::size_t n, std::uint64_t seed, int run_index) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed, static_cast<std::uint64_t>(run_index));
    rng.shuffle(std::span<std::size_t>(order));
    return order;
}

/// Seeded shuffle, then the first floor(n * train_fraction) records train.
inline std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec, int run_index) {
    spec.validate();
    if (run_index < 0 || run_index >= spec.runs)
        throw InvalidInput("run index " + std::to_string(run_index) + " outside [0, " + std::to_string(spec.runs) + ")");
    if (ds.size() < 2) throw InvalidInput("cannot split a dataset of fewer than 2 records");

    const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(ds.size()) * spec.train_fraction));
    if (n_train == 0 || n_train == ds.size())
        throw InvalidInput("train fraction leaves the training or test set empty");

    const auto order = split_order(ds.size(), spec.seed, run_index);
    auto train = ds.empty_like();
    auto test = ds.empty_like();
    train.records.reserve(n_train);
    test.records.reserve(ds.size() - n_train);
    for (std::size_t i = 0; i < order.size(); ++i)
        (i < n_train ? train : test).records.push_back(ds.records[order[i]]);
    return {std::move(train), std::move(test)};
}

/// Removes logs whose basket is all zero.
inline Dataset drop_empty(const Dataset& ds) {
    auto out = ds.empty_like();
    for (const auto& r : ds.records)
        if (!r.basket.is_empty()) out.records.push_back(r);
    return out;
}

}  // namespace logicp

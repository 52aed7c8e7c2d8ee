#pragma once

#include <logicp/errors.hpp>
#include <logicp/geometry.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace logicp {

using Quantity = std::int64_t;

/// Quantity of each product obtained from one log. Entries are >= 0.
class ProductBasket {
public:
    ProductBasket() = default;
    explicit ProductBasket(std::vector<Quantity> quantities) : q_(std::move(quantities)) {
        for (std::size_t j = 0; j < q_.size(); ++j)
            if (q_[j] < 0) throw InvalidInput("basket quantity " + std::to_string(j) + " is negative");
    }
    ProductBasket(std::initializer_list<Quantity> quantities) : ProductBasket(std::vector<Quantity>(quantities)) {}

    std::size_t size() const { return q_.size(); }
    Quantity operator[](std::size_t j) const { return q_[j]; }
    std::span<const Quantity> quantities() const { return q_; }

    /// All-zero basket: the log yields only chips.
    bool is_empty() const {
        for (auto v : q_)
            if (v != 0) return false;
        return true;
    }

    friend bool operator==(const ProductBasket&, const ProductBasket&) = default;

private:
    std::vector<Quantity> q_;
};

/// Componentwise mean of `baskets`, each rounded half-up to an integer.
/// Exact integer arithmetic: floor((2 * sum + n) / (2 * n)).
inline ProductBasket rounded_mean(std::span<const ProductBasket* const> baskets) {
    if (baskets.empty()) throw InvalidInput("mean of zero baskets");
    const std::size_t p = baskets.front()->size();
    std::vector<Quantity> sum(p, 0);
    for (const auto* b : baskets) {
        if (b->size() != p) throw InvalidInput("baskets have different lengths");
        for (std::size_t j = 0; j < p; ++j) sum[j] += (*b)[j];
    }
    const auto n = static_cast<Quantity>(baskets.size());
    for (auto& s : sum) s = (2 * s + n) / (2 * n);
    return ProductBasket(std::move(sum));
}

/// Summary shape descriptors of a log scan.
struct LogFeatures {
    double volume = 0.0;               ///< mm^3
    double length = 0.0;               ///< mm
    double wide_end_diameter = 0.0;    ///< mm
    double narrow_end_diameter = 0.0;  ///< mm
    double taper = 0.0;                ///< (wide - narrow) / length

    static constexpr std::size_t kCount = 5;

    std::array<double, kCount> as_array() const {
        return {volume, length, wide_end_diameter, narrow_end_diameter, taper};
    }

    void validate() const {
        for (double v : as_array())
            if (!std::isfinite(v)) throw InvalidInput("log features must be finite");
        if (!(length > 0.0)) throw InvalidInput("log length must be positive");
        if (!(wide_end_diameter >= narrow_end_diameter && narrow_end_diameter >= 0.0))
            throw InvalidInput("log end diameters must satisfy wide >= narrow >= 0");
    }
};

struct LogRecord {
    std::string id;
    PointCloud scan;
    ProductBasket basket;
    std::optional<LogFeatures> features;
};

}  // namespace logicp

/*******************************************************************************
 * include/rmat/alias.hpp
 *
 * Walker's alias method with Vose's two-worklist construction: O(n) build,
 * O(1) sampling from any finite discrete distribution.
 ******************************************************************************/
#pragma once

#include <rmat/error.hpp>

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace rmat {

/// One uniform 64-bit draw split into a bucket index in [0, size) and a
/// fraction in [0, 1): the 128-bit product draw * size holds the index in
/// its high word and the fractional part in its low word.
struct SplitDraw {
    uint64_t index;
    double fraction;
};

inline SplitDraw split_draw(uint64_t draw, uint64_t size) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(draw) * size;
    return {static_cast<uint64_t>(prod >> 64),
            static_cast<double>(static_cast<uint64_t>(prod) >> 11) * 0x1.0p-53};
}

class AliasTable {
public:
    struct Bucket {
        /// probability of keeping this bucket's own index
        double threshold;
        uint32_t alias;

        friend bool operator==(const Bucket&, const Bucket&) = default;
    };

    AliasTable() = default;

    explicit AliasTable(std::span<const double> weights) { build(weights); }

    size_t size() const { return buckets_.size(); }
    double total_weight() const { return total_weight_; }
    const std::vector<Bucket>& buckets() const { return buckets_; }

    size_t sample(uint64_t index_part, double fraction_part) const {
        const Bucket& b = buckets_[index_part];
        return fraction_part < b.threshold ? index_part : b.alias;
    }

    size_t sample(uint64_t draw) const {
        const SplitDraw s = split_draw(draw, buckets_.size());
        return sample(s.index, s.fraction);
    }

    /// Probability mass each index receives under `sample`.
    std::vector<double> reconstruct() const {
        const double n = static_cast<double>(buckets_.size());
        std::vector<double> mass(buckets_.size(), 0.0);
        for (size_t i = 0; i < buckets_.size(); ++i) {
            mass[i] += buckets_[i].threshold / n;
            mass[buckets_[i].alias] += (1.0 - buckets_[i].threshold) / n;
        }
        return mass;
    }

    friend bool operator==(const AliasTable&, const AliasTable&) = default;

private:
    void build(std::span<const double> weights) {
        if (weights.empty())
            throw error(errc::empty_input, "alias table needs at least one weight");
        double total = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw error(errc::negative_weight, "weights must be finite and >= 0");
            total += w;
        }
        if (total <= 0.0)
            throw error(errc::all_zero_weights, "at least one weight must be > 0");

        const size_t n = weights.size();
        total_weight_ = total;
        buckets_.assign(n, Bucket{1.0, 0});

        std::vector<double> scaled(n);
        std::vector<uint32_t> small, large;
        small.reserve(n);
        large.reserve(n);
        const double scale = static_cast<double>(n) / total;
        for (size_t i = 0; i < n; ++i) {
            scaled[i] = weights[i] * scale;
            buckets_[i].alias = static_cast<uint32_t>(i);
            // ties with the average count as large
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<uint32_t>(i));
        }

        while (!small.empty() && !large.empty()) {
            const uint32_t s = small.back();
            small.pop_back();
            const uint32_t l = large.back();
            buckets_[s] = {scaled[s] > 0.0 ? scaled[s] : 0.0, l};
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        // Whatever remains is 1 up to rounding and keeps its own index.
        for (uint32_t l : large)
            buckets_[l] = {1.0, l};
        for (uint32_t s : small)
            buckets_[s] = {1.0, s};
    }

    std::vector<Bucket> buckets_;
    double total_weight_ = 0.0;
};

inline AliasTable build_alias(std::span<const double> weights) {
    return AliasTable(weights);
}

} // namespace rmat

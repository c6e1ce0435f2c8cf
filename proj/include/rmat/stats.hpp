/*******************************************************************************
 * include/rmat/stats.hpp
 *
 * Statistical verification: exact adjacency cell probabilities for small k,
 * Pearson chi-square goodness of fit, and degree summaries.
 ******************************************************************************/
#pragma once

#include <rmat/edge.hpp>
#include <rmat/error.hpp>
#include <rmat/params.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace rmat {

inline constexpr int kMaxEnumerationBits = 12;
inline constexpr double kDefaultAlpha = 1e-3;

/// Probability of every adjacency cell, indexed by (u << k) | v.
inline std::vector<double> exact_cell_probs(const RmatParams& params, int k) {
    if (k < 0 || k > kMaxEnumerationBits)
        throw error(errc::k_too_large_for_enumeration,
                    "k = " + std::to_string(k) + " exceeds " + std::to_string(kMaxEnumerationBits));
    const auto q = params.quadrants();
    const uint64_t side = uint64_t{1} << k;
    std::vector<double> probs(side * side);
    for (uint64_t u = 0; u < side; ++u) {
        for (uint64_t v = 0; v < side; ++v) {
            double p = 1.0;
            for (int bit = k - 1; bit >= 0; --bit)
                p *= q[((u >> bit) & 1) << 1 | ((v >> bit) & 1)];
            probs[(u << k) | v] = p;
        }
    }
    return probs;
}

/// Edge counts per adjacency cell of a 2^k-node graph.
class CellHistogram {
public:
    explicit CellHistogram(int k) : k_(k) {
        if (k < 0 || k > kMaxEnumerationBits)
            throw error(errc::k_too_large_for_enumeration,
                        "histogram k = " + std::to_string(k) + " too large");
        counts_.assign(uint64_t{1} << (2 * k), 0);
    }

    void add(Edge e) {
        ++counts_[(e.u << k_) | e.v];
        ++total_;
    }
    void operator()(Edge e) { add(e); }

    void merge(const CellHistogram& other) {
        for (size_t i = 0; i < counts_.size(); ++i)
            counts_[i] += other.counts_[i];
        total_ += other.total_;
    }

    int k() const { return k_; }
    uint64_t total() const { return total_; }
    const std::vector<uint64_t>& counts() const { return counts_; }

private:
    int k_;
    std::vector<uint64_t> counts_;
    uint64_t total_ = 0;
};

/// Standard normal quantile (Acklam's rational approximation, relative error
/// below 1.2e-9).
inline double normal_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double low = 0.02425;
    if (p < low) {
        const double q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > 1 - low)
        return -normal_quantile(1 - p);
    const double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

/// Upper-alpha quantile of the chi-square distribution (Wilson-Hilferty).
inline double chi_square_quantile(double dof, double alpha) {
    const double z = normal_quantile(1.0 - alpha);
    const double h = 2.0 / (9.0 * dof);
    const double base = 1.0 - h + z * std::sqrt(h);
    return dof * base * base * base;
}

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double threshold = 0.0;
    bool pass = false;
};

/// Pearson chi-square of observed counts against expected probabilities.
/// Cells with zero expected probability must be empty and do not count
/// towards the degrees of freedom.
inline ChiSquareResult chi_square(std::span<const uint64_t> observed,
                                  std::span<const double> expected,
                                  double alpha = kDefaultAlpha) {
    if (observed.size() != expected.size() || expected.size() < 2)
        throw error(errc::invalid_expected_vector, "observed/expected size mismatch");
    double sum = 0.0, min_positive = 1.0;
    for (double p : expected) {
        if (!(p >= 0.0))
            throw error(errc::invalid_expected_vector, "negative expected probability");
        sum += p;
        if (p > 0.0)
            min_positive = std::min(min_positive, p);
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw error(errc::invalid_expected_vector, "expected probabilities sum to " + std::to_string(sum));
    const uint64_t total = std::accumulate(observed.begin(), observed.end(), uint64_t{0});
    if (static_cast<double>(total) < 5.0 / min_positive)
        throw error(errc::sample_too_small,
                    std::to_string(total) + " observations; need " + std::to_string(5.0 / min_positive));

    ChiSquareResult r;
    int cells = 0;
    for (size_t i = 0; i < observed.size(); ++i) {
        const double e = static_cast<double>(total) * expected[i];
        if (e == 0.0) {
            if (observed[i] != 0)
                r.statistic = INFINITY;
            continue;
        }
        const double diff = static_cast<double>(observed[i]) - e;
        r.statistic += diff * diff / e;
        ++cells;
    }
    r.dof = cells - 1;
    r.threshold = chi_square_quantile(r.dof, alpha);
    r.pass = r.statistic < r.threshold;
    return r;
}

inline ChiSquareResult chi_square(const CellHistogram& observed, std::span<const double> expected,
                                  double alpha = kDefaultAlpha) {
    return chi_square(std::span<const uint64_t>(observed.counts()), expected, alpha);
}

struct PooledCells {
    std::vector<uint64_t> observed;
    std::vector<double> expected;
};

/// Merges all cells whose expected count falls below `min_count` into a
/// single bin, adding the next-smallest cells until that bin also reaches
/// `min_count`. Makes skewed distributions testable at modest sample sizes.
inline PooledCells pool_sparse_cells(std::span<const uint64_t> observed,
                                     std::span<const double> expected, double min_count = 5.0) {
    const double total =
        static_cast<double>(std::accumulate(observed.begin(), observed.end(), uint64_t{0}));
    std::vector<size_t> order(expected.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t x, size_t y) { return expected[x] < expected[y]; });

    PooledCells out;
    uint64_t pool_obs = 0;
    double pool_exp = 0.0;
    size_t i = 0;
    for (; i < order.size() && total * expected[order[i]] < min_count; ++i) {
        pool_obs += observed[order[i]];
        pool_exp += expected[order[i]];
    }
    if (i > 0) {
        for (; i < order.size() && total * pool_exp < min_count; ++i) {
            pool_obs += observed[order[i]];
            pool_exp += expected[order[i]];
        }
        out.observed.push_back(pool_obs);
        out.expected.push_back(pool_exp);
    }
    for (; i < order.size(); ++i) {
        out.observed.push_back(observed[order[i]]);
        out.expected.push_back(expected[order[i]]);
    }
    return out;
}

/// chi_square after pooling sparse cells.
inline ChiSquareResult pooled_chi_square(std::span<const uint64_t> observed,
                                         std::span<const double> expected,
                                         double alpha = kDefaultAlpha) {
    const PooledCells pooled = pool_sparse_cells(observed, expected);
    return chi_square(pooled.observed, pooled.expected, alpha);
}

struct DegreeStats {
    /// out-degree -> number of nodes with that out-degree
    std::map<uint64_t, uint64_t> out_degree_histogram;
    uint64_t max_out_degree = 0;
    /// nodes with neither incoming nor outgoing edges
    uint64_t isolated = 0;
};

inline DegreeStats degree_stats(std::span<const Edge> edges, int k) {
    const uint64_t n = uint64_t{1} << k;
    std::vector<uint64_t> out_deg(n, 0);
    std::vector<bool> touched(n, false);
    for (const Edge& e : edges) {
        ++out_deg[e.u];
        touched[e.u] = true;
        touched[e.v] = true;
    }
    DegreeStats s;
    for (uint64_t node = 0; node < n; ++node) {
        ++s.out_degree_histogram[out_deg[node]];
        s.max_out_degree = std::max(s.max_out_degree, out_deg[node]);
        if (!touched[node])
            ++s.isolated;
    }
    return s;
}

/// Nodes per unit degree in geometric buckets [2^i, 2^(i+1)), for degrees >= 1.
inline std::vector<double> log_binned_density(const DegreeStats& s) {
    std::vector<double> density;
    for (const auto& [degree, nodes] : s.out_degree_histogram) {
        if (degree == 0)
            continue;
        const size_t bucket = static_cast<size_t>(std::bit_width(degree) - 1);
        if (density.size() <= bucket)
            density.resize(bucket + 1, 0.0);
        density[bucket] += static_cast<double>(nodes);
    }
    for (size_t b = 0; b < density.size(); ++b)
        density[b] /= static_cast<double>(uint64_t{1} << b);
    return density;
}

} // namespace rmat

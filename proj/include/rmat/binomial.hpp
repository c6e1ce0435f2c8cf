/*******************************************************************************
 * include/rmat/binomial.hpp
 *
 * Binomial variates by inversion. Small means walk the CDF up from zero;
 * larger ones start at the mode and search outwards alternately, so the
 * expected work is O(sqrt(n p (1-p))). Both are exact up to double rounding
 * and consume draws only from the supplied stream.
 ******************************************************************************/
#pragma once

#include <rmat/random.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace rmat {

namespace detail {

inline double log_binomial_pmf(uint64_t n, uint64_t x, double p) {
    const double nn = static_cast<double>(n), xx = static_cast<double>(x);
    return std::lgamma(nn + 1) - std::lgamma(xx + 1) - std::lgamma(nn - xx + 1) +
           xx * std::log(p) + (nn - xx) * std::log1p(-p);
}

// Requires p <= 0.5.
inline uint64_t binomial_from_zero(uint64_t n, double p, stream& rng) {
    const double ratio = p / (1.0 - p);
    double u = rng.next_double();
    double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
    for (uint64_t x = 0; x < n; ++x) {
        if (u < pmf)
            return x;
        u -= pmf;
        pmf *= ratio * static_cast<double>(n - x) / static_cast<double>(x + 1);
    }
    return n;
}

// Requires 0 < p <= 0.5.
inline uint64_t binomial_from_mode(uint64_t n, double p, stream& rng) {
    const double ratio = p / (1.0 - p);
    const uint64_t mode =
        std::min(n, static_cast<uint64_t>(std::floor((static_cast<double>(n) + 1) * p)));
    const double pmf_mode = std::exp(log_binomial_pmf(n, mode, p));
    double u = rng.next_double();
    if (u < pmf_mode)
        return mode;
    u -= pmf_mode;

    // pmf(x+1)/pmf(x) = ratio (n-x)/(x+1)
    uint64_t hi = mode, lo = mode;
    double pmf_hi = pmf_mode, pmf_lo = pmf_mode;
    bool hi_open = mode < n, lo_open = mode > 0;
    while (hi_open || lo_open) {
        if (hi_open) {
            pmf_hi *= ratio * static_cast<double>(n - hi) / static_cast<double>(hi + 1);
            ++hi;
            if (u < pmf_hi)
                return hi;
            u -= pmf_hi;
            hi_open = hi < n && pmf_hi > 0.0;
        }
        if (lo_open) {
            pmf_lo *= static_cast<double>(lo) / (ratio * static_cast<double>(n - lo + 1));
            --lo;
            if (u < pmf_lo)
                return lo;
            u -= pmf_lo;
            lo_open = lo > 0 && pmf_lo > 0.0;
        }
    }
    // mass lost to rounding
    return mode;
}

} // namespace detail

/// Bin(n, p) variate drawn from `rng`.
inline uint64_t binomial(uint64_t n, double p, stream& rng) {
    if (n == 0 || p <= 0.0)
        return 0;
    if (p >= 1.0)
        return n;
    if (p > 0.5)
        return n - binomial(n, 1.0 - p, rng);
    if (static_cast<double>(n) * p < 30.0)
        return detail::binomial_from_zero(n, p, rng);
    return detail::binomial_from_mode(n, p, rng);
}

} // namespace rmat

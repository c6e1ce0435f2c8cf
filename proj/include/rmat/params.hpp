/*******************************************************************************
 * include/rmat/params.hpp
 *
 * R-MAT model parameters: quadrant probabilities and the node-count exponent
 ******************************************************************************/
#pragma once

#include <rmat/error.hpp>

#include <array>
#include <cmath>
#include <string>

namespace rmat {

/// Quadrant probabilities (a: upper left, b: upper right, c: lower left,
/// d: lower right) and k, the number of bits in a row/column index.
/// Only `validate` produces instances that the rest of the library accepts.
struct RmatParams {
    double a = 0.25, b = 0.25, c = 0.25, d = 0.25;
    int k = 1;

    /// Probabilities indexed by quadrant digit 2*row_bit + col_bit.
    constexpr std::array<double, 4> quadrants() const { return {a, b, c, d}; }

    friend bool operator==(const RmatParams&, const RmatParams&) = default;
};

inline constexpr double kSumTolerance = 1e-9;
inline constexpr int kMaxExponent = 62;

inline RmatParams validate(double a, double b, double c, double d, int k) {
    const std::array<double, 4> raw{a, b, c, d};
    for (double p : raw) {
        // !(p > 0) also catches NaN
        if (!(p > 0.0) || !std::isfinite(p))
            throw error(errc::negative_or_zero_weight,
                        "quadrant probabilities must be finite and > 0");
    }
    const double sum = ((a + b) + c) + d;
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw error(errc::sum_out_of_tolerance,
                    "a+b+c+d = " + std::to_string(sum) + " is not 1");
    if (k < 1 || k > kMaxExponent)
        throw error(errc::bad_exponent,
                    "k = " + std::to_string(k) + " outside [1, 62]");

    RmatParams p;
    p.a = a / sum;
    p.b = b / sum;
    p.c = c / sum;
    // d absorbs the rounding so that ((a+b)+c)+d == 1 exactly
    const double abc = (p.a + p.b) + p.c;
    p.d = 1.0 - abc;
    for (int guard = 0; guard < 8 && abc + p.d != 1.0; ++guard)
        p.d = std::nextafter(p.d, abc + p.d < 1.0 ? 2.0 : 0.0);
    p.k = k;
    return p;
}

inline RmatParams validate(const RmatParams& p) {
    return validate(p.a, p.b, p.c, p.d, p.k);
}

/// The Graph 500 benchmark parameters.
inline RmatParams graph500_params(int k) {
    return validate(0.57, 0.19, 0.19, 0.05, k);
}

/// Bits of index information produced per recursion level.
inline double entropy(const RmatParams& p) {
    double h = 0.0;
    for (double q : p.quadrants())
        h -= q * std::log2(q);
    return h;
}

/// How many times fewer samples a variable-depth table needs compared to
/// a fixed-depth table of the same size, asymptotically: 2 / H.
inline double speedup_bound(const RmatParams& p) {
    return 2.0 / entropy(p);
}

} // namespace rmat

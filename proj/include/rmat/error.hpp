/*******************************************************************************
 * include/rmat/error.hpp
 *
 * Error type shared by all rmat components
 ******************************************************************************/
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmat {

enum class errc {
    negative_or_zero_weight,
    sum_out_of_tolerance,
    bad_exponent,
    empty_input,
    all_zero_weights,
    negative_weight,
    depth_out_of_range,
    size_limit_too_small,
    noise_out_of_range,
    edge_outside_declared_tile,
    count_overflows_tile,
    k_too_large_for_enumeration,
    invalid_expected_vector,
    sample_too_small,
    invalid_config,
    io_error,
};

constexpr std::string_view to_string(errc code) {
    switch (code) {
    case errc::negative_or_zero_weight: return "NegativeOrZeroWeight";
    case errc::sum_out_of_tolerance: return "SumOutOfTolerance";
    case errc::bad_exponent: return "BadExponent";
    case errc::empty_input: return "EmptyInput";
    case errc::all_zero_weights: return "AllZeroWeights";
    case errc::negative_weight: return "NegativeWeight";
    case errc::depth_out_of_range: return "DepthOutOfRange";
    case errc::size_limit_too_small: return "SizeLimitTooSmall";
    case errc::noise_out_of_range: return "NoiseOutOfRange";
    case errc::edge_outside_declared_tile: return "EdgeOutsideDeclaredTile";
    case errc::count_overflows_tile: return "CountOverflowsTile";
    case errc::k_too_large_for_enumeration: return "KTooLargeForEnumeration";
    case errc::invalid_expected_vector: return "InvalidExpectedVector";
    case errc::sample_too_small: return "SampleTooSmall";
    case errc::invalid_config: return "InvalidConfig";
    case errc::io_error: return "IoError";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace rmat

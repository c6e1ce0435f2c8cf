/*******************************************************************************
 * include/rmat/edge.hpp
 ******************************************************************************/
#pragma once

#include <rmat/random.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>

namespace rmat {

/// Directed edge (row u, column v) of the adjacency matrix.
struct Edge {
    uint64_t u = 0;
    uint64_t v = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeHash {
    size_t operator()(const Edge& e) const noexcept {
        return static_cast<size_t>(mix64(e.u * 0x9e3779b97f4a7c15ULL ^ mix64(e.v)));
    }
};

} // namespace rmat

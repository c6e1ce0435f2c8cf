/*******************************************************************************
 * include/rmat/postprocess.hpp
 *
 * Constant-time per-edge postprocessing: clip-and-flip for undirected graphs,
 * seeded vertex ID scrambling, and duplicate removal scoped to one block or
 * tile.
 ******************************************************************************/
#pragma once

#include <rmat/edge.hpp>
#include <rmat/error.hpp>
#include <rmat/params.hpp>
#include <rmat/random.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace rmat {

/// Maps an edge into the lower-left triangle (u >= v).
constexpr Edge to_undirected(Edge e) {
    return e.u >= e.v ? e : Edge{e.v, e.u};
}

/// Symmetric companion mode: both orientations, self loops once.
template <typename Sink>
void emit_symmetric(Edge e, Sink&& sink) {
    sink(e);
    if (e.u != e.v)
        sink(Edge{e.v, e.u});
}

/// Mirroring changes the degree distribution asymmetrically unless b == c.
inline std::optional<std::string> undirected_warning(const RmatParams& p) {
    if (std::abs(p.b - p.c) > 1e-12)
        return "warning: undirected output with b != c mixes two different marginals";
    return std::nullopt;
}

/// Key material for a seeded bijection on [0, 2^k).
class ScrambleKey {
public:
    static constexpr int rounds = 4;

    ScrambleKey(uint64_t seed, int k) : seed_(seed), k_(k) {
        mask_ = k >= 64 ? ~uint64_t{0} : (uint64_t{1} << k) - 1;
        uint64_t state = mix64(seed ^ (static_cast<uint64_t>(k) << 56));
        for (Round& r : rounds_) {
            state = mix64(state + stream::gamma);
            r.mul = (state | 1) & mask_;
            r.mul_inv = inverse_odd(state | 1) & mask_;
            state = mix64(state + stream::gamma);
            r.add = state & mask_;
            state = mix64(state + stream::gamma);
            r.shift = k > 1 ? 1 + static_cast<int>(state % static_cast<uint64_t>(k - 1)) : 1;
            r.rot = static_cast<int>((state >> 32) % static_cast<uint64_t>(k));
        }
    }

    uint64_t seed() const { return seed_; }
    int k() const { return k_; }

    uint64_t scramble(uint64_t x) const {
        for (const Round& r : rounds_) {
            x = (x * r.mul) & mask_;
            x ^= x >> r.shift;
            x = rotl(x, r.rot);
            x = (x + r.add) & mask_;
        }
        return x;
    }

    uint64_t unscramble(uint64_t x) const {
        for (auto it = rounds_.rbegin(); it != rounds_.rend(); ++it) {
            const Round& r = *it;
            x = (x - r.add) & mask_;
            x = rotl(x, r.rot == 0 ? 0 : k_ - r.rot);
            uint64_t y = x;
            for (int s = r.shift; s < k_; s += r.shift)
                y = x ^ (y >> r.shift);
            x = (y * r.mul_inv) & mask_;
        }
        return x;
    }

private:
    struct Round {
        uint64_t mul, mul_inv, add;
        int shift, rot;
    };

    // Newton iteration: each step doubles the number of correct low bits.
    static constexpr uint64_t inverse_odd(uint64_t a) {
        uint64_t x = a;
        for (int i = 0; i < 5; ++i)
            x *= 2 - a * x;
        return x;
    }

    uint64_t rotl(uint64_t x, int r) const {
        if (r == 0)
            return x;
        return ((x << r) | (x >> (k_ - r))) & mask_;
    }

    uint64_t seed_;
    int k_;
    uint64_t mask_;
    std::array<Round, rounds> rounds_{};
};

inline uint64_t scramble(uint64_t v, const ScrambleKey& key) {
    return key.scramble(v);
}

inline Edge scramble(Edge e, const ScrambleKey& key) {
    return {key.scramble(e.u), key.scramble(e.v)};
}

/// Half-open row and column ranges of one tile or block.
struct TileBounds {
    uint64_t row_begin = 0, row_end = 0;
    uint64_t col_begin = 0, col_end = 0;

    static TileBounds whole(int k) {
        const uint64_t n = uint64_t{1} << k;
        return {0, n, 0, n};
    }

    bool contains(Edge e) const {
        return e.u >= row_begin && e.u < row_end && e.v >= col_begin && e.v < col_end;
    }
};

/// Drops repeated edges, keeping first occurrences in order.
inline std::vector<Edge> dedup_local(std::span<const Edge> edges, const TileBounds& tile) {
    std::unordered_set<Edge, EdgeHash> seen;
    seen.reserve(edges.size());
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const Edge& e : edges) {
        if (!tile.contains(e))
            throw error(errc::edge_outside_declared_tile,
                        "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") outside declared tile");
        if (seen.insert(e).second)
            out.push_back(e);
    }
    return out;
}

inline void dedup_in_place(std::vector<Edge>& edges) {
    std::unordered_set<Edge, EdgeHash> seen;
    seen.reserve(edges.size());
    auto end = std::remove_if(edges.begin(), edges.end(),
                              [&seen](const Edge& e) { return !seen.insert(e).second; });
    edges.erase(end, edges.end());
}

/// Per-edge stages in the order they are applied.
struct Pipeline {
    bool undirected = false;
    bool symmetric = false;
    std::optional<ScrambleKey> scramble;
    bool dedup = false;

    /// Applies the stages to one block or tile in place.
    void apply(std::vector<Edge>& edges) const {
        if (undirected) {
            for (Edge& e : edges)
                e = to_undirected(e);
        }
        if (symmetric) {
            std::vector<Edge> both;
            both.reserve(2 * edges.size());
            for (const Edge& e : edges)
                emit_symmetric(e, [&both](Edge x) { both.push_back(x); });
            edges = std::move(both);
        }
        if (scramble) {
            for (Edge& e : edges)
                e = rmat::scramble(e, *scramble);
        }
        if (dedup)
            dedup_in_place(edges);
    }
};

} // namespace rmat

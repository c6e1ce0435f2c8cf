/*******************************************************************************
 * include/rmat/partition.hpp
 *
 * Communication-free partitioned generation. The adjacency matrix is cut
 * into 2^t x 2^t square tiles; the number of edges in each tile follows from
 * recursive multinomial splitting of m along the first t recursion levels,
 * where every recursion node draws from a stream keyed by its own path. Any
 * part can therefore recompute the counts of the tiles it owns without
 * talking to other parts, and generates those tiles' edges locally.
 ******************************************************************************/
#pragma once

#include <rmat/binomial.hpp>
#include <rmat/edge.hpp>
#include <rmat/error.hpp>
#include <rmat/generator.hpp>
#include <rmat/params.hpp>
#include <rmat/postprocess.hpp>
#include <rmat/random.hpp>
#include <rmat/table.hpp>

#include <array>
#include <atomic>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace rmat {

namespace detail {
inline constexpr uint64_t kSplitTag = 0x73706c6974ULL; // "split"
inline constexpr uint64_t kTileTag = 0x74696c65ULL;    // "tile"
} // namespace detail

/// A node of the 4-ary recursion tree: the first `depth` row and column bits.
struct RecursionNode {
    int depth = 0;
    uint64_t row_prefix = 0;
    uint64_t col_prefix = 0;

    RecursionNode child(unsigned digit) const {
        return {depth + 1, (row_prefix << 1) | (digit >> 1), (col_prefix << 1) | (digit & 1)};
    }
};

inline stream node_stream(uint64_t seed, const RecursionNode& node) {
    return stream::keyed({seed, detail::kSplitTag, static_cast<uint64_t>(node.depth),
                          node.row_prefix, node.col_prefix});
}

/// Multinomial(count; a, b, c, d) as three conditional binomials.
inline std::array<uint64_t, 4> split_quadrant_counts(uint64_t count, const RmatParams& p,
                                                     stream rng) {
    const uint64_t na = binomial(count, p.a, rng);
    const uint64_t nb = binomial(count - na, p.b / (p.b + p.c + p.d), rng);
    const uint64_t nc = binomial(count - na - nb, p.c / (p.c + p.d), rng);
    return {na, nb, nc, count - na - nb - nc};
}

inline std::array<uint64_t, 4> split_quadrant_counts(uint64_t count, const RmatParams& p,
                                                     uint64_t seed, const RecursionNode& node) {
    return split_quadrant_counts(count, p, node_stream(seed, node));
}

struct TileCount {
    uint64_t tile_row = 0;
    uint64_t tile_col = 0;
    uint64_t count = 0;

    friend bool operator==(const TileCount&, const TileCount&) = default;
};

struct RowRange {
    uint64_t begin = 0, end = 0;

    bool intersects(uint64_t b, uint64_t e) const { return b < end && begin < e; }
};

struct PartitionPlan {
    RmatParams params;
    int k = 1;
    int tile_bits = 0;
    uint64_t edges = 0;
    uint64_t seed = 0;
    unsigned parts = 1;

    uint64_t tiles_per_side() const { return uint64_t{1} << tile_bits; }

    void check() const {
        if (tile_bits < 0 || tile_bits > k)
            throw error(errc::invalid_config, "tile bits must lie in [0, k]");
        if (parts < 1)
            throw error(errc::invalid_config, "need at least one part");
    }

    /// Contiguous, balanced tile-row range owned by `part`.
    RowRange owned_rows(unsigned part) const {
        const auto side = static_cast<unsigned __int128>(tiles_per_side());
        return {static_cast<uint64_t>(side * part / parts),
                static_cast<uint64_t>(side * (part + 1) / parts)};
    }
};

/// Counts of the tiles in `part`'s rows, ordered by (tile_row, tile_col).
/// Subtrees whose tile rows miss the owned range are never visited.
/// `visited` receives the number of recursion nodes split.
inline std::vector<TileCount> plan_tiles(const PartitionPlan& plan, unsigned part,
                                         uint64_t* visited = nullptr) {
    plan.check();
    const RowRange owned = plan.owned_rows(part);
    const int t = plan.tile_bits;
    std::vector<TileCount> tiles;
    uint64_t splits = 0;

    auto recurse = [&](auto&& self, const RecursionNode& node, uint64_t count) -> void {
        if (node.depth == t) {
            tiles.push_back({node.row_prefix, node.col_prefix, count});
            return;
        }
        ++splits;
        const auto counts = split_quadrant_counts(count, plan.params, plan.seed, node);
        // rows are the outer order: upper quadrants (a, b) before lower (c, d)
        for (unsigned digit = 0; digit < 4; ++digit) {
            const RecursionNode c = node.child(digit);
            const int below = t - c.depth;
            if (owned.intersects(c.row_prefix << below, (c.row_prefix + 1) << below))
                self(self, c, counts[digit]);
        }
    };
    if (owned.begin < owned.end)
        recurse(recurse, RecursionNode{}, plan.edges);

    std::sort(tiles.begin(), tiles.end(), [](const TileCount& x, const TileCount& y) {
        return std::pair(x.tile_row, x.tile_col) < std::pair(y.tile_row, y.tile_col);
    });
    if (visited)
        *visited = splits;
    return tiles;
}

enum class TileDedup {
    none,
    /// drop repeated edges: the tile may end up with fewer than `count` edges
    drop,
    /// resample repeated cells until `count` distinct edges exist
    resample,
};

inline stream tile_stream(uint64_t seed, uint64_t tile_row, uint64_t tile_col, uint64_t block) {
    return stream::keyed({seed, detail::kTileTag, tile_row, tile_col, block});
}

/// The edges of one tile. Within the tile the remaining k - t levels follow
/// the unconditioned R-MAT process, generated with the same fragment table.
inline std::vector<Edge> generate_tile(const TileCount& tile, const FragmentTable& table, int k,
                                       int t, uint64_t seed, TileDedup dedup = TileDedup::none,
                                       uint64_t block_size = kDefaultBlockSize,
                                       uint64_t* samples = nullptr) {
    const int local_k = k - t;
    const uint64_t row_base = tile.tile_row << local_k;
    const uint64_t col_base = tile.tile_col << local_k;
    std::vector<Edge> out;
    uint64_t used = 0;

    if (dedup == TileDedup::resample) {
        const bool overflow = local_k < 31 && tile.count > (uint64_t{1} << (2 * local_k));
        if (overflow)
            throw error(errc::count_overflows_tile,
                        std::to_string(tile.count) + " distinct edges requested from a tile of " +
                            std::to_string(uint64_t{1} << (2 * local_k)) + " cells");
    }

    if (local_k == 0) {
        const uint64_t n = dedup == TileDedup::none ? tile.count : std::min<uint64_t>(tile.count, 1);
        out.assign(n, Edge{row_base, col_base});
        return out;
    }

    out.reserve(tile.count);
    if (dedup == TileDedup::resample) {
        std::unordered_set<Edge, EdgeHash> seen;
        seen.reserve(tile.count);
        for (uint64_t block = 0; out.size() < tile.count; ++block) {
            stream rng = tile_stream(seed, tile.tile_row, tile.tile_col, block);
            used += emit_edges(table, local_k, block_size, rng, [&](Edge e) {
                const Edge g{row_base + e.u, col_base + e.v};
                if (out.size() < tile.count && seen.insert(g).second)
                    out.push_back(g);
            });
        }
        if (samples)
            *samples = used;
        return out;
    }

    for (uint64_t block = 0; block * block_size < tile.count; ++block) {
        stream rng = tile_stream(seed, tile.tile_row, tile.tile_col, block);
        const uint64_t n = std::min(block_size, tile.count - block * block_size);
        used += emit_edges(table, local_k, n, rng, [&](Edge e) {
            out.push_back({row_base + e.u, col_base + e.v});
        });
    }
    if (dedup == TileDedup::drop) {
        const uint64_t side = uint64_t{1} << local_k;
        out = dedup_local(out, TileBounds{row_base, row_base + side, col_base, col_base + side});
    }
    if (samples)
        *samples = used;
    return out;
}

/// Everything part `part` generates: its tiles' edges in tile order.
inline std::vector<Edge> generate_part(const PartitionPlan& plan, unsigned part,
                                       const FragmentTable& table,
                                       TileDedup dedup = TileDedup::none, unsigned threads = 1,
                                       uint64_t* samples = nullptr) {
    const std::vector<TileCount> tiles = plan_tiles(plan, part);
    std::vector<std::vector<Edge>> per_tile(tiles.size());
    std::atomic<uint64_t> used{0};
    parallel_for_blocks(tiles.size(), threads, [&](uint64_t i, unsigned) {
        uint64_t s = 0;
        per_tile[i] = generate_tile(tiles[i], table, plan.k, plan.tile_bits, plan.seed, dedup,
                                    kDefaultBlockSize, &s);
        used += s;
    });
    if (samples)
        *samples = used;
    std::vector<Edge> out;
    for (auto& edges : per_tile)
        out.insert(out.end(), edges.begin(), edges.end());
    return out;
}

} // namespace rmat

/*******************************************************************************
 * include/rmat/table.hpp
 *
 * Fragment tables: precomputed recursion-path prefixes of the R-MAT process
 * together with their probabilities, equipped with an alias sampler.
 *
 * A fragment of depth l fixes the next l bits of both the row and the column
 * index. Fixed-depth tables hold all 4^l fragments of one length; variable
 * depth tables greedily split the most likely fragment into its four children
 * until the size limit is reached, which maximizes the smallest entry
 * probability and thereby the expected number of bits per sample.
 ******************************************************************************/
#pragma once

#include <rmat/alias.hpp>
#include <rmat/error.hpp>
#include <rmat/params.hpp>
#include <rmat/random.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

namespace rmat {

inline constexpr int kMaxFragmentDepth = 62;
inline constexpr int kMaxFixedDepth = 16;

/// A precomputed recursion path. Bits are stored most-significant-first: the
/// first recursion decision is bit depth-1.
struct PathEntry {
    uint64_t row_bits = 0;
    uint64_t col_bits = 0;
    int depth = 0;
    double prob = 1.0;

    /// Quadrant digit (2*row_bit + col_bit) chosen at recursion level `level`,
    /// counted from the top.
    unsigned digit(int level) const {
        const int shift = depth - 1 - level;
        return static_cast<unsigned>(((row_bits >> shift) & 1) << 1 | ((col_bits >> shift) & 1));
    }

    friend bool operator==(const PathEntry&, const PathEntry&) = default;
};

/// The interleaved digit string of an entry, left-aligned in 128 bits so that
/// numeric order equals lexicographic order of the digit strings.
inline unsigned __int128 interleaved_path(const PathEntry& e) {
    unsigned __int128 code = 0;
    for (int level = 0; level < e.depth; ++level)
        code = (code << 2) | e.digit(level);
    if (e.depth > 0)
        code <<= 128 - 2 * e.depth;
    return code;
}

enum class TableKind { fixed, variable };

inline std::string to_string(TableKind kind) {
    return kind == TableKind::fixed ? "fixed" : "variable";
}

/// A fragment as laid out for the emission loop: the row bits carry a marker
/// bit at position `depth`, so the depth is recovered with one clz.
struct PackedFragment {
    uint64_t row_marked;
    uint64_t col;

    int depth() const { return std::bit_width(row_marked) - 1; }
    uint64_t row() const { return row_marked & ~(uint64_t{1} << depth()); }
};

/// Alias bucket with both candidate fragments stored inline, so one sample
/// touches a single cache line.
struct EmitBucket {
    double threshold;
    PackedFragment own;
    PackedFragment alias;
};

class FragmentTable {
public:
    FragmentTable() = default;

    FragmentTable(std::vector<PathEntry> entries, TableKind kind)
        : entries_(std::move(entries)), kind_(kind) {
        finalize();
    }

    const std::vector<PathEntry>& entries() const { return entries_; }
    const AliasTable& sampler() const { return sampler_; }
    const std::vector<EmitBucket>& emit_buckets() const { return emit_; }
    TableKind kind() const { return kind_; }
    size_t size() const { return entries_.size(); }
    int max_depth() const { return max_depth_; }
    int min_depth() const { return min_depth_; }

    /// Entry chosen by one uniform 64-bit draw.
    const PathEntry& sample(uint64_t draw) const { return entries_[sampler_.sample(draw)]; }

    /// Replaces the entry probabilities (same order) and rebuilds the sampler.
    void set_probabilities(const std::vector<double>& probs) {
        for (size_t i = 0; i < entries_.size(); ++i)
            entries_[i].prob = probs[i];
        finalize();
    }

private:
    void finalize() {
        std::vector<double> probs(entries_.size());
        max_depth_ = 0;
        min_depth_ = kMaxFragmentDepth;
        for (size_t i = 0; i < entries_.size(); ++i) {
            probs[i] = entries_[i].prob;
            max_depth_ = std::max(max_depth_, entries_[i].depth);
            min_depth_ = std::min(min_depth_, entries_[i].depth);
        }
        sampler_ = AliasTable(probs);

        auto pack = [this](size_t i) {
            const PathEntry& e = entries_[i];
            return PackedFragment{e.row_bits | (uint64_t{1} << e.depth), e.col_bits};
        };
        emit_.resize(entries_.size());
        const auto& buckets = sampler_.buckets();
        for (size_t i = 0; i < buckets.size(); ++i)
            emit_[i] = EmitBucket{buckets[i].threshold, pack(i), pack(buckets[i].alias)};
    }

    std::vector<PathEntry> entries_;
    AliasTable sampler_;
    std::vector<EmitBucket> emit_;
    TableKind kind_ = TableKind::fixed;
    int max_depth_ = 0;
    int min_depth_ = 0;
};

/// All 4^depth fragments of length `depth`, in lexicographic order of their
/// interleaved digit strings.
inline FragmentTable build_fixed_table(const RmatParams& params, int depth) {
    if (depth < 1 || depth > kMaxFixedDepth)
        throw error(errc::depth_out_of_range,
                    "fixed table depth " + std::to_string(depth) + " outside [1, 16]");
    const auto q = params.quadrants();
    const uint64_t count = uint64_t{1} << (2 * depth);
    std::vector<PathEntry> entries(count);
    for (uint64_t code = 0; code < count; ++code) {
        PathEntry& e = entries[code];
        e.depth = depth;
        e.prob = 1.0;
        for (int level = 0; level < depth; ++level) {
            const unsigned digit = (code >> (2 * (depth - 1 - level))) & 3;
            e.row_bits = (e.row_bits << 1) | (digit >> 1);
            e.col_bits = (e.col_bits << 1) | (digit & 1);
            e.prob *= q[digit];
        }
    }
    return FragmentTable(std::move(entries), TableKind::fixed);
}

namespace detail {

// Priority order for expansion: higher probability first, then smaller depth,
// then lexicographically smaller path.
struct expand_later {
    bool operator()(const PathEntry& x, const PathEntry& y) const {
        if (x.prob != y.prob)
            return x.prob < y.prob;
        if (x.depth != y.depth)
            return x.depth > y.depth;
        return interleaved_path(x) > interleaved_path(y);
    }
};

inline void sort_lexicographic(std::vector<PathEntry>& entries) {
    std::vector<std::pair<unsigned __int128, size_t>> keys(entries.size());
    for (size_t i = 0; i < entries.size(); ++i)
        keys[i] = {interleaved_path(entries[i]), i};
    std::sort(keys.begin(), keys.end());
    std::vector<PathEntry> sorted;
    sorted.reserve(entries.size());
    for (const auto& [code, i] : keys)
        sorted.push_back(entries[i]);
    entries = std::move(sorted);
}

} // namespace detail

/// Expansion record of a variable-depth build, for inspecting the greedy order.
struct ExpansionTrace {
    std::vector<PathEntry> expanded;
};

/// Greedy variable-depth table of at most `size_limit` entries. Starting from
/// the empty path, the most likely entry is replaced by its four children
/// while the result stays within the limit. Entries at `depth_cap` are final.
inline FragmentTable build_variable_table(const RmatParams& params, size_t size_limit,
                                          int depth_cap = kMaxFragmentDepth,
                                          ExpansionTrace* trace = nullptr) {
    if (size_limit < 4)
        throw error(errc::size_limit_too_small,
                    "size limit " + std::to_string(size_limit) + " < 4");
    if (depth_cap < 1 || depth_cap > kMaxFragmentDepth)
        throw error(errc::depth_out_of_range,
                    "depth cap " + std::to_string(depth_cap) + " outside [1, 62]");
    const auto q = params.quadrants();

    std::priority_queue<PathEntry, std::vector<PathEntry>, detail::expand_later> queue;
    std::vector<PathEntry> frozen;
    queue.push(PathEntry{});
    size_t size = 1;
    while (!queue.empty() && size + 3 <= size_limit) {
        PathEntry top = queue.top();
        queue.pop();
        if (top.depth >= depth_cap) {
            frozen.push_back(top);
            continue;
        }
        if (trace)
            trace->expanded.push_back(top);
        for (unsigned digit = 0; digit < 4; ++digit) {
            queue.push(PathEntry{(top.row_bits << 1) | (digit >> 1),
                                 (top.col_bits << 1) | (digit & 1),
                                 top.depth + 1, top.prob * q[digit]});
        }
        size += 3;
    }

    std::vector<PathEntry> entries = std::move(frozen);
    entries.reserve(size);
    while (!queue.empty()) {
        entries.push_back(queue.top());
        queue.pop();
    }
    detail::sort_lexicographic(entries);
    return FragmentTable(std::move(entries), TableKind::variable);
}

struct TableStats {
    size_t entry_count = 0;
    double min_prob = 0.0;
    double max_prob = 0.0;
    /// sum of p * depth: index bits resolved per sample
    double expected_depth = 0.0;
    /// sum of -p * log2(p): self-information per sample
    double expected_info = 0.0;
};

inline TableStats table_stats(const FragmentTable& table) {
    TableStats s;
    s.entry_count = table.size();
    s.min_prob = 1.0;
    long double depth = 0.0L, info = 0.0L;
    for (const PathEntry& e : table.entries()) {
        s.min_prob = std::min(s.min_prob, e.prob);
        s.max_prob = std::max(s.max_prob, e.prob);
        depth += static_cast<long double>(e.prob) * e.depth;
        if (e.prob > 0.0)
            info -= static_cast<long double>(e.prob) * std::log2(static_cast<long double>(e.prob));
    }
    s.expected_depth = static_cast<double>(depth);
    s.expected_info = static_cast<double>(info);
    return s;
}

/// Smoothing: every entry probability is scaled by an independent factor
/// uniform in [1 - noise, 1 + noise], then the vector is renormalized.
inline FragmentTable perturb_table(const FragmentTable& table, double noise, stream& rng) {
    if (!(noise >= 0.0 && noise < 1.0))
        throw error(errc::noise_out_of_range, "noise level must lie in [0, 1)");
    if (noise == 0.0)
        return table;
    std::vector<double> probs(table.size());
    double total = 0.0;
    for (size_t i = 0; i < table.size(); ++i) {
        const double factor = 1.0 - noise + 2.0 * noise * rng.next_double();
        probs[i] = table.entries()[i].prob * factor;
        total += probs[i];
    }
    for (double& p : probs)
        p /= total;
    FragmentTable out = table;
    out.set_probabilities(probs);
    return out;
}

inline std::string bit_string(uint64_t bits, int width) {
    std::string s(static_cast<size_t>(width), '0');
    for (int i = 0; i < width; ++i)
        if ((bits >> (width - 1 - i)) & 1)
            s[static_cast<size_t>(i)] = '1';
    return s;
}

/// Debug dump: one `row_bits col_bits depth prob` line per entry.
inline void dump_table(std::ostream& out, const FragmentTable& table) {
    char prob[32];
    for (const PathEntry& e : table.entries()) {
        std::snprintf(prob, sizeof(prob), "%.17g", e.prob);
        out << bit_string(e.row_bits, e.depth) << ' ' << bit_string(e.col_bits, e.depth) << ' '
            << e.depth << ' ' << prob << '\n';
    }
}

} // namespace rmat

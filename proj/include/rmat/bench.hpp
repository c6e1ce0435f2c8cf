/*******************************************************************************
 * include/rmat/bench.hpp
 *
 * Throughput measurements: table-size sweeps, thread scaling, and the
 * naive-generator baseline. Timings cover edge generation only; tables are
 * built beforehand and edges go to a discarding sink.
 ******************************************************************************/
#pragma once

#include <rmat/generator.hpp>
#include <rmat/naive.hpp>
#include <rmat/params.hpp>
#include <rmat/table.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rmat {

struct Measurement {
    double seconds = 0.0;
    uint64_t samples = 0;
    /// xor of all edges; keeps the sink from being optimized away
    uint64_t checksum = 0;
};

/// Generates config.edges edges into a discarding sink.
inline Measurement measure_generate(const GenConfig& config, const FragmentTable& table) {
    std::atomic<uint64_t> checksum{0};
    const auto start = std::chrono::steady_clock::now();
    Measurement m;
    std::atomic<uint64_t> samples{0};
    parallel_for_blocks(config.num_blocks(), config.threads, [&](uint64_t block, unsigned) {
        stream rng = block_stream(config.seed, block);
        uint64_t x = 0;
        samples += emit_edges(table, config.k, config.block_edges(block), rng,
                              [&x](Edge e) { x ^= e.u * 31 + e.v; });
        checksum ^= x;
    });
    m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    m.samples = samples;
    m.checksum = checksum;
    return m;
}

inline Measurement measure_naive(const RmatParams& params, int k, uint64_t edges, uint64_t seed) {
    Measurement m;
    const NaiveGenerator gen(params);
    const auto start = std::chrono::steady_clock::now();
    for (uint64_t block = 0; block * kDefaultBlockSize < edges; ++block) {
        stream rng = block_stream(seed, block);
        const uint64_t n = std::min(kDefaultBlockSize, edges - block * kDefaultBlockSize);
        for (uint64_t i = 0; i < n; ++i) {
            const Edge e = gen(k, rng);
            m.checksum ^= e.u * 31 + e.v;
        }
    }
    m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return m;
}

/// Median of `reps` timed runs after one untimed warm-up.
template <typename Run>
Measurement median_of(unsigned reps, Run&& run) {
    run();
    std::vector<Measurement> runs;
    for (unsigned r = 0; r < std::max(1u, reps); ++r)
        runs.push_back(run());
    std::sort(runs.begin(), runs.end(),
              [](const Measurement& x, const Measurement& y) { return x.seconds < y.seconds; });
    return runs[runs.size() / 2];
}

struct TableSizeRow {
    size_t size = 0;
    TableKind kind = TableKind::fixed;
    double edges_per_sec = 0.0;
    double samples_per_edge = 0.0;
    double expected_depth = 0.0;
};

inline constexpr const char* kTableSizeCsvHeader =
    "size,kind,edges_per_sec,samples_per_edge,expected_depth";

/// Fixed tables use depth round(log4(size)); the row reports the actual size.
inline FragmentTable table_for_size(const RmatParams& params, size_t size, TableKind kind,
                                    int depth_cap = kMaxFragmentDepth) {
    if (kind == TableKind::fixed) {
        const int depth = std::max(1, static_cast<int>(std::lround(std::log2(double(size)) / 2)));
        return build_fixed_table(params, depth);
    }
    return build_variable_table(params, size, depth_cap);
}

inline std::vector<TableSizeRow> run_bench_tablesize(const RmatParams& params,
                                                     const GenConfig& config,
                                                     const std::vector<size_t>& sizes,
                                                     const std::vector<TableKind>& kinds,
                                                     unsigned reps = 3,
                                                     int depth_cap = kMaxFragmentDepth) {
    std::vector<TableSizeRow> rows;
    for (size_t size : sizes) {
        for (TableKind kind : kinds) {
            const FragmentTable table = table_for_size(params, size, kind, depth_cap);
            const Measurement m = median_of(reps, [&] { return measure_generate(config, table); });
            rows.push_back({table.size(), kind, double(config.edges) / m.seconds,
                            double(m.samples) / double(config.edges),
                            table_stats(table).expected_depth});
        }
    }
    return rows;
}

struct ThreadRow {
    unsigned threads = 1;
    double edges_per_sec = 0.0;
    double speedup = 1.0;
};

inline constexpr const char* kThreadsCsvHeader = "threads,edges_per_sec,speedup_vs_1";

inline std::vector<ThreadRow> run_bench_threads(const GenConfig& config, const FragmentTable& table,
                                                const std::vector<unsigned>& thread_counts,
                                                unsigned reps = 3) {
    auto rate = [&](unsigned threads) {
        GenConfig c = config;
        c.threads = threads;
        const Measurement m = median_of(reps, [&] { return measure_generate(c, table); });
        return double(c.edges) / m.seconds;
    };
    std::vector<ThreadRow> rows;
    double base = 0.0;
    for (unsigned t : thread_counts) {
        const double r = rate(t);
        if (t == 1)
            base = r;
        rows.push_back({t, r, 0.0});
    }
    if (base == 0.0)
        base = rate(1);
    for (ThreadRow& row : rows)
        row.speedup = row.threads == 1 ? 1.0 : row.edges_per_sec / base;
    return rows;
}

inline void write_csv(std::ostream& out, const std::vector<TableSizeRow>& rows) {
    out << kTableSizeCsvHeader << '\n';
    for (const auto& r : rows)
        out << r.size << ',' << to_string(r.kind) << ',' << r.edges_per_sec << ','
            << r.samples_per_edge << ',' << r.expected_depth << '\n';
}

inline void write_csv(std::ostream& out, const std::vector<ThreadRow>& rows) {
    out << kThreadsCsvHeader << '\n';
    for (const auto& r : rows)
        out << r.threads << ',' << r.edges_per_sec << ',' << r.speedup << '\n';
}

} // namespace rmat

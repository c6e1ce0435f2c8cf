/*******************************************************************************
 * include/rmat/generator.hpp
 *
 * Edge emission: sample fragments from the table, append their bits to a row
 * and a column accumulator, and cut an edge off the oldest k bits whenever
 * enough have accumulated. Generation is split into fixed-size blocks, each
 * drawing from its own keyed stream, so output does not depend on which
 * worker produced which block.
 ******************************************************************************/
#pragma once

#include <rmat/alias.hpp>
#include <rmat/edge.hpp>
#include <rmat/random.hpp>
#include <rmat/table.hpp>

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <utility>
#include <vector>

namespace rmat {

inline constexpr uint64_t kDefaultBlockSize = uint64_t{1} << 16;

struct GenConfig {
    int k = 1;
    uint64_t edges = 0;
    uint64_t seed = 0;
    uint64_t block_size = kDefaultBlockSize;
    unsigned threads = 1;

    uint64_t num_blocks() const { return (edges + block_size - 1) / block_size; }
    uint64_t block_edges(uint64_t block) const {
        return std::min(block_size, edges - block * block_size);
    }
};

/// Random stream of block `block` under `seed`.
inline stream block_stream(uint64_t seed, uint64_t block) {
    return stream::keyed({seed, block});
}

/// Row/column bit accumulators between fragment samples. `Acc` must hold
/// k - 1 + max fragment depth bits.
template <typename Acc>
struct EdgeEmitState {
    Acc row = 0;
    Acc col = 0;
    int len = 0;

    void append(const PackedFragment& f) {
        const int d = f.depth();
        row = (row << d) | f.row();
        col = (col << d) | f.col;
        len += d;
    }

    /// Removes the oldest k bits of each accumulator as an edge.
    Edge take(int k) {
        len -= k;
        const Acc mask = (Acc{1} << len) - 1;
        Edge e{static_cast<uint64_t>(row >> len), static_cast<uint64_t>(col >> len)};
        row &= mask;
        col &= mask;
        return e;
    }
};

namespace detail {

template <typename Acc, typename Sink>
uint64_t emit_loop(const FragmentTable& table, int k, uint64_t count, stream& rng, Sink& sink) {
    const EmitBucket* buckets = table.emit_buckets().data();
    const uint64_t n = table.size();
    EdgeEmitState<Acc> state;
    uint64_t emitted = 0, samples = 0;
    while (emitted < count) {
        const SplitDraw s = split_draw(rng.next(), n);
        const EmitBucket& b = buckets[s.index];
        state.append(s.fraction < b.threshold ? b.own : b.alias);
        ++samples;
        while (state.len >= k && emitted < count) {
            sink(state.take(k));
            ++emitted;
        }
    }
    return samples;
}

} // namespace detail

/// Emits `count` edges of a 2^k-node graph from `rng`, passing each to
/// `sink`. Leftover bits after the last edge are discarded. Returns the
/// number of table samples consumed.
template <typename Sink>
uint64_t emit_edges(const FragmentTable& table, int k, uint64_t count, stream& rng, Sink&& sink) {
    assert(k >= 1 && k <= kMaxExponent);
    if (k - 1 + table.max_depth() <= 64)
        return detail::emit_loop<uint64_t>(table, k, count, rng, sink);
    return detail::emit_loop<unsigned __int128>(table, k, count, rng, sink);
}

inline std::vector<Edge> emit_block(const FragmentTable& table, int k, uint64_t count,
                                    uint64_t seed, uint64_t block, uint64_t* samples = nullptr) {
    std::vector<Edge> out;
    out.reserve(count);
    stream rng = block_stream(seed, block);
    const uint64_t used = emit_edges(table, k, count, rng, [&](Edge e) { out.push_back(e); });
    if (samples)
        *samples = used;
    return out;
}

/// Runs fn(block, worker) for every block in [0, num_blocks); workers claim
/// blocks from a shared counter. The first exception thrown by any worker is
/// rethrown after all workers have stopped.
template <typename BlockFn>
void parallel_for_blocks(uint64_t num_blocks, unsigned threads, BlockFn&& fn) {
    threads = std::max(1u, threads);
    std::atomic<uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](unsigned worker) {
        try {
            for (uint64_t b = next.fetch_add(1); b < num_blocks; b = next.fetch_add(1))
                fn(b, worker);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next.store(num_blocks);
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < threads; ++w)
            pool.emplace_back(work, w);
        work(0);
    }
    if (failure)
        std::rethrow_exception(failure);
}

struct GenResult {
    std::vector<Edge> edges;
    uint64_t samples = 0;
};

/// All `config.edges` edges in block order. Byte-identical for any thread count.
inline GenResult generate(const GenConfig& config, const FragmentTable& table) {
    GenResult result;
    result.edges.resize(config.edges);
    std::atomic<uint64_t> samples{0};
    parallel_for_blocks(config.num_blocks(), config.threads, [&](uint64_t block, unsigned) {
        Edge* out = result.edges.data() + block * config.block_size;
        stream rng = block_stream(config.seed, block);
        samples += emit_edges(table, config.k, config.block_edges(block), rng,
                              [&out](Edge e) { *out++ = e; });
    });
    result.samples = samples;
    return result;
}

/// Generates every block and hands it to on_block(block, edges) from the
/// worker that produced it, in no particular order. `edges` is a per-worker
/// buffer that on_block may modify. Returns the samples consumed.
template <typename OnBlock>
uint64_t generate_blocks(const GenConfig& config, const FragmentTable& table, OnBlock&& on_block) {
    std::vector<std::vector<Edge>> buffers(std::max(1u, config.threads));
    std::atomic<uint64_t> samples{0};
    parallel_for_blocks(config.num_blocks(), config.threads, [&](uint64_t block, unsigned worker) {
        std::vector<Edge>& buf = buffers[worker];
        buf.clear();
        stream rng = block_stream(config.seed, block);
        samples += emit_edges(table, config.k, config.block_edges(block), rng,
                              [&buf](Edge e) { buf.push_back(e); });
        on_block(block, buf);
    });
    return samples;
}

/// Like generate_blocks, but on_block is called sequentially in block order.
/// `transform(block, edges)` runs on the worker before ordering.
template <typename Transform, typename OnBlock>
uint64_t generate_ordered(const GenConfig& config, const FragmentTable& table,
                          Transform&& transform, OnBlock&& on_block) {
    const uint64_t blocks = config.num_blocks();
    const uint64_t round = uint64_t{4} * std::max(1u, config.threads);
    std::vector<std::vector<Edge>> buffers(round);
    std::atomic<uint64_t> samples{0};
    for (uint64_t first = 0; first < blocks; first += round) {
        const uint64_t in_round = std::min(round, blocks - first);
        parallel_for_blocks(in_round, config.threads, [&](uint64_t i, unsigned) {
            const uint64_t block = first + i;
            std::vector<Edge>& buf = buffers[i];
            buf.clear();
            stream rng = block_stream(config.seed, block);
            samples += emit_edges(table, config.k, config.block_edges(block), rng,
                                  [&buf](Edge e) { buf.push_back(e); });
            transform(block, buf);
        });
        for (uint64_t i = 0; i < in_round; ++i)
            on_block(first + i, std::as_const(buffers[i]));
    }
    return samples;
}

} // namespace rmat

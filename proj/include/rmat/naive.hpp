/*******************************************************************************
 * include/rmat/naive.hpp
 *
 * Reference R-MAT generator: one uniform draw and one quadrant decision per
 * recursion level. Slow (k draws per edge) but obviously correct; tests and
 * benchmarks use it as the baseline for the table-based generator.
 ******************************************************************************/
#pragma once

#include <rmat/edge.hpp>
#include <rmat/params.hpp>
#include <rmat/random.hpp>

#include <cstdint>
#include <vector>

namespace rmat {

class NaiveGenerator {
public:
    explicit NaiveGenerator(const RmatParams& params)
        : a_(params.a), ab_(params.a + params.b), abc_(params.a + params.b + params.c) {}

    Edge operator()(int k, stream& rng) const {
        uint64_t row = 0, col = 0;
        for (int level = 0; level < k; ++level) {
            const double u = rng.next_double();
            const unsigned quadrant = u < a_ ? 0 : u < ab_ ? 1 : u < abc_ ? 2 : 3;
            row = (row << 1) | (quadrant >> 1);
            col = (col << 1) | (quadrant & 1);
        }
        return {row, col};
    }

private:
    double a_, ab_, abc_;
};

inline Edge naive_edge(const RmatParams& params, int k, stream& rng) {
    return NaiveGenerator(params)(k, rng);
}

/// `count` edges from the reference process, passed to `sink`.
template <typename Sink>
void naive_edges(const RmatParams& params, int k, uint64_t count, stream& rng, Sink&& sink) {
    const NaiveGenerator gen(params);
    for (uint64_t i = 0; i < count; ++i)
        sink(gen(k, rng));
}

inline std::vector<Edge> naive_edges(const RmatParams& params, int k, uint64_t count, stream& rng) {
    std::vector<Edge> out;
    out.reserve(count);
    naive_edges(params, k, count, rng, [&out](Edge e) { out.push_back(e); });
    return out;
}

} // namespace rmat

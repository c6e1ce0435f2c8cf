/*******************************************************************************
 * tools/rmatgen.cpp
 *
 * Command line front end: generate, verify, table-dump, bench-tablesize,
 * bench-threads.
 ******************************************************************************/

#include <rmat/rmat.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

struct ModelOptions {
    double a = 0.57, b = 0.19, c = 0.19, d = 0.05;
    int k = 20;
    uint64_t edges = 1000000;
    uint64_t seed = 1;
    std::string table = "fixed";
    int depth = 8;
    size_t size = 0;
    int depth_cap = rmat::kMaxFragmentDepth;
    double noise = 0.0;
    unsigned threads = 1;
    uint64_t block_size = rmat::kDefaultBlockSize;
    std::string output;
};

unsigned default_threads() {
    if (const char* env = std::getenv("RMAT_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0)
            return static_cast<unsigned>(n);
    }
    return 1;
}

void add_model_options(CLI::App* cmd, ModelOptions& o) {
    cmd->add_option("-a", o.a, "upper-left quadrant probability")->capture_default_str();
    cmd->add_option("-b", o.b, "upper-right quadrant probability")->capture_default_str();
    cmd->add_option("-c", o.c, "lower-left quadrant probability")->capture_default_str();
    cmd->add_option("-d", o.d, "lower-right quadrant probability")->capture_default_str();
    cmd->add_option("-k", o.k, "log2 of the number of nodes")->capture_default_str();
    cmd->add_option("-m,--edges", o.edges, "number of edges")->capture_default_str();
    cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
    cmd->add_option("--table", o.table, "table kind")
        ->check(CLI::IsMember({"fixed", "variable"}))
        ->capture_default_str();
    cmd->add_option("--depth", o.depth, "fragment depth of fixed tables")->capture_default_str();
    cmd->add_option("--size", o.size, "size limit of variable tables (default 4^depth)");
    cmd->add_option("--depth-cap", o.depth_cap, "maximum fragment depth of variable tables")
        ->capture_default_str();
    cmd->add_option("--smooth", o.noise, "multiplicative noise on table probabilities, in [0,1)");
    cmd->add_option("--threads", o.threads, "worker threads (default: $RMAT_THREADS or 1)");
    cmd->add_option("--block-size", o.block_size, "edges per work unit")->capture_default_str();
    cmd->add_option("-o,--output", o.output, "output path");
}

rmat::RmatParams params_of(const ModelOptions& o) {
    return rmat::validate(o.a, o.b, o.c, o.d, o.k);
}

rmat::FragmentTable table_of(const ModelOptions& o, const rmat::RmatParams& params) {
    rmat::FragmentTable table;
    if (o.table == "fixed") {
        table = rmat::build_fixed_table(params, o.depth);
    } else {
        const size_t size = o.size ? o.size : size_t{1} << (2 * std::min(o.depth, 24));
        table = rmat::build_variable_table(params, size, o.depth_cap);
    }
    if (o.noise != 0.0) {
        rmat::stream rng = rmat::stream::keyed({o.seed, 0x736d6f6f7468ULL});
        table = rmat::perturb_table(table, o.noise, rng);
    }
    return table;
}

rmat::GenConfig gen_config_of(const ModelOptions& o) {
    if (o.block_size == 0)
        throw rmat::error(rmat::errc::invalid_config, "--block-size must be >= 1");
    return {o.k, o.edges, o.seed, o.block_size, std::max(1u, o.threads)};
}

/// Writes via a temporary file renamed into place, or to stdout.
template <typename Fn>
void write_text_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    const std::filesystem::path target(path), temp(path + ".partial");
    {
        std::ofstream out(temp);
        if (!out)
            throw rmat::error(rmat::errc::io_error, "cannot open " + temp.string());
        fn(out);
        if (!out)
            throw rmat::error(rmat::errc::io_error, "write to " + temp.string() + " failed");
    }
    std::filesystem::rename(temp, target);
}

template <typename T>
std::vector<T> parse_list(const std::string& s) {
    std::vector<T> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::stringstream is(item);
        T value;
        if (!(is >> value))
            throw rmat::error(rmat::errc::invalid_config, "bad list element '" + item + "'");
        out.push_back(value);
    }
    return out;
}

struct GenerateOptions {
    std::string format = "binary";
    bool undirected = false;
    bool symmetric = false;
    bool scramble = false;
    std::optional<uint64_t> scramble_seed;
    bool dedup = false;
    bool simple = false;
    std::optional<int> tiles;
    std::optional<unsigned> parts;
    std::optional<unsigned> part;
};

int run_generate(const ModelOptions& o, const GenerateOptions& g) {
    const rmat::RmatParams params = params_of(o);
    const rmat::EdgeFormat format = rmat::parse_format(g.format);
    if (format != rmat::EdgeFormat::none && o.output.empty())
        throw rmat::error(rmat::errc::invalid_config, "-o is required unless --format none");
    if (g.part && !(g.parts && g.tiles))
        throw rmat::error(rmat::errc::invalid_config, "--part requires --parts and --tiles");
    if (g.parts && !g.tiles)
        throw rmat::error(rmat::errc::invalid_config, "--parts requires --tiles");
    if (g.simple && !g.tiles)
        throw rmat::error(rmat::errc::invalid_config, "--simple requires --tiles");

    rmat::Pipeline pipeline;
    pipeline.undirected = g.undirected;
    pipeline.symmetric = g.symmetric;
    if (g.scramble)
        pipeline.scramble.emplace(g.scramble_seed.value_or(o.seed), o.k);
    if (g.undirected || g.symmetric) {
        if (auto warning = rmat::undirected_warning(params))
            std::cerr << *warning << '\n';
    }

    const rmat::FragmentTable table = table_of(o, params);
    const rmat::GenConfig config = gen_config_of(o);
    rmat::EdgeWriter writer(o.output, format);
    uint64_t samples = 0, generated = 0;
    std::optional<uint64_t> out_edges;
    const auto start = std::chrono::steady_clock::now();

    if (g.tiles) {
        rmat::PartitionPlan plan{params, o.k, *g.tiles, o.edges, o.seed, g.parts.value_or(1)};
        plan.check();
        if (g.part && *g.part >= plan.parts)
            throw rmat::error(rmat::errc::invalid_config, "--part must be < --parts");
        const rmat::TileDedup dedup = g.simple  ? rmat::TileDedup::resample
                                      : g.dedup ? rmat::TileDedup::drop
                                                : rmat::TileDedup::none;
        // tile-local dedup already happened; the pipeline must not dedup again
        pipeline.dedup = false;
        const unsigned first = g.part.value_or(0);
        const unsigned last = g.part ? *g.part + 1 : plan.parts;
        for (unsigned p = first; p < last; ++p) {
            uint64_t used = 0;
            std::vector<rmat::Edge> edges =
                rmat::generate_part(plan, p, table, dedup, config.threads, &used);
            generated += edges.size();
            samples += used;
            pipeline.apply(edges);
            writer.write(edges);
        }
    } else {
        pipeline.dedup = g.dedup;
        auto transform = [&](uint64_t, std::vector<rmat::Edge>& edges) { pipeline.apply(edges); };
        auto sink = [&](uint64_t, const std::vector<rmat::Edge>& edges) { writer.write(edges); };
        if (format == rmat::EdgeFormat::none && !pipeline.undirected && !pipeline.symmetric &&
            !pipeline.scramble && !pipeline.dedup) {
            samples = rmat::measure_generate(config, table).samples;
            out_edges = o.edges;
        } else {
            samples = rmat::generate_ordered(config, table, transform, sink);
        }
        generated = o.edges;
    }
    writer.commit();

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "edges=" << out_edges.value_or(writer.written()) << " generated=" << generated << " seconds=" << seconds
              << " edges_per_sec=" << (seconds > 0 ? double(generated) / seconds : 0.0)
              << " samples=" << samples << " samples_per_edge="
              << (generated ? double(samples) / double(generated) : 0.0) << '\n';
    return 0;
}

struct VerifyOptions {
    bool naive = false;
    std::string input;
    double alpha = rmat::kDefaultAlpha;
    bool strict = false;
};

int run_verify(const ModelOptions& o, const VerifyOptions& v) {
    const rmat::RmatParams params = params_of(o);
    rmat::CellHistogram hist(o.k);
    if (!v.input.empty()) {
        for (const rmat::Edge& e : rmat::read_binary_edges(v.input)) {
            if ((e.u >> o.k) || (e.v >> o.k))
                throw rmat::error(rmat::errc::invalid_config, "edge outside 2^k x 2^k matrix");
            hist.add(e);
        }
    } else if (v.naive) {
        const rmat::GenConfig config = gen_config_of(o);
        for (uint64_t block = 0; block < config.num_blocks(); ++block) {
            rmat::stream rng = rmat::block_stream(o.seed, block);
            rmat::naive_edges(params, o.k, config.block_edges(block), rng, hist);
        }
    } else {
        const rmat::FragmentTable table = table_of(o, params);
        const rmat::GenConfig config = gen_config_of(o);
        for (uint64_t block = 0; block < config.num_blocks(); ++block) {
            rmat::stream rng = rmat::block_stream(o.seed, block);
            rmat::emit_edges(table, o.k, config.block_edges(block), rng, hist);
        }
    }
    const std::vector<double> expected = rmat::exact_cell_probs(params, o.k);
    const rmat::ChiSquareResult r = rmat::pooled_chi_square(hist.counts(), expected, v.alpha);
    std::cout << "statistic=" << r.statistic << " dof=" << r.dof << " threshold=" << r.threshold
              << " alpha=" << v.alpha << " edges=" << hist.total()
              << " verdict=" << (r.pass ? "pass" : "fail") << '\n';
    return (v.strict && !r.pass) ? 2 : 0;
}

int run_table_dump(const ModelOptions& o) {
    const rmat::RmatParams params = params_of(o);
    const rmat::FragmentTable table = table_of(o, params);
    const rmat::TableStats s = rmat::table_stats(table);
    write_text_output(o.output, [&](std::ostream& out) { rmat::dump_table(out, table); });
    std::cerr << "entries=" << s.entry_count << " min_prob=" << s.min_prob
              << " max_prob=" << s.max_prob << " expected_depth=" << s.expected_depth
              << " expected_info=" << s.expected_info << " entropy=" << rmat::entropy(params)
              << " speedup_bound=" << rmat::speedup_bound(params) << '\n';
    return 0;
}

int run_bench_tablesize(const ModelOptions& o, const std::string& sizes, const std::string& kinds,
                        unsigned reps) {
    const rmat::RmatParams params = params_of(o);
    std::vector<rmat::TableKind> kind_list;
    for (const std::string& kind : parse_list<std::string>(kinds)) {
        if (kind != "fixed" && kind != "variable")
            throw rmat::error(rmat::errc::invalid_config, "unknown table kind '" + kind + "'");
        kind_list.push_back(kind == "fixed" ? rmat::TableKind::fixed : rmat::TableKind::variable);
    }
    const auto rows = rmat::run_bench_tablesize(params, gen_config_of(o),
                                                parse_list<size_t>(sizes), kind_list,
                                                std::max(3u, reps), o.depth_cap);
    write_text_output(o.output, [&](std::ostream& out) { rmat::write_csv(out, rows); });
    return 0;
}

int run_bench_threads(const ModelOptions& o, const std::string& threads, unsigned reps) {
    const rmat::RmatParams params = params_of(o);
    const rmat::FragmentTable table = table_of(o, params);
    std::vector<unsigned> counts = parse_list<unsigned>(threads);
    for (unsigned t : counts)
        if (t < 1)
            throw rmat::error(rmat::errc::invalid_config, "thread counts must be >= 1");
    const auto rows = rmat::run_bench_threads(gen_config_of(o), table, counts, std::max(3u, reps));
    write_text_output(o.output, [&](std::ostream& out) { rmat::write_csv(out, rows); });
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"R-MAT graph generator with constant work per edge"};
    app.require_subcommand(1);

    ModelOptions gen_opts, verify_opts, dump_opts, size_opts, thread_opts;
    for (ModelOptions* o : {&gen_opts, &verify_opts, &dump_opts, &size_opts, &thread_opts})
        o->threads = default_threads();
    verify_opts.k = 4;
    size_opts.k = thread_opts.k = 30;
    size_opts.edges = thread_opts.edges = 10000000;

    auto* gen = app.add_subcommand("generate", "generate an edge list");
    add_model_options(gen, gen_opts);
    GenerateOptions g;
    gen->add_option("--format", g.format, "binary, text or none")
        ->check(CLI::IsMember({"binary", "text", "none"}))
        ->capture_default_str();
    gen->add_flag("--undirected", g.undirected, "mirror edges into the lower triangle (u >= v)");
    gen->add_flag("--symmetric", g.symmetric, "emit both orientations of every edge");
    gen->add_flag("--scramble", g.scramble, "scramble vertex IDs");
    gen->add_option("--scramble-seed", g.scramble_seed, "scramble seed (default: --seed)");
    gen->add_flag("--dedup", g.dedup, "drop duplicate edges within each block or tile");
    gen->add_flag("--simple", g.simple, "partitioned mode: resample duplicates within tiles");
    gen->add_option("--tiles", g.tiles, "partitioned mode: 2^t x 2^t tiles");
    gen->add_option("--parts", g.parts, "partitioned mode: number of parts");
    gen->add_option("--part", g.part, "partitioned mode: generate only this part");

    auto* verify = app.add_subcommand("verify", "chi-square test of generated cell frequencies");
    add_model_options(verify, verify_opts);
    VerifyOptions v;
    verify->add_flag("--naive", v.naive, "test the reference generator instead");
    verify->add_option("--input", v.input, "test a binary edge file instead");
    verify->add_option("--alpha", v.alpha, "significance level")->capture_default_str();
    verify->add_flag("--strict", v.strict, "exit with status 2 when the test fails");

    auto* dump = app.add_subcommand("table-dump", "print the fragment table");
    add_model_options(dump, dump_opts);

    auto* bsize = app.add_subcommand("bench-tablesize", "throughput as a function of table size");
    add_model_options(bsize, size_opts);
    std::string sizes = "256,1024,4096,16384,65536", kinds = "fixed,variable";
    unsigned size_reps = 3;
    bsize->add_option("--sizes", sizes, "comma-separated table sizes")->capture_default_str();
    bsize->add_option("--kinds", kinds, "comma-separated table kinds")->capture_default_str();
    bsize->add_option("--reps", size_reps, "timed repetitions (>= 3)")->capture_default_str();

    auto* bthreads = app.add_subcommand("bench-threads", "throughput as a function of threads");
    add_model_options(bthreads, thread_opts);
    std::string thread_list = "1,2,4";
    unsigned thread_reps = 3;
    bthreads->add_option("--thread-list", thread_list, "comma-separated thread counts")
        ->capture_default_str();
    bthreads->add_option("--reps", thread_reps, "timed repetitions (>= 3)")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen)
            return run_generate(gen_opts, g);
        if (*verify)
            return run_verify(verify_opts, v);
        if (*dump)
            return run_table_dump(dump_opts);
        if (*bsize)
            return run_bench_tablesize(size_opts, sizes, kinds, size_reps);
        if (*bthreads)
            return run_bench_threads(thread_opts, thread_list, thread_reps);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

// qwalk: hitting times of measured coined quantum walks on (possibly
// distorted) hypercubes, with classical baselines and a spectral certifier
// of infinite hitting times. Emits deterministic CSV or JSON.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qwalk/classical.hpp"
#include "qwalk/coin.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/reduced.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/superop.hpp"
#include "qwalk/walk.hpp"

namespace {

using qwalk::Index;

constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitNumerical = 4;

// ----------------------------------------------------------------------
// Output formatting: cells are preformatted strings so CSV and JSON emit
// byte-identical values for identical runs.

std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", x);
    return buffer;
}

std::string fmt(long x) { return std::to_string(x); }
std::string fmt(Index x) { return std::to_string(long(x)); }
std::string fmt(bool b) { return b ? "1" : "0"; }

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string render_csv(const Table& table) {
    std::ostringstream out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << table.columns[c];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << row[c];
        }
        out << "\n";
    }
    return out.str();
}

std::string render_json(const std::string& command, const Table& table) {
    std::ostringstream out;
    out << "{\"command\":\"" << command << "\",\"rows\":[";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << (r ? ",{" : "{");
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out << (c ? "," : "") << "\"" << table.columns[c] << "\":\""
                << table.rows[r][c] << "\"";
        }
        out << "}";
    }
    out << "]}\n";
    return out.str();
}

void write_output(const std::string& path, const std::string& format,
                  const std::string& command, const Table& table) {
    const std::string text =
        format == "json" ? render_json(command, table) : render_csv(table);
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw qwalk::ConfigurationError("cannot open output file: " + path);
    }
    file << text;
}

// ----------------------------------------------------------------------
// Shared configuration.

struct Options {
    int n = 4;
    std::string n_range; // "a..b" or single value, sweeps only
    std::string coin = "grover";
    std::string graph = "regular";
    std::string method = "auto";
    std::string epsilons; // comma list, fig23 only
    double epsilon = 1e-3;
    long t_max = 1000000;
    long trials = 0;
    std::uint64_t seed = 0;
    long start = 0;
    long final_vertex = -1; // default: all-ones
    double tol_cluster = 1e-8;
    double tol_rank = 1e-10;
    std::string output; // empty = stdout
    std::string format = "csv";
    unsigned threads = 0; // 0 = hardware default
};

Index superop_budget() {
    if (const char* env = std::getenv("QWALK_SUPEROP_BUDGET")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || value < 1) {
            throw qwalk::ConfigurationError(
                "QWALK_SUPEROP_BUDGET must be a positive integer, got '" +
                std::string(env) + "'");
        }
        return Index(value);
    }
    return qwalk::default_superop_budget;
}

std::pair<int, int> parse_range(const std::string& text, int fallback_lo,
                                int fallback_hi) {
    if (text.empty()) return {fallback_lo, fallback_hi};
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const int v = std::stoi(text);
            return {v, v};
        }
        const int lo = std::stoi(text.substr(0, dots));
        const int hi = std::stoi(text.substr(dots + 2));
        if (lo > hi) {
            throw qwalk::ConfigurationError("range '" + text + "' is reversed");
        }
        return {lo, hi};
    } catch (const std::invalid_argument&) {
        throw qwalk::ConfigurationError("cannot parse range '" + text + "'");
    } catch (const std::out_of_range&) {
        throw qwalk::ConfigurationError("range '" + text + "' out of range");
    }
}

std::vector<double> parse_epsilon_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw qwalk::ConfigurationError("cannot parse epsilon '" + item + "'");
        }
    }
    if (values.empty()) {
        throw qwalk::ConfigurationError("empty epsilon list");
    }
    for (double e : values) {
        if (e <= 0.0 || e >= 1.0) {
            throw qwalk::ConfigurationError("epsilon must lie in (0, 1)");
        }
    }
    return values;
}

qwalk::CoinKind coin_kind(const std::string& name) {
    if (name == "grover") return qwalk::CoinKind::Grover;
    if (name == "dft") return qwalk::CoinKind::Dft;
    if (name == "hadamard") return qwalk::CoinKind::Hadamard;
    throw qwalk::ConfigurationError("unknown coin '" + name + "'");
}

qwalk::LabeledGraph build_graph(const Options& opt, int n) {
    if (opt.graph == "regular") return qwalk::hypercube(n);
    if (opt.graph == "distorted") return qwalk::distorted_hypercube(n);
    throw qwalk::ConfigurationError("unknown graph '" + opt.graph + "'");
}

std::uint32_t resolve_final(const Options& opt, const qwalk::LabeledGraph& g) {
    const long final_vertex =
        opt.final_vertex < 0 ? long(g.n_vertices()) - 1 : opt.final_vertex;
    if (final_vertex < 0 || final_vertex >= long(g.n_vertices())) {
        throw qwalk::ConfigurationError("final vertex out of range");
    }
    return std::uint32_t(final_vertex);
}

// Run one job per point on a small pool; slot order keeps output deterministic.
template <typename Job>
void run_pool(long points, unsigned threads, Job&& job) {
    unsigned workers = threads ? threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, unsigned(std::max<long>(points, 1)));
    if (workers <= 1) {
        for (long i = 0; i < points; ++i) job(i);
        return;
    }
    std::atomic<long> next(0);
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (long i = next.fetch_add(1); i < points; i = next.fetch_add(1)) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// ----------------------------------------------------------------------
// quantum: one hitting time.

std::string method_name(qwalk::Method m) {
    switch (m) {
    case qwalk::Method::ClosedForm: return "closed";
    case qwalk::Method::Iterative: return "iterative";
    case qwalk::Method::Reduced: return "reduced";
    }
    return "?";
}

bool reduced_eligible(const Options& opt, int n, std::uint32_t final_vertex) {
    return opt.coin == "grover" && opt.graph == "regular" && n >= 2 &&
           opt.start == 0 && final_vertex == (1u << n) - 1;
}

qwalk::HittingResult run_quantum_point(const Options& opt, int n,
                                       const std::string& method) {
    const Index budget = superop_budget();
    const qwalk::LabeledGraph g = build_graph(opt, n);
    const std::uint32_t final_vertex = resolve_final(opt, g);

    std::string chosen = method;
    if (chosen == "auto") {
        const double vectorized =
            double(g.n_vertices()) * g.degree() * double(g.n_vertices()) * g.degree();
        if (reduced_eligible(opt, n, final_vertex)) {
            chosen = "reduced";
        } else if (vectorized <= double(budget)) {
            chosen = "closed";
        } else {
            chosen = "iterative";
        }
    }

    if (chosen == "reduced") {
        if (!reduced_eligible(opt, n, final_vertex)) {
            throw qwalk::ConfigurationError(
                "method=reduced requires coin=grover, graph=regular, the default "
                "start and final vertices, and n >= 2");
        }
        return qwalk::reduced_hitting_time(n, qwalk::Method::ClosedForm, opt.epsilon,
                                           opt.t_max, budget);
    }

    const auto walk = qwalk::make_measured_walk(
        g, qwalk::CoinSpec{coin_kind(opt.coin), int(g.degree())}.build(), final_vertex);
    if (opt.start < 0 || opt.start >= long(g.n_vertices())) {
        throw qwalk::ConfigurationError("start vertex out of range");
    }
    const auto psi0 = qwalk::symmetric_initial_state(g, std::uint32_t(opt.start));

    if (chosen == "closed") {
        const auto pair = qwalk::build_superoperators(walk, budget);
        const qwalk::DenseMatrix rho0 =
            psi0.amplitudes() * psi0.amplitudes().adjoint();
        return qwalk::closed_form_hitting_time(pair, rho0);
    }
    if (chosen == "iterative") {
        const auto series = qwalk::first_crossing_series(walk, psi0, opt.t_max, opt.epsilon);
        const auto estimate = qwalk::hitting_time_estimate(series);
        qwalk::HittingResult result;
        result.method = qwalk::Method::Iterative;
        result.tau = estimate.tau_est;
        result.absorption = estimate.absorbed;
        result.finite = estimate.converged;
        result.tolerances.epsilon = opt.epsilon;
        result.tolerances.t_max = opt.t_max;
        return result;
    }
    throw qwalk::ConfigurationError("unknown method '" + chosen + "'");
}

int cmd_quantum(const Options& opt) {
    const auto result = run_quantum_point(opt, opt.n, opt.method);
    Table table;
    table.columns = {"n",        "coin",    "graph",      "method",
                     "tau",      "absorbed", "finite",    "epsilon",
                     "t_max",    "solver_tol", "absorption_threshold"};
    table.rows.push_back({fmt(long(opt.n)), opt.coin, opt.graph,
                          method_name(result.method),
                          result.finite ? fmt(result.tau)
                                        : std::string("inf"),
                          fmt(result.absorption), fmt(result.finite),
                          fmt(result.tolerances.epsilon),
                          fmt(result.tolerances.t_max),
                          fmt(result.tolerances.solver_tol),
                          fmt(result.tolerances.absorption_threshold)});
    write_output(opt.output, opt.format, "quantum", table);
    return 0;
}

// ----------------------------------------------------------------------
// classical: oracle values for one dimension.

int cmd_classical(const Options& opt) {
    const qwalk::LabeledGraph g = build_graph(opt, opt.n);
    const std::uint32_t final_vertex = resolve_final(opt, g);
    if (opt.start < 0 || opt.start >= long(g.n_vertices())) {
        throw qwalk::ConfigurationError("start vertex out of range");
    }
    const std::uint32_t start = std::uint32_t(opt.start);

    const bool weight_symmetric =
        opt.graph == "regular" && start == 0 && final_vertex == g.n_vertices() - 1;
    const double tau_graph = qwalk::classical_hitting_graph(g, start, final_vertex);

    Table table;
    table.columns = {"n",         "graph",     "tau_recursion", "tau_closed_sum",
                     "tau_graph", "mc_mean",   "mc_std_error",  "mc_trials",
                     "mc_censored", "seed"};
    std::vector<std::string> row{fmt(long(opt.n)), opt.graph, "", "",
                                 fmt(tau_graph),   "",        "", "",
                                 "",               fmt(long(opt.seed))};
    if (weight_symmetric) {
        row[2] = fmt(qwalk::classical_hitting_recursion(opt.n).tau_by_weight[0]);
        row[3] = fmt(qwalk::classical_hitting_closed(opt.n));
    }
    if (opt.trials > 0) {
        const auto mc = qwalk::classical_monte_carlo(g, start, final_vertex,
                                                     opt.trials, opt.seed);
        row[5] = fmt(mc.mean);
        row[6] = fmt(mc.std_error);
        row[7] = fmt(mc.trials);
        row[8] = fmt(mc.censored);
    }
    table.rows.push_back(std::move(row));
    write_output(opt.output, opt.format, "classical", table);
    return 0;
}

// ----------------------------------------------------------------------
// spectral: eigenvalue clusters, avoiding projector, escape probability.

int cmd_spectral(const Options& opt) {
    const qwalk::LabeledGraph g = build_graph(opt, opt.n);
    const std::uint32_t final_vertex = resolve_final(opt, g);
    const auto walk = qwalk::make_measured_walk(
        g, qwalk::CoinSpec{coin_kind(opt.coin), int(g.degree())}.build(), final_vertex);

    const auto report = qwalk::eigendecompose(walk.evolution, opt.tol_cluster);
    const auto projector =
        qwalk::avoiding_projector(report, final_vertex, g.degree(), opt.tol_rank);
    const auto psi0 = qwalk::symmetric_initial_state(g, std::uint32_t(opt.start));
    const double escape = qwalk::infinite_hitting_probability(projector, psi0);

    Table table;
    table.columns = {"row_type",     "eigenvalue_re", "eigenvalue_im",
                     "multiplicity", "avoiding_dim",  "sigma_min",
                     "rank_stable",  "escape_probability", "projector_rank",
                     "ambiguous"};
    for (const auto& cluster : projector.cluster_overlaps) {
        table.rows.push_back({"cluster", fmt(cluster.eigenvalue.real()),
                              fmt(cluster.eigenvalue.imag()),
                              fmt(cluster.multiplicity), fmt(cluster.avoiding_dim),
                              fmt(cluster.sigma_min), fmt(cluster.rank_stable), "",
                              "", ""});
    }
    table.rows.push_back({"summary", "", "", "", "", "", "", fmt(escape),
                          fmt(projector.rank), fmt(report.ambiguous)});
    write_output(opt.output, opt.format, "spectral", table);
    if (!opt.output.empty() && opt.output != "-") {
        std::cout << "escape_probability " << fmt(escape) << "\n";
    }
    return 0;
}

// ----------------------------------------------------------------------
// sweep: fig1, fig23, fig4 data files.

int cmd_sweep(const Options& opt, const std::string& figure) {
    const Index budget = superop_budget();
    Table table;

    if (figure == "fig1") {
        const auto [lo, hi] = parse_range(opt.n_range, 2, 20);
        if (lo < 2) {
            throw qwalk::ConfigurationError("fig1 needs n >= 2 (reduced walk)");
        }
        table.columns = {"n",      "tau_classical", "tau_quantum_closed",
                         "tau_quantum_est", "absorbed_closed", "absorbed_est",
                         "epsilon", "t_max", "solver_tol"};
        const long points = hi - lo + 1;
        table.rows.resize(std::size_t(points));
        run_pool(points, opt.threads, [&](long i) {
            const int n = lo + int(i);
            const double classical =
                qwalk::classical_hitting_recursion(n).tau_by_weight[0];
            const auto closed = qwalk::reduced_hitting_time(
                n, qwalk::Method::ClosedForm, opt.epsilon, opt.t_max, budget);
            const auto est = qwalk::reduced_hitting_time(
                n, qwalk::Method::Iterative, opt.epsilon, opt.t_max, budget);
            table.rows[std::size_t(i)] = {
                fmt(long(n)),        fmt(classical),      fmt(closed.tau),
                fmt(est.tau),        fmt(closed.absorption), fmt(est.absorption),
                fmt(opt.epsilon),    fmt(opt.t_max),
                fmt(closed.tolerances.solver_tol)};
        });
    } else if (figure == "fig23") {
        const auto [lo, hi] = parse_range(opt.n_range, 10, 20);
        if (lo < 2) {
            throw qwalk::ConfigurationError("fig23 needs n >= 2 (reduced walk)");
        }
        const std::vector<double> epsilons =
            opt.epsilons.empty()
                ? std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}
                : parse_epsilon_list(opt.epsilons);
        table.columns = {"n",     "epsilon",  "tau_est", "stopping_time",
                         "absorbed", "converged", "t_max"};
        const long dims = hi - lo + 1;
        const long points = dims * long(epsilons.size());
        table.rows.resize(std::size_t(points));
        run_pool(dims, opt.threads, [&](long i) {
            const int n = lo + int(i);
            // One series at the tightest epsilon serves every estimate.
            const double tightest =
                *std::min_element(epsilons.begin(), epsilons.end());
            const auto evolution = qwalk::reduced_evolution(n);
            const qwalk::ReducedBasis basis(n);
            const Index absorbing[] = {basis.down_index(n)};
            qwalk::Vector start = qwalk::Vector::Zero(basis.size());
            start[basis.up_index(0)] = qwalk::Complex(1.0, 0.0);
            const auto series = qwalk::first_crossing_series(
                evolution.sparse(), absorbing, start, opt.t_max, tightest);
            for (std::size_t e = 0; e < epsilons.size(); ++e) {
                const double epsilon = epsilons[e];
                // Truncate at this epsilon's stopping time.
                const auto& cumulative = series.cumulative();
                long stop = series.t_max();
                bool converged = false;
                for (std::size_t t = 0; t < cumulative.size(); ++t) {
                    if (cumulative[t] > 1.0 - epsilon) {
                        stop = long(t + 1);
                        converged = true;
                        break;
                    }
                }
                double tau_est = 0.0, absorbed = 0.0;
                const long upto = converged ? stop : series.length();
                for (long t = 1; t <= upto; ++t) {
                    tau_est += double(t) * series.probabilities()[std::size_t(t - 1)];
                    absorbed += series.probabilities()[std::size_t(t - 1)];
                }
                table.rows[std::size_t(i) * epsilons.size() + e] = {
                    fmt(long(n)),  fmt(epsilon),   fmt(tau_est), fmt(stop),
                    fmt(absorbed), fmt(converged), fmt(opt.t_max)};
            }
        });
    } else if (figure == "fig4") {
        const auto [lo, hi] = parse_range(opt.n_range, 4, 6);
        if (lo < 2) {
            throw qwalk::ConfigurationError("fig4 needs n >= 2 (face rewiring)");
        }
        table.columns = {"n",           "tau_classical", "tau_regular",
                         "tau_distorted", "absorbed_regular", "absorbed_distorted",
                         "epsilon",     "t_max"};
        const long points = hi - lo + 1;
        table.rows.resize(std::size_t(points));
        run_pool(points, opt.threads, [&](long i) {
            const int n = lo + int(i);
            const double classical =
                qwalk::classical_hitting_recursion(n).tau_by_weight[0];
            Options point = opt;
            point.coin = "grover";
            point.graph = "regular";
            const auto regular = run_quantum_point(point, n, "iterative");
            point.graph = "distorted";
            const auto distorted = run_quantum_point(point, n, "iterative");
            table.rows[std::size_t(i)] = {fmt(long(n)),
                                          fmt(classical),
                                          fmt(regular.tau),
                                          fmt(distorted.tau),
                                          fmt(regular.absorption),
                                          fmt(distorted.absorption),
                                          fmt(opt.epsilon),
                                          fmt(opt.t_max)};
        });
    } else {
        throw qwalk::ConfigurationError("unknown sweep '" + figure +
                                        "' (expected fig1, fig23 or fig4)");
    }

    write_output(opt.output, opt.format, "sweep " + figure, table);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hitting times of measured coined quantum walks on hypercubes"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from a TOML/INI file");

    Options opt;
    std::string figure;

    const auto add_common = [&opt](CLI::App* cmd) {
        cmd->add_option("--coin", opt.coin, "Coin family: grover, dft, hadamard");
        cmd->add_option("--graph", opt.graph, "Graph: regular or distorted");
        cmd->add_option("--epsilon", opt.epsilon, "Series truncation epsilon");
        cmd->add_option("--t-max", opt.t_max, "Iterative step cap");
        cmd->add_option("--seed", opt.seed, "Monte Carlo master seed");
        cmd->add_option("--start", opt.start, "Start vertex (default 0)");
        cmd->add_option("--final", opt.final_vertex,
                        "Final vertex (default all-ones)");
        cmd->add_option("-o,--output", opt.output, "Output path (default stdout)");
        cmd->add_option("--format", opt.format, "Output format: csv or json");
    };

    auto* quantum = app.add_subcommand("quantum", "Quantum hitting time");
    quantum->add_option("--n", opt.n, "Hypercube dimension");
    quantum->add_option("--method", opt.method,
                        "closed, iterative, reduced or auto");
    add_common(quantum);

    auto* classical = app.add_subcommand("classical", "Classical hitting time");
    classical->add_option("--n", opt.n, "Hypercube dimension");
    classical->add_option("--trials", opt.trials, "Monte Carlo trials (0 = skip)");
    add_common(classical);

    auto* spectral = app.add_subcommand("spectral", "Eigenstructure certificate");
    spectral->add_option("--n", opt.n, "Hypercube dimension");
    spectral->add_option("--tol-cluster", opt.tol_cluster, "Eigenvalue cluster tolerance");
    spectral->add_option("--tol-rank", opt.tol_rank, "Overlap rank threshold");
    add_common(spectral);
    spectral->get_option("--coin")->default_str("dft");

    auto* sweep = app.add_subcommand("sweep", "Figure data sweeps");
    sweep->add_option("figure", figure, "fig1, fig23 or fig4")->required();
    sweep->add_option("--n", opt.n_range, "Dimension range a..b");
    sweep->add_option("--epsilons", opt.epsilons,
                      "Comma list of epsilons (fig23)");
    sweep->add_option("--threads", opt.threads, "Worker threads (0 = auto)");
    add_common(sweep);

    // spectral defaults to the DFT coin, the headline certificate case.
    spectral->parse_complete_callback([&]() {
        if (spectral->get_option("--coin")->count() == 0) opt.coin = "dft";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help, --version
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (quantum->parsed()) return cmd_quantum(opt);
        if (classical->parsed()) return cmd_classical(opt);
        if (spectral->parsed()) return cmd_spectral(opt);
        if (sweep->parsed()) return cmd_sweep(opt, figure);
        return kExitUsage;
    } catch (const qwalk::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const qwalk::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const qwalk::ConfigurationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qwalk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

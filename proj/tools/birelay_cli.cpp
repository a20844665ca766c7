// Command-line front end: rate comparisons over fading ensembles, the
// closed-form gap profile, single-point allocations, and the symbol-level
// lattice simulator. Every subcommand is deterministic for a given flag set;
// the generated_at stamp is the only field that varies between identical
// runs.

#include <atomic>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "birelay/achievable.hpp"
#include "birelay/channel.hpp"
#include "birelay/closed_form.hpp"
#include "birelay/io.hpp"
#include "birelay/lattice.hpp"
#include "birelay/solver.hpp"
#include "birelay/version.hpp"

using birelay::format_double;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitRowFailures = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_db_range(const std::string& spec) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = spec.find(':', start);
        const std::string token = spec.substr(
            start, colon == std::string::npos ? colon : colon - start);
        std::size_t used = 0;
        parts.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument("bad number");
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 3)
        throw std::invalid_argument("range must be min:max:step");
    const double lo = parts[0];
    const double hi = parts[1];
    const double step = parts[2];
    if (!(step > 0.0)) throw std::invalid_argument("range step must be > 0");
    if (hi < lo) throw std::invalid_argument("range max must be >= min");
    std::vector<double> points;
    for (int k = 0;; ++k) {
        const double value = lo + k * step;
        if (value > hi + 1e-9 * step) break;
        points.push_back(value);
    }
    return points;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::string token = csv.substr(
            start, comma == std::string::npos ? comma : comma - start);
        if (!token.empty()) items.push_back(token);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

void run_parallel(int n_tasks, int workers,
                  const std::function<void(int)>& body) {
    if (workers <= 1 || n_tasks <= 1) {
        for (int i = 0; i < n_tasks; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int n_threads = std::min(workers, n_tasks);
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1))
                body(i);
        });
    for (auto& thread : pool) thread.join();
}

std::string scalar_to_string(const ordered_json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    if (value.is_number_float()) return format_double(value.get<double>());
    return value.dump();
}

// One result table in either format. CSV carries the run metadata as '#'
// comment lines; JSON carries it as top-level fields plus a params object.
void emit_table(std::ostream& out, const std::string& format,
                const std::string& command, const ordered_json& params,
                const ordered_json& extras,
                const std::vector<std::string>& columns,
                const ordered_json& rows) {
    const std::string stamp = birelay::iso8601_utc_now();
    if (format == "json") {
        ordered_json doc;
        doc["tool"] = birelay::kToolName;
        doc["version"] = birelay::kToolVersion;
        doc["command"] = command;
        doc["generated_at"] = stamp;
        doc["params"] = params;
        for (const auto& [key, value] : extras.items()) doc[key] = value;
        doc["rows"] = rows;
        out << doc.dump(2) << '\n';
        return;
    }
    out << "# tool: " << birelay::kToolName << '\n';
    out << "# version: " << birelay::kToolVersion << '\n';
    out << "# command: " << command << '\n';
    out << "# generated_at: " << stamp << '\n';
    for (const auto& [key, value] : params.items())
        out << "# " << key << ": " << scalar_to_string(value) << '\n';
    for (const auto& [key, value] : extras.items())
        out << "# " << key << ": " << scalar_to_string(value) << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << scalar_to_string(row.at(columns[i]));
        out << '\n';
    }
}

// Rows that threw are reported as a JSON list on stderr so callers can tell
// which parameter points failed; surviving rows are still written.
int finish_table(const std::string& out_path, const std::string& format,
                 const std::string& command, const ordered_json& params,
                 const ordered_json& extras,
                 const std::vector<std::string>& columns,
                 const ordered_json& rows, const ordered_json& failures) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (out_path != "-") {
        file.open(out_path);
        if (!file) {
            std::cerr << "error: cannot open " << out_path << " for writing\n";
            return kExitUsage;
        }
        out = &file;
    }
    emit_table(*out, format, command, params, extras, columns, rows);
    if (!failures.empty()) {
        std::cerr << failures.dump() << '\n';
        return kExitRowFailures;
    }
    return 0;
}

struct CompareOptions {
    std::size_t intervals = 100;
    std::uint64_t seed = 42;
    double variance = 1.0;
    double delta = 0.5;
    std::string power_db_range = "0:30:5";
    std::string schemes = "upper_bound,lattice_achievable,amplify_forward";
    bool af_optimize = false;
    int workers = 1;
    std::string format = "csv";
    std::string out = "-";
};

int run_compare(const CompareOptions& opt) {
    const std::vector<double> db_points = parse_db_range(opt.power_db_range);
    const std::vector<std::string> schemes = split_list(opt.schemes);
    if (schemes.empty()) {
        std::cerr << "error: --schemes must name at least one scheme\n";
        return kExitUsage;
    }
    for (const auto& scheme : schemes)
        if (scheme != "upper_bound" && scheme != "lattice_achievable" &&
            scheme != "amplify_forward") {
            std::cerr << "error: unknown scheme '" << scheme
                      << "' (expected upper_bound, lattice_achievable or "
                         "amplify_forward)\n";
            return kExitUsage;
        }

    const birelay::FadingEnsemble ensemble =
        birelay::sample_rayleigh(opt.intervals, opt.seed, opt.variance);

    const int n_tasks = static_cast<int>(db_points.size() * schemes.size());
    std::vector<double> rates(n_tasks, 0.0);
    std::vector<std::string> errors(n_tasks);
    run_parallel(n_tasks, opt.workers, [&](int i) {
        const double p_db = db_points[i / schemes.size()];
        const std::string& scheme = schemes[i % schemes.size()];
        birelay::SolverConfig config;
        config.delta = opt.delta;
        config.total_power = std::pow(10.0, p_db / 10.0);
        try {
            if (scheme == "upper_bound") {
                rates[i] = birelay::solve_upper_bound(ensemble, config).rate_bits;
            } else if (scheme == "lattice_achievable") {
                rates[i] = birelay::solve_achievable(ensemble, config).rate_bits;
            } else {
                double total = 0.0;
                for (const auto& ch : ensemble.realizations) {
                    const birelay::AllocationTriple alloc =
                        opt.af_optimize
                            ? birelay::af_allocation_optimized(
                                  ch, config.total_power, config.delta)
                            : birelay::af_allocation(config.total_power,
                                                     config.delta);
                    const birelay::RatePair pair =
                        birelay::amplify_forward_rate(ch, alloc, config.delta);
                    total += pair.r_ab + pair.r_ba;
                }
                rates[i] = total / static_cast<double>(ensemble.size());
            }
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    ordered_json rows = ordered_json::array();
    ordered_json failures = ordered_json::array();
    for (int i = 0; i < n_tasks; ++i) {
        const double p_db = db_points[i / schemes.size()];
        const std::string& scheme = schemes[i % schemes.size()];
        if (!errors[i].empty()) {
            failures.push_back({{"P_dB", p_db},
                                {"scheme", scheme},
                                {"error", errors[i]}});
            continue;
        }
        rows.push_back({{"P_linear", std::pow(10.0, p_db / 10.0)},
                        {"P_dB", p_db},
                        {"scheme", scheme},
                        {"rate_bits", rates[i]}});
    }

    ordered_json params;
    params["L"] = opt.intervals;
    params["seed"] = opt.seed;
    params["variance"] = opt.variance;
    params["delta"] = opt.delta;
    params["power_db_range"] = opt.power_db_range;
    params["schemes"] = opt.schemes;
    params["af_optimize"] = opt.af_optimize;
    params["workers"] = opt.workers;
    return finish_table(opt.out, opt.format, "compare", params,
                        ordered_json::object(),
                        {"P_linear", "P_dB", "scheme", "rate_bits"}, rows,
                        failures);
}

struct GapOptions {
    double grid_min = 0.01;
    double grid_max = 100.0;
    int points = 201;
    std::string format = "csv";
    std::string out = "-";
};

int run_gap(const GapOptions& opt) {
    const birelay::GapProfile profile =
        birelay::gap_sweep(opt.grid_min, opt.grid_max, opt.points);
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < profile.grid.size(); ++i)
        rows.push_back({{"kappa_sq", profile.grid[i]},
                        {"gap_bits", profile.gap_bits[i]}});
    ordered_json params;
    params["grid_min"] = opt.grid_min;
    params["grid_max"] = opt.grid_max;
    params["points"] = opt.points;
    ordered_json extras;
    extras["eta"] = profile.eta;
    extras["argmax_kappa_sq"] = profile.argmax_kappa_sq;
    return finish_table(opt.out, opt.format, "gap", params, extras,
                        {"kappa_sq", "gap_bits"}, rows,
                        ordered_json::array());
}

struct AllocOptions {
    double kappa_sq = 1.0;
    double power = 1.0;
    std::string scheme = "upper_bound";
    std::string model = "exact";
};

int run_alloc(const AllocOptions& opt) {
    std::string scheme = opt.scheme;
    if (scheme == "achievable") scheme = "lattice_achievable";
    if (scheme != "upper_bound" && scheme != "lattice_achievable") {
        std::cerr << "error: unknown scheme '" << opt.scheme
                  << "' (expected upper_bound or lattice_achievable)\n";
        return kExitUsage;
    }
    if (opt.model != "exact" && opt.model != "highsnr") {
        std::cerr << "error: unknown rate model '" << opt.model
                  << "' (expected exact or highsnr)\n";
        return kExitUsage;
    }
    const birelay::AllocationTriple alloc =
        scheme == "upper_bound"
            ? birelay::allocate_ub_highsnr(opt.kappa_sq, opt.power)
            : birelay::allocate_ach_highsnr(opt.kappa_sq, opt.power);
    const birelay::ChannelRealization realization(
        {std::sqrt(opt.kappa_sq), 0.0}, {1.0, 0.0});
    const birelay::RatePair rates = birelay::highsnr_exchange_rate(
        realization, alloc,
        opt.model == "exact" ? birelay::RateModel::exact
                             : birelay::RateModel::high_snr);
    std::cout << "scheme=" << scheme << " kappa_sq="
              << format_double(opt.kappa_sq) << " total_power="
              << format_double(opt.power) << " model=" << opt.model << '\n';
    std::cout << "P_a=" << format_double(alloc.p_a)
              << " P_b=" << format_double(alloc.p_b)
              << " P_r=" << format_double(alloc.p_r) << '\n';
    std::cout << "r_ab=" << format_double(rates.r_ab)
              << " r_ba=" << format_double(rates.r_ba) << '\n';
    return 0;
}

struct LatticeSimOptions {
    double kappa_sq = 1.0;
    int fine_per_coarse = 4;
    int n_symbols = 20000;
    std::string snr_db_range = "0:30:5";
    double p_lambda = 1.0;
    double p_r_factor = 1.0;
    bool noiseless = false;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string format = "csv";
    std::string out = "-";
};

int run_lattice_sim(const LatticeSimOptions& opt) {
    const std::vector<double> snr_points = parse_db_range(opt.snr_db_range);
    const birelay::ChannelRealization realization(
        {std::sqrt(opt.kappa_sq), 0.0}, {1.0, 0.0});
    const double g_min =
        std::min(realization.gain_a(), realization.gain_b());

    const int n_tasks = static_cast<int>(snr_points.size());
    std::vector<birelay::TrialReport> reports(n_tasks);
    std::vector<std::string> errors(n_tasks);
    run_parallel(n_tasks, opt.workers, [&](int i) {
        birelay::LatticeTrialConfig config;
        config.p_lambda = opt.p_lambda;
        config.p_r = opt.p_r_factor * opt.p_lambda / g_min;
        config.fine_per_coarse = opt.fine_per_coarse;
        config.n_symbols = opt.n_symbols;
        config.seed = opt.seed;
        config.noise_variance =
            opt.noiseless
                ? 0.0
                : opt.p_lambda / std::pow(10.0, snr_points[i] / 10.0);
        try {
            reports[i] = birelay::run_trial(realization, config);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    ordered_json rows = ordered_json::array();
    ordered_json failures = ordered_json::array();
    for (int i = 0; i < n_tasks; ++i) {
        if (!errors[i].empty()) {
            failures.push_back(
                {{"snr_db", snr_points[i]}, {"error", errors[i]}});
            continue;
        }
        rows.push_back({{"snr_db", snr_points[i]},
                        {"relay_ser", reports[i].relay_ser},
                        {"end_to_end_ser_a", reports[i].end_to_end_ser_a},
                        {"end_to_end_ser_b", reports[i].end_to_end_ser_b}});
    }

    ordered_json params;
    params["kappa_sq"] = opt.kappa_sq;
    params["m"] = opt.fine_per_coarse;
    params["symbols"] = opt.n_symbols;
    params["snr_db_range"] = opt.snr_db_range;
    params["p_lambda"] = opt.p_lambda;
    params["p_r_factor"] = opt.p_r_factor;
    params["noiseless"] = opt.noiseless;
    params["seed"] = opt.seed;
    params["workers"] = opt.workers;
    return finish_table(opt.out, opt.format, "lattice-sim", params,
                        ordered_json::object(),
                        {"snr_db", "relay_ser", "end_to_end_ser_a",
                         "end_to_end_ser_b"},
                        rows, failures);
}

struct SampleChannelsOptions {
    std::size_t intervals = 100;
    std::uint64_t seed = 42;
    double variance = 1.0;
    std::string out = "-";
};

int run_sample_channels(const SampleChannelsOptions& opt) {
    const birelay::FadingEnsemble ensemble =
        birelay::sample_rayleigh(opt.intervals, opt.seed, opt.variance);
    if (opt.out == "-") {
        birelay::save_ensemble(ensemble, std::cout);
        return 0;
    }
    std::ofstream file(opt.out);
    if (!file) {
        std::cerr << "error: cannot open " << opt.out << " for writing\n";
        return kExitUsage;
    }
    birelay::save_ensemble(ensemble, file);
    return 0;
}

void add_format_flags(CLI::App* sub, std::string& format, std::string& out) {
    sub->add_option("--format", format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out, "Output path, or - for stdout");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exchange rates for two-phase bi-directional relaying over "
                 "block-fading channels"};
    app.set_config("--config");
    app.require_subcommand(1);

    CompareOptions compare_opt;
    CLI::App* compare = app.add_subcommand(
        "compare", "Ensemble-average rates of the bound, the lattice scheme "
                   "and amplify-forward over a power sweep");
    compare->configurable();
    compare->add_option("--L", compare_opt.intervals, "Fading intervals")
        ->check(CLI::PositiveNumber);
    compare->add_option("--seed", compare_opt.seed, "Ensemble seed");
    compare->add_option("--variance", compare_opt.variance,
                        "Fading gain variance E[|h|^2]");
    compare->add_option("--delta", compare_opt.delta, "MAC share of the block");
    compare->add_option("--power-db-range", compare_opt.power_db_range,
                        "Budget sweep min:max:step in dB");
    compare->add_option("--schemes", compare_opt.schemes,
                        "Comma list of upper_bound, lattice_achievable, "
                        "amplify_forward");
    compare->add_flag("--af-optimize", compare_opt.af_optimize,
                      "Tune the amplify-forward split per interval");
    compare->add_option("--workers", compare_opt.workers, "Worker threads")
        ->check(CLI::PositiveNumber);
    add_format_flags(compare, compare_opt.format, compare_opt.out);

    GapOptions gap_opt;
    CLI::App* gap = app.add_subcommand(
        "gap", "High-power rate gap between the bound and the lattice scheme "
               "over a gain-ratio grid");
    gap->configurable();
    gap->add_option("--grid-min", gap_opt.grid_min, "Smallest kappa^2")
        ->check(CLI::PositiveNumber);
    gap->add_option("--grid-max", gap_opt.grid_max, "Largest kappa^2")
        ->check(CLI::PositiveNumber);
    gap->add_option("--points", gap_opt.points, "Grid size")
        ->check(CLI::Range(2, 1000000));
    add_format_flags(gap, gap_opt.format, gap_opt.out);

    AllocOptions alloc_opt;
    CLI::App* alloc = app.add_subcommand(
        "alloc", "Closed-form high-power allocation and rates at one gain "
                 "ratio");
    alloc->configurable();
    alloc->add_option("--kappa-sq", alloc_opt.kappa_sq, "Gain ratio")
        ->required()
        ->check(CLI::PositiveNumber);
    alloc->add_option("--power", alloc_opt.power, "Sum power budget")
        ->required()
        ->check(CLI::PositiveNumber);
    alloc->add_option("--scheme", alloc_opt.scheme,
                      "upper_bound or lattice_achievable");
    alloc->add_option("--model", alloc_opt.model,
                      "Rate model: exact or highsnr");

    LatticeSimOptions sim_opt;
    CLI::App* sim = app.add_subcommand(
        "lattice-sim", "Symbol-level error rates of the nested-lattice "
                       "relaying chain");
    sim->configurable();
    sim->add_option("--kappa-sq", sim_opt.kappa_sq, "Gain ratio")
        ->check(CLI::PositiveNumber);
    sim->add_option("--m", sim_opt.fine_per_coarse,
                    "Residues per real component")
        ->check(CLI::Range(2, 1 << 20));
    sim->add_option("--symbols", sim_opt.n_symbols, "Symbols per trial")
        ->check(CLI::PositiveNumber);
    sim->add_option("--snr-db-range", sim_opt.snr_db_range,
                    "Relay SNR sweep min:max:step in dB");
    sim->add_option("--p-lambda", sim_opt.p_lambda,
                    "Aligned lattice power at the relay")
        ->check(CLI::PositiveNumber);
    sim->add_option("--p-r-factor", sim_opt.p_r_factor,
                    "Relay power as a multiple of the downlink minimum");
    sim->add_flag("--noiseless", sim_opt.noiseless, "Disable all noise");
    sim->add_option("--seed", sim_opt.seed, "Trial seed");
    sim->add_option("--workers", sim_opt.workers, "Worker threads")
        ->check(CLI::PositiveNumber);
    add_format_flags(sim, sim_opt.format, sim_opt.out);

    SampleChannelsOptions sample_opt;
    CLI::App* sample = app.add_subcommand(
        "sample-channels", "Draw a reproducible fading ensemble as a text "
                           "table");
    sample->configurable();
    sample->add_option("--L", sample_opt.intervals, "Fading intervals")
        ->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_opt.seed, "Ensemble seed");
    sample->add_option("--variance", sample_opt.variance,
                       "Fading gain variance E[|h|^2]");
    sample->add_option("--out", sample_opt.out,
                       "Output path, or - for stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compare->parsed()) return run_compare(compare_opt);
        if (gap->parsed()) return run_gap(gap_opt);
        if (alloc->parsed()) return run_alloc(alloc_opt);
        if (sim->parsed()) return run_lattice_sim(sim_opt);
        if (sample->parsed()) return run_sample_channels(sample_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return 0;
}

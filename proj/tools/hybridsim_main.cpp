// hybridsim — command-line front end for the modelling workbench.
//
// Subcommands:
//   simulate    run one replication of a model, write firing/sample CSVs
//   experiment  Monte Carlo estimation over many replications
//   metrics     size/complexity measures for source files
//   diff        code-line difference and relative change between two files
//   report      comparison tables over the shipped model corpus
//
// Exit codes: 0 success, 2 usage or input error, 3 runtime error.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "hybridsim/cases/heated_room.hpp"
#include "hybridsim/dsl/elaborator.hpp"
#include "hybridsim/engine/simulator.hpp"
#include "hybridsim/engine/trace_io.hpp"
#include "hybridsim/errors.hpp"
#include "hybridsim/mc/experiment.hpp"
#include "hybridsim/mc/result_io.hpp"
#include "hybridsim/metrics/diff.hpp"
#include "hybridsim/metrics/profile.hpp"
#include "hybridsim/metrics/report.hpp"

namespace {

using namespace hybridsim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

/// Thrown by handlers for problems in what the user supplied (bad paths,
/// malformed input) as opposed to failures while computing.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_input_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw InputError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::ofstream open_output_file(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw InputError("cannot write '" + path.string() + "'");
    return out;
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
    std::filesystem::path path(dir.empty() ? "." : dir);
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw InputError("cannot create output directory '" + path.string() + "'");
    return path;
}

std::string fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    return buffer;
}

// --- simulate ---------------------------------------------------------------

struct SimulateOptions {
    std::string model;
    double horizon = 100.0;
    double step = 0.01;
    double grid = 0.1;
    std::uint64_t seed = 0;
    std::uint64_t replication = 0;
    std::string out = ".";
};

int run_simulate(const SimulateOptions& options) {
    const auto elaborated = dsl::elaborate_file(options.model);

    engine::EngineConfig config;
    config.horizon = options.horizon;
    config.step_size = options.step;
    config.sample_grid = options.grid;
    config.seed = options.seed;
    engine::validate(config);

    const auto trace =
        engine::run_replication(elaborated.model, config, options.replication);

    const auto out_dir = prepare_out_dir(options.out);
    const long run = static_cast<long>(options.replication);
    {
        auto out = open_output_file(out_dir / "firings.csv");
        engine::write_firings_header(out);
        engine::write_firings(out, elaborated.model, trace, run);
    }
    {
        auto out = open_output_file(out_dir / "samples.csv");
        engine::write_samples_header(out);
        engine::write_samples(out, elaborated.model, trace, run);
    }
    std::cout << "simulated " << elaborated.system_name << " to t=" << options.horizon
              << ": " << trace.firings.size() << " firings, " << trace.samples.size()
              << " samples -> " << (out_dir / "firings.csv").string() << ", "
              << (out_dir / "samples.csv").string() << "\n";
    return kExitOk;
}

// --- experiment --------------------------------------------------------------

struct ExperimentOptions {
    std::string model;
    int runs = 100;
    double horizon = 100.0;
    double step = 0.01;
    double grid = 0.1;
    std::uint64_t seed = 0;
    int threads = 1;
    std::vector<std::string> none_active;
    std::string out = ".";
};

int run_experiment_command(const ExperimentOptions& options) {
    const auto elaborated = dsl::elaborate_file(options.model);

    mc::ExperimentSpec spec;
    spec.engine.horizon = options.horizon;
    spec.engine.step_size = options.step;
    spec.engine.sample_grid = options.grid;
    spec.engine.seed = options.seed;
    engine::validate(spec.engine);
    spec.replications = options.runs;
    spec.threads = options.threads;
    if (!options.none_active.empty()) {
        spec.statistics.push_back({mc::StatisticRequest::Kind::StateFractions, "", ""});
        spec.statistics.push_back({mc::StatisticRequest::Kind::Trajectories, "", ""});
        for (const auto& probe : options.none_active) {
            const auto dot = probe.find('.');
            if (dot == std::string::npos || dot == 0 || dot + 1 == probe.size())
                throw InputError("--none-active expects Automaton.State, got '" + probe + "'");
            spec.statistics.push_back({mc::StatisticRequest::Kind::NoneActiveFraction,
                                       probe.substr(0, dot), probe.substr(dot + 1)});
        }
    }

    const auto result = mc::run_experiment(elaborated.model, spec);

    const auto out_dir = prepare_out_dir(options.out);
    {
        auto out = open_output_file(out_dir / "results.csv");
        mc::write_results_csv(out, result);
    }
    {
        auto out = open_output_file(out_dir / "clusters.csv");
        mc::write_clusters_csv(out, result);
    }
    if (!result.trajectories.empty()) {
        auto out = open_output_file(out_dir / "trajectory.csv");
        mc::write_trajectory_csv(out, result);
    }
    std::cout << "ran " << result.replications << " replications of "
              << elaborated.system_name << " to t=" << options.horizon << ": "
              << result.statistics.size() << " statistics, " << result.clusters.size()
              << " end-state clusters -> " << (out_dir / "results.csv").string() << "\n";
    return kExitOk;
}

// --- metrics ------------------------------------------------------------------

struct MetricsOptions {
    std::vector<std::string> files;
    std::string profile = "model-dsl";
    std::string out;  ///< empty = stdout
};

int run_metrics(const MetricsOptions& options) {
    const auto profile = metrics::resolve_profile(options.profile);

    std::ostringstream table;
    table << "file,code,comment,blank,distinct_operators,distinct_operands,"
             "total_operators,total_operands,volume,average_cc,average_mi\n";
    for (const auto& path : options.files) {
        const auto analysis = metrics::analyze_text(read_input_file(path), profile);
        for (const auto& warning : analysis.warnings)
            std::cerr << path << ": warning: " << warning << "\n";
        table << path << ',' << analysis.lines.code << ',' << analysis.lines.comment
              << ',' << analysis.lines.blank << ',' << analysis.halstead.distinct_operators
              << ',' << analysis.halstead.distinct_operands << ','
              << analysis.halstead.total_operators << ','
              << analysis.halstead.total_operands << ','
              << fixed(analysis.halstead.volume(), 6) << ','
              << fixed(analysis.average_cc, 6) << ','
              << fixed(analysis.average_mi_raw, 6) << "\n";
    }
    if (options.out.empty()) {
        std::cout << table.str();
    } else {
        auto out = open_output_file(options.out);
        out << table.str();
    }
    return kExitOk;
}

// --- diff ---------------------------------------------------------------------

struct DiffOptions {
    std::string old_file;
    std::string new_file;
    std::string profile = "model-dsl";
    std::string out;  ///< empty = stdout
};

int run_diff(const DiffOptions& options) {
    const auto profile = metrics::resolve_profile(options.profile);
    const auto old_text = read_input_file(options.old_file);
    const auto new_text = read_input_file(options.new_file);

    const auto counts = metrics::diff_versions(old_text, new_text, profile);
    const auto target_loc =
        static_cast<long long>(metrics::code_lines(new_text, profile).size());
    const double percent = metrics::rloc_percent(counts, target_loc);

    std::ostringstream table;
    table << "old,new,same,modified,added,removed,loc_target,rloc_percent\n"
          << options.old_file << ',' << options.new_file << ',' << counts.same << ','
          << counts.modified << ',' << counts.added << ',' << counts.removed << ','
          << target_loc << ',' << fixed(percent, 2) << "\n";
    if (options.out.empty()) {
        std::cout << table.str();
    } else {
        auto out = open_output_file(options.out);
        out << table.str();
    }
    return kExitOk;
}

// --- report ---------------------------------------------------------------------

struct ReportOptions {
    std::string cases_dir;
    std::string profile = "model-dsl";
    std::string out = ".";
};

int run_report(const ReportOptions& options) {
    const auto profile = metrics::resolve_profile(options.profile);

    metrics::ReportSpec spec;
    spec.root = options.cases_dir;
    for (const auto& entry : cases::catalog())
        spec.cases.push_back({entry.name, entry.files});
    spec.pairs = {
        {"case0", "case1"},   {"case1", "case2"},
        {"case0a", "case1a"}, {"case1a", "case2a"},
    };
    spec.out_dir = options.out;
    metrics::write_report(spec, profile);

    std::cout << "wrote comparison tables for " << spec.cases.size() << " cases to "
              << prepare_out_dir(options.out).string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybridsim — stochastic hybrid model workbench"};
    app.require_subcommand(1);

    SimulateOptions simulate_options;
    auto* simulate = app.add_subcommand(
        "simulate", "Run one replication and write firing/sample CSVs");
    simulate->add_option("model", simulate_options.model, "Model file")->required();
    simulate->add_option("--horizon", simulate_options.horizon, "End of simulated time")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--step", simulate_options.step, "Integration step size")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--grid", simulate_options.grid,
                         "Sample spacing; 0 disables sampling");
    simulate->add_option("--seed", simulate_options.seed, "Random seed");
    simulate->add_option("--replication", simulate_options.replication,
                         "Replication index selecting the random stream");
    simulate->add_option("--out", simulate_options.out, "Output directory");

    ExperimentOptions experiment_options;
    auto* experiment = app.add_subcommand(
        "experiment", "Monte Carlo estimation over many replications");
    experiment->add_option("model", experiment_options.model, "Model file")->required();
    experiment->add_option("--runs", experiment_options.runs, "Number of replications")
        ->check(CLI::PositiveNumber);
    experiment->add_option("--horizon", experiment_options.horizon, "End of simulated time")
        ->check(CLI::NonNegativeNumber);
    experiment->add_option("--step", experiment_options.step, "Integration step size")
        ->check(CLI::PositiveNumber);
    experiment->add_option("--grid", experiment_options.grid,
                           "Sample spacing; 0 disables trajectories");
    experiment->add_option("--seed", experiment_options.seed, "Base random seed");
    experiment->add_option("--threads", experiment_options.threads, "Worker threads")
        ->check(CLI::PositiveNumber);
    experiment->add_option("--none-active", experiment_options.none_active,
                           "Also estimate the time share with no instance in "
                           "Automaton.State (repeatable)");
    experiment->add_option("--out", experiment_options.out, "Output directory");

    MetricsOptions metrics_options;
    auto* metrics_cmd =
        app.add_subcommand("metrics", "Size and complexity measures per source file");
    metrics_cmd->add_option("files", metrics_options.files, "Source files")->required();
    metrics_cmd->add_option("--profile", metrics_options.profile,
                            "Language profile name or file");
    metrics_cmd->add_option("--out", metrics_options.out,
                            "Write the table here instead of stdout");

    DiffOptions diff_options;
    auto* diff_cmd = app.add_subcommand(
        "diff", "Code-line difference and relative change between two files");
    diff_cmd->add_option("old", diff_options.old_file, "Old version")->required();
    diff_cmd->add_option("new", diff_options.new_file, "New version")->required();
    diff_cmd->add_option("--profile", diff_options.profile,
                         "Language profile name or file");
    diff_cmd->add_option("--out", diff_options.out,
                         "Write the table here instead of stdout");

    ReportOptions report_options;
    auto* report = app.add_subcommand(
        "report", "Comparison tables over the shipped model corpus");
    report->add_option("--cases", report_options.cases_dir, "Corpus root directory")
        ->required();
    report->add_option("--profile", report_options.profile,
                       "Language profile name or file");
    report->add_option("--out", report_options.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*simulate) return run_simulate(simulate_options);
        if (*experiment) return run_experiment_command(experiment_options);
        if (*metrics_cmd) return run_metrics(metrics_options);
        if (*diff_cmd) return run_diff(diff_options);
        if (*report) return run_report(report_options);
        std::cerr << "error: no subcommand\n";
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hybridsim::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hybridsim::ElaborationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hybridsim::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hybridsim::TokenError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hybridsim::ReportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hybridsim::Error& e) {
        // Engine and experiment failures: the inputs were well-formed but the
        // computation could not finish.
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

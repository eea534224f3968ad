#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hybridsim/engine/config.hpp"
#include "hybridsim/engine/trace.hpp"
#include "hybridsim/kernel/system_model.hpp"

namespace hybridsim::mc {

/// One statistic family the experiment collects.
struct StatisticRequest {
    enum class Kind {
        /// Time share of every (instance, automaton, state) triple.
        StateFractions,
        /// Time share during which *no* instance keeps the named automaton
        /// in the named state — e.g. "no heater's Function automaton is OK".
        NoneActiveFraction,
        /// Per-grid-point mean and envelope of every continuous variable.
        Trajectories,
    };

    Kind kind = Kind::StateFractions;
    std::string automaton;  ///< NoneActiveFraction only
    std::string state;      ///< NoneActiveFraction only
};

struct ExperimentSpec {
    engine::EngineConfig engine;  ///< horizon, step, grid and base seed
    int replications = 1;
    /// Worker threads; results are identical for every thread count because
    /// replication summaries are folded in replication order regardless of
    /// completion order.
    int threads = 1;
    /// Empty means the default set: state fractions plus trajectories.
    std::vector<StatisticRequest> statistics;
};

/// Scalar aggregate over replications: a time fraction with its mean,
/// standard error of the mean (sample sd / sqrt(runs); zero for one run)
/// and the number of runs it was estimated from.
struct ScalarStatistic {
    std::string statistic;  ///< "state_fraction" or "none_active_fraction"
    std::string instance;   ///< owning instance; "all" for cross-instance probes
    std::string key;        ///< "Automaton.State"
    double mean = 0.0;
    double std_error = 0.0;
    int runs = 0;
};

struct TrajectoryPoint {
    double time = 0.0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Mean and envelope of one continuous variable across replications,
/// evaluated on the shared sample grid.
struct TrajectoryStatistic {
    std::string instance;
    std::string variable;
    std::vector<TrajectoryPoint> points;
};

/// Replications grouped by where their automata ended up at the horizon.
struct SequenceCluster {
    std::string signature;  ///< ";"-joined sorted "instance.Automaton.State"
    int count = 0;
    std::uint64_t representative = 0;  ///< smallest member replication index
};

struct ExperimentResult {
    int replications = 0;
    std::vector<ScalarStatistic> statistics;
    std::vector<TrajectoryStatistic> trajectories;
    /// Sorted by descending count, ties by signature.
    std::vector<SequenceCluster> clusters;
};

/// Run `spec.replications` independent replications (random streams
/// 0..R-1 over the spec's base seed) and aggregate them.
///
/// The result depends only on (model, spec): replications may execute on
/// any number of worker threads, but their summaries are folded strictly
/// in replication order, so thread count and completion order never show
/// up in the output.
///
/// Throws ValidationError for a bad spec and ExperimentError when a
/// replication fails (wrapping the engine's message and the replication
/// index).
[[nodiscard]] ExperimentResult run_experiment(const kernel::SystemModel& model,
                                              const ExperimentSpec& spec);

/// Group traces by end-state signature.  The representative of each cluster
/// is the smallest trace index; clusters are sorted by descending count,
/// ties by signature.
[[nodiscard]] std::vector<SequenceCluster>
cluster_sequences(const std::vector<engine::SimulationTrace>& traces);

/// ";"-joined form of a trace signature, as used in cluster CSVs.
[[nodiscard]] std::string joined_signature(const std::vector<std::string>& parts);

}  // namespace hybridsim::mc

#include "hybridsim/mc/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>

#include "hybridsim/engine/simulator.hpp"

namespace hybridsim::mc {

namespace {

// ============================================================================
// Collection layout
//
// Slots are laid out once, up front, so every replication produces the same
// flat vector of numbers and folding them is trivially order-stable.
// ============================================================================

struct ScalarSlot {
    std::string statistic;
    std::string instance;
    std::string key;
    // state_fraction: the single (instance, automaton, state) it measures.
    int instance_index = -1;
    int automaton_index = -1;
    int state_index = -1;
    // none_active_fraction: every (instance, automaton, state) that counts
    // as "active" for the probe.
    std::vector<std::array<int, 3>> members;
};

struct TrackSlot {
    std::string instance;
    std::string variable;
    int instance_index = -1;
    int variable_index = -1;
};

struct Layout {
    std::vector<ScalarSlot> scalars;
    std::vector<TrackSlot> tracks;
};

void add_state_fraction_slots(const kernel::SystemModel& model, Layout& layout) {
    for (std::size_t i = 0; i < model.instances.size(); ++i) {
        const kernel::ComponentDefinition& definition =
            model.definition_of(static_cast<int>(i));
        for (std::size_t a = 0; a < definition.automata.size(); ++a) {
            const kernel::AutomatonDef& automaton = definition.automata[a];
            for (std::size_t s = 0; s < automaton.states.size(); ++s) {
                ScalarSlot slot;
                slot.statistic = "state_fraction";
                slot.instance = model.instances[i].name;
                slot.key = automaton.name + "." + automaton.states[s];
                slot.instance_index = static_cast<int>(i);
                slot.automaton_index = static_cast<int>(a);
                slot.state_index = static_cast<int>(s);
                layout.scalars.push_back(std::move(slot));
            }
        }
    }
}

void add_absence_slot(const kernel::SystemModel& model,
                      const StatisticRequest& request, Layout& layout) {
    ScalarSlot slot;
    slot.statistic = "none_active_fraction";
    slot.instance = "all";
    slot.key = request.automaton + "." + request.state;
    for (std::size_t i = 0; i < model.instances.size(); ++i) {
        const kernel::ComponentDefinition& definition =
            model.definition_of(static_cast<int>(i));
        int a = definition.find_automaton(request.automaton);
        if (a < 0)
            continue;
        int s = definition.automata[a].find_state(request.state);
        if (s < 0)
            throw ValidationError(ValidationKind::UnresolvedState,
                                  "automaton '" + request.automaton
                                      + "' has no state '" + request.state + "'");
        slot.members.push_back({static_cast<int>(i), a, s});
    }
    if (slot.members.empty())
        throw ValidationError(ValidationKind::UnresolvedIdentifier,
                              "no instance owns an automaton named '"
                                  + request.automaton + "'");
    layout.scalars.push_back(std::move(slot));
}

void add_track_slots(const kernel::SystemModel& model, Layout& layout) {
    for (std::size_t i = 0; i < model.instances.size(); ++i) {
        const kernel::ComponentDefinition& definition =
            model.definition_of(static_cast<int>(i));
        for (std::size_t v = 0; v < definition.variables.size(); ++v) {
            if (!definition.variables[v].continuous)
                continue;
            TrackSlot slot;
            slot.instance = model.instances[i].name;
            slot.variable = definition.variables[v].name;
            slot.instance_index = static_cast<int>(i);
            slot.variable_index = static_cast<int>(v);
            layout.tracks.push_back(std::move(slot));
        }
    }
}

Layout build_layout(const kernel::SystemModel& model, const ExperimentSpec& spec) {
    std::vector<StatisticRequest> requests = spec.statistics;
    if (requests.empty()) {
        requests.push_back({StatisticRequest::Kind::StateFractions, "", ""});
        requests.push_back({StatisticRequest::Kind::Trajectories, "", ""});
    }

    Layout layout;
    bool have_fractions = false;
    bool have_tracks = false;
    for (const StatisticRequest& request : requests) {
        switch (request.kind) {
        case StatisticRequest::Kind::StateFractions:
            if (!std::exchange(have_fractions, true))
                add_state_fraction_slots(model, layout);
            break;
        case StatisticRequest::Kind::NoneActiveFraction:
            add_absence_slot(model, request, layout);
            break;
        case StatisticRequest::Kind::Trajectories:
            if (spec.engine.sample_grid > 0.0 && !std::exchange(have_tracks, true))
                add_track_slots(model, layout);
            break;
        }
    }
    return layout;
}

// ============================================================================
// Per-replication summary
// ============================================================================

struct RepSummary {
    std::vector<double> scalars;
    std::vector<std::vector<double>> tracks;
    std::string signature;
    std::optional<std::string> error;  ///< engine failure message, if any
};

/// Walk one trace and reduce it to the layout's numbers.  State occupation
/// replays the firing list from the pre-cascade initial states, so the
/// t = 0 cascade contributes (correctly) zero-length intervals.
RepSummary summarize(const kernel::SystemModel& model, const Layout& layout,
                     const engine::EngineConfig& config, std::uint64_t replication) {
    engine::SimulationTrace trace =
        engine::run_replication(model, config, replication);
    const double horizon = config.horizon;
    const int instance_count = static_cast<int>(model.instances.size());

    // Occupation bookkeeping per (instance, automaton).
    std::vector<std::vector<int>> current(instance_count);
    std::vector<std::vector<double>> changed_at(instance_count);
    std::vector<std::vector<std::vector<double>>> time_in(instance_count);
    for (int i = 0; i < instance_count; ++i) {
        const kernel::ComponentDefinition& definition = model.definition_of(i);
        current[i].resize(definition.automata.size());
        changed_at[i].assign(definition.automata.size(), 0.0);
        time_in[i].resize(definition.automata.size());
        for (std::size_t a = 0; a < definition.automata.size(); ++a) {
            current[i][a] = definition.automata[a].initial_index;
            time_in[i][a].assign(definition.automata[a].states.size(), 0.0);
        }
    }

    // Absence probes: how many members sit in the probed state, and how much
    // time passed with none of them there.
    struct AbsenceState {
        std::vector<std::vector<int>> probed_state;  // per (instance, automaton), -1 = not a member
        int active = 0;
        double none_time = 0.0;
        double since = 0.0;
    };
    std::vector<AbsenceState> absences;
    for (const ScalarSlot& slot : layout.scalars) {
        if (slot.statistic != "none_active_fraction")
            continue;
        AbsenceState absence;
        absence.probed_state.resize(instance_count);
        for (int i = 0; i < instance_count; ++i)
            absence.probed_state[i].assign(
                model.definition_of(i).automata.size(), -1);
        for (const std::array<int, 3>& member : slot.members) {
            absence.probed_state[member[0]][member[1]] = member[2];
            if (current[member[0]][member[1]] == member[2])
                ++absence.active;
        }
        absences.push_back(std::move(absence));
    }

    for (const engine::FiringRecord& firing : trace.firings) {
        const kernel::TransitionDef& transition =
            model.definition_of(firing.instance)
                .automata[firing.automaton]
                .transitions[firing.transition];
        int& state = current[firing.instance][firing.automaton];
        double& since = changed_at[firing.instance][firing.automaton];
        time_in[firing.instance][firing.automaton][state] += firing.time - since;
        state = transition.target_index;
        since = firing.time;

        for (AbsenceState& absence : absences) {
            int probed = absence.probed_state[firing.instance][firing.automaton];
            if (probed < 0)
                continue;
            bool entered = transition.target_index == probed;
            bool left = transition.source_index == probed;
            if (entered == left)
                continue;
            if (absence.active == 0)
                absence.none_time += firing.time - absence.since;
            absence.active += entered ? 1 : -1;
            absence.since = firing.time;
        }
    }
    for (int i = 0; i < instance_count; ++i)
        for (std::size_t a = 0; a < current[i].size(); ++a)
            time_in[i][a][current[i][a]] += horizon - changed_at[i][a];
    for (AbsenceState& absence : absences)
        if (absence.active == 0)
            absence.none_time += horizon - absence.since;

    RepSummary summary;
    summary.scalars.reserve(layout.scalars.size());
    std::size_t absence_index = 0;
    for (const ScalarSlot& slot : layout.scalars) {
        if (slot.statistic == "none_active_fraction") {
            const AbsenceState& absence = absences[absence_index++];
            summary.scalars.push_back(horizon > 0.0
                                          ? absence.none_time / horizon
                                          : (absence.active == 0 ? 1.0 : 0.0));
        } else {
            double occupied = time_in[slot.instance_index][slot.automaton_index]
                                     [slot.state_index];
            bool there = current[slot.instance_index][slot.automaton_index]
                         == slot.state_index;
            summary.scalars.push_back(horizon > 0.0 ? occupied / horizon
                                                    : (there ? 1.0 : 0.0));
        }
    }

    // Trajectory tracks: split the sample list by (instance, variable).
    if (!layout.tracks.empty()) {
        std::vector<std::vector<int>> track_of(instance_count);
        for (int i = 0; i < instance_count; ++i)
            track_of[i].assign(model.definition_of(i).variables.size(), -1);
        for (std::size_t t = 0; t < layout.tracks.size(); ++t)
            track_of[layout.tracks[t].instance_index]
                    [layout.tracks[t].variable_index] = static_cast<int>(t);
        summary.tracks.resize(layout.tracks.size());
        for (const engine::SampleRecord& sample : trace.samples) {
            int track = track_of[sample.instance][sample.variable];
            if (track >= 0)
                summary.tracks[track].push_back(sample.value);
        }
    }

    summary.signature = joined_signature(trace.end_state_signature);
    return summary;
}

// ============================================================================
// Order-stable folding
// ============================================================================

/// Welford accumulator: numerically stable and — because summaries are always
/// folded in replication order — bit-reproducible across thread counts.
struct RunningMoments {
    long long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    [[nodiscard]] double std_error() const {
        if (n < 2)
            return 0.0;
        double variance = m2 / static_cast<double>(n - 1);
        return std::sqrt(variance / static_cast<double>(n));
    }
};

struct TrackFold {
    std::vector<double> sum;
    std::vector<double> low;
    std::vector<double> high;
    bool first = true;
};

struct FoldState {
    std::vector<RunningMoments> scalars;
    std::vector<TrackFold> tracks;
    std::map<std::string, std::pair<int, std::uint64_t>> clusters;

    explicit FoldState(const Layout& layout)
        : scalars(layout.scalars.size()), tracks(layout.tracks.size()) {}

    void fold(std::uint64_t replication, const RepSummary& summary) {
        for (std::size_t k = 0; k < scalars.size(); ++k)
            scalars[k].add(summary.scalars[k]);
        for (std::size_t t = 0; t < tracks.size(); ++t) {
            TrackFold& fold = tracks[t];
            const std::vector<double>& values = summary.tracks[t];
            if (fold.first) {
                fold.sum = values;
                fold.low = values;
                fold.high = values;
                fold.first = false;
                continue;
            }
            if (values.size() != fold.sum.size())
                throw Error("replications disagree on sample-grid length");
            for (std::size_t p = 0; p < values.size(); ++p) {
                fold.sum[p] += values[p];
                fold.low[p] = std::min(fold.low[p], values[p]);
                fold.high[p] = std::max(fold.high[p], values[p]);
            }
        }
        auto [entry, inserted] =
            clusters.try_emplace(summary.signature, 0, replication);
        ++entry->second.first;
        (void)inserted;  // fold order is replication order, so the first
                         // depositor is the smallest index
    }
};

std::vector<SequenceCluster>
sorted_clusters(const std::map<std::string, std::pair<int, std::uint64_t>>& map) {
    std::vector<SequenceCluster> clusters;
    clusters.reserve(map.size());
    for (const auto& [signature, entry] : map)
        clusters.push_back({signature, entry.first, entry.second});
    std::sort(clusters.begin(), clusters.end(),
              [](const SequenceCluster& a, const SequenceCluster& b) {
                  if (a.count != b.count)
                      return a.count > b.count;
                  return a.signature < b.signature;
              });
    return clusters;
}

ExperimentResult assemble(const Layout& layout, const ExperimentSpec& spec,
                          const FoldState& state) {
    ExperimentResult result;
    result.replications = spec.replications;
    result.statistics.reserve(layout.scalars.size());
    for (std::size_t k = 0; k < layout.scalars.size(); ++k) {
        const ScalarSlot& slot = layout.scalars[k];
        result.statistics.push_back({slot.statistic, slot.instance, slot.key,
                                     state.scalars[k].mean,
                                     state.scalars[k].std_error(),
                                     spec.replications});
    }
    result.trajectories.reserve(layout.tracks.size());
    for (std::size_t t = 0; t < layout.tracks.size(); ++t) {
        const TrackFold& fold = state.tracks[t];
        TrajectoryStatistic trajectory;
        trajectory.instance = layout.tracks[t].instance;
        trajectory.variable = layout.tracks[t].variable;
        trajectory.points.reserve(fold.sum.size());
        for (std::size_t p = 0; p < fold.sum.size(); ++p)
            trajectory.points.push_back(
                {static_cast<double>(p) * spec.engine.sample_grid,
                 fold.sum[p] / static_cast<double>(spec.replications),
                 fold.low[p], fold.high[p]});
        result.trajectories.push_back(std::move(trajectory));
    }
    result.clusters = sorted_clusters(state.clusters);
    return result;
}

// ============================================================================
// Replication scheduling
// ============================================================================

void run_sequential(const kernel::SystemModel& model, const Layout& layout,
                    const ExperimentSpec& spec, FoldState& state) {
    for (std::uint64_t rep = 0;
         rep < static_cast<std::uint64_t>(spec.replications); ++rep) {
        try {
            RepSummary summary = summarize(model, layout, spec.engine, rep);
            state.fold(rep, summary);
        } catch (const Error& error) {
            throw ExperimentError(rep, error.what());
        }
    }
}

/// Workers claim replication indices from an atomic counter and deposit
/// summaries into a bounded reorder window; the caller's thread folds them
/// strictly in index order.  Every claimed index is eventually deposited
/// (successes and failures alike), so the folder never waits on a hole
/// below the claim frontier.
void run_parallel(const kernel::SystemModel& model, const Layout& layout,
                  const ExperimentSpec& spec, FoldState& state) {
    const std::uint64_t total = static_cast<std::uint64_t>(spec.replications);
    const int threads = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(spec.threads), total));
    const std::uint64_t window = static_cast<std::uint64_t>(2 * threads);

    std::mutex mutex;
    std::condition_variable deposited;
    std::condition_variable freed;
    std::map<std::uint64_t, RepSummary> ready;
    std::uint64_t next_fold = 0;
    std::atomic<std::uint64_t> next_claim{0};
    std::atomic<bool> failed{false};
    std::atomic<int> running{threads};

    auto work = [&] {
        for (;;) {
            if (failed.load())
                break;
            std::uint64_t rep = next_claim.fetch_add(1);
            if (rep >= total)
                break;
            RepSummary summary;
            try {
                summary = summarize(model, layout, spec.engine, rep);
            } catch (const Error& error) {
                summary.error = error.what();
            }
            bool is_error = summary.error.has_value();
            {
                std::unique_lock lock(mutex);
                freed.wait(lock, [&] {
                    return failed.load() || rep < next_fold + window;
                });
                if (is_error)
                    failed.store(true);
                ready.emplace(rep, std::move(summary));
            }
            deposited.notify_all();
            if (is_error)
                freed.notify_all();
        }
        running.fetch_sub(1);
        deposited.notify_all();
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(work);

    std::optional<std::pair<std::uint64_t, std::string>> first_error;
    {
        std::unique_lock lock(mutex);
        while (next_fold < total) {
            deposited.wait(lock, [&] {
                return ready.count(next_fold) != 0
                       || (failed.load() && running.load() == 0);
            });
            auto found = ready.find(next_fold);
            if (found == ready.end())
                break;  // failure upstream; this index was never claimed
            RepSummary summary = std::move(found->second);
            ready.erase(found);
            if (summary.error) {
                first_error = {next_fold, *summary.error};
                failed.store(true);
                break;
            }
            state.fold(next_fold, summary);
            ++next_fold;
            freed.notify_all();
        }
    }
    freed.notify_all();
    for (std::thread& thread : pool)
        thread.join();

    if (!first_error && failed.load()) {
        // The fold stopped on a hole; report the smallest failed index on record.
        std::unique_lock lock(mutex);
        for (const auto& [rep, summary] : ready)
            if (summary.error) {
                first_error = {rep, *summary.error};
                break;
            }
    }
    if (first_error)
        throw ExperimentError(first_error->first, first_error->second);
}

}  // namespace

std::string joined_signature(const std::vector<std::string>& parts) {
    std::string joined;
    for (const std::string& part : parts) {
        if (!joined.empty())
            joined += ';';
        joined += part;
    }
    return joined;
}

ExperimentResult run_experiment(const kernel::SystemModel& model,
                                const ExperimentSpec& spec) {
    if (spec.replications < 1)
        throw ValidationError(ValidationKind::ArityMismatch,
                              "an experiment needs at least one replication");
    if (spec.threads < 1)
        throw ValidationError(ValidationKind::ArityMismatch,
                              "an experiment needs at least one worker thread");
    engine::validate(spec.engine);

    Layout layout = build_layout(model, spec);
    FoldState state(layout);
    if (spec.threads == 1 || spec.replications == 1)
        run_sequential(model, layout, spec, state);
    else
        run_parallel(model, layout, spec, state);
    return assemble(layout, spec, state);
}

std::vector<SequenceCluster>
cluster_sequences(const std::vector<engine::SimulationTrace>& traces) {
    std::map<std::string, std::pair<int, std::uint64_t>> map;
    for (std::size_t index = 0; index < traces.size(); ++index) {
        auto [entry, inserted] = map.try_emplace(
            joined_signature(traces[index].end_state_signature), 0,
            static_cast<std::uint64_t>(index));
        ++entry->second.first;
        (void)inserted;
    }
    return sorted_clusters(map);
}

}  // namespace hybridsim::mc

// Acceptance gate: seven end-to-end criteria, one PASS/FAIL line each.
//
//   1. deterministic thermostat cycle against the closed-form switch times
//   2. long-run NOK availability of the repairable heater
//   3. standby redundancy: exclusivity invariant and the zero-OK fraction
//   4. direct and mediated designs are behaviourally equivalent
//   5. metric formula oracles
//   6. corpus comparison orderings
//   7. property suites (diff accounting, comment invariance, determinism,
//      replication-order independence)
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "hybridsim/cases/heated_room.hpp"
#include "hybridsim/engine/simulator.hpp"
#include "hybridsim/engine/trace_io.hpp"
#include "hybridsim/errors.hpp"
#include "hybridsim/mc/experiment.hpp"
#include "hybridsim/metrics/complexity.hpp"
#include "hybridsim/metrics/diff.hpp"
#include "hybridsim/metrics/halstead.hpp"
#include "hybridsim/metrics/lines.hpp"
#include "hybridsim/metrics/profile.hpp"
#include "hybridsim/metrics/report.hpp"

using namespace hybridsim;
using namespace hybridsim::cases;
using namespace hybridsim::engine;

namespace {

// --- reporting ---------------------------------------------------------------

/// Collects a criterion's checks and prints exactly one summary line.
class Criterion {
public:
    Criterion(int number, std::string summary)
        : number_(number), summary_(std::move(summary)) {}

    void expect(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }

    void finish() {
        if (failures_.empty()) {
            std::printf("PASS criterion %d: %s\n", number_, summary_.c_str());
        } else {
            std::printf("FAIL criterion %d: %s — %s\n", number_, summary_.c_str(),
                        failures_.front().c_str());
        }
        std::fflush(stdout);
        std::string joined;
        for (const auto& failure : failures_) joined += failure + "; ";
        CHECK_MESSAGE(failures_.empty(), joined);
    }

private:
    int number_;
    std::string summary_;
    std::vector<std::string> failures_;
};

template <typename Body>
void run_criterion(int number, const std::string& summary, Body body) {
    Criterion criterion(number, summary);
    try {
        body(criterion);
    } catch (const std::exception& e) {
        criterion.expect(false, std::string("unexpected exception: ") + e.what());
    }
    criterion.finish();
}

// --- shared helpers ----------------------------------------------------------

std::string cases_dir() { return HYBRIDSIM_CASES_DIR; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

CaseConfig zeroed(CaseConfig config) {
    config.rates = zero_maintenance(config.heaters);
    return config;
}

std::string firing_name(const kernel::SystemModel& model, const FiringRecord& rec) {
    const auto& inst = model.instances[rec.instance];
    const auto& automaton = model.definition_of(rec.instance).automata[rec.automaton];
    return inst.name + "." + automaton.name + "."
           + automaton.transitions[rec.transition].name;
}

/// True when no two heaters are ON over a positive-length interval.
bool at_most_one_running(const kernel::SystemModel& model,
                         const SimulationTrace& trace, double horizon) {
    std::vector<int> power_automaton(model.instances.size(), -1);
    std::vector<bool> running(model.instances.size(), false);
    int on_count = 0;
    for (std::size_t i = 0; i < model.instances.size(); ++i) {
        const auto* def = &model.definition_of(static_cast<int>(i));
        for (std::size_t a = 0; a < def->automata.size(); ++a) {
            if (def->automata[a].name != "Power")
                continue;
            power_automaton[i] = static_cast<int>(a);
            running[i] =
                def->automata[a].states[def->automata[a].initial_index] == "ON";
            on_count += running[i] ? 1 : 0;
        }
    }
    double segment_start = 0.0;
    for (const auto& firing : trace.firings) {
        if (firing.automaton != power_automaton[firing.instance])
            continue;
        if (firing.time > segment_start) {
            if (on_count > 1)
                return false;
            segment_start = firing.time;
        }
        const auto& automaton =
            model.definition_of(firing.instance).automata[firing.automaton];
        const bool now_on = automaton.transitions[firing.transition].target == "ON";
        on_count += (now_on ? 1 : 0) - (running[firing.instance] ? 1 : 0);
        running[firing.instance] = now_on;
    }
    return !(on_count > 1 && horizon > segment_start);
}

const mc::ScalarStatistic* find_stat(const mc::ExperimentResult& result,
                                     const std::string& statistic,
                                     const std::string& instance,
                                     const std::string& key) {
    for (const auto& row : result.statistics)
        if (row.statistic == statistic && row.instance == instance && row.key == key)
            return &row;
    return nullptr;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path()
                / ("hybridsim_accept_" + std::to_string(::getpid()) + "_"
                   + std::to_string(counter_++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    [[nodiscard]] std::string dir() const { return path_.string(); }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

}  // namespace

// ============================================================================
// 1. Deterministic thermostat cycle
// ============================================================================

TEST_CASE("criterion 1: thermostat switch times match the closed form") {
    run_criterion(1, "deterministic thermostat cycle", [](Criterion& c) {
        auto config = zeroed(catalog_entry("case0").config);
        c.expect(config.room.leakage == 0.1, "leakage is not 0.1");
        const auto model = build_heated_room(config);

        EngineConfig engine;
        engine.horizon = 60.0;

        const auto start = std::chrono::steady_clock::now();
        const auto trace = run_replication(model, engine, 0);
        const double seconds = elapsed_seconds(start);

        // Heating 17 -> 22 with T_eq = 23: t1 = 10 ln((23-17)/(23-22)) = 10 ln 6.
        // Cooling 22 -> 15 with T_eq = 13: 10 ln((22-13)/(15-13)) = 10 ln 4.5.
        const double first_off = 10.0 * std::log(6.0);
        const double first_on = first_off + 10.0 * std::log(4.5);

        c.expect(trace.firings.size() >= 2, "fewer than two firings");
        if (trace.firings.size() >= 2) {
            c.expect(firing_name(model, trace.firings[0]) == "heater.Power.ON_to_OFF",
                     "first firing is not the switch-off");
            c.expect(std::abs(trace.firings[0].time - first_off) <= 1e-6,
                     "first switch-off time off the closed form");
            c.expect(firing_name(model, trace.firings[1]) == "heater.Power.OFF_to_ON",
                     "second firing is not the switch-on");
            c.expect(std::abs(trace.firings[1].time - first_on) <= 1e-6,
                     "first switch-on time off the closed form");
        }

        bool bounded = true;
        for (const auto& sample : trace.samples) {
            if (sample.time < first_off - 1e-9)
                continue;
            bounded = bounded && sample.value >= 15.0 - 1e-6
                      && sample.value <= 22.0 + 1e-6;
        }
        c.expect(bounded, "temperature left [15, 22] after the first crossing");
        c.expect(seconds < 1.0, "runtime exceeded one second");
    });
}

// ============================================================================
// 2. Long-run availability
// ============================================================================

TEST_CASE("criterion 2: mean NOK fraction matches steady-state unavailability") {
    run_criterion(2, "long-run NOK availability", [](Criterion& c) {
        const auto& entry = catalog_entry("case0");
        c.expect(entry.config.rates.failure == std::vector<double>{0.01},
                 "shipped failure rate is not 0.01");
        c.expect(entry.config.rates.repair == std::vector<double>{0.1},
                 "shipped repair rate is not 0.1");
        const auto model = build_heated_room(entry.config);

        mc::ExperimentSpec spec;
        spec.engine.horizon = 1e4;
        spec.engine.step_size = 1.0;
        spec.engine.sample_grid = 0.0;
        spec.engine.seed = 2024;
        spec.replications = 1000;
        spec.statistics.push_back({mc::StatisticRequest::Kind::StateFractions, "", ""});

        const auto start = std::chrono::steady_clock::now();
        const auto result = mc::run_experiment(model, spec);
        const double seconds = elapsed_seconds(start);

        const auto* row = find_stat(result, "state_fraction", "heater", "Function.NOK");
        c.expect(row != nullptr, "missing NOK fraction row");
        if (row != nullptr) {
            const double target = steady_state_unavailability(0.01, 0.1);  // 1/11
            c.expect(std::abs(target - 1.0 / 11.0) < 1e-15, "oracle is not 1/11");
            c.expect(row->runs == 1000, "not estimated from 1000 runs");
            c.expect(row->std_error > 0.0, "standard error vanished");
            c.expect(std::abs(row->mean - target) <= 3.0 * row->std_error,
                     "NOK fraction " + std::to_string(row->mean)
                         + " further than 3 SE from " + std::to_string(target));
        }
        c.expect(seconds < 60.0, "runtime exceeded sixty seconds");
    });
}

// ============================================================================
// 3. Standby redundancy
// ============================================================================

TEST_CASE("criterion 3: standby exclusivity and the zero-OK fraction") {
    run_criterion(3, "standby redundancy", [](Criterion& c) {
        const auto demo = standby_demo_rates();
        for (const char* name : {"case2", "case2a"}) {
            const auto& entry = catalog_entry(name);
            c.expect(entry.config.rates.failure == demo.failure,
                     std::string(name) + " does not ship the demo failure rates");
            c.expect(entry.config.rates.repair == demo.repair,
                     std::string(name) + " does not ship the demo repair rates");
        }

        // (a) at most one heater runs, at every instant of 100 replications.
        for (const char* name : {"case2", "case2a"}) {
            const auto model = build_heated_room(catalog_entry(name).config);
            EngineConfig engine;
            engine.horizon = 1000.0;
            engine.step_size = 0.5;
            engine.sample_grid = 0.0;
            bool exclusive = true;
            for (std::uint64_t rep = 0; rep < 100; ++rep) {
                const auto trace = run_replication(model, engine, rep);
                exclusive = exclusive && at_most_one_running(model, trace, engine.horizon);
            }
            c.expect(exclusive, std::string(name) + " ran two heaters at once");
        }

        // (b) the zero-OK fraction equals the product of unavailabilities:
        //     (0.02/0.03) * (0.01/0.02)^3 = 1/12.  The horizon dominates the
        //     start-up bias (every heater begins OK and the slowest unit
        //     relaxes over ~50 time units), so it is generous while the step
        //     stays coarse: the OK/NOK processes are purely clock-driven and
        //     the thermal time constant is 10, far above the step.
        const double target = steady_state_unavailability(0.02, 0.01)
                              * std::pow(steady_state_unavailability(0.01, 0.01), 3);
        c.expect(std::abs(target - 1.0 / 12.0) < 1e-15, "oracle is not 1/12");
        for (const char* name : {"case2", "case2a"}) {
            const auto model = build_heated_room(catalog_entry(name).config);
            mc::ExperimentSpec spec;
            spec.engine.horizon = 1e5;
            spec.engine.step_size = 5.0;
            spec.engine.sample_grid = 0.0;
            spec.engine.seed = 31;
            spec.replications = 400;
            spec.statistics.push_back(
                {mc::StatisticRequest::Kind::NoneActiveFraction, "Function", "OK"});
            const auto result = mc::run_experiment(model, spec);
            const auto* row =
                find_stat(result, "none_active_fraction", "all", "Function.OK");
            c.expect(row != nullptr, std::string(name) + ": missing zero-OK row");
            if (row != nullptr) {
                c.expect(std::abs(row->mean - target) <= 3.0 * row->std_error,
                         std::string(name) + ": zero-OK fraction "
                             + std::to_string(row->mean) + " further than 3 SE from "
                             + std::to_string(target));
            }
        }
    });
}

// ============================================================================
// 4. Design equivalence
// ============================================================================

TEST_CASE("criterion 4: direct and mediated designs fire identically") {
    run_criterion(4, "design equivalence under zero failures", [](Criterion& c) {
        const std::pair<const char*, const char*> pairs[] = {
            {"case0", "case0a"}, {"case1", "case1a"}, {"case2", "case2a"}};
        for (const auto& [direct_name, mediated_name] : pairs) {
            const auto direct =
                build_heated_room(zeroed(catalog_entry(direct_name).config));
            const auto mediated =
                build_heated_room(zeroed(catalog_entry(mediated_name).config));

            EngineConfig engine;
            engine.horizon = 100.0;
            engine.step_size = 0.05;
            const auto a = run_replication(direct, engine, 0);
            const auto b = run_replication(mediated, engine, 0);

            const std::string label =
                std::string(direct_name) + " vs " + mediated_name;
            c.expect(!a.firings.empty(), label + ": no firings at all");
            c.expect(a.firings.size() == b.firings.size(),
                     label + ": firing counts differ");
            if (a.firings.size() == b.firings.size()) {
                for (std::size_t i = 0; i < a.firings.size(); ++i) {
                    c.expect(firing_name(direct, a.firings[i])
                                 == firing_name(mediated, b.firings[i]),
                             label + ": firing names diverge at index "
                                 + std::to_string(i));
                    c.expect(std::abs(a.firings[i].time - b.firings[i].time) <= 1e-6,
                             label + ": firing times diverge at index "
                                 + std::to_string(i));
                }
            }
            c.expect(a.samples.size() == b.samples.size(),
                     label + ": sample counts differ");
            if (a.samples.size() == b.samples.size()) {
                for (std::size_t i = 0; i < a.samples.size(); ++i)
                    c.expect(std::abs(a.samples[i].value - b.samples[i].value) <= 1e-6,
                             label + ": grid temperatures diverge at index "
                                 + std::to_string(i));
            }
        }
    });
}

// ============================================================================
// 5. Metric formula oracles
// ============================================================================

TEST_CASE("criterion 5: metric formulas hit their reference points") {
    run_criterion(5, "metric formula oracles", [](Criterion& c) {
        const auto profile = metrics::model_dsl_profile();

        const auto h = metrics::halstead("a = b + b * 2", profile);
        c.expect(h.distinct_operators == 3, "eta1 != 3");
        c.expect(h.distinct_operands == 3, "eta2 != 3");
        c.expect(h.total_operators == 3, "N1 != 3");
        c.expect(h.total_operands == 4, "N2 != 4");
        c.expect(std::abs(h.volume() - 7.0 * std::log2(6.0)) <= 1e-9,
                 "volume != 7*log2(6)");

        const auto mi = metrics::maintainability_index(100.0, 5.0, 50);
        c.expect(std::abs(mi.raw - 82.528) <= 1e-3, "MI(100,5,50) != 82.528");

        metrics::DiffCounts diff;
        diff.modified = 2;
        diff.added = 3;
        diff.removed = 1;
        c.expect(std::abs(metrics::rloc_percent(diff, 20) - 30.0) <= 1e-12,
                 "RLOC({2,3,1},20) != 30.00%");

        const auto units =
            metrics::cyclomatic("component Plain { var x = 1; }", profile);
        c.expect(units.size() == 1 && units[0].cc == 1,
                 "decision-free unit is not CC 1");
    });
}

// ============================================================================
// 6. Corpus comparison orderings
// ============================================================================

namespace {

std::map<std::string, std::string> read_keyed_csv(const std::string& path) {
    std::map<std::string, std::string> rows;
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path);
    std::string line;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        rows[line.substr(0, comma)] = line;
    }
    return rows;
}

double last_field(const std::string& row) {
    return std::stod(row.substr(row.rfind(',') + 1));
}

long long field_at(const std::string& row, int index) {
    std::size_t from = 0;
    for (int i = 0; i < index; ++i) from = row.find(',', from) + 1;
    return std::stoll(row.substr(from, row.find(',', from) - from));
}

}  // namespace

TEST_CASE("criterion 6: mediated design costs more up front, less per change") {
    run_criterion(6, "corpus comparison orderings", [](Criterion& c) {
        TempDir out;
        metrics::ReportSpec spec;
        spec.root = cases_dir();
        for (const auto& entry : catalog()) spec.cases.push_back({entry.name, entry.files});
        spec.pairs = {
            {"case0", "case1"},   {"case1", "case2"},
            {"case0a", "case1a"}, {"case1a", "case2a"},
        };
        spec.out_dir = out.dir();
        metrics::write_report(spec, metrics::model_dsl_profile());

        const auto rloc = read_keyed_csv(out.dir() + "/rloc.csv");
        const double direct01 = last_field(rloc.at("case0->case1"));
        const double direct12 = last_field(rloc.at("case1->case2"));
        const double mediated01 = last_field(rloc.at("case0a->case1a"));
        const double mediated12 = last_field(rloc.at("case1a->case2a"));
        c.expect(mediated01 < direct01,
                 "RLOC(case0a->case1a) >= RLOC(case0->case1)");
        c.expect(mediated12 < direct12,
                 "RLOC(case1a->case2a) >= RLOC(case1->case2)");

        const auto totals = read_keyed_csv(out.dir() + "/loc_total.csv");
        const auto direct_loc = field_at(totals.at("case0"), 1);
        const auto mediated_loc = field_at(totals.at("case0a"), 1);
        c.expect(mediated_loc > direct_loc,
                 "total LOC of case0a is not above case0");
    });
}

// ============================================================================
// 7. Property suites
// ============================================================================

TEST_CASE("criterion 7: accounting, invariance, and determinism properties") {
    run_criterion(7, "property suites", [](Criterion& c) {
        // (a) diff accounting identities on 1000 random edit pairs.
        {
            std::mt19937 rng(192837465);
            const std::vector<std::string> pool = {
                "alpha", "beta", "gamma", "delta", "x = 1;", "y = 2;", "{", "}",
            };
            bool identities = true;
            bool symmetry = true;
            for (int round = 0; round < 1000; ++round) {
                std::vector<std::string> old_lines(rng() % 40);
                for (auto& line : old_lines) line = pool[rng() % pool.size()];
                std::vector<std::string> new_lines;
                for (const auto& line : old_lines) {
                    const auto roll = rng() % 10;
                    if (roll < 6)
                        new_lines.push_back(line);
                    else if (roll < 8)
                        new_lines.push_back(pool[rng() % pool.size()]);
                    if (rng() % 8 == 0) new_lines.push_back(pool[rng() % pool.size()]);
                }
                const auto fwd = metrics::diff_lines(old_lines, new_lines);
                const auto bwd = metrics::diff_lines(new_lines, old_lines);
                identities = identities
                             && fwd.same + fwd.modified + fwd.removed
                                    == static_cast<long long>(old_lines.size())
                             && fwd.same + fwd.modified + fwd.added
                                    == static_cast<long long>(new_lines.size());
                symmetry = symmetry && fwd.added == bwd.removed
                           && fwd.removed == bwd.added && fwd.modified == bwd.modified
                           && fwd.same == bwd.same;
            }
            c.expect(identities, "diff accounting identity violated");
            c.expect(symmetry, "diff swap symmetry violated");
        }

        // (b) volume and complexity ignore inserted comments and blank lines,
        //     across 100 mutated files.
        {
            const auto profile = metrics::model_dsl_profile();
            const std::vector<std::string> sources = {
                read_file(cases_dir() + "/components/heater.model"),
                read_file(cases_dir() + "/case2a.model"),
            };
            std::vector<double> base_volume;
            std::vector<std::vector<metrics::UnitComplexity>> base_cc;
            for (const auto& text : sources) {
                base_volume.push_back(metrics::halstead(text, profile).volume());
                base_cc.push_back(metrics::cyclomatic(text, profile));
            }
            std::mt19937 rng(55555);
            bool invariant = true;
            for (int k = 0; k < 100; ++k) {
                const std::size_t which = k % sources.size();
                std::vector<std::string> lines;
                {
                    std::istringstream in(sources[which]);
                    std::string line;
                    while (std::getline(in, line)) lines.push_back(line);
                }
                const auto pos = rng() % (lines.size() + 1);
                lines.insert(lines.begin() + static_cast<long>(pos),
                             (rng() % 2 == 0) ? std::string{}
                                              : "# inserted note " + std::to_string(k));
                std::string mutated;
                for (const auto& line : lines) mutated += line + "\n";

                invariant = invariant
                            && metrics::halstead(mutated, profile).volume()
                                   == base_volume[which];
                const auto cc = metrics::cyclomatic(mutated, profile);
                invariant = invariant && cc.size() == base_cc[which].size();
                for (std::size_t u = 0; invariant && u < cc.size(); ++u)
                    invariant = cc[u].name == base_cc[which][u].name
                                && cc[u].cc == base_cc[which][u].cc;
            }
            c.expect(invariant, "volume/CC changed under comment or blank insertion");
        }

        // (c) seed determinism: two identical runs, byte-identical trace CSVs.
        {
            const auto model = build_heated_room(catalog_entry("case1").config);
            EngineConfig engine;
            engine.horizon = 300.0;
            engine.step_size = 0.1;
            engine.seed = 99;
            auto render = [&]() {
                const auto trace = run_replication(model, engine, 4);
                std::ostringstream firings;
                write_firings_header(firings);
                write_firings(firings, model, trace, 4);
                std::ostringstream samples;
                write_samples_header(samples);
                write_samples(samples, model, trace, 4);
                return firings.str() + samples.str();
            };
            const auto first = render();
            c.expect(!first.empty() && first == render(),
                     "trace CSVs differ between identical runs");
        }

        // (d) replication-order independence: thread counts do not change the
        //     aggregated result.
        {
            const auto model = build_heated_room(catalog_entry("case2").config);
            mc::ExperimentSpec spec;
            spec.engine.horizon = 150.0;
            spec.engine.step_size = 0.5;
            spec.engine.sample_grid = 1.0;
            spec.engine.seed = 13;
            spec.replications = 24;
            spec.threads = 1;
            const auto serial = mc::run_experiment(model, spec);
            spec.threads = 3;
            const auto parallel = mc::run_experiment(model, spec);

            bool same = serial.statistics.size() == parallel.statistics.size()
                        && serial.clusters.size() == parallel.clusters.size();
            for (std::size_t i = 0; same && i < serial.statistics.size(); ++i) {
                same = serial.statistics[i].statistic == parallel.statistics[i].statistic
                       && serial.statistics[i].instance == parallel.statistics[i].instance
                       && serial.statistics[i].key == parallel.statistics[i].key
                       && serial.statistics[i].mean == parallel.statistics[i].mean
                       && serial.statistics[i].std_error == parallel.statistics[i].std_error;
            }
            for (std::size_t i = 0; same && i < serial.clusters.size(); ++i) {
                same = serial.clusters[i].signature == parallel.clusters[i].signature
                       && serial.clusters[i].count == parallel.clusters[i].count
                       && serial.clusters[i].representative
                              == parallel.clusters[i].representative;
            }
            for (std::size_t t = 0; same && t < serial.trajectories.size(); ++t) {
                const auto& a = serial.trajectories[t];
                const auto& b = parallel.trajectories[t];
                same = a.points.size() == b.points.size();
                for (std::size_t p = 0; same && p < a.points.size(); ++p)
                    same = a.points[p].mean == b.points[p].mean
                           && a.points[p].min == b.points[p].min
                           && a.points[p].max == b.points[p].max;
            }
            c.expect(same, "thread count changed the experiment result");
        }
    });
}

#pragma once

#include <string>
#include <vector>

#include "hybridsim/kernel/state.hpp"

namespace hybridsim::engine {

/// One fired transition.  Indices refer into the system model, so records
/// stay small; the CSV writers resolve them back to names.
struct FiringRecord {
    double time = 0.0;
    int instance = -1;
    int automaton = -1;
    int transition = -1;
};

/// One sampled trajectory point of a PDMP-driven variable.
struct SampleRecord {
    double time = 0.0;
    int instance = -1;
    int variable = -1;
    double value = 0.0;
};

struct SimulationTrace {
    std::vector<FiringRecord> firings;
    std::vector<SampleRecord> samples;
    double end_time = 0.0;
    /// Sorted "instance.Automaton.State" parts describing where every
    /// automaton ended up; used to cluster replications.
    std::vector<std::string> end_state_signature;
};

/// Sorted "instance.Automaton.State" description of the automata positions.
[[nodiscard]] std::vector<std::string>
state_signature(const kernel::SystemModel& model, const kernel::SystemState& state);

}  // namespace hybridsim::engine

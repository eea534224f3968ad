#pragma once

#include <cstdint>
#include <string>

#include "hybridsim/errors.hpp"

namespace hybridsim::engine {

/// When exponential clocks are (re)drawn.  Both schemes sample identically
/// distributed firing times thanks to memorylessness; keeping both lets the
/// test suite check that equivalence empirically.
enum class ClockPolicy {
    SampleOnEntry,      ///< draw a delay when the source state is entered
    ResampleEachEvent,  ///< additionally redraw all pending clocks after every event
};

struct EngineConfig {
    double step_size = 0.01;        ///< RK4 step between events
    double event_tolerance = 1e-9;  ///< bisection width for localising condition flips
    int max_cascade_iterations = 1000;
    double horizon = 0.0;           ///< end of simulated time; 0 = initial instant only
    std::uint64_t seed = 0;
    double sample_grid = 0.1;       ///< spacing of trajectory samples; <= 0 disables
    long long zeno_event_limit = 1'000'000;
    ClockPolicy clock_policy = ClockPolicy::SampleOnEntry;
};

inline void validate(const EngineConfig& config) {
    if (!(config.step_size > 0.0))
        throw Error("step_size must be positive");
    if (!(config.event_tolerance > 0.0))
        throw Error("event_tolerance must be positive");
    if (config.max_cascade_iterations <= 0)
        throw Error("max_cascade_iterations must be positive");
    if (!(config.horizon >= 0.0))
        throw Error("horizon must be non-negative");
    if (config.zeno_event_limit <= 0)
        throw Error("zeno_event_limit must be positive");
}

}  // namespace hybridsim::engine

#pragma once

#include <cstdint>

#include "hybridsim/engine/config.hpp"
#include "hybridsim/engine/trace.hpp"

namespace hybridsim::engine {

/// Simulate one replication of the model over [0, horizon].
///
/// The run alternates deterministic flow and discrete jumps:
///  - between events the PDMP variables follow their equations under fixed
///    RK4 steps (clipped to sample-grid points and event times),
///  - exponential transitions fire when their pre-sampled clock expires and
///    their condition still holds (a stale clock is discarded),
///  - conditions of instantaneous transitions and PDMP stop conditions are
///    watched during integration; a false-to-true flip is localised by
///    bisection down to the configured tolerance,
///  - after every event, enabled instantaneous transitions fire in
///    deterministic order until the system is quiescent.
///
/// `replication` selects the random stream, so traces depend only on
/// (model, config, replication) — never on scheduling.
///
/// Throws LivelockError when a cascade exceeds the iteration budget,
/// ZenoError when a run exceeds the event limit, NumericError when
/// integration diverges, and LawError for negative exponential rates
/// (a zero rate simply disables its transition).
[[nodiscard]] SimulationTrace run_replication(const kernel::SystemModel& model,
                                              const EngineConfig& config,
                                              std::uint64_t replication);

}  // namespace hybridsim::engine

#pragma once

#include <string>
#include <vector>

#include "hybridsim/kernel/system_model.hpp"

namespace hybridsim::cases {

// ============================================================================
// Heated-room study: one room losing heat to the outside, warmed by one or
// four repairable heaters.  The same physics ships in two shapes per variant:
// direct message-box wiring and mediated wiring (a group observing the room
// temperature with the heaters as role players).
// ============================================================================

struct RoomParams {
    double initial_temperature = 17.0;
    double outside_temperature = 13.0;
    double leakage = 0.1;  ///< heat loss per degree above outside
};

struct HeaterParams {
    double power = 1.0;
    double min_temperature = 15.0;  ///< switch on at or below
    double max_temperature = 22.0;  ///< switch off at or above
};

/// Failure/repair rates per heater, most senior heater first.
struct MaintenanceRates {
    std::vector<double> failure;
    std::vector<double> repair;
};

[[nodiscard]] MaintenanceRates uniform_rates(int heaters, double failure_rate,
                                             double repair_rate);
/// Heaters that never break: the deterministic thermostat cycle.
[[nodiscard]] MaintenanceRates zero_maintenance(int heaters);
/// Frequently failing, quickly repaired heaters (the long-run study setting).
[[nodiscard]] MaintenanceRates frequent_maintenance(int heaters);
/// Rarely failing, slowly repaired heaters.
[[nodiscard]] MaintenanceRates rare_maintenance(int heaters);
/// Four-heater standby setting: a fragile main unit (0.02 failures, 0.01
/// repairs) backed by three identical spares (0.01 / 0.01).
[[nodiscard]] MaintenanceRates standby_demo_rates();

// ---------------------------------------------------------------------------
// Closed-form physics, used as independent oracles for the simulator.
// With n heaters running, dT/dt = n*P - L*(T - T_out), so the temperature
// relaxes exponentially towards an equilibrium.
// ---------------------------------------------------------------------------

[[nodiscard]] double equilibrium_temperature(const RoomParams& room,
                                             const HeaterParams& heater,
                                             int heaters_on);

/// Temperature `dt` after starting from `start` with `heaters_on` running.
[[nodiscard]] double temperature_after(const RoomParams& room,
                                       const HeaterParams& heater, double start,
                                       int heaters_on, double dt);

/// Time for the temperature to move from `start` to `target` with
/// `heaters_on` running.  Throws Error when the target is not ahead on that
/// trajectory.
[[nodiscard]] double crossing_time(const RoomParams& room,
                                   const HeaterParams& heater, double start,
                                   int heaters_on, double target);

/// Long-run probability that a failure/repair unit is down.
[[nodiscard]] double steady_state_unavailability(double failure_rate,
                                                 double repair_rate);

// ---------------------------------------------------------------------------
// Model builders
// ---------------------------------------------------------------------------

struct CaseConfig {
    int heaters = 1;
    /// Only the most senior healthy heater may run.  Direct designs arbitrate
    /// through pairwise priority exchange; mediated designs through a standby
    /// chain.
    bool arbitrated = false;
    bool mediated = false;
    RoomParams room;
    HeaterParams heater;
    MaintenanceRates rates;            ///< sized to `heaters`
    std::vector<double> priorities;    ///< direct arbitration only; must be distinct
};

/// Build the heated-room system for the given configuration.  The result is
/// behaviourally identical to elaborating the corresponding model file.
/// Throws ValidationError for inconsistent configurations (wrong rate list
/// sizes, duplicate priorities, ...).
[[nodiscard]] kernel::SystemModel build_heated_room(const CaseConfig& config);

// ---------------------------------------------------------------------------
// Shipped model corpus
// ---------------------------------------------------------------------------

struct CatalogEntry {
    std::string name;                 ///< base name of the case file
    std::string entry_file;           ///< case file, relative to the corpus root
    std::vector<std::string> files;   ///< all files in include order
    CaseConfig config;                ///< parameters matching the shipped file
    int instance_count = 0;
    int connection_count = 0;
    int group_count = 0;
    int chain_count = 0;
};

/// The six shipped configurations: case0/1/2 (direct wiring, growing from a
/// single heater to priority arbitration) and case0a/1a/2a (the same three
/// behaviours on mediated wiring).
[[nodiscard]] const std::vector<CatalogEntry>& catalog();

/// Catalog entry by name; throws Error for unknown names.
[[nodiscard]] const CatalogEntry& catalog_entry(const std::string& name);

}  // namespace hybridsim::cases

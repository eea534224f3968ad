#pragma once

#include <iosfwd>

#include "hybridsim/engine/trace.hpp"

namespace hybridsim::engine {

/// CSV writers for simulation traces.  Times and values are written with
/// nine fixed decimals so reruns of the same configuration are byte-identical.
///
/// Firings:  run,time,instance,automaton,transition,from,to
/// Samples:  run,time,variable,value     (variable is "instance.variable")

void write_firings_header(std::ostream& out);
void write_firings(std::ostream& out, const kernel::SystemModel& model,
                   const SimulationTrace& trace, long run);

void write_samples_header(std::ostream& out);
void write_samples(std::ostream& out, const kernel::SystemModel& model,
                   const SimulationTrace& trace, long run);

}  // namespace hybridsim::engine

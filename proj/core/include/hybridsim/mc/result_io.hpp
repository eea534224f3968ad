#pragma once

#include <iosfwd>

#include "hybridsim/mc/experiment.hpp"

namespace hybridsim::mc {

/// CSV writers for experiment results.  Floating-point columns use nine
/// fixed decimals so a rerun of the same spec is byte-identical.
///
/// Results:    statistic,instance,key,mean,stderr,runs
/// Clusters:   signature,count          (signature parts ";"-joined)
/// Trajectory: time,variable,mean,min,max   (variable is "instance.variable")

void write_results_csv(std::ostream& out, const ExperimentResult& result);
void write_clusters_csv(std::ostream& out, const ExperimentResult& result);
void write_trajectory_csv(std::ostream& out, const ExperimentResult& result);

}  // namespace hybridsim::mc

#include "hybridsim/mc/result_io.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace hybridsim::mc {

namespace {

std::string fixed9(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.9f", value);
    return buffer;
}

}  // namespace

void write_results_csv(std::ostream& out, const ExperimentResult& result) {
    out << "statistic,instance,key,mean,stderr,runs\n";
    for (const ScalarStatistic& row : result.statistics)
        out << row.statistic << ',' << row.instance << ',' << row.key << ','
            << fixed9(row.mean) << ',' << fixed9(row.std_error) << ','
            << row.runs << '\n';
}

void write_clusters_csv(std::ostream& out, const ExperimentResult& result) {
    out << "signature,count\n";
    for (const SequenceCluster& cluster : result.clusters)
        out << cluster.signature << ',' << cluster.count << '\n';
}

void write_trajectory_csv(std::ostream& out, const ExperimentResult& result) {
    out << "time,variable,mean,min,max\n";
    for (const TrajectoryStatistic& trajectory : result.trajectories)
        for (const TrajectoryPoint& point : trajectory.points)
            out << fixed9(point.time) << ',' << trajectory.instance << '.'
                << trajectory.variable << ',' << fixed9(point.mean) << ','
                << fixed9(point.min) << ',' << fixed9(point.max) << '\n';
}

}  // namespace hybridsim::mc

#include "hybridsim/engine/trace_io.hpp"

#include <cstdio>
#include <ostream>

namespace hybridsim::engine {

namespace {

void append_fixed(std::string& row, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.9f", value);
    row += buffer;
}

}  // namespace

void write_firings_header(std::ostream& out) {
    out << "run,time,instance,automaton,transition,from,to\n";
}

void write_firings(std::ostream& out, const kernel::SystemModel& model,
                   const SimulationTrace& trace, long run) {
    std::string row;
    for (const FiringRecord& firing : trace.firings) {
        const auto& automaton =
            model.definition_of(firing.instance).automata[firing.automaton];
        const auto& transition = automaton.transitions[firing.transition];
        row.clear();
        row += std::to_string(run);
        row.push_back(',');
        append_fixed(row, firing.time);
        row.push_back(',');
        row += model.instances[firing.instance].name;
        row.push_back(',');
        row += automaton.name;
        row.push_back(',');
        row += transition.name;
        row.push_back(',');
        row += automaton.states[transition.source_index];
        row.push_back(',');
        row += automaton.states[transition.target_index];
        row.push_back('\n');
        out << row;
    }
}

void write_samples_header(std::ostream& out) {
    out << "run,time,variable,value\n";
}

void write_samples(std::ostream& out, const kernel::SystemModel& model,
                   const SimulationTrace& trace, long run) {
    std::string row;
    for (const SampleRecord& sample : trace.samples) {
        const auto& definition = model.definition_of(sample.instance);
        row.clear();
        row += std::to_string(run);
        row.push_back(',');
        append_fixed(row, sample.time);
        row.push_back(',');
        row += model.instances[sample.instance].name;
        row.push_back('.');
        row += definition.variables[sample.variable].name;
        row.push_back(',');
        append_fixed(row, sample.value);
        row.push_back('\n');
        out << row;
    }
}

}  // namespace hybridsim::engine

#include "hybridsim/cases/heated_room.hpp"

#include <cmath>
#include <set>

namespace hybridsim::cases {

using kernel::AutomatonDef;
using kernel::ComponentDefinition;
using kernel::ExprPtr;
using kernel::HookDef;
using kernel::HookKind;
using kernel::LawKind;
using kernel::MessageBoxDef;
using kernel::SystemModel;
using kernel::SystemSpec;
using kernel::TransitionDef;
using kernel::ValueType;

namespace x = kernel::expr;

// ============================================================================
// Rate sets
// ============================================================================

MaintenanceRates uniform_rates(int heaters, double failure_rate, double repair_rate) {
    MaintenanceRates rates;
    rates.failure.assign(static_cast<std::size_t>(heaters), failure_rate);
    rates.repair.assign(static_cast<std::size_t>(heaters), repair_rate);
    return rates;
}

MaintenanceRates zero_maintenance(int heaters) { return uniform_rates(heaters, 0.0, 0.0); }

MaintenanceRates frequent_maintenance(int heaters) { return uniform_rates(heaters, 0.01, 0.1); }

MaintenanceRates rare_maintenance(int heaters) { return uniform_rates(heaters, 0.001, 0.01); }

MaintenanceRates standby_demo_rates() {
    MaintenanceRates rates = uniform_rates(4, 0.01, 0.01);
    rates.failure[0] = 0.02;
    return rates;
}

// ============================================================================
// Closed-form physics
// ============================================================================

double equilibrium_temperature(const RoomParams& room, const HeaterParams& heater,
                               int heaters_on) {
    if (!(room.leakage > 0.0))
        throw Error("the closed form needs a positive leakage");
    return room.outside_temperature + heaters_on * heater.power / room.leakage;
}

double temperature_after(const RoomParams& room, const HeaterParams& heater,
                         double start, int heaters_on, double dt) {
    double equilibrium = equilibrium_temperature(room, heater, heaters_on);
    return equilibrium + (start - equilibrium) * std::exp(-room.leakage * dt);
}

double crossing_time(const RoomParams& room, const HeaterParams& heater,
                     double start, int heaters_on, double target) {
    double equilibrium = equilibrium_temperature(room, heater, heaters_on);
    double from = start - equilibrium;
    double to = target - equilibrium;
    if (to == 0.0 || from == 0.0 || (from > 0.0) != (to > 0.0)
        || std::abs(to) >= std::abs(from))
        throw Error("the temperature never reaches " + std::to_string(target)
                    + " from " + std::to_string(start) + " with "
                    + std::to_string(heaters_on) + " heater(s) on");
    return std::log(from / to) / room.leakage;
}

double steady_state_unavailability(double failure_rate, double repair_rate) {
    if (failure_rate < 0.0 || repair_rate < 0.0 || failure_rate + repair_rate == 0.0)
        throw Error("unavailability needs non-negative rates with a positive sum");
    return failure_rate / (failure_rate + repair_rate);
}

// ============================================================================
// Component definitions
// ============================================================================

namespace {

void add_heater_parameters(ComponentDefinition& def) {
    def.parameters.push_back({"power", ValueType::Number, x::number(1)});
    def.parameters.push_back({"failureRate", ValueType::Number, x::number(0.01)});
    def.parameters.push_back({"repairRate", ValueType::Number, x::number(0.1)});
    def.parameters.push_back({"minTemperature", ValueType::Number, x::number(15)});
    def.parameters.push_back({"maxTemperature", ValueType::Number, x::number(22)});
}

AutomatonDef make_function_automaton(bool with_chain_hooks) {
    AutomatonDef automaton;
    automaton.name = "Function";
    automaton.states = {"OK", "NOK"};
    automaton.initial_state = "OK";

    TransitionDef fail;
    fail.source = "OK";
    fail.target = "NOK";
    fail.law = {LawKind::Exponential, x::name("failureRate")};
    if (with_chain_hooks) fail.notify = {"onFailure"};
    automaton.transitions.push_back(std::move(fail));

    TransitionDef repair;
    repair.source = "NOK";
    repair.target = "OK";
    repair.law = {LawKind::Exponential, x::name("repairRate")};
    if (with_chain_hooks) repair.notify = {"onRepair"};
    automaton.transitions.push_back(std::move(repair));
    return automaton;
}

AutomatonDef make_power_automaton(ExprPtr on_condition, ExprPtr off_condition) {
    AutomatonDef automaton;
    automaton.name = "Power";
    automaton.states = {"ON", "OFF"};
    automaton.initial_state = "ON";

    TransitionDef on;
    on.source = "OFF";
    on.target = "ON";
    on.law = {LawKind::Instantaneous, x::number(1)};
    on.condition = std::move(on_condition);
    automaton.transitions.push_back(std::move(on));

    TransitionDef off;
    off.source = "ON";
    off.target = "OFF";
    off.law = {LawKind::Instantaneous, x::number(1)};
    off.condition = std::move(off_condition);
    automaton.transitions.push_back(std::move(off));
    return automaton;
}

ExprPtr healthy_and_cold() {
    return x::land(x::active("Function", "OK"),
                   x::le(x::name("temperature"), x::name("minTemperature")));
}

ExprPtr hot_or_broken() {
    return x::lor(x::ge(x::name("temperature"), x::name("maxTemperature")),
                  x::active("Function", "NOK"));
}

MessageBoxDef make_room_facing_box() {
    MessageBoxDef box;
    box.name = "mb_room";
    box.exports.push_back(
        {x::mul(x::name("power"), x::active("Power", "ON")), "heating"});
    box.imports.push_back({"temperature", "temperature"});
    return box;
}

/// Direct single-thermostat heater: runs while healthy and the room is cold.
ComponentDefinition make_plain_heater() {
    ComponentDefinition def;
    def.name = "Heater";
    add_heater_parameters(def);
    def.references.push_back({"temperature"});
    def.automata.push_back(make_function_automaton(false));
    def.automata.push_back(make_power_automaton(healthy_and_cold(), hot_or_broken()));
    def.message_boxes.push_back(make_room_facing_box());
    return define_component(std::move(def));
}

/// Direct arbitrated heater: peers exchange priority and health over message
/// boxes, and only the best healthy unit may run.
ComponentDefinition make_priority_heater() {
    ComponentDefinition def;
    def.name = "PriorityHeater";
    add_heater_parameters(def);
    def.parameters.push_back({"priority", ValueType::Number, nullptr});
    def.references.push_back({"temperature"});
    def.references.push_back({"otherOk"});
    def.references.push_back({"otherPriority"});

    auto outranked = [] {
        return x::aggregate(kernel::AggregateOp::Any,
                            x::land(x::name("otherOk"),
                                    x::gt(x::name("otherPriority"), x::name("priority"))));
    };
    ExprPtr on = x::land(healthy_and_cold(), x::lnot(outranked()));
    ExprPtr off = x::lor(hot_or_broken(), outranked());

    def.automata.push_back(make_function_automaton(false));
    def.automata.push_back(make_power_automaton(std::move(on), std::move(off)));
    def.message_boxes.push_back(make_room_facing_box());

    MessageBoxDef out;
    out.name = "mbPeersOut";
    out.exports.push_back({x::active("Function", "OK"), "peerOk"});
    out.exports.push_back({x::name("priority"), "peerPriority"});
    def.message_boxes.push_back(std::move(out));

    MessageBoxDef in;
    in.name = "mbPeersIn";
    in.imports.push_back({"peerOk", "otherOk"});
    in.imports.push_back({"peerPriority", "otherPriority"});
    def.message_boxes.push_back(std::move(in));

    return define_component(std::move(def));
}

void add_heater_shares(ComponentDefinition& def) {
    def.shares.push_back(
        {"heatContribution", x::mul(x::name("power"), x::active("Power", "ON"))});
    def.shares.push_back(
        {"wantsStopHigh", x::ge(x::name("temperature"), x::name("maxTemperature"))});
    def.shares.push_back(
        {"wantsStopLow", x::le(x::name("temperature"), x::name("minTemperature"))});
}

/// Mediated thermostat heater: same behaviour as the direct one, but it only
/// publishes shares and observes the room through its role.
ComponentDefinition make_observed_heater() {
    ComponentDefinition def;
    def.name = "ObservedHeater";
    add_heater_parameters(def);
    def.references.push_back({"temperature"});
    add_heater_shares(def);
    def.automata.push_back(make_function_automaton(false));
    def.automata.push_back(make_power_automaton(healthy_and_cold(), hot_or_broken()));
    return define_component(std::move(def));
}

/// Mediated standby heater: failure/repair hooks ripple a takeON flag down
/// the chain, and a unit runs only when every senior member is broken.
ComponentDefinition make_standby_heater() {
    ComponentDefinition def;
    def.name = "StandbyHeater";
    add_heater_parameters(def);
    def.parameters.push_back({"isMain", ValueType::Boolean, x::boolean(false)});
    def.variables.push_back({"takeON", ValueType::Boolean, false, x::name("isMain")});
    def.references.push_back({"temperature"});
    add_heater_shares(def);

    HookDef on_failure;
    on_failure.name = "onFailure";
    on_failure.kind = HookKind::ChainFailure;
    on_failure.flag_variable = "takeON";
    def.hooks.push_back(std::move(on_failure));

    HookDef on_repair;
    on_repair.name = "onRepair";
    on_repair.kind = HookKind::ChainRepair;
    on_repair.flag_variable = "takeON";
    def.hooks.push_back(std::move(on_repair));

    ExprPtr on = x::land(
        x::land(x::land(x::active("Function", "OK"), x::name("takeON")),
                x::upstream_failed()),
        x::le(x::name("temperature"), x::name("minTemperature")));
    ExprPtr off = x::lor(
        x::lor(x::lor(x::active("Function", "NOK"),
                      x::ge(x::name("temperature"), x::name("maxTemperature"))),
               x::lnot(x::name("takeON"))),
        x::lnot(x::upstream_failed()));

    def.automata.push_back(make_function_automaton(true));
    def.automata.push_back(make_power_automaton(std::move(on), std::move(off)));
    return define_component(std::move(def));
}

void add_room_parameters(ComponentDefinition& def) {
    def.parameters.push_back({"initialTemperature", ValueType::Number, x::number(17)});
    def.parameters.push_back({"outsideTemperature", ValueType::Number, x::number(13)});
    def.parameters.push_back({"leakage", ValueType::Number, x::number(0.1)});
}

ComponentDefinition make_direct_room() {
    ComponentDefinition def;
    def.name = "Room";
    add_room_parameters(def);
    def.variables.push_back(
        {"temperature", ValueType::Number, true, x::name("initialTemperature")});
    def.references.push_back({"heating"});

    MessageBoxDef box;
    box.name = "mb_heaters";
    box.exports.push_back({x::name("temperature"), "temperature"});
    box.imports.push_back({"heating", "heating"});
    def.message_boxes.push_back(std::move(box));
    return define_component(std::move(def));
}

ComponentDefinition make_observed_room() {
    ComponentDefinition def;
    def.name = "ObservedRoom";
    add_room_parameters(def);
    def.variables.push_back(
        {"temperature", ValueType::Number, true, x::name("initialTemperature")});
    return define_component(std::move(def));
}

// ============================================================================
// System wiring
// ============================================================================

std::vector<std::string> heater_names(int heaters) {
    if (heaters == 1) return {"heater"};
    std::vector<std::string> names;
    for (int i = 0; i < heaters; ++i) names.push_back("heater" + std::to_string(i));
    return names;
}

kernel::InstanceSpec make_heater_instance(const CaseConfig& config,
                                          const std::string& type,
                                          const std::string& name, int index) {
    kernel::InstanceSpec spec;
    spec.name = name;
    spec.type = type;
    spec.arguments.emplace_back("power", x::number(config.heater.power));
    spec.arguments.emplace_back("failureRate",
                                x::number(config.rates.failure[index]));
    spec.arguments.emplace_back("repairRate", x::number(config.rates.repair[index]));
    spec.arguments.emplace_back("minTemperature",
                                x::number(config.heater.min_temperature));
    spec.arguments.emplace_back("maxTemperature",
                                x::number(config.heater.max_temperature));
    if (config.arbitrated && !config.mediated)
        spec.arguments.emplace_back("priority", x::number(config.priorities[index]));
    if (config.arbitrated && config.mediated)
        spec.arguments.emplace_back("isMain", x::boolean(index == 0));
    return spec;
}

kernel::InstanceSpec make_room_instance(const CaseConfig& config,
                                        const std::string& type) {
    kernel::InstanceSpec spec;
    spec.name = "room";
    spec.type = type;
    spec.arguments.emplace_back("initialTemperature",
                                x::number(config.room.initial_temperature));
    spec.arguments.emplace_back("outsideTemperature",
                                x::number(config.room.outside_temperature));
    spec.arguments.emplace_back("leakage", x::number(config.room.leakage));
    return spec;
}

ExprPtr room_losses() {
    return x::mul(x::name("leakage"),
                  x::sub(x::name("temperature"), x::name("outsideTemperature")));
}

void validate_config(const CaseConfig& config) {
    if (config.heaters < 1)
        throw ValidationError(ValidationKind::ArityMismatch,
                              "a heated room needs at least one heater");
    if (config.rates.failure.size() != static_cast<std::size_t>(config.heaters)
        || config.rates.repair.size() != static_cast<std::size_t>(config.heaters))
        throw ValidationError(
            ValidationKind::ArityMismatch,
            "rate lists must have one entry per heater");
    if (config.arbitrated && !config.mediated) {
        if (config.priorities.size() != static_cast<std::size_t>(config.heaters))
            throw ValidationError(
                ValidationKind::ArityMismatch,
                "priority arbitration needs one priority per heater");
        std::set<double> distinct(config.priorities.begin(), config.priorities.end());
        if (distinct.size() != config.priorities.size())
            throw ValidationError(
                ValidationKind::DuplicateName,
                "heater priorities must be distinct, otherwise two equally "
                "ranked healthy heaters would run together");
    }
}

}  // namespace

SystemModel build_heated_room(const CaseConfig& config) {
    validate_config(config);

    std::vector<ComponentDefinition> definitions;
    std::string heater_type;
    std::string room_type;
    if (config.mediated) {
        heater_type = config.arbitrated ? "StandbyHeater" : "ObservedHeater";
        definitions.push_back(config.arbitrated ? make_standby_heater()
                                                : make_observed_heater());
        room_type = "ObservedRoom";
        definitions.push_back(make_observed_room());
    } else {
        heater_type = config.arbitrated ? "PriorityHeater" : "Heater";
        definitions.push_back(config.arbitrated ? make_priority_heater()
                                                : make_plain_heater());
        room_type = "Room";
        definitions.push_back(make_direct_room());
    }

    SystemSpec spec;
    std::vector<std::string> heaters = heater_names(config.heaters);

    if (config.heaters == 1) {
        spec.instances.push_back(make_heater_instance(config, heater_type, heaters[0], 0));
        spec.instances.push_back(make_room_instance(config, room_type));
    } else {
        spec.instances.push_back(make_room_instance(config, room_type));
        for (int i = 0; i < config.heaters; ++i)
            spec.instances.push_back(
                make_heater_instance(config, heater_type, heaters[i], i));
    }

    kernel::PdmpSpec pdmp;
    pdmp.name = "thermal";
    pdmp.odes.push_back({"room", "temperature"});

    if (config.mediated) {
        kernel::RoleContract contract;
        contract.name = "heater";
        contract.required_shares = {"heatContribution", "wantsStopHigh", "wantsStopLow"};
        contract.observed = {"temperature"};
        spec.roles.push_back(std::move(contract));

        kernel::MediatorGroupSpec group;
        group.name = "climate";
        group.subjects.push_back({"room", "temperature"});
        for (const auto& name : heaters) group.actives.push_back({name, "heater"});
        group.exposures.push_back(
            {"heatingInput",
             x::aggregate_over(kernel::AggregateOp::Sum, x::name("heatContribution"),
                               "heater")});
        group.exposures.push_back(
            {"stopHigh",
             x::aggregate_over(kernel::AggregateOp::Any, x::name("wantsStopHigh"),
                               "heater")});
        group.exposures.push_back(
            {"stopLow",
             x::aggregate_over(kernel::AggregateOp::Any, x::name("wantsStopLow"),
                               "heater")});
        spec.groups.push_back(std::move(group));

        if (config.arbitrated) spec.chains.push_back(heaters);

        pdmp.equations.push_back(
            {{"room", "temperature"}, x::sub(x::name("heatingInput"), room_losses())});
        pdmp.stops.push_back(x::name("stopHigh"));
        pdmp.stops.push_back(x::name("stopLow"));
    } else {
        for (const auto& name : heaters)
            spec.connections.push_back({name, "mb_room", "room", "mb_heaters"});
        if (config.arbitrated) {
            for (int i = 0; i < config.heaters; ++i)
                for (int j = 0; j < config.heaters; ++j) {
                    if (i == j) continue;
                    spec.connections.push_back(
                        {heaters[i], "mbPeersOut", heaters[j], "mbPeersIn"});
                }
        }

        ExprPtr supplied = config.heaters == 1
            ? x::name("heating")
            : x::aggregate(kernel::AggregateOp::Sum, x::name("heating"));
        pdmp.equations.push_back(
            {{"room", "temperature"}, x::sub(std::move(supplied), room_losses())});
    }

    spec.pdmps.push_back(std::move(pdmp));
    return assemble_system(std::move(definitions), spec);
}

// ============================================================================
// Catalog
// ============================================================================

namespace {

CaseConfig direct_config(int heaters, MaintenanceRates rates) {
    CaseConfig config;
    config.heaters = heaters;
    config.rates = std::move(rates);
    return config;
}

std::vector<CatalogEntry> make_catalog() {
    std::vector<CatalogEntry> entries;

    {
        CatalogEntry entry;
        entry.name = "case0";
        entry.entry_file = "case0.model";
        entry.files = {"components/heater.model", "components/room.model",
                       "case0.model"};
        entry.config = direct_config(1, frequent_maintenance(1));
        entry.instance_count = 2;
        entry.connection_count = 1;
        entries.push_back(std::move(entry));
    }
    {
        CatalogEntry entry;
        entry.name = "case1";
        entry.entry_file = "case1.model";
        entry.files = {"components/heater.model", "components/room.model",
                       "case1.model"};
        entry.config = direct_config(4, frequent_maintenance(4));
        entry.instance_count = 5;
        entry.connection_count = 4;
        entries.push_back(std::move(entry));
    }
    {
        CatalogEntry entry;
        entry.name = "case2";
        entry.entry_file = "case2.model";
        entry.files = {"components/room.model", "case2.model"};
        entry.config = direct_config(4, standby_demo_rates());
        entry.config.arbitrated = true;
        entry.config.priorities = {10, 6, 4, 2};
        entry.instance_count = 5;
        entry.connection_count = 16;
        entries.push_back(std::move(entry));
    }
    {
        CatalogEntry entry;
        entry.name = "case0a";
        entry.entry_file = "case0a.model";
        entry.files = {"components/mediator.model", "case0a.model"};
        entry.config = direct_config(1, frequent_maintenance(1));
        entry.config.mediated = true;
        entry.instance_count = 2;
        entry.group_count = 1;
        entries.push_back(std::move(entry));
    }
    {
        CatalogEntry entry;
        entry.name = "case1a";
        entry.entry_file = "case1a.model";
        entry.files = {"components/mediator.model", "case1a.model"};
        entry.config = direct_config(4, frequent_maintenance(4));
        entry.config.mediated = true;
        entry.instance_count = 5;
        entry.group_count = 1;
        entries.push_back(std::move(entry));
    }
    {
        CatalogEntry entry;
        entry.name = "case2a";
        entry.entry_file = "case2a.model";
        entry.files = {"components/mediator.model", "case2a.model"};
        entry.config = direct_config(4, standby_demo_rates());
        entry.config.mediated = true;
        entry.config.arbitrated = true;
        entry.instance_count = 5;
        entry.group_count = 1;
        entry.chain_count = 1;
        entries.push_back(std::move(entry));
    }
    return entries;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = make_catalog();
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& entry : catalog())
        if (entry.name == name) return entry;
    throw Error("no case named '" + name + "' in the catalog");
}

}  // namespace hybridsim::cases

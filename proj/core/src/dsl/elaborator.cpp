#include "hybridsim/dsl/elaborator.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hybridsim/dsl/parser.hpp"

namespace hybridsim::dsl {

namespace fs = std::filesystem;
using kernel::ExprPtr;

namespace {

ExprPtr clone(const ExprPtr& e) { return e ? e->clone() : nullptr; }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ElaborationError("cannot open model file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Loads the include closure depth first, dependencies before includers.
class Loader {
public:
    void load(const fs::path& path) {
        fs::path canonical = fs::weakly_canonical(path);
        if (in_progress_.count(canonical)) {
            throw ElaborationError("include cycle through '" + path.string()
                                   + "'");
        }
        if (loaded_.count(canonical))
            return;
        in_progress_.insert(canonical);

        ModelFile file = parse_model(read_file(canonical), canonical.string());
        for (const std::string& include : file.includes)
            load(canonical.parent_path() / include);

        in_progress_.erase(canonical);
        loaded_.insert(canonical);
        order_.push_back(canonical.string());
        files_.push_back(std::move(file));
    }

    [[nodiscard]] std::vector<ModelFile>& files() { return files_; }
    [[nodiscard]] const std::vector<std::string>& order() const { return order_; }

private:
    std::set<fs::path> in_progress_;
    std::set<fs::path> loaded_;
    std::vector<std::string> order_;
    std::vector<ModelFile> files_;
};

kernel::SystemSpec lower_system(const AstSystem& system,
                                const std::vector<AstRoleContract>& roles,
                                const std::vector<kernel::ComponentDefinition>& defs) {
    kernel::SystemSpec spec;

    for (const AstRoleContract& role : roles) {
        kernel::RoleContract contract;
        contract.name = role.name;
        contract.required_shares = role.required_shares;
        contract.observed = role.observed;
        spec.roles.push_back(std::move(contract));
    }

    for (const AstInstance& instance : system.instances) {
        kernel::InstanceSpec lowered;
        lowered.name = instance.name;
        lowered.type = instance.type;

        const kernel::ComponentDefinition* definition = nullptr;
        for (const auto& def : defs)
            if (def.name == instance.type)
                definition = &def;
        if (!definition)
            throw ElaborationError(ValidationKind::UnknownComponentType,
                                   "instance '" + instance.name
                                   + "' uses undefined component '"
                                   + instance.type + "'");

        std::size_t positional = 0;
        for (const AstArgument& argument : instance.arguments) {
            std::string name = argument.name;
            if (name.empty()) {
                if (positional >= definition->parameters.size())
                    throw ElaborationError(
                        ValidationKind::ArityMismatch,
                        "instance '" + instance.name + "' passes more "
                        "positional arguments than '" + instance.type
                        + "' has parameters");
                name = definition->parameters[positional++].name;
            }
            lowered.arguments.emplace_back(std::move(name), clone(argument.value));
        }
        spec.instances.push_back(std::move(lowered));
    }

    for (const AstConnect& connect : system.connects)
        spec.connections.push_back({connect.a_instance, connect.a_box,
                                    connect.b_instance, connect.b_box});

    for (const AstMediator& mediator : system.mediators) {
        kernel::MediatorGroupSpec group;
        group.name = mediator.name;
        for (const AstSubject& subject : mediator.subjects)
            group.subjects.push_back({subject.instance, subject.variable});
        for (const AstActive& active : mediator.actives)
            for (const std::string& instance : active.instances)
                group.actives.push_back({instance, active.role});
        for (const AstExposure& exposure : mediator.exposures)
            group.exposures.push_back({exposure.name, clone(exposure.value)});
        spec.groups.push_back(std::move(group));
    }

    for (const AstChain& chain : system.chains)
        spec.chains.push_back(chain.members);

    for (const AstPdmp& pdmp : system.pdmps) {
        kernel::PdmpSpec lowered;
        lowered.name = pdmp.name;
        for (const AstOde& ode : pdmp.odes)
            lowered.odes.push_back({ode.instance, ode.variable});
        for (const AstEquation& equation : pdmp.equations)
            lowered.equations.push_back(
                {{equation.instance, equation.variable}, clone(equation.rhs)});
        for (const AstStop& stop : pdmp.stops)
            lowered.stops.push_back(clone(stop.condition));
        for (const AstStart& start : pdmp.starts)
            lowered.starts.push_back({start.instance, start.hook});
        spec.pdmps.push_back(std::move(lowered));
    }

    return spec;
}

}  // namespace

kernel::ComponentDefinition lower_component(const AstComponent& component) {
    kernel::ComponentDefinition def;
    def.name = component.name;

    for (const AstParameter& parameter : component.parameters)
        def.parameters.push_back(
            {parameter.name, parameter.type, clone(parameter.default_value)});

    for (const AstVariable& variable : component.variables) {
        kernel::VariableDef lowered;
        lowered.name = variable.name;
        lowered.type = variable.type == SurfaceType::Boolean
                           ? kernel::ValueType::Boolean
                           : kernel::ValueType::Number;
        lowered.continuous = variable.type == SurfaceType::Continuous;
        lowered.initial = clone(variable.initial);
        def.variables.push_back(std::move(lowered));
    }

    std::set<std::string> declared;
    for (const AstReference& reference : component.references) {
        def.references.push_back({reference.name});
        declared.insert(reference.name);
    }
    // Imports declare their target reference on first use.
    for (const AstMessageBox& box : component.message_boxes)
        for (const AstImport& import : box.imports)
            if (declared.insert(import.reference).second)
                def.references.push_back({import.reference});

    for (const AstShare& share : component.shares)
        def.shares.push_back({share.name, clone(share.value)});

    for (const AstMessageBox& box : component.message_boxes) {
        kernel::MessageBoxDef lowered;
        lowered.name = box.name;
        for (const AstExport& item : box.exports)
            lowered.exports.push_back({clone(item.value), item.label});
        for (const AstImport& item : box.imports)
            lowered.imports.push_back({item.label, item.reference, -1});
        def.message_boxes.push_back(std::move(lowered));
    }

    for (const AstHook& hook : component.hooks) {
        kernel::HookDef lowered;
        lowered.name = hook.name;
        lowered.kind = hook.kind;
        lowered.flag_variable = hook.flag_variable;
        for (const auto& [variable, value] : hook.assignments)
            lowered.assignments.push_back({variable, clone(value), -1});
        def.hooks.push_back(std::move(lowered));
    }

    for (const AstAutomaton& automaton : component.automata) {
        kernel::AutomatonDef lowered;
        lowered.name = automaton.name;
        lowered.states = automaton.states;
        lowered.initial_state = automaton.initial_state;
        for (const AstTransition& transition : automaton.transitions) {
            kernel::TransitionDef t;
            t.source = transition.source;
            t.target = transition.target;
            t.law = {transition.law, clone(transition.law_parameter)};
            t.condition = clone(transition.condition);
            t.notify = transition.notify;
            lowered.transitions.push_back(std::move(t));
        }
        def.automata.push_back(std::move(lowered));
    }

    return kernel::define_component(std::move(def));
}

ElaboratedModel elaborate_file(const std::string& path) {
    Loader loader;
    loader.load(path);

    std::vector<kernel::ComponentDefinition> defs;
    const AstSystem* system = nullptr;
    std::vector<AstRoleContract> roles;
    for (ModelFile& file : loader.files()) {
        for (const AstComponent& component : file.components)
            defs.push_back(lower_component(component));
        for (AstRoleContract& role : file.roles)
            roles.push_back(std::move(role));
        for (const AstSystem& declared : file.systems) {
            if (system)
                throw ElaborationError("more than one system declared (found '"
                                       + system->name + "' and '"
                                       + declared.name + "')");
            system = &declared;
        }
    }
    if (!system)
        throw ElaborationError("no system declared in '" + path + "'");

    ElaboratedModel result;
    result.system_name = system->name;
    result.files = loader.order();
    kernel::SystemSpec spec = lower_system(*system, roles, defs);
    result.model = kernel::assemble_system(std::move(defs), spec);
    return result;
}

}  // namespace hybridsim::dsl

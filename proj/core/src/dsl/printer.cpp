#include "hybridsim/dsl/printer.hpp"

#include <sstream>

namespace hybridsim::dsl {

namespace {

const char* surface_type_name(SurfaceType type) {
    switch (type) {
    case SurfaceType::Number: return "number";
    case SurfaceType::Boolean: return "bool";
    case SurfaceType::Continuous: return "continuous";
    }
    return "number";
}

const char* parameter_type_name(kernel::ValueType type) {
    return type == kernel::ValueType::Boolean ? "bool" : "number";
}

void print_joined(std::ostream& out, const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0)
            out << ", ";
        out << names[i];
    }
}

void print_component(std::ostream& out, const AstComponent& component) {
    out << "component " << component.name;
    if (!component.parameters.empty()) {
        out << "(";
        for (std::size_t i = 0; i < component.parameters.size(); ++i) {
            const AstParameter& parameter = component.parameters[i];
            if (i > 0)
                out << ", ";
            out << parameter.name << ": " << parameter_type_name(parameter.type);
            if (parameter.default_value)
                out << " = " << kernel::to_text(*parameter.default_value);
        }
        out << ")";
    }
    out << " {\n";

    for (const AstVariable& variable : component.variables) {
        out << "    var " << variable.name << ": "
            << surface_type_name(variable.type);
        if (variable.initial)
            out << " = " << kernel::to_text(*variable.initial);
        out << ";\n";
    }
    for (const AstReference& reference : component.references)
        out << "    ref " << reference.name << ";\n";
    for (const AstShare& share : component.shares)
        out << "    share " << share.name << " = " << kernel::to_text(*share.value)
            << ";\n";
    for (const AstMessageBox& box : component.message_boxes) {
        out << "    msgbox " << box.name << " {\n";
        for (const AstExport& item : box.exports)
            out << "        export " << kernel::to_text(*item.value) << " as "
                << item.label << ";\n";
        for (const AstImport& item : box.imports)
            out << "        import " << item.label << " -> " << item.reference
                << ";\n";
        out << "    }\n";
    }
    for (const AstHook& hook : component.hooks) {
        if (hook.kind == kernel::HookKind::Assign) {
            out << "    hook " << hook.name << " {\n";
            for (const auto& [variable, value] : hook.assignments)
                out << "        set " << variable << " = "
                    << kernel::to_text(*value) << ";\n";
            out << "    }\n";
        } else {
            const char* verb = hook.kind == kernel::HookKind::ChainFailure
                                   ? "chain_failure"
                                   : "chain_repair";
            out << "    hook " << hook.name << " " << verb << "("
                << hook.flag_variable << ");\n";
        }
    }
    for (const AstAutomaton& automaton : component.automata) {
        out << "    automaton " << automaton.name << " {\n";
        out << "        state ";
        print_joined(out, automaton.states);
        out << ";\n";
        out << "        init " << automaton.initial_state << ";\n";
        for (const AstTransition& transition : automaton.transitions) {
            out << "        trans " << transition.source << " -> "
                << transition.target << " law "
                << (transition.law == kernel::LawKind::Exponential ? "expo"
                                                                   : "inst")
                << "(" << kernel::to_text(*transition.law_parameter) << ")";
            if (transition.condition)
                out << " when " << kernel::to_text(*transition.condition);
            if (!transition.notify.empty()) {
                out << " notify ";
                print_joined(out, transition.notify);
            }
            out << ";\n";
        }
        out << "    }\n";
    }
    out << "}\n";
}

void print_role(std::ostream& out, const AstRoleContract& role) {
    out << "role " << role.name << " {\n";
    for (const std::string& share : role.required_shares)
        out << "    requires " << share << ";\n";
    for (const std::string& reference : role.observed)
        out << "    observes " << reference << ";\n";
    out << "}\n";
}

void print_system(std::ostream& out, const AstSystem& system) {
    out << "system " << system.name << " {\n";
    for (const AstInstance& instance : system.instances) {
        out << "    instance " << instance.name << ": " << instance.type;
        if (!instance.arguments.empty()) {
            out << "(";
            for (std::size_t i = 0; i < instance.arguments.size(); ++i) {
                const AstArgument& argument = instance.arguments[i];
                if (i > 0)
                    out << ", ";
                if (!argument.name.empty())
                    out << argument.name << " = ";
                out << kernel::to_text(*argument.value);
            }
            out << ")";
        }
        out << ";\n";
    }
    for (const AstConnect& connect : system.connects)
        out << "    connect " << connect.a_instance << "." << connect.a_box
            << ", " << connect.b_instance << "." << connect.b_box << ";\n";
    for (const AstMediator& mediator : system.mediators) {
        out << "    mediator " << mediator.name << " {\n";
        for (const AstSubject& subject : mediator.subjects)
            out << "        subject " << subject.instance << "."
                << subject.variable << ";\n";
        for (const AstActive& active : mediator.actives) {
            out << "        active ";
            print_joined(out, active.instances);
            out << " role " << active.role << ";\n";
        }
        for (const AstExposure& exposure : mediator.exposures)
            out << "        expose " << exposure.name << " = "
                << kernel::to_text(*exposure.value) << ";\n";
        out << "    }\n";
    }
    for (const AstChain& chain : system.chains) {
        out << "    chain ";
        print_joined(out, chain.members);
        out << ";\n";
    }
    for (const AstPdmp& pdmp : system.pdmps) {
        out << "    pdmp " << pdmp.name << " {\n";
        for (const AstOde& ode : pdmp.odes)
            out << "        ode " << ode.instance << "." << ode.variable << ";\n";
        for (const AstEquation& equation : pdmp.equations)
            out << "        eq d(" << equation.instance << "."
                << equation.variable
                << ")/dt = " << kernel::to_text(*equation.rhs) << ";\n";
        for (const AstStop& stop : pdmp.stops)
            out << "        stop " << kernel::to_text(*stop.condition) << ";\n";
        for (const AstStart& start : pdmp.starts)
            out << "        start " << start.instance << "." << start.hook
                << ";\n";
        out << "    }\n";
    }
    out << "}\n";
}

}  // namespace

std::string print_model(const ModelFile& file) {
    std::ostringstream out;
    bool first = true;
    auto separate = [&] {
        if (!first)
            out << "\n";
        first = false;
    };

    if (!file.includes.empty()) {
        separate();
        for (const std::string& include : file.includes)
            out << "include \"" << include << "\";\n";
    }
    for (const AstComponent& component : file.components) {
        separate();
        print_component(out, component);
    }
    for (const AstRoleContract& role : file.roles) {
        separate();
        print_role(out, role);
    }
    for (const AstSystem& system : file.systems) {
        separate();
        print_system(out, system);
    }
    return out.str();
}

}  // namespace hybridsim::dsl

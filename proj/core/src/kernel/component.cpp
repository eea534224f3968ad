#include "hybridsim/kernel/component.hpp"

#include <unordered_set>

namespace hybridsim::kernel {

namespace {

[[noreturn]] void fail(ValidationKind kind, const std::string& what) {
    throw ValidationError(kind, what);
}

template <typename Vec, typename Pred>
int index_of(const Vec& items, Pred pred) {
    for (std::size_t i = 0; i < items.size(); ++i)
        if (pred(items[i])) return static_cast<int>(i);
    return -1;
}

}  // namespace

int AutomatonDef::find_state(const std::string& state) const {
    return index_of(states, [&](const std::string& s) { return s == state; });
}

int ComponentDefinition::find_parameter(const std::string& n) const {
    return index_of(parameters, [&](const ParameterDef& p) { return p.name == n; });
}

int ComponentDefinition::find_variable(const std::string& n) const {
    return index_of(variables, [&](const VariableDef& v) { return v.name == n; });
}

int ComponentDefinition::find_reference(const std::string& n) const {
    return index_of(references, [&](const ReferenceDef& r) { return r.name == n; });
}

int ComponentDefinition::find_share(const std::string& n) const {
    return index_of(shares, [&](const ShareDef& s) { return s.name == n; });
}

int ComponentDefinition::find_automaton(const std::string& n) const {
    return index_of(automata, [&](const AutomatonDef& a) { return a.name == n; });
}

int ComponentDefinition::find_message_box(const std::string& n) const {
    return index_of(message_boxes, [&](const MessageBoxDef& b) { return b.name == n; });
}

int ComponentDefinition::find_hook(const std::string& n) const {
    return index_of(hooks, [&](const HookDef& h) { return h.name == n; });
}

namespace {

void require_unique(std::unordered_set<std::string>& seen, const std::string& name,
                    const std::string& what, const std::string& where) {
    if (name.empty())
        fail(ValidationKind::DuplicateName, "unnamed " + what + " in " + where);
    if (!seen.insert(name).second)
        fail(ValidationKind::DuplicateName,
             what + " '" + name + "' is declared twice in " + where);
}

/// Declared type vs. the bound expression's static type.  `Any` on either
/// side defers the check to runtime coercion.
void require_assignable(ValueType declared, ValueType actual,
                        const std::string& what) {
    if (declared == ValueType::Any || actual == ValueType::Any) return;
    if (declared == ValueType::Boolean && actual == ValueType::Number)
        fail(ValidationKind::TypeMismatch, what + ": a number cannot initialise a bool");
    // Numbers accept booleans (0/1 coercion), so the remaining pairs are fine.
}

void bind_automaton(AutomatonDef& automaton, const ComponentDefinition& def) {
    const std::string where = "component '" + def.name + "'";
    if (automaton.states.empty())
        fail(ValidationKind::UnresolvedState,
             "automaton '" + automaton.name + "' in " + where + " has no states");

    std::unordered_set<std::string> state_names;
    for (const auto& state : automaton.states)
        require_unique(state_names, state,
                       "state of automaton '" + automaton.name + "'", where);

    automaton.initial_index = automaton.find_state(automaton.initial_state);
    if (automaton.initial_index < 0)
        fail(ValidationKind::UnresolvedState,
             "automaton '" + automaton.name + "' in " + where
             + " starts in unknown state '" + automaton.initial_state + "'");

    BindContext scope;
    scope.component = &def;

    std::unordered_set<std::string> transition_names;
    for (auto& transition : automaton.transitions) {
        transition.source_index = automaton.find_state(transition.source);
        if (transition.source_index < 0)
            fail(ValidationKind::UnresolvedState,
                 "transition in automaton '" + automaton.name
                 + "' leaves unknown state '" + transition.source + "'");
        transition.target_index = automaton.find_state(transition.target);
        if (transition.target_index < 0)
            fail(ValidationKind::UnresolvedState,
                 "transition in automaton '" + automaton.name
                 + "' enters unknown state '" + transition.target + "'");

        if (transition.name.empty())
            transition.name = transition.source + "_to_" + transition.target;
        require_unique(transition_names, transition.name,
                       "transition of automaton '" + automaton.name + "'", where);

        if (!transition.law.parameter)
            fail(ValidationKind::BadLaw,
                 "transition '" + transition.name + "' has no law parameter");
        bind_expression(*transition.law.parameter, scope);

        if (transition.condition) {
            ValueType type = bind_expression(*transition.condition, scope);
            if (type == ValueType::Number)
                fail(ValidationKind::NonBooleanCondition,
                     "condition of transition '" + transition.name
                     + "' in " + where + " is a number");
        }

        transition.notify_indices.clear();
        for (const auto& hook : transition.notify) {
            int idx = def.find_hook(hook);
            if (idx < 0)
                fail(ValidationKind::BadHook,
                     "transition '" + transition.name + "' notifies unknown hook '"
                     + hook + "'");
            transition.notify_indices.push_back(idx);
        }
    }
}

}  // namespace

ComponentDefinition define_component(ComponentDefinition def) {
    if (def.name.empty())
        fail(ValidationKind::DuplicateName, "component definition has no name");
    const std::string where = "component '" + def.name + "'";

    // Parameters, variables, references and shares live in one namespace:
    // an expression mentions any of them by bare name.
    std::unordered_set<std::string> value_names;
    for (const auto& p : def.parameters) require_unique(value_names, p.name, "parameter", where);
    for (const auto& v : def.variables) require_unique(value_names, v.name, "variable", where);
    for (const auto& r : def.references) require_unique(value_names, r.name, "reference", where);
    for (const auto& s : def.shares) require_unique(value_names, s.name, "share", where);

    std::unordered_set<std::string> automaton_names;
    for (const auto& a : def.automata) require_unique(automaton_names, a.name, "automaton", where);
    std::unordered_set<std::string> box_names;
    for (const auto& b : def.message_boxes) require_unique(box_names, b.name, "message box", where);
    std::unordered_set<std::string> hook_names;
    for (const auto& h : def.hooks) require_unique(hook_names, h.name, "hook", where);

    // Parameter defaults are constants.
    BindContext constant_scope;
    constant_scope.constants_only = true;
    for (auto& parameter : def.parameters) {
        if (!parameter.default_value) continue;
        ValueType type = bind_expression(*parameter.default_value, constant_scope);
        require_assignable(parameter.type, type,
                           "default of parameter '" + parameter.name + "' in " + where);
    }

    // Variable initialisers see parameters and earlier variables only.
    for (std::size_t i = 0; i < def.variables.size(); ++i) {
        auto& variable = def.variables[i];
        if (variable.continuous && variable.type != ValueType::Number)
            fail(ValidationKind::TypeMismatch,
                 "continuous variable '" + variable.name + "' in " + where
                 + " must be a number");
        if (!variable.initial)
            fail(ValidationKind::TypeMismatch,
                 "variable '" + variable.name + "' in " + where
                 + " has no initial value");
        BindContext scope;
        scope.component = &def;
        scope.visible_variables = static_cast<int>(i);
        ValueType type = bind_expression(*variable.initial, scope);
        require_assignable(variable.type, type,
                           "initial value of variable '" + variable.name + "' in " + where);
    }

    BindContext full_scope;
    full_scope.component = &def;

    // Shares bind before anything that may read them by name.
    for (auto& share : def.shares) {
        if (!share.value)
            fail(ValidationKind::TypeMismatch,
                 "share '" + share.name + "' in " + where + " has no expression");
        bind_expression(*share.value, full_scope);
    }

    // Hooks bind before transitions resolve their notify lists.
    for (auto& hook : def.hooks) {
        switch (hook.kind) {
            case HookKind::Assign:
                for (auto& assignment : hook.assignments) {
                    int idx = def.find_variable(assignment.variable);
                    if (idx < 0)
                        fail(ValidationKind::BadHook,
                             "hook '" + hook.name + "' in " + where
                             + " assigns unknown variable '" + assignment.variable + "'");
                    assignment.variable_index = idx;
                    if (!assignment.value)
                        fail(ValidationKind::BadHook,
                             "hook '" + hook.name + "' assigns nothing to '"
                             + assignment.variable + "'");
                    ValueType type = bind_expression(*assignment.value, full_scope);
                    require_assignable(def.variables[idx].type, type,
                                       "assignment to '" + assignment.variable
                                       + "' in hook '" + hook.name + "'");
                }
                break;
            case HookKind::ChainFailure:
            case HookKind::ChainRepair: {
                int idx = def.find_variable(hook.flag_variable);
                if (idx < 0)
                    fail(ValidationKind::BadHook,
                         "chain hook '" + hook.name + "' in " + where
                         + " toggles unknown variable '" + hook.flag_variable + "'");
                if (def.variables[idx].type != ValueType::Boolean)
                    fail(ValidationKind::BadHook,
                         "chain hook '" + hook.name + "' in " + where
                         + " needs a bool flag, but '" + hook.flag_variable
                         + "' is a " + std::string(to_string(def.variables[idx].type)));
                hook.flag_index = idx;
                break;
            }
        }
    }

    for (auto& automaton : def.automata) bind_automaton(automaton, def);

    // Message boxes: exports evaluate in full scope; imports feed declared
    // references, one import entry per reference at most.
    std::unordered_set<std::string> imported_references;
    for (auto& box : def.message_boxes) {
        std::unordered_set<std::string> export_labels;
        std::unordered_set<std::string> import_labels;
        for (auto& exported : box.exports) {
            require_unique(export_labels, exported.label,
                           "export label of box '" + box.name + "'", where);
            if (!exported.value)
                fail(ValidationKind::LabelMismatch,
                     "export '" + exported.label + "' of box '" + box.name
                     + "' has no expression");
            bind_expression(*exported.value, full_scope);
        }
        for (auto& imported : box.imports) {
            require_unique(import_labels, imported.label,
                           "import label of box '" + box.name + "'", where);
            int idx = def.find_reference(imported.reference);
            if (idx < 0)
                fail(ValidationKind::UnresolvedIdentifier,
                     "import '" + imported.label + "' of box '" + box.name
                     + "' feeds unknown reference '" + imported.reference + "'");
            if (!imported_references.insert(imported.reference).second)
                fail(ValidationKind::DuplicateName,
                     "reference '" + imported.reference + "' in " + where
                     + " is fed by more than one import");
            imported.reference_index = idx;
        }
    }

    return def;
}

}  // namespace hybridsim::kernel

#pragma once

#include <string>
#include <vector>

#include "hybridsim/kernel/expr.hpp"

namespace hybridsim::kernel {

// ============================================================================
// Component building blocks
// ============================================================================

/// Constructor parameter: fixed at instance creation, immutable afterwards.
struct ParameterDef {
    std::string name;
    ValueType type = ValueType::Number;
    ExprPtr default_value;  ///< constant expression; null = caller must supply
};

/// State variable.  `continuous` marks variables a PDMP manager may drive
/// through an ODE; they are always numbers.
struct VariableDef {
    std::string name;
    ValueType type = ValueType::Number;
    bool continuous = false;
    ExprPtr initial;  ///< may reference parameters and earlier variables
};

/// Import slot: an ordered list of remote values this component can read.
/// Connections are attached by message-box wiring or by mediator groups.
struct ReferenceDef {
    std::string name;
};

/// Named expression this component publishes to mediator groups.  Role-driven
/// aggregates may read *only* shares, which keeps mediated components
/// encapsulated.
struct ShareDef {
    std::string name;
    ExprPtr value;
};

enum class LawKind {
    Exponential,    ///< fires after an exponentially distributed delay
    Instantaneous,  ///< fires as soon as its condition holds
};

struct TransitionLaw {
    LawKind kind = LawKind::Instantaneous;
    ExprPtr parameter;  ///< Exponential: rate; Instantaneous: firing weight
};

struct TransitionDef {
    std::string name;  ///< empty at build time -> "<source>_to_<target>"
    std::string source;
    std::string target;
    TransitionLaw law;
    ExprPtr condition;                ///< null = always enabled
    std::vector<std::string> notify;  ///< hooks executed right after firing

    // resolved by define_component
    int source_index = -1;
    int target_index = -1;
    std::vector<int> notify_indices;
};

struct AutomatonDef {
    std::string name;
    std::vector<std::string> states;
    std::string initial_state;
    std::vector<TransitionDef> transitions;

    int initial_index = -1;  // resolved

    [[nodiscard]] int find_state(const std::string& state) const;
};

/// One exported value: evaluated in the owner's scope, visible to connected
/// message boxes under `label`.
struct ExportDef {
    ExprPtr value;
    std::string label;
};

/// Wire label -> local reference binding.
struct ImportDef {
    std::string label;
    std::string reference;
    int reference_index = -1;  // resolved
};

struct MessageBoxDef {
    std::string name;
    std::vector<ExportDef> exports;
    std::vector<ImportDef> imports;
};

enum class HookKind {
    Assign,        ///< run a list of `set variable = expr` assignments
    ChainFailure,  ///< mark self failed; raise the flag in every junior chain member
    ChainRepair,   ///< mark self healthy; clear the flag in every junior chain member
};

struct HookAssignment {
    std::string variable;
    ExprPtr value;
    int variable_index = -1;  // resolved
};

struct HookDef {
    std::string name;
    HookKind kind = HookKind::Assign;
    std::vector<HookAssignment> assignments;  // Assign hooks
    std::string flag_variable;                // chain hooks: boolean flag to toggle downstream
    int flag_index = -1;                      // resolved (within this definition)
};

// ============================================================================
// Component definition
// ============================================================================

/// A reusable component type: parameters, variables, import references,
/// shared expressions, automata, message boxes, and notification hooks.
/// Run `define_component` to validate and bind one; definitions are immutable
/// afterwards and safe to share across threads.
struct ComponentDefinition {
    std::string name;
    std::vector<ParameterDef> parameters;
    std::vector<VariableDef> variables;
    std::vector<ReferenceDef> references;
    std::vector<ShareDef> shares;
    std::vector<AutomatonDef> automata;
    std::vector<MessageBoxDef> message_boxes;
    std::vector<HookDef> hooks;

    [[nodiscard]] int find_parameter(const std::string& name) const;
    [[nodiscard]] int find_variable(const std::string& name) const;
    [[nodiscard]] int find_reference(const std::string& name) const;
    [[nodiscard]] int find_share(const std::string& name) const;
    [[nodiscard]] int find_automaton(const std::string& name) const;
    [[nodiscard]] int find_message_box(const std::string& name) const;
    [[nodiscard]] int find_hook(const std::string& name) const;
};

/// Validate and bind a component definition:
///  - all member names are unique within their namespace (parameters,
///    variables, references and shares live in one value namespace),
///  - every automaton has states, a valid initial state, and transitions
///    whose endpoints resolve,
///  - transition names are unique per automaton (auto-named
///    "<source>_to_<target>" when empty),
///  - every expression binds and type-checks in the component scope,
///  - conditions are boolean, law parameters numeric,
///  - message-box imports target declared references (each reference is fed
///    by at most one import entry),
///  - hooks resolve: assignments target declared variables with compatible
///    types; chain hooks name a boolean flag variable declared locally.
/// Throws ValidationError.  Returns the bound definition.
ComponentDefinition define_component(ComponentDefinition def);

}  // namespace hybridsim::kernel

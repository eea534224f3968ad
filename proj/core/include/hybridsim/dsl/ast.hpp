#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hybridsim/kernel/component.hpp"

namespace hybridsim::dsl {

// ============================================================================
// Source-level model description.  The parser produces this tree, the printer
// renders it back in canonical form, and the elaborator lowers it onto the
// kernel's component/system structures.  Expressions reuse the kernel tree
// (unbound), so there is exactly one expression language in the toolchain.
// ============================================================================

/// Variable surface types: `continuous` is a number a dynamics manager may
/// drive through a differential equation.
enum class SurfaceType {
    Number,
    Boolean,
    Continuous,
};

struct AstParameter {
    std::string name;
    kernel::ValueType type = kernel::ValueType::Number;
    kernel::ExprPtr default_value;  ///< null = required at instantiation
};

struct AstVariable {
    std::string name;
    SurfaceType type = SurfaceType::Number;
    kernel::ExprPtr initial;
};

struct AstReference {
    std::string name;
};

struct AstShare {
    std::string name;
    kernel::ExprPtr value;
};

struct AstTransition {
    std::string source;
    std::string target;
    kernel::LawKind law = kernel::LawKind::Instantaneous;
    kernel::ExprPtr law_parameter;
    kernel::ExprPtr condition;        ///< null = unconditional
    std::vector<std::string> notify;  ///< hooks fired after the transition
};

struct AstAutomaton {
    std::string name;
    std::vector<std::string> states;
    std::string initial_state;
    std::vector<AstTransition> transitions;
};

struct AstExport {
    kernel::ExprPtr value;
    std::string label;
};

struct AstImport {
    std::string label;
    std::string reference;  ///< implicitly declares the reference
};

struct AstMessageBox {
    std::string name;
    std::vector<AstExport> exports;
    std::vector<AstImport> imports;
};

struct AstHook {
    std::string name;
    kernel::HookKind kind = kernel::HookKind::Assign;
    std::vector<std::pair<std::string, kernel::ExprPtr>> assignments;
    std::string flag_variable;  ///< chain hooks only
};

struct AstComponent {
    std::string name;
    std::vector<AstParameter> parameters;
    std::vector<AstVariable> variables;
    std::vector<AstReference> references;
    std::vector<AstShare> shares;
    std::vector<AstMessageBox> message_boxes;
    std::vector<AstHook> hooks;
    std::vector<AstAutomaton> automata;
};

// ----------------------------------------------------------------------------
// System-level declarations
// ----------------------------------------------------------------------------

struct AstArgument {
    std::string name;  ///< empty = positional
    kernel::ExprPtr value;
};

struct AstInstance {
    std::string name;
    std::string type;
    std::vector<AstArgument> arguments;
};

struct AstConnect {
    std::string a_instance;
    std::string a_box;
    std::string b_instance;
    std::string b_box;
};

struct AstRoleContract {
    std::string name;
    std::vector<std::string> required_shares;
    std::vector<std::string> observed;
};

struct AstSubject {
    std::string instance;
    std::string variable;
};

struct AstActive {
    std::vector<std::string> instances;
    std::string role;
};

struct AstExposure {
    std::string name;
    kernel::ExprPtr value;
};

struct AstMediator {
    std::string name;
    std::vector<AstSubject> subjects;
    std::vector<AstActive> actives;
    std::vector<AstExposure> exposures;
};

struct AstChain {
    std::vector<std::string> members;
};

struct AstOde {
    std::string instance;
    std::string variable;
};

struct AstEquation {
    std::string instance;
    std::string variable;
    kernel::ExprPtr rhs;
};

struct AstStop {
    kernel::ExprPtr condition;
};

struct AstStart {
    std::string instance;
    std::string hook;
};

struct AstPdmp {
    std::string name;
    std::vector<AstOde> odes;
    std::vector<AstEquation> equations;
    std::vector<AstStop> stops;
    std::vector<AstStart> starts;
};

struct AstSystem {
    std::string name;
    std::vector<AstInstance> instances;
    std::vector<AstConnect> connects;
    std::vector<AstMediator> mediators;
    std::vector<AstChain> chains;
    std::vector<AstPdmp> pdmps;
};

/// One parsed model file, with declarations in source order.
struct ModelFile {
    std::vector<std::string> includes;
    std::vector<AstComponent> components;
    std::vector<AstRoleContract> roles;
    std::vector<AstSystem> systems;
};

}  // namespace hybridsim::dsl

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hybridsim/kernel/component.hpp"

namespace hybridsim::kernel {

// ============================================================================
// Assembly inputs
// ============================================================================

/// Instance request: component type plus named constructor arguments.
/// Argument expressions must be constant.
struct InstanceSpec {
    std::string name;
    std::string type;
    std::vector<std::pair<std::string, ExprPtr>> arguments;
};

/// Bidirectional message-box connection.  Every export label on either side
/// that matches an import label on the other side becomes one feed; a connect
/// producing zero feeds is an error.
struct ConnectionSpec {
    std::string a_instance;
    std::string a_box;
    std::string b_instance;
    std::string b_box;
};

/// Optional per-role contract.  `required_shares` must be declared by every
/// active member; `observed` names references that the group binds to the
/// subject variable of the same name.
struct RoleContract {
    std::string name;
    std::vector<std::string> required_shares;
    std::vector<std::string> observed;
};

struct SubjectSpec {
    std::string instance;
    std::string variable;  ///< must be continuous
};

struct ActiveSpec {
    std::string instance;
    std::string role;
};

/// Named group-level expression.  Exposures may combine literals, operators
/// and role-driven aggregates only; they are inlined wherever equations or
/// stop conditions of the group's subjects mention them.
struct ExposureSpec {
    std::string name;
    ExprPtr value;
};

struct MediatorGroupSpec {
    std::string name;
    std::vector<SubjectSpec> subjects;
    std::vector<ActiveSpec> actives;
    std::vector<ExposureSpec> exposures;
};

struct OdeVarSpec {
    std::string instance;
    std::string variable;
};

struct EquationSpec {
    OdeVarSpec var;
    ExprPtr rhs;  ///< evaluated in the owning instance's scope
};

struct StartHookSpec {
    std::string instance;
    std::string hook;
};

/// PDMP manager: owns a set of continuous variables, their derivatives,
/// stop conditions that interrupt integration, and hooks run at t = 0.
struct PdmpSpec {
    std::string name;
    std::vector<OdeVarSpec> odes;
    std::vector<EquationSpec> equations;
    std::vector<ExprPtr> stops;
    std::vector<StartHookSpec> starts;
};

struct SystemSpec {
    std::vector<InstanceSpec> instances;
    std::vector<ConnectionSpec> connections;
    std::vector<RoleContract> roles;
    std::vector<MediatorGroupSpec> groups;
    std::vector<std::vector<std::string>> chains;  ///< member names, most senior first
    std::vector<PdmpSpec> pdmps;
};

// ============================================================================
// Assembled model
// ============================================================================

/// One feed attached to a reference: where a read through that connection
/// lands.
struct ConnectionTarget {
    enum class Kind { Export, Share, Variable };
    Kind kind = Kind::Export;
    int instance = -1;
    int box = -1;    ///< Export: message box index in the remote definition
    int index = -1;  ///< Export: export slot; Share: share slot; Variable: variable slot
};

struct Instance {
    std::string name;
    int definition = -1;
    std::vector<Value> parameter_values;  ///< aligned with definition parameters
    /// Per reference (declaration order): attached feeds, in wiring order.
    std::vector<std::vector<ConnectionTarget>> connections;
};

struct MediatorGroup {
    std::string name;
    std::vector<std::pair<int, int>> subjects;  ///< (instance, variable index)
    std::vector<int> actives;                   ///< instance indices
    std::string role;
};

/// Ordered standby chain.  `flag_variables` lists every flag toggled by any
/// member's chain hooks; `flag_slots[f][m]` is that flag's variable index in
/// member m.
struct BackupChain {
    std::vector<int> members;  ///< most senior first
    std::vector<std::string> flag_variables;
    std::vector<std::vector<int>> flag_slots;
};

struct OdeVariable {
    int instance = -1;
    int variable = -1;
};

struct PdmpBinding {
    std::string name;
    std::vector<OdeVariable> odes;
    std::vector<ExprPtr> equations;   ///< aligned with odes; exposures inlined, bound
    std::vector<int> equation_scope;  ///< instance each equation evaluates in
    std::vector<ExprPtr> stops;
    std::vector<int> stop_scope;
    std::vector<std::pair<int, int>> start_hooks;  ///< (instance, hook index)
};

/// A fully bound system: immutable once assembled, safe to share between
/// replication workers.
struct SystemModel {
    std::vector<ComponentDefinition> definitions;
    std::vector<Instance> instances;
    std::vector<MediatorGroup> groups;
    std::vector<BackupChain> chains;
    std::vector<PdmpBinding> pdmps;
    /// Per instance: (chain index, position) or (-1, -1) when unchained.
    std::vector<std::pair<int, int>> chain_position;
    /// Number of connect statements that produced at least one feed.
    int connection_count = 0;

    [[nodiscard]] int find_instance(const std::string& name) const;
    [[nodiscard]] const ComponentDefinition& definition_of(int instance) const;
};

/// Build a system from validated component definitions and a wiring spec.
///
/// Resolves instances (constructor arguments against parameters, defaults
/// filled in), message-box connections (label matching, both directions),
/// mediator groups (subject variables must be continuous; active members are
/// checked against the role contract when one is declared, and their
/// references are bound to subject variables of the same name), backup chains
/// (members distinct, in at most one chain, every chain flag declared as a
/// boolean variable by every member), and PDMP managers (each continuous
/// variable owned by exactly one manager with exactly one equation; exposures
/// of the owning group inlined into equations and stops before binding).
///
/// Throws ValidationError with a kind describing the first problem found.
SystemModel assemble_system(std::vector<ComponentDefinition> definitions,
                            const SystemSpec& spec);

}  // namespace hybridsim::kernel

#pragma once

#include <vector>

#include "hybridsim/kernel/system_model.hpp"

namespace hybridsim::kernel {

// ============================================================================
// Runtime state
// ============================================================================

struct InstanceState {
    std::vector<Value> variables;  ///< aligned with the definition's variables
    std::vector<int> active;       ///< per automaton: index of the active state
};

struct SystemState {
    std::vector<InstanceState> instances;
    /// Per chain, per member: whether the member is currently healthy.
    std::vector<std::vector<bool>> chain_healthy;
};

/// Build the initial state: variables evaluated in declaration order (each
/// initializer sees parameters and earlier variables), automata placed in
/// their initial states, every chain member healthy.
[[nodiscard]] SystemState initial_state(const SystemModel& model);

/// Evaluate a bound expression in the scope of `instance`.
///
/// `connection_index` selects which feed a bare reference reads (the ambient
/// index used by import-driven aggregates); -1 means "unselected", in which
/// case a reference with exactly one feed reads it and anything else is an
/// EvaluationError.  Reads through exports and shares evaluate the remote
/// expression in the remote scope.  Evaluation depth is capped to surface
/// reference cycles as EvaluationError rather than stack exhaustion.
[[nodiscard]] Value evaluate(const SystemModel& model, const SystemState& state,
                             int instance, const Expr& expr,
                             int connection_index = -1);

/// Constant-fold an expression that binds without any component scope
/// (literals and operators only).  Used for constructor arguments and
/// parameter defaults.
[[nodiscard]] Value evaluate_constant(const Expr& expr);

/// Run one hook:
///  - Assign: execute the assignments in order (right-hand sides evaluated
///    in the instance's scope, results coerced to the target variable type);
///  - ChainFailure: mark the instance failed in its chain and set the flag
///    variable in every junior member; no-op when the instance is unchained
///    (an empty downstream set);
///  - ChainRepair: mark the instance healthy and clear the flag in every
///    junior member.
void run_hook(const SystemModel& model, SystemState& state, int instance,
              int hook_index);

/// Fire every hook named by a transition's notify list, in declaration order.
void fire_notification_hooks(const SystemModel& model, SystemState& state,
                             int instance, const TransitionDef& transition);

}  // namespace hybridsim::kernel

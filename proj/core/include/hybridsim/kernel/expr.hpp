#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hybridsim/kernel/value.hpp"

namespace hybridsim::kernel {

struct ComponentDefinition;

// ============================================================================
// Expression tree
// ============================================================================

enum class ExprKind {
    NumberLit,
    BoolLit,
    Name,            ///< parameter / variable / import reference / shared expr
    Unary,
    Binary,
    ActiveState,     ///< active(Automaton.State)
    Aggregate,       ///< sum/any/count over import connections or a role
    UpstreamFailed,  ///< all strictly-senior chain members currently failed
};

enum class UnaryOp { Negate, Not };

enum class BinaryOp { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

enum class AggregateOp { Sum, Any, Count };

/// What a bound Name leaf resolved to within its scope.
enum class NameSlot { Unbound, Parameter, Variable, Reference, Share };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

/// One node of an expression tree.
///
/// Trees are produced by the DSL parser or the programmatic builders in
/// namespace `expr`, then *bound* against a scope (see BindContext below).
/// Binding resolves every Name to a slot index, checks types, and is a
/// precondition for evaluation.  Definitions are immutable after binding.
struct Expr {
    ExprKind kind = ExprKind::NumberLit;

    Value literal;        ///< NumberLit / BoolLit payload
    std::string name;     ///< Name: identifier; ActiveState: automaton;
                          ///< Aggregate: role tag (empty = import-driven)
    std::string member;   ///< ActiveState: state name

    UnaryOp unary_op = UnaryOp::Negate;
    BinaryOp binary_op = BinaryOp::Add;
    AggregateOp aggregate_op = AggregateOp::Sum;

    /// Unary: 1 child.  Binary: 2.  Import-driven aggregate: 1 (the body).
    /// Role-driven aggregate after elaboration: one bound body per active
    /// member, aligned with `over_instances`.
    std::vector<ExprPtr> children;

    /// Role-driven aggregates only: instance index evaluated per child.
    std::vector<int> over_instances;

    // --- filled by bind_expression -----------------------------------------
    NameSlot slot = NameSlot::Unbound;
    int slot_index = -1;
    int automaton_index = -1;
    int state_index = -1;
    ValueType static_type = ValueType::Any;

    [[nodiscard]] ExprPtr clone() const;
};

// ============================================================================
// Binding
// ============================================================================

/// Scope description used to resolve and type-check an expression.
struct BindContext {
    /// Component whose parameters/variables/references/automata are in scope.
    const ComponentDefinition* component = nullptr;

    /// Only variables with index < visible_variables resolve (used for
    /// variable initializers, which may reference earlier declarations).
    /// Negative means all variables are visible.
    int visible_variables = -1;

    /// When true, Name leaves resolve exclusively against the component's
    /// shared expressions (`share` declarations).  This is how role-driven
    /// aggregate bodies see active components: through their published
    /// surface only.
    bool shares_only = false;

    /// Permit `over <role>` aggregates.  Their bodies are left unbound here;
    /// system assembly later clones and binds one body per active member.
    bool allow_roles = false;

    /// Instance argument lists: no names at all may appear.
    bool constants_only = false;
};

/// Resolve names, check types, and annotate `e` in place.
/// Returns the expression's static type.  Throws ValidationError.
ValueType bind_expression(Expr& e, const BindContext& ctx);

/// True if the (bound) tree contains at least one import-reference leaf.
[[nodiscard]] bool references_import(const Expr& e);

/// Render an expression back to DSL-compatible text (used by the pretty
/// printer and for diagnostics).
[[nodiscard]] std::string to_text(const Expr& e);

// ============================================================================
// Programmatic builders
// ============================================================================

namespace expr {

ExprPtr number(double v);
ExprPtr boolean(bool v);
ExprPtr name(std::string id);
ExprPtr unary(UnaryOp op, ExprPtr operand);
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr active(std::string automaton, std::string state);
ExprPtr aggregate(AggregateOp op, ExprPtr body);
ExprPtr aggregate_over(AggregateOp op, ExprPtr body, std::string role);
ExprPtr upstream_failed();

inline ExprPtr add(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Add, std::move(a), std::move(b)); }
inline ExprPtr sub(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Sub, std::move(a), std::move(b)); }
inline ExprPtr mul(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Mul, std::move(a), std::move(b)); }
inline ExprPtr div(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Div, std::move(a), std::move(b)); }
inline ExprPtr lt(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Lt, std::move(a), std::move(b)); }
inline ExprPtr le(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Le, std::move(a), std::move(b)); }
inline ExprPtr gt(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Gt, std::move(a), std::move(b)); }
inline ExprPtr ge(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Ge, std::move(a), std::move(b)); }
inline ExprPtr eq(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Eq, std::move(a), std::move(b)); }
inline ExprPtr ne(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Ne, std::move(a), std::move(b)); }
inline ExprPtr land(ExprPtr a, ExprPtr b) { return binary(BinaryOp::And, std::move(a), std::move(b)); }
inline ExprPtr lor(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Or, std::move(a), std::move(b)); }
inline ExprPtr lnot(ExprPtr a) { return unary(UnaryOp::Not, std::move(a)); }
inline ExprPtr neg(ExprPtr a) { return unary(UnaryOp::Negate, std::move(a)); }

}  // namespace expr

}  // namespace hybridsim::kernel

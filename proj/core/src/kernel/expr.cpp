#include "hybridsim/kernel/expr.hpp"

#include <charconv>
#include <cstdio>

#include "hybridsim/kernel/component.hpp"

namespace hybridsim {

const char* to_string(ValidationKind kind) {
    switch (kind) {
        case ValidationKind::DuplicateName: return "duplicate name";
        case ValidationKind::UnresolvedIdentifier: return "unresolved identifier";
        case ValidationKind::UnresolvedState: return "unresolved state";
        case ValidationKind::NonBooleanCondition: return "non-boolean condition";
        case ValidationKind::TypeMismatch: return "type mismatch";
        case ValidationKind::BadLaw: return "bad law";
        case ValidationKind::DanglingConnection: return "dangling connection";
        case ValidationKind::LabelMismatch: return "label mismatch";
        case ValidationKind::CyclicBackupChain: return "cyclic backup chain";
        case ValidationKind::ArityMismatch: return "arity mismatch";
        case ValidationKind::UnknownComponentType: return "unknown component type";
        case ValidationKind::BadOdeBinding: return "bad ode binding";
        case ValidationKind::BadMediatorGroup: return "bad mediator group";
        case ValidationKind::BadChain: return "bad chain";
        case ValidationKind::BadHook: return "bad hook";
        case ValidationKind::BadAggregate: return "bad aggregate";
    }
    return "validation error";
}

}  // namespace hybridsim

namespace hybridsim::kernel {

const char* to_string(ValueType type) {
    switch (type) {
        case ValueType::Number: return "number";
        case ValueType::Boolean: return "bool";
        case ValueType::Any: return "any";
    }
    return "?";
}

// ============================================================================
// Cloning
// ============================================================================

ExprPtr Expr::clone() const {
    auto copy = std::make_unique<Expr>();
    copy->kind = kind;
    copy->literal = literal;
    copy->name = name;
    copy->member = member;
    copy->unary_op = unary_op;
    copy->binary_op = binary_op;
    copy->aggregate_op = aggregate_op;
    copy->over_instances = over_instances;
    copy->slot = slot;
    copy->slot_index = slot_index;
    copy->automaton_index = automaton_index;
    copy->state_index = state_index;
    copy->static_type = static_type;
    copy->children.reserve(children.size());
    for (const auto& child : children) copy->children.push_back(child->clone());
    return copy;
}

// ============================================================================
// Binding
// ============================================================================

namespace {

[[noreturn]] void fail(ValidationKind kind, const std::string& what) {
    throw ValidationError(kind, what);
}

std::string scope_name(const BindContext& ctx) {
    return ctx.component ? "component '" + ctx.component->name + "'"
                         : "mediator scope";
}

bool boolean_compatible(ValueType t) { return t != ValueType::Number; }

class Binder {
public:
    explicit Binder(const BindContext& ctx) : ctx_(ctx) {}

    ValueType bind(Expr& e, bool inside_aggregate) {
        switch (e.kind) {
            case ExprKind::NumberLit:
                return e.static_type = ValueType::Number;
            case ExprKind::BoolLit:
                return e.static_type = ValueType::Boolean;
            case ExprKind::Name:
                return e.static_type = bind_name(e);
            case ExprKind::Unary:
                return e.static_type = bind_unary(e, inside_aggregate);
            case ExprKind::Binary:
                return e.static_type = bind_binary(e, inside_aggregate);
            case ExprKind::ActiveState:
                return e.static_type = bind_active(e);
            case ExprKind::Aggregate:
                return e.static_type = bind_aggregate(e, inside_aggregate);
            case ExprKind::UpstreamFailed:
                if (ctx_.constants_only)
                    fail(ValidationKind::UnresolvedIdentifier,
                         "upstream_failed is not a constant");
                if (ctx_.shares_only)
                    fail(ValidationKind::BadAggregate,
                         "role aggregate bodies may only read shared expressions");
                if (!ctx_.component)
                    fail(ValidationKind::UnresolvedIdentifier,
                         "upstream_failed needs a component scope");
                return e.static_type = ValueType::Boolean;
        }
        fail(ValidationKind::UnresolvedIdentifier, "unknown expression node");
    }

private:
    ValueType bind_name(Expr& e) {
        if (ctx_.constants_only)
            fail(ValidationKind::UnresolvedIdentifier,
                 "'" + e.name + "' is not allowed in a constant expression");
        if (!ctx_.component)
            fail(ValidationKind::UnresolvedIdentifier,
                 "'" + e.name + "' is not visible in " + scope_name(ctx_));

        const ComponentDefinition& def = *ctx_.component;

        if (ctx_.shares_only) {
            int idx = def.find_share(e.name);
            if (idx < 0)
                fail(ValidationKind::UnresolvedIdentifier,
                     "'" + e.name + "' is not a shared expression of "
                     + scope_name(ctx_));
            e.slot = NameSlot::Share;
            e.slot_index = idx;
            return def.shares[idx].value ? def.shares[idx].value->static_type
                                         : ValueType::Any;
        }

        if (int idx = def.find_parameter(e.name); idx >= 0) {
            e.slot = NameSlot::Parameter;
            e.slot_index = idx;
            return def.parameters[idx].type;
        }
        if (int idx = def.find_variable(e.name); idx >= 0) {
            if (ctx_.visible_variables >= 0 && idx >= ctx_.visible_variables)
                fail(ValidationKind::UnresolvedIdentifier,
                     "variable '" + e.name + "' is declared later in "
                     + scope_name(ctx_));
            e.slot = NameSlot::Variable;
            e.slot_index = idx;
            return def.variables[idx].type;
        }
        if (int idx = def.find_reference(e.name); idx >= 0) {
            e.slot = NameSlot::Reference;
            e.slot_index = idx;
            return ValueType::Any;
        }
        if (int idx = def.find_share(e.name); idx >= 0) {
            e.slot = NameSlot::Share;
            e.slot_index = idx;
            return def.shares[idx].value ? def.shares[idx].value->static_type
                                         : ValueType::Any;
        }
        fail(ValidationKind::UnresolvedIdentifier,
             "'" + e.name + "' is not declared in " + scope_name(ctx_));
    }

    ValueType bind_unary(Expr& e, bool inside_aggregate) {
        ValueType child = bind(*e.children.at(0), inside_aggregate);
        if (e.unary_op == UnaryOp::Not) {
            if (!boolean_compatible(child))
                fail(ValidationKind::TypeMismatch, "'not' applied to a number");
            return ValueType::Boolean;
        }
        return ValueType::Number;  // negation coerces booleans to 0/1
    }

    ValueType bind_binary(Expr& e, bool inside_aggregate) {
        ValueType lhs = bind(*e.children.at(0), inside_aggregate);
        ValueType rhs = bind(*e.children.at(1), inside_aggregate);
        switch (e.binary_op) {
            case BinaryOp::Add:
            case BinaryOp::Sub:
            case BinaryOp::Mul:
            case BinaryOp::Div:
                return ValueType::Number;
            case BinaryOp::Lt:
            case BinaryOp::Le:
            case BinaryOp::Gt:
            case BinaryOp::Ge:
            case BinaryOp::Eq:
            case BinaryOp::Ne:
                return ValueType::Boolean;
            case BinaryOp::And:
            case BinaryOp::Or:
                if (!boolean_compatible(lhs) || !boolean_compatible(rhs))
                    fail(ValidationKind::TypeMismatch,
                         "'" + std::string(e.binary_op == BinaryOp::And ? "and" : "or")
                         + "' applied to a number");
                return ValueType::Boolean;
        }
        return ValueType::Any;
    }

    ValueType bind_active(Expr& e) {
        if (ctx_.constants_only)
            fail(ValidationKind::UnresolvedIdentifier,
                 "active(...) is not a constant");
        if (ctx_.shares_only)
            fail(ValidationKind::BadAggregate,
                 "role aggregate bodies may only read shared expressions");
        if (!ctx_.component)
            fail(ValidationKind::UnresolvedIdentifier,
                 "active(...) needs a component scope");
        const ComponentDefinition& def = *ctx_.component;
        int automaton = def.find_automaton(e.name);
        if (automaton < 0)
            fail(ValidationKind::UnresolvedIdentifier,
                 "automaton '" + e.name + "' is not declared in " + scope_name(ctx_));
        int state = def.automata[automaton].find_state(e.member);
        if (state < 0)
            fail(ValidationKind::UnresolvedState,
                 "automaton '" + e.name + "' has no state '" + e.member + "'");
        e.automaton_index = automaton;
        e.state_index = state;
        return ValueType::Boolean;
    }

    ValueType bind_aggregate(Expr& e, bool inside_aggregate) {
        if (inside_aggregate || ctx_.shares_only)
            fail(ValidationKind::BadAggregate, "aggregates cannot be nested");
        if (ctx_.constants_only)
            fail(ValidationKind::UnresolvedIdentifier,
                 "aggregates are not constants");

        const bool role_driven = !e.name.empty();
        if (role_driven) {
            if (!ctx_.allow_roles)
                fail(ValidationKind::BadAggregate,
                     "'over " + e.name + "' is only available in mediator scope");
            // The body stays unbound here; system assembly clones and binds it
            // once per active member, against that member's shared surface.
        } else {
            if (!ctx_.component)
                fail(ValidationKind::UnresolvedIdentifier,
                     "aggregates need a component scope");
            ValueType body = bind(*e.children.at(0), /*inside_aggregate=*/true);
            if (!references_import(*e.children[0]))
                fail(ValidationKind::BadAggregate,
                     "aggregate body reads no import references");
            if (e.aggregate_op != AggregateOp::Sum && !boolean_compatible(body))
                fail(ValidationKind::TypeMismatch,
                     "any/count aggregate bodies must be boolean");
        }
        return e.aggregate_op == AggregateOp::Any ? ValueType::Boolean
                                                  : ValueType::Number;
    }

    const BindContext& ctx_;
};

}  // namespace

ValueType bind_expression(Expr& e, const BindContext& ctx) {
    return Binder(ctx).bind(e, /*inside_aggregate=*/false);
}

bool references_import(const Expr& e) {
    if (e.kind == ExprKind::Name && e.slot == NameSlot::Reference) return true;
    for (const auto& child : e.children)
        if (child && references_import(*child)) return true;
    return false;
}

// ============================================================================
// Rendering
// ============================================================================

namespace {

// Higher binds tighter.  Comparisons do not chain, so a comparison child of a
// comparison is always parenthesised.
int precedence(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Unary:
            return e.unary_op == UnaryOp::Not ? 3 : 7;
        case ExprKind::Binary:
            switch (e.binary_op) {
                case BinaryOp::Or: return 1;
                case BinaryOp::And: return 2;
                case BinaryOp::Lt:
                case BinaryOp::Le:
                case BinaryOp::Gt:
                case BinaryOp::Ge:
                case BinaryOp::Eq:
                case BinaryOp::Ne: return 4;
                case BinaryOp::Add:
                case BinaryOp::Sub: return 5;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 6;
            }
            return 0;
        default:
            return 8;  // atoms
    }
}

const char* operator_text(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::And: return "and";
        case BinaryOp::Or: return "or";
    }
    return "?";
}

std::string number_text(double v) {
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    if (ec != std::errc{}) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", v);
        return buffer;
    }
    return std::string(buffer, end);
}

void render(const Expr& e, std::string& out);

void render_child(const Expr& child, int parent_precedence, bool is_right,
                  std::string& out) {
    int child_precedence = precedence(child);
    bool parens = child_precedence < parent_precedence
        || (child_precedence == parent_precedence
            && (is_right || parent_precedence == 4));
    if (parens) out.push_back('(');
    render(child, out);
    if (parens) out.push_back(')');
}

void render(const Expr& e, std::string& out) {
    switch (e.kind) {
        case ExprKind::NumberLit:
            out += number_text(e.literal.as_number());
            return;
        case ExprKind::BoolLit:
            out += e.literal.as_boolean() ? "true" : "false";
            return;
        case ExprKind::Name:
            out += e.name;
            return;
        case ExprKind::Unary:
            if (e.unary_op == UnaryOp::Not) {
                out += "not ";
                render_child(*e.children[0], 3, false, out);
            } else {
                out.push_back('-');
                render_child(*e.children[0], 7, false, out);
            }
            return;
        case ExprKind::Binary:
            render_child(*e.children[0], precedence(e), false, out);
            out.push_back(' ');
            out += operator_text(e.binary_op);
            out.push_back(' ');
            render_child(*e.children[1], precedence(e), true, out);
            return;
        case ExprKind::ActiveState:
            out += "active(";
            out += e.name;
            out.push_back('.');
            out += e.member;
            out.push_back(')');
            return;
        case ExprKind::Aggregate: {
            switch (e.aggregate_op) {
                case AggregateOp::Sum: out += "sum("; break;
                case AggregateOp::Any: out += "any("; break;
                case AggregateOp::Count: out += "count("; break;
            }
            render(*e.children[0], out);
            if (!e.name.empty()) {
                out += " over ";
                out += e.name;
            }
            out.push_back(')');
            return;
        }
        case ExprKind::UpstreamFailed:
            out += "upstream_failed";
            return;
    }
}

}  // namespace

std::string to_text(const Expr& e) {
    std::string out;
    render(e, out);
    return out;
}

// ============================================================================
// Builders
// ============================================================================

namespace expr {

ExprPtr number(double v) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::NumberLit;
    e->literal = Value::number(v);
    return e;
}

ExprPtr boolean(bool v) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::BoolLit;
    e->literal = Value::boolean(v);
    return e;
}

ExprPtr name(std::string id) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Name;
    e->name = std::move(id);
    return e;
}

ExprPtr unary(UnaryOp op, ExprPtr operand) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Unary;
    e->unary_op = op;
    e->children.push_back(std::move(operand));
    return e;
}

ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Binary;
    e->binary_op = op;
    e->children.push_back(std::move(lhs));
    e->children.push_back(std::move(rhs));
    return e;
}

ExprPtr active(std::string automaton, std::string state) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::ActiveState;
    e->name = std::move(automaton);
    e->member = std::move(state);
    return e;
}

ExprPtr aggregate(AggregateOp op, ExprPtr body) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Aggregate;
    e->aggregate_op = op;
    e->children.push_back(std::move(body));
    return e;
}

ExprPtr aggregate_over(AggregateOp op, ExprPtr body, std::string role) {
    auto e = aggregate(op, std::move(body));
    e->name = std::move(role);
    return e;
}

ExprPtr upstream_failed() {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::UpstreamFailed;
    return e;
}

}  // namespace expr

}  // namespace hybridsim::kernel

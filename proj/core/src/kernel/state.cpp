#include "hybridsim/kernel/state.hpp"

#include <cmath>
#include <string>

namespace hybridsim::kernel {

namespace {

/// Deep expression trees only arise from export/share indirection; a depth
/// past this limit means the wiring loops back on itself.
constexpr int kMaxEvaluationDepth = 64;

struct Env {
    const SystemModel* model = nullptr;
    const SystemState* state = nullptr;
};

Value coerce_store(const Value& value, ValueType declared) {
    switch (declared) {
        case ValueType::Number: return Value::number(value.as_number());
        case ValueType::Boolean: return Value::boolean(value.as_boolean());
        case ValueType::Any: return value;
    }
    return value;
}

void collect_reference_slots(const Expr& e, std::vector<int>& slots) {
    if (e.kind == ExprKind::Name && e.slot == NameSlot::Reference)
        slots.push_back(e.slot_index);
    for (const auto& child : e.children)
        if (child) collect_reference_slots(*child, slots);
}

Value eval(const Env& env, int instance, const Expr& e, int connection, int depth);

Value eval_name(const Env& env, int instance, const Expr& e, int connection,
                int depth) {
    if (!env.model)
        throw EvaluationError("'" + e.name + "' is not a constant");
    const Instance& self = env.model->instances[instance];
    const ComponentDefinition& def = env.model->definitions[self.definition];

    switch (e.slot) {
        case NameSlot::Parameter:
            return self.parameter_values[e.slot_index];
        case NameSlot::Variable:
            return env.state->instances[instance].variables[e.slot_index];
        case NameSlot::Share:
            return eval(env, instance, *def.shares[e.slot_index].value, -1, depth + 1);
        case NameSlot::Reference: {
            const auto& feeds = self.connections[e.slot_index];
            int pick = connection;
            if (pick < 0) {
                if (feeds.empty())
                    throw EvaluationError("reference '" + e.name + "' of instance '"
                                          + self.name + "' has no connections");
                if (feeds.size() > 1)
                    throw EvaluationError("reference '" + e.name + "' of instance '"
                                          + self.name
                                          + "' has several connections; read it "
                                            "through an aggregate");
                pick = 0;
            }
            if (pick >= static_cast<int>(feeds.size()))
                throw EvaluationError("connection index " + std::to_string(pick)
                                      + " is out of range for reference '" + e.name
                                      + "' of instance '" + self.name + "'");
            const ConnectionTarget& target = feeds[pick];
            switch (target.kind) {
                case ConnectionTarget::Kind::Export: {
                    const ComponentDefinition& remote =
                        env.model->definitions[env.model->instances[target.instance].definition];
                    const ExportDef& exported =
                        remote.message_boxes[target.box].exports[target.index];
                    return eval(env, target.instance, *exported.value, -1, depth + 1);
                }
                case ConnectionTarget::Kind::Share: {
                    const ComponentDefinition& remote =
                        env.model->definitions[env.model->instances[target.instance].definition];
                    return eval(env, target.instance,
                                *remote.shares[target.index].value, -1, depth + 1);
                }
                case ConnectionTarget::Kind::Variable:
                    return env.state->instances[target.instance].variables[target.index];
            }
            throw EvaluationError("broken connection target");
        }
        case NameSlot::Unbound:
            break;
    }
    throw EvaluationError("'" + e.name + "' was never bound to a scope");
}

Value eval_binary(const Env& env, int instance, const Expr& e, int connection,
                  int depth) {
    // and/or short-circuit, so their right side is only touched when needed.
    if (e.binary_op == BinaryOp::And || e.binary_op == BinaryOp::Or) {
        bool lhs = eval(env, instance, *e.children[0], connection, depth + 1).as_boolean();
        if (e.binary_op == BinaryOp::And && !lhs) return Value::boolean(false);
        if (e.binary_op == BinaryOp::Or && lhs) return Value::boolean(true);
        return Value::boolean(
            eval(env, instance, *e.children[1], connection, depth + 1).as_boolean());
    }

    Value lhs = eval(env, instance, *e.children[0], connection, depth + 1);
    Value rhs = eval(env, instance, *e.children[1], connection, depth + 1);

    if (e.binary_op == BinaryOp::Eq || e.binary_op == BinaryOp::Ne) {
        bool same = (lhs.is_boolean() && rhs.is_boolean())
            ? lhs.equals(rhs)
            : lhs.as_number() == rhs.as_number();
        return Value::boolean(e.binary_op == BinaryOp::Eq ? same : !same);
    }

    double a = lhs.as_number();
    double b = rhs.as_number();
    switch (e.binary_op) {
        case BinaryOp::Add: return Value::number(a + b);
        case BinaryOp::Sub: return Value::number(a - b);
        case BinaryOp::Mul: return Value::number(a * b);
        case BinaryOp::Div:
            if (b == 0.0) throw EvaluationError("division by zero");
            return Value::number(a / b);
        case BinaryOp::Lt: return Value::boolean(a < b);
        case BinaryOp::Le: return Value::boolean(a <= b);
        case BinaryOp::Gt: return Value::boolean(a > b);
        case BinaryOp::Ge: return Value::boolean(a >= b);
        default: break;
    }
    throw EvaluationError("unknown binary operator");
}

Value eval_aggregate(const Env& env, int instance, const Expr& e, int depth) {
    double sum = 0.0;
    long count = 0;

    auto fold = [&](const Value& item) -> bool {
        switch (e.aggregate_op) {
            case AggregateOp::Sum:
                sum += item.as_number();
                return false;
            case AggregateOp::Any:
                return item.as_boolean();  // true stops the scan
            case AggregateOp::Count:
                count += item.as_boolean() ? 1 : 0;
                return false;
        }
        return false;
    };

    if (!e.name.empty()) {
        // Role-driven: one bound body per active member.
        for (std::size_t k = 0; k < e.children.size(); ++k) {
            Value item = eval(env, e.over_instances[k], *e.children[k], -1, depth + 1);
            if (fold(item)) return Value::boolean(true);
        }
    } else {
        // Import-driven: the body runs once per connection of its references.
        if (!env.model)
            throw EvaluationError("aggregates are not constants");
        const Expr& body = *e.children[0];
        std::vector<int> slots;
        collect_reference_slots(body, slots);
        const Instance& self = env.model->instances[instance];
        std::size_t feeds = self.connections[slots.at(0)].size();
        for (int slot : slots)
            if (self.connections[slot].size() != feeds)
                throw EvaluationError(
                    "aggregate body of instance '" + self.name
                    + "' reads references with different connection counts");
        for (std::size_t k = 0; k < feeds; ++k) {
            Value item = eval(env, instance, body, static_cast<int>(k), depth + 1);
            if (fold(item)) return Value::boolean(true);
        }
    }

    switch (e.aggregate_op) {
        case AggregateOp::Sum: return Value::number(sum);
        case AggregateOp::Any: return Value::boolean(false);
        case AggregateOp::Count: return Value::number(static_cast<double>(count));
    }
    throw EvaluationError("unknown aggregate");
}

Value eval(const Env& env, int instance, const Expr& e, int connection, int depth) {
    if (depth > kMaxEvaluationDepth)
        throw EvaluationError("expression evaluation exceeded depth "
                              + std::to_string(kMaxEvaluationDepth)
                              + "; the wiring probably contains a cycle");

    switch (e.kind) {
        case ExprKind::NumberLit:
        case ExprKind::BoolLit:
            return e.literal;
        case ExprKind::Name:
            return eval_name(env, instance, e, connection, depth);
        case ExprKind::Unary: {
            Value child = eval(env, instance, *e.children[0], connection, depth + 1);
            return e.unary_op == UnaryOp::Not
                ? Value::boolean(!child.as_boolean())
                : Value::number(-child.as_number());
        }
        case ExprKind::Binary:
            return eval_binary(env, instance, e, connection, depth);
        case ExprKind::ActiveState: {
            if (!env.model)
                throw EvaluationError("active(...) is not a constant");
            int active = env.state->instances[instance].active[e.automaton_index];
            return Value::boolean(active == e.state_index);
        }
        case ExprKind::Aggregate:
            return eval_aggregate(env, instance, e, depth);
        case ExprKind::UpstreamFailed: {
            if (!env.model)
                throw EvaluationError("upstream_failed is not a constant");
            auto [chain, position] = env.model->chain_position[instance];
            if (chain < 0) return Value::boolean(true);  // no seniors at all
            const auto& healthy = env.state->chain_healthy[chain];
            for (int q = 0; q < position; ++q)
                if (healthy[q]) return Value::boolean(false);
            return Value::boolean(true);
        }
    }
    throw EvaluationError("unknown expression node");
}

}  // namespace

Value evaluate(const SystemModel& model, const SystemState& state, int instance,
               const Expr& expr, int connection_index) {
    Env env{&model, &state};
    return eval(env, instance, expr, connection_index, 0);
}

Value evaluate_constant(const Expr& expr) {
    return eval(Env{}, -1, expr, -1, 0);
}

SystemState initial_state(const SystemModel& model) {
    SystemState state;
    state.instances.resize(model.instances.size());

    // Automata and chain health first: initialisers may ask about them.
    for (std::size_t i = 0; i < model.instances.size(); ++i) {
        const ComponentDefinition& def = model.definition_of(static_cast<int>(i));
        state.instances[i].variables.resize(def.variables.size());
        state.instances[i].active.resize(def.automata.size());
        for (std::size_t a = 0; a < def.automata.size(); ++a)
            state.instances[i].active[a] = def.automata[a].initial_index;
    }
    state.chain_healthy.resize(model.chains.size());
    for (std::size_t c = 0; c < model.chains.size(); ++c)
        state.chain_healthy[c].assign(model.chains[c].members.size(), true);

    // Variables in declaration order, instances in declaration order; an
    // initialiser reading a not-yet-initialised remote value sees zero.
    for (std::size_t i = 0; i < model.instances.size(); ++i) {
        const ComponentDefinition& def = model.definition_of(static_cast<int>(i));
        for (std::size_t v = 0; v < def.variables.size(); ++v) {
            Value value = evaluate(model, state, static_cast<int>(i),
                                   *def.variables[v].initial);
            state.instances[i].variables[v] = coerce_store(value, def.variables[v].type);
        }
    }
    return state;
}

void run_hook(const SystemModel& model, SystemState& state, int instance,
              int hook_index) {
    const ComponentDefinition& def = model.definition_of(instance);
    if (hook_index < 0 || hook_index >= static_cast<int>(def.hooks.size()))
        throw ModelError("instance '" + model.instances[instance].name
                         + "' has no hook #" + std::to_string(hook_index));
    const HookDef& hook = def.hooks[hook_index];

    if (hook.kind == HookKind::Assign) {
        for (const auto& assignment : hook.assignments) {
            Value value = evaluate(model, state, instance, *assignment.value);
            state.instances[instance].variables[assignment.variable_index] =
                coerce_store(value, def.variables[assignment.variable_index].type);
        }
        return;
    }

    // Chain hooks: toggle own health, then the flag in every junior member.
    // An unchained instance has an empty downstream set: nothing to do.
    auto [chain_index, position] = model.chain_position[instance];
    if (chain_index < 0) return;
    const BackupChain& chain = model.chains[chain_index];

    bool failing = hook.kind == HookKind::ChainFailure;
    state.chain_healthy[chain_index][position] = !failing;

    int flag = -1;
    for (std::size_t f = 0; f < chain.flag_variables.size(); ++f)
        if (chain.flag_variables[f] == hook.flag_variable) flag = static_cast<int>(f);
    if (flag < 0)
        throw ModelError("chain flag '" + hook.flag_variable
                         + "' was not collected for this chain");

    for (std::size_t q = position + 1; q < chain.members.size(); ++q) {
        int member = chain.members[q];
        state.instances[member].variables[chain.flag_slots[flag][q]] =
            Value::boolean(failing);
    }
}

void fire_notification_hooks(const SystemModel& model, SystemState& state,
                             int instance, const TransitionDef& transition) {
    for (int hook : transition.notify_indices)
        run_hook(model, state, instance, hook);
}

}  // namespace hybridsim::kernel

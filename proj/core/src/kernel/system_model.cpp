#include "hybridsim/kernel/system_model.hpp"

#include <unordered_map>
#include <unordered_set>

#include "hybridsim/kernel/state.hpp"

namespace hybridsim::kernel {

namespace {

[[noreturn]] void fail(ValidationKind kind, const std::string& what) {
    throw ValidationError(kind, what);
}

}  // namespace

int SystemModel::find_instance(const std::string& name) const {
    for (std::size_t i = 0; i < instances.size(); ++i)
        if (instances[i].name == name) return static_cast<int>(i);
    return -1;
}

const ComponentDefinition& SystemModel::definition_of(int instance) const {
    return definitions[instances[instance].definition];
}

namespace {

Value coerce_argument(const Value& value, ValueType declared, const std::string& what) {
    if (declared == ValueType::Boolean) {
        if (!value.is_boolean())
            fail(ValidationKind::TypeMismatch, what + " must be a bool");
        return value;
    }
    if (declared == ValueType::Number) return Value::number(value.as_number());
    return value;
}

void build_instances(SystemModel& model, const SystemSpec& spec,
                     const std::unordered_map<std::string, int>& type_index) {
    std::unordered_set<std::string> names;
    BindContext constant_scope;
    constant_scope.constants_only = true;

    for (const auto& request : spec.instances) {
        if (!names.insert(request.name).second)
            fail(ValidationKind::DuplicateName,
                 "instance '" + request.name + "' is declared twice");

        auto type = type_index.find(request.type);
        if (type == type_index.end())
            fail(ValidationKind::UnknownComponentType,
                 "instance '" + request.name + "' uses unknown component type '"
                 + request.type + "'");

        const ComponentDefinition& def = model.definitions[type->second];
        Instance instance;
        instance.name = request.name;
        instance.definition = type->second;
        instance.parameter_values.resize(def.parameters.size());
        instance.connections.resize(def.references.size());

        std::vector<bool> provided(def.parameters.size(), false);
        for (const auto& [argument, value] : request.arguments) {
            int idx = def.find_parameter(argument);
            if (idx < 0)
                fail(ValidationKind::ArityMismatch,
                     "instance '" + request.name + "' passes unknown argument '"
                     + argument + "' to component '" + def.name + "'");
            if (provided[idx])
                fail(ValidationKind::ArityMismatch,
                     "instance '" + request.name + "' passes argument '" + argument
                     + "' twice");
            if (!value)
                fail(ValidationKind::ArityMismatch,
                     "instance '" + request.name + "' passes no expression for '"
                     + argument + "'");
            bind_expression(*value, constant_scope);
            instance.parameter_values[idx] = coerce_argument(
                evaluate_constant(*value), def.parameters[idx].type,
                "argument '" + argument + "' of instance '" + request.name + "'");
            provided[idx] = true;
        }

        for (std::size_t i = 0; i < def.parameters.size(); ++i) {
            if (provided[i]) continue;
            const ParameterDef& parameter = def.parameters[i];
            if (!parameter.default_value)
                fail(ValidationKind::ArityMismatch,
                     "instance '" + request.name + "' is missing argument '"
                     + parameter.name + "' of component '" + def.name + "'");
            instance.parameter_values[i] = coerce_argument(
                evaluate_constant(*parameter.default_value), parameter.type,
                "default of parameter '" + parameter.name + "'");
        }

        model.instances.push_back(std::move(instance));
    }
}

void wire_connections(SystemModel& model, const SystemSpec& spec) {
    auto resolve_box = [&](const std::string& instance, const std::string& box)
        -> std::pair<int, int> {
        int i = model.find_instance(instance);
        if (i < 0)
            fail(ValidationKind::DanglingConnection,
                 "connect names unknown instance '" + instance + "'");
        int b = model.definition_of(i).find_message_box(box);
        if (b < 0)
            fail(ValidationKind::DanglingConnection,
                 "instance '" + instance + "' has no message box '" + box + "'");
        return {i, b};
    };

    for (const auto& connection : spec.connections) {
        auto [ai, ab] = resolve_box(connection.a_instance, connection.a_box);
        auto [bi, bb] = resolve_box(connection.b_instance, connection.b_box);

        int feeds = 0;
        auto attach = [&](int from, int from_box, int to, int to_box) {
            const MessageBoxDef& source = model.definition_of(from).message_boxes[from_box];
            const MessageBoxDef& sink = model.definition_of(to).message_boxes[to_box];
            for (std::size_t e = 0; e < source.exports.size(); ++e) {
                for (const auto& imported : sink.imports) {
                    if (imported.label != source.exports[e].label) continue;
                    ConnectionTarget target;
                    target.kind = ConnectionTarget::Kind::Export;
                    target.instance = from;
                    target.box = from_box;
                    target.index = static_cast<int>(e);
                    model.instances[to].connections[imported.reference_index]
                        .push_back(target);
                    ++feeds;
                }
            }
        };
        attach(ai, ab, bi, bb);
        attach(bi, bb, ai, ab);

        if (feeds == 0)
            fail(ValidationKind::LabelMismatch,
                 "connecting " + connection.a_instance + "." + connection.a_box
                 + " to " + connection.b_instance + "." + connection.b_box
                 + " matches no export/import labels");
        ++model.connection_count;
    }
}

void build_groups(SystemModel& model, const SystemSpec& spec) {
    std::unordered_map<std::string, const RoleContract*> contracts;
    for (const auto& contract : spec.roles) {
        if (!contracts.emplace(contract.name, &contract).second)
            fail(ValidationKind::DuplicateName,
                 "role '" + contract.name + "' is declared twice");
    }

    std::unordered_set<std::string> group_names;
    std::unordered_set<long long> claimed_subjects;

    for (const auto& request : spec.groups) {
        if (!group_names.insert(request.name).second)
            fail(ValidationKind::DuplicateName,
                 "mediator group '" + request.name + "' is declared twice");
        if (request.actives.empty())
            fail(ValidationKind::BadMediatorGroup,
                 "mediator group '" + request.name + "' has no active members");

        MediatorGroup group;
        group.name = request.name;

        for (const auto& subject : request.subjects) {
            int i = model.find_instance(subject.instance);
            if (i < 0)
                fail(ValidationKind::BadMediatorGroup,
                     "group '" + request.name + "' observes unknown instance '"
                     + subject.instance + "'");
            int v = model.definition_of(i).find_variable(subject.variable);
            if (v < 0 || !model.definition_of(i).variables[v].continuous)
                fail(ValidationKind::BadMediatorGroup,
                     "group '" + request.name + "' subject '" + subject.instance
                     + "." + subject.variable + "' is not a continuous variable");
            long long key = static_cast<long long>(i) << 32 | static_cast<unsigned>(v);
            if (!claimed_subjects.insert(key).second)
                fail(ValidationKind::BadMediatorGroup,
                     "subject '" + subject.instance + "." + subject.variable
                     + "' belongs to more than one mediator group");
            group.subjects.emplace_back(i, v);
        }

        for (const auto& active : request.actives) {
            if (group.role.empty()) group.role = active.role;
            if (active.role != group.role)
                fail(ValidationKind::BadMediatorGroup,
                     "group '" + request.name + "' mixes roles '" + group.role
                     + "' and '" + active.role + "'");
            int i = model.find_instance(active.instance);
            if (i < 0)
                fail(ValidationKind::BadMediatorGroup,
                     "group '" + request.name + "' activates unknown instance '"
                     + active.instance + "'");
            group.actives.push_back(i);
        }

        const RoleContract* contract = nullptr;
        if (auto it = contracts.find(group.role); it != contracts.end())
            contract = it->second;

        // Contract checks: every active member publishes the required shares
        // and declares the observed references.
        if (contract) {
            for (int member : group.actives) {
                const ComponentDefinition& def = model.definition_of(member);
                for (const auto& share : contract->required_shares)
                    if (def.find_share(share) < 0)
                        fail(ValidationKind::BadMediatorGroup,
                             "instance '" + model.instances[member].name
                             + "' plays role '" + group.role
                             + "' but shares no '" + share + "'");
                for (const auto& observed : contract->observed)
                    if (def.find_reference(observed) < 0)
                        fail(ValidationKind::BadMediatorGroup,
                             "instance '" + model.instances[member].name
                             + "' plays role '" + group.role
                             + "' but declares no reference '" + observed + "'");
            }
        }

        // Observation wiring: each member's reference named like a subject
        // variable reads that variable directly.
        for (auto [subject_instance, subject_variable] : group.subjects) {
            const std::string& variable_name =
                model.definition_of(subject_instance).variables[subject_variable].name;
            for (int member : group.actives) {
                const ComponentDefinition& def = model.definition_of(member);
                int ref = def.find_reference(variable_name);
                if (ref < 0) {
                    if (contract)
                        for (const auto& observed : contract->observed)
                            if (observed == variable_name)
                                fail(ValidationKind::BadMediatorGroup,
                                     "instance '" + model.instances[member].name
                                     + "' cannot observe '" + variable_name + "'");
                    continue;
                }
                ConnectionTarget target;
                target.kind = ConnectionTarget::Kind::Variable;
                target.instance = subject_instance;
                target.index = subject_variable;
                model.instances[member].connections[ref].push_back(target);
            }
        }

        model.groups.push_back(std::move(group));
    }
}

void build_chains(SystemModel& model, const SystemSpec& spec) {
    model.chain_position.assign(model.instances.size(), {-1, -1});

    for (const auto& members : spec.chains) {
        if (members.empty())
            fail(ValidationKind::BadChain, "a backup chain has no members");

        BackupChain chain;
        std::unordered_set<int> seen;
        for (const auto& name : members) {
            int i = model.find_instance(name);
            if (i < 0)
                fail(ValidationKind::BadChain,
                     "backup chain names unknown instance '" + name + "'");
            if (!seen.insert(i).second)
                fail(ValidationKind::CyclicBackupChain,
                     "instance '" + name + "' appears twice in a backup chain");
            if (model.chain_position[i].first >= 0)
                fail(ValidationKind::BadChain,
                     "instance '" + name + "' belongs to two backup chains");
            chain.members.push_back(i);
        }

        // Every flag toggled by any member's chain hooks must be a boolean
        // variable of every member, so downstream updates always land.
        std::unordered_set<std::string> flags;
        for (int member : chain.members)
            for (const auto& hook : model.definition_of(member).hooks)
                if (hook.kind != HookKind::Assign) flags.insert(hook.flag_variable);

        for (const auto& flag : flags) {
            std::vector<int> slots;
            for (int member : chain.members) {
                const ComponentDefinition& def = model.definition_of(member);
                int v = def.find_variable(flag);
                if (v < 0 || def.variables[v].type != ValueType::Boolean)
                    fail(ValidationKind::BadHook,
                         "chain member '" + model.instances[member].name
                         + "' declares no bool variable '" + flag + "'");
                slots.push_back(v);
            }
            chain.flag_variables.push_back(flag);
            chain.flag_slots.push_back(std::move(slots));
        }

        int chain_index = static_cast<int>(model.chains.size());
        for (std::size_t p = 0; p < chain.members.size(); ++p)
            model.chain_position[chain.members[p]] = {chain_index, static_cast<int>(p)};
        model.chains.push_back(std::move(chain));
    }
}

/// Replace group exposure names with clones of their expressions.  Exposure
/// names shadow the owner's locals inside equations and stop conditions.
void inline_exposures(ExprPtr& node, const std::vector<ExposureSpec>& exposures) {
    if (!node) return;
    if (node->kind == ExprKind::Name) {
        for (const auto& exposure : exposures) {
            if (exposure.name != node->name) continue;
            node = exposure.value->clone();
            return;
        }
    }
    for (auto& child : node->children) inline_exposures(child, exposures);
}

/// Bind every role-driven aggregate in `node` against the group's active
/// members: the written body is cloned once per member and bound against
/// that member's shared surface.
void expand_role_aggregates(Expr& node, const SystemModel& model,
                            const MediatorGroup* group) {
    if (node.kind == ExprKind::Aggregate && !node.name.empty()) {
        if (!group || node.name != group->role)
            fail(ValidationKind::BadMediatorGroup,
                 "no mediator group provides role '" + node.name + "' here");
        ExprPtr body = std::move(node.children.at(0));
        node.children.clear();
        node.over_instances.clear();
        for (int member : group->actives) {
            ExprPtr bound = body->clone();
            BindContext scope;
            scope.component = &model.definition_of(member);
            scope.shares_only = true;
            ValueType type = bind_expression(*bound, scope);
            if (node.aggregate_op != AggregateOp::Sum && type == ValueType::Number)
                fail(ValidationKind::TypeMismatch,
                     "any/count aggregate bodies must be boolean");
            node.children.push_back(std::move(bound));
            node.over_instances.push_back(member);
        }
        return;
    }
    for (auto& child : node.children)
        if (child) expand_role_aggregates(*child, model, group);
}

void build_pdmps(SystemModel& model, const SystemSpec& spec) {
    // Which group (if any) manages a continuous variable as its subject.
    std::unordered_map<long long, const MediatorGroup*> subject_group;
    for (const auto& group : model.groups)
        for (auto [i, v] : group.subjects)
            subject_group[static_cast<long long>(i) << 32 | static_cast<unsigned>(v)]
                = &group;

    // The exposure lists live in the spec; index them by group name.
    std::unordered_map<std::string, const std::vector<ExposureSpec>*> exposures;
    for (const auto& request : spec.groups)
        exposures[request.name] = &request.exposures;

    std::unordered_set<long long> driven;
    std::unordered_set<std::string> names;

    for (const auto& request : spec.pdmps) {
        if (!names.insert(request.name).second)
            fail(ValidationKind::DuplicateName,
                 "pdmp manager '" + request.name + "' is declared twice");
        if (request.odes.empty())
            fail(ValidationKind::BadOdeBinding,
                 "pdmp manager '" + request.name + "' drives no variables");

        PdmpBinding binding;
        binding.name = request.name;

        for (const auto& ode : request.odes) {
            int i = model.find_instance(ode.instance);
            if (i < 0)
                fail(ValidationKind::BadOdeBinding,
                     "pdmp manager '" + request.name + "' names unknown instance '"
                     + ode.instance + "'");
            int v = model.definition_of(i).find_variable(ode.variable);
            if (v < 0 || !model.definition_of(i).variables[v].continuous)
                fail(ValidationKind::BadOdeBinding,
                     "'" + ode.instance + "." + ode.variable
                     + "' is not a continuous variable");
            long long key = static_cast<long long>(i) << 32 | static_cast<unsigned>(v);
            if (!driven.insert(key).second)
                fail(ValidationKind::BadOdeBinding,
                     "'" + ode.instance + "." + ode.variable
                     + "' is driven by more than one pdmp manager");
            binding.odes.push_back({i, v});
        }

        auto group_of = [&](const OdeVariable& ode) -> const MediatorGroup* {
            auto it = subject_group.find(static_cast<long long>(ode.instance) << 32
                                         | static_cast<unsigned>(ode.variable));
            return it == subject_group.end() ? nullptr : it->second;
        };
        auto exposures_of = [&](const MediatorGroup* group)
            -> const std::vector<ExposureSpec>* {
            if (!group) return nullptr;
            auto it = exposures.find(group->name);
            return it == exposures.end() ? nullptr : it->second;
        };

        binding.equations.resize(binding.odes.size());
        binding.equation_scope.resize(binding.odes.size(), -1);

        for (const auto& equation : request.equations) {
            int i = model.find_instance(equation.var.instance);
            int ode = -1;
            for (std::size_t k = 0; k < binding.odes.size(); ++k) {
                if (binding.odes[k].instance != i) continue;
                const auto& def = model.definition_of(i);
                if (def.variables[binding.odes[k].variable].name == equation.var.variable)
                    ode = static_cast<int>(k);
            }
            if (ode < 0)
                fail(ValidationKind::BadOdeBinding,
                     "equation for '" + equation.var.instance + "."
                     + equation.var.variable + "' has no matching ode declaration in '"
                     + request.name + "'");
            if (binding.equations[ode])
                fail(ValidationKind::BadOdeBinding,
                     "'" + equation.var.instance + "." + equation.var.variable
                     + "' has two equations");
            if (!equation.rhs)
                fail(ValidationKind::BadOdeBinding,
                     "equation for '" + equation.var.instance + "."
                     + equation.var.variable + "' has no right-hand side");

            ExprPtr rhs = equation.rhs->clone();
            const MediatorGroup* group = group_of(binding.odes[ode]);
            if (const auto* x = exposures_of(group)) inline_exposures(rhs, *x);

            BindContext scope;
            scope.component = &model.definition_of(binding.odes[ode].instance);
            scope.allow_roles = true;
            bind_expression(*rhs, scope);
            expand_role_aggregates(*rhs, model, group);

            binding.equations[ode] = std::move(rhs);
            binding.equation_scope[ode] = binding.odes[ode].instance;
        }

        for (std::size_t k = 0; k < binding.odes.size(); ++k)
            if (!binding.equations[k]) {
                const auto& def = model.definition_of(binding.odes[k].instance);
                fail(ValidationKind::BadOdeBinding,
                     "'" + model.instances[binding.odes[k].instance].name + "."
                     + def.variables[binding.odes[k].variable].name
                     + "' is declared in '" + request.name + "' but has no equation");
            }

        // Stop conditions evaluate in the scope of the first driven variable,
        // with that variable's group exposures in reach.
        const MediatorGroup* stop_group = group_of(binding.odes[0]);
        const auto* stop_exposures = exposures_of(stop_group);
        for (const auto& stop : request.stops) {
            if (!stop)
                fail(ValidationKind::NonBooleanCondition,
                     "pdmp manager '" + request.name + "' has an empty stop condition");
            ExprPtr condition = stop->clone();
            if (stop_exposures) inline_exposures(condition, *stop_exposures);
            BindContext scope;
            scope.component = &model.definition_of(binding.odes[0].instance);
            scope.allow_roles = true;
            ValueType type = bind_expression(*condition, scope);
            if (type == ValueType::Number)
                fail(ValidationKind::NonBooleanCondition,
                     "a stop condition of pdmp manager '" + request.name
                     + "' is a number");
            expand_role_aggregates(*condition, model, stop_group);
            binding.stops.push_back(std::move(condition));
            binding.stop_scope.push_back(binding.odes[0].instance);
        }

        for (const auto& start : request.starts) {
            int i = model.find_instance(start.instance);
            if (i < 0)
                fail(ValidationKind::BadHook,
                     "pdmp manager '" + request.name + "' starts unknown instance '"
                     + start.instance + "'");
            int h = model.definition_of(i).find_hook(start.hook);
            if (h < 0)
                fail(ValidationKind::BadHook,
                     "instance '" + start.instance + "' has no hook '"
                     + start.hook + "'");
            binding.start_hooks.emplace_back(i, h);
        }

        model.pdmps.push_back(std::move(binding));
    }
}

}  // namespace

SystemModel assemble_system(std::vector<ComponentDefinition> definitions,
                            const SystemSpec& spec) {
    SystemModel model;
    model.definitions = std::move(definitions);

    std::unordered_map<std::string, int> type_index;
    for (std::size_t i = 0; i < model.definitions.size(); ++i) {
        if (!type_index.emplace(model.definitions[i].name, static_cast<int>(i)).second)
            fail(ValidationKind::DuplicateName,
                 "component type '" + model.definitions[i].name
                 + "' is defined twice");
    }

    build_instances(model, spec, type_index);
    wire_connections(model, spec);
    build_groups(model, spec);
    build_chains(model, spec);
    build_pdmps(model, spec);
    return model;
}

}  // namespace hybridsim::kernel

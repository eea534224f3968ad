#include "hybridsim/engine/integrator.hpp"

#include <cmath>
#include <string>

namespace hybridsim::engine {

using kernel::SystemModel;
using kernel::SystemState;
using kernel::Value;

OdeLayout build_ode_layout(const SystemModel& model) {
    OdeLayout layout;
    for (const auto& pdmp : model.pdmps) {
        for (std::size_t k = 0; k < pdmp.odes.size(); ++k) {
            layout.variables.push_back(pdmp.odes[k]);
            layout.derivatives.push_back(pdmp.equations[k].get());
            layout.scopes.push_back(pdmp.equation_scope[k]);
        }
    }
    return layout;
}

void gather(const SystemState& state, const OdeLayout& layout,
            std::vector<double>& values) {
    values.resize(layout.size());
    for (std::size_t k = 0; k < layout.size(); ++k) {
        const auto& var = layout.variables[k];
        values[k] = state.instances[var.instance].variables[var.variable].as_number();
    }
}

void scatter(SystemState& state, const OdeLayout& layout,
             const std::vector<double>& values) {
    for (std::size_t k = 0; k < layout.size(); ++k) {
        const auto& var = layout.variables[k];
        state.instances[var.instance].variables[var.variable] =
            Value::number(values[k]);
    }
}

namespace {

void derivatives_at(const SystemModel& model, SystemState& state,
                    const OdeLayout& layout, const std::vector<double>& y,
                    std::vector<double>& dy) {
    scatter(state, layout, y);
    dy.resize(layout.size());
    for (std::size_t k = 0; k < layout.size(); ++k) {
        double d = kernel::evaluate(model, state, layout.scopes[k],
                                    *layout.derivatives[k]).as_number();
        if (!std::isfinite(d))
            throw NumericError("non-finite derivative for ode variable #"
                               + std::to_string(k));
        dy[k] = d;
    }
}

}  // namespace

void rk4_step(const SystemModel& model, SystemState& state,
              const OdeLayout& layout, double h) {
    if (layout.size() == 0) return;

    std::vector<double> y0;
    gather(state, layout, y0);

    std::vector<double> k1, k2, k3, k4;
    std::vector<double> stage(y0.size());

    derivatives_at(model, state, layout, y0, k1);
    for (std::size_t i = 0; i < y0.size(); ++i) stage[i] = y0[i] + 0.5 * h * k1[i];
    derivatives_at(model, state, layout, stage, k2);
    for (std::size_t i = 0; i < y0.size(); ++i) stage[i] = y0[i] + 0.5 * h * k2[i];
    derivatives_at(model, state, layout, stage, k3);
    for (std::size_t i = 0; i < y0.size(); ++i) stage[i] = y0[i] + h * k3[i];
    derivatives_at(model, state, layout, stage, k4);

    for (std::size_t i = 0; i < y0.size(); ++i) {
        stage[i] = y0[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!std::isfinite(stage[i]))
            throw NumericError("integration diverged at ode variable #"
                               + std::to_string(i));
    }
    scatter(state, layout, stage);
}

}  // namespace hybridsim::engine

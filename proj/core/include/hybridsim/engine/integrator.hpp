#pragma once

#include <vector>

#include "hybridsim/kernel/state.hpp"

namespace hybridsim::engine {

/// Flattened view over every PDMP-driven variable in the model: the ODE
/// system integrated between events.
struct OdeLayout {
    std::vector<kernel::OdeVariable> variables;
    std::vector<const kernel::Expr*> derivatives;  ///< right-hand sides
    std::vector<int> scopes;                       ///< instance each rhs evaluates in

    [[nodiscard]] std::size_t size() const { return variables.size(); }
};

[[nodiscard]] OdeLayout build_ode_layout(const kernel::SystemModel& model);

/// Copy the driven variables out of / back into the state.
void gather(const kernel::SystemState& state, const OdeLayout& layout,
            std::vector<double>& values);
void scatter(kernel::SystemState& state, const OdeLayout& layout,
             const std::vector<double>& values);

/// One classic Runge-Kutta (RK4) step of width `h`, advancing the driven
/// variables in place.  Discrete state is frozen during the step, which is
/// exactly the PDMP picture: flows between jumps, jumps between flows.
/// Throws NumericError when a derivative or a result is not finite.
void rk4_step(const kernel::SystemModel& model, kernel::SystemState& state,
              const OdeLayout& layout, double h);

}  // namespace hybridsim::engine

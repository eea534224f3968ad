#include "hybridsim/engine/simulator.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "hybridsim/engine/integrator.hpp"
#include "hybridsim/engine/random.hpp"

namespace hybridsim::engine {

using kernel::ComponentDefinition;
using kernel::LawKind;
using kernel::SystemModel;
using kernel::SystemState;
using kernel::TransitionDef;
using kernel::Value;

std::vector<std::string> state_signature(const SystemModel& model,
                                         const SystemState& state) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < model.instances.size(); ++i) {
        const ComponentDefinition& def = model.definition_of(static_cast<int>(i));
        for (std::size_t a = 0; a < def.automata.size(); ++a) {
            const auto& automaton = def.automata[a];
            parts.push_back(model.instances[i].name + "." + automaton.name + "."
                            + automaton.states[state.instances[i].active[a]]);
        }
    }
    std::sort(parts.begin(), parts.end());
    return parts;
}

namespace {

struct Clock {
    double time = 0.0;
    int instance = -1;
    int automaton = -1;
    int transition = -1;
};

struct Monitor {
    bool is_stop = false;
    // transition monitors
    int instance = -1;
    int automaton = -1;
    int transition = -1;
    // stop monitors
    int pdmp = -1;
    int stop = -1;
};

class Simulator {
public:
    Simulator(const SystemModel& model, const EngineConfig& config,
              std::uint64_t replication)
        : model_(model), config_(config), rng_(config.seed, replication) {}

    SimulationTrace run() {
        validate(config_);
        state_ = kernel::initial_state(model_);
        layout_ = build_ode_layout(model_);

        for (const auto& pdmp : model_.pdmps)
            for (auto [instance, hook] : pdmp.start_hooks)
                kernel::run_hook(model_, state_, instance, hook);

        record_grid_sample_if_due();
        sample_initial_clocks();
        run_cascade();
        refresh_monitors();

        while (time_ < config_.horizon) {
            double target = config_.horizon;
            int next = next_clock();
            if (next >= 0 && clocks_[next].time <= target)
                target = clocks_[next].time;

            if (advance_with_monitors(target)) continue;  // boundary event handled

            if (next >= 0 && time_ == clocks_[next].time) {
                Clock clock = clocks_[next];
                clocks_.erase(clocks_.begin() + next);
                const TransitionDef& transition = transition_of(clock);
                if (condition_holds(clock.instance, transition)) {
                    fire_transition(clock.instance, clock.automaton, clock.transition);
                    run_cascade();
                    after_event();
                }
                // A clock whose condition lapsed is simply discarded.
                refresh_monitors();
            }
        }

        trace_.end_time = config_.horizon;
        trace_.end_state_signature = state_signature(model_, state_);
        return std::move(trace_);
    }

private:
    // ------------------------------------------------------------------ clocks

    const TransitionDef& transition_of(const Clock& clock) const {
        return model_.definition_of(clock.instance)
            .automata[clock.automaton].transitions[clock.transition];
    }

    /// Draw delays for every exponential transition leaving the automaton's
    /// current state.  A zero rate disables the transition; a negative rate
    /// is a modelling error.
    void sample_entry_clocks(int instance, int automaton) {
        const auto& definition = model_.definition_of(instance).automata[automaton];
        int source = state_.instances[instance].active[automaton];
        for (std::size_t t = 0; t < definition.transitions.size(); ++t) {
            const TransitionDef& transition = definition.transitions[t];
            if (transition.law.kind != LawKind::Exponential) continue;
            if (transition.source_index != source) continue;
            double rate = kernel::evaluate(model_, state_, instance,
                                           *transition.law.parameter).as_number();
            if (rate < 0.0)
                throw LawError("transition '" + transition.name + "' of instance '"
                               + model_.instances[instance].name
                               + "' has negative rate " + std::to_string(rate));
            if (rate == 0.0) continue;
            clocks_.push_back({time_ + rng_.exponential(rate), instance, automaton,
                               static_cast<int>(t)});
        }
    }

    void sample_initial_clocks() {
        for (std::size_t i = 0; i < model_.instances.size(); ++i) {
            const ComponentDefinition& def = model_.definition_of(static_cast<int>(i));
            for (std::size_t a = 0; a < def.automata.size(); ++a)
                sample_entry_clocks(static_cast<int>(i), static_cast<int>(a));
        }
    }

    void drop_clocks(int instance, int automaton) {
        std::erase_if(clocks_, [&](const Clock& c) {
            return c.instance == instance && c.automaton == automaton;
        });
    }

    /// Smallest firing time; ties broken by (instance, automaton, transition)
    /// so simultaneous clocks fire in a reproducible order.
    int next_clock() const {
        int best = -1;
        for (std::size_t c = 0; c < clocks_.size(); ++c) {
            if (best < 0) {
                best = static_cast<int>(c);
                continue;
            }
            const Clock& a = clocks_[c];
            const Clock& b = clocks_[best];
            if (std::tie(a.time, a.instance, a.automaton, a.transition)
                < std::tie(b.time, b.instance, b.automaton, b.transition))
                best = static_cast<int>(c);
        }
        return best;
    }

    void after_event() {
        if (config_.clock_policy != ClockPolicy::ResampleEachEvent) return;
        // Redraw every pending clock from now, in a reproducible order.
        std::sort(clocks_.begin(), clocks_.end(), [](const Clock& a, const Clock& b) {
            return std::tie(a.instance, a.automaton, a.transition)
                < std::tie(b.instance, b.automaton, b.transition);
        });
        std::vector<Clock> fresh;
        for (const Clock& clock : clocks_) {
            double rate = kernel::evaluate(model_, state_, clock.instance,
                                           *transition_of(clock).law.parameter)
                              .as_number();
            if (rate < 0.0)
                throw LawError("transition '" + transition_of(clock).name
                               + "' has negative rate " + std::to_string(rate));
            if (rate == 0.0) continue;
            Clock redrawn = clock;
            redrawn.time = time_ + rng_.exponential(rate);
            fresh.push_back(redrawn);
        }
        clocks_ = std::move(fresh);
    }

    // -------------------------------------------------------------- conditions

    bool condition_holds(int instance, const TransitionDef& transition) const {
        if (!transition.condition) return true;
        return kernel::evaluate(model_, state_, instance, *transition.condition)
            .as_boolean();
    }

    // ---------------------------------------------------------------- monitors

    void refresh_monitors() {
        monitors_.clear();
        for (std::size_t i = 0; i < model_.instances.size(); ++i) {
            const ComponentDefinition& def = model_.definition_of(static_cast<int>(i));
            for (std::size_t a = 0; a < def.automata.size(); ++a) {
                int source = state_.instances[i].active[a];
                const auto& transitions = def.automata[a].transitions;
                for (std::size_t t = 0; t < transitions.size(); ++t) {
                    const TransitionDef& transition = transitions[t];
                    if (transition.law.kind != LawKind::Instantaneous) continue;
                    if (transition.source_index != source) continue;
                    if (!transition.condition) continue;
                    Monitor monitor;
                    monitor.instance = static_cast<int>(i);
                    monitor.automaton = static_cast<int>(a);
                    monitor.transition = static_cast<int>(t);
                    monitors_.push_back(monitor);
                }
            }
        }
        for (std::size_t p = 0; p < model_.pdmps.size(); ++p) {
            for (std::size_t s = 0; s < model_.pdmps[p].stops.size(); ++s) {
                Monitor monitor;
                monitor.is_stop = true;
                monitor.pdmp = static_cast<int>(p);
                monitor.stop = static_cast<int>(s);
                monitors_.push_back(monitor);
            }
        }
        baselines_.resize(monitors_.size());
        for (std::size_t m = 0; m < monitors_.size(); ++m)
            baselines_[m] = monitor_value(monitors_[m]);
    }

    bool monitor_value(const Monitor& monitor) const {
        if (monitor.is_stop) {
            const auto& pdmp = model_.pdmps[monitor.pdmp];
            return kernel::evaluate(model_, state_, pdmp.stop_scope[monitor.stop],
                                    *pdmp.stops[monitor.stop]).as_boolean();
        }
        return condition_holds(
            monitor.instance,
            model_.definition_of(monitor.instance)
                .automata[monitor.automaton].transitions[monitor.transition]);
    }

    /// A watched condition that was false at the last event and is true now.
    bool any_monitor_flipped() const {
        for (std::size_t m = 0; m < monitors_.size(); ++m)
            if (!baselines_[m] && monitor_value(monitors_[m])) return true;
        return false;
    }

    // ------------------------------------------------------------------ events

    void count_event() {
        if (++events_ >= config_.zeno_event_limit)
            throw ZenoError("replication exceeded "
                            + std::to_string(config_.zeno_event_limit)
                            + " events; the model looks Zeno at t="
                            + std::to_string(time_));
    }

    void fire_transition(int instance, int automaton, int transition) {
        trace_.firings.push_back({time_, instance, automaton, transition});
        count_event();

        const TransitionDef& def = model_.definition_of(instance)
            .automata[automaton].transitions[transition];

        drop_clocks(instance, automaton);
        clear_declined(instance, automaton);
        state_.instances[instance].active[automaton] = def.target_index;
        kernel::fire_notification_hooks(model_, state_, instance, def);
        sample_entry_clocks(instance, automaton);
    }

    void clear_declined(int instance, int automaton) {
        for (auto it = declined_.begin(); it != declined_.end();) {
            if (std::get<0>(*it) == instance && std::get<1>(*it) == automaton)
                it = declined_.erase(it);
            else
                ++it;
        }
    }

    /// Fire enabled instantaneous transitions until none is left.  The scan
    /// restarts from the first instance after each firing, so the order is
    /// deterministic: instance, then automaton, then declaration order.
    void run_cascade() {
        for (int iteration = 0;; ++iteration) {
            if (iteration > config_.max_cascade_iterations)
                throw LivelockError(
                    "cascade exceeded "
                    + std::to_string(config_.max_cascade_iterations)
                    + " firings at t=" + std::to_string(time_));
            if (!cascade_scan()) return;
        }
    }

    /// One scan; returns true if it fired something.
    bool cascade_scan() {
        for (std::size_t i = 0; i < model_.instances.size(); ++i) {
            const ComponentDefinition& def = model_.definition_of(static_cast<int>(i));
            for (std::size_t a = 0; a < def.automata.size(); ++a) {
                int source = state_.instances[i].active[a];
                const auto& transitions = def.automata[a].transitions;
                for (std::size_t t = 0; t < transitions.size(); ++t) {
                    const TransitionDef& transition = transitions[t];
                    if (transition.law.kind != LawKind::Instantaneous) continue;
                    if (transition.source_index != source) continue;

                    auto key = std::make_tuple(static_cast<int>(i),
                                               static_cast<int>(a),
                                               static_cast<int>(t));
                    if (!condition_holds(static_cast<int>(i), transition)) {
                        declined_.erase(key);  // condition dropped: re-arm the draw
                        continue;
                    }
                    double weight = kernel::evaluate(model_, state_,
                                                     static_cast<int>(i),
                                                     *transition.law.parameter)
                                        .as_number();
                    if (weight < 1.0) {
                        if (declined_.count(key)) continue;
                        if (rng_.uniform_open() >= weight) {
                            declined_.insert(key);  // one draw per enablement
                            continue;
                        }
                    }
                    fire_transition(static_cast<int>(i), static_cast<int>(a),
                                    static_cast<int>(t));
                    return true;
                }
            }
        }
        return false;
    }

    // ------------------------------------------------------------ integration

    void record_grid_sample_if_due() {
        if (config_.sample_grid <= 0.0) return;
        double due = next_grid_ * config_.sample_grid;
        if (time_ != due) return;
        for (std::size_t k = 0; k < layout_.size(); ++k) {
            const auto& var = layout_.variables[k];
            trace_.samples.push_back(
                {time_, var.instance, var.variable,
                 state_.instances[var.instance].variables[var.variable].as_number()});
        }
        ++next_grid_;
    }

    /// Integrate from the current time towards `target`.  Returns true when a
    /// watched condition flipped on the way: the flip is localised by
    /// bisection, the cascade has run, and the caller should re-plan.
    bool advance_with_monitors(double target) {
        while (time_ < target) {
            double h = target - time_;
            bool lands_on_grid = false;
            double boundary = 0.0;
            if (config_.sample_grid > 0.0) {
                boundary = next_grid_ * config_.sample_grid;
                if (boundary - time_ <= h && boundary <= target) {
                    h = boundary - time_;
                    lands_on_grid = true;
                }
            }
            if (layout_.size() > 0 && config_.step_size < h) {
                h = config_.step_size;
                lands_on_grid = lands_on_grid && (time_ + h == boundary);
            }

            std::vector<double> start;
            gather(state_, layout_, start);
            double step_start = time_;

            rk4_step(model_, state_, layout_, h);
            time_ = lands_on_grid ? boundary : step_start + h;
            if (time_ > target) time_ = target;
            // The remaining distance can be below representable resolution.
            if (h > 0.0 && time_ <= step_start) time_ = target;

            if (any_monitor_flipped()) {
                localise_flip(step_start, start, h);
                count_event();
                run_cascade();
                after_event();
                refresh_monitors();
                return true;
            }
            if (lands_on_grid) record_grid_sample_if_due();
        }
        return false;
    }

    /// The flip happened somewhere in (step_start, step_start + h].  Shrink
    /// the bracket with single re-integrated steps until it is narrower than
    /// the event tolerance, then land on its upper end.
    void localise_flip(double step_start, const std::vector<double>& start,
                       double h) {
        double lo = 0.0;
        double hi = h;
        while (hi - lo > config_.event_tolerance) {
            double mid = 0.5 * (lo + hi);
            scatter(state_, layout_, start);
            rk4_step(model_, state_, layout_, mid);
            if (any_monitor_flipped())
                hi = mid;
            else
                lo = mid;
        }
        scatter(state_, layout_, start);
        rk4_step(model_, state_, layout_, hi);
        time_ = step_start + hi;
    }

    // ------------------------------------------------------------------ fields

    const SystemModel& model_;
    const EngineConfig& config_;
    RandomStream rng_;
    SystemState state_;
    OdeLayout layout_;
    SimulationTrace trace_;

    std::vector<Clock> clocks_;
    std::vector<Monitor> monitors_;
    std::vector<char> baselines_;
    std::set<std::tuple<int, int, int>> declined_;

    double time_ = 0.0;
    long long next_grid_ = 0;
    long long events_ = 0;
};

}  // namespace

SimulationTrace run_replication(const SystemModel& model, const EngineConfig& config,
                                std::uint64_t replication) {
    return Simulator(model, config, replication).run();
}

}  // namespace hybridsim::engine

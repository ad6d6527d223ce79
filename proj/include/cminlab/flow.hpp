#pragma once

#include <functional>
#include <optional>

#include "cminlab/compact_set.hpp"
#include "cminlab/geometry.hpp"

namespace cminlab {

struct IntegratorOptions {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double h_init = 1e-3;
    double h_min = 1e-13;
    double h_max = 0.5;
    double escape_radius = 1e4;  // coordinate magnitude treated as escape to infinity
    long max_steps = 20'000'000;
};

enum class FlowKind { VectorField, ClosedForm };

/// A continuous flow on a phase space: either a vector field integrated with an
/// adaptive embedded Runge-Kutta pair, or an exact closed-form flow map.
/// time_orientation = -1 runs the same dynamics backwards; alpha-limits are
/// omega-limits of the reversed flow by construction.
struct FlowSpec {
    std::shared_ptr<const PhaseSpace> space;
    FlowKind kind = FlowKind::VectorField;
    std::function<Vec(const Vec&)> field;             // VectorField only
    std::function<Vec(double, const Vec&)> flow_map;  // ClosedForm only: (t, x) -> x^t
    int time_orientation = +1;
    IntegratorOptions integ;
    std::string name;

    FlowSpec reversed() const {
        FlowSpec r = *this;
        r.time_orientation = -time_orientation;
        return r;
    }
};

struct AdvanceResult {
    PhasePoint point;       // state at time_reached (last valid state on escape)
    double time_reached = 0;
    bool escaped = false;   // left the escape radius or the step size underflowed
};

/// Flow the point forward by t (t >= 0; direction comes from time_orientation).
AdvanceResult advance(const FlowSpec& flow, const PhasePoint& x, double t);

struct OrbitSample {
    std::vector<Vec> points;
    std::vector<double> times;
    bool truncated = false;  // integration failed before the horizon
    bool escaped = false;
};

/// Sample the orbit on [0, horizon] at spacing dt (endpoint always included).
/// dt > horizon degenerates to the two endpoint states.
OrbitSample orbit_sample(const FlowSpec& flow, const PhasePoint& seed, double horizon, double dt);

struct LimitParams {
    double burn_in = 20;
    double window = 60;
    double dt = 0.02;
    double net_eps = 0.05;
};

/// Forward limit-set estimate: discard [0, burn_in], net the tail window.
/// Convergence heuristic: the net over the first half of the window must agree
/// with the full-window net within net_eps in Hausdorff distance.
CompactSetSample omega_limit_estimate(const FlowSpec& flow, const PhasePoint& seed, const LimitParams& p);

/// Backward limit-set estimate; identical to the omega estimate of reversed().
CompactSetSample alpha_limit_estimate(const FlowSpec& flow, const PhasePoint& seed, const LimitParams& p);

}  // namespace cminlab

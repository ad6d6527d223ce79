#include "cminlab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cminlab {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

bool out_of_bounds(const Vec& y, double radius) {
    for (double c : y)
        if (!std::isfinite(c) || std::abs(c) > radius) return true;
    return false;
}

// Integrate dy/dt = sign * field(y) from 0 to T with per-step projection.
// on_sample(t, y) is invoked at the requested grid times (dense output via
// integrating exactly to each grid time; steps are clipped, not interpolated).
struct Stepper {
    const FlowSpec& flow;
    Vec y;
    double t = 0;
    double h;
    bool escaped = false;

    Stepper(const FlowSpec& f, Vec y0) : flow(f), y(std::move(y0)), h(f.integ.h_init) {}

    Vec eval(const Vec& state) const {
        Vec v = flow.field(state);
        if (flow.time_orientation < 0)
            for (double& c : v) c = -c;
        return v;
    }

    // Advance to exactly t_target; returns false on escape/underflow.
    bool run_to(double t_target) {
        const auto& opt = flow.integ;
        const int n = (int)y.size();
        Vec k1, k2, k3, k4, k5, k6, k7, ytmp(n), y5(n);
        long steps = 0;
        k1 = eval(y);
        while (t < t_target) {
            if (++steps > opt.max_steps) { escaped = true; return false; }
            double hs = std::min(h, t_target - t);
            bool clipped = hs < h;

            auto stage = [&](const Vec& base, std::initializer_list<std::pair<const Vec*, double>> terms) {
                for (int i = 0; i < n; ++i) {
                    double acc = base[i];
                    for (auto& [k, w] : terms) acc += hs * w * (*k)[i];
                    ytmp[i] = acc;
                }
            };
            stage(y, {{&k1, a21}});
            k2 = eval(ytmp);
            stage(y, {{&k1, a31}, {&k2, a32}});
            k3 = eval(ytmp);
            stage(y, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
            k4 = eval(ytmp);
            stage(y, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
            k5 = eval(ytmp);
            stage(y, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
            k6 = eval(ytmp);
            for (int i = 0; i < n; ++i)
                y5[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            k7 = eval(y5);

            double err = 0;
            for (int i = 0; i < n; ++i) {
                double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                 e7 * k7[i]);
                double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                err = std::max(err, std::abs(e) / scale);
            }

            if (err <= 1.0) {
                t += hs;
                y = flow.space->project(std::move(y5));
                y5.assign(n, 0.0);
                if (out_of_bounds(y, opt.escape_radius)) { escaped = true; return false; }
                k1 = eval(y);  // projection moved the state; FSAL reuse would be stale
            }
            double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            double hnew = hs * std::clamp(grow, 0.2, 5.0);
            if (!clipped || err > 1.0) h = std::clamp(hnew, 0.0, opt.h_max);
            if (h < opt.h_min) { escaped = true; return false; }
        }
        return true;
    }
};

}  // namespace

AdvanceResult advance(const FlowSpec& flow, const PhasePoint& x, double t) {
    if (t < 0) throw std::invalid_argument("advance: t must be >= 0 (reverse via FlowSpec::reversed)");
    if (!flow.space) throw std::invalid_argument("advance: flow has no space");
    if ((int)x.coords.size() != flow.space->ambient_dim)
        throw std::invalid_argument("advance: point dimension mismatch");

    AdvanceResult out;
    out.point.space = flow.space;
    if (flow.kind == FlowKind::ClosedForm) {
        double s = flow.time_orientation * t;
        out.point.coords = flow.space->project(flow.flow_map(s, x.coords));
        out.time_reached = t;
        if (out_of_bounds(out.point.coords, flow.integ.escape_radius)) {
            out.escaped = true;
            out.point.coords = x.coords;
            out.time_reached = 0;
        }
        return out;
    }
    Stepper st(flow, flow.space->project(x.coords));
    bool ok = st.run_to(t);
    out.point.coords = std::move(st.y);
    out.time_reached = st.t;
    out.escaped = !ok;
    return out;
}

OrbitSample orbit_sample(const FlowSpec& flow, const PhasePoint& seed, double horizon, double dt) {
    if (horizon < 0 || dt <= 0) throw std::invalid_argument("orbit_sample: need horizon >= 0, dt > 0");
    OrbitSample out;
    auto push = [&](double t, Vec p) {
        out.times.push_back(t);
        out.points.push_back(std::move(p));
    };

    std::vector<double> grid;
    for (double t = 0; t < horizon; t += dt) grid.push_back(t);
    if (grid.empty() || grid.back() < horizon) grid.push_back(horizon);

    if (flow.kind == FlowKind::ClosedForm) {
        for (double t : grid) {
            Vec p = flow.space->project(flow.flow_map(flow.time_orientation * t, seed.coords));
            if (out_of_bounds(p, flow.integ.escape_radius)) {
                out.truncated = out.escaped = true;
                break;
            }
            push(t, std::move(p));
        }
        return out;
    }

    Stepper st(flow, flow.space->project(seed.coords));
    push(0.0, st.y);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!st.run_to(grid[i])) {
            out.truncated = true;
            out.escaped = st.escaped;
            break;
        }
        push(grid[i], st.y);
    }
    return out;
}

namespace {

CompactSetSample limit_estimate(const FlowSpec& flow, const PhasePoint& seed, const LimitParams& p) {
    if (p.window <= 0 || p.dt <= 0 || p.net_eps <= 0 || p.burn_in < 0)
        throw std::invalid_argument("limit estimate: bad parameters");

    CompactSetSample out;
    out.space = flow.space;
    out.resolution = p.net_eps;

    AdvanceResult burned = advance(flow, seed, p.burn_in);
    if (burned.escaped) {
        out.escaped = true;
        return out;  // empty estimate with the escape flag set
    }
    OrbitSample tail = orbit_sample(flow, burned.point, p.window, p.dt);
    if (tail.escaped || tail.points.empty()) {
        out.escaped = true;
        out.truncated = tail.truncated;
        return out;
    }

    std::vector<Vec> half;
    for (std::size_t i = 0; i < tail.points.size(); ++i)
        if (tail.times[i] <= 0.5 * p.window) half.push_back(tail.points[i]);

    CompactSetSample full_net = epsilon_net(flow.space, tail.points, p.net_eps);
    CompactSetSample half_net = epsilon_net(flow.space, half, p.net_eps);
    full_net.truncated = tail.truncated;
    full_net.converged = !tail.truncated && !half_net.empty() &&
                         hausdorff_distance(half_net, full_net) <= p.net_eps;
    return full_net;
}

}  // namespace

CompactSetSample omega_limit_estimate(const FlowSpec& flow, const PhasePoint& seed,
                                      const LimitParams& p) {
    return limit_estimate(flow, seed, p);
}

CompactSetSample alpha_limit_estimate(const FlowSpec& flow, const PhasePoint& seed,
                                      const LimitParams& p) {
    return limit_estimate(flow.reversed(), seed, p);
}

}  // namespace cminlab

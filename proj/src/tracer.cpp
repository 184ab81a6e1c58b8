#include "driftplan/tracer.hpp"

#include <cmath>

#include "driftplan/errors.hpp"

namespace driftplan {

std::vector<Vec2> TrajectorySet::positions_at(int i) const {
    std::vector<Vec2> out(n_drifters());
    for (int l = 0; l < n_drifters(); ++l) out[l] = position(i, l);
    return out;
}

namespace {

int grid_index(double t, double t0, double dt, int n, const char* what) {
    const int i = static_cast<int>(std::llround((t - t0) / dt));
    if (i < 0 || i >= n || std::abs(t0 + i * dt - t) > 1e-9)
        throw InvalidArgument(std::string(what) + ": time off the stored grid");
    return i;
}

}  // namespace

TrajectorySet TrajectorySet::slice(double a, double b) const {
    const int ia = grid_index(a, t0, dt, n_times(), "TrajectorySet::slice");
    const int ib = grid_index(b, t0, dt, n_times(), "TrajectorySet::slice");
    if (ib < ia) throw InvalidArgument("TrajectorySet::slice: empty window");
    TrajectorySet out;
    out.t0 = time_at(ia);
    out.dt = dt;
    out.xs = xs.middleRows(ia, ib - ia + 1);
    out.ys = ys.middleRows(ia, ib - ia + 1);
    out.labels = labels;
    out.seed = seed;
    return out;
}

TrajectorySet TrajectorySet::stack(const std::vector<TrajectorySet>& sets) {
    if (sets.empty()) throw InvalidArgument("TrajectorySet::stack: no sets");
    int cols = 0;
    for (const auto& s : sets) {
        if (s.n_times() != sets[0].n_times() || std::abs(s.t0 - sets[0].t0) > 1e-9 ||
            std::abs(s.dt - sets[0].dt) > 1e-12)
            throw InvalidArgument("TrajectorySet::stack: grids differ");
        cols += s.n_drifters();
    }
    TrajectorySet out;
    out.t0 = sets[0].t0;
    out.dt = sets[0].dt;
    out.seed = sets[0].seed;
    out.xs.resize(sets[0].n_times(), cols);
    out.ys.resize(sets[0].n_times(), cols);
    int at = 0;
    for (const auto& s : sets) {
        out.xs.middleCols(at, s.n_drifters()) = s.xs;
        out.ys.middleCols(at, s.n_drifters()) = s.ys;
        out.labels.insert(out.labels.end(), s.labels.begin(), s.labels.end());
        at += s.n_drifters();
    }
    return out;
}

TrajectorySet TrajectorySet::join_time(const TrajectorySet& earlier, const TrajectorySet& later) {
    if (earlier.n_drifters() != later.n_drifters())
        throw InvalidArgument("TrajectorySet::join_time: drifter counts differ");
    if (std::abs(earlier.dt - later.dt) > 1e-12 ||
        std::abs(earlier.t_end() - later.t0) > 1e-9)
        throw InvalidArgument("TrajectorySet::join_time: grids do not meet");
    TrajectorySet out;
    out.t0 = earlier.t0;
    out.dt = earlier.dt;
    out.labels = later.labels;
    out.seed = later.seed;
    const int n1 = earlier.n_times(), n2 = later.n_times();
    out.xs.resize(n1 + n2 - 1, earlier.n_drifters());
    out.ys.resize(n1 + n2 - 1, earlier.n_drifters());
    out.xs.topRows(n1) = earlier.xs;
    out.ys.topRows(n1) = earlier.ys;
    out.xs.bottomRows(n2 - 1) = later.xs.bottomRows(n2 - 1);
    out.ys.bottomRows(n2 - 1) = later.ys.bottomRows(n2 - 1);
    return out;
}

TrajectorySet advect(const FlowRealization& flow, const FlowParams& params,
                     const ModeSet& mode_set, const std::vector<Vec2>& starts, TimeSpan span,
                     double dt, std::uint64_t seed, bool noise_on, DrifterLabel label) {
    if (!(dt > 0.0)) throw InvalidArgument("advect: dt must be positive");
    const bool backward = span.t1 < span.t0;
    const double a = backward ? span.t1 : span.t0;
    const double b = backward ? span.t0 : span.t1;
    if (a < flow.t0 - 1e-9 || b > flow.t_end() + 1e-9)
        throw InvalidArgument("advect: span outside the flow realization span");
    const double ratio = flow.dt / dt;
    const int refine = static_cast<int>(std::llround(ratio));
    if (refine < 1 || std::abs(ratio - refine) > 1e-9)
        throw InvalidArgument("advect: dt must equal the flow step or refine it uniformly");
    const int n_steps = static_cast<int>(std::llround((b - a) / dt));
    if (std::abs(a + n_steps * dt - b) > 1e-9)
        throw InvalidArgument("advect: span is not a whole number of steps");

    const int count = static_cast<int>(starts.size());
    TrajectorySet out;
    out.t0 = a;
    out.dt = dt;
    out.seed = seed;
    out.labels.assign(count, label);
    out.xs.resize(n_steps + 1, count);
    out.ys.resize(n_steps + 1, count);

    const PairBasis basis(mode_set, params.r);
    const Matrix states = augmented_states(flow, mode_set);
    const double noise_scale = noise_on ? params.sigma_x * std::sqrt(dt) : 0.0;
    const double dir = backward ? -1.0 : 1.0;

    for (int l = 0; l < count; ++l) {
        Rng rng(derive_seed(seed, "drifter", static_cast<std::uint64_t>(l)));
        Vec2 x = wrap_position(starts[l]);
        // marching order follows integration direction; storage is ascending
        const int start_row = backward ? n_steps : 0;
        out.xs(start_row, l) = x[0];
        out.ys(start_row, l) = x[1];
        for (int s = 0; s < n_steps; ++s) {
            const double t = backward ? b - s * dt : a + s * dt;
            const int knot = flow.knot_index(backward ? t - dt : t);
            const Vec2 u = basis.velocity(states.col(knot), x);
            Vec2 next = x + dir * dt * u;
            if (noise_on) {
                next[0] += noise_scale * rng.normal();
                next[1] += noise_scale * rng.normal();
            }
            x = wrap_position(next);
            const int row = backward ? n_steps - 1 - s : s + 1;
            out.xs(row, l) = x[0];
            out.ys(row, l) = x[1];
        }
    }
    return out;
}

std::vector<Vec2> uniform_initial_positions(int count, std::uint64_t seed) {
    if (count < 0) throw InvalidArgument("uniform_initial_positions: count must be >= 0");
    std::vector<Vec2> out;
    out.reserve(count);
    Rng rng(seed);
    for (int l = 0; l < count; ++l) {
        const double x = rng.uniform(-M_PI, M_PI);
        const double y = rng.uniform(-M_PI, M_PI);
        out.push_back({x, y});
    }
    return out;
}

}  // namespace driftplan

#pragma once

#include <cstdint>
#include <vector>

#include "driftplan/flow_model.hpp"
#include "driftplan/types.hpp"

namespace driftplan {

enum class DrifterLabel { existing, added, candidate, probe };

/// Drifter position histories on a uniform time grid, wrapped into
/// [-pi,pi)^2. Columns are drifters, rows are times (ascending).
struct TrajectorySet {
    double t0 = 0.0;
    double dt = 0.0;
    Matrix xs;  // n_times x L
    Matrix ys;  // n_times x L
    std::vector<DrifterLabel> labels;
    std::uint64_t seed = 0;

    int n_times() const { return static_cast<int>(xs.rows()); }
    int n_drifters() const { return static_cast<int>(xs.cols()); }
    double time_at(int i) const { return t0 + i * dt; }
    double t_end() const { return t0 + (n_times() - 1) * dt; }
    Vec2 position(int i, int l) const { return {xs(i, l), ys(i, l)}; }
    std::vector<Vec2> positions_at(int i) const;

    /// Sub-grid restriction to [a, b] (both must lie on the grid).
    TrajectorySet slice(double a, double b) const;
    /// Joins drifters from several sets sharing the same grid.
    static TrajectorySet stack(const std::vector<TrajectorySet>& sets);
    /// Joins a backward leg (same start point, ascending grid ending at the
    /// shared instant) with a forward leg starting there.
    static TrajectorySet join_time(const TrajectorySet& earlier, const TrajectorySet& later);
};

/// Euler-Maruyama advection of drifters through a flow realization, with
/// observation noise sigma_x when noise_on. span.t1 < span.t0 integrates
/// backward (negated drift, fresh noise); the returned grid is ascending
/// either way. dt must equal the flow grid step or divide it uniformly.
TrajectorySet advect(const FlowRealization& flow, const FlowParams& params,
                     const ModeSet& mode_set, const std::vector<Vec2>& starts, TimeSpan span,
                     double dt, std::uint64_t seed, bool noise_on = true,
                     DrifterLabel label = DrifterLabel::existing);

/// i.i.d. uniform positions on [-pi,pi)^2.
std::vector<Vec2> uniform_initial_positions(int count, std::uint64_t seed);

}  // namespace driftplan

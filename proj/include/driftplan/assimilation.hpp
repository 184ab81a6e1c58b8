#pragma once

#include <cstdint>
#include <vector>

#include "driftplan/flow_model.hpp"
#include "driftplan/posterior.hpp"
#include "driftplan/tracer.hpp"
#include "driftplan/types.hpp"

namespace driftplan {

/// Real-linear observation operator: row block (2l, 2l+1) maps the augmented
/// state to the physical velocity at drifter l, with the conjugate-mode
/// contributions folded in analytically.
Matrix observation_matrix(const std::vector<Vec2>& positions, const ModeSet& mode_set,
                          const EigvecTable& eigenvectors);

/// Diagnostics accumulated by filter/smoother runs; used by the invariant
/// battery. negative_eigenvalue_excursions counts pre-floor eigenvalues below
/// -1e-10 * trace.
struct DaDiagnostics {
    long steps = 0;
    long negative_eigenvalue_excursions = 0;
    double min_pre_floor_eigenvalue = 0.0;
};

/// Forward-Euler integration of the conditional mean/covariance equations of
/// the coupled drifter-coefficient system, with trajectory increments
/// standing in for dX/dt and the observation operator frozen at each step's
/// left endpoint. The covariance is symmetrized and eigenvalue-floored at
/// zero after every step.
GaussianPosterior filter(const TrajectorySet& obs, const FlowParams& params,
                         const ModeSet& mode_set, const GaussianPosterior& init,
                         DaDiagnostics* diag = nullptr);

/// Backward-Euler integration of the smoothing equations from the terminal
/// filter state; the filter covariance inverse is applied through a
/// regularized eigendecomposition (floor 1e-10 * trace).
GaussianPosterior smoother(const TrajectorySet& obs, const FlowParams& params,
                           const ModeSet& mode_set, const GaussianPosterior& filter_out,
                           DaDiagnostics* diag = nullptr);

/// Backward SDE sampler of coefficient paths from the smoothing posterior,
/// initialized at N(mean, cov) of the terminal smoother state. t_lo > t0
/// restricts the output (and the march) to [t_lo, T]. Deterministic given
/// seed; sample j uses substream ("sample", j).
std::vector<FlowRealization> backward_sample(const GaussianPosterior& smoother_out,
                                             const GaussianPosterior& filter_out,
                                             const FlowParams& params, const ModeSet& mode_set,
                                             int n_samples, std::uint64_t seed,
                                             double t_lo = -1e300);

/// Real-augmented images of the per-pair OU drift, forcing and noise:
/// 2x2 blocks [[-d,-omega],[omega,-d]] on Lambda, (re f, im f) on the
/// forcing, sigma^2/2 per component on the diagonal noise covariance.
struct AugmentedDynamics {
    Matrix lambda;
    Vector forcing;
    Vector noise_diag;  // Sigma_U Sigma_U^T diagonal

    static AugmentedDynamics from(const FlowParams& params, const ModeSet& mode_set);
};

}  // namespace driftplan

#pragma once

#include <vector>

#include "driftplan/rng.hpp"
#include "driftplan/types.hpp"

namespace driftplan {

/// Gaussian state estimate over the real-augmented spectral state, one
/// (mean, covariance) per grid time. Covariances are kept symmetric PSD by
/// the producers (filter, smoother, equilibrium).
struct GaussianPosterior {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<Vector> means;
    std::vector<Matrix> covs;

    int n_times() const { return static_cast<int>(means.size()); }
    int dim() const { return means.empty() ? 0 : static_cast<int>(means.front().size()); }
    double time_at(int i) const { return t0 + i * dt; }
    double t_end() const { return t0 + (n_times() - 1) * dt; }

    /// Index of the grid time nearest to t (t must lie on the grid up to tol).
    int index_of(double t, double tol = 1e-9) const;
};

/// Draws from N(mean, cov) with the covariance eigen-floored at zero.
Vector sample_gaussian(const Vector& mean, const Matrix& cov, Rng& rng);

}  // namespace driftplan

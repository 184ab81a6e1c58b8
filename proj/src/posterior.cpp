#include "driftplan/posterior.hpp"

#include <cmath>

#include "driftplan/errors.hpp"

namespace driftplan {

int GaussianPosterior::index_of(double t, double tol) const {
    if (n_times() == 0) throw InvalidArgument("GaussianPosterior::index_of: empty posterior");
    const int i = static_cast<int>(std::llround((t - t0) / (dt > 0 ? dt : 1.0)));
    if (i < 0 || i >= n_times() || std::abs(time_at(i) - t) > tol)
        throw InvalidArgument("GaussianPosterior::index_of: time off the stored grid");
    return i;
}

Vector sample_gaussian(const Vector& mean, const Matrix& cov, Rng& rng) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    Vector z(mean.size());
    for (int i = 0; i < z.size(); ++i) z[i] = rng.normal();
    const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return mean + es.eigenvectors() * root.asDiagonal() * z;
}

}  // namespace driftplan

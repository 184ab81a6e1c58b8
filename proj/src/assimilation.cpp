#include "driftplan/assimilation.hpp"

#include <cmath>
#include <string>

#include "driftplan/errors.hpp"

namespace driftplan {

namespace {

constexpr double kMinSigmaX = 1e-6;

void floor_spd(Matrix& m, DaDiagnostics* diag) {
    m = 0.5 * (m + m.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const Vector& w = es.eigenvalues();
    if (diag) {
        diag->min_pre_floor_eigenvalue = std::min(diag->min_pre_floor_eigenvalue, w.minCoeff());
        if (w.minCoeff() < -1e-10 * std::max(m.trace(), 0.0))
            ++diag->negative_eigenvalue_excursions;
    }
    if (w.minCoeff() >= 0.0) return;
    m = es.eigenvectors() * w.cwiseMax(0.0).asDiagonal() * es.eigenvectors().transpose();
}

// Regularized inverse through the eigendecomposition, floor rel_floor*trace.
// A zero matrix inverts to zero (the degenerate noiseless limit).
Matrix regularized_inverse(const Matrix& m, double rel_floor) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const double fl = rel_floor * std::max(m.trace(), 0.0);
    Vector inv = es.eigenvalues();
    for (int i = 0; i < inv.size(); ++i)
        inv[i] = fl > 0.0 ? 1.0 / std::max(inv[i], fl) : 0.0;
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

void check_finite(const Vector& mu, const Matrix& r, double t, const char* who) {
    if (!mu.allFinite() || !r.allFinite())
        throw NumericalFailure(std::string(who) + " diverged at t=" + std::to_string(t));
}

}  // namespace

Matrix observation_matrix(const std::vector<Vec2>& positions, const ModeSet& mode_set,
                          const EigvecTable& eigenvectors) {
    const PairBasis basis(mode_set, eigenvectors);
    Matrix a = Matrix::Zero(2 * static_cast<int>(positions.size()), basis.aug_dim());
    for (int l = 0; l < static_cast<int>(positions.size()); ++l)
        basis.fill_obs_rows(positions[l], a, 2 * l);
    return a;
}

AugmentedDynamics AugmentedDynamics::from(const FlowParams& params, const ModeSet& mode_set) {
    const int dim = mode_set.aug_dim();
    AugmentedDynamics dyn;
    dyn.lambda = Matrix::Zero(dim, dim);
    dyn.forcing = Vector::Zero(dim);
    dyn.noise_diag = Vector::Zero(dim);
    for (int p = 0; p < mode_set.pair_count(); ++p) {
        const int rep = mode_set.representatives[p];
        dyn.lambda(2 * p, 2 * p) = -params.d[rep];
        dyn.lambda(2 * p, 2 * p + 1) = -params.omega[rep];
        dyn.lambda(2 * p + 1, 2 * p) = params.omega[rep];
        dyn.lambda(2 * p + 1, 2 * p + 1) = -params.d[rep];
        dyn.forcing[2 * p] = params.f[rep].real();
        dyn.forcing[2 * p + 1] = params.f[rep].imag();
        const double q = params.sigma[rep] * params.sigma[rep] / 2.0;
        dyn.noise_diag[2 * p] = q;
        dyn.noise_diag[2 * p + 1] = q;
    }
    return dyn;
}

GaussianPosterior filter(const TrajectorySet& obs, const FlowParams& params,
                         const ModeSet& mode_set, const GaussianPosterior& init,
                         DaDiagnostics* diag) {
    if (params.sigma_x < kMinSigmaX)
        throw InvalidArgument("filter: sigma_x below 1e-6 is unsupported (singular update)");
    const int dim = mode_set.aug_dim();
    if (init.n_times() < 1 || init.means.back().size() != dim)
        throw InvalidArgument("filter: init dimension does not match the mode set");
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(init.covs.back());
        if (es.eigenvalues().minCoeff() < -1e-10 * std::max(init.covs.back().trace(), 0.0))
            throw InvalidArgument("filter: init covariance is not PSD");
    }
    const int n = obs.n_times();
    if (n < 1) throw InvalidArgument("filter: empty observation set");
    const double dt = obs.dt;

    const AugmentedDynamics dyn = AugmentedDynamics::from(params, mode_set);
    const PairBasis basis(mode_set, params.r);
    const int nl = obs.n_drifters();
    const double inv_sx2 = 1.0 / (params.sigma_x * params.sigma_x);

    GaussianPosterior out;
    out.t0 = obs.t0;
    out.dt = dt;
    out.means.resize(n);
    out.covs.resize(n);
    out.means[0] = init.means.back();
    out.covs[0] = init.covs.back();

    Matrix a(2 * nl, dim);
    Vector dx(2 * nl);
    for (int i = 0; i + 1 < n; ++i) {
        const Vector& mu = out.means[i];
        const Matrix& r = out.covs[i];
        for (int l = 0; l < nl; ++l) {
            basis.fill_obs_rows(obs.position(i, l), a, 2 * l);
            const Vec2 d = torus_diff(obs.position(i + 1, l), obs.position(i, l));
            dx[2 * l] = d[0];
            dx[2 * l + 1] = d[1];
        }
        const Matrix ra = r * a.transpose();                      // dim x 2L
        const Vector innovation = dx - dt * (a * mu);
        out.means[i + 1] = mu + dt * (dyn.forcing + dyn.lambda * mu) + inv_sx2 * (ra * innovation);
        Matrix next = r + dt * (dyn.lambda * r + r * dyn.lambda.transpose());
        next.diagonal() += dt * dyn.noise_diag;
        next.noalias() -= (dt * inv_sx2) * (ra * ra.transpose());
        floor_spd(next, diag);
        out.covs[i + 1] = std::move(next);
        if (diag) ++diag->steps;
        check_finite(out.means[i + 1], out.covs[i + 1], out.time_at(i + 1), "filter");
    }
    return out;
}

GaussianPosterior smoother(const TrajectorySet& obs, const FlowParams& params,
                           const ModeSet& mode_set, const GaussianPosterior& filter_out,
                           DaDiagnostics* diag) {
    const int n = filter_out.n_times();
    if (n < 1) throw InvalidArgument("smoother: empty filter output");
    if (obs.n_times() != n || std::abs(obs.t0 - filter_out.t0) > 1e-9)
        throw InvalidArgument("smoother: filter output does not cover the observation span");
    const double dt = filter_out.dt;
    const AugmentedDynamics dyn = AugmentedDynamics::from(params, mode_set);

    GaussianPosterior out;
    out.t0 = filter_out.t0;
    out.dt = dt;
    out.means.resize(n);
    out.covs.resize(n);
    out.means[n - 1] = filter_out.means[n - 1];
    out.covs[n - 1] = filter_out.covs[n - 1];

    for (int i = n - 1; i > 0; --i) {
        const Matrix rinv = regularized_inverse(filter_out.covs[i], 1e-10);
        const Matrix g = dyn.noise_diag.asDiagonal() * rinv;      // Sigma Sigma^T R^-1
        const Vector& ms = out.means[i];
        const Matrix& ss = out.covs[i];
        out.means[i - 1] = ms + dt * (-dyn.forcing - dyn.lambda * ms +
                                      g * (filter_out.means[i] - ms));
        Matrix next = ss - dt * ((dyn.lambda + g) * ss + ss * (dyn.lambda + g).transpose());
        next.diagonal() += dt * dyn.noise_diag;
        floor_spd(next, diag);
        out.covs[i - 1] = std::move(next);
        if (diag) ++diag->steps;
        check_finite(out.means[i - 1], out.covs[i - 1], out.time_at(i - 1), "smoother");
    }
    return out;
}

std::vector<FlowRealization> backward_sample(const GaussianPosterior& smoother_out,
                                             const GaussianPosterior& filter_out,
                                             const FlowParams& params, const ModeSet& mode_set,
                                             int n_samples, std::uint64_t seed, double t_lo) {
    const int n = smoother_out.n_times();
    if (filter_out.n_times() != n || std::abs(filter_out.t0 - smoother_out.t0) > 1e-9 ||
        std::abs(filter_out.dt - smoother_out.dt) > 1e-12)
        throw InvalidArgument("backward_sample: smoother and filter grids differ");
    if (n_samples < 0) throw InvalidArgument("backward_sample: n_samples must be >= 0");
    const double dt = smoother_out.dt;
    const int dim = smoother_out.dim();
    int i_lo = 0;
    if (t_lo > smoother_out.t0) i_lo = smoother_out.index_of(t_lo);
    const int n_out = n - i_lo;

    const AugmentedDynamics dyn = AugmentedDynamics::from(params, mode_set);
    const Vector noise_scale = (dt * dyn.noise_diag.array()).sqrt().matrix();

    // terminal draws
    Matrix states(dim, n_samples);
    std::vector<Rng> rngs;
    rngs.reserve(n_samples);
    for (int j = 0; j < n_samples; ++j)
        rngs.emplace_back(derive_seed(seed, "sample", static_cast<std::uint64_t>(j)));
    for (int j = 0; j < n_samples; ++j)
        states.col(j) = sample_gaussian(smoother_out.means[n - 1], smoother_out.covs[n - 1], rngs[j]);

    std::vector<FlowRealization> out(n_samples);
    for (int j = 0; j < n_samples; ++j) {
        out[j].t0 = smoother_out.time_at(i_lo);
        out[j].dt = dt;
        out[j].coeffs.resize(n_out, mode_set.mode_count());
    }
    auto store = [&](int row) {
        for (int j = 0; j < n_samples; ++j) {
            const ComplexVector c = unaugment(mode_set, states.col(j));
            out[j].coeffs.row(row - i_lo) = c.transpose();
        }
    };
    store(n - 1);

    Vector xi(dim);
    for (int i = n - 1; i > i_lo; --i) {
        const Matrix rinv = regularized_inverse(filter_out.covs[i], 1e-10);
        const Matrix drift = dyn.lambda + dyn.noise_diag.asDiagonal() * rinv;
        const Vector dmu = smoother_out.means[i - 1] - smoother_out.means[i];
        for (int j = 0; j < n_samples; ++j) {
            const Vector dev = states.col(j) - smoother_out.means[i];
            for (int c = 0; c < dim; ++c) xi[c] = rngs[j].normal();
            states.col(j) += dmu - dt * (drift * dev) + noise_scale.cwiseProduct(xi);
        }
        store(i - 1);
    }
    return out;
}

}  // namespace driftplan

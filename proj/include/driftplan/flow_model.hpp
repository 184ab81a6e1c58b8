#pragma once

#include <cstdint>
#include <vector>

#include "driftplan/posterior.hpp"
#include "driftplan/types.hpp"

namespace driftplan {

/// Wavenumber lattice [-kmax,kmax]^2 without (0,0), ordered lexicographically
/// on (k1,k2), partitioned into conjugate pairs {k,-k}. The canonical
/// representative of a pair is the member with k1 > 0, or k1 == 0 and k2 > 0.
struct ModeSet {
    int kmax = 0;
    std::vector<Eigen::Vector2i> modes;
    std::vector<int> representatives;  // mode indices, one per pair, lexicographic
    std::vector<int> conjugate_of;     // index of -k for every mode
    std::vector<int> pair_of;          // pair slot shared by k and -k

    int mode_count() const { return static_cast<int>(modes.size()); }
    int pair_count() const { return static_cast<int>(representatives.size()); }
    /// Real dimension of the augmented state: (re,im) per independent pair.
    int aug_dim() const { return 2 * pair_count(); }
    int index_of(int k1, int k2) const;
};

ModeSet build_mode_set(int kmax);

/// Unit incompressible eigenvector per mode, r_k = i*(-k2,k1)/|k|.
using EigvecTable = std::vector<CVec2>;
EigvecTable default_eigenvectors(const ModeSet& mode_set);

/// Per-mode coefficients of the stochastic spectral velocity model, plus the
/// drifter observation noise level. Conjugate modes carry the mirrored
/// parameter values so the physical field stays real.
struct FlowParams {
    Vector d;         // damping, > 0
    Vector omega;     // phase, omega(-k) = -omega(k)
    ComplexVector f;  // deterministic forcing, f(-k) = conj(f(k))
    Vector sigma;     // total complex noise intensity per mode, >= 0
    double sigma_x = 0.0;
    EigvecTable r;

    /// Same (d, omega, f, sigma) on every pair representative; conjugates
    /// filled by the symmetry rules (so a nonzero omega flips sign on -k).
    static FlowParams uniform(const ModeSet& mode_set, double d, double omega, Complex f,
                              double sigma, double sigma_x);

    /// Throws InvalidArgument on any violated symmetry or eigenvector rule.
    void validate(const ModeSet& mode_set) const;
};

struct TimeSpan {
    double t0 = 0.0;
    double t1 = 0.0;
};

/// One sample path of the spectral coefficients on a uniform time grid.
/// Row i holds all modes at time t0 + i*dt; conjugate symmetry holds at
/// every stored time.
struct FlowRealization {
    double t0 = 0.0;
    double dt = 0.0;
    ComplexMatrix coeffs;  // n_times x n_modes

    int n_times() const { return static_cast<int>(coeffs.rows()); }
    double time_at(int i) const { return t0 + i * dt; }
    double t_end() const { return t0 + (n_times() - 1) * dt; }
    /// Left-knot index for zero-order-hold lookup, clamped to the grid.
    int knot_index(double t) const;
};

/// Precomputed pair tables: evaluates the physical velocity from the
/// real-augmented state and assembles observation rows. The two complex
/// exponentials per call are expanded into per-axis power tables, so the
/// cost is O(pairs) with no trig inside the pair loop.
class PairBasis {
public:
    PairBasis(const ModeSet& mode_set, const EigvecTable& eigenvectors);

    int pair_count() const { return static_cast<int>(k_.size()); }
    int aug_dim() const { return 2 * pair_count(); }

    /// u(x) = sum over pairs of 2 Re(u_hat e^{ik.x} r_k).
    Vec2 velocity(Eigen::Ref<const Vector> aug, const Vec2& x) const;

    /// Fills rows (2l, 2l+1) of A for a drifter at x: the real-linear map
    /// from the augmented state to u(x).
    void fill_obs_rows(const Vec2& x, Matrix& a, int row) const;

private:
    int kmax_;
    std::vector<Eigen::Vector2i> k_;  // pair representatives
    std::vector<CVec2> r_;
};

/// Stacks the (re,im) components of every pair representative. Throws
/// InvalidArgument when the input violates conjugate symmetry beyond tol.
Vector augment(const ModeSet& mode_set, const ComplexVector& per_mode, double tol = 1e-9);

/// Inverse of augment; conjugate modes are filled exactly.
ComplexVector unaugment(const ModeSet& mode_set, const Vector& aug);

/// Augmented state per stored time, one column per time knot (symmetry holds
/// by construction, so no validation pass).
Matrix augmented_states(const FlowRealization& flow, const ModeSet& mode_set);

/// Physical velocity at x from per-mode coefficients. Validates conjugate
/// symmetry through the imaginary residual of the full summation.
Vec2 velocity_at(const ComplexVector& coeffs, const EigvecTable& eigenvectors,
                 const ModeSet& mode_set, const Vec2& x);

/// Euler-Maruyama path of the per-pair OU dynamics; conjugate modes filled by
/// symmetry. The complex noise splits its intensity sigma_k^2 equally between
/// real and imaginary increments. store_stride > 1 keeps every stride-th step
/// (the path itself is unchanged).
FlowRealization simulate_flow(const FlowParams& params, const ModeSet& mode_set,
                              const ComplexVector& init, TimeSpan span, double dt,
                              std::uint64_t seed, int store_stride = 1);

/// Statistical equilibrium of the coefficient dynamics in the augmented
/// convention: mean f/(d - i*omega) and variance sigma^2/(4d) per real
/// component, no cross-covariance.
GaussianPosterior equilibrium_distribution(const FlowParams& params, const ModeSet& mode_set);

/// Draws a conjugate-symmetric per-mode coefficient vector from a Gaussian in
/// the augmented convention (PSD covariance; eigen-floored at zero).
ComplexVector sample_coefficients(const Vector& mean, const Matrix& cov, const ModeSet& mode_set,
                                  Rng& rng);

}  // namespace driftplan

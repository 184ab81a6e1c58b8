#include "driftplan/flow_model.hpp"

#include <array>
#include <cmath>

#include "driftplan/errors.hpp"

namespace driftplan {

namespace {

constexpr int kMaxSupportedKmax = 15;

bool is_representative(int k1, int k2) { return k1 > 0 || (k1 == 0 && k2 > 0); }

}  // namespace

int ModeSet::index_of(int k1, int k2) const {
    const int side = 2 * kmax + 1;
    if (k1 < -kmax || k1 > kmax || k2 < -kmax || k2 > kmax || (k1 == 0 && k2 == 0)) return -1;
    int idx = (k1 + kmax) * side + (k2 + kmax);
    // modes skip (0,0), which sits at linear slot kmax*side + kmax
    const int zero_slot = kmax * side + kmax;
    return idx > zero_slot ? idx - 1 : idx;
}

ModeSet build_mode_set(int kmax) {
    if (kmax < 1) throw InvalidArgument("build_mode_set: kmax must be >= 1");
    if (kmax > kMaxSupportedKmax) throw InvalidArgument("build_mode_set: kmax too large");
    ModeSet ms;
    ms.kmax = kmax;
    for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2)
            if (k1 != 0 || k2 != 0) ms.modes.push_back({k1, k2});
    const int n = ms.mode_count();
    ms.conjugate_of.resize(n);
    ms.pair_of.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        const auto& k = ms.modes[i];
        ms.conjugate_of[i] = ms.index_of(-k[0], -k[1]);
        if (is_representative(k[0], k[1])) ms.representatives.push_back(i);
    }
    for (int p = 0; p < ms.pair_count(); ++p) {
        const int rep = ms.representatives[p];
        ms.pair_of[rep] = p;
        ms.pair_of[ms.conjugate_of[rep]] = p;
    }
    return ms;
}

EigvecTable default_eigenvectors(const ModeSet& mode_set) {
    EigvecTable table(mode_set.mode_count());
    for (int i = 0; i < mode_set.mode_count(); ++i) {
        const auto& k = mode_set.modes[i];
        const double norm = std::hypot(double(k[0]), double(k[1]));
        table[i] = CVec2(Complex(0.0, -k[1] / norm), Complex(0.0, k[0] / norm));
    }
    return table;
}

FlowParams FlowParams::uniform(const ModeSet& mode_set, double d, double omega, Complex f,
                               double sigma, double sigma_x) {
    const int n = mode_set.mode_count();
    FlowParams p;
    p.d = Vector::Constant(n, d);
    p.omega = Vector::Zero(n);
    p.f = ComplexVector::Zero(n);
    p.sigma = Vector::Constant(n, sigma);
    p.sigma_x = sigma_x;
    p.r = default_eigenvectors(mode_set);
    for (int rep : mode_set.representatives) {
        const int conj = mode_set.conjugate_of[rep];
        p.omega[rep] = omega;
        p.omega[conj] = -omega;
        p.f[rep] = f;
        p.f[conj] = std::conj(f);
    }
    p.validate(mode_set);
    return p;
}

void FlowParams::validate(const ModeSet& mode_set) const {
    const int n = mode_set.mode_count();
    if (d.size() != n || omega.size() != n || f.size() != n || sigma.size() != n ||
        static_cast<int>(r.size()) != n)
        throw InvalidArgument("FlowParams: parameter vectors must match the mode count");
    const double tol = 1e-12;
    for (int i = 0; i < n; ++i) {
        if (!(d[i] > 0.0)) throw InvalidArgument("FlowParams: damping must be positive");
        if (sigma[i] < 0.0) throw InvalidArgument("FlowParams: noise level must be >= 0");
        const int j = mode_set.conjugate_of[i];
        if (std::abs(d[i] - d[j]) > tol || std::abs(sigma[i] - sigma[j]) > tol ||
            std::abs(omega[i] + omega[j]) > tol || std::abs(f[i] - std::conj(f[j])) > tol)
            throw InvalidArgument("FlowParams: conjugate-pair parameter symmetry violated");
        const auto& k = mode_set.modes[i];
        const Complex dot = double(k[0]) * r[i][0] + double(k[1]) * r[i][1];
        if (std::abs(dot) > 1e-12) throw InvalidArgument("FlowParams: eigenvector not incompressible");
        if (std::abs(r[i].norm() - 1.0) > 1e-12)
            throw InvalidArgument("FlowParams: eigenvector not unit norm");
        if ((r[i] - CVec2(std::conj(r[j][0]), std::conj(r[j][1]))).norm() > 1e-12)
            throw InvalidArgument("FlowParams: eigenvector conjugate symmetry violated");
    }
    if (sigma_x < 0.0) throw InvalidArgument("FlowParams: sigma_x must be >= 0");
}

int FlowRealization::knot_index(double t) const {
    int i = static_cast<int>(std::floor((t - t0) / dt + 1e-9));
    if (i < 0) i = 0;
    if (i > n_times() - 1) i = n_times() - 1;
    return i;
}

PairBasis::PairBasis(const ModeSet& mode_set, const EigvecTable& eigenvectors) {
    kmax_ = mode_set.kmax;
    k_.reserve(mode_set.pair_count());
    r_.reserve(mode_set.pair_count());
    for (int rep : mode_set.representatives) {
        k_.push_back(mode_set.modes[rep]);
        r_.push_back(eigenvectors[rep]);
    }
}

namespace {

// e^{i m c} for m in [-kmax, kmax], built from one trig pair.
inline void phase_powers(double c, int kmax, std::array<Complex, 2 * kMaxSupportedKmax + 1>& out) {
    const Complex e(std::cos(c), std::sin(c));
    Complex* mid = out.data() + kmax;
    mid[0] = Complex(1.0, 0.0);
    for (int m = 1; m <= kmax; ++m) {
        mid[m] = mid[m - 1] * e;
        mid[-m] = std::conj(mid[m]);
    }
}

}  // namespace

Vec2 PairBasis::velocity(Eigen::Ref<const Vector> aug, const Vec2& x) const {
    std::array<Complex, 2 * kMaxSupportedKmax + 1> ex, ey;
    phase_powers(x[0], kmax_, ex);
    phase_powers(x[1], kmax_, ey);
    const Complex* exm = ex.data() + kmax_;
    const Complex* eym = ey.data() + kmax_;
    double u = 0.0, v = 0.0;
    const int np = pair_count();
    for (int p = 0; p < np; ++p) {
        const Complex ph = exm[k_[p][0]] * eym[k_[p][1]];
        const Complex cu = Complex(aug[2 * p], aug[2 * p + 1]) * ph;
        // 2 Re(cu * r): r is stored componentwise
        u += 2.0 * (cu.real() * r_[p][0].real() - cu.imag() * r_[p][0].imag());
        v += 2.0 * (cu.real() * r_[p][1].real() - cu.imag() * r_[p][1].imag());
    }
    return {u, v};
}

void PairBasis::fill_obs_rows(const Vec2& x, Matrix& a, int row) const {
    std::array<Complex, 2 * kMaxSupportedKmax + 1> ex, ey;
    phase_powers(x[0], kmax_, ex);
    phase_powers(x[1], kmax_, ey);
    const Complex* exm = ex.data() + kmax_;
    const Complex* eym = ey.data() + kmax_;
    const int np = pair_count();
    for (int p = 0; p < np; ++p) {
        const Complex ph = exm[k_[p][0]] * eym[k_[p][1]];
        const Complex gu = ph * r_[p][0];
        const Complex gv = ph * r_[p][1];
        a(row, 2 * p) = 2.0 * gu.real();
        a(row, 2 * p + 1) = -2.0 * gu.imag();
        a(row + 1, 2 * p) = 2.0 * gv.real();
        a(row + 1, 2 * p + 1) = -2.0 * gv.imag();
    }
}

Vector augment(const ModeSet& mode_set, const ComplexVector& per_mode, double tol) {
    if (per_mode.size() != mode_set.mode_count())
        throw InvalidArgument("augment: coefficient count does not match the mode set");
    double scale = 1.0;
    for (int i = 0; i < per_mode.size(); ++i) scale = std::max(scale, std::abs(per_mode[i]));
    for (int i = 0; i < per_mode.size(); ++i) {
        const Complex c = std::conj(per_mode[mode_set.conjugate_of[i]]);
        if (std::abs(per_mode[i] - c) > tol * scale)
            throw InvalidArgument("augment: conjugate symmetry violated");
    }
    Vector aug(mode_set.aug_dim());
    for (int p = 0; p < mode_set.pair_count(); ++p) {
        const Complex c = per_mode[mode_set.representatives[p]];
        aug[2 * p] = c.real();
        aug[2 * p + 1] = c.imag();
    }
    return aug;
}

Matrix augmented_states(const FlowRealization& flow, const ModeSet& mode_set) {
    Matrix out(mode_set.aug_dim(), flow.n_times());
    for (int i = 0; i < flow.n_times(); ++i) {
        for (int p = 0; p < mode_set.pair_count(); ++p) {
            const Complex c = flow.coeffs(i, mode_set.representatives[p]);
            out(2 * p, i) = c.real();
            out(2 * p + 1, i) = c.imag();
        }
    }
    return out;
}

ComplexVector unaugment(const ModeSet& mode_set, const Vector& aug) {
    if (aug.size() != mode_set.aug_dim())
        throw InvalidArgument("unaugment: dimension does not match the mode set");
    ComplexVector out(mode_set.mode_count());
    for (int p = 0; p < mode_set.pair_count(); ++p) {
        const int rep = mode_set.representatives[p];
        out[rep] = Complex(aug[2 * p], aug[2 * p + 1]);
        out[mode_set.conjugate_of[rep]] = std::conj(out[rep]);
    }
    return out;
}

Vec2 velocity_at(const ComplexVector& coeffs, const EigvecTable& eigenvectors,
                 const ModeSet& mode_set, const Vec2& x) {
    if (coeffs.size() != mode_set.mode_count())
        throw InvalidArgument("velocity_at: coefficient count does not match the mode set");
    CVec2 acc = CVec2::Zero();
    double scale = 0.0;
    for (int i = 0; i < mode_set.mode_count(); ++i) {
        const auto& k = mode_set.modes[i];
        const double arg = k[0] * x[0] + k[1] * x[1];
        const Complex ph(std::cos(arg), std::sin(arg));
        acc += coeffs[i] * ph * eigenvectors[i];
        scale += std::abs(coeffs[i]);
    }
    const double imag_resid = std::max(std::abs(acc[0].imag()), std::abs(acc[1].imag()));
    if (imag_resid > 1e-10 * std::max(1.0, scale))
        throw InconsistentState("velocity_at: nonreal summation, conjugate symmetry violated");
    return {acc[0].real(), acc[1].real()};
}

FlowRealization simulate_flow(const FlowParams& params, const ModeSet& mode_set,
                              const ComplexVector& init, TimeSpan span, double dt,
                              std::uint64_t seed, int store_stride) {
    if (!(dt > 0.0)) throw InvalidArgument("simulate_flow: dt must be positive");
    if (span.t1 < span.t0) throw InvalidArgument("simulate_flow: t1 must be >= t0");
    if (store_stride < 1) throw InvalidArgument("simulate_flow: store_stride must be >= 1");
    const int n_steps = static_cast<int>(std::llround((span.t1 - span.t0) / dt));
    if (std::abs(span.t0 + n_steps * dt - span.t1) > 1e-9 * std::max(1.0, std::abs(span.t1)))
        throw InvalidArgument("simulate_flow: span is not a whole number of steps");
    Vector aug = augment(mode_set, init);  // validates conjugate symmetry

    const int np = mode_set.pair_count();
    Vector drift_re(np), drift_im(np), noise(np);
    ComplexVector force(np);
    for (int p = 0; p < np; ++p) {
        const int rep = mode_set.representatives[p];
        drift_re[p] = -params.d[rep];
        drift_im[p] = params.omega[rep];
        force[p] = params.f[rep];
        noise[p] = params.sigma[rep] * std::sqrt(dt / 2.0);
    }

    const int n_stored = n_steps / store_stride + 1;
    FlowRealization out;
    out.t0 = span.t0;
    out.dt = dt * store_stride;
    out.coeffs.resize(n_stored, mode_set.mode_count());

    Rng rng(seed);
    const double sdt = dt;
    auto store_row = [&](int row, const Vector& a) {
        for (int p = 0; p < np; ++p) {
            const int rep = mode_set.representatives[p];
            const Complex c(a[2 * p], a[2 * p + 1]);
            out.coeffs(row, rep) = c;
            out.coeffs(row, mode_set.conjugate_of[rep]) = std::conj(c);
        }
    };
    store_row(0, aug);
    int stored = 1;
    for (int s = 1; s <= n_steps; ++s) {
        for (int p = 0; p < np; ++p) {
            const double a = aug[2 * p];
            const double b = aug[2 * p + 1];
            const double da = drift_re[p] * a - drift_im[p] * b + force[p].real();
            const double db = drift_im[p] * a + drift_re[p] * b + force[p].imag();
            aug[2 * p] = a + sdt * da + noise[p] * rng.normal();
            aug[2 * p + 1] = b + sdt * db + noise[p] * rng.normal();
        }
        if (s % store_stride == 0) store_row(stored++, aug);
    }
    return out;
}

GaussianPosterior equilibrium_distribution(const FlowParams& params, const ModeSet& mode_set) {
    for (int i = 0; i < mode_set.mode_count(); ++i)
        if (!(params.d[i] > 0.0))
            throw InvalidArgument("equilibrium_distribution: damping must be positive");
    const int dim = mode_set.aug_dim();
    GaussianPosterior eq;
    eq.t0 = 0.0;
    eq.dt = 0.0;
    eq.means.resize(1, Vector::Zero(dim));
    eq.covs.resize(1, Matrix::Zero(dim, dim));
    for (int p = 0; p < mode_set.pair_count(); ++p) {
        const int rep = mode_set.representatives[p];
        const Complex mean = params.f[rep] / Complex(params.d[rep], -params.omega[rep]);
        eq.means[0][2 * p] = mean.real();
        eq.means[0][2 * p + 1] = mean.imag();
        const double var = params.sigma[rep] * params.sigma[rep] / (4.0 * params.d[rep]);
        eq.covs[0](2 * p, 2 * p) = var;
        eq.covs[0](2 * p + 1, 2 * p + 1) = var;
    }
    return eq;
}

ComplexVector sample_coefficients(const Vector& mean, const Matrix& cov, const ModeSet& mode_set,
                                  Rng& rng) {
    return unaugment(mode_set, sample_gaussian(mean, cov, rng));
}

}  // namespace driftplan

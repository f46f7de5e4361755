#include "fdwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdwave {

namespace {

CoeffKind theta_kind_for(SchemeVariant v) {
    switch (v) {
    case SchemeVariant::SchemeI:
    case SchemeVariant::SchemeIII1:
        return CoeffKind::ThetaTrap;
    case SchemeVariant::NewtonGregory:
        return CoeffKind::ThetaNG;
    case SchemeVariant::SchemeII:
    case SchemeVariant::SchemeIII2:
        return CoeffKind::ThetaModNG;
    }
    throw std::invalid_argument("unknown scheme variant");
}

std::vector<double> theta_prefix(SchemeVariant v, FractionalOrder beta, int nT) {
    const double b = beta.beta;
    switch (theta_kind_for(v)) {
    case CoeffKind::ThetaTrap:
        return theta_coeffs(CoeffKind::ThetaTrap, beta, nT).coeffs;
    case CoeffKind::ThetaNG:
        return {1.0 - b / 2.0, b / 2.0};
    default:
        return {1.0 - b / 4.0, 0.0, b / 4.0};
    }
}

} // namespace

std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
    const int m = static_cast<int>(sys.diag.size());
    double maxd = 0.0;
    for (double d : sys.diag)
        if (std::isfinite(d)) maxd = std::max(maxd, std::abs(d));
    if (maxd == 0.0) maxd = 1.0;
    const double tol = 1e-14 * maxd;

    std::vector<double> c(static_cast<size_t>(m)), x(static_cast<size_t>(m));
    double piv = sys.diag[0];
    if (std::abs(piv) < tol) throw SingularSystemError("thomas_solve: zero pivot at row 0");
    c[0] = sys.super[0] / piv;
    x[0] = sys.rhs[0] / piv;
    for (int i = 1; i < m; ++i) {
        piv = sys.diag[static_cast<size_t>(i)] - sys.sub[static_cast<size_t>(i)] * c[static_cast<size_t>(i) - 1];
        if (std::abs(piv) < tol) throw SingularSystemError("thomas_solve: zero pivot");
        c[static_cast<size_t>(i)] = sys.super[static_cast<size_t>(i)] / piv;
        x[static_cast<size_t>(i)] = (sys.rhs[static_cast<size_t>(i)] - sys.sub[static_cast<size_t>(i)] * x[static_cast<size_t>(i) - 1]) / piv;
    }
    for (int i = m - 2; i >= 0; --i)
        x[static_cast<size_t>(i)] -= c[static_cast<size_t>(i)] * x[static_cast<size_t>(i) + 1];
    return x;
}

SolutionHistory precompute_tables(const ProblemSpec& p, const Discretization& d, SchemeVariant v,
                                  const MarchOptions& opts) {
    FractionalOrder order(p.beta);
    if (!(p.mu > 0.0)) throw std::invalid_argument("mu must be positive");
    if (p.K1 < 0.0 || p.K2 < 0.0) throw std::invalid_argument("K1, K2 must be nonnegative");
    if (!(p.b > p.a) || !(p.T > 0.0)) throw std::invalid_argument("invalid domain or horizon");

    SolutionHistory H;
    H.beta = p.beta;
    H.mu = p.mu;
    H.K1 = p.K1;
    H.K2 = p.K2;
    H.a = p.a;
    H.b = p.b;
    H.T = p.T;
    H.variant = v;
    H.N = d.N;
    H.nT = d.nT;
    H.h = d.h(p);
    H.tau = d.tau(p);
    H.tau_beta = std::pow(H.tau, p.beta);

    const int N = H.N, nT = H.nT;
    const size_t cols = static_cast<size_t>(N) + 1;

    // boundary/initial compatibility
    const double ca = p.phi0(p.a) - p.Ua(0.0);
    const double cb = p.phi0(p.b) - p.Ub(0.0);
    const double scale = std::max({1.0, std::abs(p.phi0(p.a)), std::abs(p.phi0(p.b))});
    if (std::abs(ca) > 1e-12 * scale || std::abs(cb) > 1e-12 * scale)
        throw std::invalid_argument("initial value is incompatible with the boundary data");

    H.phi0s.resize(cols);
    H.psi0s.resize(cols);
    for (int j = 0; j <= N; ++j) {
        H.phi0s[static_cast<size_t>(j)] = p.phi0(H.x(j));
        H.psi0s[static_cast<size_t>(j)] = p.psi0(H.x(j));
    }

    H.t.resize(static_cast<size_t>(nT) + 1);
    H.P.resize(static_cast<size_t>(nT) + 1);
    H.Q.resize(static_cast<size_t>(nT) + 1);
    const double ig1 = 1.0 / gamma_fn(p.beta + 1.0);
    const double ig2 = 1.0 / gamma_fn(p.beta + 2.0);
    for (int k = 0; k <= nT; ++k) {
        const double tk = k * H.tau;
        H.t[static_cast<size_t>(k)] = tk;
        const double tb = std::pow(tk, p.beta);
        H.P[static_cast<size_t>(k)] = tb * ig1;
        H.Q[static_cast<size_t>(k)] = tb * tk * ig2;
    }

    H.alpha = alpha_coeffs(order, nT).coeffs;
    H.theta = theta_prefix(v, order, nT);

    // levels: seed row 0 with phi0 and the boundary columns with the data
    H.levels.assign((static_cast<size_t>(nT) + 1) * cols, 0.0);
    for (int j = 0; j <= N; ++j) H.u(0, j) = H.phi0s[static_cast<size_t>(j)];
    for (int k = 1; k <= nT; ++k) {
        H.u(k, 0) = p.Ua(H.t[static_cast<size_t>(k)]);
        H.u(k, N) = p.Ub(H.t[static_cast<size_t>(k)]);
    }
    H.levels_filled = 0;
    H.data_sup = 1.0;
    for (int j = 0; j <= N; ++j) H.data_sup = std::max(H.data_sup, std::abs(H.u(0, j)));
    for (int k = 1; k <= nT; ++k)
        H.data_sup = std::max({H.data_sup, std::abs(H.u(k, 0)), std::abs(H.u(k, N))});

    // forcing integrals, one quadrature column per grid point
    H.F.assign((static_cast<size_t>(nT) + 1) * cols, 0.0);
    ForcingQuadrature quad(order, nT, H.tau);
#pragma omp parallel for schedule(static) if (opts.parallel)
    for (int j = 0; j <= N; ++j) {
        std::vector<double> samples(static_cast<size_t>(nT) + 1);
        const double xj = H.x(j);
        for (int k = 0; k <= nT; ++k) samples[static_cast<size_t>(k)] = p.f(xj, H.t[static_cast<size_t>(k)]);
        const auto col = quad.apply(samples);
        for (int k = 0; k <= nT; ++k) H.F[static_cast<size_t>(k) * cols + static_cast<size_t>(j)] = col[static_cast<size_t>(k)];
    }

    return H;
}

namespace {

// [mu d_xx - K2 d_x - K1] applied to a sampled row at interior j, second-order
// central differences. Shared by every path so equal inputs cancel exactly.
inline double apply_op(const double* row, int j, double mu, double K1, double K2, double inv_h2,
                       double inv_2h) {
    const double d2 = (row[j + 1] - 2.0 * row[j] + row[j - 1]) * inv_h2;
    const double d1 = (row[j + 1] - row[j - 1]) * inv_2h;
    return mu * d2 - K2 * d1 - K1 * row[j];
}

struct Bands {
    std::vector<double> sub, diag, super;
    double fold_left, fold_right; // boundary contributions to rhs[0] / rhs[M-1]
};

Bands make_bands(const SolutionHistory& H) {
    const int M = H.N - 1;
    const double th0 = H.theta[0];
    const double cmu = H.mu * H.tau_beta * th0 / (H.h * H.h);
    const double cK2 = H.K2 * H.tau_beta * th0 / (2.0 * H.h);
    const double cK1 = H.K1 * H.tau_beta * th0;
    Bands b;
    b.sub.assign(static_cast<size_t>(M), -cmu - cK2);
    b.diag.assign(static_cast<size_t>(M), 1.0 + 2.0 * cmu + cK1);
    b.super.assign(static_cast<size_t>(M), -cmu + cK2);
    b.fold_left = cmu + cK2;
    b.fold_right = cmu - cK2;
    b.sub[0] = 0.0;
    b.super[static_cast<size_t>(M) - 1] = 0.0;
    if (H.K2 * H.h / 2.0 <= H.mu) {
        // strict diagonal dominance must hold in this regime
        const double off = std::abs(-cmu - cK2) + std::abs(-cmu + cK2);
        if (!(off < 1.0 + 2.0 * cmu + cK1))
            throw std::logic_error("tridiagonal system lost diagonal dominance");
    }
    return b;
}

} // namespace

TridiagonalSystem assemble_step(const SolutionHistory& H, int n, SchemeVariant v) {
    if (v != H.variant) throw std::invalid_argument("assemble_step: variant mismatch with history");
    if (n < 1 || n > H.nT || H.levels_filled < n - 1)
        throw std::invalid_argument("assemble_step: levels 0..n-1 must be filled");

    const int N = H.N, M = N - 1;
    const double inv_h2 = 1.0 / (H.h * H.h);
    const double inv_2h = 1.0 / (2.0 * H.h);
    const size_t cols = static_cast<size_t>(N) + 1;

    Bands bands = make_bands(H);
    TridiagonalSystem sys;
    sys.sub = std::move(bands.sub);
    sys.diag = std::move(bands.diag);
    sys.super = std::move(bands.super);
    sys.rhs.assign(static_cast<size_t>(M), 0.0);

    const double th0 = H.theta[0];
    for (int j = 1; j <= M; ++j) {
        double acc = 0.0;
        // alpha-convolved history of (u - phi), k < n
        for (int k = 0; k < n; ++k) {
            const double duk = H.u(k, j) - H.phi(j, k);
            acc -= H.alpha[static_cast<size_t>(n - k)] * duk;
        }
        acc += H.phi(j, n);
        // theta-convolved operator history, k < n, plus the known k = n part
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            const double w = H.theta_at(n - k);
            if (w == 0.0) continue;
            const double* row = &H.levels[static_cast<size_t>(k) * cols];
            const double opu = apply_op(row, j, H.mu, H.K1, H.K2, inv_h2, inv_2h);
            const double d2phi = (H.phi(j + 1, k) - 2.0 * H.phi(j, k) + H.phi(j - 1, k)) * inv_h2;
            const double d1phi = (H.phi(j + 1, k) - H.phi(j - 1, k)) * inv_2h;
            s += w * (opu - (H.mu * d2phi - H.K2 * d1phi - H.K1 * H.phi(j, k)));
        }
        {
            const double d2phi = (H.phi(j + 1, n) - 2.0 * H.phi(j, n) + H.phi(j - 1, n)) * inv_h2;
            const double d1phi = (H.phi(j + 1, n) - H.phi(j - 1, n)) * inv_2h;
            s -= th0 * (H.mu * d2phi - H.K2 * d1phi - H.K1 * H.phi(j, n));
        }
        acc += H.tau_beta * s;
        // alpha-convolved static fields, k <= n
        for (int k = 0; k <= n; ++k) {
            const double d2Phi = (H.Phi(j + 1, k) - 2.0 * H.Phi(j, k) + H.Phi(j - 1, k)) * inv_h2;
            const double d1Phi = (H.Phi(j + 1, k) - H.Phi(j - 1, k)) * inv_2h;
            const double stat = H.mu * d2Phi - H.K2 * d1Phi - H.K1 * H.Phi(j, k) + H.Fv(k, j);
            acc += H.alpha[static_cast<size_t>(n - k)] * stat;
        }
        sys.rhs[static_cast<size_t>(j) - 1] = acc;
    }
    sys.rhs[0] += bands.fold_left * H.u(n, 0);
    sys.rhs[static_cast<size_t>(M) - 1] += bands.fold_right * H.u(n, N);
    return sys;
}

SolutionHistory march(const ProblemSpec& p, const Discretization& d, SchemeVariant v,
                      const MarchOptions& opts) {
    SolutionHistory H = precompute_tables(p, d, v, opts);
    const int N = H.N, nT = H.nT, M = N - 1;
    const size_t cols = static_cast<size_t>(N) + 1;
    const size_t hist = static_cast<size_t>(nT) + 1;
    const double inv_h2 = 1.0 / (H.h * H.h);
    const double inv_2h = 1.0 / (2.0 * H.h);
    const double th0 = H.theta[0];
    const int th_len = static_cast<int>(H.theta.size());

    // Static part of the alpha stream per interior point:
    //   C_j^k = [mu d_xx - K2 d_x - K1](Phi)_j^k + F_j^k = E_j P_k + G_j Q_k + F_j^k.
    // D starts as C and, once level k is solved, absorbs -(u - phi) so each
    // step only needs two dot products over the history.
    std::vector<double> E(static_cast<size_t>(M)), G(static_cast<size_t>(M));
    for (int j = 1; j <= M; ++j) {
        E[static_cast<size_t>(j) - 1] = apply_op(H.phi0s.data(), j, H.mu, H.K1, H.K2, inv_h2, inv_2h);
        G[static_cast<size_t>(j) - 1] = apply_op(H.psi0s.data(), j, H.mu, H.K1, H.K2, inv_h2, inv_2h);
    }
    std::vector<double> D(static_cast<size_t>(M) * hist), W(static_cast<size_t>(M) * hist);
#pragma omp parallel for schedule(static) if (opts.parallel)
    for (int j = 1; j <= M; ++j) {
        double* Dj = &D[(static_cast<size_t>(j) - 1) * hist];
        const double Ej = E[static_cast<size_t>(j) - 1], Gj = G[static_cast<size_t>(j) - 1];
        for (int k = 0; k <= nT; ++k)
            Dj[k] = Ej * H.P[static_cast<size_t>(k)] + Gj * H.Q[static_cast<size_t>(k)] +
                    H.F[static_cast<size_t>(k) * cols + static_cast<size_t>(j)];
    }
    // level 0 updates (u^0 == phi^0, so both are exact zeros)
    for (int j = 1; j <= M; ++j) {
        const double* row0 = &H.levels[0];
        const double opu = apply_op(row0, j, H.mu, H.K1, H.K2, inv_h2, inv_2h);
        D[(static_cast<size_t>(j) - 1) * hist] -= H.u(0, j) - H.phi(j, 0);
        W[(static_cast<size_t>(j) - 1) * hist] = opu - E[static_cast<size_t>(j) - 1];
    }
    H.sup_abs = 0.0;
    for (int j = 0; j <= N; ++j) H.sup_abs = std::max(H.sup_abs, std::abs(H.u(0, j)));

    // constant bands: factor once
    Bands bands = make_bands(H);
    std::vector<double> lu_c(static_cast<size_t>(M)), lu_d(static_cast<size_t>(M));
    {
        double maxd = 0.0;
        for (double x : bands.diag) maxd = std::max(maxd, std::abs(x));
        const double tol = 1e-14 * maxd;
        double piv = bands.diag[0];
        if (std::abs(piv) < tol) throw SingularSystemError("march: zero pivot");
        lu_d[0] = piv;
        lu_c[0] = bands.super[0] / piv;
        for (int i = 1; i < M; ++i) {
            piv = bands.diag[static_cast<size_t>(i)] - bands.sub[static_cast<size_t>(i)] * lu_c[static_cast<size_t>(i) - 1];
            if (std::abs(piv) < tol) throw SingularSystemError("march: zero pivot");
            lu_d[static_cast<size_t>(i)] = piv;
            lu_c[static_cast<size_t>(i)] = bands.super[static_cast<size_t>(i)] / piv;
        }
    }

    std::vector<double> rhs(static_cast<size_t>(M));
    for (int n = 1; n <= nT; ++n) {
        const double tn = H.t[static_cast<size_t>(n)];
        const double* alpha = H.alpha.data();
        const int kmin = std::max(0, n - (th_len - 1));
#pragma omp parallel for schedule(static) if (opts.parallel)
        for (int j = 1; j <= M; ++j) {
            const double* Dj = &D[(static_cast<size_t>(j) - 1) * hist];
            const double* Wj = &W[(static_cast<size_t>(j) - 1) * hist];
            double s1 = 0.0;
            for (int k = 0; k < n; ++k) s1 += alpha[n - k] * Dj[k];
            double s2 = 0.0;
            for (int k = kmin; k < n; ++k) s2 += H.theta[static_cast<size_t>(n - k)] * Wj[k];
            const double known_n = E[static_cast<size_t>(j) - 1] + tn * G[static_cast<size_t>(j) - 1];
            rhs[static_cast<size_t>(j) - 1] =
                s1 + Dj[n] + H.phi(j, n) + H.tau_beta * (s2 - th0 * known_n);
        }
        rhs[0] += bands.fold_left * H.u(n, 0);
        rhs[static_cast<size_t>(M) - 1] += bands.fold_right * H.u(n, N);

        // prefactored substitution
        rhs[0] /= lu_d[0];
        for (int i = 1; i < M; ++i)
            rhs[static_cast<size_t>(i)] = (rhs[static_cast<size_t>(i)] - bands.sub[static_cast<size_t>(i)] * rhs[static_cast<size_t>(i) - 1]) / lu_d[static_cast<size_t>(i)];
        for (int i = M - 2; i >= 0; --i)
            rhs[static_cast<size_t>(i)] -= lu_c[static_cast<size_t>(i)] * rhs[static_cast<size_t>(i) + 1];

        double* row = &H.levels[static_cast<size_t>(n) * cols];
        for (int j = 1; j <= M; ++j) row[j] = rhs[static_cast<size_t>(j) - 1];
        H.levels_filled = n;

        for (int j = 0; j <= N; ++j) {
            const double uj = row[j];
            if (!std::isfinite(uj))
                H.diverged = true;
            else
                H.sup_abs = std::max(H.sup_abs, std::abs(uj));
        }

        // absorb level n into the history streams
#pragma omp parallel for schedule(static) if (opts.parallel)
        for (int j = 1; j <= M; ++j) {
            const double opu = apply_op(row, j, H.mu, H.K1, H.K2, inv_h2, inv_2h);
            D[(static_cast<size_t>(j) - 1) * hist + static_cast<size_t>(n)] -= row[j] - H.phi(j, n);
            W[(static_cast<size_t>(j) - 1) * hist + static_cast<size_t>(n)] =
                opu - (E[static_cast<size_t>(j) - 1] + tn * G[static_cast<size_t>(j) - 1]);
        }
    }
    if (H.sup_abs > kBlowupFactor * H.data_sup) H.diverged = true;
    return H;
}

double l2_error(const SolutionHistory& H, const SpaceTimeFn& exact, int n) {
    double s = 0.0;
    const double tn = H.t[static_cast<size_t>(n)];
    for (int j = 0; j < H.N; ++j) {
        const double e = exact(H.x(j), tn) - H.u(n, j);
        s += e * e;
    }
    return std::sqrt(H.h * s);
}

ErrorSummary error_summary(const SolutionHistory& H, const SpaceTimeFn& exact) {
    ErrorSummary r;
    for (int n = 0; n <= H.nT; ++n) {
        const double e = l2_error(H, exact, n);
        // a non-finite level dominates the max and stays there
        if (!std::isnan(r.max_l2) && (std::isnan(e) || e > r.max_l2)) {
            r.max_l2 = e;
            r.argmax_n = n;
        }
        if (n == H.nT) r.final_l2 = e;
    }
    return r;
}

namespace reference {

SolutionHistory march_direct(const ProblemSpec& p, const Discretization& d, SchemeVariant v) {
    MarchOptions serial;
    serial.parallel = false;
    SolutionHistory H = precompute_tables(p, d, v, serial);
    for (int n = 1; n <= H.nT; ++n) {
        TridiagonalSystem sys = assemble_step(H, n, v);
        std::vector<double> sol = thomas_solve(sys);
        for (int j = 1; j < H.N; ++j) H.u(n, j) = sol[static_cast<size_t>(j) - 1];
        H.levels_filled = n;
        for (int j = 0; j <= H.N; ++j) {
            const double uj = H.u(n, j);
            if (!std::isfinite(uj))
                H.diverged = true;
            else
                H.sup_abs = std::max(H.sup_abs, std::abs(uj));
        }
    }
    if (H.sup_abs > kBlowupFactor * H.data_sup) H.diverged = true;
    return H;
}

} // namespace reference

} // namespace fdwave

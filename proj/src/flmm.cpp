#include "fdwave/flmm.hpp"

#include <cmath>
#include <stdexcept>

namespace fdwave {

FractionalOrder::FractionalOrder(double b) : beta(b) {
    if (!(b > 1.0) || !(b <= 2.0))
        throw std::invalid_argument("fractional order must satisfy 1 < beta <= 2");
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn requires x > 0");
    return std::tgamma(x);
}

CoefficientSequence alpha_coeffs(FractionalOrder beta, int n) {
    std::vector<double> a(static_cast<size_t>(n) + 1);
    a[0] = 1.0;
    for (int k = 1; k <= n; ++k)
        a[static_cast<size_t>(k)] = a[static_cast<size_t>(k) - 1] * (k - 1 - beta.beta) / k;
    return {CoeffKind::Alpha, beta.beta, std::move(a)};
}

CoefficientSequence theta_coeffs(CoeffKind kind, FractionalOrder beta, int n) {
    const double b = beta.beta;
    std::vector<double> t(static_cast<size_t>(n) + 1, 0.0);
    switch (kind) {
    case CoeffKind::ThetaTrap: {
        // theta_k = 2^-beta (-1)^k alpha_k = 2^-beta binom(beta, k)
        const auto alpha = alpha_coeffs(beta, n).coeffs;
        const double scale = std::pow(2.0, -b);
        double sign = 1.0;
        for (int k = 0; k <= n; ++k, sign = -sign)
            t[static_cast<size_t>(k)] = scale * sign * alpha[static_cast<size_t>(k)];
        break;
    }
    case CoeffKind::ThetaNG:
        t[0] = 1.0 - b / 2.0;
        if (n >= 1) t[1] = b / 2.0;
        break;
    case CoeffKind::ThetaModNG:
        t[0] = 1.0 - b / 4.0;
        if (n >= 2) t[2] = b / 4.0;
        break;
    default:
        throw std::invalid_argument("theta_coeffs: kind must be a Theta kind");
    }
    return {kind, b, std::move(t)};
}

std::vector<double> deconvolve(std::span<const double> alpha, std::span<const double> theta, int n) {
    if (alpha.empty() || alpha[0] == 0.0)
        throw DegenerateSystemError("deconvolve: leading alpha coefficient is zero");
    std::vector<double> w(static_cast<size_t>(n) + 1);
    // extended-precision accumulation keeps the identity alpha * omega = theta
    // below 1e-12 out to n = 2048 even where omega grows like k^(beta-1)
    for (int m = 0; m <= n; ++m) {
        long double s = m < static_cast<int>(theta.size()) ? theta[static_cast<size_t>(m)] : 0.0;
        const int kmax = std::min<int>(m, static_cast<int>(alpha.size()) - 1);
        for (int k = 1; k <= kmax; ++k)
            s -= static_cast<long double>(alpha[static_cast<size_t>(k)]) * w[static_cast<size_t>(m - k)];
        w[static_cast<size_t>(m)] = static_cast<double>(s / alpha[0]);
    }
    return w;
}

CoefficientSequence omega_from_ratio(const CoefficientSequence& alpha,
                                     const CoefficientSequence& theta, int n) {
    auto w = deconvolve(alpha.coeffs, theta.coeffs, n);
    CoeffKind kind = theta.kind == CoeffKind::ThetaNG ? CoeffKind::OmegaNG2 : CoeffKind::OmegaTrap;
    return {kind, alpha.beta, std::move(w)};
}

CoefficientSequence newton_gregory2_weights(FractionalOrder beta, int n) {
    const double b = beta.beta;
    std::vector<double> w(static_cast<size_t>(n) + 1);
    // c_k: coefficients of (1-z)^-beta, c_k = c_{k-1} (beta+k-1)/k
    long double c_prev = 0.0L, c = 1.0L;
    const long double g0 = 1.0L - b / 2.0L, g1 = b / 2.0L;
    w[0] = static_cast<double>(g0 * c);
    for (int k = 1; k <= n; ++k) {
        c_prev = c;
        c *= (b + k - 1) / k;
        w[static_cast<size_t>(k)] = static_cast<double>(g0 * c + g1 * c_prev);
    }
    return {CoeffKind::OmegaNG2, b, std::move(w)};
}

namespace {

// Right-hand side of the starting-weight system for one exponent q.
double starting_rhs(double beta, int n, double q, std::span<const double> omega) {
    double s = 0.0;
    for (int k = 1; k <= n; ++k)
        s += omega[static_cast<size_t>(n - k)] * std::pow(static_cast<double>(k), q);
    return gamma_fn(q + 1.0) / gamma_fn(q + beta + 1.0) * std::pow(static_cast<double>(n), q + beta) - s;
}

} // namespace

StartingWeightPair starting_weights_forcing(FractionalOrder beta, int n,
                                            std::span<const double> omega) {
    const double b = beta.beta;
    if (n < 1) throw std::invalid_argument("starting_weights_forcing requires n >= 1");
    if (b < 1.0 + 1e-6)
        throw DegenerateSystemError("starting weights degenerate: beta within 1e-6 of 1");
    const double q1 = 2.0 - b;
    const double p = std::pow(2.0, q1);
    const double det = 2.0 - p; // det of [[1, 2^q1], [1, 2]]
    if (std::abs(det) < 1e-12)
        throw DegenerateSystemError("starting weights degenerate: singular 2x2 system");
    const double r1 = starting_rhs(b, n, q1, omega);
    const double r2 = starting_rhs(b, n, 1.0, omega);
    return {n, (2.0 * r1 - p * r2) / det, (r2 - r1) / det};
}

double frac_integral_poly(double beta, double nu, double t) {
    if (t == 0.0) return 0.0;
    return gamma_fn(nu + 1.0) * std::pow(t, nu + beta) / gamma_fn(nu + beta + 1.0);
}

ForcingQuadrature::ForcingQuadrature(FractionalOrder beta, int n_levels, double tau)
    : beta_(beta.beta), n_levels_(n_levels), tau_(tau), tau_beta_(std::pow(tau, beta.beta)),
      inv_gamma1b_(1.0 / gamma_fn(1.0 + beta.beta)) {
    if (n_levels < 2) throw std::invalid_argument("ForcingQuadrature requires n_levels >= 2");
    omega_ = newton_gregory2_weights(beta, n_levels).coeffs;
    t_beta_.resize(static_cast<size_t>(n_levels) + 1);
    for (int k = 0; k <= n_levels; ++k)
        t_beta_[static_cast<size_t>(k)] = std::pow(k * tau, beta_);

    // The 2x2 system shares its matrix across n; only the right-hand sides
    // change. Build the k^q tables once and accumulate the omega sums.
    const double q1 = 2.0 - beta_;
    const double p = std::pow(2.0, q1);
    const double det = 2.0 - p;
    if (beta_ < 1.0 + 1e-6)
        throw DegenerateSystemError("starting weights degenerate: beta within 1e-6 of 1");
    std::vector<double> kq1(static_cast<size_t>(n_levels) + 1, 0.0);
    for (int k = 1; k <= n_levels; ++k)
        kq1[static_cast<size_t>(k)] = std::pow(static_cast<double>(k), q1);
    const double c1 = gamma_fn(q1 + 1.0) / gamma_fn(q1 + beta_ + 1.0);
    const double c2 = gamma_fn(2.0) / gamma_fn(2.0 + beta_);
    pairs_.resize(static_cast<size_t>(n_levels) + 1, StartingWeightPair{0, 0.0, 0.0});
    for (int n = 1; n <= n_levels; ++n) {
        double s1 = 0.0, s2 = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double w = omega_[static_cast<size_t>(n - k)];
            s1 += w * kq1[static_cast<size_t>(k)];
            s2 += w * k;
        }
        const double r1 = c1 * std::pow(static_cast<double>(n), q1 + beta_) - s1;
        const double r2 = c2 * std::pow(static_cast<double>(n), 1.0 + beta_) - s2;
        pairs_[static_cast<size_t>(n)] = {n, (2.0 * r1 - p * r2) / det, (r2 - r1) / det};
    }
}

std::vector<double> ForcingQuadrature::apply(std::span<const double> samples) const {
    if (static_cast<int>(samples.size()) != n_levels_ + 1)
        throw std::invalid_argument("ForcingQuadrature::apply: sample count mismatch");
    const double f0 = samples[0];
    std::vector<double> F(static_cast<size_t>(n_levels_) + 1);
    F[0] = 0.0;
    const double g1 = samples[1] - f0;
    const double g2 = samples[2] - f0;
    for (int n = 1; n <= n_levels_; ++n) {
        double s = 0.0;
        for (int k = 1; k <= n; ++k) // k = 0 term vanishes: f_0 - f0 = 0
            s += omega_[static_cast<size_t>(n - k)] * (samples[static_cast<size_t>(k)] - f0);
        const auto& sw = pairs_[static_cast<size_t>(n)];
        s += sw.w1 * g1 + sw.w2 * g2;
        F[static_cast<size_t>(n)] = tau_beta_ * s + t_beta_[static_cast<size_t>(n)] * f0 * inv_gamma1b_;
    }
    return F;
}

std::vector<double> frac_integral_forcing(FractionalOrder beta, std::span<const double> f_samples,
                                          double f0, double tau) {
    if (f_samples.empty() || f_samples[0] != f0)
        throw std::invalid_argument("frac_integral_forcing: f_samples[0] must equal f0");
    ForcingQuadrature quad(beta, static_cast<int>(f_samples.size()) - 1, tau);
    return quad.apply(f_samples);
}

} // namespace fdwave

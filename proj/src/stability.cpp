#include "fdwave/stability.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fdwave/flmm.hpp"

namespace fdwave {

namespace {

CoeffKind theta_kind(SchemeVariant v) {
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

} // namespace

FourierSymbol fourier_symbol(double mu, double K1, double K2, double tau, double h, double beta,
                             double sigma) {
    if (!(tau > 0.0) || !(h > 0.0)) throw std::invalid_argument("fourier_symbol: tau, h > 0 required");
    const double tb = std::pow(tau, beta);
    const double s = std::sin(sigma * h / 2.0);
    const double re = -4.0 * mu * tb / (h * h) * s * s - K1 * tb;
    const double im = -K2 * tb / h * std::sin(sigma * h);
    return {sigma, {re, im}};
}

std::complex<double> boundary_locus_point(SchemeVariant v, double beta, std::complex<double> z) {
    const std::complex<double> one(1.0, 0.0);
    const std::complex<double> num =
        (z == one) ? std::complex<double>(0.0, 0.0) : std::pow(one - z, beta);
    std::complex<double> den;
    switch (theta_kind(v)) {
    case CoeffKind::ThetaTrap:
        den = (z == -one) ? std::complex<double>(0.0, 0.0)
                          : std::pow(2.0, -beta) * std::pow(one + z, beta);
        break;
    case CoeffKind::ThetaNG:
        den = one * (1.0 - beta / 2.0) + z * (beta / 2.0);
        break;
    default:
        den = one * (1.0 - beta / 4.0) + z * z * (beta / 4.0);
        break;
    }
    if (std::abs(den) < 1e-12)
        return {std::numeric_limits<double>::infinity(), 0.0}; // pole marker
    return num / den;
}

std::vector<std::complex<double>> boundary_locus(SchemeVariant v, double beta, int samples) {
    if (samples < 8) throw std::invalid_argument("boundary_locus: samples >= 8 required");
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<size_t>(samples));
    for (int m = 0; m < samples; ++m) {
        const double phi = 2.0 * std::numbers::pi * m / samples;
        std::complex<double> z = {std::cos(phi), std::sin(phi)};
        if (m == 0) z = {1.0, 0.0};
        if (2 * m == samples) z = {-1.0, 0.0};
        out.push_back(boundary_locus_point(v, beta, z));
    }
    return out;
}

double cfl_ratio(double mu, double beta, double tau, double h) {
    if (!(tau > 0.0) || !(h > 0.0)) throw std::invalid_argument("cfl_ratio: tau, h > 0 required");
    return mu * (beta - 1.0) * std::pow(tau, beta) / (std::pow(2.0, beta - 2.0) * h * h);
}

ABnDiagnostic an_bn(SchemeVariant v, double beta, int n) {
    if (n < 0) throw std::invalid_argument("an_bn: n >= 0 required");
    FractionalOrder order(beta);
    const auto alpha = alpha_coeffs(order, n).coeffs;
    const auto theta = theta_coeffs(theta_kind(v), order, n).coeffs;
    const double ig1 = 1.0 / gamma_fn(beta + 1.0);
    const double ig2 = 1.0 / gamma_fn(beta + 2.0);
    // the alpha sums cancel from O(n^beta) terms down to O(1/n):
    // accumulate in extended precision
    long double sa = 0.0L, sb = 0.0L, st = 0.0L, stk = 0.0L;
    for (int k = 0; k <= n; ++k) {
        const double kb = k == 0 ? 0.0 : std::pow(static_cast<double>(k), beta);
        const long double a = alpha[static_cast<size_t>(n - k)];
        sa += a * kb;
        sb += a * kb * k;
        st += theta[static_cast<size_t>(n - k)];
        stk += static_cast<long double>(theta[static_cast<size_t>(n - k)]) * k;
    }
    return {n, static_cast<double>(ig1 * sa - st), static_cast<double>(ig2 * sb - stk)};
}

bool empirical_stability_probe(SchemeVariant v, double beta, double S_star, int n_steps) {
    if (n_steps < 16) throw std::invalid_argument("empirical_stability_probe: n_steps >= 16");
    FractionalOrder order(beta);
    const auto alpha = alpha_coeffs(order, n_steps).coeffs;
    const auto theta = theta_coeffs(theta_kind(v), order, n_steps).coeffs;
    const double rho0 = 1.0, d0 = 1.0, tau = 1.0;

    std::vector<double> rho(static_cast<size_t>(n_steps) + 1);
    rho[0] = rho0;
    double max_abs = std::abs(rho0);
    for (int n = 1; n <= n_steps; ++n) {
        const auto ab = an_bn(v, beta, n);
        double acc = alpha[0] * (rho0 + d0 * n);
        for (int k = 0; k < n; ++k)
            acc -= alpha[static_cast<size_t>(n - k)] * (rho[static_cast<size_t>(k)] - rho0 - d0 * k);
        double s = 0.0;
        for (int k = 0; k < n; ++k)
            s += theta[static_cast<size_t>(n - k)] * rho[static_cast<size_t>(k)];
        acc += S_star * (s + ab.A_n * rho0 + ab.B_n * d0 * tau);
        const double den = alpha[0] - S_star * theta[0];
        rho[static_cast<size_t>(n)] = acc / den;
        max_abs = std::max(max_abs, std::abs(rho[static_cast<size_t>(n)]));
    }
    return max_abs <= 1e3;
}

StabilityReport stability_report(SchemeVariant v, double beta, double mu, double tau, double h,
                                 int locus_samples) {
    StabilityReport rep;
    rep.variant = v;
    rep.beta = beta;
    const auto locus = boundary_locus(v, beta, locus_samples);
    rep.locus_samples = locus_samples;
    rep.locus_min_re = std::numeric_limits<double>::infinity();
    rep.locus_max_re = -std::numeric_limits<double>::infinity();
    for (const auto& w : locus) {
        if (std::isinf(w.real())) {
            ++rep.locus_poles;
            continue;
        }
        rep.locus_min_re = std::min(rep.locus_min_re, w.real());
        rep.locus_max_re = std::max(rep.locus_max_re, w.real());
    }
    if (v == SchemeVariant::NewtonGregory) {
        rep.has_cfl = true;
        rep.r = cfl_ratio(mu, beta, tau, h);
        rep.verdict = (rep.r > 0.0 && rep.r <= 1.0) ? Verdict::Stable : Verdict::Unstable;
    } else {
        rep.verdict = Verdict::Stable;
    }
    return rep;
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::Stable: return "Stable";
    case Verdict::ConditionallyStable: return "ConditionallyStable";
    case Verdict::Unstable: return "Unstable";
    }
    return "?";
}

} // namespace fdwave

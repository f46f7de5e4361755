#pragma once

#include <complex>
#include <vector>

#include "fdwave/problem.hpp"

// Fourier-symbol diagnostics: the symbol of the spatial operator, the
// generating-function boundary locus whose complement is the stability
// region, the CFL ratio of the Newton-Gregory scheme, and the scalar
// recurrence probe used to test boundedness empirically.

namespace fdwave {

struct FourierSymbol {
    double sigma;
    std::complex<double> S_star;
};

// S* = -(4 mu tau^beta / h^2) sin^2(sigma h / 2) - K1 tau^beta
//      - i (K2 tau^beta / h) sin(sigma h)
FourierSymbol fourier_symbol(double mu, double K1, double K2, double tau, double h, double beta,
                             double sigma);

// alpha(z)/theta(z) at one point of the closed unit disk (principal branch
// of (1-z)^beta; z = 1 maps to exactly 0). Poles of theta come back as
// +infinity markers.
std::complex<double> boundary_locus_point(SchemeVariant v, double beta, std::complex<double> z);

// The locus sampled at `samples` uniformly spaced points of |z| = 1.
std::vector<std::complex<double>> boundary_locus(SchemeVariant v, double beta, int samples);

// r = mu (beta-1) tau^beta / (2^(beta-2) h^2); the Newton-Gregory scheme is
// stable exactly when 0 < r <= 1.
double cfl_ratio(double mu, double beta, double tau, double h);

// A_n = 1/Gamma(beta+1) sum alpha_{n-k} k^beta   - sum theta_{n-k}
// B_n = 1/Gamma(beta+2) sum alpha_{n-k} k^(beta+1) - sum theta_{n-k} k
// Both decay like O(1/n); they fold the initial ramp into the scalar
// stability recurrence.
struct ABnDiagnostic {
    int n;
    double A_n;
    double B_n;
};

ABnDiagnostic an_bn(SchemeVariant v, double beta, int n);

// Iterates the scalar recurrence
//   sum alpha_{n-k}(rho^k - rho^0 - d0 t_k)
//     = S* [ sum theta_{n-k} rho^k + A_n rho^0 + B_n d0 tau ]
// with rho^0 = d0 = tau = 1 and reports whether max |rho^n| stays <= 1e3.
bool empirical_stability_probe(SchemeVariant v, double beta, double S_star, int n_steps);

enum class Verdict { Stable, ConditionallyStable, Unstable };

struct StabilityReport {
    SchemeVariant variant;
    double beta;
    bool has_cfl = false; // Newton-Gregory only
    double r = 0.0;
    Verdict verdict = Verdict::Stable;
    int locus_samples = 0;
    int locus_poles = 0;
    double locus_min_re = 0.0;
    double locus_max_re = 0.0;
};

StabilityReport stability_report(SchemeVariant v, double beta, double mu, double tau, double h,
                                 int locus_samples = 1024);

const char* to_string(Verdict verdict);

} // namespace fdwave

#pragma once

#include <span>
#include <vector>

#include "fdwave/errors.hpp"

// Convolution-quadrature machinery shared by all time discretizations:
// generating-function coefficients, starting weights, and the fractional
// integrals they approximate.

namespace fdwave {

// Fractional order beta with the admissible range (1, 2] enforced.
struct FractionalOrder {
    double beta;

    explicit FractionalOrder(double b);
};

enum class CoeffKind {
    Alpha,      // (1-z)^beta
    ThetaTrap,  // 2^-beta (1+z)^beta, fractional trapezoidal numerator
    ThetaNG,    // 1 - beta/2 + (beta/2) z, Newton-Gregory numerator
    ThetaModNG, // 1 - beta/4 + (beta/4) z^2, modified Newton-Gregory numerator
    OmegaTrap,  // ThetaTrap / Alpha
    OmegaNG2,   // ThetaNG / Alpha, the p=2 Newton-Gregory weights
};

// A finite prefix of the Taylor coefficients of one generating function.
struct CoefficientSequence {
    CoeffKind kind;
    double beta;
    std::vector<double> coeffs; // length n+1
};

// Gamma function restricted to x > 0. Throws std::domain_error otherwise.
double gamma_fn(double x);

// alpha_k = (-1)^k binom(beta, k), computed by the downward recurrence
// alpha_k = alpha_{k-1} (k-1-beta)/k with alpha_0 = 1.
CoefficientSequence alpha_coeffs(FractionalOrder beta, int n);

// kind must be one of the Theta kinds.
CoefficientSequence theta_coeffs(CoeffKind kind, FractionalOrder beta, int n);

// Coefficients of theta(z)/alpha(z) by deconvolution:
// omega_n = (theta_n - sum_{k=1..n} alpha_k omega_{n-k}) / alpha_0.
std::vector<double> deconvolve(std::span<const double> alpha, std::span<const double> theta, int n);

// Typed wrapper over deconvolve for the supported (alpha, theta) pairs.
CoefficientSequence omega_from_ratio(const CoefficientSequence& alpha,
                                     const CoefficientSequence& theta, int n);

// Weights of (1 - beta/2 + (beta/2) z) (1-z)^-beta:
// omega_k = (1-beta/2) c_k + (beta/2) c_{k-1} with c_k the coefficients of
// (1-z)^-beta. These drive the forcing quadrature.
CoefficientSequence newton_gregory2_weights(FractionalOrder beta, int n);

// Correction weights at the first two nodes making the quadrature exact on
// t^(2-beta) and t.
struct StartingWeightPair {
    int n;
    double w1;
    double w2;
};

// Solves  w1 + 2^q w2 = Gamma(q+1)/Gamma(q+beta+1) n^(q+beta)
//                       - sum_{k=1..n} omega_{n-k} k^q,   q in {2-beta, 1}.
// omega must hold newton_gregory2_weights out to index n-1 at least.
// Throws DegenerateSystemError when beta < 1 + 1e-6 (the exponents collide).
StartingWeightPair starting_weights_forcing(FractionalOrder beta, int n,
                                            std::span<const double> omega);

// Exact fractional integral of t^nu: Gamma(nu+1) t^(nu+beta) / Gamma(nu+beta+1).
double frac_integral_poly(double beta, double nu, double t);

// Second-order quadrature for the beta-order fractional integral of a sampled
// forcing, with the two starting-weight corrections and the exact constant
// part split off:
//   F^n = tau^beta [ sum_k omega_{n-k}(f_k - f0)
//                    + w_{n,1}(f_1 - f0) + w_{n,2}(f_2 - f0) ]
//         + t_n^beta f0 / Gamma(1+beta),     F^0 = 0.
// Precomputes all weights once; apply() evaluates one sample column.
class ForcingQuadrature {
public:
    ForcingQuadrature(FractionalOrder beta, int n_levels, double tau);

    // samples.size() == n_levels+1, samples[0] == f(0). Returns F^0..F^n.
    std::vector<double> apply(std::span<const double> samples) const;

    int levels() const { return n_levels_; }
    double tau() const { return tau_; }
    std::span<const double> omega() const { return omega_; }
    const StartingWeightPair& starting_pair(int n) const { return pairs_[static_cast<size_t>(n)]; }

private:
    double beta_;
    int n_levels_;
    double tau_;
    double tau_beta_;
    double inv_gamma1b_;
    std::vector<double> omega_;    // NG2 weights 0..n
    std::vector<double> t_beta_;   // t_n^beta
    std::vector<StartingWeightPair> pairs_; // index n, valid for n >= 1
};

// One-shot form of the above. samples[0] must equal f0.
std::vector<double> frac_integral_forcing(FractionalOrder beta, std::span<const double> f_samples,
                                          double f0, double tau);

} // namespace fdwave

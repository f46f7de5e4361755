#pragma once

#include <span>
#include <vector>

#include "fdwave/errors.hpp"
#include "fdwave/flmm.hpp"
#include "fdwave/problem.hpp"

namespace fdwave {

// Implicit per-step system over the interior unknowns u_1..u_{N-1}.
// sub[i] multiplies x[i-1], super[i] multiplies x[i+1]; sub[0] and
// super[M-1] are ignored.
struct TridiagonalSystem {
    std::vector<double> sub, diag, super, rhs;
};

// Gaussian elimination without pivoting (Thomas algorithm). Throws
// SingularSystemError when a pivot falls below 1e-14 * max|diag|.
std::vector<double> thomas_solve(const TridiagonalSystem& sys);

// A marching run declares itself diverged once any level holds a non-finite
// value or the sup norm passes this multiple of the initial/boundary data
// sup. Bounded runs stay within a small factor of their data; unstable ones
// pass any fixed multiple within the tabulated horizons (measured: the
// slowest-growing unstable cell of the benchmark grid reaches 7900x while
// every stable cell stays at 1x).
inline constexpr double kBlowupFactor = 1e3;

// Full time history of one run plus everything precomputed from the data:
// sampled initial fields, the fractional integrals of the initial ramp
// (tables P, Q), and the forcing integrals F.
struct SolutionHistory {
    // problem scalars
    double beta, mu, K1, K2, a, b, T;
    SchemeVariant variant;
    int N, nT;
    double h, tau, tau_beta;

    std::vector<double> levels; // (nT+1) rows x (N+1) cols, row k = time level
    std::vector<double> F;      // same layout, F_j^k
    std::vector<double> phi0s, psi0s; // initial value / slope samples, j = 0..N
    std::vector<double> t;            // t_k
    std::vector<double> P, Q; // t_k^beta/Gamma(beta+1), t_k^(beta+1)/Gamma(beta+2)
    std::vector<double> alpha; // 0..nT
    std::vector<double> theta; // nonzero prefix only (full table for trapezoidal)

    bool diverged = false;
    double sup_abs = 0.0;  // largest finite |u| seen while marching
    double data_sup = 1.0; // sup of initial and boundary data
    int levels_filled = 0;

    double x(int j) const { return a + j * h; }
    double u(int k, int j) const { return levels[static_cast<size_t>(k) * (N + 1) + j]; }
    double& u(int k, int j) { return levels[static_cast<size_t>(k) * (N + 1) + j]; }
    double Fv(int k, int j) const { return F[static_cast<size_t>(k) * (N + 1) + j]; }
    // phi(x_j, t_k) = phi0 + t psi0 and its fractional integral Phi.
    double phi(int j, int k) const { return phi0s[static_cast<size_t>(j)] + psi0s[static_cast<size_t>(j)] * t[static_cast<size_t>(k)]; }
    double Phi(int j, int k) const { return phi0s[static_cast<size_t>(j)] * P[static_cast<size_t>(k)] + psi0s[static_cast<size_t>(j)] * Q[static_cast<size_t>(k)]; }
    double theta_at(int i) const { return i < static_cast<int>(theta.size()) ? theta[static_cast<size_t>(i)] : 0.0; }
};

struct MarchOptions {
    bool parallel = true; // OpenMP over grid points; results are bit-identical either way
};

// Samples the data, validates boundary/initial compatibility, fills the
// coefficient tables and the forcing integrals F, and seeds level 0.
SolutionHistory precompute_tables(const ProblemSpec& p, const Discretization& d, SchemeVariant v,
                                  const MarchOptions& opts = {});

// Direct-form assembly of the implicit system for time level n (levels
// 0..n-1 must be filled). This is the readable reference path; march()
// produces the same systems through fused history kernels.
TridiagonalSystem assemble_step(const SolutionHistory& H, int n, SchemeVariant v);

// Runs the full time marching. Overflow is not an error: non-finite values
// propagate and flag the history as diverged.
SolutionHistory march(const ProblemSpec& p, const Discretization& d, SchemeVariant v,
                      const MarchOptions& opts = {});

// Discrete L2 norm of the error at level n: sqrt(h sum_{j=0}^{N-1} e_j^2).
double l2_error(const SolutionHistory& H, const SpaceTimeFn& exact, int n);

struct ErrorSummary {
    double max_l2 = 0.0;
    double final_l2 = 0.0;
    int argmax_n = 0;
};

ErrorSummary error_summary(const SolutionHistory& H, const SpaceTimeFn& exact);

namespace reference {

// Serial reference marcher: a plain loop of assemble_step + thomas_solve.
// Kept independent of the fused kernels for testing and benchmarking.
SolutionHistory march_direct(const ProblemSpec& p, const Discretization& d, SchemeVariant v);

} // namespace reference

} // namespace fdwave

#pragma once

#include <string>

#include "fdwave/problem.hpp"

// Built-in benchmark problems with exact solutions. Forcings are derived
// analytically so that the prescribed solution satisfies the PDE.

namespace fdwave {

struct ManufacturedProblem {
    std::string name;
    ProblemSpec spec;
    SpaceTimeFn exact;
};

// u(x,t) = (t^(2+beta) + t^2 + t + 2) e^x on (0,1) x (0,1], pure diffusion.
ManufacturedProblem example1(double beta);

// u(x,t) = exp(-x t) on (0,1) x (0,1], with unit reaction and advection.
// The forcing needs the series  x^2 t^(2-beta) sum_k (-xt)^k / Gamma(k+3-beta).
ManufacturedProblem example2(double beta);

// Truncated alternating series above; stops once |term| < tol*|sum| + 1e-300.
double series_forcing_eval(double x, double t, double beta, double tol = 1e-14);

// Lookup by CLI name ("example1", "example2"). Throws std::invalid_argument.
ManufacturedProblem problem_by_name(const std::string& name, double beta);

} // namespace fdwave

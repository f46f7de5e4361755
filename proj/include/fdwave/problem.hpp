#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace fdwave {

using SpaceFn = std::function<double(double)>;         // x -> value
using TimeFn = std::function<double(double)>;          // t -> value
using SpaceTimeFn = std::function<double(double, double)>; // (x, t) -> value

// Everything that defines one initial-boundary value problem:
//   CD^beta u + K1 u + K2 u_x = mu u_xx + f   on (a,b) x (0,T],
//   u(x,0) = phi0, u_t(x,0) = psi0, Dirichlet data Ua/Ub.
struct ProblemSpec {
    double beta = 1.5;
    double mu = 1.0;
    double K1 = 0.0;
    double K2 = 0.0;
    double a = 0.0;
    double b = 1.0;
    double T = 1.0;
    SpaceFn phi0;
    SpaceFn psi0;
    TimeFn Ua;
    TimeFn Ub;
    SpaceTimeFn f;
    std::optional<SpaceTimeFn> exact;
};

struct Discretization {
    int N;   // spatial intervals
    int nT;  // time steps

    Discretization(int n_space, int n_time) : N(n_space), nT(n_time) {
        if (N < 2 || nT < 2) throw std::invalid_argument("Discretization requires N >= 2 and nT >= 2");
    }
    double h(const ProblemSpec& p) const { return (p.b - p.a) / N; }
    double tau(const ProblemSpec& p) const { return p.T / nT; }
};

enum class SchemeVariant {
    SchemeI,       // fractional trapezoidal weights, stable
    NewtonGregory, // p=2 Newton-Gregory weights, conditionally stable
    SchemeII,      // modified Newton-Gregory weights, stable
    SchemeIII1,    // advection-reaction form with SchemeI weights
    SchemeIII2,    // advection-reaction form with SchemeII weights
};

std::string to_string(SchemeVariant v);

} // namespace fdwave

#include "fdwave/problems.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include "fdwave/flmm.hpp"

namespace fdwave {

ManufacturedProblem example1(double beta) {
    FractionalOrder order(beta);
    ProblemSpec p;
    p.beta = beta;
    p.mu = 1.0;
    p.K1 = 0.0;
    p.K2 = 0.0;
    p.a = 0.0;
    p.b = 1.0;
    p.T = 1.0;
    auto exact = [beta](double x, double t) {
        return (std::pow(t, 2.0 + beta) + t * t + t + 2.0) * std::exp(x);
    };
    p.phi0 = [](double x) { return 2.0 * std::exp(x); };
    p.psi0 = [](double x) { return std::exp(x); };
    p.Ua = [exact](double t) { return exact(0.0, t); };
    p.Ub = [exact](double t) { return exact(1.0, t); };
    // Caputo derivative termwise: t^(2+beta) -> Gamma(beta+3)/2 t^2,
    // t^2 -> 2 t^(2-beta)/Gamma(3-beta), lower powers vanish for beta > 1.
    const double c2 = gamma_fn(beta + 3.0) / 2.0;
    const double cfrac = 2.0 / gamma_fn(3.0 - beta);
    p.f = [beta, c2, cfrac](double x, double t) {
        const double caputo = c2 * t * t + cfrac * std::pow(t, 2.0 - beta);
        const double u_over_ex = std::pow(t, 2.0 + beta) + t * t + t + 2.0;
        return std::exp(x) * (caputo - u_over_ex);
    };
    p.exact = exact;
    return {"example1", std::move(p), exact};
}

double series_forcing_eval(double x, double t, double beta, double tol) {
    const double xt = x * t;
    const double pref = x * x * std::pow(t, 2.0 - beta);
    if (pref == 0.0) return 0.0;
    double sum = 0.0;
    double pw = 1.0; // (-xt)^k
    for (int k = 0; k < 200; ++k) {
        const double term = pw / gamma_fn(k + 3.0 - beta);
        sum += term;
        if (std::abs(term) < tol * std::abs(sum) + 1e-300) break;
        pw *= -xt;
    }
    return pref * sum;
}

ManufacturedProblem example2(double beta) {
    FractionalOrder order(beta);
    ProblemSpec p;
    p.beta = beta;
    p.mu = 1.0;
    p.K1 = 1.0;
    p.K2 = 1.0;
    p.a = 0.0;
    p.b = 1.0;
    p.T = 1.0;
    auto exact = [](double x, double t) { return std::exp(-x * t); };
    p.phi0 = [](double) { return 1.0; };
    p.psi0 = [](double x) { return -x; };
    p.Ua = [](double) { return 1.0; };
    p.Ub = [](double t) { return std::exp(-t); };
    // reciprocal gamma table so repeated forcing samples skip tgamma calls
    auto inv_gamma = std::make_shared<std::vector<double>>();
    inv_gamma->reserve(200);
    for (int k = 0; k < 200; ++k) inv_gamma->push_back(1.0 / gamma_fn(k + 3.0 - beta));
    p.f = [beta, inv_gamma](double x, double t) {
        const double e = std::exp(-x * t);
        double series = 0.0;
        const double pref = x * x * std::pow(t, 2.0 - beta);
        if (pref != 0.0) {
            const double xt = x * t;
            double sum = 0.0, pw = 1.0;
            for (int k = 0; k < 200; ++k) {
                const double term = pw * (*inv_gamma)[static_cast<size_t>(k)];
                sum += term;
                if (std::abs(term) < 1e-14 * std::abs(sum) + 1e-300) break;
                pw *= -xt;
            }
            series = pref * sum;
        }
        return series + e - t * e - t * t * e;
    };
    p.exact = exact;
    return {"example2", std::move(p), exact};
}

ManufacturedProblem problem_by_name(const std::string& name, double beta) {
    if (name == "example1") return example1(beta);
    if (name == "example2") return example2(beta);
    throw std::invalid_argument("unknown problem: " + name);
}

std::string to_string(SchemeVariant v) {
    switch (v) {
    case SchemeVariant::SchemeI: return "I";
    case SchemeVariant::NewtonGregory: return "NG";
    case SchemeVariant::SchemeII: return "II";
    case SchemeVariant::SchemeIII1: return "III1";
    case SchemeVariant::SchemeIII2: return "III2";
    }
    return "?";
}

} // namespace fdwave

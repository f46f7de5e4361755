#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdwave/problems.hpp"
#include "fdwave/solver.hpp"
#include "fdwave/stability.hpp"

namespace {

using nlohmann::json;

fdwave::SchemeVariant parse_scheme(const std::string& s) {
    if (s == "I") return fdwave::SchemeVariant::SchemeI;
    if (s == "NG") return fdwave::SchemeVariant::NewtonGregory;
    if (s == "II") return fdwave::SchemeVariant::SchemeII;
    if (s == "III1") return fdwave::SchemeVariant::SchemeIII1;
    if (s == "III2") return fdwave::SchemeVariant::SchemeIII2;
    throw CLI::ValidationError("--scheme", "unknown scheme '" + s + "' (use I, NG, II, III1, III2)");
}

bool scheme_supports_advection(fdwave::SchemeVariant v) {
    return v == fdwave::SchemeVariant::SchemeIII1 || v == fdwave::SchemeVariant::SchemeIII2;
}

std::string sci5(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", x);
    return buf;
}

std::string full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct SweepRow {
    int level;
    double param; // tau or h at this level
    double error;
    std::optional<double> order;
    bool diverged;
};

void write_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open csv file: " + path);
    out << "level,error,order\n";
    for (const auto& r : rows) {
        out << r.level << ',' << full(r.error) << ',';
        if (r.order) out << full(*r.order);
        out << '\n';
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open json file: " + path);
    out << j.dump(2) << '\n';
}

int run_solve(const std::string& problem, const std::string& scheme, double beta, int nx, int nt,
              const std::string& metric, const std::string& json_path) {
    auto v = parse_scheme(scheme);
    auto prob = fdwave::problem_by_name(problem, beta);
    if ((prob.spec.K1 > 0.0 || prob.spec.K2 > 0.0) && !scheme_supports_advection(v))
        throw CLI::ValidationError("--scheme",
                                   "problem has advection/reaction terms; use scheme III1 or III2");
    fdwave::Discretization disc(nx, nt);

    const auto t0 = std::chrono::steady_clock::now();
    auto hist = fdwave::march(prob.spec, disc, v);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto err = fdwave::error_summary(hist, prob.exact);

    std::printf("problem   %s\n", problem.c_str());
    std::printf("scheme    %s\n", scheme.c_str());
    std::printf("beta      %g\n", beta);
    std::printf("grid      N=%d nT=%d (h=%s, tau=%s)\n", nx, nt, sci5(hist.h).c_str(),
                sci5(hist.tau).c_str());
    std::printf("max-l2    %s (at n=%d)\n", sci5(err.max_l2).c_str(), err.argmax_n);
    std::printf("final-l2  %s\n", sci5(err.final_l2).c_str());
    std::printf("metric    %s -> %s\n", metric.c_str(),
                sci5(metric == "final" ? err.final_l2 : err.max_l2).c_str());
    std::printf("diverged  %s\n", hist.diverged ? "yes" : "no");
    std::printf("wall      %.3f s\n", wall);

    if (!json_path.empty()) {
        json j = {{"command", "solve"},
                  {"problem", problem},
                  {"scheme", scheme},
                  {"beta", beta},
                  {"nx", nx},
                  {"nt", nt},
                  {"metric", metric},
                  {"results",
                   {{"max_l2", err.max_l2},
                    {"final_l2", err.final_l2},
                    {"argmax_n", err.argmax_n},
                    {"diverged", hist.diverged},
                    {"wall_seconds", wall}}}};
        write_json(json_path, j);
    }
    return 0;
}

int run_sweep(const std::string& problem, const std::string& scheme, double beta,
              const std::string& axis, const std::vector<int>& levels, int nx, int nt,
              const std::string& metric, const std::string& csv_path,
              const std::string& json_path) {
    auto v = parse_scheme(scheme);
    auto prob = fdwave::problem_by_name(problem, beta);
    if ((prob.spec.K1 > 0.0 || prob.spec.K2 > 0.0) && !scheme_supports_advection(v))
        throw CLI::ValidationError("--scheme",
                                   "problem has advection/reaction terms; use scheme III1 or III2");
    if (levels.size() < 2) throw CLI::ValidationError("--levels", "need at least 2 levels");
    if (axis == "time" && nx <= 0) throw CLI::ValidationError("--nx", "time sweep needs --nx");
    if (axis == "space" && nt <= 0) throw CLI::ValidationError("--nt", "space sweep needs --nt");

    const double span_x = prob.spec.b - prob.spec.a;
    std::vector<SweepRow> rows;
    for (int lv : levels) {
        int N, NT;
        double param;
        if (axis == "time") {
            N = nx;
            NT = lv;
            param = prob.spec.T / NT;
        } else if (axis == "space") {
            N = lv;
            NT = nt;
            param = span_x / N;
        } else { // coupled: tau = h
            N = lv;
            NT = static_cast<int>(std::lround(prob.spec.T * N / span_x));
            param = span_x / N;
        }
        fdwave::Discretization disc(N, NT);
        auto hist = fdwave::march(prob.spec, disc, v);
        auto err = fdwave::error_summary(hist, prob.exact);
        const double e = metric == "final" ? err.final_l2 : err.max_l2;
        SweepRow row{lv, param, e, std::nullopt, hist.diverged};
        if (!rows.empty()) {
            const auto& prev = rows.back();
            const double ratio = prev.error / row.error;
            if (std::isfinite(ratio) && ratio > 0.0 && prev.param != row.param)
                row.order = std::log(ratio) / std::log(prev.param / row.param);
        }
        rows.push_back(row);
    }

    std::printf("problem %s  scheme %s  beta %g  axis %s  metric %s\n", problem.c_str(),
                scheme.c_str(), beta, axis.c_str(), metric.c_str());
    std::printf("%-8s %-12s %s\n", "level", "error", "order");
    for (const auto& r : rows) {
        std::printf("%-8d %-12s %s%s\n", r.level, r.diverged ? "*" : sci5(r.error).c_str(),
                    r.order ? sci5(*r.order).c_str() : "-", r.diverged ? "  (diverged)" : "");
    }

    if (!csv_path.empty()) write_csv(csv_path, rows);
    if (!json_path.empty()) {
        json jr = json::array();
        for (const auto& r : rows)
            jr.push_back({{"level", r.level},
                          {"param", r.param},
                          {"error", r.error},
                          {"order", r.order ? json(*r.order) : json()},
                          {"diverged", r.diverged}});
        json j = {{"command", "sweep"}, {"problem", problem}, {"scheme", scheme},
                  {"beta", beta},       {"axis", axis},       {"levels", levels},
                  {"metric", metric},   {"rows", jr}};
        write_json(json_path, j);
    }
    return 0;
}

int run_stability(const std::string& scheme, double beta, double mu, double tau, double h,
                  const std::string& json_path) {
    auto v = parse_scheme(scheme);
    auto rep = fdwave::stability_report(v, beta, mu, tau, h);
    std::printf("scheme    %s\n", scheme.c_str());
    std::printf("beta      %g\n", beta);
    std::printf("mu        %g  tau %s  h %s\n", mu, sci5(tau).c_str(), sci5(h).c_str());
    if (rep.has_cfl) std::printf("cfl-r     %.4f\n", rep.r);
    std::printf("verdict   %s\n", fdwave::to_string(rep.verdict));
    std::printf("locus     %d samples, %d poles, Re in [%s, %s]\n", rep.locus_samples,
                rep.locus_poles, sci5(rep.locus_min_re).c_str(), sci5(rep.locus_max_re).c_str());
    if (!json_path.empty()) {
        json j = {{"command", "stability"},
                  {"scheme", scheme},
                  {"beta", beta},
                  {"mu", mu},
                  {"tau", tau},
                  {"h", h},
                  {"verdict", fdwave::to_string(rep.verdict)},
                  {"locus", {{"samples", rep.locus_samples}, {"poles", rep.locus_poles}}}};
        if (rep.has_cfl) j["cfl_r"] = rep.r;
        write_json(json_path, j);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite difference solver for the time-fractional diffusion-wave equation"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help"); // frees -h/--h for the step size

    std::string problem = "example1", scheme = "I", axis = "time", metric = "max";
    std::string csv_path, json_path;
    double beta = 1.5, mu = 1.0, tau = 0.0, h = 0.0;
    int nx = 0, nt = 0;
    std::vector<int> levels;

    auto* solve = app.add_subcommand("solve", "run one scheme on one grid");
    solve->add_option("--problem", problem, "problem name (example1, example2)");
    solve->add_option("--scheme", scheme, "scheme (I, NG, II, III1, III2)");
    solve->add_option("--beta", beta, "fractional order in (1, 2]")->required();
    solve->add_option("--nx", nx, "spatial intervals")->required();
    solve->add_option("--nt", nt, "time steps")->required();
    solve->add_option("--metric", metric)->check(CLI::IsMember({"max", "final"}));
    solve->add_option("--json", json_path, "write a run manifest");

    auto* sweep = app.add_subcommand("sweep", "refinement sweep with observed orders");
    sweep->add_option("--problem", problem);
    sweep->add_option("--scheme", scheme);
    sweep->add_option("--beta", beta)->required();
    sweep->add_option("--axis", axis)->check(CLI::IsMember({"time", "space", "coupled"}));
    sweep->add_option("--levels", levels, "grid levels, e.g. 16,32,64")->required()->delimiter(',');
    sweep->add_option("--nx", nx, "fixed spatial intervals (time axis)");
    sweep->add_option("--nt", nt, "fixed time steps (space axis)");
    sweep->add_option("--metric", metric)->check(CLI::IsMember({"max", "final"}));
    sweep->add_option("--csv", csv_path, "write rows as level,error,order");
    sweep->add_option("--json", json_path, "write a run manifest");

    auto* stab = app.add_subcommand("stability", "CFL ratio, verdict, boundary locus");
    stab->set_help_flag("--help", "print help");
    stab->add_option("--scheme", scheme);
    stab->add_option("--beta", beta)->required();
    stab->add_option("--mu", mu);
    stab->add_option("--tau", tau)->required();
    stab->add_option("--h", h)->required();
    stab->add_option("--json", json_path, "write a run manifest");

    try {
        app.parse(argc, argv);
        if (solve->parsed())
            return run_solve(problem, scheme, beta, nx, nt, metric, json_path);
        if (sweep->parsed())
            return run_sweep(problem, scheme, beta, axis, levels, nx, nt, metric, csv_path,
                             json_path);
        return run_stability(scheme, beta, mu, tau, h, json_path);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints message
        return 2;
    } catch (const fdwave::DegenerateSystemError& e) {
        std::cerr << "numerical setup error: " << e.what() << '\n';
        return 3;
    } catch (const fdwave::SingularSystemError& e) {
        std::cerr << "numerical setup error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsvar/ambiguity.hpp"
#include "tsvar/identify.hpp"
#include "tsvar/model_io.hpp"
#include "tsvar/parallel.hpp"
#include "tsvar/solver.hpp"

namespace {

using namespace tsvar;

int exit_code(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::parse: return 2;
        case ErrorCategory::grid: return 3;
        case ErrorCategory::feasibility: return 4;
        case ErrorCategory::convergence: return 5;
        case ErrorCategory::io: return 6;
        case ErrorCategory::domain: return 7;
        case ErrorCategory::degenerate: return 8;
        case ErrorCategory::alignment: return 9;
        case ErrorCategory::boundary: return 10;
        case ErrorCategory::infeasible: return 11;
    }
    return 12;
}

const char* category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::parse: return "parse";
        case ErrorCategory::grid: return "grid";
        case ErrorCategory::feasibility: return "feasibility";
        case ErrorCategory::convergence: return "convergence";
        case ErrorCategory::io: return "io";
        case ErrorCategory::domain: return "domain";
        case ErrorCategory::degenerate: return "degenerate";
        case ErrorCategory::alignment: return "alignment";
        case ErrorCategory::boundary: return "boundary";
        case ErrorCategory::infeasible: return "infeasible";
    }
    return "internal";
}

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct Output {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file) throw IoError("cannot open " + path + " for writing");
            stream = &file;
        }
    }
    std::ostream& out() { return *stream; }
    void finish() {
        stream->flush();
        if (file.is_open() && !file) throw IoError("failed writing output file");
    }
};

Side parse_side(const std::string& s) {
    if (s == "upper") return Side::upper;
    if (s == "lower") return Side::lower;
    throw DomainError("side must be 'upper' or 'lower'");
}

Scheme parse_scheme(const std::string& s) {
    if (s == "plain") return Scheme::plain;
    if (s == "tilted") return Scheme::tilted;
    throw DomainError("scheme must be 'plain' or 'tilted'");
}

double default_q(Side side) { return side == Side::upper ? 0.33 : 1.33; }

/// "start:stop:points[:log]"
std::vector<double> parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4)
        throw DomainError("grid must be start:stop:points[:log]");
    double start = 0.0, stop = 0.0;
    long points = 0;
    try {
        start = std::stod(parts[0]);
        stop = std::stod(parts[1]);
        points = std::stol(parts[2]);
    } catch (const std::exception&) {
        throw DomainError("grid must be numeric start:stop:points[:log]");
    }
    const bool log_spaced = parts.size() == 4;
    if (log_spaced && parts[3] != "log")
        throw DomainError("grid qualifier must be 'log'");
    if (points < 1) throw DomainError("grid needs at least one point");
    if (log_spaced && (start <= 0.0 || stop <= 0.0))
        throw DomainError("log grids need positive endpoints");

    std::vector<double> grid(static_cast<std::size_t>(points));
    if (points == 1) {
        grid[0] = start;
        return grid;
    }
    for (long i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        grid[static_cast<std::size_t>(i)] =
            log_spaced ? start * std::pow(stop / start, t) : start + t * (stop - start);
    }
    return grid;
}

struct CommonModelArgs {
    std::string model_path;
    std::string side_text = "upper";
    std::vector<double> q_values;
    std::size_t m_log2 = 15;
    std::size_t n_override = 0;
    std::string scheme_text = "tilted";
    std::string output_path;
    double lambda_start = 500.0;

    std::size_t count() const { return n_override ? n_override : (std::size_t{1} << m_log2); }
    DescendOptions descend_options() const {
        DescendOptions o;
        o.lambda0 = lambda_start;
        return o;
    }
};

void add_model_args(CLI::App* cmd, CommonModelArgs& args, bool multi_q) {
    cmd->add_option("--model", args.model_path, "fitted model JSON file")->required();
    cmd->add_option("--side", args.side_text, "upper|lower")->default_val("upper");
    if (multi_q)
        cmd->add_option("--q", args.q_values,
                        "shape parameter(s); default 0.33 upper / 1.33 lower");
    else
        cmd->add_option("--q", args.q_values, "shape parameter; default 0.33 upper / 1.33 lower")
            ->expected(0, 1);
    cmd->add_option("--m", args.m_log2, "log2 of the quadrature resolution")->default_val(15);
    cmd->add_option("--n", args.n_override, "quadrature resolution (overrides --m)");
    cmd->add_option("--scheme", args.scheme_text, "plain|tilted (upper side)")
        ->default_val("tilted");
    cmd->add_option("--output", args.output_path, "write to file instead of stdout");
    cmd->add_option("--lambda-start", args.lambda_start,
                    "initial lambda for the gradient descent")
        ->default_val(500.0);
}

int run_fit(const std::string& input, const std::string& output, std::string station,
            std::size_t max_lag) {
    const TimeSeries ts = load_series(input);
    if (station.empty())
        station = std::filesystem::path(input).stem().string();
    const std::size_t lag = std::min(max_lag, ts.size() - 1);
    const FitReport report = fit_model(ts, lag);

    const ModelFile mf = model_from_report(
        report, station, ts.first_timestamp + "/" + ts.last_timestamp);
    save_model(mf, output);

    const StationaryStats s = stationary_stats(report.model);
    const EmpiricalMoments& e = report.observed;
    std::ostream& out = std::cout;
    out << "# fit report: station=" << station << " rows=" << ts.size()
        << " span=" << mf.record_span << " gap_segments=" << ts.gap_segments
        << " missing_hours=" << ts.missing_hours << "\n";
    out << "# acf_lag_cutoff=" << report.acf_lag_cutoff
        << " objective_value=" << g17(report.objective_value) << "\n";
    out << "statistic,observed,fitted,relative_error\n";
    out << "average," << g17(e.mean) << "," << g17(s.mean) << "," << g17(report.residuals[0])
        << "\n";
    out << "variance," << g17(e.variance) << "," << g17(s.variance) << ","
        << g17(report.residuals[1]) << "\n";
    out << "skewness," << g17(e.skew_normalized) << "," << g17(s.skew_normalized) << ","
        << g17(report.residuals[2]) << "\n";
    out << "kurtosis," << g17(e.kurt_normalized) << "," << g17(s.kurt_normalized) << ","
        << g17(report.residuals[3]) << "\n";
    out << "parameter,value\n";
    out << "shift," << g17(report.model.shift) << "\n";
    out << "alpha," << g17(report.model.reversion.alpha) << "\n";
    out << "beta," << g17(report.model.reversion.beta) << "\n";
    out << "A," << g17(report.model.levy.intensity) << "\n";
    out << "B," << g17(report.model.levy.tempering) << "\n";
    out << "C," << g17(report.model.levy.stability) << "\n";
    out << "activity,"
        << (activity_class(report.model.levy) == ActivityClass::finite ? "finite" : "infinite")
        << "\n";
    return 0;
}

int run_tsvar(const CommonModelArgs& args, double a) {
    const ModelFile mf = load_model(args.model_path);
    const Side side = parse_side(args.side_text);
    const double q = args.q_values.empty() ? default_q(side) : args.q_values.front();
    TsVaRProblem problem(mf.model.reversion, side, ShapeParameter(q), a, args.count(),
                         parse_scheme(args.scheme_text));
    const TsVaRSolution sol = descend(problem, args.descend_options());

    Output output(args.output_path);
    output.out() << "value,lambda_star,iterations,normalized\n"
                 << g17(sol.value) << "," << g17(sol.lambda_star) << "," << sol.iterations
                 << "," << g17(sol.normalized) << "\n";
    output.finish();
    return 0;
}

int run_converge(const CommonModelArgs& args, double a, const std::string& m_range,
                 const std::string& schemes_text) {
    const ModelFile mf = load_model(args.model_path);
    const Side side = parse_side(args.side_text);
    const double q = args.q_values.empty() ? default_q(side) : args.q_values.front();

    std::size_t m_lo = 0, m_hi = 0;
    {
        const auto colon = m_range.find(':');
        try {
            if (colon == std::string::npos) {
                m_lo = m_hi = std::stoul(m_range);
            } else {
                m_lo = std::stoul(m_range.substr(0, colon));
                m_hi = std::stoul(m_range.substr(colon + 1));
            }
        } catch (const std::exception&) {
            throw DomainError("m range must be lo:hi");
        }
        if (m_lo > m_hi || m_hi > 24) throw DomainError("m range must satisfy lo <= hi <= 24");
    }

    std::vector<Scheme> schemes;
    if (side == Side::lower) {
        schemes.push_back(Scheme::plain);
    } else {
        std::stringstream ss(schemes_text);
        std::string item;
        while (std::getline(ss, item, ',')) schemes.push_back(parse_scheme(item));
        if (schemes.empty()) throw DomainError("no schemes requested");
    }

    const std::size_t rows = m_hi - m_lo + 1;
    std::vector<std::vector<TsVaRSolution>> cells(schemes.size(),
                                                  std::vector<TsVaRSolution>(rows));
    parallel_for(rows * schemes.size(), [&](std::size_t idx) {
        const std::size_t si = idx / rows;
        const std::size_t mi = idx % rows;
        TsVaRProblem p(mf.model.reversion, side, ShapeParameter(q), a,
                       std::size_t{1} << (m_lo + mi), schemes[si]);
        cells[si][mi] = descend(p, args.descend_options());
    });

    Output output(args.output_path);
    std::ostream& out = output.out();
    out << "m";
    for (Scheme s : schemes) {
        const char* tag = side == Side::lower ? "lower"
                          : (s == Scheme::plain ? "plain" : "tilted");
        out << "," << tag << "_value," << tag << "_error";
    }
    out << "\n";
    for (std::size_t mi = 0; mi < rows; ++mi) {
        out << (m_lo + mi);
        for (std::size_t si = 0; si < schemes.size(); ++si) {
            out << "," << g17(cells[si][mi].value) << ",";
            if (mi + 1 < rows)
                out << g17(std::fabs(cells[si][mi].value - cells[si][rows - 1].value));
        }
        out << "\n";
    }
    output.finish();
    return 0;
}

int run_sweep(const CommonModelArgs& args, const std::string& var, const std::string& grid_text) {
    const ModelFile mf = load_model(args.model_path);
    const Side side = parse_side(args.side_text);
    std::vector<double> qs = args.q_values;
    if (qs.empty()) qs.push_back(default_q(side));
    const std::vector<double> grid = parse_grid(grid_text);

    Output output(args.output_path);
    std::ostream& out = output.out();

    if (var == "a") {
        out << "q,a,value,lambda_star,normalized,status\n";
        for (double q : qs) {
            TsVaRProblem tmpl(mf.model.reversion, side, ShapeParameter(q), 1.0, args.count(),
                              parse_scheme(args.scheme_text));
            const auto points = accuracy_sweep(tmpl, grid, args.descend_options());
            for (const auto& pt : points) {
                out << g17(q) << "," << g17(pt.a) << ",";
                if (pt.solution)
                    out << g17(pt.solution->value) << "," << g17(pt.solution->lambda_star)
                        << "," << g17(pt.solution->normalized) << ",ok\n";
                else
                    out << ",,,infeasible\n";
            }
        }
    } else if (var == "lambda0") {
        out << "q,lambda0,a_star,tsvar,normalized,status\n";
        const DiscreteMeasure d = DiscreteMeasure::quantiles(mf.model.reversion, args.count());
        for (double q : qs) {
            const auto points =
                scenario_sweep(side, grid, ShapeParameter(q), d, mf.model.reversion);
            for (const auto& pt : points) {
                out << g17(q) << "," << g17(pt.lambda0) << ",";
                if (pt.scenario)
                    out << g17(pt.scenario->a_star) << "," << g17(pt.scenario->tsvar) << ","
                        << g17(pt.scenario->normalized) << ",ok\n";
                else
                    out << ",,,infeasible\n";
            }
        }
    } else {
        throw DomainError("--var must be 'a' or 'lambda0'");
    }
    output.finish();
    return 0;
}

int run_rnderiv(const CommonModelArgs& args, double lambda0) {
    const ModelFile mf = load_model(args.model_path);
    const Side side = parse_side(args.side_text);
    const double q = args.q_values.empty() ? default_q(side) : args.q_values.front();
    const DiscreteMeasure d = DiscreteMeasure::quantiles(mf.model.reversion, args.count());
    const AmbiguityScenario sc =
        scenario(side, lambda0, ShapeParameter(q), d, mf.model.reversion,
                 args.descend_options());

    Output output(args.output_path);
    std::ostream& out = output.out();
    out << "# lambda0=" << g17(sc.lambda0) << " a_star=" << g17(sc.a_star)
        << " tsvar=" << g17(sc.tsvar) << " normalized=" << g17(sc.normalized) << "\n";
    out << "r,phi\n";
    const auto nodes = d.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i)
        out << g17(nodes[i]) << "," << g17(sc.phi_star[i]) << "\n";
    output.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"supOU streamflow models and robust inverse-moment bounds"};
    app.require_subcommand(1);

    // fit
    auto* fit = app.add_subcommand("fit", "identify a supOU model from an hourly CSV record");
    std::string fit_input, fit_output, fit_station;
    std::size_t fit_max_lag = 2000;
    fit->add_option("--input", fit_input, "CSV with header timestamp,discharge")->required();
    fit->add_option("--output", fit_output, "model JSON to write")->required();
    fit->add_option("--station", fit_station, "station name for the model metadata");
    fit->add_option("--max-lag", fit_max_lag, "largest autocorrelation lag to estimate")
        ->default_val(2000);

    // tsvar
    auto* tsvar_cmd =
        app.add_subcommand("tsvar", "evaluate one robust bound of the inverse moment");
    CommonModelArgs tsvar_args;
    double tsvar_a = 0.0;
    add_model_args(tsvar_cmd, tsvar_args, false);
    tsvar_cmd->add_option("--a", tsvar_a, "accuracy parameter in (0, 1]")->required();

    // converge
    auto* converge_cmd =
        app.add_subcommand("converge", "resolution-convergence table for the bound");
    CommonModelArgs converge_args;
    double converge_a = 0.0;
    std::string converge_m_range = "12:17", converge_schemes = "plain,tilted";
    add_model_args(converge_cmd, converge_args, false);
    converge_cmd->add_option("--a", converge_a, "accuracy parameter in (0, 1]")->required();
    converge_cmd->add_option("--m-range", converge_m_range, "lo:hi range of log2 resolutions")
        ->default_val("12:17");
    converge_cmd
        ->add_option("--schemes", converge_schemes, "comma list of schemes (upper side)")
        ->default_val("plain,tilted");

    // sweep
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "sweep the accuracy parameter or the ambiguity-aversion parameter");
    CommonModelArgs sweep_args;
    std::string sweep_var = "lambda0", sweep_grid;
    add_model_args(sweep_cmd, sweep_args, true);
    sweep_cmd->add_option("--var", sweep_var, "a|lambda0")->default_val("lambda0");
    sweep_cmd->add_option("--grid", sweep_grid, "start:stop:points[:log]")->required();

    // rnderiv
    auto* rnd_cmd = app.add_subcommand(
        "rnderiv", "worst-case Radon-Nikodym derivative for one aversion level");
    CommonModelArgs rnd_args;
    double rnd_lambda0 = 0.0;
    add_model_args(rnd_cmd, rnd_args, false);
    rnd_cmd->add_option("--lambda0", rnd_lambda0, "ambiguity-aversion parameter > 0")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (fit->parsed()) return run_fit(fit_input, fit_output, fit_station, fit_max_lag);
        if (tsvar_cmd->parsed()) return run_tsvar(tsvar_args, tsvar_a);
        if (converge_cmd->parsed())
            return run_converge(converge_args, converge_a, converge_m_range, converge_schemes);
        if (sweep_cmd->parsed()) return run_sweep(sweep_args, sweep_var, sweep_grid);
        if (rnd_cmd->parsed()) return run_rnderiv(rnd_args, rnd_lambda0);
    } catch (const tsvar::Error& e) {
        std::cerr << "error[" << category_name(e.category()) << "]: " << e.what() << "\n";
        return exit_code(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 12;
    }
    return 0;
}

#pragma once

// Command-line driver. Each subcommand reads a JSON document (from a file
// or stdin), runs one library operation, and writes a canonical JSON report
// to stdout. Exit codes: 0 for a positive verdict, 1 for a mathematical
// negative (the report still carries the verdict), 2 for input problems —
// malformed JSON, schema violations, or domain errors.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include "wedge/cartan_test.hpp"
#include "wedge/config.hpp"
#include "wedge/connection.hpp"
#include "wedge/energy_momentum.hpp"
#include "wedge/error.hpp"
#include "wedge/exterior_system.hpp"
#include "wedge/gauss_map.hpp"
#include "wedge/gauss_solve.hpp"
#include "wedge/json_io.hpp"

namespace wedge {

namespace detail {

inline std::string read_input(const std::string& path, std::istream& in) {
    if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open input file '" + path + "'");
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline Json config_echo(const Config& cfg) {
    return Json{{"seed", cfg.seed},
                {"tol_rank", cfg.rank_rel_tol},
                {"tol_residual", cfg.residual_tol},
                {"max_iters", cfg.max_iterations},
                {"starts", cfg.starts},
                {"json_indent", cfg.json_indent}};
}

inline int run_frobenius(const Json& doc, Json& report) {
    const auto violations = validate_system_document(doc);
    if (!violations.empty()) {
        report["schema_violations"] = violations;
        return 2;
    }
    const SystemDocument sys = parse_system_document(doc);
    const FrobeniusResult res = frobenius_check(sys.system);
    report["integrable"] = res.integrable;
    if (res.integrable) return 0;
    report["witness"] = res.witness->str(sys.chart);
    return 1;
}

inline int run_close(const Json& doc, Json& report) {
    const auto violations = validate_system_document(doc);
    if (!violations.empty()) {
        report["schema_violations"] = violations;
        return 2;
    }
    const SystemDocument sys = parse_system_document(doc);
    report.update(system_to_json(close_system(sys.system), sys.chart));
    return 0;
}

inline int run_cartan_test(const Json& doc, Json& report, const Config& cfg) {
    const auto violations = validate_cartan_document(doc);
    if (!violations.empty()) {
        report["schema_violations"] = violations;
        return 2;
    }
    const SystemDocument sys = parse_system_document(doc);
    const ExteriorSystem closed = close_system(sys.system);
    const std::vector<Rational> base = parse_rational_vector(doc.at("base"));
    Flag flag;
    if (doc.contains("flag")) {
        flag.base = base;
        for (const auto& vec : doc.at("flag")) flag.vectors.push_back(parse_rational_vector(vec));
    } else {
        flag = greedy_flag(closed, base, doc.at("flag_length").get<int>());
    }
    const CartanReport rep = cartan_test(closed, flag, cfg);
    report.update(cartan_report_to_json(rep));
    return rep.ordinary ? 0 : 1;
}

inline int run_gauss_solve(const Json& doc, Json& report, const Config& cfg) {
    const auto violations = validate_gauss_document(doc);
    if (!violations.empty()) {
        report["schema_violations"] = violations;
        return 2;
    }
    const ProblemDims d{doc.at("m").get<int>(), doc.at("n").get<int>(), doc.at("kappa").get<int>()};
    const CurvatureTensor target = parse_curvature(doc, d.n, d.m);
    const PhiCoefficients psi = parse_psi(doc, d.n, d.m);
    try {
        const SolveReport rep = solve_gauss(target, psi, d, cfg);
        report.update(solve_report_to_json(rep));
        return 0;
    } catch (const SolveFailure& e) {
        report["converged"] = false;
        report["best_residual"] = e.best_residual;
        report["error"] = e.what();
        return 1;
    }
}

inline int run_dims(int m, int n, int kappa, Json& report) {
    report.update(dims_to_json(dimension_audit({m, n, kappa})));
    return 0;
}

inline int run_conserve(const Json& doc, Json& report) {
    const auto violations = validate_conserve_document(doc);
    if (!violations.empty()) {
        report["schema_violations"] = violations;
        return 2;
    }
    const auto chart = doc.at("chart").get<std::vector<std::string>>();
    const int m = static_cast<int>(chart.size());
    EnergyMomentum t;
    for (const auto& row : doc.at("T")) {
        std::vector<Poly> prow;
        for (const auto& entry : row) prow.push_back(Poly::parse(entry.get<std::string>(), chart));
        t.t.push_back(std::move(prow));
    }
    std::vector<Form> eta;
    for (const auto& f : doc.at("coframe")) eta.push_back(parse_form_terms(f, chart));
    const CoFrame frame(std::move(eta));
    const ConnectionForm omega = levi_civita(frame);
    std::vector<std::vector<Rational>> pts;
    if (doc.contains("sample_points"))
        for (const auto& p : doc.at("sample_points")) pts.push_back(parse_rational_vector(p));
    const EquivalenceReport rep = verify_equivalence(t, frame, omega, pts);
    report.update(equivalence_report_to_json(rep, chart));
    report["codomain_dim"] = conservation_codomain_dim(m);
    return rep.matches ? 0 : 1;
}

inline int run_levi_civita(const Json& doc, Json& report) {
    const auto violations = validate_coframe_document(doc);
    if (!violations.empty()) {
        report["schema_violations"] = violations;
        return 2;
    }
    const auto chart = doc.at("chart").get<std::vector<std::string>>();
    std::vector<Form> eta;
    for (const auto& f : doc.at("coframe")) eta.push_back(parse_form_terms(f, chart));
    const CoFrame frame(std::move(eta));
    if (doc.contains("point")) {
        const std::vector<Rational> pt = parse_rational_vector(doc.at("point"));
        const auto omega = levi_civita_at(frame, pt);
        Json rows = Json::array(), echo = Json::array();
        for (const auto& row : omega) {
            Json jr = Json::array();
            for (const auto& f : row) jr.push_back(exact_form_to_json(f));
            rows.push_back(std::move(jr));
        }
        for (const auto& v : pt) echo.push_back(v.str());
        report["connection"] = std::move(rows);
        report["point"] = std::move(echo);
    } else {
        report["connection"] = connection_to_json(levi_civita(frame), chart);
    }
    return 0;
}

} // namespace detail

inline int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                    std::ostream& err) {
    CLI::App app{"exterior differential systems workbench"};
    app.require_subcommand(1);

    std::string input = "-";
    Config cfg;
    int m = 0, n = 0, kappa = 0;

    const auto add_config = [&cfg](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "base seed for randomized starts");
        sub->add_option("--tol-rank", cfg.rank_rel_tol, "relative singular-value rank cutoff");
        sub->add_option("--tol-residual", cfg.residual_tol, "solver convergence bound (max norm)");
        sub->add_option("--max-iters", cfg.max_iterations, "iteration cap per solver start");
        sub->add_option("--starts", cfg.starts, "number of randomized solver starts");
        sub->add_option("--json-indent", cfg.json_indent, "report indentation (0 = single line)");
    };
    const auto add_input = [&input](CLI::App* sub) {
        sub->add_option("--input", input, "input JSON document path, or - for stdin");
    };

    CLI::App* frob = app.add_subcommand("frobenius", "Frobenius involutivity of a Pfaffian system");
    CLI::App* close = app.add_subcommand("close", "differential closure of an exterior system");
    CLI::App* cartan = app.add_subcommand("cartan-test", "Cartan test at a flag of an integral element");
    CLI::App* gauss = app.add_subcommand("gauss-solve", "solve the curvature prescription problem");
    CLI::App* dims = app.add_subcommand("dims", "dimension audit for the curvature prescription");
    CLI::App* conserve = app.add_subcommand("conserve", "divergence/exterior-derivative equivalence");
    CLI::App* lc = app.add_subcommand("levi-civita", "torsion-free metric connection of a coframe");

    for (CLI::App* sub : {frob, close, cartan, gauss, conserve, lc}) {
        add_input(sub);
        add_config(sub);
    }
    add_config(dims);
    dims->add_option("--m", m, "base dimension")->required();
    dims->add_option("--n", n, "fiber frame dimension")->required();
    dims->add_option("--kappa", kappa, "codimension")->required();

    std::vector<const char*> argv;
    argv.push_back("wedge");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    Json report{{"schema_version", schema_version},
                {"command", command},
                {"config", detail::config_echo(cfg)}};
    int code = 2;
    try {
        if (dims->parsed()) {
            code = detail::run_dims(m, n, kappa, report);
        } else {
            const Json doc = Json::parse(detail::read_input(input, in));
            if (frob->parsed()) code = detail::run_frobenius(doc, report);
            else if (close->parsed()) code = detail::run_close(doc, report);
            else if (cartan->parsed()) code = detail::run_cartan_test(doc, report, cfg);
            else if (gauss->parsed()) code = detail::run_gauss_solve(doc, report, cfg);
            else if (conserve->parsed()) code = detail::run_conserve(doc, report);
            else code = detail::run_levi_civita(doc, report);
        }
    } catch (const std::exception& e) {
        report["error"] = e.what();
        code = 2;
    }
    out << canonical_dump(report, cfg.json_indent) << "\n";
    return code;
}

} // namespace wedge

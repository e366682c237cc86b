#pragma once

// JSON input/output for the command-line driver.
//
// Inputs are parsed with nlohmann::json; outputs go through a canonical
// writer so that equal documents always serialize to identical bytes:
// object keys sorted lexicographically, floating-point numbers printed
// with 17 significant digits, UTF-8 passed through unchanged.
//
// Schema validation is separate from parsing and returns a list of
// human-readable violations instead of throwing, so a driver can report
// every problem in a document at once.

#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "wedge/cartan_test.hpp"
#include "wedge/config.hpp"
#include "wedge/connection.hpp"
#include "wedge/energy_momentum.hpp"
#include "wedge/error.hpp"
#include "wedge/exterior_system.hpp"
#include "wedge/form.hpp"
#include "wedge/gauss_map.hpp"
#include "wedge/gauss_solve.hpp"
#include "wedge/poly.hpp"
#include "wedge/rational.hpp"

namespace wedge {

using Json = nlohmann::json;

inline constexpr int schema_version = 1;

// ---------------------------------------------------------------------------
// Canonical writer
// ---------------------------------------------------------------------------

namespace detail {

inline void dump_escaped(const std::string& s, std::string& out) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

inline void dump_number(const Json& j, std::string& out) {
    char buf[64];
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) throw Error("non-finite number in report");
        std::snprintf(buf, sizeof buf, "%.17g", v);
    } else if (j.is_number_unsigned()) {
        std::snprintf(buf, sizeof buf, "%" PRIu64, j.get<std::uint64_t>());
    } else {
        std::snprintf(buf, sizeof buf, "%" PRId64, j.get<std::int64_t>());
    }
    out += buf;
}

inline void dump_canonical(const Json& j, int indent, int depth, std::string& out) {
    const auto newline = [&](int d) {
        if (indent <= 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent) * d, ' ');
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) { out += "{}"; return; }
            out += '{';
            bool first = true;
            for (const auto& [key, val] : j.items()) { // std::map order: sorted
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                dump_escaped(key, out);
                out += indent > 0 ? ": " : ":";
                dump_canonical(val, indent, depth + 1, out);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) { out += "[]"; return; }
            out += '[';
            bool first = true;
            for (const auto& val : j) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                dump_canonical(val, indent, depth + 1, out);
            }
            newline(depth);
            out += ']';
            return;
        }
        case Json::value_t::string: dump_escaped(j.get<std::string>(), out); return;
        case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; return;
        case Json::value_t::null: out += "null"; return;
        default: dump_number(j, out); return;
    }
}

} // namespace detail

// Deterministic serialization: sorted keys, %.17g floats. indent <= 0 gives
// a single-line document; indent > 0 pretty-prints with that many spaces.
[[nodiscard]] inline std::string canonical_dump(const Json& j, int indent = 2) {
    std::string out;
    detail::dump_canonical(j, indent, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Schema validation: each validator appends messages to `out` and never
// throws. A document is well-formed exactly when the result is empty.
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_integer(const Json& j) { return j.is_number_integer() || j.is_number_unsigned(); }

inline bool check_chart(const Json& parent, std::vector<std::string>& out,
                        const std::string& where) {
    if (!parent.is_object() || !parent.contains(where)) {
        out.push_back(where + " must be a non-empty array of variable names");
        return false;
    }
    const Json& j = parent[where];
    if (!j.is_array() || j.empty()) {
        out.push_back(where + " must be a non-empty array of variable names");
        return false;
    }
    bool ok = true;
    for (const auto& v : j)
        if (!v.is_string() || v.get<std::string>().empty()) {
            out.push_back(where + " entries must be non-empty strings");
            ok = false;
            break;
        }
    if (ok) {
        for (std::size_t a = 0; a < j.size(); ++a)
            for (std::size_t b = a + 1; b < j.size(); ++b)
                if (j[a] == j[b]) {
                    out.push_back(where + " contains the duplicate variable '" +
                                  j[a].get<std::string>() + "'");
                    return false;
                }
    }
    return ok;
}

inline void check_coef(const Json& c, const std::vector<std::string>& chart,
                       std::vector<std::string>& out, const std::string& where) {
    if (!c.is_string()) {
        out.push_back(where + " must be a polynomial string");
        return;
    }
    try {
        (void)Poly::parse(c.get<std::string>(), chart);
    } catch (const ParseError& e) {
        out.push_back(where + ": " + e.what());
    }
}

inline void check_form_fields(const Json& j, const std::vector<std::string>& chart,
                              std::vector<std::string>& out, const std::string& where) {
    const int dim = static_cast<int>(chart.size());
    if (!j.is_object()) {
        out.push_back(where + " must be an object with degree and terms");
        return;
    }
    if (!j.contains("degree") || !is_integer(j["degree"]) || j["degree"].get<int>() < 0 ||
        j["degree"].get<int>() > dim) {
        out.push_back(where + ".degree must be an integer between 0 and the chart dimension");
        return;
    }
    const int degree = j["degree"].get<int>();
    if (!j.contains("terms") || !j["terms"].is_array()) {
        out.push_back(where + ".terms must be an array");
        return;
    }
    int ti = 0;
    for (const auto& term : j["terms"]) {
        const std::string at = where + ".terms[" + std::to_string(ti++) + "]";
        if (!term.is_object() || !term.contains("coef") || !term.contains("idx")) {
            out.push_back(at + " must be an object with coef and idx");
            continue;
        }
        check_coef(term["coef"], chart, out, at + ".coef");
        const Json& idx = term["idx"];
        if (!idx.is_array()) {
            out.push_back(at + ".idx must be an array of 1-based coframe indices");
            continue;
        }
        if (static_cast<int>(idx.size()) != degree) {
            out.push_back(at + ".idx length must equal the degree");
            continue;
        }
        bool numeric = true;
        for (const auto& v : idx)
            if (!is_integer(v)) {
                out.push_back(at + ".idx entries must be integers");
                numeric = false;
                break;
            }
        if (!numeric) continue;
        for (const auto& v : idx)
            if (v.get<int>() < 1 || v.get<int>() > dim) {
                out.push_back(at + ".idx entries must lie between 1 and " + std::to_string(dim));
                numeric = false;
                break;
            }
        if (!numeric) continue;
        for (std::size_t k = 1; k < idx.size(); ++k)
            if (idx[k - 1].get<int>() >= idx[k].get<int>()) {
                out.push_back(at + ".idx must be strictly increasing");
                break;
            }
    }
}

inline bool check_rational(const Json& v) {
    if (is_integer(v) || v.is_number_float()) return true;
    if (!v.is_string()) return false;
    try {
        (void)Rational::parse(v.get<std::string>());
        return true;
    } catch (const ParseError&) {
        return false;
    }
}

inline void check_vector_list(const Json& j, int dim, std::vector<std::string>& out,
                              const std::string& where) {
    if (!j.is_array()) {
        out.push_back(where + " must be an array of chart-dimension vectors");
        return;
    }
    int vi = 0;
    for (const auto& vec : j) {
        const std::string at = where + "[" + std::to_string(vi++) + "]";
        if (!vec.is_array() || static_cast<int>(vec.size()) != dim) {
            out.push_back(at + " must be an array of length " + std::to_string(dim));
            continue;
        }
        for (const auto& v : vec)
            if (!check_rational(v)) {
                out.push_back(at + " entries must be integers or rational strings");
                break;
            }
    }
}

} // namespace detail

// {"chart": [...], "degree": d, "terms": [{"coef": "...", "idx": [...]}]}
[[nodiscard]] inline std::vector<std::string> validate_form_document(const Json& j) {
    std::vector<std::string> out;
    if (!j.is_object()) {
        out.push_back("document must be a JSON object");
        return out;
    }
    if (!detail::check_chart(j, out, "chart")) return out;
    const auto chart = j["chart"].get<std::vector<std::string>>();
    detail::check_form_fields(j, chart, out, "form");
    return out;
}

// {"chart": [...], "generators": [form, ...]} where each generator carries
// degree and terms (a redundant per-generator chart must match the top one).
[[nodiscard]] inline std::vector<std::string> validate_system_document(const Json& j) {
    std::vector<std::string> out;
    if (!j.is_object()) {
        out.push_back("document must be a JSON object");
        return out;
    }
    if (!detail::check_chart(j, out, "chart")) return out;
    const auto chart = j["chart"].get<std::vector<std::string>>();
    if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty()) {
        out.push_back("generators must be a non-empty array of forms");
        return out;
    }
    int gi = 0;
    for (const auto& g : j["generators"]) {
        const std::string where = "generators[" + std::to_string(gi++) + "]";
        if (g.is_object() && g.contains("chart") && g["chart"] != j["chart"]) {
            out.push_back(where + ".chart must match the document chart");
            continue;
        }
        detail::check_form_fields(g, chart, out, where);
    }
    return out;
}

// System document plus "base" (chart point) and either "flag" (list of
// vectors) or "flag_length" (greedy flag construction).
[[nodiscard]] inline std::vector<std::string> validate_cartan_document(const Json& j) {
    std::vector<std::string> out = validate_system_document(j);
    if (!out.empty() && !j.is_object()) return out;
    if (!j.is_object() || !j.contains("chart") || !j["chart"].is_array()) return out;
    const int dim = static_cast<int>(j["chart"].size());
    if (!j.contains("base") || !j["base"].is_array() ||
        static_cast<int>(j["base"].size()) != dim) {
        out.push_back("base must be a chart point: an array of length " + std::to_string(dim));
    } else {
        for (const auto& v : j["base"])
            if (!detail::check_rational(v)) {
                out.push_back("base entries must be integers or rational strings");
                break;
            }
    }
    const bool has_flag = j.contains("flag");
    const bool has_len = j.contains("flag_length");
    if (has_flag == has_len) {
        out.push_back("exactly one of flag or flag_length is required");
    } else if (has_flag) {
        detail::check_vector_list(j["flag"], dim, out, "flag");
    } else if (!detail::is_integer(j["flag_length"]) || j["flag_length"].get<int>() < 0 ||
               j["flag_length"].get<int>() > dim) {
        out.push_back("flag_length must be an integer between 0 and the chart dimension");
    }
    return out;
}

// {"m":..,"n":..,"kappa":..,"R":[{"i","j","lambda","mu","value"}],"psi":[[..]]}
// Curvature indices are 1-based with i<j and lambda<mu.
[[nodiscard]] inline std::vector<std::string> validate_gauss_document(const Json& j) {
    std::vector<std::string> out;
    if (!j.is_object()) {
        out.push_back("document must be a JSON object");
        return out;
    }
    for (const char* key : {"m", "n", "kappa"})
        if (!j.contains(key) || !detail::is_integer(j[key]) || j[key].get<int>() < 1)
            out.push_back(std::string(key) + " must be a positive integer");
    if (!out.empty()) return out;
    const int m = j["m"].get<int>(), n = j["n"].get<int>();
    if (!j.contains("R") || !j["R"].is_array()) {
        out.push_back("R must be an array of curvature entries");
    } else {
        int ri = 0;
        for (const auto& e : j["R"]) {
            const std::string at = "R[" + std::to_string(ri++) + "]";
            if (!e.is_object()) {
                out.push_back(at + " must be an object with i, j, lambda, mu, value");
                continue;
            }
            bool ok = true;
            for (const char* key : {"i", "j", "lambda", "mu"})
                if (!e.contains(key) || !detail::is_integer(e[key])) {
                    out.push_back(at + "." + key + " must be an integer");
                    ok = false;
                }
            if (!e.contains("value") || !e["value"].is_number()) {
                out.push_back(at + ".value must be a number");
                ok = false;
            }
            if (!ok) continue;
            const int i = e["i"].get<int>(), jj = e["j"].get<int>();
            const int lam = e["lambda"].get<int>(), mu = e["mu"].get<int>();
            if (i < 1 || jj < 1 || i >= jj || jj > n)
                out.push_back(at + " needs 1 <= i < j <= n");
            if (lam < 1 || mu < 1 || lam >= mu || mu > m)
                out.push_back(at + " needs 1 <= lambda < mu <= m");
        }
    }
    if (!j.contains("psi") || !j["psi"].is_array() || static_cast<int>(j["psi"].size()) != n) {
        out.push_back("psi must be an n x m matrix of numbers");
    } else {
        for (const auto& row : j["psi"]) {
            if (!row.is_array() || static_cast<int>(row.size()) != m) {
                out.push_back("psi rows must have length m");
                break;
            }
            bool numeric = true;
            for (const auto& v : row)
                if (!v.is_number()) {
                    out.push_back("psi entries must be numbers");
                    numeric = false;
                    break;
                }
            if (!numeric) break;
        }
    }
    return out;
}

// {"chart": [...], "T": [["poly", ...], ...], "coframe": [form, ...],
//  "sample_points": [[rational, ...], ...]} (sample_points optional)
[[nodiscard]] inline std::vector<std::string> validate_conserve_document(const Json& j) {
    std::vector<std::string> out;
    if (!j.is_object()) {
        out.push_back("document must be a JSON object");
        return out;
    }
    if (!detail::check_chart(j, out, "chart")) return out;
    const auto chart = j["chart"].get<std::vector<std::string>>();
    const int dim = static_cast<int>(chart.size());
    if (!j.contains("T") || !j["T"].is_array() || static_cast<int>(j["T"].size()) != dim) {
        out.push_back("T must be an m x m matrix of polynomial strings");
    } else {
        int ri = 0;
        for (const auto& row : j["T"]) {
            const std::string at = "T[" + std::to_string(ri++) + "]";
            if (!row.is_array() || static_cast<int>(row.size()) != dim) {
                out.push_back(at + " must have length " + std::to_string(dim));
                continue;
            }
            for (std::size_t c = 0; c < row.size(); ++c)
                detail::check_coef(row[c], chart, out, at + "[" + std::to_string(c) + "]");
        }
    }
    if (!j.contains("coframe") || !j["coframe"].is_array() ||
        static_cast<int>(j["coframe"].size()) != dim) {
        out.push_back("coframe must be an array of chart-dimension many 1-forms");
    } else {
        int ci = 0;
        for (const auto& f : j["coframe"]) {
            const std::string at = "coframe[" + std::to_string(ci++) + "]";
            detail::check_form_fields(f, chart, out, at);
            if (f.is_object() && f.contains("degree") && detail::is_integer(f["degree"]) &&
                f["degree"].get<int>() != 1)
                out.push_back(at + " must be a 1-form");
        }
    }
    if (j.contains("sample_points")) detail::check_vector_list(j["sample_points"], dim, out,
                                                               "sample_points");
    return out;
}

// {"chart": [...], "coframe": [form, ...], "point": [rational, ...]}
// ("point" optional: forces pointwise evaluation of the connection there).
[[nodiscard]] inline std::vector<std::string> validate_coframe_document(const Json& j) {
    std::vector<std::string> out;
    if (!j.is_object()) {
        out.push_back("document must be a JSON object");
        return out;
    }
    if (!detail::check_chart(j, out, "chart")) return out;
    const auto chart = j["chart"].get<std::vector<std::string>>();
    const int dim = static_cast<int>(chart.size());
    if (!j.contains("coframe") || !j["coframe"].is_array() ||
        static_cast<int>(j["coframe"].size()) != dim) {
        out.push_back("coframe must be an array of chart-dimension many 1-forms");
    } else {
        int ci = 0;
        for (const auto& f : j["coframe"]) {
            const std::string at = "coframe[" + std::to_string(ci++) + "]";
            detail::check_form_fields(f, chart, out, at);
        }
    }
    if (j.contains("point")) {
        if (!j["point"].is_array() || static_cast<int>(j["point"].size()) != dim) {
            out.push_back("point must be an array of length " + std::to_string(dim));
        } else {
            for (const auto& v : j["point"])
                if (!detail::check_rational(v)) {
                    out.push_back("point entries must be integers or rational strings");
                    break;
                }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsers (validated documents; residual problems still throw ParseError)
// ---------------------------------------------------------------------------

[[nodiscard]] inline Rational parse_rational(const Json& v) {
    if (detail::is_integer(v)) return Rational(v.get<long>());
    if (v.is_number_float()) return Rational::from_double(v.get<double>());
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    throw ParseError("expected an integer or rational string");
}

[[nodiscard]] inline std::vector<Rational> parse_rational_vector(const Json& j) {
    std::vector<Rational> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(parse_rational(v));
    return out;
}

// Form from {"degree", "terms"} with idx 1-based in the document.
[[nodiscard]] inline Form parse_form_terms(const Json& j, const std::vector<std::string>& chart) {
    const int dim = static_cast<int>(chart.size());
    Form f(dim, j.at("degree").get<int>());
    for (const auto& term : j.at("terms")) {
        MultiIndex idx;
        for (const auto& v : term.at("idx")) idx.push_back(v.get<int>() - 1);
        f.add_term(idx, Poly::parse(term.at("coef").get<std::string>(), chart));
    }
    return f;
}

struct SystemDocument {
    std::vector<std::string> chart;
    ExteriorSystem system;
};

[[nodiscard]] inline SystemDocument parse_system_document(const Json& j) {
    const auto chart = j.at("chart").get<std::vector<std::string>>();
    std::vector<Form> gens;
    for (const auto& g : j.at("generators")) gens.push_back(parse_form_terms(g, chart));
    return {chart, ExteriorSystem(static_cast<int>(chart.size()), std::move(gens))};
}

[[nodiscard]] inline CurvatureTensor parse_curvature(const Json& j, int n, int m) {
    CurvatureTensor r(n, m);
    for (const auto& e : j.at("R"))
        r.set(e.at("i").get<int>() - 1, e.at("j").get<int>() - 1, e.at("lambda").get<int>() - 1,
              e.at("mu").get<int>() - 1, e.at("value").get<double>());
    return r;
}

[[nodiscard]] inline PhiCoefficients parse_psi(const Json& j, int n, int m) {
    PhiCoefficients psi(n, m);
    for (int i = 0; i < n; ++i)
        for (int lam = 0; lam < m; ++lam) psi.at(i, lam) = j.at("psi")[i][lam].get<double>();
    return psi;
}

// ---------------------------------------------------------------------------
// Serializers
// ---------------------------------------------------------------------------

[[nodiscard]] inline Json form_to_json(const Form& f, const std::vector<std::string>& chart) {
    Json terms = Json::array();
    for (const auto& [idx, coef] : f.terms()) {
        Json ids = Json::array();
        for (int k : idx) ids.push_back(k + 1);
        terms.push_back({{"coef", coef.str(chart)}, {"idx", std::move(ids)}});
    }
    return Json{{"degree", f.degree()}, {"terms", std::move(terms)}};
}

[[nodiscard]] inline Json exact_form_to_json(const ExactPointForm& f) {
    Json terms = Json::array();
    for (const auto& [idx, coef] : f.terms()) {
        Json ids = Json::array();
        for (int k : idx) ids.push_back(k + 1);
        terms.push_back({{"coef", coef.str()}, {"idx", std::move(ids)}});
    }
    return Json{{"degree", f.degree()}, {"terms", std::move(terms)}};
}

[[nodiscard]] inline Json system_to_json(const ExteriorSystem& s,
                                         const std::vector<std::string>& chart) {
    Json gens = Json::array();
    for (const auto& g : s.generators()) gens.push_back(form_to_json(g, chart));
    return Json{{"chart", chart}, {"generators", std::move(gens)}};
}

[[nodiscard]] inline Json cartan_report_to_json(const CartanReport& r) {
    return Json{{"characters", r.characters},
                {"extension_ranks", r.extension_ranks},
                {"sum_C", r.character_sum},
                {"codim_V", r.codim_variety},
                {"ordinary", r.ordinary}};
}

[[nodiscard]] inline Json curvature_to_json(const CurvatureTensor& r) {
    Json out = Json::array();
    for (int i = 0; i < r.n; ++i)
        for (int j = i + 1; j < r.n; ++j)
            for (int lam = 0; lam < r.m; ++lam)
                for (int mu = lam + 1; mu < r.m; ++mu)
                    out.push_back({{"i", i + 1},
                                   {"j", j + 1},
                                   {"lambda", lam + 1},
                                   {"mu", mu + 1},
                                   {"value", r.value(i, j, lam, mu)}});
    return out;
}

[[nodiscard]] inline Json second_ff_to_json(const SecondFF& h) {
    Json out = Json::array();
    for (int a = 0; a < h.kappa; ++a) {
        Json block = Json::array();
        for (int i = 0; i < h.n; ++i) {
            Json row = Json::array();
            for (int lam = 0; lam < h.m; ++lam) row.push_back(h.at(a, i, lam));
            block.push_back(std::move(row));
        }
        out.push_back(std::move(block));
    }
    return out;
}

[[nodiscard]] inline Json solve_report_to_json(const SolveReport& r) {
    return Json{{"converged", true},
                {"H", second_ff_to_json(r.h)},
                {"residual_gauss", r.residual_gauss},
                {"residual_cartan", r.residual_cartan},
                {"jacobian_rank", r.jacobian_rank},
                {"submersion", r.submersion},
                {"iterations", r.iterations},
                {"seed", r.seed}};
}

[[nodiscard]] inline Json dims_to_json(const DimensionAudit& d) {
    return Json{{"dim_sigma", d.dim_sigma},
                {"dim_K", d.dim_K},
                {"dim_fiber", d.dim_fiber},
                {"dim_Z", d.dim_Z}};
}

[[nodiscard]] inline Json equivalence_report_to_json(const EquivalenceReport& r,
                                                     const std::vector<std::string>& chart) {
    Json out{{"symbolic", r.symbolic}, {"matches", r.matches}, {"max_error", r.max_error}};
    if (r.symbolic) {
        Json div = Json::array(), vol = Json::array();
        for (const auto& p : r.divergence) div.push_back(p.str(chart));
        for (const auto& p : r.volume_coefficient) vol.push_back(p.str(chart));
        out["divergence"] = std::move(div);
        out["volume_coefficient"] = std::move(vol);
    } else {
        Json lhs = Json::array(), rhs = Json::array();
        for (const auto& row : r.lhs_samples) {
            Json jr = Json::array();
            for (const auto& v : row) jr.push_back(v.str());
            lhs.push_back(std::move(jr));
        }
        for (const auto& row : r.rhs_samples) {
            Json jr = Json::array();
            for (const auto& v : row) jr.push_back(v.str());
            rhs.push_back(std::move(jr));
        }
        out["lhs_samples"] = std::move(lhs);
        out["rhs_samples"] = std::move(rhs);
    }
    return out;
}

[[nodiscard]] inline Json connection_to_json(const ConnectionForm& omega,
                                             const std::vector<std::string>& chart) {
    Json out = Json::array();
    for (const auto& row : omega.omega) {
        Json jr = Json::array();
        for (const auto& f : row) jr.push_back(form_to_json(f, chart));
        out.push_back(std::move(jr));
    }
    return out;
}

} // namespace wedge

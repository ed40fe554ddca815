#include "polydist/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace polydist::io {

namespace {

using nlohmann::json;

double parse_real(std::string_view text, std::string_view whole) {
    if (text.empty()) {
        throw ParseError("malformed complex literal '" + std::string(whole) + "'");
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ParseError("malformed complex literal '" + std::string(whole) + "'");
    }
    return value;
}

// "", "+", "-" stand for a unit imaginary coefficient.
double parse_imag_coefficient(std::string_view text, std::string_view whole) {
    if (text.empty() || text == "+") {
        return 1.0;
    }
    if (text == "-") {
        return -1.0;
    }
    return parse_real(text, whole);
}

const json& require(const json& doc, const char* key) {
    if (!doc.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    return doc.at(key);
}

}  // namespace

Complex parse_complex(std::string_view text) {
    const std::string_view whole = text;
    if (text.empty()) {
        throw ParseError("empty complex literal");
    }
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            throw ParseError("whitespace inside complex literal '" + std::string(whole) + "'");
        }
    }
    if (text.back() != 'i') {
        return {parse_real(text, whole), 0.0};
    }
    text.remove_suffix(1);
    // Split at the last sign that is neither leading nor part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = text.size(); k-- > 1;) {
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) {
        return {0.0, parse_imag_coefficient(text, whole)};
    }
    return {parse_real(text.substr(0, split), whole), parse_imag_coefficient(text.substr(split), whole)};
}

std::string format_double(double x) {
    if (!std::isfinite(x)) {
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

std::string format_fixed(double x, int digits) {
    if (!std::isfinite(x)) {
        return format_double(x);
    }
    char buf[512];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, digits);
    if (ec != std::errc()) {
        return format_double(x);
    }
    return std::string(buf, ptr);
}

std::string format_complex(Complex z, int digits) {
    std::string out = format_fixed(z.real(), digits);
    const double im = z.imag();
    out += (std::signbit(im) ? " - " : " + ");
    out += format_fixed(std::abs(im), digits);
    out += "i";
    return out;
}

WeightSet resolve_weights(std::string_view spec, const MatrixPolynomial& p) {
    if (spec == "coefficient-norms") {
        return WeightSet::coefficient_norms(p);
    }
    if (spec == "ones") {
        return WeightSet::ones(p.degree());
    }
    std::vector<double> w;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t comma = spec.find(',', start);
        const std::string_view item = spec.substr(start, comma == std::string_view::npos ? spec.npos : comma - start);
        w.push_back(parse_real(item, spec));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    WeightSet ws(std::move(w));
    check_compatible(p, ws);
    return ws;
}

json complex_to_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_string()) {
        return parse_complex(j.get<std::string>());
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw ParseError("complex entry must be [re, im], a number or a literal string");
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(complex_to_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw ParseError("matrix must be a non-empty list of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw ParseError("matrix rows must all have the same length");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
        }
    }
    return m;
}

json vector_to_json(const ComplexVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(complex_to_json(v(i)));
    }
    return out;
}

ComplexVector vector_from_json(const json& j) {
    if (!j.is_array()) {
        throw ParseError("vector must be a list");
    }
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    }
    return v;
}

json problem_to_json(const MatrixPolynomial& p, const WeightSet& w) {
    json coeffs = json::array();
    for (const auto& a : p.coeffs()) {
        coeffs.push_back(matrix_to_json(a));
    }
    return json{{"n", p.size()}, {"m", p.degree()}, {"coefficients", std::move(coeffs)}, {"weights", w.values()}};
}

namespace {

Problem parse_problem_unchecked(const json& input, std::optional<std::string> weight_override,
                                bool allow_singular_leading) {
    if (!input.is_object()) {
        throw ParseError("problem file must hold a JSON object");
    }
    const bool is_report = input.contains("q") && input.at("q").is_object();
    const json& doc = is_report ? input.at("q") : input;

    const auto n = require(doc, "n").get<long>();
    const auto m = require(doc, "m").get<long>();
    const json& cj = require(doc, "coefficients");
    if (!cj.is_array() || static_cast<long>(cj.size()) != m + 1) {
        throw ParseError("'coefficients' must list m+1 matrices A_0..A_m");
    }
    std::vector<ComplexMatrix> coeffs;
    for (const auto& aj : cj) {
        coeffs.push_back(matrix_from_json(aj));
        if (coeffs.back().rows() != n || coeffs.back().cols() != n) {
            throw ParseError("coefficient matrices must be n x n");
        }
    }
    MatrixPolynomial p = allow_singular_leading ? MatrixPolynomial::allow_singular_leading(std::move(coeffs))
                                                : MatrixPolynomial(std::move(coeffs));

    std::optional<WeightSet> w;
    if (weight_override) {
        w = resolve_weights(*weight_override, p);
    } else if (!doc.contains("weights")) {
        w = WeightSet::coefficient_norms(p);
    } else if (doc.at("weights").is_string()) {
        w = resolve_weights(doc.at("weights").get<std::string>(), p);
    } else {
        w = WeightSet(doc.at("weights").get<std::vector<double>>());
        check_compatible(p, *w);
    }

    Problem out{std::move(p), std::move(*w), std::nullopt, std::nullopt};
    const json& targets = input;
    if (targets.contains("mu1") && !targets.at("mu1").is_null()) {
        out.mu1 = complex_from_json(targets.at("mu1"));
    }
    if (targets.contains("mu2") && !targets.at("mu2").is_null()) {
        out.mu2 = complex_from_json(targets.at("mu2"));
    }
    return out;
}

}  // namespace

Problem parse_problem(const json& input, std::optional<std::string> weight_override, bool allow_singular_leading) {
    try {
        return parse_problem_unchecked(input, std::move(weight_override), allow_singular_leading);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed problem: ") + e.what());
    }
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

Problem load_problem(const std::string& path, std::optional<std::string> weight_override,
                     bool allow_singular_leading) {
    const json doc = load_json(path);
    try {
        return parse_problem(doc, std::move(weight_override), allow_singular_leading);
    } catch (const json::exception& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

json report_to_json(const PerturbationResult& r, const WeightSet& w, Complex mu1, Complex mu2,
                    const ReportMeta& meta) {
    json out;
    out["tool"] = "polydist";
    out["version"] = meta.version;
    out["timing_ms"] = meta.elapsed_ms;
    out["mu1"] = complex_to_json(mu1);
    out["mu2"] = complex_to_json(mu2);
    out["weights"] = w.values();
    out["branch"] = to_string(r.branch);
    out["gamma_star"] = r.gamma_star;
    out["s_star"] = r.s_star;
    out["beta_low"] = r.beta_low;
    out["beta_up"] = r.beta_up ? json(*r.beta_up) : json(nullptr);
    out["zero_branch_bound"] = r.zero_branch_bound ? json(*r.zero_branch_bound) : json(nullptr);
    out["construction_error"] = r.construction_error ? json(*r.construction_error) : json(nullptr);
    out["warnings"] = r.warnings;
    out["profile"] = {{"gamma_hi", r.profile.gamma_hi},
                      {"at_boundary", r.profile.at_boundary},
                      {"s_max", r.profile.s_star},
                      {"gamma_max", r.profile.gamma_star},
                      {"divided_rank_deficient", r.profile.divided_rank_deficient}};
    if (r.pair_diagnostics) {
        const PairResiduals& d = *r.pair_diagnostics;
        out["pair_diagnostics"] = {{"singular", d.singular},   {"orthogonality", d.orthogonality},
                                   {"cross_gram", d.cross_gram}, {"gram", d.gram},
                                   {"hat_gram", d.hat_gram},   {"scale", d.scale}};
    } else {
        out["pair_diagnostics"] = nullptr;
    }
    if (meta.include_perturbation && r.q) {
        json delta = json::array();
        for (const auto& d : r.delta_coeffs) {
            delta.push_back(matrix_to_json(d));
        }
        out["delta"] = std::move(delta);
        out["q"] = problem_to_json(*r.q, w);
        out["eigenvectors"] = json::array({vector_to_json(r.x1), vector_to_json(r.x2)});
        const Verification& v = r.verification;
        out["residuals"] = {{"mu1", v.residual_mu1}, {"mu2", v.residual_mu2}};
        out["verification"] = {{"scale_mu1", v.scale_mu1},
                               {"scale_mu2", v.scale_mu2},
                               {"eigen_distance_mu1", v.eigen_distance_mu1},
                               {"eigen_distance_mu2", v.eigen_distance_mu2},
                               {"membership_level", v.membership_level},
                               {"attaining_index", v.attaining_index},
                               {"zero_weight_violation", v.zero_weight_violation}};
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const TargetBlocks& blocks, const WeightSet& w, double gamma_min,
                     double gamma_max, int samples) {
    if (!(gamma_min >= 0.0) || !(gamma_max > gamma_min) || samples < 2) {
        throw InvalidInput("sweep needs 0 <= gamma_min < gamma_max and samples >= 2");
    }
    out << "gamma,s_penultimate,beta_low,beta_up\n";
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
        const double g = i == samples - 1 ? gamma_max : gamma_min + t * (gamma_max - gamma_min);
        const BoundPoint bp = bounds_at(blocks, w, g);
        out << format_double(g) << ',' << format_double(bp.s_value) << ',' << format_double(bp.beta_low) << ',';
        if (bp.beta_up) {
            out << format_double(*bp.beta_up);
        }
        out << '\n';
    }
}

}  // namespace polydist::io

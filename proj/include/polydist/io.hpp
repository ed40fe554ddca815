#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "polydist/perturbation.hpp"

namespace polydist::io {

class ParseError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Complex literal: optional real part, optional imaginary part with an
/// `i` suffix ("2+1i", "-1", "0.5i", "2+i", "-i"). No whitespace.
Complex parse_complex(std::string_view text);

// Shortest text that reads back to the same double; locale independent.
std::string format_double(double x);
// Fixed notation with `digits` decimals, locale independent.
std::string format_fixed(double x, int digits);
std::string format_complex(Complex z, int digits);

/// Weight selection: "coefficient-norms", "ones", or a comma separated list.
WeightSet resolve_weights(std::string_view spec, const MatrixPolynomial& p);

struct Problem {
    MatrixPolynomial polynomial;
    WeightSet weights;
    std::optional<Complex> mu1;
    std::optional<Complex> mu2;
};

/// Parses a problem object. A report object is accepted as well: its "q"
/// member is read. `weight_override` replaces the file's weight selection.
Problem parse_problem(const nlohmann::json& doc, std::optional<std::string> weight_override = std::nullopt,
                      bool allow_singular_leading = false);
Problem load_problem(const std::string& path, std::optional<std::string> weight_override = std::nullopt,
                     bool allow_singular_leading = false);
nlohmann::json load_json(const std::string& path);

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const nlohmann::json& j);

nlohmann::json problem_to_json(const MatrixPolynomial& p, const WeightSet& w);

struct ReportMeta {
    std::string version;
    double elapsed_ms = 0.0;
    bool include_perturbation = true;
};

nlohmann::json report_to_json(const PerturbationResult& r, const WeightSet& w, Complex mu1, Complex mu2,
                              const ReportMeta& meta);

/// Sweep rows gamma, s_penultimate, beta_low, beta_up on `samples` evenly
/// spaced γ in [gamma_min, gamma_max], ascending. beta_up is left empty
/// where no admissible construction exists.
void write_sweep_csv(std::ostream& out, const TargetBlocks& blocks, const WeightSet& w, double gamma_min,
                     double gamma_max, int samples);

}  // namespace polydist::io

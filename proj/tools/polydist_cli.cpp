// polydist: bounds on the distance from a matrix polynomial to polynomials
// with two prescribed eigenvalues, and the perturbation attaining them.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "polydist/io.hpp"
#include "polydist/version.hpp"

namespace {

using namespace polydist;

enum Exit : int {
    kOk = 0,
    kVerifyFailed = 1,
    kParse = 2,
    kDegenerate = 3,
    kNumerical = 4,
    kInfeasible = 5,
};

struct CommonArgs {
    std::string problem;
    std::string mu1;
    std::string mu2;
    std::string weights;
    std::optional<double> gamma_max;
    int samples = 200;
    int digits = 4;
    std::string out;
};

struct Loaded {
    io::Problem problem;
    Complex mu1;
    Complex mu2;
};

Loaded load(const CommonArgs& args, bool allow_singular_leading = false) {
    std::optional<std::string> weights;
    if (!args.weights.empty()) {
        weights = args.weights;
    }
    io::Problem problem = io::load_problem(args.problem, weights, allow_singular_leading);
    std::optional<Complex> mu1 = problem.mu1;
    std::optional<Complex> mu2 = problem.mu2;
    if (!args.mu1.empty()) {
        mu1 = io::parse_complex(args.mu1);
    }
    if (!args.mu2.empty()) {
        mu2 = io::parse_complex(args.mu2);
    }
    if (!mu1 || !mu2) {
        throw io::ParseError("targets missing: pass --mu1 and --mu2 or store them in the problem file");
    }
    return {std::move(problem), *mu1, *mu2};
}

void write_json(const nlohmann::json& doc, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) {
        throw io::ParseError("cannot write '" + path + "'");
    }
    f << doc.dump(2) << '\n';
}

void print_summary(std::ostream& os, const PerturbationResult& r, int digits) {
    os << "branch      " << to_string(r.branch) << '\n';
    os << "gamma*      " << io::format_fixed(r.gamma_star, digits) << '\n';
    os << "s*          " << io::format_fixed(r.s_star, digits) << '\n';
    os << "beta_low    " << io::format_fixed(r.beta_low, digits) << '\n';
    os << "beta_up     " << (r.beta_up ? io::format_fixed(*r.beta_up, digits) : std::string("unavailable")) << '\n';
    if (r.zero_branch_bound) {
        os << "bound(D0)   " << io::format_fixed(*r.zero_branch_bound, digits) << '\n';
    }
    for (const auto& w : r.warnings) {
        os << "warning: " << w << '\n';
    }
}

int run_distance(const CommonArgs& args, bool optimize_gamma, bool full) {
    const auto start = std::chrono::steady_clock::now();
    const Loaded in = load(args);
    DistanceOptions opts;
    opts.profile.gamma_max = args.gamma_max;
    opts.profile.grid_points = args.samples;
    opts.optimize_gamma = optimize_gamma;
    const PerturbationResult r = compute_distance(in.problem.polynomial, in.problem.weights, in.mu1, in.mu2, opts);
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    print_summary(full && (args.out.empty() || args.out == "-") ? std::cerr : std::cout, r, args.digits);
    if (full || !args.out.empty()) {
        io::ReportMeta meta{POLYDIST_VERSION, elapsed, full};
        write_json(io::report_to_json(r, in.problem.weights, in.mu1, in.mu2, meta), args.out);
    }
    if (r.construction_error) {
        std::cerr << "error: " << *r.construction_error << '\n';
        return full ? kInfeasible : kNumerical;
    }
    return kOk;
}

int run_sweep(const CommonArgs& args, double gamma_min, double gamma_max) {
    const Loaded in = load(args);
    const TargetBlocks blocks = TargetBlocks::from(in.problem.polynomial, in.mu1, in.mu2);
    if (args.out.empty() || args.out == "-") {
        io::write_sweep_csv(std::cout, blocks, in.problem.weights, gamma_min, gamma_max, args.samples);
        return kOk;
    }
    std::ofstream f(args.out, std::ios::binary);
    if (!f) {
        throw io::ParseError("cannot write '" + args.out + "'");
    }
    io::write_sweep_csv(f, blocks, in.problem.weights, gamma_min, gamma_max, args.samples);
    return kOk;
}

int run_verify(const CommonArgs& args) {
    const nlohmann::json doc = io::load_json(args.problem);
    const Loaded in = load(args, true);
    const MatrixPolynomial& q = in.problem.polynomial;
    const auto ev = eigenvalues(q);
    const double d1 = nearest_distance(ev, in.mu1);
    const double d2 = nearest_distance(ev, in.mu2);
    const double tol1 = 1e-6 * std::max(1.0, std::abs(in.mu1));
    const double tol2 = 1e-6 * std::max(1.0, std::abs(in.mu2));
    std::cout << "eigen_distance_mu1 " << io::format_double(d1) << '\n';
    std::cout << "eigen_distance_mu2 " << io::format_double(d2) << '\n';
    if (doc.contains("eigenvectors") && doc.at("eigenvectors").size() == 2) {
        const ComplexVector x1 = io::vector_from_json(doc.at("eigenvectors")[0]);
        const ComplexVector x2 = io::vector_from_json(doc.at("eigenvectors")[1]);
        std::cout << "residual_mu1 " << io::format_double((eval_poly(q, in.mu1) * x1).norm()) << '\n';
        std::cout << "residual_mu2 " << io::format_double((eval_poly(q, in.mu2) * x2).norm()) << '\n';
    }
    const bool ok = d1 <= tol1 && d2 <= tol2;
    std::cout << (ok ? "verified" : "NOT verified") << '\n';
    return ok ? kOk : kVerifyFailed;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_weights = true) {
    cmd->add_option("problem", args.problem, "Problem (or report) JSON file")->required();
    cmd->add_option("--mu1", args.mu1, "First target eigenvalue, e.g. 1 or 2+1i");
    cmd->add_option("--mu2", args.mu2, "Second target eigenvalue");
    if (with_weights) {
        cmd->add_option("--weights", args.weights, "Weights: comma list, coefficient-norms or ones");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distance from a matrix polynomial to polynomials with two prescribed eigenvalues"};
    app.require_subcommand(1);
    app.set_version_flag("--version", POLYDIST_VERSION);

    CommonArgs args;
    bool optimize_gamma = false;
    double gamma_min = 0.0;
    double sweep_max = 10.0;

    auto* bounds = app.add_subcommand("bounds", "Compute gamma*, s*, beta_low and beta_up");
    add_common(bounds, args);
    bounds->add_option("--gamma-max", args.gamma_max, "Right end of the gamma search interval");
    bounds->add_option("--samples", args.samples, "Grid points of the gamma search")->check(CLI::PositiveNumber);
    bounds->add_option("--digits", args.digits, "Decimals in the printed summary")->check(CLI::Range(0, 17));
    bounds->add_option("--out", args.out, "Write the JSON report here");

    auto* perturb = app.add_subcommand("perturb", "Construct Q with both targets as eigenvalues");
    add_common(perturb, args);
    perturb->add_option("--gamma-max", args.gamma_max, "Right end of the gamma search interval");
    perturb->add_option("--samples", args.samples, "Grid points of the gamma search")->check(CLI::PositiveNumber);
    perturb->add_option("--digits", args.digits, "Decimals in the printed summary")->check(CLI::Range(0, 17));
    perturb->add_option("--out", args.out, "Report file (default: standard output)");
    perturb->add_flag("--optimize-gamma", optimize_gamma, "Build Q at the gamma minimizing beta_up - beta_low");

    auto* sweep = app.add_subcommand("sweep", "CSV of s_{2n-1}, beta_low, beta_up over a gamma range");
    add_common(sweep, args);
    sweep->add_option("--gamma-min", gamma_min, "Left end of the range")->check(CLI::NonNegativeNumber);
    sweep->add_option("--gamma-max", sweep_max, "Right end of the range");
    sweep->add_option("--samples", args.samples, "Number of rows (>= 2)");
    sweep->add_option("--out", args.out, "CSV file (default: standard output)");

    auto* verify_cmd = app.add_subcommand("verify", "Check that mu1, mu2 are eigenvalues of a stored Q");
    add_common(verify_cmd, args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParse;
    }

    try {
        if (bounds->parsed()) {
            return run_distance(args, false, false);
        }
        if (perturb->parsed()) {
            return run_distance(args, optimize_gamma, true);
        }
        if (sweep->parsed()) {
            if (!sweep->count("--samples")) {
                args.samples = 500;
            }
            return run_sweep(args, gamma_min, sweep_max);
        }
        return run_verify(args);
    } catch (const DegenerateTargets& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParse;
    } catch (const SingularLeadingCoefficient& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParse;
    } catch (const ConstructionFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return perturb->parsed() ? kInfeasible : kNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
}

// conekernel CLI: validates problem files, runs their task lists, and checks
// the regularized Mellin formula from a standalone config.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "conekernel/tasks.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_or_print(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    out << text;
}

double tolerance_scale() {
    if (const char* env = std::getenv("CONEKERNEL_TOL_OVERRIDE")) {
        const double v = std::atof(env);
        if (v > 0.0) return v;
        std::cerr << "warning: ignoring non-positive CONEKERNEL_TOL_OVERRIDE\n";
    }
    return 1.0;
}

constexpr int kExitPass = 0;
constexpr int kExitValidation = 1;
constexpr int kExitTaskFailure = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
    using namespace conekernel;

    CLI::App app{"lambda-homogeneous solution kernels for homogeneous systems on convex cones"};
    app.require_subcommand(1);

    std::string run_path, run_out;
    bool run_parallel = false;
    auto* run = app.add_subcommand("run", "run every task in a problem file");
    run->add_option("problem", run_path, "problem JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "write the report JSON to this path instead of stdout");
    run->add_flag("--parallel", run_parallel, "execute independent tasks concurrently");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "parse and validate a problem file");
    validate->add_option("problem", validate_path, "problem JSON file")
        ->required()
        ->check(CLI::ExistingFile);

    std::string mellin_path, mellin_out;
    auto* mellin = app.add_subcommand(
        "mellin-check", "evaluate the regularized Mellin formula against the gamma-power oracle");
    mellin->add_option("config", mellin_path, "JSON config {lambda, beta_list, q}")
        ->required()
        ->check(CLI::ExistingFile);
    mellin->add_option("--out", mellin_out, "write the JSON table to this path");

    CLI11_PARSE(app, argc, argv);
    const double tol_scale = tolerance_scale();

    try {
        if (validate->parsed()) {
            try {
                ProblemFile::parse(read_file(validate_path));
            } catch (const ValidationError& e) {
                std::cerr << "invalid: " << e.what() << "\n";
                return kExitValidation;
            }
            std::cout << "valid\n";
            return kExitPass;
        }

        if (run->parsed()) {
            ProblemFile pf = [&] {
                try {
                    return ProblemFile::parse(read_file(run_path));
                } catch (const ValidationError& e) {
                    std::cerr << "invalid: " << e.what() << "\n";
                    std::exit(kExitValidation);
                }
            }();
            const auto reports = run_all_tasks(pf, tol_scale, run_parallel);
            write_or_print(jsonio::dump_deterministic(reports_to_json(reports)), run_out);
            bool any_fail = false, any_numerical = false;
            for (const auto& r : reports) {
                any_fail = any_fail || r.status == "fail";
                any_numerical = any_numerical || r.numerical_error;
            }
            if (any_numerical) return kExitNumerical;
            return any_fail ? kExitTaskFailure : kExitPass;
        }

        if (mellin->parsed()) {
            ordered_json cfg;
            try {
                cfg = ordered_json::parse(read_file(mellin_path));
            } catch (const nlohmann::json::parse_error& e) {
                std::cerr << "invalid: " << e.what() << "\n";
                return kExitValidation;
            }
            const LambdaParam lambda(jsonio::parse_complex(jsonio::require(cfg, "lambda", ""), "/lambda"));
            CVec betas;
            for (const auto& b : jsonio::require(cfg, "beta_list", ""))
                betas.push_back(jsonio::parse_complex(b, "/beta_list"));
            const RegularizationOrder reg = cfg.contains("q")
                                                ? RegularizationOrder(cfg.at("q").get<int>())
                                                : default_reg_order(lambda.value);
            bool ok = false;
            ordered_json out;
            out["q"] = reg.q;
            out["rows"] = mellin_check_table(lambda, betas, reg, tol_scale, ok);
            out["all_within_tolerance"] = ok;
            write_or_print(jsonio::dump_deterministic(out), mellin_out);
            return kExitPass;
        }
    } catch (const ValidationError& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTaskFailure;
    }
    return kExitPass;
}

#pragma once

#include <chrono>
#include <fstream>
#include <future>
#include <random>

#include "fit.hpp"
#include "problem.hpp"
#include "sigma_grid.hpp"

namespace conekernel {

struct Report {
    std::string task_id;
    std::string kind;
    std::string status;  // "pass" | "fail" | "diagnostic"
    ordered_json tolerances = ordered_json::object();
    ordered_json payload = ordered_json::object();
    bool numerical_error = false;
};

inline ordered_json report_to_json(const Report& r) {
    ordered_json j;
    j["task"] = r.task_id;
    j["kind"] = r.kind;
    j["status"] = r.status;
    j["tolerances"] = r.tolerances;
    j["payload"] = r.payload;
    return j;
}

// Rows of the mellin-check table; shared between the task and the standalone
// CLI subcommand.
inline ordered_json mellin_check_table(const LambdaParam& lambda, const CVec& betas,
                                       const RegularizationOrder& reg, double tol_scale,
                                       bool& all_within) {
    ordered_json rows = ordered_json::array();
    all_within = true;
    for (const cplx beta : betas) {
        const cplx oracle = gamma(-lambda.value) * principal_pow(beta, lambda.value);
        const cplx computed = regularized_mellin(lambda, beta, reg);
        const double err = std::abs(computed - oracle);
        const double tol = 1e-8 * (1.0 + std::abs(oracle)) * tol_scale;
        if (err > tol) all_within = false;
        ordered_json row;
        row["beta"] = jsonio::dump_complex(beta);
        row["computed"] = jsonio::dump_complex(computed);
        row["oracle"] = jsonio::dump_complex(oracle);
        row["abs_err"] = err;
        row["tolerance"] = tol;
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace taskdetail {

// Central differences in the real x-variables, composed axis by axis.
template <class F>
cplx fd_partial_x(F&& func, const Vec& x, const MultiIndex& gamma, double h) {
    int axis = -1;
    for (int i = 0; i < gamma.dimension(); ++i)
        if (gamma.exponents[i] > 0) {
            axis = i;
            break;
        }
    if (axis < 0) return func(x);
    std::vector<int> reduced = gamma.exponents;
    reduced[axis] -= 1;
    const MultiIndex rest(reduced);
    Vec xp = x, xm = x;
    xp[axis] += h;
    xm[axis] -= h;
    return (fd_partial_x(func, xp, rest, h) - fd_partial_x(func, xm, rest, h)) / (2.0 * h);
}

// Parameter grids: either an explicit list of points or a rectangular
// complex grid per parameter axis.
inline std::vector<CVec> parse_parameter_grid(const ordered_json& spec, int domain_dim,
                                              const std::string& path) {
    std::vector<CVec> grid;
    if (spec.is_array()) {
        for (std::size_t i = 0; i < spec.size(); ++i)
            grid.push_back(jsonio::parse_cpoint(spec.at(i), domain_dim,
                                                path + "/" + std::to_string(i)));
        return grid;
    }
    if (spec.is_object() && spec.contains("rect")) {
        const auto& rect = spec.at("rect");
        if (!rect.is_array() || static_cast<int>(rect.size()) != domain_dim)
            throw ValidationError("rect grid must give one range per parameter", path + "/rect");
        std::vector<CVec> axes;
        for (int d = 0; d < domain_dim; ++d) {
            const auto& r = rect.at(d);
            const std::string rpath = path + "/rect/" + std::to_string(d);
            const double re_min = jsonio::as_number(jsonio::require(r, "re_min", rpath), rpath);
            const double re_max = jsonio::as_number(jsonio::require(r, "re_max", rpath), rpath);
            const int re_steps = jsonio::require_int(r, "re_steps", rpath);
            const double im_min = jsonio::as_number(jsonio::require(r, "im_min", rpath), rpath);
            const double im_max = jsonio::as_number(jsonio::require(r, "im_max", rpath), rpath);
            const int im_steps = jsonio::require_int(r, "im_steps", rpath);
            if (re_steps < 1 || im_steps < 1)
                throw ValidationError("grid steps must be >= 1", rpath);
            CVec axis;
            for (int a = 0; a < re_steps; ++a)
                for (int b = 0; b < im_steps; ++b)
                    axis.push_back(cplx(
                        re_steps == 1 ? re_min : re_min + (re_max - re_min) * a / (re_steps - 1),
                        im_steps == 1 ? im_min : im_min + (im_max - im_min) * b / (im_steps - 1)));
            axes.push_back(std::move(axis));
        }
        // Cartesian product across parameter axes.
        grid.push_back(CVec(domain_dim, 0.0));
        for (int d = 0; d < domain_dim; ++d) {
            std::vector<CVec> next;
            for (const auto& partial : grid)
                for (const cplx v : axes[d]) {
                    CVec w = partial;
                    w[d] = v;
                    next.push_back(std::move(w));
                }
            grid = std::move(next);
        }
        return grid;
    }
    throw ValidationError("parameter_grid must be a point list or a {rect: [...]} spec", path);
}

inline Report run_cone_info(const ProblemFile& pf, const TaskConfig& task) {
    Report r{task.id, task.kind, "diagnostic"};
    r.payload["kind"] = pf.cone.kind == Cone::Kind::kPolyhedral ? "polyhedral" : "circular";
    r.payload["dimension"] = pf.cone.dimension();
    r.payload["pointed"] = is_pointed(pf.cone);
    return r;
}

inline Report run_mellin_check(const ProblemFile& pf, const TaskConfig& task, double tol_scale) {
    Report r{task.id, task.kind, "fail"};
    const auto& betas_json = jsonio::require(task.params, "beta_list", "/tasks/" + task.id);
    CVec betas;
    for (std::size_t i = 0; i < betas_json.size(); ++i)
        betas.push_back(jsonio::parse_complex(betas_json.at(i), "beta_list"));
    const RegularizationOrder reg =
        task.params.contains("q") ? RegularizationOrder(task.params.at("q").get<int>())
                                  : default_reg_order(pf.lambda.value);
    bool ok = false;
    r.payload["q"] = reg.q;
    r.payload["rows"] = mellin_check_table(pf.lambda, betas, reg, tol_scale, ok);
    r.tolerances["abs_err"] = "1e-8 * (1 + |oracle|) * tol_scale";
    r.status = ok ? "pass" : "fail";
    return r;
}

inline Report run_euler_roundtrip(const ProblemFile& pf, const TaskConfig& task,
                                  double tol_scale) {
    Report r{task.id, task.kind, "fail"};
    const int count = task.params.value("count", 100);
    const int max_dim = task.params.value("max_dimension", 4);
    const int max_deg = task.params.value("max_degree", 6);
    std::mt19937_64 rng(task.params.value("seed", 20240601));
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < count; ++rep) {
        const int n = 1 + static_cast<int>(rng() % max_dim);
        Polynomial p(n);
        for (int t = 0; t < 8; ++t) {
            std::vector<int> e(n, 0);
            int budget = static_cast<int>(rng() % (max_deg + 1));
            while (budget-- > 0) e[rng() % n] += 1;
            p.add_term(MultiIndex(std::move(e)), cplx(coef(rng), coef(rng)));
        }
        const Polynomial back = euler_apply(pf.lambda, euler_inverse(pf.lambda, p));
        worst = std::max(worst, (back - p).max_abs_coeff());
    }
    const double tol = 1e-12 * tol_scale;
    r.payload["count"] = count;
    r.payload["max_termwise_error"] = worst;
    r.tolerances["max_termwise_error"] = tol;
    r.status = worst <= tol ? "pass" : "fail";
    return r;
}

inline Report run_kernel_verify(const ProblemFile& pf, const TaskConfig& task, double tol_scale) {
    Report r{task.id, task.kind, "fail"};
    const std::string path = "/tasks/" + task.id;
    const NoetherianOp& op = pf.op(jsonio::require_int(task.params, "sigma", path),
                                   jsonio::require_int(task.params, "i", path), path);

    std::vector<CVec> zs;
    if (task.params.contains("z_list")) {
        const auto& zl = task.params.at("z_list");
        for (std::size_t i = 0; i < zl.size(); ++i)
            zs.push_back(jsonio::parse_cpoint(zl.at(i), pf.dimension, path + "/z_list"));
    } else {
        const VarietyParam& variety =
            pf.variety(jsonio::require(task.params, "variety", path).get<std::string>(), path);
        const auto grid = parse_parameter_grid(jsonio::require(task.params, "parameter_grid", path),
                                               variety.domain_dim, path + "/parameter_grid");
        for (const auto& w : grid) {
            const CVec z = variety.eval(w);
            if (variety.defining_residual(z) > 1e-10)
                throw std::domain_error("kernel-verify: parameter sample leaves the variety");
            zs.push_back(z);
        }
        if (task.params.contains("hull")) {
            const CompactHull& hull =
                pf.hull(task.params.at("hull").get<std::string>(), path + "/hull");
            std::erase_if(zs, [&](const CVec& z) { return !in_UK(hull, z); });
        }
    }
    if (task.params.contains("max_points") && static_cast<int>(zs.size()) > task.params.at("max_points").get<int>())
        zs.resize(task.params.at("max_points").get<int>());
    if (zs.empty()) throw std::domain_error("kernel-verify: no admissible parameters to test");

    const int fd_samples = task.params.value("fd_samples", 50);
    const SigmaGrid grid = build_sigma_grid(pf.cone, task.params.value("fd_resolution", 8));
    const double h = task.params.value("fd_step", 1e-5);
    // Sample points too close to the branch cut blow up the FD error model;
    // they are skipped (|-<x,z>| below this fraction of |z|).
    const double branch_margin = task.params.value("branch_margin", 0.2);

    bool symbolic_zero = true;
    double max_euler = 0.0, max_fd = 0.0;
    for (const auto& z : zs) {
        const ConicalFunction f = expand_kernel(op, pf.lambda, z);
        max_euler = std::max(max_euler, euler_residual(pf.lambda, f));
        for (const auto& res : apply_P(pf.system, f))
            if (!is_zero(res)) symbolic_zero = false;

        // Independent numeric route: finite differences of pointwise values.
        int used = 0;
        for (const auto& x : grid.points) {
            if (used >= fd_samples) break;
            if (std::abs(pairing(x, z)) < branch_margin * cnorm2(z)) continue;
            try {
                double scale = 1.0;
                for (const cplx v : eval_conical(f, x)) scale = std::max(scale, std::abs(v));
                for (int j = 0; j < pf.system.rows(); ++j) {
                    cplx row_value = 0.0;
                    for (int l = 0; l < pf.system.cols(); ++l) {
                        auto comp = [&](const Vec& p) { return eval_conical(f, p)[l]; };
                        for (const auto& [gamma, c] : pf.system.at(j, l).terms())
                            row_value += c * fd_partial_x(comp, x, gamma, h);
                    }
                    max_fd = std::max(max_fd, std::abs(row_value) / scale);
                }
                ++used;
            } catch (const std::domain_error&) {
                continue;  // branch cut at this sample; skip it
            }
        }
        if (used == 0) throw std::domain_error("kernel-verify: no branch-safe sample points");
    }
    const double fd_tol = task.params.value("fd_tolerance", 1e-9) * tol_scale;
    r.payload["parameters_tested"] = static_cast<int>(zs.size());
    r.payload["symbolic_residual_zero"] = symbolic_zero;
    r.payload["max_euler_residual"] = max_euler;
    r.payload["max_fd_residual"] = max_fd;
    r.tolerances["max_fd_residual"] = fd_tol;
    r.tolerances["max_euler_residual"] = 0.0;
    r.status = (symbolic_zero && max_euler == 0.0 && max_fd <= fd_tol) ? "pass" : "fail";
    return r;
}

inline Report run_visibility_sample(const ProblemFile& pf, const TaskConfig& task) {
    Report r{task.id, task.kind, "diagnostic"};
    const std::string path = "/tasks/" + task.id;
    const VarietyParam& variety =
        pf.variety(jsonio::require(task.params, "variety", path).get<std::string>(), path);
    const auto grid = parse_parameter_grid(jsonio::require(task.params, "parameter_grid", path),
                                           variety.domain_dim, path + "/parameter_grid");
    const VisibilityCounts counts = sample_visible(variety, pf.cone, grid);
    r.payload["total"] = counts.total;
    r.payload["visible"] = static_cast<int>(counts.visible.size());
    r.payload["boundary_proximal"] = static_cast<int>(counts.boundary_proximal.size());
    ordered_json sample = ordered_json::array();
    for (std::size_t i = 0; i < counts.visible.size() && i < 5; ++i)
        sample.push_back(jsonio::dump_cpoint(counts.visible[i]));
    r.payload["visible_examples"] = std::move(sample);

    if (task.params.contains("expect")) {
        const auto& expect = task.params.at("expect");
        bool ok = true;
        if (expect.value("visible_empty", false)) ok = ok && counts.visible.empty();
        if (expect.value("visible_nonempty", false)) ok = ok && !counts.visible.empty();
        if (expect.value("boundary_nonempty", false)) ok = ok && !counts.boundary_proximal.empty();
        if (expect.contains("visible_contains")) {
            for (const auto& zj : expect.at("visible_contains")) {
                const CVec want = jsonio::parse_cpoint(zj, pf.dimension, path + "/expect");
                bool found = false;
                for (const auto& z : counts.visible) {
                    double d = 0.0;
                    for (int k = 0; k < pf.dimension; ++k) d += std::abs(z[k] - want[k]);
                    if (d < 1e-9) found = true;
                }
                ok = ok && found;
            }
        }
        r.status = ok ? "pass" : "fail";
    }
    return r;
}

inline Report run_fit(const ProblemFile& pf, const TaskConfig& task, double tol_scale) {
    Report r{task.id, task.kind, "diagnostic"};
    const std::string path = "/tasks/" + task.id;
    const SigmaGrid grid = build_sigma_grid(pf.cone, task.params.value("sigma_resolution", 100));

    std::vector<ConicalFunction> dictionary;
    int visible_count = 0, total_sampled = 0;
    for (const auto& kj : jsonio::require(task.params, "kernels", path)) {
        const NoetherianOp& op = pf.op(jsonio::require_int(kj, "sigma", path),
                                       jsonio::require_int(kj, "i", path), path);
        if (kj.contains("z")) {
            dictionary.push_back(expand_kernel(
                op, pf.lambda, jsonio::parse_cpoint(kj.at("z"), pf.dimension, path + "/kernels")));
        } else {
            const VarietyParam& variety =
                pf.variety(jsonio::require(kj, "variety", path).get<std::string>(), path);
            const auto pgrid = parse_parameter_grid(jsonio::require(kj, "parameter_grid", path),
                                                    variety.domain_dim, path);
            const VisibilityCounts counts = sample_visible(variety, pf.cone, pgrid);
            total_sampled += counts.total;
            visible_count += static_cast<int>(counts.visible.size());
            for (const auto& z : counts.visible)
                dictionary.push_back(expand_kernel(op, pf.lambda, z));
        }
    }
    if (dictionary.empty()) throw std::domain_error("fit: empty dictionary (nothing visible?)");

    const auto& tj = jsonio::require(task.params, "target", path);
    std::vector<CVec> target;
    if (tj.contains("samples")) {
        const auto& sj = tj.at("samples");
        for (std::size_t i = 0; i < sj.size(); ++i)
            target.push_back(jsonio::parse_cpoint(sj.at(i), dictionary.front().num_components(),
                                                  path + "/target/samples"));
    } else {
        const auto& parts = jsonio::require(tj, "parts", path + "/target");
        const int L = dictionary.front().num_components();
        target.assign(grid.size(), CVec(L, 0.0));
        for (const auto& pj : parts) {
            ConicalFunction part(pf.lambda.value,
                                 jsonio::parse_cpoint(jsonio::require(pj, "z", path), pf.dimension,
                                                      path + "/target/parts"),
                                 L);
            for (const auto& term : jsonio::require(pj, "terms", path + "/target/parts")) {
                std::vector<int> alpha(pf.dimension);
                const auto& aj = jsonio::require(term, "alpha", path);
                for (int d = 0; d < pf.dimension; ++d) alpha[d] = aj.at(d).get<int>();
                part.add_term(term.value("component", 0),
                              {jsonio::parse_complex(jsonio::require(term, "coeff", path), path),
                               MultiIndex(std::move(alpha)), term.value("offset", 0)});
            }
            const auto samples = sample_on_grid(part, grid);
            for (std::size_t p = 0; p < grid.size(); ++p)
                for (int l = 0; l < L; ++l) target[p][l] += samples[p][l];
        }
    }

    FitReport fit = least_squares_fit(dictionary, target, grid);
    fit.visible_count = visible_count;
    fit.total_sampled = total_sampled;

    ordered_json coeffs = ordered_json::array();
    for (const cplx c : fit.coefficients) coeffs.push_back(jsonio::dump_complex(c));
    r.payload["coefficients"] = std::move(coeffs);
    r.payload["relative_residual"] = fit.relative_residual;
    r.payload["condition_estimate"] = fit.condition_estimate;
    r.payload["rank_deficient"] = fit.rank_deficient;
    r.payload["visible_count"] = fit.visible_count;
    r.payload["total_sampled"] = fit.total_sampled;
    r.payload["grid_size"] = static_cast<int>(grid.size());

    if (task.params.contains("csv")) {
        std::ofstream csv(task.params.at("csv").get<std::string>());
        csv << "index,residual\n";
        for (std::size_t p = 0; p < grid.size(); ++p) {
            double rp = 0.0;
            CVec fitted(dictionary.front().num_components(), 0.0);
            for (std::size_t k = 0; k < dictionary.size(); ++k) {
                const CVec v = eval_conical(dictionary[k], grid.points[p]);
                for (std::size_t l = 0; l < v.size(); ++l) fitted[l] += fit.coefficients[k] * v[l];
            }
            for (std::size_t l = 0; l < fitted.size(); ++l) rp += std::norm(fitted[l] - target[p][l]);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", p, std::sqrt(rp));
            csv << buf;
        }
    }

    if (task.params.contains("expect")) {
        const auto& expect = task.params.at("expect");
        bool ok = true;
        if (expect.contains("max_residual")) {
            const double tol = expect.at("max_residual").get<double>() * tol_scale;
            r.tolerances["max_residual"] = tol;
            ok = ok && fit.relative_residual <= tol;
        }
        if (expect.contains("min_residual")) {
            const double floor = expect.at("min_residual").get<double>();
            r.tolerances["min_residual"] = floor;
            ok = ok && fit.relative_residual >= floor;
        }
        r.status = ok ? "pass" : "fail";
    }
    return r;
}

inline Report run_identity_check(const ProblemFile& pf, const TaskConfig& task, double tol_scale) {
    Report r{task.id, task.kind, "fail"};
    const std::string path = "/tasks/" + task.id;
    const NoetherianOp& op = pf.op(jsonio::require_int(task.params, "sigma", path),
                                   jsonio::require_int(task.params, "i", path), path);
    const auto& [nu, hull_name] =
        pf.measure(jsonio::require(task.params, "measure", path).get<std::string>(), path);
    const CompactHull& hull = task.params.contains("hull")
                                  ? pf.hull(task.params.at("hull").get<std::string>(), path)
                                  : pf.hull(hull_name, path);
    const CVec z = jsonio::parse_cpoint(jsonio::require(task.params, "z", path), pf.dimension,
                                        path + "/z");
    const double step = task.params.value("step", 0.0);
    const double residual = distribution_identity_check(op, pf.lambda, nu, z, hull, step);

    // Document the FD convergence behavior at a coarser, truncation-dominated
    // step pair.
    const double h0 = task.params.value("convergence_step", 1e-3) * std::max(1.0, cnorm2(z));
    const double c1 = distribution_identity_check(op, pf.lambda, nu, z, hull, h0);
    const double c2 = distribution_identity_check(op, pf.lambda, nu, z, hull, h0 / 2.0);

    const double tol = task.params.value("expect_max_residual", 1e-4) * tol_scale;
    r.payload["residual"] = residual;
    r.payload["convergence"] = ordered_json{{"step", h0},
                                            {"residual_at_step", c1},
                                            {"residual_at_half_step", c2},
                                            {"ratio", c2 > 0.0 ? c1 / c2 : 0.0}};
    r.tolerances["residual"] = tol;
    r.status = residual <= tol ? "pass" : "fail";
    return r;
}

inline Report run_growth_diagnostic(const ProblemFile& pf, const TaskConfig& task) {
    Report r{task.id, task.kind, "diagnostic"};
    const std::string path = "/tasks/" + task.id;
    const auto& [nu, hull_name] =
        pf.measure(jsonio::require(task.params, "measure", path).get<std::string>(), path);
    const CompactHull& hull = task.params.contains("hull")
                                  ? pf.hull(task.params.at("hull").get<std::string>(), path)
                                  : pf.hull(hull_name, path);
    const int order = task.params.value("order", 0);
    const int per_shell = task.params.value("samples_per_shell", 160);
    const double margin = task.params.value("envelope_margin", 10.0);
    std::vector<double> radii{1.0, 10.0};
    if (task.params.contains("radii")) {
        radii.clear();
        for (const auto& v : task.params.at("radii")) radii.push_back(v.get<double>());
    }
    std::mt19937_64 rng(task.params.value("seed", 424242));
    std::normal_distribution<double> gauss;

    ordered_json shells = ordered_json::array();
    double base_max = -1.0;
    bool envelope_ok = true;
    for (const double radius : radii) {
        std::vector<CVec> samples;
        for (int s = 0; s < per_shell; ++s) {
            CVec z(pf.dimension);
            for (auto& v : z) v = cplx(gauss(rng), gauss(rng));
            const double len = cnorm2(z);
            for (auto& v : z) v *= radius / len;
            samples.push_back(std::move(z));
        }
        const GrowthReport report = growth_diagnostic(pf.lambda, nu, hull, order, samples);
        ordered_json shell;
        shell["radius"] = radius;
        shell["max_weighted"] = report.max_weighted;
        shell["argmax"] = jsonio::dump_cpoint(report.argmax);
        if (base_max < 0.0) {
            base_max = report.max_weighted;
        } else {
            const double envelope =
                std::pow((1.0 + radius) / (1.0 + radii.front()), order) * margin;
            shell["envelope_bound"] = envelope * base_max;
            if (report.max_weighted > envelope * base_max) envelope_ok = false;
        }
        shells.push_back(std::move(shell));
    }
    r.payload["shells"] = std::move(shells);
    r.payload["order"] = order;
    r.payload["envelope_ok"] = envelope_ok;
    r.tolerances["envelope_margin"] = margin;
    return r;
}

}  // namespace taskdetail

inline Report run_task(const ProblemFile& pf, const TaskConfig& task, double tol_scale = 1.0) {
    try {
        if (task.kind == "cone-info") return taskdetail::run_cone_info(pf, task);
        if (task.kind == "mellin-check") return taskdetail::run_mellin_check(pf, task, tol_scale);
        if (task.kind == "euler-roundtrip")
            return taskdetail::run_euler_roundtrip(pf, task, tol_scale);
        if (task.kind == "kernel-verify") return taskdetail::run_kernel_verify(pf, task, tol_scale);
        if (task.kind == "visibility-sample") return taskdetail::run_visibility_sample(pf, task);
        if (task.kind == "fit") return taskdetail::run_fit(pf, task, tol_scale);
        if (task.kind == "identity-check") return taskdetail::run_identity_check(pf, task, tol_scale);
        if (task.kind == "growth-diagnostic") return taskdetail::run_growth_diagnostic(pf, task);
        throw ValidationError("unknown task kind '" + task.kind + "'");
    } catch (const NumericalError& e) {
        Report r{task.id, task.kind, "fail"};
        r.payload["error"] = e.what();
        r.payload["achieved_tolerance"] = e.achieved_tolerance();
        r.numerical_error = true;
        return r;
    } catch (const std::exception& e) {
        Report r{task.id, task.kind, "fail"};
        r.payload["error"] = e.what();
        return r;
    }
}

// Runs every task; with `parallel` they execute concurrently (tasks are
// independent and the library is pure), but reports keep input order.
inline std::vector<Report> run_all_tasks(const ProblemFile& pf, double tol_scale = 1.0,
                                         bool parallel = false) {
    std::vector<Report> reports(pf.tasks.size(), Report{});
    if (parallel) {
        std::vector<std::future<Report>> futures;
        futures.reserve(pf.tasks.size());
        for (const auto& task : pf.tasks)
            futures.push_back(std::async(std::launch::async,
                                         [&pf, &task, tol_scale] { return run_task(pf, task, tol_scale); }));
        for (std::size_t i = 0; i < futures.size(); ++i) reports[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < pf.tasks.size(); ++i)
            reports[i] = run_task(pf, pf.tasks[i], tol_scale);
    }
    return reports;
}

inline ordered_json reports_to_json(const std::vector<Report>& reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    ordered_json out;
    out["reports"] = std::move(arr);
    int failures = 0, numerical = 0;
    for (const auto& r : reports) {
        if (r.status == "fail") ++failures;
        if (r.numerical_error) ++numerical;
    }
    out["failures"] = failures;
    out["numerical_errors"] = numerical;
    return out;
}

}  // namespace conekernel

#pragma once

#include <cstdio>
#include <map>
#include <string>

#include <json.hpp>

#include "conical.hpp"
#include "errors.hpp"
#include "euler_mellin.hpp"
#include "variety.hpp"

namespace conekernel {

using ordered_json = nlohmann::ordered_json;

namespace jsonio {

inline const ordered_json& require(const ordered_json& j, const std::string& key,
                                   const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        throw ValidationError("missing field '" + key + "'", path);
    return j.at(key);
}

inline int require_int(const ordered_json& j, const std::string& key, const std::string& path) {
    const auto& v = require(j, key, path);
    if (!v.is_number_integer())
        throw ValidationError("field '" + key + "' must be an integer", path + "/" + key);
    return v.get<int>();
}

inline double as_number(const ordered_json& v, const std::string& path) {
    if (!v.is_number()) throw ValidationError("expected a number", path);
    return v.get<double>();
}

inline cplx parse_complex(const ordered_json& v, const std::string& path) {
    if (!v.is_object() || !v.contains("re") || !v.contains("im"))
        throw ValidationError("complex numbers are {re, im} objects", path);
    return {as_number(v.at("re"), path + "/re"), as_number(v.at("im"), path + "/im")};
}

inline ordered_json dump_complex(cplx c) { return ordered_json{{"re", c.real()}, {"im", c.imag()}}; }

inline Vec parse_rpoint(const ordered_json& v, int n, const std::string& path) {
    if (!v.is_array() || static_cast<int>(v.size()) != n)
        throw ValidationError("expected an array of " + std::to_string(n) + " reals", path);
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = as_number(v.at(i), path + "/" + std::to_string(i));
    return x;
}

inline CVec parse_cpoint(const ordered_json& v, int n, const std::string& path) {
    if (!v.is_array() || static_cast<int>(v.size()) != n)
        throw ValidationError("expected an array of " + std::to_string(n) + " complex values", path);
    CVec z(n);
    for (int i = 0; i < n; ++i) z[i] = parse_complex(v.at(i), path + "/" + std::to_string(i));
    return z;
}

inline ordered_json dump_cpoint(std::span<const cplx> z) {
    ordered_json arr = ordered_json::array();
    for (const cplx& v : z) arr.push_back(dump_complex(v));
    return arr;
}

// Polynomials are arrays of {exponents, re, im} terms.
inline Polynomial parse_polynomial(const ordered_json& v, int n, const std::string& path) {
    if (!v.is_array()) throw ValidationError("polynomial must be an array of terms", path);
    Polynomial p(n);
    for (std::size_t t = 0; t < v.size(); ++t) {
        const std::string tpath = path + "/" + std::to_string(t);
        const auto& term = v.at(t);
        const auto& exps = require(term, "exponents", tpath);
        if (!exps.is_array() || static_cast<int>(exps.size()) != n)
            throw ValidationError("exponents must have length " + std::to_string(n),
                                  tpath + "/exponents");
        std::vector<int> e(n);
        for (int i = 0; i < n; ++i) {
            if (!exps.at(i).is_number_integer() || exps.at(i).get<int>() < 0)
                throw ValidationError("exponents must be nonnegative integers",
                                      tpath + "/exponents/" + std::to_string(i));
            e[i] = exps.at(i).get<int>();
        }
        p.add_term(MultiIndex(std::move(e)),
                   cplx(as_number(require(term, "re", tpath), tpath + "/re"),
                        as_number(require(term, "im", tpath), tpath + "/im")));
    }
    return p;
}

inline ordered_json dump_polynomial(const Polynomial& p) {
    ordered_json arr = ordered_json::array();
    for (const auto& [a, c] : p.terms()) {
        ordered_json term;
        term["exponents"] = a.exponents;
        term["re"] = c.real();
        term["im"] = c.imag();
        arr.push_back(std::move(term));
    }
    return arr;
}

// Recursive writer with a fixed 17-significant-digit float format so that
// identical inputs always produce byte-identical documents.
inline void write_deterministic(const ordered_json& j, std::string& out, int indent) {
    const std::string pad(indent, ' ');
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad + "  " + ordered_json(key).dump() + ": ";
                write_deterministic(value, out, indent + 2);
            }
            out += "\n" + pad + "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& value : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad + "  ";
                write_deterministic(value, out, indent + 2);
            }
            out += "\n" + pad + "]";
            return;
        }
        case ordered_json::value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
            out += buf;
            // %.17g drops the decimal marker for integral values; keep the
            // token a JSON float so round trips preserve the type.
            if (out.find_first_of(".eE", out.size() - std::strlen(buf)) == std::string::npos)
                out += ".0";
            return;
        }
        default:
            out += j.dump();
    }
}

inline std::string dump_deterministic(const ordered_json& j) {
    std::string out;
    write_deterministic(j, out, 0);
    out += "\n";
    return out;
}

}  // namespace jsonio

struct TaskConfig {
    std::string id;
    std::string kind;
    ordered_json params;
};

inline const std::vector<std::string>& known_task_kinds() {
    static const std::vector<std::string> kinds{
        "mellin-check",    "euler-roundtrip", "kernel-verify",    "cone-info",
        "visibility-sample", "fit",           "identity-check",   "growth-diagnostic"};
    return kinds;
}

// Parsed and validated problem file: the system, its spectral parameter, the
// cone, and the named geometric/measure/variety objects that tasks reference.
struct ProblemFile {
    int dimension;
    PolyMatrix system;
    LambdaParam lambda;
    Cone cone;
    std::map<std::string, CompactHull> hulls;
    std::map<std::string, NoetherianOp> ops;  // keyed "sigma/i"
    std::map<std::string, VarietyParam> varieties;
    std::map<std::string, std::pair<AtomicMeasure, std::string>> measures;  // measure, hull name
    std::vector<TaskConfig> tasks;

    static std::string op_key(int sigma, int i) {
        return std::to_string(sigma) + "/" + std::to_string(i);
    }

    const CompactHull& hull(const std::string& name, const std::string& path) const {
        auto it = hulls.find(name);
        if (it == hulls.end()) throw ValidationError("unknown hull '" + name + "'", path);
        return it->second;
    }
    const NoetherianOp& op(int sigma, int i, const std::string& path) const {
        auto it = ops.find(op_key(sigma, i));
        if (it == ops.end())
            throw ValidationError("unknown noetherian operator (" + op_key(sigma, i) + ")", path);
        return it->second;
    }
    const VarietyParam& variety(const std::string& name, const std::string& path) const {
        auto it = varieties.find(name);
        if (it == varieties.end()) throw ValidationError("unknown variety '" + name + "'", path);
        return it->second;
    }
    const std::pair<AtomicMeasure, std::string>& measure(const std::string& name,
                                                         const std::string& path) const {
        auto it = measures.find(name);
        if (it == measures.end()) throw ValidationError("unknown measure '" + name + "'", path);
        return it->second;
    }

    static ProblemFile parse(const std::string& text);
    ordered_json to_json() const;
};

namespace detail {

inline Cone parse_cone(const ordered_json& j, int n, const std::string& path) {
    const std::string kind = jsonio::require(j, "kind", path).get<std::string>();
    try {
        if (kind == "polyhedral") {
            const auto& gens = jsonio::require(j, "generators", path);
            if (!gens.is_array() || gens.empty())
                throw ValidationError("generators must be a nonempty array", path + "/generators");
            std::vector<Vec> g;
            for (std::size_t i = 0; i < gens.size(); ++i)
                g.push_back(jsonio::parse_rpoint(gens.at(i), n,
                                                 path + "/generators/" + std::to_string(i)));
            return Cone::polyhedral(std::move(g));
        }
        if (kind == "circular") {
            return Cone::circular(
                jsonio::parse_rpoint(jsonio::require(j, "axis", path), n, path + "/axis"),
                jsonio::as_number(jsonio::require(j, "half_angle", path), path + "/half_angle"));
        }
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what(), path);
    }
    throw ValidationError("cone kind must be 'polyhedral' or 'circular'", path + "/kind");
}

inline ordered_json dump_cone(const Cone& cone) {
    ordered_json j;
    if (cone.kind == Cone::Kind::kPolyhedral) {
        j["kind"] = "polyhedral";
        ordered_json gens = ordered_json::array();
        for (const auto& g : cone.generators) gens.push_back(g);
        j["generators"] = std::move(gens);
    } else {
        j["kind"] = "circular";
        j["axis"] = cone.axis;
        j["half_angle"] = cone.half_angle;
    }
    return j;
}

inline bool task_requires_regular_lambda(const std::string& kind) {
    return kind == "mellin-check" || kind == "euler-roundtrip" || kind == "fit" ||
           kind == "identity-check" || kind == "growth-diagnostic";
}

}  // namespace detail

inline ProblemFile ProblemFile::parse(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("not valid JSON: ") + e.what());
    }

    const int n = jsonio::require_int(j, "dimension", "");
    if (n < 1) throw ValidationError("dimension must be >= 1", "/dimension");

    // System matrix.
    const auto& sys = jsonio::require(j, "system", "");
    const int rows = jsonio::require_int(sys, "rows", "/system");
    const int cols = jsonio::require_int(sys, "cols", "/system");
    const auto& entries = jsonio::require(sys, "entries", "/system");
    if (!entries.is_array() || static_cast<int>(entries.size()) != rows)
        throw ValidationError("entries must be a rows x cols array", "/system/entries");
    PolyMatrix P(rows, cols, n);
    for (int r = 0; r < rows; ++r) {
        const auto& row = entries.at(r);
        const std::string rpath = "/system/entries/" + std::to_string(r);
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ValidationError("row must have cols entries", rpath);
        for (int c = 0; c < cols; ++c)
            P.at(r, c) = jsonio::parse_polynomial(row.at(c), n, rpath + "/" + std::to_string(c));
    }
    if (!P.homogeneity().has_value())
        throw ValidationError("P not homogeneous: all nonzero entries must share one degree",
                              "/system");

    const LambdaParam lambda(jsonio::parse_complex(jsonio::require(j, "lambda", ""), "/lambda"));
    Cone cone = detail::parse_cone(jsonio::require(j, "cone", ""), n, "/cone");

    ProblemFile pf{n, std::move(P), lambda, std::move(cone), {}, {}, {}, {}, {}};

    if (j.contains("hulls")) {
        for (const auto& [name, hv] : j.at("hulls").items()) {
            const std::string path = "/hulls/" + name;
            const auto& pts = jsonio::require(hv, "points", path);
            if (!pts.is_array() || pts.empty())
                throw ValidationError("hull needs a nonempty point list", path + "/points");
            std::vector<Vec> points;
            for (std::size_t i = 0; i < pts.size(); ++i)
                points.push_back(
                    jsonio::parse_rpoint(pts.at(i), n, path + "/points/" + std::to_string(i)));
            pf.hulls.emplace(name, CompactHull(std::move(points)));
        }
    }

    if (j.contains("noetherian_ops")) {
        const auto& ops = j.at("noetherian_ops");
        if (!ops.is_array()) throw ValidationError("noetherian_ops must be an array", "/noetherian_ops");
        for (std::size_t k = 0; k < ops.size(); ++k) {
            const std::string path = "/noetherian_ops/" + std::to_string(k);
            const auto& ov = ops.at(k);
            const int sigma = jsonio::require_int(ov, "sigma", path);
            const int i = jsonio::require_int(ov, "i", path);
            const auto& terms = jsonio::require(ov, "terms", path);
            if (!terms.is_array() || terms.empty())
                throw ValidationError("operator needs a nonempty term list", path + "/terms");
            std::vector<NoetherianOp::Term> parsed;
            int L = -1;
            for (std::size_t t = 0; t < terms.size(); ++t) {
                const std::string tpath = path + "/terms/" + std::to_string(t);
                const auto& tv = terms.at(t);
                const auto& av = jsonio::require(tv, "alpha", tpath);
                if (!av.is_array() || static_cast<int>(av.size()) != n)
                    throw ValidationError("alpha must have length n", tpath + "/alpha");
                std::vector<int> alpha(n);
                for (int d = 0; d < n; ++d) alpha[d] = av.at(d).get<int>();
                const auto& cv = jsonio::require(tv, "coeffs", tpath);
                if (!cv.is_array() || cv.empty())
                    throw ValidationError("coeffs must be a nonempty array of polynomials",
                                          tpath + "/coeffs");
                if (L < 0) L = static_cast<int>(cv.size());
                std::vector<Polynomial> coeffs;
                for (std::size_t l = 0; l < cv.size(); ++l)
                    coeffs.push_back(jsonio::parse_polynomial(
                        cv.at(l), n, tpath + "/coeffs/" + std::to_string(l)));
                parsed.push_back({MultiIndex(std::move(alpha)), std::move(coeffs)});
            }
            try {
                pf.ops.emplace(op_key(sigma, i), NoetherianOp(L, std::move(parsed)));
            } catch (const std::invalid_argument& e) {
                throw ValidationError(e.what(), path);
            }
        }
    }

    if (j.contains("varieties")) {
        for (const auto& [name, vv] : j.at("varieties").items()) {
            const std::string path = "/varieties/" + name;
            const int d = jsonio::require_int(vv, "domain_dimension", path);
            const auto& mv = jsonio::require(vv, "map", path);
            if (!mv.is_array() || static_cast<int>(mv.size()) != n)
                throw ValidationError("map must provide n coordinate polynomials", path + "/map");
            std::vector<Polynomial> map;
            for (int i = 0; i < n; ++i)
                map.push_back(
                    jsonio::parse_polynomial(mv.at(i), d, path + "/map/" + std::to_string(i)));
            std::vector<Polynomial> defining;
            if (vv.contains("defining")) {
                const auto& dv = vv.at("defining");
                for (std::size_t i = 0; i < dv.size(); ++i)
                    defining.push_back(jsonio::parse_polynomial(
                        dv.at(i), n, path + "/defining/" + std::to_string(i)));
            }
            pf.varieties.emplace(name, VarietyParam(d, std::move(map), std::move(defining)));
        }
    }

    if (j.contains("measures")) {
        for (const auto& [name, mv] : j.at("measures").items()) {
            const std::string path = "/measures/" + name;
            const std::string hull_name = jsonio::require(mv, "hull", path).get<std::string>();
            const CompactHull& hull = pf.hull(hull_name, path + "/hull");
            const auto& pts = jsonio::require(mv, "points", path);
            const auto& wts = jsonio::require(mv, "weights", path);
            if (!pts.is_array() || pts.empty() || pts.size() != wts.size())
                throw ValidationError("points/weights must be nonempty and matched", path);
            std::vector<Vec> points;
            CVec weights;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                points.push_back(
                    jsonio::parse_rpoint(pts.at(i), n, path + "/points/" + std::to_string(i)));
                weights.push_back(
                    jsonio::parse_complex(wts.at(i), path + "/weights/" + std::to_string(i)));
            }
            for (std::size_t i = 0; i < points.size(); ++i)
                if (!hull.contains(points[i]))
                    throw ValidationError("measure atom outside its hull",
                                          path + "/points/" + std::to_string(i));
            pf.measures.emplace(name,
                                std::make_pair(AtomicMeasure(std::move(points), std::move(weights)),
                                               hull_name));
        }
    }

    const auto& tasks = jsonio::require(j, "tasks", "");
    if (!tasks.is_array()) throw ValidationError("tasks must be an array", "/tasks");
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const std::string path = "/tasks/" + std::to_string(t);
        const auto& tv = tasks.at(t);
        TaskConfig cfg;
        cfg.id = jsonio::require(tv, "id", path).get<std::string>();
        cfg.kind = jsonio::require(tv, "kind", path).get<std::string>();
        const auto& kinds = known_task_kinds();
        if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end())
            throw ValidationError("unknown task kind '" + cfg.kind + "'", path + "/kind");
        if (detail::task_requires_regular_lambda(cfg.kind) && pf.lambda.near_natural())
            throw ValidationError("task '" + cfg.id +
                                      "' needs lambda in C \\ N_0 (the Mellin formula has poles "
                                      "at the nonnegative integers)",
                                  path);
        cfg.params = tv;
        pf.tasks.push_back(std::move(cfg));
    }
    return pf;
}

inline ordered_json ProblemFile::to_json() const {
    ordered_json j;
    j["dimension"] = dimension;
    ordered_json sys;
    sys["rows"] = system.rows();
    sys["cols"] = system.cols();
    ordered_json entries = ordered_json::array();
    for (int r = 0; r < system.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < system.cols(); ++c) row.push_back(jsonio::dump_polynomial(system.at(r, c)));
        entries.push_back(std::move(row));
    }
    sys["entries"] = std::move(entries);
    j["system"] = std::move(sys);
    j["lambda"] = jsonio::dump_complex(lambda.value);
    j["cone"] = detail::dump_cone(cone);

    ordered_json hull_obj;
    for (const auto& [name, hull] : hulls) {
        ordered_json hv;
        ordered_json pts = ordered_json::array();
        for (const auto& p : hull.points) pts.push_back(p);
        hv["points"] = std::move(pts);
        hull_obj[name] = std::move(hv);
    }
    j["hulls"] = std::move(hull_obj);

    ordered_json ops_arr = ordered_json::array();
    for (const auto& [key, op] : ops) {
        const auto slash = key.find('/');
        ordered_json ov;
        ov["sigma"] = std::stoi(key.substr(0, slash));
        ov["i"] = std::stoi(key.substr(slash + 1));
        ordered_json terms = ordered_json::array();
        for (const auto& term : op.terms) {
            ordered_json tv;
            tv["alpha"] = term.alpha.exponents;
            ordered_json coeffs = ordered_json::array();
            for (const auto& p : term.coeffs) coeffs.push_back(jsonio::dump_polynomial(p));
            tv["coeffs"] = std::move(coeffs);
            terms.push_back(std::move(tv));
        }
        ov["terms"] = std::move(terms);
        ops_arr.push_back(std::move(ov));
    }
    j["noetherian_ops"] = std::move(ops_arr);

    ordered_json var_obj;
    for (const auto& [name, v] : varieties) {
        ordered_json vv;
        vv["domain_dimension"] = v.domain_dim;
        ordered_json map = ordered_json::array();
        for (const auto& p : v.map) map.push_back(jsonio::dump_polynomial(p));
        vv["map"] = std::move(map);
        ordered_json defining = ordered_json::array();
        for (const auto& p : v.defining) defining.push_back(jsonio::dump_polynomial(p));
        vv["defining"] = std::move(defining);
        var_obj[name] = std::move(vv);
    }
    j["varieties"] = std::move(var_obj);

    ordered_json meas_obj;
    for (const auto& [name, entry] : measures) {
        ordered_json mv;
        mv["hull"] = entry.second;
        ordered_json pts = ordered_json::array();
        ordered_json wts = ordered_json::array();
        for (const auto& p : entry.first.points) pts.push_back(p);
        for (const cplx& w : entry.first.weights) wts.push_back(jsonio::dump_complex(w));
        mv["points"] = std::move(pts);
        mv["weights"] = std::move(wts);
        meas_obj[name] = std::move(mv);
    }
    j["measures"] = std::move(meas_obj);

    ordered_json task_arr = ordered_json::array();
    for (const auto& t : tasks) task_arr.push_back(t.params);
    j["tasks"] = std::move(task_arr);
    return j;
}

}  // namespace conekernel

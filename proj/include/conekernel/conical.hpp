#pragma once

#include <algorithm>
#include <map>

#include "euler_mellin.hpp"
#include "polynomial.hpp"
#include "types.hpp"

namespace conekernel {

// Differential operator sum_alpha a_alpha(z) d_z^alpha with a_alpha in
// C[z]^L, acting as a vector-valued operator on scalars (each coefficient
// list has one polynomial per output component) and, transposed, as a scalar
// functional on vectors.
struct NoetherianOp {
    struct Term {
        MultiIndex alpha;
        std::vector<Polynomial> coeffs;  // length L
    };

    int components;  // L
    std::vector<Term> terms;

    NoetherianOp(int L, std::vector<Term> t) : components(L), terms(std::move(t)) {
        if (L < 1) throw std::invalid_argument("NoetherianOp: component count must be >= 1");
        if (terms.empty()) throw std::invalid_argument("NoetherianOp: empty term list");
        const int n = terms.front().alpha.dimension();
        for (const auto& term : terms) {
            if (term.alpha.dimension() != n)
                throw std::invalid_argument("NoetherianOp: mixed exponent dimensions");
            if (static_cast<int>(term.coeffs.size()) != L)
                throw std::invalid_argument("NoetherianOp: coefficient list must have L entries");
            for (const auto& p : term.coeffs)
                if (p.dimension() != n)
                    throw std::invalid_argument("NoetherianOp: coefficient dimension mismatch");
        }
    }

    int dimension() const { return terms.front().alpha.dimension(); }

    int max_order() const {
        int a = 0;
        for (const auto& t : terms) a = std::max(a, t.alpha.order());
        return a;
    }

    static NoetherianOp identity(int n, int L = 1) {
        std::vector<Polynomial> ones;
        for (int l = 0; l < L; ++l) ones.push_back(Polynomial::constant(n, 1.0));
        return NoetherianOp(L, {Term{MultiIndex::zero(n), std::move(ones)}});
    }
};

// One summand c * x^alpha * (-<x,z>)^(lambda - k) at the ambient (lambda, z).
struct ConicalTerm {
    cplx coeff;
    MultiIndex alpha;
    int offset;  // k
};

// Finite sum of conical terms per component, closed under d/dx. The whole
// function shares one (lambda, z).
class ConicalFunction {
   public:
    ConicalFunction(cplx lambda, CVec z, int num_components)
        : lambda_(lambda), z_(std::move(z)), comps_(num_components) {
        if (num_components < 1)
            throw std::invalid_argument("ConicalFunction: need at least one component");
    }

    cplx lambda() const { return lambda_; }
    const CVec& parameter() const { return z_; }
    int dimension() const { return static_cast<int>(z_.size()); }
    int num_components() const { return static_cast<int>(comps_.size()); }
    const std::vector<ConicalTerm>& component(int l) const { return comps_.at(l); }

    void add_term(int l, ConicalTerm t) {
        if (t.alpha.dimension() != dimension())
            throw std::invalid_argument("ConicalFunction: term dimension mismatch");
        if (t.offset < 0) throw std::invalid_argument("ConicalFunction: negative offset");
        comps_.at(l).push_back(std::move(t));
    }

    // Merge terms with equal (alpha, offset) and drop coefficients at the
    // floating-point noise floor relative to the largest one.
    ConicalFunction collected() const {
        ConicalFunction out(lambda_, z_, num_components());
        for (int l = 0; l < num_components(); ++l) {
            std::map<std::pair<int, std::vector<int>>, cplx> acc;  // key: (offset, alpha)
            double max_abs = 0.0;
            for (const auto& t : comps_[l]) {
                acc[{t.offset, t.alpha.exponents}] += t.coeff;
                max_abs = std::max(max_abs, std::abs(t.coeff));
            }
            for (auto& [key, c] : acc)
                if (std::abs(c) > kCoeffPruneTol * std::max(1.0, max_abs))
                    out.comps_[l].push_back({c, MultiIndex(key.second), key.first});
        }
        return out;
    }

    bool empty() const {
        return std::all_of(comps_.begin(), comps_.end(),
                           [](const auto& c) { return c.empty(); });
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& comp : comps_)
            for (const auto& t : comp) m = std::max(m, std::abs(t.coeff));
        return m;
    }

   private:
    cplx lambda_;
    CVec z_;
    std::vector<std::vector<ConicalTerm>> comps_;
};

// B(z, d_z) (-<x,z>)^lambda expanded into conical terms: each operator term
// a_alpha(z) d_z^alpha contributes (-1)^|alpha| (lambda)_|alpha| a_alpha(z)
// x^alpha (-<x,z>)^(lambda-|alpha|) per component.
inline ConicalFunction expand_kernel(const NoetherianOp& op, const LambdaParam& lambda,
                                     std::span<const cplx> z) {
    if (op.dimension() != static_cast<int>(z.size()))
        throw std::invalid_argument("expand_kernel: dimension mismatch");
    ConicalFunction f(lambda.value, CVec(z.begin(), z.end()), op.components);
    for (const auto& term : op.terms) {
        const int m = term.alpha.order();
        const cplx cascade =
            (m % 2 == 0 ? 1.0 : -1.0) * falling_factorial(lambda.value, m);
        for (int l = 0; l < op.components; ++l) {
            const cplx c = cascade * term.coeffs[l].eval(z);
            if (c != 0.0) f.add_term(l, {c, term.alpha, m});
        }
    }
    return f.collected();
}

// d/dx_i by the product rule: c x^alpha b^(lambda-k) with b = -<x,z> maps to
// c alpha_i x^(alpha-e_i) b^(lambda-k) + c (lambda-k)(-z_i) x^alpha b^(lambda-k-1).
inline ConicalFunction diff_conical(const ConicalFunction& f, int axis) {
    const int n = f.dimension();
    if (axis < 0 || axis >= n) throw std::invalid_argument("diff_conical: axis out of range");
    ConicalFunction out(f.lambda(), f.parameter(), f.num_components());
    for (int l = 0; l < f.num_components(); ++l) {
        for (const auto& t : f.component(l)) {
            if (t.alpha.exponents[axis] > 0) {
                std::vector<int> e = t.alpha.exponents;
                const double a_i = e[axis];
                e[axis] -= 1;
                out.add_term(l, {t.coeff * a_i, MultiIndex(std::move(e)), t.offset});
            }
            const cplx c2 = t.coeff * (f.lambda() - static_cast<double>(t.offset)) *
                            (-f.parameter()[axis]);
            out.add_term(l, {c2, t.alpha, t.offset + 1});
        }
    }
    return out.collected();
}

// Pointwise value at x, principal branch. The power base -<x,z> must stay
// off the cut (-inf, 0]; that is guaranteed on the cone when z in U_Omega
// and must be checked per point otherwise.
inline CVec eval_conical(const ConicalFunction& f, std::span<const double> x) {
    if (static_cast<int>(x.size()) != f.dimension())
        throw std::invalid_argument("eval_conical: point dimension mismatch");
    const cplx base = -pairing(x, f.parameter());
    if (on_negative_real_axis(base))
        throw std::domain_error("eval_conical: -<x,z> hit the branch cut (-inf, 0]");
    const cplx base_lambda = principal_pow(base, f.lambda());
    CVec values(f.num_components(), 0.0);
    for (int l = 0; l < f.num_components(); ++l) {
        for (const auto& t : f.component(l)) {
            cplx v = t.coeff * base_lambda / ipow(base, t.offset);
            for (int i = 0; i < f.dimension(); ++i) v *= ipow(x[i], t.alpha.exponents[i]);
            values[l] += v;
        }
    }
    return values;
}

namespace detail {

inline ConicalFunction component_slice(const ConicalFunction& f, int l) {
    ConicalFunction g(f.lambda(), f.parameter(), 1);
    for (const auto& t : f.component(l)) g.add_term(0, t);
    return g;
}

inline ConicalFunction apply_monomial_derivative(ConicalFunction f, const MultiIndex& gamma) {
    for (int i = 0; i < gamma.dimension(); ++i)
        for (int rep = 0; rep < gamma.exponents[i]; ++rep) f = diff_conical(f, i);
    return f;
}

}  // namespace detail

// Residuals (P(d/dx) u)_j = sum_l P_jl(d/dx) u_l, each returned as a scalar
// ConicalFunction.
inline std::vector<ConicalFunction> apply_P(const PolyMatrix& P, const ConicalFunction& f) {
    if (P.cols() != f.num_components() || P.dimension() != f.dimension())
        throw std::invalid_argument("apply_P: shape mismatch between system and function");
    std::vector<ConicalFunction> residuals;
    residuals.reserve(P.rows());
    for (int j = 0; j < P.rows(); ++j) {
        ConicalFunction r(f.lambda(), f.parameter(), 1);
        for (int l = 0; l < P.cols(); ++l) {
            const ConicalFunction slice = detail::component_slice(f, l);
            for (const auto& [gamma, c] : P.at(j, l).terms()) {
                const ConicalFunction d = detail::apply_monomial_derivative(slice, gamma);
                for (const auto& t : d.component(0)) r.add_term(0, {t.coeff * c, t.alpha, t.offset});
            }
        }
        residuals.push_back(r.collected());
    }
    return residuals;
}

// Canonical form: within each component every term is rewritten to the
// maximal offset k_max via (-<x,z>)^(k_max-k) = (sum_j (-z_j) x_j)^(k_max-k),
// then collected per monomial. Distinct x-monomials against the fixed power
// (-<x,z>)^(lambda-k_max) are linearly independent for numeric z, which makes
// the empty term list a sound zero test. Coefficients below 1e-10 of the
// largest input coefficient are dropped.
inline ConicalFunction normalize(const ConicalFunction& f) {
    const int n = f.dimension();
    ConicalFunction out(f.lambda(), f.parameter(), f.num_components());
    for (int l = 0; l < f.num_components(); ++l) {
        const auto& terms = f.component(l);
        if (terms.empty()) continue;
        int k_max = 0;
        double max_in = 0.0;
        for (const auto& t : terms) {
            k_max = std::max(k_max, t.offset);
            max_in = std::max(max_in, std::abs(t.coeff));
        }
        std::map<std::vector<int>, cplx> acc;
        for (const auto& t : terms) {
            // Expand the linear form power (sum_j (-z_j) x_j)^(k_max - offset).
            std::map<std::vector<int>, cplx> expansion{{std::vector<int>(n, 0), t.coeff}};
            for (int rep = 0; rep < k_max - t.offset; ++rep) {
                std::map<std::vector<int>, cplx> next;
                for (const auto& [e, c] : expansion) {
                    for (int j = 0; j < n; ++j) {
                        const cplx cz = c * (-f.parameter()[j]);
                        if (cz == 0.0) continue;
                        std::vector<int> e2 = e;
                        e2[j] += 1;
                        next[std::move(e2)] += cz;
                    }
                }
                expansion = std::move(next);
            }
            for (const auto& [e, c] : expansion) {
                std::vector<int> shifted = e;
                for (int i = 0; i < n; ++i) shifted[i] += t.alpha.exponents[i];
                acc[std::move(shifted)] += c;
            }
        }
        for (const auto& [e, c] : acc)
            if (std::abs(c) > 1e-10 * max_in) out.add_term(l, {c, MultiIndex(e), k_max});
    }
    return out;
}

inline bool is_zero(const ConicalFunction& f) { return normalize(f).empty(); }

// Max termwise Euler defect |coeff * ((|alpha| - k) + (f.lambda - mu))| under
// E_mu; with mu equal to the ambient lambda this is |coeff * (|alpha| - k)|,
// zero exactly when every term is lambda-homogeneous.
inline double euler_residual(const LambdaParam& mu, const ConicalFunction& f) {
    double worst = 0.0;
    for (int l = 0; l < f.num_components(); ++l)
        for (const auto& t : f.component(l)) {
            const cplx factor =
                static_cast<double>(t.alpha.order() - t.offset) + (f.lambda() - mu.value);
            worst = std::max(worst, std::abs(t.coeff * factor));
        }
    return worst;
}

// Euler weight kappa with [E_0^z, B] = kappa B: each operator term with
// homogeneous coefficients of degree d contributes weight d - |alpha|; the
// weight exists only if all terms agree.
inline std::optional<int> graded_weight(const NoetherianOp& op) {
    std::optional<int> kappa;
    for (const auto& term : op.terms) {
        std::optional<int> degree;
        bool any_nonzero = false;
        for (const auto& p : term.coeffs) {
            if (p.is_zero()) continue;
            any_nonzero = true;
            auto d = p.homogeneous_degree();
            if (!d) return std::nullopt;
            if (!degree)
                degree = d;
            else if (*degree != *d)
                return std::nullopt;
        }
        if (!any_nonzero) continue;
        const int w = *degree - term.alpha.order();
        if (!kappa)
            kappa = w;
        else if (*kappa != w)
            return std::nullopt;
    }
    return kappa;
}

namespace detail {

// Central finite differences for d_z^alpha of a scalar function of z,
// composed axis by axis; enumerate_stencil records every base point the
// recursion will evaluate.
template <class F>
cplx fd_partial(F&& func, const CVec& z, const MultiIndex& alpha, double h) {
    int axis = -1;
    for (int i = 0; i < alpha.dimension(); ++i)
        if (alpha.exponents[i] > 0) {
            axis = i;
            break;
        }
    if (axis < 0) return func(z);
    std::vector<int> reduced = alpha.exponents;
    reduced[axis] -= 1;
    const MultiIndex rest(reduced);
    CVec zp = z, zm = z;
    zp[axis] += h;
    zm[axis] -= h;
    return (fd_partial(func, zp, rest, h) - fd_partial(func, zm, rest, h)) / (2.0 * h);
}

inline void enumerate_stencil(const CVec& z, const MultiIndex& alpha, double h,
                              std::vector<CVec>& out) {
    int axis = -1;
    for (int i = 0; i < alpha.dimension(); ++i)
        if (alpha.exponents[i] > 0) {
            axis = i;
            break;
        }
    if (axis < 0) {
        out.push_back(z);
        return;
    }
    std::vector<int> reduced = alpha.exponents;
    reduced[axis] -= 1;
    const MultiIndex rest(reduced);
    CVec zp = z, zm = z;
    zp[axis] += h;
    zm[axis] -= h;
    enumerate_stencil(zp, rest, h, out);
    enumerate_stencil(zm, rest, h, out);
}

}  // namespace detail

// Residual of the transform identity
//   B~(z, d_z) M_lambda^z nu^(z) = Gamma(-lambda) nu(B(z, d_z) (-<x,z>)^lambda),
// with the scalar measure applied across components (contraction = sum over
// l). The left side uses quadrature plus finite differences in z; the right
// side is exact through the kernel expansion.
inline double distribution_identity_check(const NoetherianOp& op, const LambdaParam& lambda,
                                          const AtomicMeasure& nu, std::span<const cplx> z,
                                          const CompactHull& hull, double step = 0.0) {
    lambda.require_regular();
    const CVec base(z.begin(), z.end());
    const RegularizationOrder reg = default_reg_order(lambda.value);
    const double scale = std::max(1.0, cnorm2(z));
    auto step_for = [&](int order) {
        if (step > 0.0) return step;
        return (order >= 2 ? 1e-4 : 1e-5) * scale;
    };

    // Precondition: every FD evaluation point stays inside U_K.
    for (const auto& term : op.terms) {
        std::vector<CVec> pts;
        detail::enumerate_stencil(base, term.alpha, step_for(term.alpha.order()), pts);
        for (const auto& p : pts)
            if (!in_UK(hull, p))
                throw std::domain_error("distribution_identity_check: FD stencil leaves U_K");
    }

    auto M = [&](const CVec& point) { return mellin_M(lambda, nu, point, reg, hull); };
    cplx lhs = 0.0;
    for (const auto& term : op.terms) {
        const cplx d = detail::fd_partial(M, base, term.alpha, step_for(term.alpha.order()));
        for (int l = 0; l < op.components; ++l) lhs += term.coeffs[l].eval(z) * d;
    }

    const ConicalFunction kernel = expand_kernel(op, lambda, z);
    cplx rhs = 0.0;
    for (std::size_t j = 0; j < nu.points.size(); ++j) {
        const CVec values = eval_conical(kernel, nu.points[j]);
        cplx contracted = 0.0;
        for (const cplx& v : values) contracted += v;
        rhs += nu.weights[j] * contracted;
    }
    rhs *= gamma(-lambda.value);

    return std::abs(lhs - rhs);
}

}  // namespace conekernel

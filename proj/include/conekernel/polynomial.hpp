#pragma once

#include <map>
#include <optional>
#include <span>
#include <sstream>

#include "multi_index.hpp"
#include "types.hpp"

namespace conekernel {

// Absolute coefficient pruning tolerance after ring operations.
inline constexpr double kCoeffPruneTol = 1e-14;

// Sparse multivariate polynomial over C, keyed by exponent vector in
// graded-lex order. Immutable in spirit: operations return new values.
class Polynomial {
   public:
    using TermMap = std::map<MultiIndex, cplx, GradedLex>;

    explicit Polynomial(int dimension) : dim_(dimension) {
        if (dimension < 1) throw std::invalid_argument("Polynomial: dimension must be >= 1");
    }

    static Polynomial zero(int n) { return Polynomial(n); }

    static Polynomial constant(int n, cplx c) {
        Polynomial p(n);
        p.add_term(MultiIndex::zero(n), c);
        return p;
    }

    // c * x^alpha
    static Polynomial monomial(int n, const MultiIndex& alpha, cplx c) {
        if (alpha.dimension() != n)
            throw std::invalid_argument("Polynomial::monomial: exponent length mismatch");
        Polynomial p(n);
        p.add_term(alpha, c);
        return p;
    }

    // Single variable x_i (0-based).
    static Polynomial variable(int n, int i) {
        return monomial(n, MultiIndex::unit(n, i), 1.0);
    }

    int dimension() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const MultiIndex& alpha, cplx c) {
        if (alpha.dimension() != dim_)
            throw std::invalid_argument("Polynomial: exponent length mismatch");
        auto [it, inserted] = terms_.try_emplace(alpha, c);
        if (!inserted) it->second += c;
        if (std::abs(it->second) <= kCoeffPruneTol) terms_.erase(it);
    }

    Polynomial operator+(const Polynomial& o) const {
        check_same_dim(o);
        Polynomial r = *this;
        for (const auto& [a, c] : o.terms_) r.add_term(a, c);
        return r;
    }

    Polynomial operator-(const Polynomial& o) const {
        check_same_dim(o);
        Polynomial r = *this;
        for (const auto& [a, c] : o.terms_) r.add_term(a, -c);
        return r;
    }

    Polynomial operator*(cplx s) const {
        Polynomial r(dim_);
        for (const auto& [a, c] : terms_) r.add_term(a, c * s);
        return r;
    }

    Polynomial operator*(const Polynomial& o) const {
        check_same_dim(o);
        Polynomial r(dim_);
        for (const auto& [a, ca] : terms_) {
            for (const auto& [b, cb] : o.terms_) {
                std::vector<int> e(dim_);
                for (int i = 0; i < dim_; ++i) e[i] = a.exponents[i] + b.exponents[i];
                r.add_term(MultiIndex(std::move(e)), ca * cb);
            }
        }
        return r;
    }

    cplx eval(std::span<const cplx> z) const {
        if (static_cast<int>(z.size()) != dim_)
            throw std::invalid_argument("Polynomial::eval: point dimension mismatch");
        cplx s = 0.0;
        for (const auto& [a, c] : terms_) {
            cplx m = c;
            for (int i = 0; i < dim_; ++i) m *= ipow(z[i], a.exponents[i]);
            s += m;
        }
        return s;
    }

    cplx eval(std::span<const double> x) const {
        CVec z(x.begin(), x.end());
        return eval(std::span<const cplx>(z));
    }

    // Exact partial derivative with respect to variable i (0-based).
    Polynomial diff(int i) const {
        if (i < 0 || i >= dim_) throw std::invalid_argument("Polynomial::diff: axis out of range");
        Polynomial r(dim_);
        for (const auto& [a, c] : terms_) {
            const int e = a.exponents[i];
            if (e == 0) continue;
            std::vector<int> d = a.exponents;
            d[i] -= 1;
            r.add_term(MultiIndex(std::move(d)), c * static_cast<double>(e));
        }
        return r;
    }

    // d if every term has |alpha| = d; empty for the zero polynomial and
    // for inhomogeneous input.
    std::optional<int> homogeneous_degree() const {
        if (terms_.empty()) return std::nullopt;
        const int d = terms_.begin()->first.order();
        for (const auto& [a, c] : terms_)
            if (a.order() != d) return std::nullopt;
        return d;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [a, c] : terms_) d = std::max(d, a.order());
        return d;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [a, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    bool same_terms(const Polynomial& o, double tol) const {
        if (dim_ != o.dim_) return false;
        Polynomial d = *this - o;
        return d.max_abs_coeff() <= tol;
    }

    std::string str(const std::string& var = "z") const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [a, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
            for (int i = 0; i < dim_; ++i)
                if (a.exponents[i] > 0) {
                    os << "*" << var << i + 1;
                    if (a.exponents[i] > 1) os << "^" << a.exponents[i];
                }
        }
        return os.str();
    }

   private:
    void check_same_dim(const Polynomial& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
    }

    int dim_;
    TermMap terms_;
};

// J x L matrix of polynomials, the symbol of the system P(d/dx).
class PolyMatrix {
   public:
    PolyMatrix(int rows, int cols, int dimension)
        : rows_(rows), cols_(cols), dim_(dimension), entries_(rows * cols, Polynomial(dimension)) {
        if (rows < 1 || cols < 1) throw std::invalid_argument("PolyMatrix: empty shape");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int dimension() const { return dim_; }

    Polynomial& at(int j, int l) { return entries_.at(index(j, l)); }
    const Polynomial& at(int j, int l) const { return entries_.at(index(j, l)); }

    // m if all nonzero entries are homogeneous of the same degree m,
    // empty otherwise. The zero matrix has no defined degree.
    std::optional<int> homogeneity() const {
        std::optional<int> m;
        for (const auto& p : entries_) {
            if (p.is_zero()) continue;
            auto d = p.homogeneous_degree();
            if (!d) return std::nullopt;
            if (!m)
                m = d;
            else if (*m != *d)
                return std::nullopt;
        }
        return m;
    }

   private:
    int index(int j, int l) const {
        if (j < 0 || j >= rows_ || l < 0 || l >= cols_)
            throw std::out_of_range("PolyMatrix: index out of range");
        return j * cols_ + l;
    }

    int rows_, cols_, dim_;
    std::vector<Polynomial> entries_;
};

}  // namespace conekernel

#pragma once

#include <stdexcept>
#include <string>

namespace conekernel {

// Numerical failure (quadrature non-convergence and friends); carries the
// tolerance actually achieved so reports can show how close the run got.
class NumericalError : public std::runtime_error {
   public:
    NumericalError(const std::string& what, double achieved_tol)
        : std::runtime_error(what), achieved_tol_(achieved_tol) {}
    double achieved_tolerance() const { return achieved_tol_; }

   private:
    double achieved_tol_;
};

// Problem-file schema or invariant violation; `where` is a JSON-pointer-style
// path into the offending document.
class ValidationError : public std::runtime_error {
   public:
    ValidationError(const std::string& what, std::string where = "")
        : std::runtime_error(where.empty() ? what : what + " (at " + where + ")"),
          where_(std::move(where)) {}
    const std::string& where() const { return where_; }

   private:
    std::string where_;
};

}  // namespace conekernel

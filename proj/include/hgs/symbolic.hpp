#pragma once

#include <map>
#include <string>
#include <vector>

#include "hgs/types.hpp"

namespace hgs {

// Sparse multivariate polynomial with real coefficients, keyed by exponent vector.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int n_vars) : n_vars_(n_vars) {}
  static Polynomial constant(int n_vars, double c);
  static Polynomial variable(int n_vars, int index);

  int n_vars() const { return n_vars_; }
  const std::map<Exponents, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add_term(const Exponents& e, double c);
  Polynomial& operator+=(const Polynomial& o);
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  cplx evaluate(const CVec& x) const;
  Polynomial derivative(int var) const;
  // Drops terms with |coefficient| <= tol.
  void prune(double tol);
  // Largest coefficient difference against another polynomial.
  double distance(const Polynomial& o) const;
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  int n_vars_ = 0;
  std::map<Exponents, double> terms_;
};

}  // namespace hgs

#include "hgs/symbolic.hpp"

#include <cmath>
#include <sstream>

namespace hgs {

Polynomial Polynomial::constant(int n_vars, double c) {
  Polynomial p(n_vars);
  p.add_term(Exponents(n_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int n_vars, int index) {
  if (index < 0 || index >= n_vars) fail(ErrorKind::kStructural, "polynomial variable index out of range");
  Polynomial p(n_vars);
  Exponents e(n_vars, 0);
  e[index] = 1;
  p.add_term(e, 1.0);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Exponents& e, double c) {
  if (static_cast<int>(e.size()) != n_vars_) fail(ErrorKind::kStructural, "exponent vector has the wrong length");
  if (c == 0.0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.n_vars_ != n_vars_) fail(ErrorKind::kStructural, "polynomials over different variable sets");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r += o;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.n_vars_ != n_vars_) fail(ErrorKind::kStructural, "polynomials over different variable sets");
  Polynomial r(n_vars_);
  Exponents e(n_vars_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      for (int k = 0; k < n_vars_; ++k) e[k] = e1[k] + e2[k];
      r.add_term(e, c1 * c2);
    }
  }
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r(n_vars_);
  for (const auto& [e, c] : terms_) r.add_term(e, c * s);
  return r;
}

cplx Polynomial::evaluate(const CVec& x) const {
  if (x.size() != n_vars_) fail(ErrorKind::kStructural, "evaluation point has the wrong dimension");
  cplx s = 0.0;
  for (const auto& [e, c] : terms_) {
    cplx t = c;
    for (int k = 0; k < n_vars_; ++k)
      for (int p = 0; p < e[k]; ++p) t *= x(k);
    s += t;
  }
  return s;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial r(n_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    --d[var];
    r.add_term(d, c * e[var]);
  }
  return r;
}

void Polynomial::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol) it = terms_.erase(it);
    else ++it;
  }
}

double Polynomial::distance(const Polynomial& o) const {
  const Polynomial d = *this - o;
  double m = 0.0;
  for (const auto& [e, c] : d.terms_) m = std::max(m, std::abs(c));
  return m;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (first) os << (c < 0 ? "-" : "");
    else os << (c < 0 ? " - " : " + ");
    first = false;
    std::vector<std::string> factors;
    if (std::abs(std::abs(c) - 1.0) > 1e-15) {
      std::ostringstream num;
      num.precision(6);
      num << std::abs(c);
      factors.push_back(num.str());
    }
    for (int k = 0; k < n_vars_; ++k) {
      if (e[k] == 0) continue;
      factors.push_back(e[k] > 1 ? names.at(k) + "^" + std::to_string(e[k]) : names.at(k));
    }
    if (factors.empty()) factors.push_back("1");
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
  }
  return os.str();
}

}  // namespace hgs

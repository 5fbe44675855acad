#include "hgs/constraints.hpp"

#include <cmath>
#include <functional>

#include "hgs/herald.hpp"

namespace hgs {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

std::vector<std::string> variable_names(int d) {
  std::vector<std::string> n;
  for (int i = 0; i < d; ++i) n.push_back("mu" + std::to_string(i + 2));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) n.push_back("f" + std::to_string(i + 2) + std::to_string(j + 2));
  return n;
}

}  // namespace

int relation_variable_count(int d) { return d + d * (d + 1) / 2; }

int f_variable(int d, int i, int j) {
  if (i > j) std::swap(i, j);
  // Upper triangle, row-major, after the d mu variables.
  return d + i * d - i * (i - 1) / 2 + (j - i);
}

CVec RelationSet::evaluate(const CVec& vars) const {
  CVec r(n_t());
  for (int n = 0; n < n_t(); ++n) r(n) = ratios[n].evaluate(vars);
  return r;
}

void RelationSet::finalize() {
  partials.assign(ratios.size(), {});
  for (std::size_t n = 0; n < ratios.size(); ++n)
    for (int v = 0; v < n_vars; ++v) partials[n].push_back(ratios[n].derivative(v));
}

CMat RelationSet::jacobian(const CVec& vars) const {
  CMat j(n_t(), n_vars);
  for (int n = 0; n < n_t(); ++n)
    for (int v = 0; v < n_vars; ++v)
      j(n, v) = partials.empty() ? ratios[n].derivative(v).evaluate(vars) : partials[n][v].evaluate(vars);
  return j;
}

CVec RelationSet::residual(const CVec& vars, const CVec& target) const {
  if (target.size() != n_t() + 1) fail(ErrorKind::kStructural, "target needs n_T + 1 coefficients");
  if (std::abs(target(n_t())) == 0.0) fail(ErrorKind::kUsage, "target coefficient c_{n_T} is zero");
  return evaluate(vars) - target.head(n_t()) / target(n_t());
}

RelationSet coefficient_constraints(const std::vector<int>& counts, int cap) {
  const int d = static_cast<int>(counts.size());
  int nt = 0;
  for (int c : counts) {
    if (c < 0) fail(ErrorKind::kStructural, "negative photon count");
    nt += c;
  }
  if (d == 0 || nt == 0) fail(ErrorKind::kUsage, "relations need at least one detected photon");
  if (nt > cap) fail(ErrorKind::kResource, "pattern exceeds the relation cap");

  RelationSet rel;
  rel.counts = counts;
  rel.n_vars = relation_variable_count(d);
  rel.names = variable_names(d);
  rel.ratios.assign(nt, Polynomial(rel.n_vars));

  // c_l / c_{n_T} = n! [u^n] (sum u)^l exp(1/2 u^T F u + mu^T u) / sqrt(l! n_T!).
  // Enumerate the exponents a of every f_ij and b of every mu_i; the rest of
  // u^n comes from the multinomial expansion of (sum u)^l.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) pairs.emplace_back(i, j);
  double nfact = 1.0;
  for (int c : counts) nfact *= factorial(c);

  std::vector<int> used(d, 0);
  Polynomial::Exponents expo(rel.n_vars, 0);
  std::function<void(std::size_t, double)> over_f;
  std::function<void(int, double)> over_mu;

  over_mu = [&](int i, double coef) {
    if (i == d) {
      int l = 0;
      double multinom = 1.0;
      for (int k = 0; k < d; ++k) {
        const int m = counts[k] - used[k];
        l += m;
        multinom /= factorial(m);
      }
      if (l >= nt) return;  // l = n_T is the reference coefficient itself
      multinom *= factorial(l);
      rel.ratios[l].add_term(expo, nfact * coef * multinom / std::sqrt(factorial(l) * factorial(nt)));
      return;
    }
    for (int b = 0; used[i] + b <= counts[i]; ++b) {
      used[i] += b;
      expo[i] = b;
      over_mu(i + 1, coef / factorial(b));
      used[i] -= b;
    }
    expo[i] = 0;
  };

  over_f = [&](std::size_t p, double coef) {
    if (p == pairs.size()) {
      over_mu(0, coef);
      return;
    }
    const auto [i, j] = pairs[p];
    const int var = f_variable(d, i, j);
    for (int a = 0;; ++a) {
      const int need_i = i == j ? 2 * a : a;
      const int need_j = i == j ? 0 : a;
      if (used[i] + need_i > counts[i] || used[j] + need_j > counts[j]) break;
      used[i] += need_i;
      used[j] += need_j;
      expo[var] = a;
      const double w = i == j ? std::pow(0.5, a) / factorial(a) : 1.0 / factorial(a);
      over_f(p + 1, coef * w);
      used[i] -= need_i;
      used[j] -= need_j;
    }
    expo[var] = 0;
  };
  over_f(0, 1.0);
  for (auto& p : rel.ratios) p.prune(1e-15);
  rel.finalize();
  return rel;
}

std::optional<RelationSet> tabulated_constraints(const std::vector<int>& counts) {
  const int d = static_cast<int>(counts.size());
  if (d < 1 || d > 2) return std::nullopt;
  RelationSet rel;
  rel.counts = counts;
  rel.n_vars = relation_variable_count(d);
  rel.names = variable_names(d);
  const int nv = rel.n_vars;
  auto v = [&](int i) { return Polynomial::variable(nv, i); };
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r5 = std::sqrt(5.0), r6 = std::sqrt(6.0);

  if (d == 1) {
    const Polynomial mu = v(0), f = v(1);
    switch (counts[0]) {
      case 1:
        rel.ratios = {mu};
        break;
      case 2:
        rel.ratios = {(mu * mu + f) * (1 / r2), mu * r2};
        break;
      case 3:
        rel.ratios = {mu * (mu * mu + f * 3.0) * (1 / r6), (mu * mu + f) * std::sqrt(1.5), mu * r3};
        break;
      case 4:
        rel.ratios = {(mu * mu * mu * mu + mu * mu * f * 6.0 + f * f * 3.0) * (1 / (2 * r6)),
                      mu * (mu * mu + f * 3.0) * std::sqrt(2.0 / 3.0), (mu * mu + f) * r3, mu * 2.0};
        break;
      default:
        return std::nullopt;
    }
    rel.finalize();
    return rel;
  }

  const Polynomial m2 = v(0), m3 = v(1), f22 = v(2), f23 = v(3), f33 = v(4);
  // Patterns (a, b) and (b, a) are mirror images under 2 <-> 3.
  const bool swap = counts[0] < counts[1];
  const Polynomial& a2 = swap ? m3 : m2;
  const Polynomial& a3 = swap ? m2 : m3;
  const Polynomial& g22 = swap ? f33 : f22;
  const Polynomial& g33 = swap ? f22 : f33;
  const int hi = std::max(counts[0], counts[1]), lo = std::min(counts[0], counts[1]);

  if (lo == 0) {
    const auto one = tabulated_constraints({hi});
    if (!one) return std::nullopt;
    // Re-embed the single-mode table in the two-mode variables.
    for (const auto& p : one->ratios) {
      Polynomial q(nv);
      for (const auto& [e, c] : p.terms()) {
        Polynomial::Exponents x(nv, 0);
        x[swap ? 1 : 0] = e[0];
        x[swap ? 4 : 2] = e[1];
        q.add_term(x, c);
      }
      rel.ratios.push_back(q);
    }
    rel.finalize();
    return rel;
  }
  if (hi == 1 && lo == 1) {
    rel.ratios = {(m2 * m3 + f23) * (1 / r2), (m2 + m3) * (1 / r2)};
  } else if (hi == 2 && lo == 1) {
    rel.ratios = {(a2 * a2 * a3 + a3 * g22 + a2 * f23 * 2.0) * (1 / r6),
                  (a2 * (a2 + a3 * 2.0) + g22 + f23 * 2.0) * (1 / r6), (a2 * 2.0 + a3) * (1 / r3)};
  } else if (hi == 2 && lo == 2) {
    rel.ratios = {
        (m2 * m2 * m3 * m3 + m3 * m3 * f22 + m2 * m3 * f23 * 4.0 + m2 * m2 * f33 + f22 * f33 + f23 * f23 * 2.0) *
            (1 / (2 * r6)),
        (m2 * m2 * m3 + m2 * m3 * m3 + m3 * f22 + (m2 + m3) * f23 * 2.0 + m2 * f33) * (1 / r6),
        (m2 * m2 + m2 * m3 * 4.0 + m3 * m3 + f22 + f23 * 4.0 + f33) * (1 / (2 * r3)), m2 + m3};
  } else if (hi == 3 && lo == 1) {
    rel.ratios = {(a2 * a2 * a2 * a3 + a2 * a3 * g22 * 3.0 + a2 * a2 * f23 * 3.0 + g22 * f23 * 3.0) * (1 / (2 * r6)),
                  (a2 * a2 * a2 + a2 * a2 * a3 * 3.0 + (a2 + a3) * g22 * 3.0 + a2 * f23 * 6.0) * (1 / (2 * r6)),
                  (a2 * a2 + a2 * a3 + g22 + f23) * (r3 / 2), (a2 * 3.0 + a3) * 0.5};
  } else if (hi == 3 && lo == 2) {
    rel.ratios = {
        (a2 * a2 * a2 * a3 * a3 + a2 * a3 * a3 * g22 * 3.0 + a2 * a2 * a2 * g33 + a2 * a2 * a3 * f23 * 6.0 +
         a3 * g22 * f23 * 6.0 + a2 * (g22 * g33 + f23 * f23 * 2.0) * 3.0) *
            (1 / (2 * std::sqrt(30.0))),
        (a2 * a2 * a2 * a3 * 2.0 + a2 * a2 * a3 * a3 * 3.0 + (a2 * a3 * 2.0 + a3 * a3) * g22 * 3.0 +
         a2 * a2 * g33 * 3.0 + (a2 * a2 + a2 * a3 * 2.0) * f23 * 6.0 + g22 * f23 * 6.0 +
         (g22 * g33 + f23 * f23 * 2.0) * 3.0) *
            (1 / (2 * std::sqrt(30.0))),
        (a2 * a2 * a2 + a2 * a2 * a3 * 6.0 + a2 * a3 * a3 * 3.0 + (a2 + a3 * 2.0) * g22 * 3.0 + a2 * g33 * 3.0 +
         (a2 * 2.0 + a3) * f23 * 6.0) *
            (1 / (2 * std::sqrt(15.0))),
        (a2 * a2 * 3.0 + a2 * a3 * 6.0 + a3 * a3 + g22 * 3.0 + g33 + f23 * 6.0) * (1 / (2 * r5)),
        (a2 * 3.0 + a3 * 2.0) * (1 / r5)};
  } else {
    return std::nullopt;
  }
  rel.finalize();
  return rel;
}

CVec relation_variables(const BData& bd) {
  if (!bd.pure) fail(ErrorKind::kUnsupported, "ratio variables are defined for pure states only");
  if (bd.m() != 1) fail(ErrorKind::kUnsupported, "ratio variables need a single heralded mode");
  const int d = bd.d();
  const cplx b11 = bd.b(0, 0);
  const double s = std::sqrt(1.0 - std::norm(b11));
  CVec kappa = bd.b.block(0, 1, 1, d).transpose() / s;
  for (int j = 0; j < d; ++j)
    if (std::abs(kappa(j)) < 1e-14) fail(ErrorKind::kUsage, "a detected mode is disconnected from the heralded mode");
  // Linear coefficient of the single-sided generating function.
  const CVec y = heralded_linear_term(bd);
  CVec vars(relation_variable_count(d));
  for (int j = 0; j < d; ++j) vars(j) = y(j) / kappa(j);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) vars(f_variable(d, i, j)) = std::conj(b11) + bd.b(1 + i, 1 + j) / (kappa(i) * kappa(j));
  return vars;
}

std::pair<CMat, CVec> gate_free_state(const CVec& kappa, const CVec& vars) {
  const int d = static_cast<int>(kappa.size());
  if (vars.size() != relation_variable_count(d)) fail(ErrorKind::kStructural, "wrong number of ratio variables");
  CMat b = CMat::Zero(d + 1, d + 1);
  CVec w = CVec::Zero(d + 1);
  for (int j = 0; j < d; ++j) {
    b(0, 1 + j) = b(1 + j, 0) = kappa(j);
    w(1 + j) = vars(j) * kappa(j);
    for (int i = 0; i <= j; ++i) b(1 + i, 1 + j) = b(1 + j, 1 + i) = vars(f_variable(d, i, j)) * kappa(i) * kappa(j);
  }
  return {b, w};
}

double project_onto_relations(const RelationSet& rel, const CVec& target, CVec& vars, int max_iter) {
  CVec r = rel.residual(vars, target);
  for (int it = 0; it < max_iter && r.norm() > 1e-14; ++it) {
    const CMat j = rel.jacobian(vars);
    // Minimum-norm Newton step.
    const CVec step = j.completeOrthogonalDecomposition().solve(r);
    double t = 1.0;
    for (int back = 0; back < 30; ++back, t *= 0.5) {
      const CVec trial = vars - t * step;
      const CVec rt = rel.residual(trial, target);
      if (rt.norm() < r.norm()) {
        vars = trial;
        r = rt;
        break;
      }
    }
    if (t < 1e-8) break;
  }
  return r.norm();
}

int relation_rank_probe(const RelationSet& rel, std::mt19937_64& rng, int trials) {
  std::normal_distribution<double> g;
  int best = 0;
  for (int t = 0; t < trials; ++t) {
    CVec x(rel.n_vars);
    for (int k = 0; k < rel.n_vars; ++k) x(k) = cplx(g(rng), g(rng));
    Eigen::JacobiSVD<CMat> svd(rel.jacobian(x));
    const auto& s = svd.singularValues();
    int rank = 0;
    for (int k = 0; k < s.size(); ++k)
      if (s(k) > 1e-9 * s(0)) ++rank;
    best = std::max(best, rank);
  }
  return best;
}

}  // namespace hgs

#include "hgs/deriv.hpp"

#include <cstdint>
#include <sstream>
#include <unordered_map>

namespace hgs {

namespace {

using Key = std::uint64_t;

struct Layout {
  std::vector<Key> stride;
  std::vector<int> radix;
};

Layout make_layout(const std::vector<int>& counts) {
  Layout l;
  l.stride.resize(counts.size());
  l.radix.resize(counts.size());
  unsigned __int128 s = 1;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    l.stride[i] = static_cast<Key>(s);
    l.radix[i] = counts[i] + 1;
    s *= static_cast<unsigned>(l.radix[i]);
    if (s > (static_cast<unsigned __int128>(1) << 62))
      fail(ErrorKind::kResource, "derivative order too large for the monomial index space");
  }
  return l;
}

}  // namespace

cplx gaussian_derivative_sequence(const GaussianExponential& g, const std::vector<int>& seq,
                                  int cap, DerivStats* stats) {
  const int dim = static_cast<int>(g.z.size());
  if (g.a.rows() != dim || g.a.cols() != dim)
    fail(ErrorKind::kStructural, "gaussian_derivative: A and z dimensions disagree");
  if (static_cast<int>(seq.size()) > cap) {
    std::ostringstream os;
    os << "derivative order " << seq.size() << " exceeds cap " << cap;
    fail(ErrorKind::kResource, os.str());
  }
  std::vector<int> rem(dim, 0);
  for (int v : seq) {
    if (v < 0 || v >= dim) fail(ErrorKind::kStructural, "derivative variable out of range");
    ++rem[v];
  }
  const Layout lay = make_layout(rem);

  // Sparse columns of A for each variable.
  std::vector<std::vector<std::pair<int, cplx>>> arow(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (g.a(i, j) != cplx(0.0)) arow[i].emplace_back(j, g.a(i, j));

  std::unordered_map<Key, cplx> cur{{0, cplx(1.0)}}, next;
  std::vector<int> e(dim);
  double max_term = 1.0;
  std::size_t max_mono = 1;
  for (int i : seq) {
    --rem[i];
    next.clear();
    next.reserve(cur.size() * (arow[i].size() + 2));
    for (const auto& [key, c] : cur) {
      Key k = key;
      for (int t = 0; t < dim; ++t) {
        e[t] = static_cast<int>(k % static_cast<Key>(lay.radix[t]));
        k /= static_cast<Key>(lay.radix[t]);
      }
      // d/dg_i acting on the monomial.
      if (e[i] > 0 && e[i] - 1 <= rem[i]) next[key - lay.stride[i]] += c * static_cast<double>(e[i]);
      if (e[i] > rem[i]) continue;  // every remaining term keeps e_i or raises it
      if (g.z(i) != cplx(0.0)) next[key] += c * g.z(i);
      for (const auto& [j, aij] : arow[i]) {
        if (e[j] + 1 > rem[j]) continue;
        next[key + lay.stride[j]] += c * aij;
      }
    }
    cur.clear();
    for (const auto& [key, c] : next) {
      const double mag = std::abs(c);
      if (mag < 1e-300) continue;
      if (mag > max_term) max_term = mag;
      cur.emplace(key, c);
    }
    if (cur.size() > max_mono) max_mono = cur.size();
    if (cur.empty()) break;
  }
  if (stats) {
    stats->max_term = std::max(stats->max_term, max_term);
    stats->max_monomials = std::max(stats->max_monomials, max_mono);
  }
  const auto it = cur.find(0);
  return it == cur.end() ? cplx(0.0) : it->second;
}

cplx gaussian_derivative(const GaussianExponential& g, const std::vector<int>& order, int cap,
                         DerivStats* stats) {
  if (order.size() != static_cast<std::size_t>(g.z.size()))
    fail(ErrorKind::kStructural, "derivative order length must equal the number of variables");
  std::vector<int> seq;
  long total = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] < 0) fail(ErrorKind::kStructural, "negative derivative order");
    total += order[i];
    if (total > cap) {
      std::ostringstream os;
      os << "derivative order exceeds cap " << cap;
      fail(ErrorKind::kResource, os.str());
    }
    for (int k = 0; k < order[i]; ++k) seq.push_back(static_cast<int>(i));
  }
  return gaussian_derivative_sequence(g, seq, cap, stats);
}

CMat hermite_2d_table(int m_max, int n_max, cplx u, cplx v) {
  CMat h(m_max + 1, n_max + 1);
  h(0, 0) = 1.0;
  for (int n = 1; n <= n_max; ++n) h(0, n) = h(0, n - 1) * v;
  for (int m = 0; m < m_max; ++m)
    for (int n = 0; n <= n_max; ++n)
      h(m + 1, n) = u * h(m, n) - (n > 0 ? static_cast<double>(n) * h(m, n - 1) : cplx(0.0));
  return h;
}

cplx hermite_2d(int m, int n, cplx u, cplx v) {
  if (m < 0 || n < 0) fail(ErrorKind::kUsage, "hermite_2d: negative index");
  return hermite_2d_table(m, n, u, v)(m, n);
}

}  // namespace hgs

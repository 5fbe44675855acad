#include <gtest/gtest.h>

#include <random>

#include "brute_force.hpp"
#include "hgs/fock.hpp"
#include "hgs/herald.hpp"

using namespace hgs;

namespace {

CMat beam_splitter(double theta) {
  CMat u(2, 2);
  u << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return u;
}

CircuitSpec photon_subtraction(double r0, double theta) {
  CVec z(2);
  z << r0, 0.0;
  return CircuitSpec{2, z, CVec::Zero(2), beam_splitter(theta)};
}

CircuitSpec two_mode_squeezer(double r) {
  CVec z(2);
  z << r, -r;
  return CircuitSpec{2, z, CVec::Zero(2), beam_splitter(M_PI / 4)};
}

double factorial(int n) { return std::tgamma(n + 1.0); }

// Every multi-index in {0..c-1}^m.
std::vector<MultiIndex> box_indices(int m, int c) {
  std::vector<MultiIndex> out;
  MultiIndex l(m, 0);
  while (true) {
    out.push_back(l);
    int k = m - 1;
    while (k >= 0 && ++l[k] == c) l[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

// Compares gate * sum c_l |l> with the brute-force projection of the full
// circuit, over every heralded index the truncated simulator resolves exactly.
// Returns the largest deviation after removing a global phase.
double brute_force_deviation(const CircuitSpec& circ, const std::vector<int>& heralded, const DetectionPattern& pat,
                             int cutoff) {
  const auto st = state_from_circuit(circ);
  const auto hs = herald(st, pat, heralded);
  const oracle::FockSimulator sim(circ, cutoff);
  const int m = static_cast<int>(heralded.size());
  const int nt = pat.total();
  const FockVector mine = apply_gate(hs.gate, FockVector::from_map(hs.coefficients, nt + 1), cutoff);

  std::vector<std::pair<MultiIndex, cplx>> bf;
  for (const auto& l : box_indices(m, cutoff)) {
    int tot = 0;
    for (int x : l) tot += x;
    if (tot > cutoff - 1 - nt) continue;
    std::vector<int> full(circ.n_modes, 0);
    for (int k = 0; k < m; ++k) full[heralded[k]] = l[k];
    for (std::size_t k = 0; k < pat.modes.size(); ++k) full[pat.modes[k]] = pat.counts[k];
    bf.emplace_back(l, sim.amplitude(full) / std::sqrt(hs.probability));
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < bf.size(); ++i)
    if (std::abs(bf[i].second) > std::abs(bf[best].second)) best = i;
  const cplx ph = mine.at(bf[best].first) / bf[best].second;
  EXPECT_NEAR(std::abs(ph), 1.0, 1e-7);
  double dev = 0.0;
  for (const auto& [l, a] : bf) dev = std::max(dev, std::abs(mine.at(l) - ph / std::abs(ph) * a));
  return dev;
}

}  // namespace

TEST(HeraldProbability, VacuumAllZeros) {
  DetectionPattern p{{1, 2}, {0, 0}};
  EXPECT_NEAR(herald_probability(vacuum_state(3), p), 1.0, 1e-14);
}

TEST(HeraldProbability, PhotonSubtractionClosedForm) {
  for (double r0 : {0.3, 0.7, 1.1}) {
    for (double th : {0.2, 0.6, 1.0}) {
      const double kappa = std::tanh(r0) * std::cos(th) * std::cos(th);
      const double want = kappa * kappa * std::tan(th) * std::tan(th) /
                          (std::cosh(r0) * std::pow(1 - kappa * kappa, 1.5));
      const auto st = state_from_circuit(photon_subtraction(r0, th));
      EXPECT_NEAR(herald_probability(st, DetectionPattern{{1}, {1}}), want, 1e-12);
    }
  }
}

TEST(HeraldProbability, TwoModeSqueezedVacuum) {
  for (double r : {0.2, 0.8, 1.5}) {
    const auto st = state_from_circuit(two_mode_squeezer(r));
    for (int n = 0; n <= 8; ++n) {
      const double want = std::pow(std::tanh(r), 2 * n) / std::pow(std::cosh(r), 2);
      EXPECT_NEAR(herald_probability(st, DetectionPattern{{1}, {n}}), want, 1e-12) << r << " " << n;
    }
  }
}

TEST(HeraldProbability, CompletenessForTwoModeStates) {
  std::mt19937_64 rng(31);
  for (int c = 0; c < 10; ++c) {
    const auto st = state_from_circuit(oracle::random_circuit(2, 1.0, 0.3, rng));
    const BData bd = b_data(st, {0});
    double sum = 0.0;
    for (int n = 0; n <= 30; ++n) sum += probability_from_bdata(bd, {n});
    EXPECT_GE(sum, 1.0 - 1e-6);
    EXPECT_LE(sum, 1.0 + 1e-9);
  }
}

TEST(HeraldProbability, MatchesBruteForceProjection) {
  std::mt19937_64 rng(32);
  for (int c = 0; c < 10; ++c) {
    const auto circ = oracle::random_circuit(3, 0.5, 0.4, rng);
    const oracle::FockSimulator sim(circ, 14);
    // Sum over heralded photon numbers; truncation error is far below the tolerance.
    double want = 0.0;
    for (int l = 0; l < 10; ++l) want += std::norm(sim.amplitude({l, 1, 2}));
    EXPECT_NEAR(herald_probability(state_from_circuit(circ), DetectionPattern{{1, 2}, {1, 2}}), want, 1e-6);
  }
}

TEST(HeraldProbability, DetectorOrderIsIrrelevant) {
  std::mt19937_64 rng(33);
  for (int c = 0; c < 10; ++c) {
    auto circ = oracle::random_circuit(3, 0.8, 0.5, rng);
    const auto st = state_from_circuit(circ);
    const double p1 = herald_probability(st, DetectionPattern{{1, 2}, {2, 1}});
    const double p2 = herald_probability(st, DetectionPattern{{2, 1}, {1, 2}});
    EXPECT_NEAR(p1, p2, 1e-12);
    // Physically swapping modes 1 and 2 together with their counts.
    CircuitSpec sw = circ;
    sw.unitary.row(1).swap(sw.unitary.row(2));
    const auto st2 = state_from_circuit(sw);
    EXPECT_NEAR(herald_probability(st2, DetectionPattern{{1, 2}, {1, 2}}), p1, 1e-12);
    const auto h1 = herald(st, DetectionPattern{{1, 2}, {2, 1}});
    const auto h2 = herald(st2, DetectionPattern{{1, 2}, {1, 2}});
    for (const auto& [l, v] : h1.coefficients) EXPECT_NEAR(std::abs(v - h2.coefficients.at(l)), 0.0, 1e-12);
  }
}

TEST(HeraldProbability, MixedStateIsSupported) {
  auto st = state_from_circuit(two_mode_squeezer(0.5));
  st.cov += 0.1 * CMat::Identity(4, 4);
  const double p = herald_probability(st, DetectionPattern{{1}, {1}});
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 1.0);
  try {
    herald(st, DetectionPattern{{1}, {1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupported);
  }
}

TEST(HeraldProbability, PatternMustCoverDetectedModes) {
  const auto st = vacuum_state(3);
  EXPECT_THROW(herald_probability(st, DetectionPattern{{1}, {1}}, {0}), Error);
  EXPECT_THROW(herald_probability(st, DetectionPattern{{1, 2}, {1, -1}}), Error);
}

TEST(ZeroPhoton, VacuumInput) {
  const auto z = zero_photon_gaussian(b_data(vacuum_state(2), {0}));
  EXPECT_LT((z.cov - 0.5 * CMat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(z.mean.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ZeroPhoton, PhotonSubtractionIsSqueezed) {
  const double r0 = 0.6, th = 0.5;
  const double kappa = std::tanh(r0) * std::cos(th) * std::cos(th);
  const double lam = (1 + kappa) / (1 - kappa);
  const auto z = zero_photon_gaussian(b_data(state_from_circuit(photon_subtraction(r0, th)), {0}));
  const auto real = to_real(make_state(z.mean, z.cov));
  // (p, q) ordering: p is the squeezed quadrature for real positive kappa.
  EXPECT_NEAR(real.cov(0, 0).real(), 0.5 / lam, 1e-12);
  EXPECT_NEAR(real.cov(1, 1).real(), 0.5 * lam, 1e-12);
  EXPECT_NEAR(std::abs(real.cov(0, 1)), 0.0, 1e-12);
}

TEST(ZeroPhoton, PureInputsGivePureHeraldedGaussians) {
  std::mt19937_64 rng(34);
  for (int c = 0; c < 30; ++c) {
    const auto circ = oracle::random_circuit(3, 1.0, 1.0, rng);
    const auto z = zero_photon_gaussian(b_data(state_from_circuit(circ), {c % 3}));
    EXPECT_NEAR(z.cov.determinant().real(), 0.25, 1e-9);
  }
  for (int c = 0; c < 10; ++c) {
    const auto z = zero_photon_gaussian(b_data(state_from_circuit(oracle::random_circuit(4, 1.0, 1.0, rng)), {0, 2}));
    EXPECT_NEAR(z.cov.determinant().real(), 1.0 / 16.0, 1e-9);
  }
}

TEST(ZeroPhoton, ZeroPatternMatchesVacuumProjectionOracle) {
  // With no photons detected the output is the Gaussian D(d) S(zeta)|0>.
  std::mt19937_64 rng(35);
  const auto circ = oracle::random_circuit(2, 0.5, 0.5, rng);
  const auto hs = herald(state_from_circuit(circ), DetectionPattern{{1}, {0}});
  ASSERT_EQ(hs.coefficients.size(), 1u);
  EXPECT_NEAR(std::abs(hs.coefficients.at({0}) - 1.0), 0.0, 1e-14);
  EXPECT_LT(brute_force_deviation(circ, {0}, DetectionPattern{{1}, {0}}, 24), 1e-7);
}

TEST(ExtractGate, Trivial) {
  const auto g = extract_gate(b_data(vacuum_state(2), {0}));
  EXPECT_NEAR(std::abs(g.zeta(0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g.d(0)), 0.0, 1e-15);
  CMat b = CMat::Zero(4, 4);
  b(0, 2) = b(2, 0) = 0.3;
  b(1, 3) = b(3, 1) = 0.4;
  const auto gm = extract_gate(b_data_from_pure(b, CVec::Zero(4), {0, 1}));
  EXPECT_LT((gm.k - CMat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(gm.zeta.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ExtractGate, SqueezingFromTableRow) {
  CMat b(2, 2);
  b << std::tanh(0.1796), 0.3, 0.3, 0.1;
  const auto g = extract_gate(b_data_from_pure(b, CVec::Zero(2), {0}));
  EXPECT_NEAR(g.zeta(0).real(), 0.1796, 1e-12);
  EXPECT_NEAR(g.zeta(0).imag(), 0.0, 1e-15);
}

TEST(ExtractGate, ComplexEntryGivesComplexSqueezing) {
  CMat b(2, 2);
  b << std::polar(0.4, 0.7), 0.2, 0.2, 0.1;
  const auto g = extract_gate(b_data_from_pure(b, CVec::Zero(2), {0}));
  EXPECT_NEAR(std::abs(g.zeta(0)), std::atanh(0.4), 1e-12);
  EXPECT_NEAR(std::arg(g.zeta(0)), 0.7, 1e-12);
}

TEST(ExtractGate, MultimodeTakagi) {
  std::mt19937_64 rng(36);
  for (int c = 0; c < 20; ++c) {
    const auto bd = b_data(state_from_circuit(oracle::random_circuit(4, 0.9, 0.5, rng)), {0, 1});
    const auto g = extract_gate(bd);
    CVec t(2);
    for (int j = 0; j < 2; ++j) t(j) = std::tanh(g.zeta(j).real());
    EXPECT_LT((g.k * t.asDiagonal() * g.k.transpose() - bd.b.topLeftCorner(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(FockCoefficients, SqueezedSinglePhoton) {
  const auto hs = herald(state_from_circuit(photon_subtraction(0.7, 0.5)), DetectionPattern{{1}, {1}});
  for (const auto& [l, c] : hs.coefficients) EXPECT_NEAR(std::abs(c), l[0] == 1 ? 1.0 : 0.0, 1e-12);
}

TEST(FockCoefficients, PhotonSubtractionTwoPhotons) {
  const double r0 = 0.7, th = 0.5;
  const double kappa = std::tanh(r0) * std::cos(th) * std::cos(th);
  const auto hs = herald(state_from_circuit(photon_subtraction(r0, th)), DetectionPattern{{1}, {2}});
  const double nrm = std::sqrt(1 + 2 * kappa * kappa);
  EXPECT_NEAR(std::abs(hs.coefficients.at({0}) - 1.0 / nrm), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(hs.coefficients.at({1})), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(hs.coefficients.at({2}) - std::sqrt(2.0) * kappa / nrm), 0.0, 1e-12);
}

TEST(FockCoefficients, WStateProportionalities) {
  // B_hh = 0, w = 0: the heralded state is sum_k b_kN |1_k>.
  const int n = 4;
  CMat b = CMat::Zero(n, n);
  const CVec col = (CVec(3) << cplx(0.3, 0.1), cplx(-0.2, 0.25), cplx(0.1, -0.35)).finished();
  for (int k = 0; k < 3; ++k) b(k, 3) = b(3, k) = col(k);
  b(3, 3) = cplx(0.05, 0.02);
  const auto bd = b_data_from_pure(b, CVec::Zero(n), {0, 1, 2});
  const auto coef = fock_coefficients(bd, {1});
  EXPECT_NEAR(std::abs(coef.at({0, 0, 0})), 0.0, 1e-14);
  const cplx ref = coef.at({1, 0, 0}) / col(0);
  EXPECT_NEAR(std::abs(coef.at({0, 1, 0}) - ref * col(1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(coef.at({0, 0, 1}) - ref * col(2)), 0.0, 1e-12);
  // The gate is trivial here, so the brute-force check applies directly.
  const auto st = state_from_b(b, CVec::Zero(n));
  EXPECT_NEAR(herald_probability(st, DetectionPattern{{3}, {1}}),
              col.squaredNorm() * std::sqrt(std::pow(1 - col.squaredNorm(), 2) - std::norm(b(3, 3))), 1e-12);
}

TEST(FockCoefficients, FourModeTwoByTwoProportionalities) {
  // Heralded modes 1, 2; detected 3, 4 with one photon each; B_hh = 0, w_h = 0.
  CMat b = CMat::Zero(4, 4);
  const cplx b13(0.3, 0.1), b14(-0.2, 0.2), b23(0.15, -0.25), b24(0.1, 0.3), b34(0.05, -0.1);
  b(0, 2) = b(2, 0) = b13;
  b(0, 3) = b(3, 0) = b14;
  b(1, 2) = b(2, 1) = b23;
  b(1, 3) = b(3, 1) = b24;
  b(2, 3) = b(3, 2) = b34;
  CVec w = CVec::Zero(4);
  w(2) = cplx(0.2, -0.1);
  w(3) = cplx(-0.1, 0.15);
  const auto bd = b_data_from_pure(b, w, {0, 1});
  const auto g = extract_gate(bd);
  EXPECT_LT(g.d.cwiseAbs().maxCoeff(), 1e-15);
  const auto coef = fock_coefficients(bd, {1, 1});
  std::map<MultiIndex, cplx> want{
      {{2, 0}, std::sqrt(2.0) * b13 * b14},
      {{0, 2}, std::sqrt(2.0) * b23 * b24},
      {{1, 1}, b13 * b24 + b23 * b14},
      {{1, 0}, b13 * w(3) + w(2) * b14},
      {{0, 1}, b23 * w(3) + w(2) * b24},
      {{0, 0}, b34 + w(2) * w(3)},
  };
  double nrm = 0.0;
  for (const auto& [l, v] : want) nrm += std::norm(v);
  const cplx ph = coef.at({2, 0}) / want.at({2, 0});
  EXPECT_NEAR(std::abs(ph) * std::sqrt(nrm), 1.0, 1e-12);
  for (const auto& [l, v] : want) EXPECT_NEAR(std::abs(coef.at(l) - ph * v), 0.0, 1e-12) << l[0] << l[1];
}

TEST(FockCoefficients, MatchBruteForceSingleMode) {
  std::mt19937_64 rng(37);
  for (int c = 0; c < 8; ++c) {
    const auto circ = oracle::random_circuit(3, 0.5, 0.4, rng);
    EXPECT_LT(brute_force_deviation(circ, {0}, DetectionPattern{{1, 2}, {1, 1}}, 16), 1e-7) << c;
    EXPECT_LT(brute_force_deviation(circ, {1}, DetectionPattern{{0, 2}, {2, 1}}, 16), 1e-7) << c;
  }
}

TEST(FockCoefficients, MatchBruteForceTwoModes) {
  std::mt19937_64 rng(38);
  for (int c = 0; c < 4; ++c) {
    const auto circ = oracle::random_circuit(4, 0.4, 0.3, rng);
    EXPECT_LT(brute_force_deviation(circ, {0, 2}, DetectionPattern{{1, 3}, {1, 1}}, 12), 1e-7) << c;
  }
}

TEST(FockCoefficients, GramAndGeneratingFunctionRoutesAgree) {
  std::mt19937_64 rng(39);
  for (int c = 0; c < 20; ++c) {
    const int n = 3 + c % 2;
    const int m = 1 + c % 2;
    std::vector<int> her(m);
    for (int k = 0; k < m; ++k) her[k] = k;
    const auto bd = b_data(state_from_circuit(oracle::random_circuit(n, 1.0, 0.7, rng)), her);
    std::vector<int> counts(bd.d());
    for (auto& x : counts) x = 1 + static_cast<int>(rng() % 2);
    int nt = 0;
    for (int x : counts) nt += x;
    const auto gram = fock_coefficients(bd, counts);
    CVec fast = heralded_amplitudes(bd, counts);
    const auto idx = multi_indices(m, nt);
    fix_phase_and_normalize(fast, idx);
    ASSERT_EQ(gram.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      EXPECT_NEAR(std::abs(gram.at(idx[i]) - fast(static_cast<Eigen::Index>(i))), 0.0, 1e-9);
  }
}

TEST(FockCoefficients, SupportBoundedByDetectedPhotons) {
  std::mt19937_64 rng(40);
  for (int c = 0; c < 10; ++c) {
    const auto hs = herald(state_from_circuit(oracle::random_circuit(3, 0.8, 0.0, rng)), DetectionPattern{{1, 2}, {2, 1}});
    double top = 0.0, sum = 0.0;
    for (const auto& [l, v] : hs.coefficients) {
      EXPECT_LE(l[0], 3);
      if (l[0] == 3) top = std::abs(v);
      sum += std::norm(v);
    }
    EXPECT_GT(top, 1e-6);
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(FockCoefficients, GlobalPhaseRule) {
  std::mt19937_64 rng(41);
  const auto hs = herald(state_from_circuit(oracle::random_circuit(3, 0.8, 0.5, rng)), DetectionPattern{{1, 2}, {1, 1}});
  const cplx last = hs.coefficients.rbegin()->second;
  EXPECT_GT(last.real(), 0.0);
  EXPECT_NEAR(last.imag(), 0.0, 1e-15);
}

TEST(FockCoefficients, DisconnectedDetectorDoesNotMatter) {
  // Detected mode 2 has no coupling to the heralded mode.
  CMat b = CMat::Zero(3, 3);
  b(0, 0) = 0.2;
  b(0, 1) = b(1, 0) = cplx(0.3, 0.2);
  b(1, 1) = 0.1;
  b(2, 2) = 0.4;
  CVec w = CVec::Zero(3);
  w(0) = 0.1;
  w(2) = cplx(0.15, -0.05);
  const auto bd = b_data_from_pure(b, w, {0});
  const auto ref = fock_coefficients(bd, {1, 0});
  for (int n2 = 1; n2 <= 3; ++n2) {
    const auto c = fock_coefficients(bd, {1, n2});
    for (const auto& [l, v] : ref) EXPECT_NEAR(std::abs(c.at(l) - v), 0.0, 1e-12);
  }
}

TEST(AbsorbUnitary, IdentityLeavesStateUnchanged) {
  std::mt19937_64 rng(42);
  const auto st = state_from_circuit(oracle::random_circuit(3, 0.8, 0.5, rng));
  GaussianUnitary id{CMat::Identity(2, 2), CVec::Zero(2)};
  const auto out = absorb_unitary(st, {0}, {1, 2}, id);
  EXPECT_LT((out.cov - st.cov).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(absorb_unitary(st, {1}, {1, 2}, id), Error);
}

TEST(AbsorbUnitary, ProbabilityInvariantAndGateComposes) {
  std::mt19937_64 rng(43);
  for (int c = 0; c < 10; ++c) {
    const auto st = state_from_circuit(oracle::random_circuit(3, 0.8, 0.5, rng));
    const DetectionPattern pat{{1, 2}, {1, 2}};
    Gate g;
    g.k = CMat::Identity(1, 1);
    g.zeta = CVec::Constant(1, std::polar(0.4, 0.3 * c));
    g.d = CVec::Constant(1, cplx(0.2, -0.1 * c));
    const GaussianUnitary u = gate_unitary(g);
    const auto st2 = absorb_unitary(st, {0}, pat.modes, u);
    EXPECT_NEAR(herald_probability(st2, pat), herald_probability(st, pat), 1e-10);
    // W_new(xi) = W_old(S^{-1}(xi - d)).
    const auto bd1 = b_data(st, {0});
    const auto bd2 = b_data(st2, {0});
    const WignerEvaluator w1(bd1, {1, 2}), w2(bd2, {1, 2});
    const CMat sinv = u.s.inverse();
    for (double q : {-1.0, 0.3}) {
      for (double p : {-0.4, 0.8}) {
        CVec xi(2);
        const cplx a(q, p);
        xi << std::conj(a), a;
        const CVec back = sinv * (xi - u.d);
        EXPECT_NEAR(w2(CVec::Constant(1, a)), w1(back.tail(1)), 1e-9);
      }
    }
  }
}

TEST(AbsorbUnitary, HeraldedSqueezeDoesNotChangeCatProbability) {
  const auto st = state_from_circuit(photon_subtraction(0.8, 0.6));
  const DetectionPattern pat{{1}, {2}};
  const double p = herald_probability(st, pat);
  for (double z : {-0.5, 0.2, 0.9}) {
    const auto st2 = absorb_unitary(st, {0}, {1}, squeezer_unitary(CVec::Constant(1, z)));
    EXPECT_NEAR(herald_probability(st2, pat), p, 1e-10);
  }
}

TEST(Wigner, VacuumIsGaussian) {
  const BData bd = b_data(vacuum_state(2), {0});
  const WignerEvaluator w(bd, {0});
  for (double x : {0.0, 0.5, 1.3}) {
    const cplx a(x, -0.3 * x);
    EXPECT_NEAR(w(CVec::Constant(1, a)), 2.0 / M_PI * std::exp(-2 * std::norm(a)), 1e-14);
  }
}

TEST(Wigner, HeraldedSinglePhotonIsNegativeAtOrigin) {
  for (double r : {0.3, 1.0}) {
    const WignerEvaluator w(b_data(state_from_circuit(two_mode_squeezer(r)), {0}), {1});
    EXPECT_NEAR(w(CVec::Zero(1)), -2.0 / M_PI, 1e-12);
  }
}

TEST(Wigner, GridIntegratesToOne) {
  std::mt19937_64 rng(44);
  for (int c = 0; c < 3; ++c) {
    const auto st = state_from_circuit(oracle::random_circuit(3, 0.5, 0.3, rng));
    const auto grid = wigner(st, DetectionPattern{{1, 2}, {1, c}}, {0}, uniform_axes(1, 5.0, 201));
    EXPECT_NEAR(grid.integral(), 1.0, 1e-3);
  }
}

TEST(Wigner, MixedStateGridIntegratesToOne) {
  auto st = state_from_circuit(two_mode_squeezer(0.5));
  st.cov += 0.2 * CMat::Identity(4, 4);
  const auto grid = wigner(st, DetectionPattern{{1}, {2}}, {0}, uniform_axes(1, 6.0, 241));
  EXPECT_NEAR(grid.integral(), 1.0, 1e-3);
}

TEST(Wigner, AgreesWithFockReconstruction) {
  std::mt19937_64 rng(45);
  for (int c = 0; c < 4; ++c) {
    const auto st = state_from_circuit(oracle::random_circuit(3, 0.7, 0.6, rng));
    const DetectionPattern pat{{1, 2}, {1 + c % 2, 1}};
    const auto axes = uniform_axes(1, 3.0, 41);
    const auto direct = wigner(st, pat, {0}, axes);
    const auto hs = herald(st, pat);
    const auto fock = wigner_of_fock_superposition(FockVector::from_map(hs.coefficients, pat.total() + 1), hs.gate, axes);
    double dev = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i) dev = std::max(dev, std::abs(direct.values[i] - fock.values[i]));
    EXPECT_LT(dev, 1e-6);
  }
}

TEST(Wigner, TwoModeAgreesWithFockReconstruction) {
  std::mt19937_64 rng(46);
  const auto st = state_from_circuit(oracle::random_circuit(4, 0.6, 0.4, rng));
  const DetectionPattern pat{{2, 3}, {1, 1}};
  const auto axes = uniform_axes(2, 2.0, 5);
  const auto direct = wigner(st, pat, {0, 1}, axes);
  const auto hs = herald(st, pat);
  const auto fock = wigner_of_fock_superposition(FockVector::from_map(hs.coefficients, 3), hs.gate, axes);
  double dev = 0.0;
  for (std::size_t i = 0; i < direct.size(); ++i) dev = std::max(dev, std::abs(direct.values[i] - fock.values[i]));
  EXPECT_LT(dev, 1e-6);
}

TEST(Wigner, RejectsWrongAxisCount) {
  EXPECT_THROW(wigner(vacuum_state(2), DetectionPattern{{1}, {0}}, {0}, uniform_axes(2, 1.0, 3)), Error);
}

#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "qbc/analysis.hpp"

using namespace qbc;

namespace {

Circuit layer(int n, double theta = 0.3) {
  Circuit c;
  for (int q = 1; q <= n; ++q) c.push_back(GateOp::single(q, theta * q));
  return c;
}

std::vector<int> row_of(const DependenceMatrix& m, int row) {
  std::vector<int> out;
  for (int j = 1; j <= m.size(); ++j) {
    if (m(row, j)) out.push_back(j);
  }
  return out;
}

DependenceMatrix parity_matrix(std::span<const GateOp> circuit, int n) {
  const auto rows = oracle::parity_supports(circuit, n);
  DependenceMatrix m(n);
  for (int t = 1; t <= n; ++t) {
    for (int j = 1; j <= n; ++j) m.set(t, j, rows[t - 1][j - 1]);
  }
  return m;
}

}  // namespace

TEST_CASE("symbolic snowball through step 2") {
  Circuit c = layer(4);
  for (int i = 1; i < 4; ++i) c.push_back(GateOp::cnot(i, i + 1));
  const DependenceMatrix m = symbolic_dependences(c, 4);
  CHECK(row_of(m, 1) == std::vector<int>{1});
  CHECK(row_of(m, 2) == std::vector<int>{1, 2});
  CHECK(row_of(m, 3) == std::vector<int>{1, 2, 3});
  CHECK(row_of(m, 4) == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("step 2 order matters symbolically") {
  Circuit c = layer(3);
  c.push_back(GateOp::cnot(2, 3));
  c.push_back(GateOp::cnot(1, 2));
  CHECK(row_of(symbolic_dependences(c, 3), 3) == std::vector<int>{2, 3});
}

TEST_CASE("symbolic propagation is monotone") {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(uniform_below(rng, 5));
    Circuit c = layer(n);
    DependenceMatrix previous = symbolic_dependences(c, n);
    for (int g = 0; g < 3 * n; ++g) {
      const int ctl = 1 + static_cast<int>(uniform_below(rng, n));
      int tgt = 1 + static_cast<int>(uniform_below(rng, n - 1));
      if (tgt >= ctl) ++tgt;
      c.push_back(GateOp::cnot(ctl, tgt));
      const DependenceMatrix next = symbolic_dependences(c, n);
      CHECK(previous.is_subset_of(next));
      previous = next;
    }
  }
}

TEST_CASE("confusion: rows exceed n/2 after step 3 and after the full circuit") {
  Rng rng(2);
  for (int n = 2; n <= 16; n += 2) {
    for (int trial = 0; trial < 10; ++trial) {
      const CipherKey key = generate_key(n, 64, rng);
      const ConfusionReport after3 = confusion_check(key, Ablation::ThroughStep3);
      CHECK(after3.pass);
      const ConfusionReport full = confusion_check(key);
      CHECK(full.pass);
      for (int c : full.col_counts) CHECK(2 * c > n);  // symbolic diffusion bound
    }
  }
}

TEST_CASE("confusion ablations") {
  Rng rng(3);
  const CipherKey key = generate_key(8, 256, rng);
  const ConfusionReport full = confusion_check(key);
  CHECK(full.pass);
  for (int c : full.row_counts) CHECK(c >= 5);

  const ConfusionReport step1 = confusion_check(key, Ablation::Step1Only);
  CHECK_FALSE(step1.pass);
  for (int c : step1.row_counts) CHECK(c == 1);

  const ConfusionReport step12 = confusion_check(key, Ablation::ThroughStep2);
  CHECK_FALSE(step12.pass);
  for (int m = 1; m <= 8; ++m) CHECK((2 * step12.row_counts[m - 1] > 8) == (m > 4));
}

TEST_CASE("symbolic confusion and diffusion hold for every pairing and order at n=8 and odd n") {
  for (int n : {7, 8, 9}) {
    const int h = n / 2;
    std::vector<int> targets(h), sigma(h);
    std::iota(targets.begin(), targets.end(), 1);
    do {
      std::vector<StepPair> pairs;
      for (int i = 0; i < h; ++i) pairs.push_back({n - h + 1 + i, targets[i]});
      std::iota(sigma.begin(), sigma.end(), 1);
      do {
        const CipherKey key(n, 16, std::vector<int>(n, 1), pairs, sigma);
        const ConfusionReport r = confusion_check(key);
        CHECK(r.pass);
        for (int c : r.col_counts) CHECK(2 * c > n);
      } while (std::next_permutation(sigma.begin(), sigma.end()));
    } while (std::next_permutation(targets.begin(), targets.end()));
  }
}

TEST_CASE("numeric dependences of the rotation layer alone are diagonal") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const CipherKey key = generate_key(8, 256, rng);
    const PlainBlock p{Bitstring(8, static_cast<std::uint32_t>(uniform_below(rng, 256)))};
    const DependenceMatrix m = numeric_dependence_matrix(key, p, {1e-6, 8}, Ablation::Step1Only);
    for (int r = 1; r <= 8; ++r) {
      for (int c = 1; c <= 8; ++c) CHECK(m(r, c) == (r == c));
    }
  }
}

TEST_CASE("numeric dependences are the parity supports, a subset of the symbolic sets") {
  Rng rng(5);
  int exact = 0;
  constexpr int kKeys = 30;
  for (int trial = 0; trial < kKeys; ++trial) {
    const CipherKey key = generate_key(8, 256, rng);
    const PlainBlock p{Bitstring(8, static_cast<std::uint32_t>(uniform_below(rng, 256)))};
    const Circuit circuit = key_circuit(key);
    const DependenceMatrix numeric = numeric_dependence_matrix(key, p);
    CHECK(numeric.is_subset_of(symbolic_dependences(circuit, 8)));
    const DependenceMatrix parity = parity_matrix(circuit, 8);
    CHECK(numeric.is_subset_of(parity));
    exact += numeric == parity;
  }
  // Tiny products of cos(2 theta) can sink below epsilon, nothing else.
  CHECK(exact >= kKeys * 9 / 10);
}

TEST_CASE("numeric marginals equal the parity closed form") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const CipherKey key = generate_key(7, 128, rng);
    const Bitstring p(7, static_cast<std::uint32_t>(uniform_below(rng, 128)));
    std::vector<double> thetas;
    for (int q = 1; q <= 7; ++q) thetas.push_back(key.theta(q));
    const Circuit circuit = key_circuit(key);
    const Circuit cnots(circuit.begin() + 7, circuit.end());
    const std::vector<double> expected = oracle::parity_marginals(thetas, cnots, p);
    const Eigen::VectorXd got = marginals_p0(encrypt_block(key, {p}).state);
    for (int q = 0; q < 7; ++q) CHECK(std::abs(got[q] - expected[q]) < 1e-12);
  }
}

TEST_CASE("diffusion profile") {
  Rng rng(7);
  const CipherKey key = generate_key(8, 256, rng);
  const PlainBlock p{Bitstring::parse("01101001")};

  const DiffusionProfile step1 = diffusion_profile(key, p, 1e-6, Ablation::Step1Only);
  CHECK_FALSE(step1.pass);
  for (int c : step1.counts) CHECK(c == 1);

  for (int trial = 0; trial < 30; ++trial) {
    const CipherKey k = generate_key(8, 256, rng);
    const DiffusionProfile d = diffusion_profile(k, p);
    const std::vector<int> bound = symbolic_dependences(key_circuit(k), 8).col_counts();
    const std::vector<int> parity = parity_matrix(key_circuit(k), 8).col_counts();
    for (int j = 0; j < 8; ++j) {
      CHECK(d.counts[j] <= bound[j]);
      CHECK(d.counts[j] <= parity[j]);
    }
  }
  CHECK_THROWS_AS(diffusion_profile(key, p, 0.0), InputError);
}

TEST_CASE("dependence propagation on explicit circuits") {
  const AlternativeAngles offsets = [](int, double theta) {
    std::vector<double> out;
    for (int k = 1; k <= 8; ++k) out.push_back(theta + 2 * std::numbers::pi * k / 9);
    return out;
  };
  const Circuit two = {GateOp::single(1, 0.5), GateOp::single(2, 1.2), GateOp::cnot(1, 2)};
  const DependenceMatrix m = numeric_dependences(two, 2, Bitstring::parse("00"), offsets, 1e-6);
  CHECK(m(2, 1));  // q2 gains U1
  CHECK(m(1, 1));  // control retains
  CHECK_FALSE(m(1, 2));

  const Circuit three = {GateOp::single(1, 0.5), GateOp::single(2, 1.2), GateOp::single(3, 2.0),
                         GateOp::cnot(1, 2), GateOp::cnot(2, 3)};
  const DependenceMatrix m3 = numeric_dependences(three, 3, Bitstring::parse("000"), offsets, 1e-6);
  CHECK(row_of(m3, 3) == std::vector<int>{1, 2, 3});

  // Undoing a CNOT cancels the transferred dependence: union semantics over-approximate.
  Circuit twice = two;
  twice.push_back(GateOp::cnot(1, 2));
  const DependenceMatrix undone = numeric_dependences(twice, 2, Bitstring::parse("00"), offsets, 1e-6);
  CHECK_FALSE(undone(2, 1));
  CHECK(symbolic_dependences(twice, 2)(2, 1));
}

TEST_CASE("verify_theorem1 finds no violations and reports cancellations") {
  Rng rng(8);
  int cancellations = 0;
  for (int n = 2; n <= 6; ++n) {
    const Theorem1Report r = verify_theorem1(n, 30, rng);
    CHECK(r.pass());
    CHECK(r.counterexamples.empty());
    CHECK(r.transfer_checks > 0);
    CHECK(r.retention_checks > 0);
    CHECK(r.locality_checks >= 30 * n);
    cancellations += r.shared_cancellations;
  }
  CHECK(cancellations > 0);
  CHECK_THROWS_AS(verify_theorem1(7, 1, rng), InputError);
  CHECK_THROWS_AS(verify_theorem1(1, 1, rng), InputError);
}

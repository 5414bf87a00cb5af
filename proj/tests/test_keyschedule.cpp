#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qbc/cipher.hpp"
#include "qbc/keyschedule.hpp"

using namespace qbc;

namespace {

std::vector<std::pair<int, int>> edges(const Circuit& c) {
  std::vector<std::pair<int, int>> out;
  for (const GateOp& g : c) out.emplace_back(g.control(), g.target);
  return out;
}

CipherKey key8_identity_sigma() {
  return CipherKey(8, 256, {1, 2, 3, 4, 5, 6, 7, 9}, {{5, 1}, {6, 2}, {7, 3}, {8, 4}}, {1, 2, 3, 4});
}

}  // namespace

TEST_CASE("step 4 zigzag for n=8 with identity upstream order") {
  const KeySteps steps = key_steps(key8_identity_sigma());
  const std::vector<std::pair<int, int>> expected = {{8, 1}, {1, 7}, {7, 2}, {2, 6},
                                                     {6, 3}, {3, 5}, {5, 4}, {4, 5}};
  CHECK(edges(steps.step4) == expected);
  CHECK(steps.step1.size() == 8);
  CHECK(steps.step2.size() == 7);
  CHECK(steps.step3.size() == 4);
  CHECK(steps.step4.size() == 8);
  CHECK(key_circuit(key8_identity_sigma()).size() == 27);
}

TEST_CASE("n=2 chain instantiation") {
  Rng rng(17);
  const CipherKey key = generate_key(2, 4, rng);
  CHECK(key.step3_pairs() == std::vector<StepPair>{{2, 1}});
  const KeySteps steps = key_steps(key);
  CHECK(edges(steps.step2) == std::vector<std::pair<int, int>>{{1, 2}});
  CHECK(edges(steps.step3) == std::vector<std::pair<int, int>>{{2, 1}});
  CHECK(edges(steps.step4) == std::vector<std::pair<int, int>>{{2, 1}, {1, 2}});
}

TEST_CASE("generated n=8 key has 8 rotations and 19 CNOTs") {
  Rng rng(42);
  const CipherKey key = generate_key(8, 256, rng);
  const Circuit c = key_circuit(key);
  CHECK(std::count_if(c.begin(), c.end(), [](const GateOp& g) { return !g.is_cnot(); }) == 8);
  CHECK(std::count_if(c.begin(), c.end(), [](const GateOp& g) { return g.is_cnot(); }) == 19);
}

TEST_CASE("generate_key is deterministic, guarded and validates input") {
  Rng a(5), b(5);
  CHECK(generate_key(10, 64, a) == generate_key(10, 64, b));
  CHECK_THROWS_AS(generate_key(1, 16, a), InputError);
  CHECK_THROWS_AS(generate_key(4, 1, a), InputError);

  Rng rng(123);
  for (int i = 0; i < 200; ++i) {
    const CipherKey k = generate_key(8, 256, rng);
    for (int q = 1; q <= 8; ++q) CHECK_FALSE(is_degenerate_angle(k.theta(q)));
  }
  // No admissible angle on a 4-point grid; the guard steps aside.
  CHECK_NOTHROW(generate_key(3, 4, rng));
}

TEST_CASE("structural invariants over random keys, even and odd n") {
  Rng rng(9);
  for (int n = 2; n <= 13; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const CipherKey key = generate_key(n, 32, rng);
      const KeySteps steps = key_steps(key);
      const int h = n / 2;
      CHECK(static_cast<int>(steps.step1.size()) == n);
      CHECK(static_cast<int>(steps.step2.size()) == n - 1);
      CHECK(static_cast<int>(steps.step3.size()) == h);
      CHECK(static_cast<int>(steps.step4.size()) == (n % 2 == 0 ? n : n - 1));
      for (std::size_t i = 1; i < steps.step2.size(); ++i) {
        CHECK(steps.step2[i].control() > steps.step2[i - 1].control());
      }
      std::set<int> ups;
      for (const StepPair& p : key.step3_pairs()) {
        CHECK(p.downstream > n - h);
        CHECK(p.upstream <= h);
        ups.insert(p.upstream);
      }
      CHECK(static_cast<int>(ups.size()) == h);
      for (const GateOp& g : key_circuit(key)) {
        CHECK(g.qubit >= 1);
        CHECK(g.qubit <= n);
        if (g.is_cnot()) CHECK(g.control() != g.target);
      }
      const GateCounts counts = gate_count(key);
      CHECK(counts.total() <= 4 * n);
    }
  }
}

TEST_CASE("odd n leaves the middle qubit unpaired and starts step 4 with it") {
  const CipherKey key(5, 16, {1, 2, 3, 5, 6}, {{4, 2}, {5, 1}}, {2, 1});
  const KeySteps steps = key_steps(key);
  CHECK(edges(steps.step3) == std::vector<std::pair<int, int>>{{4, 2}, {5, 1}});
  CHECK(edges(steps.step4) == std::vector<std::pair<int, int>>{{3, 2}, {2, 5}, {5, 1}, {1, 4}});
}

TEST_CASE("key constructor rejects broken structure") {
  CHECK_THROWS_AS(CipherKey(4, 16, {1, 2, 3}, {{3, 1}, {4, 2}}, {1, 2}), KeyError);
  CHECK_THROWS_AS(CipherKey(4, 16, {1, 2, 3, 16}, {{3, 1}, {4, 2}}, {1, 2}), KeyError);
  CHECK_THROWS_AS(CipherKey(4, 16, {1, 2, 3, 4}, {{3, 1}, {4, 1}}, {1, 2}), KeyError);
  CHECK_THROWS_AS(CipherKey(4, 16, {1, 2, 3, 4}, {{2, 1}, {4, 2}}, {1, 2}), KeyError);
  CHECK_THROWS_AS(CipherKey(4, 16, {1, 2, 3, 4}, {{3, 1}, {4, 2}}, {1, 1}), KeyError);
  CHECK_THROWS_AS(CipherKey(4, 16, {1, 2, 3, 4}, {{3, 1}, {4, 2}}, {1, 2}, std::vector<int>{1, 2, 2, 4}),
                  KeyError);
  CHECK_THROWS_AS(CipherKey(5, 16, {1, 2, 3, 4, 5}, {{3, 1}, {4, 2}}, {1, 2}), KeyError);
  CHECK_THROWS_AS(CipherKey(4, 16, {1, 2, 3, 4}, {{3, 1}, {4, 2}}, {1, 2}, std::nullopt, Bitstring::parse("101")),
                  KeyError);
}

TEST_CASE("inverse circuit reverses the gate list") {
  const Circuit small = {GateOp::single(1, 0.5), GateOp::cnot(1, 2)};
  CHECK(inverse(small) == Circuit{GateOp::cnot(1, 2), GateOp::single(1, 0.5)});
  Rng rng(4);
  const CipherKey key = generate_key(6, 64, rng);
  CHECK(inverse(inverse_circuit(key)) == key_circuit(key));
}

TEST_CASE("circuit then inverse is the identity on random states") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const CipherKey key = generate_key(6, 128, rng);
    StateVector::Amplitudes amps(64);
    for (auto& a : amps) a = {uniform01(rng) - 0.5, uniform01(rng) - 0.5};
    const StateVector s(6, amps / amps.norm());
    const StateVector back = apply_circuit(apply_circuit(s, key_circuit(key)), inverse_circuit(key));
    CHECK(std::abs(fidelity(back, s) - 1) < 1e-9);
  }
}

TEST_CASE("keyspace size is exact") {
  CHECK(keyspace_size(4, 16).count == 262144);
  CHECK(keyspace_size(4, 16).log2 == doctest::Approx(18.0));
  const BigInt expected = (BigInt(1) << 64) * 576;
  CHECK(keyspace_size(8, 256).count == expected);
  CHECK(keyspace_size(8, 256).log2 == doctest::Approx(64 + std::log2(576.0)));
  CHECK(std::abs(keyspace_size(8, 256).log2 - 73.17) < 0.005);
  CHECK(keyspace_size(2, 2).count == 4);
  CHECK(keyspace_size(3, 4).count == 64);
  for (int n = 2; n <= 24; n += 2) {
    BigInt lower = boost::multiprecision::pow(BigInt(16), static_cast<unsigned>(n));
    for (int i = 2; i <= n / 2; ++i) lower *= i;
    CHECK(keyspace_size(n, 16).count >= lower);
  }
}

TEST_CASE("for_each_key enumerates the keyspace exactly once") {
  for (auto [n, grid] : {std::pair{2, 2}, std::pair{2, 4}, std::pair{3, 4}, std::pair{4, 3}, std::pair{5, 2}}) {
    std::set<std::string> seen;
    long count = 0;
    for_each_key(n, grid, [&](const CipherKey& k) {
      ++count;
      std::string id;
      for (int t : k.theta_indices()) id += std::to_string(t) + ",";
      for (const StepPair& p : k.step3_pairs()) id += std::to_string(p.upstream) + ";";
      for (int s : k.step4_upstream_order()) id += std::to_string(s) + ".";
      seen.insert(id);
    });
    CHECK(BigInt(count) == keyspace_size(n, grid).count);
    CHECK(static_cast<long>(seen.size()) == count);
  }
}

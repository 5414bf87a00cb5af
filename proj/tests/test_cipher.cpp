#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qbc/cipher.hpp"

using namespace qbc;

TEST_CASE("encode_plaintext") {
  CHECK(std::abs(encode_plaintext(Bitstring::parse("00101"))[5]) == 1.0);
  CHECK(std::abs(encode_plaintext(Bitstring::parse("0000"))[0]) == 1.0);
  CHECK(std::abs(encode_plaintext(Bitstring::parse("1"))[1]) == 1.0);
  CHECK_THROWS_AS(encode_plaintext(Bitstring()), InputError);
}

TEST_CASE("all-zero angles give a signed basis state at the CNOT image of the plaintext") {
  const CipherKey key(6, 16, {0, 0, 0, 0, 0, 0}, {{4, 2}, {5, 3}, {6, 1}}, {3, 1, 2});
  const Bitstring plain = Bitstring::parse("101100");
  const CipherBlock c = encrypt_block(key, {plain});
  const auto rows = oracle::parity_supports(key_circuit(key), 6);
  std::uint32_t image = 0;
  for (int t = 0; t < 6; ++t) {
    bool bit = false;
    for (int j = 0; j < 6; ++j) bit = bit != (rows[t][j] && plain.bit(j + 1));
    image = (image << 1) | bit;
  }
  CHECK(std::abs(std::abs(c.state[image]) - 1) < 1e-12);
  for (int q = 1; q <= 6; ++q) {
    CHECK(marginal_p0(c.state, q) == doctest::Approx(((image >> (6 - q)) & 1) ? 0.0 : 1.0));
  }
}

TEST_CASE("n=2 at theta=(pi/4, pi/4) matches a dense matrix product") {
  const CipherKey key(2, 8, {1, 1}, {{2, 1}}, {1});
  CHECK(key.theta(1) == doctest::Approx(std::numbers::pi / 4));
  const CipherBlock c = encrypt_block(key, {Bitstring::parse("00")});
  const Eigen::VectorXd expected = oracle::circuit_matrix(key_circuit(key), 2) * Eigen::Vector4d(1, 0, 0, 0);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(c.state[i] - expected[i]) < 1e-12);
}

TEST_CASE("encryption agrees with the dense oracle on random keys") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 4));
    const CipherKey key = generate_key(n, 64, rng);
    const Bitstring p(n, static_cast<std::uint32_t>(uniform_below(rng, 1ull << n)));
    const CipherBlock c = encrypt_block(key, {p});
    Eigen::VectorXd in = Eigen::VectorXd::Zero(1 << n);
    in[p.index()] = 1;
    const Eigen::VectorXd expected = oracle::circuit_matrix(key_circuit(key), n) * in;
    CHECK((c.state.amplitudes() - expected.cast<std::complex<double>>()).norm() < 1e-12);
    CHECK(std::abs(c.state.amplitudes().squaredNorm() - 1) < 1e-9);
  }
}

TEST_CASE("round trip is exhaustive at n <= 4 with N = 4") {
  Rng rng(77);
  for (int n = 2; n <= 4; ++n) {
    for (int k = 0; k < 20; ++k) {
      const CipherKey key = generate_key(n, 4, rng);
      for (std::uint32_t b = 0; b < (1u << n); ++b) {
        const PlainBlock p{Bitstring(n, b)};
        CHECK(decrypt_block(key, encrypt_block(key, p)) == p);
      }
    }
  }
}

TEST_CASE("round trip on random n=8 keys and plaintexts") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const CipherKey key = generate_key(8, 256, rng);
    const PlainBlock p{Bitstring(8, static_cast<std::uint32_t>(uniform_below(rng, 256)))};
    CHECK(decrypt_block(key, encrypt_block(key, p)) == p);
  }
}

TEST_CASE("distinct plaintexts encrypt to orthogonal states") {
  Rng rng(12);
  const CipherKey key = generate_key(5, 64, rng);
  for (std::uint32_t a = 0; a < 32; ++a) {
    for (std::uint32_t b = a + 1; b < 32; b += 5) {
      CHECK(fidelity(encrypt_block(key, {Bitstring(5, a)}).state,
                     encrypt_block(key, {Bitstring(5, b)}).state) < 1e-9);
    }
  }
}

TEST_CASE("guarded ciphertext marginals stay away from 0 and 1") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const CipherKey key = generate_key(8, 256, rng);
    const PlainBlock p{Bitstring(8, static_cast<std::uint32_t>(uniform_below(rng, 256)))};
    const Eigen::VectorXd m = marginals_p0(encrypt_block(key, p).state);
    CHECK(m.minCoeff() > 1e-4);
    CHECK(m.maxCoeff() < 1 - 1e-4);
  }
}

TEST_CASE("wrong key never decrypts silently") {
  Rng rng(14);
  int integrity = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const CipherKey key = generate_key(8, 256, rng);
    const PlainBlock p{Bitstring(8, static_cast<std::uint32_t>(uniform_below(rng, 256)))};
    std::vector<int> theta = key.theta_indices();
    const auto q = static_cast<std::size_t>(uniform_below(rng, 8));
    theta[q] = (theta[q] + 1 + static_cast<int>(uniform_below(rng, 254))) % 256;
    const CipherKey wrong = key.with_theta_indices(theta);
    const StateVector undone = apply_circuit(encrypt_block(key, p).state, inverse_circuit(wrong));
    try {
      const PlainBlock out = decrypt_block(wrong, encrypt_block(key, p));
      // Only reachable when the residual really is a basis state.
      CHECK(undone.amplitudes().cwiseAbs2().maxCoeff() >= 1 - kPurityTolerance);
      CHECK(out == p);
    } catch (const IntegrityError&) {
      ++integrity;
    }
  }
  CHECK(integrity > 0);
}

TEST_CASE("an intercepted ciphertext fails the purity check") {
  Rng rng(15);
  const CipherKey key = generate_key(8, 256, rng);
  const CipherBlock c = encrypt_block(key, {Bitstring::parse("10110001")});
  for (int i = 0; i < 20; ++i) {
    CipherBlock forwarded{measure_all(c.state, rng).collapsed, 0, "single"};
    CHECK_THROWS_AS(decrypt_block(key, forwarded), IntegrityError);
  }
}

TEST_CASE("gate counts per step") {
  Rng rng(16);
  CHECK(gate_count(generate_key(8, 256, rng)) == GateCounts{8, 7, 4, 8});
  CHECK(gate_count(generate_key(2, 16, rng)) == GateCounts{2, 1, 1, 2});
  for (int n = 2; n <= 24; ++n) CHECK(gate_count(generate_key(n, 16, rng)).total() <= 4 * n);
}

TEST_CASE("length mismatches are input errors") {
  Rng rng(18);
  const CipherKey key = generate_key(4, 16, rng);
  CHECK_THROWS_AS(encrypt_block(key, {Bitstring::parse("101")}), InputError);
  CHECK_THROWS_AS(decrypt_block(key, {basis_state(3, Bitstring::parse("000")), 0, "single"}), InputError);
}

TEST_CASE("split_trailing_basis reads the tail and keeps the head") {
  const StateVector head = apply_single(basis_state(2, Bitstring::parse("01")), 1, 0.3);
  const StateVector joint = tensor(head, basis_state(3, Bitstring::parse("110")));
  auto [rest, bits] = split_trailing_basis(joint, 3);
  CHECK(bits.to_string() == "110");
  CHECK(std::abs(fidelity(rest, head) - 1) < 1e-12);
  const StateVector mixed = apply_single(joint, 5, 0.3);
  CHECK_THROWS_AS(split_trailing_basis(mixed, 3), IntegrityError);
}

#include "qbc/cipher.hpp"

#include <string>

#include "qbc/errors.hpp"

namespace qbc {

StateVector encode_plaintext(const Bitstring& bits) {
  if (bits.size() == 0) throw InputError("empty plaintext");
  return basis_state(bits.size(), bits);
}

CipherBlock encrypt_block(const CipherKey& key, const PlainBlock& plain, std::size_t block_index,
                          std::string mode) {
  if (plain.bits.size() != key.qubits()) {
    throw InputError("plaintext block of " + std::to_string(plain.bits.size()) +
                     " bits for a key with n=" + std::to_string(key.qubits()));
  }
  const Circuit circuit = key_circuit(key);
  return {apply_circuit(encode_plaintext(plain.bits), circuit), block_index, std::move(mode)};
}

PlainBlock decrypt_block(const CipherKey& key, const CipherBlock& block) {
  if (block.state.qubits() != key.qubits()) {
    throw InputError("ciphertext of " + std::to_string(block.state.qubits()) +
                     " qubits for a key with n=" + std::to_string(key.qubits()));
  }
  const Circuit circuit = inverse_circuit(key);
  return {read_basis_state(apply_circuit(block.state, circuit))};
}

Bitstring read_basis_state(const StateVector& s) {
  Eigen::Index best = 0;
  double weight = -1;
  for (Eigen::Index i = 0; i < s.dimension(); ++i) {
    const double w = std::norm(s[i]);
    if (w > weight) {
      weight = w;
      best = i;
    }
  }
  if (weight < 1 - kPurityTolerance) {
    throw IntegrityError("register is not a basis state: largest basis weight " +
                         std::to_string(weight));
  }
  return Bitstring(s.qubits(), static_cast<std::uint32_t>(best));
}

std::pair<StateVector, Bitstring> split_trailing_basis(const StateVector& s, int width) {
  const int lead = s.qubits() - width;
  if (width < 1 || lead < 1) {
    throw InputError("cannot split " + std::to_string(width) + " trailing qubits off a " +
                     std::to_string(s.qubits()) + "-qubit register");
  }
  const Eigen::Index tail = Eigen::Index{1} << width;
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(tail);
  for (Eigen::Index i = 0; i < s.dimension(); ++i) weights[i % tail] += std::norm(s[i]);
  Eigen::Index best = 0;
  const double weight = weights.maxCoeff(&best);
  if (weight < 1 - kPurityTolerance) {
    throw IntegrityError("trailing block is not a basis state: largest basis weight " +
                         std::to_string(weight));
  }
  StateVector::Amplitudes rest(Eigen::Index{1} << lead);
  for (Eigen::Index i = 0; i < rest.size(); ++i) rest[i] = s[i * tail + best];
  rest /= std::sqrt(rest.squaredNorm());
  return {StateVector(lead, std::move(rest)), Bitstring(width, static_cast<std::uint32_t>(best))};
}

GateCounts gate_count(const CipherKey& key) {
  const KeySteps steps = key_steps(key);
  return {static_cast<int>(steps.step1.size()), static_cast<int>(steps.step2.size()),
          static_cast<int>(steps.step3.size()), static_cast<int>(steps.step4.size())};
}

}  // namespace qbc

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>

#include "qbc/bitstring.hpp"
#include "qbc/keyschedule.hpp"
#include "qbc/statevector.hpp"

namespace qbc {

/// Purity threshold for reading a register back as a basis state.
inline constexpr double kPurityTolerance = 1e-9;

struct PlainBlock {
  Bitstring bits;
  friend bool operator==(const PlainBlock&, const PlainBlock&) = default;
};

struct CipherBlock {
  StateVector state;
  std::size_t block_index = 0;
  std::string mode = "single";
};

/// Runs a circuit on the qubits offset+1 .. offset+k of a larger register.
template <typename Scalar>
BasicStateVector<Scalar> apply_circuit(BasicStateVector<Scalar> s, std::span<const GateOp> circuit,
                                       int offset = 0) {
  for (const GateOp& g : circuit) {
    if (g.is_cnot()) {
      s = apply_cnot(std::move(s), g.control() + offset, g.target + offset);
    } else {
      s = apply_single(std::move(s), g.qubit + offset, static_cast<Scalar>(g.theta));
    }
  }
  return s;
}

/// Pauli-X preparation of |bits> from |0...0>.
StateVector encode_plaintext(const Bitstring& bits);

CipherBlock encrypt_block(const CipherKey& key, const PlainBlock& plain, std::size_t block_index = 0,
                          std::string mode = "single");

/// Inverts the key circuit and reads the result with read_basis_state.
PlainBlock decrypt_block(const CipherKey& key, const CipherBlock& block);

/// Argmax bit pattern of a register that must be a basis state up to global
/// phase. Throws IntegrityError when the weight of the argmax is below
/// 1 - kPurityTolerance.
Bitstring read_basis_state(const StateVector& s);

/// Reads the trailing `width` qubits of a register whose tail is a basis
/// state, returning the remaining leading register and the tail's bits.
std::pair<StateVector, Bitstring> split_trailing_basis(const StateVector& s, int width);

struct GateCounts {
  int step1 = 0;
  int step2 = 0;
  int step3 = 0;
  int step4 = 0;
  int total() const { return step1 + step2 + step3 + step4; }
  friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

GateCounts gate_count(const CipherKey& key);

}  // namespace qbc

#pragma once

// Multi-block chaining.
//
// Mode 1 (measured IV): C_i = E(P_i xor IV_i), where IV_1 is the shared IV and
// IV_{i+1} is the measurement of a fresh re-encryption of P_i xor IV_i. The
// collapsed copy travels as a basis-state carrier next to C_{i+1}.
//
// Mode 2 (entangling): one joint register; block i is prepared as |P_i>,
// entangled with block i-1 through CNOTs q -> pi(q), then encrypted in place.

#include <string>
#include <string_view>
#include <vector>

#include "qbc/bitstring.hpp"
#include "qbc/cipher.hpp"
#include "qbc/keyschedule.hpp"
#include "qbc/random.hpp"
#include "qbc/statevector.hpp"

namespace qbc {

enum class Mode { Measured, Entangling };

std::string_view mode_tag(Mode mode);  // "m1" / "m2"
Mode parse_mode(std::string_view tag);

struct ModeConfig {
  Mode mode = Mode::Measured;
  Bitstring iv;
  /// 1-based; qubit q of C_{i-1} controls qubit pairing[q-1] of block i. Mode 2 only.
  std::vector<int> pairing;
};

/// IV and pairing come from the key; absent fields default to the all-zero IV
/// and the identity pairing.
ModeConfig mode_config(const CipherKey& key, Mode mode);

struct Transmission {
  Mode mode = Mode::Measured;
  int block_size = 0;
  int blocks = 0;
  /// Mode 1: C_1, K_1, C_2, K_2, ..., C_m with K_i the IV carrier for block
  /// i+1. Mode 2: a single joint state over blocks * block_size qubits.
  std::vector<CipherBlock> payload;
};

Transmission mode1_encrypt(const CipherKey& key, const std::vector<PlainBlock>& blocks,
                           const ModeConfig& cfg, Rng& rng);
std::vector<PlainBlock> mode1_decrypt(const CipherKey& key, const Transmission& t,
                                      const ModeConfig& cfg);

Transmission mode2_encrypt(const CipherKey& key, const std::vector<PlainBlock>& blocks,
                           const ModeConfig& cfg);
std::vector<PlainBlock> mode2_decrypt(const CipherKey& key, const Transmission& t,
                                      const ModeConfig& cfg);

/// Per-block ciphertext marginals. Mode 2 blocks are read off the joint register.
std::vector<Eigen::VectorXd> block_marginals(const Transmission& t);

}  // namespace qbc

#include "qbc/modes.hpp"

#include <numeric>
#include <string>

#include "qbc/errors.hpp"

namespace qbc {
namespace {

void check_config(const CipherKey& key, const ModeConfig& cfg, Mode expected) {
  if (cfg.mode != expected) {
    throw InputError("mode config is " + std::string(mode_tag(cfg.mode)) + ", expected " +
                     std::string(mode_tag(expected)));
  }
  if (cfg.iv.size() != key.qubits()) {
    throw InputError("iv of " + std::to_string(cfg.iv.size()) + " bits for block size " +
                     std::to_string(key.qubits()));
  }
}

void check_blocks(const CipherKey& key, const std::vector<PlainBlock>& blocks) {
  for (const PlainBlock& b : blocks) {
    if (b.bits.size() != key.qubits()) {
      throw InputError("plaintext block of " + std::to_string(b.bits.size()) +
                       " bits for block size " + std::to_string(key.qubits()));
    }
  }
}

void check_transmission(const CipherKey& key, const Transmission& t, Mode expected) {
  if (t.mode != expected) throw InputError("transmission is not in mode " + std::string(mode_tag(expected)));
  if (t.block_size != key.qubits()) {
    throw InputError("transmission block size " + std::to_string(t.block_size) +
                     " does not match key n=" + std::to_string(key.qubits()));
  }
}

StateVector apply_pairing(StateVector s, const std::vector<int>& pairing, int control_offset,
                          int target_offset) {
  for (std::size_t q = 0; q < pairing.size(); ++q) {
    s = apply_cnot(std::move(s), control_offset + static_cast<int>(q) + 1,
                   target_offset + pairing[q]);
  }
  return s;
}

}  // namespace

std::string_view mode_tag(Mode mode) { return mode == Mode::Measured ? "m1" : "m2"; }

Mode parse_mode(std::string_view tag) {
  if (tag == "m1") return Mode::Measured;
  if (tag == "m2") return Mode::Entangling;
  throw InputError("unknown mode '" + std::string(tag) + "', expected m1 or m2");
}

ModeConfig mode_config(const CipherKey& key, Mode mode) {
  ModeConfig cfg{mode, key.iv().value_or(Bitstring::zeros(key.qubits())), {}};
  if (mode == Mode::Entangling) {
    if (key.mode2_pairing()) {
      cfg.pairing = *key.mode2_pairing();
    } else {
      cfg.pairing.resize(static_cast<std::size_t>(key.qubits()));
      std::iota(cfg.pairing.begin(), cfg.pairing.end(), 1);
    }
  }
  return cfg;
}

Transmission mode1_encrypt(const CipherKey& key, const std::vector<PlainBlock>& blocks,
                           const ModeConfig& cfg, Rng& rng) {
  check_config(key, cfg, Mode::Measured);
  check_blocks(key, blocks);
  Transmission t{Mode::Measured, key.qubits(), static_cast<int>(blocks.size()), {}};
  Bitstring iv = cfg.iv;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const PlainBlock input{blocks[i].bits ^ iv};
    t.payload.push_back(encrypt_block(key, input, i, "m1"));
    if (i + 1 == blocks.size()) break;
    // Alice knows the classical input, so the extra copy is a re-encryption.
    const MeasurementOutcome copy = measure_all(encrypt_block(key, input).state, rng);
    t.payload.push_back({copy.collapsed, i + 1, "m1-iv"});
    iv = copy.bits;
  }
  return t;
}

std::vector<PlainBlock> mode1_decrypt(const CipherKey& key, const Transmission& t,
                                      const ModeConfig& cfg) {
  check_config(key, cfg, Mode::Measured);
  check_transmission(key, t, Mode::Measured);
  const std::size_t m = static_cast<std::size_t>(t.blocks);
  if (t.payload.size() != (m == 0 ? 0 : 2 * m - 1)) {
    throw InputError("mode 1 payload of " + std::to_string(t.payload.size()) + " states for " +
                     std::to_string(m) + " blocks");
  }
  std::vector<PlainBlock> out;
  Bitstring iv = cfg.iv;
  for (std::size_t i = 0; i < m; ++i) {
    out.push_back({decrypt_block(key, t.payload[2 * i]).bits ^ iv});
    if (i + 1 < m) {
      const StateVector& carrier = t.payload[2 * i + 1].state;
      if (carrier.qubits() != key.qubits()) throw InputError("iv carrier size does not match key");
      iv = read_basis_state(carrier);
    }
  }
  return out;
}

Transmission mode2_encrypt(const CipherKey& key, const std::vector<PlainBlock>& blocks,
                           const ModeConfig& cfg) {
  check_config(key, cfg, Mode::Entangling);
  check_blocks(key, blocks);
  const int n = key.qubits();
  if (static_cast<int>(cfg.pairing.size()) != n) throw InputError("mode 2 pairing size does not match key");
  if (blocks.size() * static_cast<std::size_t>(n) > static_cast<std::size_t>(kMaxQubits)) {
    throw ResourceError("mode 2 register of " + std::to_string(blocks.size()) + " x " +
                        std::to_string(n) + " qubits exceeds 24");
  }
  Transmission t{Mode::Entangling, n, static_cast<int>(blocks.size()), {}};
  if (blocks.empty()) return t;

  const Circuit circuit = key_circuit(key);
  StateVector joint = apply_circuit(encode_plaintext(blocks[0].bits ^ cfg.iv), circuit);
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    const int offset = static_cast<int>(i) * n;
    joint = tensor(joint, encode_plaintext(blocks[i].bits));
    joint = apply_pairing(std::move(joint), cfg.pairing, offset - n, offset);
    joint = apply_circuit(std::move(joint), circuit, offset);
  }
  t.payload.push_back({std::move(joint), 0, "m2"});
  return t;
}

std::vector<PlainBlock> mode2_decrypt(const CipherKey& key, const Transmission& t,
                                      const ModeConfig& cfg) {
  check_config(key, cfg, Mode::Entangling);
  check_transmission(key, t, Mode::Entangling);
  const int n = key.qubits();
  const int m = t.blocks;
  if (m == 0) {
    if (!t.payload.empty()) throw InputError("mode 2 payload present for zero blocks");
    return {};
  }
  if (t.payload.size() != 1 || t.payload[0].state.qubits() != m * n) {
    throw InputError("mode 2 payload must be one joint register of " + std::to_string(m * n) +
                     " qubits");
  }
  if (static_cast<int>(cfg.pairing.size()) != n) throw InputError("mode 2 pairing size does not match key");

  const Circuit undo = inverse_circuit(key);
  std::vector<PlainBlock> out(static_cast<std::size_t>(m));
  StateVector joint = t.payload[0].state;
  for (int i = m - 1; i >= 1; --i) {
    const int offset = i * n;
    joint = apply_circuit(std::move(joint), undo, offset);
    joint = apply_pairing(std::move(joint), cfg.pairing, offset - n, offset);
    auto [rest, bits] = split_trailing_basis(joint, n);
    out[static_cast<std::size_t>(i)] = {bits};
    joint = std::move(rest);
  }
  out[0] = {read_basis_state(apply_circuit(std::move(joint), undo)) ^ cfg.iv};
  return out;
}

std::vector<Eigen::VectorXd> block_marginals(const Transmission& t) {
  std::vector<Eigen::VectorXd> out;
  if (t.mode == Mode::Measured) {
    for (std::size_t i = 0; i < t.payload.size(); i += 2) out.push_back(marginals_p0(t.payload[i].state));
    return out;
  }
  if (t.payload.empty()) return out;
  const Eigen::VectorXd all = marginals_p0(t.payload[0].state);
  for (int i = 0; i < t.blocks; ++i) out.push_back(all.segment(i * t.block_size, t.block_size));
  return out;
}

}  // namespace qbc

#pragma once

// Key circuit construction. A key fixes the Step-1 rotation angles on an
// N-point grid, the Step-3 downstream->upstream pairing and the Step-4
// upstream visiting order; the circuit is built deterministically from it.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qbc/bitstring.hpp"
#include "qbc/random.hpp"

namespace qbc {

using BigInt = boost::multiprecision::cpp_int;

struct GateOp {
  enum class Kind { SingleU, Cnot };

  Kind kind = Kind::SingleU;
  int qubit = 1;   // SingleU target, or Cnot control
  int target = 0;  // Cnot only
  double theta = 0;

  static GateOp single(int q, double theta) { return {Kind::SingleU, q, 0, theta}; }
  static GateOp cnot(int control, int target) { return {Kind::Cnot, control, target, 0}; }

  bool is_cnot() const { return kind == Kind::Cnot; }
  int control() const { return qubit; }

  friend bool operator==(const GateOp&, const GateOp&) = default;
};

using Circuit = std::vector<GateOp>;

struct StepPair {
  int downstream;
  int upstream;
  friend bool operator==(const StepPair&, const StepPair&) = default;
};

/// Upstream qubits are 1..floor(n/2), downstream the rest. For odd n the
/// smallest downstream qubit is left out of the Step-3 pairing.
class CipherKey {
 public:
  static constexpr int kVersion = 1;

  CipherKey(int qubits, int grid, std::vector<int> theta_indices, std::vector<StepPair> step3_pairs,
            std::vector<int> step4_upstream_order,
            std::optional<std::vector<int>> mode2_pairing = std::nullopt,
            std::optional<Bitstring> iv = std::nullopt);

  int qubits() const { return qubits_; }
  int grid() const { return grid_; }
  int version() const { return kVersion; }
  const std::vector<int>& theta_indices() const { return theta_indices_; }
  const std::vector<StepPair>& step3_pairs() const { return step3_pairs_; }
  const std::vector<int>& step4_upstream_order() const { return step4_order_; }
  const std::optional<std::vector<int>>& mode2_pairing() const { return mode2_pairing_; }
  const std::optional<Bitstring>& iv() const { return iv_; }

  /// Rotation angle of qubit q (1-based): 2*pi*theta_indices[q-1]/N.
  double theta(int q) const;

  CipherKey with_theta_indices(std::vector<int> indices) const;
  CipherKey with_mode2_pairing(std::vector<int> pairing) const;
  CipherKey with_iv(Bitstring iv) const;

  friend bool operator==(const CipherKey&, const CipherKey&) = default;

 private:
  int qubits_;
  int grid_;
  std::vector<int> theta_indices_;
  std::vector<StepPair> step3_pairs_;
  std::vector<int> step4_order_;
  std::optional<std::vector<int>> mode2_pairing_;
  std::optional<Bitstring> iv_;
};

int upstream_count(int n);

/// Angle k on an N-point grid.
double grid_angle(int k, int grid);

/// True when the angle sits within 1e-3 rad of a multiple of pi/4, where a
/// rotation either fails to superpose or flattens the qubit's marginal to 1/2.
bool is_degenerate_angle(double theta);

/// Random key; deterministic given the generator state. Degenerate angles
/// are resampled unless the grid has no admissible value at all.
CipherKey generate_key(int n, int grid, Rng& rng);

/// Gates of each construction step, in application order.
struct KeySteps {
  Circuit step1;
  Circuit step2;
  Circuit step3;
  Circuit step4;
};

KeySteps key_steps(const CipherKey& key);

/// Circuit truncated after the given number of steps (1..4); ablations use 1-3.
Circuit key_circuit(const CipherKey& key, int through_step = 4);

/// Every gate is an involution, so the inverse is the reversed list.
Circuit inverse(std::span<const GateOp> circuit);
Circuit inverse_circuit(const CipherKey& key);

struct KeyspaceSize {
  BigInt count;
  double log2;
};

/// N^n * h! * h! with h = floor(n/2): Step-1 grid, Step-3 pairings and
/// Step-4 upstream orders.
KeyspaceSize keyspace_size(int n, int grid);

/// Visits every key of the (n, N) keyspace in a fixed order.
void for_each_key(int n, int grid, const std::function<void(const CipherKey&)>& visit);

}  // namespace qbc

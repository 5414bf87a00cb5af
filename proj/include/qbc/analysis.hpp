#pragma once

// Confusion and diffusion analysis.
//
// Two views of "ciphertext qubit m depends on key unitary U_j":
//  * symbolic: propagate dependence sets through the circuit, a 1-qubit
//    unitary adds itself and a CNOT unions the control's set into the target;
//  * numeric: perturb theta_j, re-simulate, and compare single-qubit
//    marginals against a threshold.
// The symbolic sets over-approximate the numeric ones: in a CNOT network fed
// by a product state the marginal of qubit m depends exactly on the parity
// (XOR) support of m, so dependences shared by control and target cancel.

#include <Eigen/Core>

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qbc/cipher.hpp"
#include "qbc/keyschedule.hpp"
#include "qbc/random.hpp"

namespace qbc {

/// Entry (m, j), both 1-based: ciphertext qubit m depends on unitary U_j.
class DependenceMatrix {
 public:
  using Entries = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

  explicit DependenceMatrix(int n) : entries_(Entries::Constant(n, n, false)) {}
  explicit DependenceMatrix(Entries entries) : entries_(std::move(entries)) {}

  int size() const { return static_cast<int>(entries_.rows()); }
  bool operator()(int m, int j) const { return entries_(m - 1, j - 1); }
  void set(int m, int j, bool value = true) { entries_(m - 1, j - 1) = value; }
  const Entries& entries() const { return entries_; }

  std::vector<int> row_counts() const;
  std::vector<int> col_counts() const;

  bool is_subset_of(const DependenceMatrix& other) const {
    return !(entries_ && !other.entries_).any();
  }

  /// Fraction of entries on which the two matrices agree.
  double agreement(const DependenceMatrix& other) const;

  friend bool operator==(const DependenceMatrix& a, const DependenceMatrix& b) {
    return a.size() == b.size() && (a.entries_ == b.entries_).all();
  }

 private:
  Entries entries_;
};

struct ProbeSettings {
  double epsilon = 1e-6;
  int grid = 8;
};

/// How much of the key circuit to run; anything short of Full is an ablation.
enum class Ablation { Step1Only = 1, ThroughStep2 = 2, ThroughStep3 = 3, Full = 4 };

Circuit ablated_circuit(const CipherKey& key, Ablation ablation);

DependenceMatrix symbolic_dependences(std::span<const GateOp> circuit, int n);

/// Replacement angles tried for a SingleU gate on qubit q currently at theta.
using AlternativeAngles = std::function<std::vector<double>(int q, double theta)>;

/// Numeric dependences after every prefix of the circuit: element k holds the
/// matrix after the first k gates.
std::vector<DependenceMatrix> numeric_dependence_trace(std::span<const GateOp> circuit, int n,
                                                       const Bitstring& input,
                                                       const AlternativeAngles& alternatives,
                                                       double epsilon);

DependenceMatrix numeric_dependences(std::span<const GateOp> circuit, int n, const Bitstring& input,
                                     const AlternativeAngles& alternatives, double epsilon);

/// `grid` alternative values spread over the key's own N-point angle grid.
AlternativeAngles key_grid_alternatives(const CipherKey& key, int grid);

DependenceMatrix numeric_dependence_matrix(const CipherKey& key, const PlainBlock& plain,
                                           ProbeSettings probe = {},
                                           Ablation ablation = Ablation::Full);

struct ConfusionReport {
  DependenceMatrix matrix;
  std::vector<int> row_counts;
  std::vector<int> col_counts;
  bool pass = false;
};

/// Passes iff every symbolic row count exceeds n/2.
ConfusionReport confusion_check(const CipherKey& key, Ablation ablation = Ablation::Full);

struct DiffusionProfile {
  int n = 0;
  /// Entry (m, j): marginal of ciphertext qubit m moved when plaintext bit j flipped.
  DependenceMatrix changed;
  std::vector<int> counts;
  double epsilon = 0;
  bool pass = false;
};

/// Flips each plaintext bit in turn; passes iff every count >= n/2.
DiffusionProfile diffusion_profile(const CipherKey& key, const PlainBlock& plain,
                                   double epsilon = 1e-6, Ablation ablation = Ablation::Full);

struct Theorem1Report {
  int n = 0;
  int trials = 0;
  int locality_checks = 0;
  int locality_violations = 0;
  int transfer_checks = 0;
  int transfer_violations = 0;
  int retention_checks = 0;
  int retention_violations = 0;
  /// Dependences held by both control and target that vanished from the
  /// target. Expected under XOR propagation; not a violation.
  int shared_cancellations = 0;
  std::vector<std::string> counterexamples;
  double epsilon = 0;
  int grid = 0;

  bool pass() const {
    return locality_violations == 0 && transfer_violations == 0 && retention_violations == 0;
  }
};

/// Random circuits (a rotation on every qubit, then random CNOTs) checked for
/// (a) locality of 1-qubit gates, (b) transfer of the control's dependences
/// that the target does not already hold, (c) retention on the control.
Theorem1Report verify_theorem1(int n, int trials, Rng& rng, ProbeSettings probe = {});

}  // namespace qbc

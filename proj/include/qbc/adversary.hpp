#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qbc/analysis.hpp"
#include "qbc/cipher.hpp"
#include "qbc/keyschedule.hpp"
#include "qbc/random.hpp"
#include "qbc/statevector.hpp"

namespace qbc {

/// Empirical rate with a 95% normal-approximation half-width.
struct Estimate {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double probability = 0;
  double half_width = 0;
};

Estimate make_estimate(std::size_t successes, std::size_t trials);

struct AttackReport {
  std::string attack;
  std::size_t trials = 0;
  std::map<std::string, double> parameters;
  std::map<std::string, Estimate> estimates;
  /// Closed-form or derived quantities.
  std::map<std::string, double> values;
  /// Arbitrary-precision integers, as decimal strings.
  std::map<std::string, std::string> exact;
};

struct Interception {
  StateVector forwarded;
  Bitstring eve_bits;
};

/// Eve measures in the computational basis and forwards the collapsed state.
Interception intercept_measure(const StateVector& c, Rng& rng);

/// A physical receiver: undo the key circuit, then measure. Unlike
/// decrypt_block this never inspects the amplitudes.
Bitstring measured_receive(const CipherKey& key, const StateVector& received, Rng& rng);

/// Repetition protocol: each trial sends r independent encryptions of the
/// same block, optionally intercepted. A copy passes when Bob's measured bits
/// equal the plaintext, which after an interception happens with probability
/// sum_b |c_b|^4; a trial is tamper-evident when any copy fails.
AttackReport detection_experiment(const CipherKey& key, const PlainBlock& plain, int repetitions,
                                  bool eve_on, std::size_t trials, Rng& rng);

struct StatisticsAttack {
  std::vector<double> estimates;  // theta-hat per qubit, in [0, pi/2]
  std::vector<double> folded_truth;
  std::vector<double> residuals;
  AttackReport report;
};

/// Folds an angle onto [0, pi/2], the range a single marginal can identify.
double fold_angle(double theta);

/// Estimates each theta_i from the sampled marginal of qubit i, assuming the
/// qubit only saw its own rotation. Meaningful against Step1Only; against the
/// full circuit it shows how confusion defeats the estimator.
StatisticsAttack marginal_estimation_attack(const CipherKey& key, const PlainBlock& plain,
                                            std::size_t samples, Rng& rng,
                                            Ablation ablation = Ablation::Step1Only);

struct BruteForceResult {
  BigInt enumerated = 0;
  std::vector<CipherKey> consistent;
  double seconds = 0;
};

inline constexpr long kBruteForceLimit = 1'000'000;

/// Enumerates the whole (n, N) keyspace and keeps keys mapping the known
/// plaintext to the known ciphertext with fidelity >= 1 - 1e-9.
BruteForceResult brute_force_key_recovery(int n, int grid, const PlainBlock& plain,
                                          const StateVector& cipher);

struct ConfigCountBounds {
  int n = 0;
  long length = 0;
  BigInt lower;
  BigInt upper;
  double log2_lower = 0;
  double log2_upper = 0;
};

/// n(n-1)^L <= configurations <= (n^2-n)^L for CNOT sequences of length L.
ConfigCountBounds config_count_bounds(int n, long length);

}  // namespace qbc

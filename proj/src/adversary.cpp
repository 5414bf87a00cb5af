#include "qbc/adversary.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

#include "qbc/errors.hpp"

namespace qbc {

Estimate make_estimate(std::size_t successes, std::size_t trials) {
  Estimate e{successes, trials, 0, 0};
  if (trials == 0) return e;
  const double n = static_cast<double>(trials);
  e.probability = static_cast<double>(successes) / n;
  e.half_width = 1.96 * std::sqrt(e.probability * (1 - e.probability) / n);
  return e;
}

Interception intercept_measure(const StateVector& c, Rng& rng) {
  MeasurementOutcome m = measure_all(c, rng);
  return {std::move(m.collapsed), m.bits};
}

Bitstring measured_receive(const CipherKey& key, const StateVector& received, Rng& rng) {
  const Circuit undo = inverse_circuit(key);
  return measure_all(apply_circuit(received, undo), rng).bits;
}

AttackReport detection_experiment(const CipherKey& key, const PlainBlock& plain, int repetitions,
                                  bool eve_on, std::size_t trials, Rng& rng) {
  if (repetitions < 1) throw InputError("repetitions must be at least 1");
  if (trials < 1) throw InputError("trials must be at least 1");
  const StateVector cipher = encrypt_block(key, plain).state;
  const Circuit undo = inverse_circuit(key);
  const double collision = collision_probability(cipher);

  // Bob's pre-measurement state depends only on what arrives; Eve forwards
  // basis states, so cache per forwarded index.
  std::unordered_map<std::uint32_t, StateVector> undone;
  auto bob_state = [&](const StateVector& received, std::uint32_t key_index) -> const StateVector& {
    auto it = undone.find(key_index);
    if (it == undone.end()) it = undone.emplace(key_index, apply_circuit(received, undo)).first;
    return it->second;
  };
  constexpr std::uint32_t kHonest = UINT32_MAX;

  std::size_t copies_passed = 0;
  std::size_t purity_flags = 0;
  std::size_t tamper_evident = 0;
  std::size_t disagreements = 0;
  const std::uint64_t master = rng();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng trial_rng(derive_seed(master, trial));
    bool any_failed = false;
    bool disagree = false;
    Bitstring first;
    for (int copy = 0; copy < repetitions; ++copy) {
      const StateVector* at_bob = nullptr;
      if (eve_on) {
        const Interception eve = intercept_measure(cipher, trial_rng);
        at_bob = &bob_state(eve.forwarded, eve.eve_bits.index());
      } else {
        at_bob = &bob_state(cipher, kHonest);
      }
      try {
        read_basis_state(*at_bob);
      } catch (const IntegrityError&) {
        ++purity_flags;
      }
      const Bitstring bits = measure_all(*at_bob, trial_rng).bits;
      if (bits == plain.bits) {
        ++copies_passed;
      } else {
        any_failed = true;
      }
      if (copy == 0) {
        first = bits;
      } else if (bits != first) {
        disagree = true;
      }
    }
    tamper_evident += any_failed;
    disagreements += disagree;
  }

  const std::size_t copies = trials * static_cast<std::size_t>(repetitions);
  AttackReport report;
  report.attack = "intercept";
  report.trials = trials;
  report.parameters = {{"n", key.qubits()},
                       {"N", key.grid()},
                       {"repetitions", repetitions},
                       {"eve_on", eve_on ? 1.0 : 0.0}};
  report.estimates["undetected_per_copy"] = make_estimate(copies_passed, copies);
  report.estimates["detection_rate"] = make_estimate(tamper_evident, trials);
  report.estimates["copies_disagree_rate"] = make_estimate(disagreements, trials);
  report.estimates["purity_flag_per_copy"] = make_estimate(purity_flags, copies);
  report.values["collision_probability"] = collision;
  report.values["predicted_undetected_per_copy"] = eve_on ? collision : 1.0;
  report.values["predicted_detection_rate"] = eve_on ? 1 - std::pow(collision, repetitions) : 0.0;
  return report;
}

double fold_angle(double theta) {
  double t = std::fmod(theta, std::numbers::pi);
  if (t < 0) t += std::numbers::pi;
  return t > std::numbers::pi / 2 ? std::numbers::pi - t : t;
}

StatisticsAttack marginal_estimation_attack(const CipherKey& key, const PlainBlock& plain,
                                            std::size_t samples, Rng& rng, Ablation ablation) {
  if (samples < 1) throw InputError("statistics attack needs at least one sample");
  const int n = key.qubits();
  if (plain.bits.size() != n) throw InputError("plaintext length does not match key");
  const StateVector cipher =
      apply_circuit(encode_plaintext(plain.bits), ablated_circuit(key, ablation));

  std::vector<double> cumulative(static_cast<std::size_t>(cipher.dimension()));
  double running = 0;
  for (Eigen::Index i = 0; i < cipher.dimension(); ++i) {
    running += std::norm(cipher[i]);
    cumulative[static_cast<std::size_t>(i)] = running;
  }
  std::vector<std::size_t> zeros(static_cast<std::size_t>(n), 0);
  for (std::size_t s = 0; s < samples; ++s) {
    const double u = uniform01(rng) * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const auto index = static_cast<Eigen::Index>(it - cumulative.begin());
    for (int q = 1; q <= n; ++q) {
      if (!(index & cipher.mask(q))) ++zeros[static_cast<std::size_t>(q - 1)];
    }
  }

  StatisticsAttack out;
  double worst = 0;
  std::size_t recovered = 0;
  for (int q = 1; q <= n; ++q) {
    const double p0 =
        static_cast<double>(zeros[static_cast<std::size_t>(q - 1)]) / static_cast<double>(samples);
    // U|0> has p0 = cos^2, U|1> has p0 = sin^2.
    const double estimate =
        plain.bits.bit(q) ? std::asin(std::sqrt(p0)) : std::acos(std::sqrt(p0));
    const double truth = fold_angle(key.theta(q));
    const double residual = std::abs(estimate - truth);
    out.estimates.push_back(estimate);
    out.folded_truth.push_back(truth);
    out.residuals.push_back(residual);
    worst = std::max(worst, residual);
    recovered += residual < 0.05;
  }

  out.report.attack = "stats";
  out.report.trials = samples;
  out.report.parameters = {{"n", n},
                           {"N", key.grid()},
                           {"samples", static_cast<double>(samples)},
                           {"through_step", static_cast<double>(ablation)}};
  out.report.estimates["qubits_within_0.05"] = make_estimate(recovered, static_cast<std::size_t>(n));
  out.report.values["max_residual"] = worst;
  for (int q = 1; q <= n; ++q) {
    const auto i = static_cast<std::size_t>(q - 1);
    out.report.values["theta_hat_" + std::to_string(q)] = out.estimates[i];
    out.report.values["residual_" + std::to_string(q)] = out.residuals[i];
  }
  return out;
}

BruteForceResult brute_force_key_recovery(int n, int grid, const PlainBlock& plain,
                                          const StateVector& cipher) {
  if (n < 2 || grid < 2) throw InputError("brute force needs n >= 2 and N >= 2");
  if (plain.bits.size() != n || cipher.qubits() != n) {
    throw InputError("known pair does not match n=" + std::to_string(n));
  }
  const KeyspaceSize size = keyspace_size(n, grid);
  if (size.count > kBruteForceLimit) {
    throw ResourceError("keyspace of " + size.count.str() + " keys exceeds the brute-force limit of " +
                        std::to_string(kBruteForceLimit));
  }
  BruteForceResult result;
  const auto start = std::chrono::steady_clock::now();
  const StateVector input = encode_plaintext(plain.bits);
  for_each_key(n, grid, [&](const CipherKey& candidate) {
    ++result.enumerated;
    const StateVector trial = apply_circuit(input, key_circuit(candidate));
    if (fidelity(trial, cipher) >= 1 - kPurityTolerance) result.consistent.push_back(candidate);
  });
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

ConfigCountBounds config_count_bounds(int n, long length) {
  if (n < 2) throw InputError("configuration bounds need n >= 2");
  if (length < 1) throw InputError("configuration bounds need L >= 1");
  const auto exponent = static_cast<unsigned>(length);
  ConfigCountBounds b;
  b.n = n;
  b.length = length;
  b.lower = BigInt(n) * boost::multiprecision::pow(BigInt(n - 1), exponent);
  b.upper = boost::multiprecision::pow(BigInt(n) * (n - 1), exponent);
  b.log2_lower = std::log2(static_cast<double>(n)) + length * std::log2(static_cast<double>(n - 1));
  b.log2_upper = length * std::log2(static_cast<double>(n) * (n - 1));
  return b;
}

}  // namespace qbc

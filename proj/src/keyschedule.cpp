#include "qbc/keyschedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qbc/errors.hpp"

namespace qbc {
namespace {

bool is_permutation_of_1_to(const std::vector<int>& values, int size) {
  if (static_cast<int>(values.size()) != size) return false;
  std::vector<bool> seen(static_cast<std::size_t>(size) + 1, false);
  for (int v : values) {
    if (v < 1 || v > size || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

std::vector<int> random_permutation(int size, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(size));
  std::iota(perm.begin(), perm.end(), 1);
  for (int i = size - 1; i > 0; --i) {
    const auto j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

// First paired downstream qubit; for odd n the qubit below it stays unpaired.
int first_paired_downstream(int n) { return n - upstream_count(n) + 1; }

}  // namespace

int upstream_count(int n) { return n / 2; }

double grid_angle(int k, int grid) { return 2.0 * std::numbers::pi * k / grid; }

bool is_degenerate_angle(double theta) {
  constexpr double quarter = std::numbers::pi / 4;
  const double r = theta / quarter;
  return std::abs(r - std::round(r)) * quarter < 1e-3;
}

CipherKey::CipherKey(int qubits, int grid, std::vector<int> theta_indices,
                     std::vector<StepPair> step3_pairs, std::vector<int> step4_upstream_order,
                     std::optional<std::vector<int>> mode2_pairing, std::optional<Bitstring> iv)
    : qubits_(qubits),
      grid_(grid),
      theta_indices_(std::move(theta_indices)),
      step3_pairs_(std::move(step3_pairs)),
      step4_order_(std::move(step4_upstream_order)),
      mode2_pairing_(std::move(mode2_pairing)),
      iv_(std::move(iv)) {
  if (qubits_ < 2 || qubits_ > Bitstring::kMaxBits) {
    throw KeyError("key block size " + std::to_string(qubits_) + " outside [2, 24]");
  }
  if (grid_ < 2) throw KeyError("key grid size " + std::to_string(grid_) + " below 2");
  if (static_cast<int>(theta_indices_.size()) != qubits_) {
    throw KeyError("key has " + std::to_string(theta_indices_.size()) + " theta indices for " +
                   std::to_string(qubits_) + " qubits");
  }
  for (int k : theta_indices_) {
    if (k < 0 || k >= grid_) {
      throw KeyError("theta index " + std::to_string(k) + " outside [0, " + std::to_string(grid_) +
                     ")");
    }
  }

  const int h = upstream_count(qubits_);
  std::sort(step3_pairs_.begin(), step3_pairs_.end(),
            [](const StepPair& a, const StepPair& b) { return a.downstream < b.downstream; });
  if (static_cast<int>(step3_pairs_.size()) != h) {
    throw KeyError("step 3 needs " + std::to_string(h) + " pairs, got " +
                   std::to_string(step3_pairs_.size()));
  }
  std::vector<int> ups;
  for (int i = 0; i < h; ++i) {
    const StepPair& p = step3_pairs_[static_cast<std::size_t>(i)];
    if (p.downstream != first_paired_downstream(qubits_) + i) {
      throw KeyError("step 3 pairs must cover downstream qubits " +
                     std::to_string(first_paired_downstream(qubits_)) + ".." +
                     std::to_string(qubits_) + " exactly once");
    }
    ups.push_back(p.upstream);
  }
  if (!is_permutation_of_1_to(ups, h)) {
    throw KeyError("step 3 pairs must map onto upstream qubits 1.." + std::to_string(h));
  }
  if (!is_permutation_of_1_to(step4_order_, h)) {
    throw KeyError("step 4 order must be a permutation of 1.." + std::to_string(h));
  }
  if (mode2_pairing_ && !is_permutation_of_1_to(*mode2_pairing_, qubits_)) {
    throw KeyError("mode 2 pairing must be a permutation of 1.." + std::to_string(qubits_));
  }
  if (iv_ && iv_->size() != qubits_) {
    throw KeyError("iv has " + std::to_string(iv_->size()) + " bits for block size " +
                   std::to_string(qubits_));
  }
}

double CipherKey::theta(int q) const {
  if (q < 1 || q > qubits_) throw InputError("qubit " + std::to_string(q) + " outside key range");
  return grid_angle(theta_indices_[static_cast<std::size_t>(q - 1)], grid_);
}

CipherKey CipherKey::with_theta_indices(std::vector<int> indices) const {
  return CipherKey(qubits_, grid_, std::move(indices), step3_pairs_, step4_order_, mode2_pairing_,
                   iv_);
}

CipherKey CipherKey::with_mode2_pairing(std::vector<int> pairing) const {
  return CipherKey(qubits_, grid_, theta_indices_, step3_pairs_, step4_order_, std::move(pairing),
                   iv_);
}

CipherKey CipherKey::with_iv(Bitstring iv) const {
  return CipherKey(qubits_, grid_, theta_indices_, step3_pairs_, step4_order_, mode2_pairing_,
                   iv);
}

CipherKey generate_key(int n, int grid, Rng& rng) {
  if (n < 2 || n > Bitstring::kMaxBits) {
    throw InputError("block size n=" + std::to_string(n) + " outside [2, 24]");
  }
  if (grid < 2) throw InputError("grid size N=" + std::to_string(grid) + " below 2");

  bool guard = false;
  for (int k = 0; k < grid && !guard; ++k) guard = !is_degenerate_angle(grid_angle(k, grid));

  std::vector<int> theta(static_cast<std::size_t>(n));
  for (int& k : theta) {
    do {
      k = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(grid)));
    } while (guard && is_degenerate_angle(grid_angle(k, grid)));
  }

  const int h = upstream_count(n);
  const std::vector<int> targets = random_permutation(h, rng);
  std::vector<StepPair> pairs;
  for (int i = 0; i < h; ++i) {
    pairs.push_back({first_paired_downstream(n) + i, targets[static_cast<std::size_t>(i)]});
  }
  return CipherKey(n, grid, std::move(theta), std::move(pairs), random_permutation(h, rng));
}

KeySteps key_steps(const CipherKey& key) {
  const int n = key.qubits();
  const int h = upstream_count(n);
  KeySteps steps;
  for (int q = 1; q <= n; ++q) steps.step1.push_back(GateOp::single(q, key.theta(q)));
  for (int i = 1; i < n; ++i) steps.step2.push_back(GateOp::cnot(i, i + 1));
  for (const StepPair& p : key.step3_pairs()) {
    steps.step3.push_back(GateOp::cnot(p.downstream, p.upstream));
  }

  // Zigzag: descending downstream qubits alternate with the upstream order.
  std::vector<int> down;
  if (n % 2 == 1) down.push_back(h + 1);
  for (int t = 1; t <= h; ++t) down.push_back(n + 1 - t);
  const auto& sigma = key.step4_upstream_order();
  for (int t = 0; t < h; ++t) {
    const auto ut = static_cast<std::size_t>(t);
    steps.step4.push_back(GateOp::cnot(down[ut], sigma[ut]));
    if (ut + 1 < down.size()) steps.step4.push_back(GateOp::cnot(sigma[ut], down[ut + 1]));
  }
  if (n % 2 == 0) {
    steps.step4.push_back(GateOp::cnot(sigma[static_cast<std::size_t>(h - 1)],
                                       down[static_cast<std::size_t>(h - 1)]));
  }
  return steps;
}

Circuit key_circuit(const CipherKey& key, int through_step) {
  if (through_step < 1 || through_step > 4) {
    throw InputError("key circuit step " + std::to_string(through_step) + " outside [1, 4]");
  }
  KeySteps steps = key_steps(key);
  Circuit out = std::move(steps.step1);
  const Circuit* rest[] = {&steps.step2, &steps.step3, &steps.step4};
  for (int s = 0; s + 1 < through_step; ++s) {
    out.insert(out.end(), rest[s]->begin(), rest[s]->end());
  }
  return out;
}

Circuit inverse(std::span<const GateOp> circuit) { return Circuit(circuit.rbegin(), circuit.rend()); }

Circuit inverse_circuit(const CipherKey& key) { return inverse(key_circuit(key)); }

KeyspaceSize keyspace_size(int n, int grid) {
  if (n < 1 || grid < 1) throw InputError("keyspace of n=" + std::to_string(n) + ", N=" +
                                          std::to_string(grid));
  const int h = upstream_count(n);
  BigInt factorial = 1;
  double log2 = n * std::log2(static_cast<double>(grid));
  for (int i = 2; i <= h; ++i) {
    factorial *= i;
    log2 += 2 * std::log2(static_cast<double>(i));
  }
  BigInt count = boost::multiprecision::pow(BigInt(grid), static_cast<unsigned>(n));
  count *= factorial * factorial;
  return {count, log2};
}

void for_each_key(int n, int grid, const std::function<void(const CipherKey&)>& visit) {
  const int h = upstream_count(n);
  std::vector<int> theta(static_cast<std::size_t>(n), 0);
  std::vector<int> targets(static_cast<std::size_t>(h));
  std::vector<int> sigma(static_cast<std::size_t>(h));
  while (true) {
    std::iota(targets.begin(), targets.end(), 1);
    do {
      std::vector<StepPair> pairs;
      for (int i = 0; i < h; ++i) {
        pairs.push_back({first_paired_downstream(n) + i, targets[static_cast<std::size_t>(i)]});
      }
      std::iota(sigma.begin(), sigma.end(), 1);
      do {
        visit(CipherKey(n, grid, theta, pairs, sigma));
      } while (std::next_permutation(sigma.begin(), sigma.end()));
    } while (std::next_permutation(targets.begin(), targets.end()));

    int pos = n - 1;
    while (pos >= 0 && ++theta[static_cast<std::size_t>(pos)] == grid) {
      theta[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace qbc

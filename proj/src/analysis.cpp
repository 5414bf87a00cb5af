#include "qbc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "qbc/errors.hpp"

namespace qbc {
namespace {

using Marginals = Eigen::VectorXd;

// Marginals after every prefix (record_all) or only after the full circuit.
std::vector<Marginals> marginal_trace(std::span<const GateOp> circuit, int n,
                                      const Bitstring& input, bool record_all) {
  std::vector<Marginals> trace;
  StateVector s = basis_state(n, input);
  if (record_all) trace.push_back(marginals_p0(s));
  for (const GateOp& g : circuit) {
    s = apply_circuit(std::move(s), std::span<const GateOp>(&g, 1));
    if (record_all) trace.push_back(marginals_p0(s));
  }
  if (!record_all) trace.push_back(marginals_p0(s));
  return trace;
}

std::vector<DependenceMatrix> probe_dependences(std::span<const GateOp> circuit, int n,
                                                const Bitstring& input,
                                                const AlternativeAngles& alternatives,
                                                double epsilon, bool record_all) {
  if (epsilon <= 0) throw InputError("dependence threshold must be positive");
  for (const GateOp& g : circuit) {
    if (g.qubit < 1 || g.qubit > n || (g.is_cnot() && (g.target < 1 || g.target > n))) {
      throw InputError("circuit references a qubit outside [1, " + std::to_string(n) + "]");
    }
  }
  const std::vector<Marginals> base = marginal_trace(circuit, n, input, record_all);
  std::vector<DependenceMatrix> out(base.size(), DependenceMatrix(n));

  Circuit probe(circuit.begin(), circuit.end());
  for (std::size_t g = 0; g < circuit.size(); ++g) {
    if (circuit[g].is_cnot()) continue;
    const int j = circuit[g].qubit;
    for (double alt : alternatives(j, circuit[g].theta)) {
      probe[g].theta = alt;
      const std::vector<Marginals> moved = marginal_trace(probe, n, input, record_all);
      // Prefix k contains gate g iff k > g.
      const std::size_t first = record_all ? g + 1 : 0;
      for (std::size_t k = first; k < moved.size(); ++k) {
        for (int m = 1; m <= n; ++m) {
          if (std::abs(moved[k][m - 1] - base[k][m - 1]) > epsilon) out[k].set(m, j);
        }
      }
    }
    probe[g].theta = circuit[g].theta;
  }
  return out;
}

double guarded_random_angle(Rng& rng, double margin) {
  constexpr double quarter = std::numbers::pi / 4;
  while (true) {
    const double theta = 2 * std::numbers::pi * uniform01(rng);
    const double r = theta / quarter;
    if (std::abs(r - std::round(r)) * quarter > margin) return theta;
  }
}

}  // namespace

std::vector<int> DependenceMatrix::row_counts() const {
  std::vector<int> out;
  for (Eigen::Index m = 0; m < entries_.rows(); ++m) out.push_back(entries_.row(m).count());
  return out;
}

std::vector<int> DependenceMatrix::col_counts() const {
  std::vector<int> out;
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) out.push_back(entries_.col(j).count());
  return out;
}

double DependenceMatrix::agreement(const DependenceMatrix& other) const {
  if (other.size() != size()) throw InputError("comparing dependence matrices of different size");
  const auto same = (entries_ == other.entries_).count();
  return static_cast<double>(same) / static_cast<double>(entries_.size());
}

Circuit ablated_circuit(const CipherKey& key, Ablation ablation) {
  return key_circuit(key, static_cast<int>(ablation));
}

DependenceMatrix symbolic_dependences(std::span<const GateOp> circuit, int n) {
  DependenceMatrix::Entries sets = DependenceMatrix::Entries::Constant(n, n, false);
  for (const GateOp& g : circuit) {
    if (g.qubit < 1 || g.qubit > n || (g.is_cnot() && (g.target < 1 || g.target > n))) {
      throw InputError("circuit references a qubit outside [1, " + std::to_string(n) + "]");
    }
    if (g.is_cnot()) {
      sets.row(g.target - 1) = sets.row(g.target - 1) || sets.row(g.control() - 1);
    } else {
      sets(g.qubit - 1, g.qubit - 1) = true;
    }
  }
  return DependenceMatrix(std::move(sets));
}

std::vector<DependenceMatrix> numeric_dependence_trace(std::span<const GateOp> circuit, int n,
                                                       const Bitstring& input,
                                                       const AlternativeAngles& alternatives,
                                                       double epsilon) {
  return probe_dependences(circuit, n, input, alternatives, epsilon, true);
}

DependenceMatrix numeric_dependences(std::span<const GateOp> circuit, int n, const Bitstring& input,
                                     const AlternativeAngles& alternatives, double epsilon) {
  return probe_dependences(circuit, n, input, alternatives, epsilon, false).back();
}

AlternativeAngles key_grid_alternatives(const CipherKey& key, int grid) {
  if (grid < 2) throw InputError("perturbation grid must be at least 2");
  return [&key, grid](int q, double) {
    const int size = key.grid();
    const int current = key.theta_indices()[static_cast<std::size_t>(q - 1)];
    std::set<int> picks;
    if (size - 1 <= grid) {
      for (int k = 0; k < size; ++k) picks.insert(k);
    } else {
      for (int k = 1; k <= grid; ++k) {
        const auto step = static_cast<int>(std::lround(static_cast<double>(k) * size / (grid + 1)));
        picks.insert((current + step) % size);
      }
    }
    picks.erase(current);
    std::vector<double> angles;
    for (int k : picks) angles.push_back(grid_angle(k, size));
    return angles;
  };
}

DependenceMatrix numeric_dependence_matrix(const CipherKey& key, const PlainBlock& plain,
                                           ProbeSettings probe, Ablation ablation) {
  if (plain.bits.size() != key.qubits()) throw InputError("plaintext length does not match key");
  const Circuit circuit = ablated_circuit(key, ablation);
  return numeric_dependences(circuit, key.qubits(), plain.bits,
                             key_grid_alternatives(key, probe.grid), probe.epsilon);
}

ConfusionReport confusion_check(const CipherKey& key, Ablation ablation) {
  const int n = key.qubits();
  DependenceMatrix deps = symbolic_dependences(ablated_circuit(key, ablation), n);
  std::vector<int> rows = deps.row_counts();
  std::vector<int> cols = deps.col_counts();
  const bool pass = std::all_of(rows.begin(), rows.end(), [n](int c) { return 2 * c > n; });
  return {std::move(deps), std::move(rows), std::move(cols), pass};
}

DiffusionProfile diffusion_profile(const CipherKey& key, const PlainBlock& plain, double epsilon,
                                   Ablation ablation) {
  if (epsilon <= 0) throw InputError("diffusion threshold must be positive");
  const int n = key.qubits();
  if (plain.bits.size() != n) throw InputError("plaintext length does not match key");
  const Circuit circuit = ablated_circuit(key, ablation);
  const Marginals base = marginals_p0(apply_circuit(encode_plaintext(plain.bits), circuit));

  DiffusionProfile profile{n, DependenceMatrix(n), {}, epsilon, false};
  for (int j = 1; j <= n; ++j) {
    const Marginals moved =
        marginals_p0(apply_circuit(encode_plaintext(plain.bits.flipped(j)), circuit));
    for (int m = 1; m <= n; ++m) {
      if (std::abs(moved[m - 1] - base[m - 1]) > epsilon) profile.changed.set(m, j);
    }
  }
  profile.counts = profile.changed.col_counts();
  profile.pass =
      std::all_of(profile.counts.begin(), profile.counts.end(), [n](int c) { return 2 * c >= n; });
  return profile;
}

Theorem1Report verify_theorem1(int n, int trials, Rng& rng, ProbeSettings probe) {
  if (n < 2 || n > 6) throw InputError("verify_theorem1 needs 2 <= n <= 6");
  if (trials < 1) throw InputError("verify_theorem1 needs at least one trial");
  if (probe.grid < 2) throw InputError("perturbation grid must be at least 2");

  // Away from multiples of pi/4 every factor cos(2 theta) stays >= sin(0.2).
  constexpr double kGenericMargin = 0.1;
  constexpr std::size_t kMaxCounterexamples = 20;

  Theorem1Report report;
  report.n = n;
  report.trials = trials;
  report.epsilon = probe.epsilon;
  report.grid = probe.grid;
  auto note = [&report](std::string what) {
    if (report.counterexamples.size() < kMaxCounterexamples) {
      report.counterexamples.push_back(std::move(what));
    }
  };

  const AlternativeAngles offsets = [&probe](int, double theta) {
    std::vector<double> out;
    for (int k = 1; k <= probe.grid; ++k) {
      out.push_back(theta + 2 * std::numbers::pi * k / (probe.grid + 1));
    }
    return out;
  };

  for (int trial = 0; trial < trials; ++trial) {
    Circuit circuit;
    for (int q = 1; q <= n; ++q) {
      circuit.push_back(GateOp::single(q, guarded_random_angle(rng, kGenericMargin)));
    }
    const auto extra = static_cast<int>(uniform_below(rng, 2 * static_cast<std::uint64_t>(n) + 1));
    for (int i = 0; i < n + extra; ++i) {
      const int c = 1 + static_cast<int>(uniform_below(rng, n));
      int t = 1 + static_cast<int>(uniform_below(rng, n - 1));
      if (t >= c) ++t;
      circuit.push_back(GateOp::cnot(c, t));
    }
    const Bitstring input(n, static_cast<std::uint32_t>(uniform_below(rng, 1ull << n)));
    const std::string tag = "trial " + std::to_string(trial) + ": ";

    const std::vector<DependenceMatrix> trace =
        numeric_dependence_trace(circuit, n, input, offsets, probe.epsilon);

    // (a) after the rotation layer each qubit depends on its own unitary only.
    const DependenceMatrix& layer = trace[static_cast<std::size_t>(n)];
    for (int j = 1; j <= n; ++j) {
      ++report.locality_checks;
      for (int m = 1; m <= n; ++m) {
        if (layer(m, j) != (m == j)) {
          ++report.locality_violations;
          note(tag + "rotation layer: qubit " + std::to_string(m) + " vs U" + std::to_string(j));
        }
      }
    }

    // (a) an extra rotation anywhere moves only its own qubit's marginal.
    {
      const auto pos = static_cast<std::size_t>(
          n + static_cast<int>(uniform_below(rng, circuit.size() - static_cast<std::size_t>(n) + 1)));
      const int q = 1 + static_cast<int>(uniform_below(rng, n));
      const StateVector s = apply_circuit(basis_state(n, input),
                                          std::span<const GateOp>(circuit.data(), pos));
      const Marginals before = marginals_p0(s);
      const Marginals after =
          marginals_p0(apply_single(s, q, 2 * std::numbers::pi * uniform01(rng)));
      ++report.locality_checks;
      for (int m = 1; m <= n; ++m) {
        if (m != q && std::abs(after[m - 1] - before[m - 1]) > 1e-12) {
          ++report.locality_violations;
          note(tag + "rotation on qubit " + std::to_string(q) + " at gate " + std::to_string(pos) +
               " moved qubit " + std::to_string(m));
        }
      }
    }

    // (b) and (c) at every CNOT.
    for (std::size_t g = static_cast<std::size_t>(n); g < circuit.size(); ++g) {
      const int c = circuit[g].control();
      const int t = circuit[g].target;
      const DependenceMatrix& before = trace[g];
      const DependenceMatrix& after = trace[g + 1];
      for (int j = 1; j <= n; ++j) {
        if (!before(c, j)) continue;
        ++report.retention_checks;
        if (!after(c, j)) {
          ++report.retention_violations;
          note(tag + "CNOT " + std::to_string(c) + "->" + std::to_string(t) + " at gate " +
               std::to_string(g) + ": control lost U" + std::to_string(j));
        }
        if (before(t, j)) {
          if (!after(t, j)) ++report.shared_cancellations;
          continue;
        }
        ++report.transfer_checks;
        if (!after(t, j)) {
          ++report.transfer_violations;
          note(tag + "CNOT " + std::to_string(c) + "->" + std::to_string(t) + " at gate " +
               std::to_string(g) + ": target did not gain U" + std::to_string(j));
        }
      }
    }
  }
  return report;
}

}  // namespace qbc

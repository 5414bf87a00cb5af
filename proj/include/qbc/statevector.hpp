#pragma once

// Pure-state simulation engine. Gate functions take the state by value and
// return the evolved state, so callers that pass an rvalue pay no copy.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>

#include "qbc/bitstring.hpp"
#include "qbc/errors.hpp"
#include "qbc/random.hpp"

namespace qbc {

inline constexpr int kMaxQubits = 24;
inline constexpr double kNormTolerance = 1e-9;

template <typename Scalar>
class BasicStateVector {
 public:
  using RealScalar = Scalar;
  using Complex = std::complex<Scalar>;
  using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  struct Unchecked {};

  /// Validates length 2^n and unit norm.
  BasicStateVector(int qubits, Amplitudes amps) : qubits_(qubits), amps_(std::move(amps)) {
    if (qubits < 1 || qubits > kMaxQubits) {
      throw InputError("qubit count " + std::to_string(qubits) + " outside [1, 24]");
    }
    if (amps_.size() != (Eigen::Index{1} << qubits)) {
      throw InputError("amplitude count " + std::to_string(amps_.size()) + " is not 2^" +
                       std::to_string(qubits));
    }
    const Scalar norm = amps_.squaredNorm();
    if (std::abs(norm - Scalar(1)) > Scalar(kNormTolerance)) {
      throw InputError("state norm " + std::to_string(static_cast<double>(norm)) + " is not 1");
    }
  }

  /// For results of unitary evolution of an already valid state.
  BasicStateVector(Unchecked, int qubits, Amplitudes amps)
      : qubits_(qubits), amps_(std::move(amps)) {}

  int qubits() const { return qubits_; }
  Eigen::Index dimension() const { return amps_.size(); }
  const Amplitudes& amplitudes() const { return amps_; }
  const Complex& operator[](Eigen::Index i) const { return amps_[i]; }

  /// Moves the amplitudes out; the state is left empty.
  Amplitudes release() && { return std::move(amps_); }

  void check_qubit(int q) const {
    if (q < 1 || q > qubits_) {
      throw InputError("qubit " + std::to_string(q) + " outside [1, " + std::to_string(qubits_) +
                       "]");
    }
  }

  /// Bit mask of qubit q inside a basis index.
  Eigen::Index mask(int q) const { return Eigen::Index{1} << (qubits_ - q); }

 private:
  int qubits_;
  Amplitudes amps_;
};

using StateVector = BasicStateVector<double>;

template <typename Scalar = double>
BasicStateVector<Scalar> basis_state(int qubits, const Bitstring& bits) {
  if (bits.size() != qubits) {
    throw InputError("bitstring of length " + std::to_string(bits.size()) + " for " +
                     std::to_string(qubits) + " qubits");
  }
  if (qubits < 1 || qubits > kMaxQubits) {
    throw InputError("qubit count " + std::to_string(qubits) + " outside [1, 24]");
  }
  typename BasicStateVector<Scalar>::Amplitudes amps =
      BasicStateVector<Scalar>::Amplitudes::Zero(Eigen::Index{1} << qubits);
  amps[bits.index()] = 1;
  return {typename BasicStateVector<Scalar>::Unchecked{}, qubits, std::move(amps)};
}

/// U(theta) = [[cos, sin], [sin, -cos]] on qubit q. Real and self-inverse.
template <typename Scalar>
BasicStateVector<Scalar> apply_single(BasicStateVector<Scalar> s, int q, Scalar theta) {
  s.check_qubit(q);
  const Eigen::Index stride = s.mask(q);
  const int n = s.qubits();
  const Scalar c = std::cos(theta);
  const Scalar sn = std::sin(theta);
  auto amps = std::move(s).release();
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    if (i & stride) continue;
    const auto alpha = amps[i];
    const auto beta = amps[i | stride];
    amps[i] = c * alpha + sn * beta;
    amps[i | stride] = sn * alpha - c * beta;
  }
  return {typename BasicStateVector<Scalar>::Unchecked{}, n, std::move(amps)};
}

template <typename Scalar>
BasicStateVector<Scalar> apply_cnot(BasicStateVector<Scalar> s, int control, int target) {
  s.check_qubit(control);
  s.check_qubit(target);
  if (control == target) {
    throw InputError("CNOT control and target are both qubit " + std::to_string(control));
  }
  const Eigen::Index cmask = s.mask(control);
  const Eigen::Index tmask = s.mask(target);
  const int n = s.qubits();
  auto amps = std::move(s).release();
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(amps[i], amps[i | tmask]);
  }
  return {typename BasicStateVector<Scalar>::Unchecked{}, n, std::move(amps)};
}

/// Probability of reading |0> on qubit q.
template <typename Scalar>
Scalar marginal_p0(const BasicStateVector<Scalar>& s, int q) {
  s.check_qubit(q);
  const Eigen::Index m = s.mask(q);
  Scalar p = 0;
  for (Eigen::Index i = 0; i < s.dimension(); ++i) {
    if (!(i & m)) p += std::norm(s[i]);
  }
  return p;
}

/// All single-qubit marginals, index q-1 holds qubit q.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> marginals_p0(const BasicStateVector<Scalar>& s) {
  const int n = s.qubits();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  for (Eigen::Index i = 0; i < s.dimension(); ++i) {
    const Scalar w = std::norm(s[i]);
    for (int q = 1; q <= n; ++q) {
      if (!(i & s.mask(q))) p[q - 1] += w;
    }
  }
  return p;
}

template <typename Scalar>
struct BasicMeasurementOutcome {
  Bitstring bits;
  BasicStateVector<Scalar> collapsed;
};

using MeasurementOutcome = BasicMeasurementOutcome<double>;

/// Born-rule sample of all qubits in the computational basis.
template <typename Scalar>
BasicMeasurementOutcome<Scalar> measure_all(const BasicStateVector<Scalar>& s, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0;
  Eigen::Index chosen = -1;
  Eigen::Index last_nonzero = 0;
  for (Eigen::Index i = 0; i < s.dimension(); ++i) {
    const double w = static_cast<double>(std::norm(s[i]));
    if (w > 0) last_nonzero = i;
    cumulative += w;
    if (chosen < 0 && u < cumulative) chosen = i;
  }
  // Rounding can leave the cumulative sum a hair below u.
  if (chosen < 0) chosen = last_nonzero;
  Bitstring bits(s.qubits(), static_cast<std::uint32_t>(chosen));
  return {bits, basis_state<Scalar>(s.qubits(), bits)};
}

/// Joint state a ⊗ b; a's qubits are the most significant.
template <typename Scalar>
BasicStateVector<Scalar> tensor(const BasicStateVector<Scalar>& a, const BasicStateVector<Scalar>& b) {
  const int n = a.qubits() + b.qubits();
  if (n > kMaxQubits) {
    throw ResourceError("joint register of " + std::to_string(n) + " qubits exceeds 24");
  }
  typename BasicStateVector<Scalar>::Amplitudes amps(a.dimension() * b.dimension());
  for (Eigen::Index i = 0; i < a.dimension(); ++i) {
    amps.segment(i * b.dimension(), b.dimension()) = a[i] * b.amplitudes();
  }
  return {typename BasicStateVector<Scalar>::Unchecked{}, n, std::move(amps)};
}

/// |<a|b>|^2
template <typename Scalar>
Scalar fidelity(const BasicStateVector<Scalar>& a, const BasicStateVector<Scalar>& b) {
  if (a.qubits() != b.qubits()) {
    throw InputError("fidelity between " + std::to_string(a.qubits()) + "- and " +
                     std::to_string(b.qubits()) + "-qubit states");
  }
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

/// Sum of |amp|^4: probability that two independent computational-basis
/// measurements agree.
template <typename Scalar>
Scalar collision_probability(const BasicStateVector<Scalar>& s) {
  Scalar total = 0;
  for (Eigen::Index i = 0; i < s.dimension(); ++i) {
    const Scalar w = std::norm(s[i]);
    total += w * w;
  }
  return total;
}

}  // namespace qbc

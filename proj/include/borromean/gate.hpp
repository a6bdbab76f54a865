#pragma once

#include <array>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "borromean/dynamics.hpp"

namespace borromean {

using cplx = std::complex<double>;
using Vector8c = Eigen::Matrix<cplx, 8, 1>;
using Matrix8c = Eigen::Matrix<cplx, 8, 8>;
using Matrix8d = Eigen::Matrix<double, 8, 8>;

// Computational index c1*4 + t*2 + c3 (atom 1 most significant).
struct QubitState {
  Vector8c amps = Vector8c::Zero();
  double leakage = 0.0;     // population left in other Rydberg states
  double decay_loss = 0.0;  // population lost by spontaneous decay

  static QubitState basis_state(int index);
};

// Which atoms are in Rydberg states during the interaction interval.
// Atom 1 goes to |r> from |1>, atom 2 to |r'> from |0>, atom 3 to |r''> from |1>.
struct ExcitationPattern {
  std::array<bool, 3> excited{};

  static ExcitationPattern from_index(int index);
  static ExcitationPattern parse(const std::string& key);  // "rgr", "r_g_r", ...
  std::string key() const;
  int count() const;
  auto operator<=>(const ExcitationPattern&) const = default;
};

struct OperatingPoint {
  double e_v_cm = 0.11912;
  double b_gauss = 3.5;
  double r_um = 12.5;
  double tau_us = 2.42;

  auto operator<=>(const OperatingPoint&) const = default;
};

struct ReturnAmplitude {
  cplx amplitude{1.0, 0.0};
  double remaining = 1.0;  // squared norm of the Rydberg wavefunction at tau

  double population() const { return std::norm(amplitude); }
  double leakage() const { return remaining - population(); }
  double decay_loss() const { return 1.0 - remaining; }
};

// Amplitudes for the 8 computational components after pulse 1.
using AmplitudeTable = std::array<ReturnAmplitude, 8>;

// R_y(angle) = exp(-i angle Y / 2) on one atom's {|0>,|1>} subspace; atom in {1,2,3}.
QubitState single_qubit_rotation(const QubitState& state, int atom, double angle);

// Pulse 1, conditional return amplitudes, pulse 8. The target rotations are
// R_y(-pi/2) then R_y(+pi/2), so ideal amplitudes give the Toffoli gate exactly.
QubitState run_gate(const QubitState& input, const AmplitudeTable& table);

AmplitudeTable ideal_amplitude_table();  // |r g r''> -> -1, everything else 1

Eigen::Matrix<double, 8, 8> toffoli_matrix();
Vector8c toffoli(const Vector8c& v);

struct TruthTable {
  Matrix8d raw = Matrix8d::Zero();
  Matrix8d renormalized = Matrix8d::Zero();
  std::array<double, 8> leakage{};
  std::array<double, 8> decay_loss{};
};

TruthTable truth_table(const AmplitudeTable& table);

// The six single-qubit states |0>, |1>, (|0>+-|1>)/sqrt2, (|0>+-i|1>)/sqrt2.
std::array<Eigen::Vector2cd, 6> fidelity_single_states();

struct FidelityReport {
  double average = 0.0;
  std::vector<double> per_input;  // 216 values, atom 1 index slowest
};

FidelityReport average_fidelity(const AmplitudeTable& table, int workers = 1);

// Tr sqrt(sqrt(rho) sigma sqrt(rho)) for Hermitian positive semidefinite inputs.
double uhlmann_fidelity(const Matrix8c& rho, const Matrix8c& sigma);

double protocol_duration_us(const OperatingPoint& op, int pulses = 8, double pulse_us = 0.01);

// Builds and caches the pair/triple bases for each pattern and evaluates the
// interaction-interval return amplitudes.
class GateModel {
 public:
  explicit GateModel(const AtomicPhysics& physics, bool with_decay = true, double cutoff_mhz = 1000.0);

  const AtomicPhysics& physics() const { return physics_; }
  bool with_decay() const { return with_decay_; }

  ReturnAmplitude return_amplitude(const ExcitationPattern& pattern, const OperatingPoint& op) const;
  AmplitudeTable amplitude_table(const OperatingPoint& op) const;

  // Return phase (radians, wrapped) of a pattern, uncached.
  double return_phase(const ExcitationPattern& pattern, const OperatingPoint& op) const;

  // Time trace (p, phase, f, norm) of a pattern's collective state.
  Trace pattern_trace(const ExcitationPattern& pattern, const OperatingPoint& op,
                      const std::vector<double>& times) const;

  // Basis, geometry and Hamiltonian of a multi-atom pattern.
  struct PatternSystem {
    const CollectiveBasis* basis;
    Eigen::MatrixXd couplings;
    FieldConfiguration fields;
  };
  PatternSystem system(const ExcitationPattern& pattern, const OperatingPoint& op) const;

  const CollectiveBasis& basis_for(const ExcitationPattern& pattern) const;

 private:
  ReturnAmplitude compute(const ExcitationPattern& pattern, const OperatingPoint& op) const;

  const AtomicPhysics& physics_;
  bool with_decay_;
  double cutoff_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::unique_ptr<CollectiveBasis>> bases_;
  // couplings depend on geometry only; keyed by pattern and R
  mutable std::map<std::pair<std::string, double>, Eigen::MatrixXd> couplings_;
  mutable std::map<std::pair<ExcitationPattern, OperatingPoint>, ReturnAmplitude> cache_;
};

}  // namespace borromean

#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "borromean/hamiltonian.hpp"

namespace borromean {

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AmplitudeVector {
  Eigen::VectorXcd amps;
  double time_us = 0.0;
};

AmplitudeVector initial_amplitudes(const CollectiveBasis& basis);

// exp(-i 2 pi H t) for a time-constant H. Eigendecomposition when it is well
// conditioned, otherwise a scaling-and-squaring Pade exponential per call.
class Propagator {
 public:
  explicit Propagator(const Eigen::MatrixXcd& h_mhz, double max_condition = 1e8);

  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi, double t_us) const;
  bool uses_eigenbasis() const { return eigen_ok_; }
  double condition() const { return condition_; }

 private:
  Eigen::MatrixXcd h_;
  Eigen::MatrixXcd vecs_, inv_;
  Eigen::VectorXcd vals_;
  bool eigen_ok_ = false;
  double condition_ = 0.0;
};

AmplitudeVector propagate(const AmplitudeVector& psi0, const InteractionHamiltonian& h, double t_us);

// Independent cross-check: fixed-step truncated Taylor series of the generator.
AmplitudeVector propagate_stepped(const AmplitudeVector& psi0, const InteractionHamiltonian& h, double t_us,
                                  double tolerance = 1e-14);

// Per-atom weighted fraction of atoms in `target`.
double observable_f(const Eigen::VectorXcd& psi, const CollectiveBasis& basis, const Manifold& target);

// Phase of the initial amplitude with the non-interacting diagonal phase removed.
// Empty when |c_0| < 1e-6.
std::optional<double> phase_of_initial(const Eigen::VectorXcd& psi, const CollectiveBasis& basis,
                                       const InteractionHamiltonian& h, double t_us);

struct TracePoint {
  double t_us;
  double p;
  double phase;  // unwrapped; NaN where undefined
  double f;
  double norm;
};

struct Trace {
  std::vector<TracePoint> points;
};

Trace trace(const CollectiveBasis& basis, const InteractionHamiltonian& h, const std::vector<double>& times,
            const Manifold& target = {80, 0, 1});

struct ScanRow {
  double e_v_cm;
  double f = 0.0;
  double p = 0.0;
  double norm = 0.0;
  std::string error;  // non-empty when this point failed
};

// Field scan starting from the initial state; the coupling matrix is reused for
// all points. Rows are evaluated on `workers` threads.
std::vector<ScanRow> field_scan(const std::vector<double>& fields_v_cm, const FieldConfiguration& fixed,
                                double tau_us, const CollectiveBasis& basis, const Eigen::MatrixXd& couplings,
                                const AtomicPhysics& physics, bool with_decay, int workers = 1,
                                const Manifold& target = {80, 0, 1});

std::vector<double> linspace(double lo, double hi, int count);

// Runs body(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

double wrap_phase(double x);  // to (-pi, pi]

}  // namespace borromean

#include "borromean/gate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace borromean {

QubitState QubitState::basis_state(int index) {
  QubitState s;
  s.amps(index) = 1.0;
  return s;
}

ExcitationPattern ExcitationPattern::from_index(int index) {
  const int c1 = (index >> 2) & 1, t = (index >> 1) & 1, c3 = index & 1;
  return ExcitationPattern{{c1 == 1, t == 0, c3 == 1}};
}

ExcitationPattern ExcitationPattern::parse(const std::string& key) {
  std::string k;
  for (char c : key)
    if (c != '_' && c != '-' && c != ',') k += c;
  if (k.size() != 3) throw ConfigError("pattern must name three atoms, e.g. r_g_r");
  ExcitationPattern p;
  for (int i = 0; i < 3; ++i) {
    if (k[i] == 'r')
      p.excited[i] = true;
    else if (k[i] == 'g')
      p.excited[i] = false;
    else
      throw ConfigError("pattern letters must be r or g: " + key);
  }
  return p;
}

std::string ExcitationPattern::key() const {
  std::string s;
  for (bool e : excited) s += e ? 'r' : 'g';
  return s;
}

int ExcitationPattern::count() const { return excited[0] + excited[1] + excited[2]; }

QubitState single_qubit_rotation(const QubitState& state, int atom, double angle) {
  if (atom < 1 || atom > 3) throw std::invalid_argument("atom index must be 1, 2 or 3");
  const int bit = 1 << (3 - atom);
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  QubitState out = state;
  for (int i = 0; i < 8; ++i) {
    if (i & bit) continue;
    const cplx a0 = state.amps(i), a1 = state.amps(i | bit);
    out.amps(i) = c * a0 - s * a1;
    out.amps(i | bit) = s * a0 + c * a1;
  }
  return out;
}

QubitState run_gate(const QubitState& input, const AmplitudeTable& table) {
  QubitState s = single_qubit_rotation(input, 2, -0.5 * std::numbers::pi);
  for (int i = 0; i < 8; ++i) {
    const double w = std::norm(s.amps(i));
    s.leakage += w * table[i].leakage();
    s.decay_loss += w * table[i].decay_loss();
    s.amps(i) *= table[i].amplitude;
  }
  return single_qubit_rotation(s, 2, 0.5 * std::numbers::pi);
}

AmplitudeTable ideal_amplitude_table() {
  AmplitudeTable t;
  for (int i = 0; i < 8; ++i) {
    const auto p = ExcitationPattern::from_index(i);
    t[i].amplitude = (p.key() == "rgr") ? -1.0 : 1.0;
    t[i].remaining = 1.0;
  }
  return t;
}

Eigen::Matrix<double, 8, 8> toffoli_matrix() {
  Eigen::Matrix<double, 8, 8> m = Eigen::Matrix<double, 8, 8>::Identity();
  // controls are atoms 1 and 3: |1 t 1> is 5 or 7
  m(5, 5) = m(7, 7) = 0.0;
  m(5, 7) = m(7, 5) = 1.0;
  return m;
}

Vector8c toffoli(const Vector8c& v) { return toffoli_matrix().cast<cplx>() * v; }

TruthTable truth_table(const AmplitudeTable& table) {
  TruthTable tt;
  for (int in = 0; in < 8; ++in) {
    const auto out = run_gate(QubitState::basis_state(in), table);
    double sum = 0.0;
    for (int o = 0; o < 8; ++o) {
      tt.raw(in, o) = std::norm(out.amps(o));
      sum += tt.raw(in, o);
    }
    for (int o = 0; o < 8; ++o) tt.renormalized(in, o) = sum > 0 ? tt.raw(in, o) / sum : 0.0;
    tt.leakage[in] = out.leakage;
    tt.decay_loss[in] = out.decay_loss;
  }
  return tt;
}

std::array<Eigen::Vector2cd, 6> fidelity_single_states() {
  const double h = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  return {Eigen::Vector2cd(1.0, 0.0), Eigen::Vector2cd(0.0, 1.0), Eigen::Vector2cd(h, h),
          Eigen::Vector2cd(h, -h),    Eigen::Vector2cd(h, i * h),   Eigen::Vector2cd(h, -i * h)};
}

FidelityReport average_fidelity(const AmplitudeTable& table, int workers) {
  const auto singles = fidelity_single_states();
  FidelityReport rep;
  rep.per_input.assign(216, 0.0);
  parallel_for(216, workers, [&](std::size_t n) {
    const auto& a = singles[n / 36];
    const auto& b = singles[(n / 6) % 6];
    const auto& c = singles[n % 6];
    QubitState in;
    for (int k = 0; k < 8; ++k) in.amps(k) = a((k >> 2) & 1) * b((k >> 1) & 1) * c(k & 1);
    const auto out = run_gate(in, table);
    // pure etalon: Tr sqrt(...) reduces to |<et|out>|
    rep.per_input[n] = std::abs(toffoli(in.amps).dot(out.amps));
  });
  double s = 0.0;
  for (double f : rep.per_input) s += f;
  rep.average = s / 216.0;
  return rep;
}

namespace {

// Eigenvalues below this fraction of the largest are rounding noise; their
// square roots would otherwise show up at the 1e-8 level.
constexpr double kSpectralFloor = 1e-13;

Eigen::Matrix<double, 8, 1> floored_sqrt(const Eigen::Matrix<double, 8, 1>& ev) {
  const double cut = kSpectralFloor * std::max(ev.maxCoeff(), 0.0);
  return ev.unaryExpr([cut](double x) { return x > cut ? std::sqrt(x) : 0.0; });
}

Matrix8c psd_sqrt(const Matrix8c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix8c> es(m);
  const Eigen::Matrix<double, 8, 1> ev = floored_sqrt(es.eigenvalues());
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double uhlmann_fidelity(const Matrix8c& rho, const Matrix8c& sigma) {
  const Matrix8c sr = psd_sqrt(rho);
  Matrix8c inner = sr * sigma * sr;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix8c> es(inner, Eigen::EigenvaluesOnly);
  return floored_sqrt(es.eigenvalues()).sum();
}

double protocol_duration_us(const OperatingPoint& op, int pulses, double pulse_us) {
  return pulses * pulse_us + op.tau_us;
}

GateModel::GateModel(const AtomicPhysics& physics, bool with_decay, double cutoff_mhz)
    : physics_(physics), with_decay_(with_decay), cutoff_(cutoff_mhz) {}

namespace {

std::vector<RydbergLevel> pattern_atoms(const ExcitationPattern& p) {
  const RydbergLevel lv[3] = {level_r(), level_r1(), level_r2()};
  std::vector<RydbergLevel> atoms;
  for (int i = 0; i < 3; ++i)
    if (p.excited[i]) atoms.push_back(lv[i]);
  return atoms;
}

Geometry pattern_geometry(const ExcitationPattern& p, double r_um) {
  if (p.count() == 3) return Geometry::chain(3, r_um);
  std::vector<double> pos;
  for (int i = 0; i < 3; ++i)
    if (p.excited[i]) pos.push_back(i * r_um);
  return Geometry{pos};
}

}  // namespace

const CollectiveBasis& GateModel::basis_for(const ExcitationPattern& pattern) const {
  if (pattern.count() < 2) throw ConfigError("pattern " + pattern.key() + " has no collective basis");
  std::lock_guard lock(mutex_);
  auto& slot = bases_[pattern.key()];
  if (!slot)
    slot = std::make_unique<CollectiveBasis>(
        build_basis(pattern_atoms(pattern), scheme_manifolds(), cutoff_, physics_.model()));
  return *slot;
}

GateModel::PatternSystem GateModel::system(const ExcitationPattern& pattern, const OperatingPoint& op) const {
  const auto& basis = basis_for(pattern);
  const auto key = std::make_pair(pattern.key(), op.r_um);
  Eigen::MatrixXd v;
  {
    std::lock_guard lock(mutex_);
    if (auto it = couplings_.find(key); it != couplings_.end()) v = it->second;
  }
  if (v.size() == 0) {
    v = coupling_matrix(basis, pattern_geometry(pattern, op.r_um), physics_);
    std::lock_guard lock(mutex_);
    couplings_.emplace(key, v);
  }
  FieldConfiguration fc{op.e_v_cm, op.b_gauss, op.r_um, op.tau_us};
  return {&basis, std::move(v), fc};
}

ReturnAmplitude GateModel::compute(const ExcitationPattern& pattern, const OperatingPoint& op) const {
  ReturnAmplitude ra;
  if (pattern.count() == 0) return ra;
  if (pattern.count() == 1) {
    if (with_decay_) {
      const double g = physics_.decay_rate(pattern_atoms(pattern).front());
      ra.amplitude = std::exp(-0.5 * g * op.tau_us);
      ra.remaining = std::norm(ra.amplitude);
    }
    return ra;
  }
  const auto sys = system(pattern, op);
  const auto h = assemble(*sys.basis, sys.couplings, sys.fields, physics_, with_decay_);
  const Eigen::VectorXcd psi = Propagator(h.matrix).apply(initial_amplitudes(*sys.basis).amps, op.tau_us);
  const auto i0 = static_cast<Eigen::Index>(sys.basis->initial_index);
  // remove the non-interacting phase (the compensation done by pulses 5-7)
  const double ref = 2.0 * std::numbers::pi * h.matrix(i0, i0).real() * op.tau_us;
  ra.amplitude = psi(i0) * std::polar(1.0, ref);
  ra.remaining = psi.squaredNorm();
  return ra;
}

ReturnAmplitude GateModel::return_amplitude(const ExcitationPattern& pattern, const OperatingPoint& op) const {
  const auto key = std::make_pair(pattern, op);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const auto ra = compute(pattern, op);
  std::lock_guard lock(mutex_);
  cache_.emplace(key, ra);
  return ra;
}

double GateModel::return_phase(const ExcitationPattern& pattern, const OperatingPoint& op) const {
  return std::arg(compute(pattern, op).amplitude);
}

AmplitudeTable GateModel::amplitude_table(const OperatingPoint& op) const {
  AmplitudeTable t;
  for (int i = 0; i < 8; ++i) t[i] = return_amplitude(ExcitationPattern::from_index(i), op);
  return t;
}

Trace GateModel::pattern_trace(const ExcitationPattern& pattern, const OperatingPoint& op,
                               const std::vector<double>& times) const {
  if (pattern.count() < 2) {
    Trace tr;
    const double g = (with_decay_ && pattern.count() == 1) ? physics_.decay_rate(pattern_atoms(pattern).front()) : 0.0;
    for (double t : times) {
      const double p = std::exp(-g * t);
      tr.points.push_back({t, p, 0.0, 0.0, p});
    }
    return tr;
  }
  const auto sys = system(pattern, op);
  const auto h = assemble(*sys.basis, sys.couplings, sys.fields, physics_, with_decay_);
  return trace(*sys.basis, h, times);
}

}  // namespace borromean

#include "bellwalk/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace bellwalk {

namespace {

double basis_value(const BasisTerm& term, double t) {
  const double arg = term.angularFrequency * t + term.phase;
  double osc = 0.0;
  switch (term.kind) {
    case BasisKind::Sine:
      osc = std::sin(arg);
      break;
    case BasisKind::Cosine:
      osc = std::cos(arg);
      break;
    case BasisKind::SineSq: {
      const double s = std::sin(arg);
      osc = s * s;
      break;
    }
    case BasisKind::CosineSq: {
      const double c = std::cos(arg);
      osc = c * c;
      break;
    }
  }
  return term.decayPower == 0.0 ? osc : osc / std::pow(t, term.decayPower);
}

// Gaussian elimination with partial pivoting on the (k+1)x(k+1) normal
// system; A is row-major, solved in place. Returns false when a pivot
// collapses (rank deficiency).
bool solve_inplace(std::vector<double>& A, std::vector<double>& b, int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r * n + col]) > std::abs(A[pivot * n + col])) pivot = r;
    if (std::abs(A[pivot * n + col]) < 1e-12) return false;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(A[col * n + c], A[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    const double inv = 1.0 / A[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = A[r * n + col] * inv;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    double s = b[col];
    for (int c = col + 1; c < n; ++c) s -= A[col * n + c] * b[c];
    b[col] = s / A[col * n + col];
  }
  return true;
}

}  // namespace

double eval_model(const AsymptoticModel& model, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("eval_model: t must be > 0");
  if (model.amplitudes.size() != model.terms.size())
    throw std::invalid_argument("eval_model: amplitude/term count mismatch");
  double v = model.constant;
  for (size_t i = 0; i < model.terms.size(); ++i)
    v += model.amplitudes[i] * basis_value(model.terms[i], t);
  return v;
}

FitReport fit_tail(const MeasureSeries& series, const std::vector<BasisTerm>& basis,
                   int t0, int t1) {
  std::vector<const SeriesSample*> window;
  for (const auto& s : series.samples)
    if (s.t >= t0 && s.t <= t1 && !s.flagged && s.t > 0) window.push_back(&s);
  const int k = static_cast<int>(basis.size());
  const int n = k + 1;  // constant column first
  if (static_cast<int>(window.size()) < k + 2)
    throw std::invalid_argument("fit_tail: window holds too few samples");

  const int rows = static_cast<int>(window.size());
  std::vector<double> design(static_cast<size_t>(rows) * n);
  for (int r = 0; r < rows; ++r) {
    const double t = window[r]->t;
    design[r * n] = 1.0;
    for (int c = 0; c < k; ++c) design[r * n + c + 1] = basis_value(basis[c], t);
  }

  // Equilibrate columns to unit Euclidean norm before forming the normal
  // equations; the decaying columns otherwise differ by many orders.
  std::vector<double> scale(n, 0.0);
  for (int c = 0; c < n; ++c) {
    double s = 0.0;
    for (int r = 0; r < rows; ++r) s += design[r * n + c] * design[r * n + c];
    s = std::sqrt(s);
    if (s < 1e-300) throw std::invalid_argument("fit_tail: zero basis column");
    scale[c] = 1.0 / s;
    for (int r = 0; r < rows; ++r) design[r * n + c] *= scale[c];
  }

  std::vector<double> ata(static_cast<size_t>(n) * n, 0.0), aty(n, 0.0);
  for (int r = 0; r < rows; ++r) {
    const double y = window[r]->value;
    for (int i = 0; i < n; ++i) {
      aty[i] += design[r * n + i] * y;
      for (int j = 0; j < n; ++j) ata[i * n + j] += design[r * n + i] * design[r * n + j];
    }
  }
  if (!solve_inplace(ata, aty, n))
    throw std::invalid_argument("fit_tail: rank-deficient basis on this window");

  FitReport report;
  report.t0 = t0;
  report.t1 = t1;
  report.sampleCount = rows;
  report.model.constant = aty[0] * scale[0];
  report.model.terms = basis;
  report.model.amplitudes.resize(k);
  for (int c = 0; c < k; ++c) report.model.amplitudes[c] = aty[c + 1] * scale[c + 1];

  double ss = 0.0, worst = 0.0;
  for (const auto* s : window) {
    const double r = s->value - eval_model(report.model, s->t);
    ss += r * r;
    worst = std::max(worst, std::abs(r));
  }
  report.rmsResidual = std::sqrt(ss / rows);
  report.maxResidual = worst;
  return report;
}

double tail_constant(const MeasureSeries& series, int t0, int t1) {
  double sum = 0.0;
  int count = 0;
  for (const auto& s : series.samples)
    if (s.t >= t0 && s.t <= t1 && !s.flagged) {
      sum += s.value;
      ++count;
    }
  if (count == 0) throw std::invalid_argument("tail_constant: empty window");
  return sum / count;
}

}  // namespace bellwalk

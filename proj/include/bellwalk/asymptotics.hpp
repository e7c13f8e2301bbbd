#pragma once

#include <vector>

#include "bellwalk/measures.hpp"

namespace bellwalk {

enum class BasisKind { Sine, Cosine, SineSq, CosineSq };

// One oscillatory tail term: basis(omega * t + phase) / t^decayPower.
struct BasisTerm {
  BasisKind kind = BasisKind::Cosine;
  double angularFrequency = 0.0;
  double phase = 0.0;
  double decayPower = 0.0;
};

// constant + sum_i amplitudes[i] * term_i(t).
struct AsymptoticModel {
  double constant = 0.0;
  std::vector<BasisTerm> terms;
  std::vector<double> amplitudes;
};

// Evaluate the model at t > 0 (decaying terms are singular at t = 0).
double eval_model(const AsymptoticModel& model, double t);

struct FitReport {
  AsymptoticModel model;
  double rmsResidual = 0.0;
  double maxResidual = 0.0;
  int t0 = 0, t1 = 0;
  int sampleCount = 0;
};

// Linear least squares of the series samples with t0 <= t <= t1 against
// {1} + basis columns, via column-equilibrated normal equations and Gaussian
// elimination with partial pivoting. Throws std::invalid_argument when the
// window holds fewer than |basis| + 2 usable samples or the system is
// rank-deficient.
FitReport fit_tail(const MeasureSeries& series, const std::vector<BasisTerm>& basis,
                   int t0, int t1);

// Arithmetic mean of the samples with t0 <= t <= t1; throws on an empty window.
double tail_constant(const MeasureSeries& series, int t0, int t1);

}  // namespace bellwalk

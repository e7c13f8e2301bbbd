#include "bellwalk/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bellwalk/threads.hpp"

namespace bellwalk {

namespace {

constexpr double kDivergenceFloor = 1e-300;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
struct GaussLegendre {
  std::vector<double> nodes, weights;
};

GaussLegendre gauss_legendre(int n) {
  GaussLegendre out;
  out.nodes.resize(n);
  out.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess for the i-th root (descending order).
    double x = std::cos(kTau / 2.0 * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    out.nodes[i] = x;
    out.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return out;
}

Mat entropy_input_guard(Mat rho) {
  // Freshly accumulated states carry trace 1 only to rounding; fail loudly if
  // the drift is beyond rounding (a logic bug, not noise).
  const double tr = trace(rho).real();
  if (std::abs(tr - 1.0) > 1e-10)
    throw std::invalid_argument("entropy: state trace must be 1");
  return rho;
}

double entropy2_of(const cplx& m00, const cplx& m01, const cplx& m11) {
  Mat M(2);
  M(0, 0) = m00;
  M(0, 1) = m01;
  M(1, 0) = std::conj(m01);
  M(1, 1) = m11;
  return von_neumann_entropy(entropy_input_guard(M));
}

}  // namespace

GridDistribution probability_grid(const WalkState& state) {
  const int t = state.t;
  GridDistribution grid;
  grid.t = t;
  grid.entries.reserve(2 * t + 2);
  for (int k = 0; k <= t; ++k) {
    const int m = state.site_m(k);
    double p = std::norm(state.a0[k]) + std::norm(state.a3[k]);
    if (m == 0)  // even t: the origin belongs to both diagonals
      p += std::norm(state.a1[k]) + std::norm(state.a2[k]);
    grid.entries.push_back({m, m, p});
  }
  for (int k = 0; k <= t; ++k) {
    const int m = state.site_m(k);
    if (m == 0) continue;  // merged above
    grid.entries.push_back({m, -m, std::norm(state.a1[k]) + std::norm(state.a2[k])});
  }
  std::sort(grid.entries.begin(), grid.entries.end(),
            [](const GridEntry& a, const GridEntry& b) {
              return a.m != b.m ? a.m < b.m : a.n < b.n;
            });
  return grid;
}

double site_entanglement(const WalkState& state, int m, int n, SiteQubit keep) {
  const auto v = site_spin_vector(state, m, n);
  if (!v) throw std::domain_error("site_entanglement: site not on the lattice");
  const double p = bellwalk::norm_squared(*v);
  if (p < kSiteProbThreshold)
    throw std::domain_error("site_entanglement: site probability below threshold");
  SpinVector psi = *v;
  const double inv = 1.0 / std::sqrt(p);
  for (auto& c : psi) c *= inv;
  if (keep == SiteQubit::KeepA)
    return entropy2_of(std::norm(psi[0]) + std::norm(psi[1]),
                       psi[0] * std::conj(psi[2]) + psi[1] * std::conj(psi[3]),
                       std::norm(psi[2]) + std::norm(psi[3]));
  return entropy2_of(std::norm(psi[0]) + std::norm(psi[2]),
                     psi[0] * std::conj(psi[1]) + psi[2] * std::conj(psi[3]),
                     std::norm(psi[1]) + std::norm(psi[3]));
}

Mat reduced_spin_density(const WalkState& state) {
  const int t = state.t;
  Mat rho(4);
  for (int k = 0; k <= t; ++k) {
    rho(0, 0) += std::norm(state.a0[k]);
    rho(3, 3) += std::norm(state.a3[k]);
    rho(0, 3) += state.a0[k] * std::conj(state.a3[k]);
    rho(1, 1) += std::norm(state.a1[k]);
    rho(2, 2) += std::norm(state.a2[k]);
    rho(1, 2) += state.a1[k] * std::conj(state.a2[k]);
  }
  if (t % 2 == 0) {
    // The origin site carries both component pairs; their cross terms survive
    // the position trace only there. Accumulate into the upper triangle, which
    // the mirror loop below treats as authoritative.
    const int k = t / 2;
    rho(0, 1) += state.a0[k] * std::conj(state.a1[k]);
    rho(0, 2) += state.a0[k] * std::conj(state.a2[k]);
    rho(1, 3) += state.a1[k] * std::conj(state.a3[k]);
    rho(2, 3) += state.a2[k] * std::conj(state.a3[k]);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) rho(j, i) = std::conj(rho(i, j));
  return rho;
}

Mat reduce_spin_density(const Mat& rho, EntropyObservable obs) {
  if (rho.dim() != 4)
    throw std::invalid_argument("reduce_spin_density: expected a 4x4 state");
  Mat M(2);
  switch (obs) {
    case EntropyObservable::SectorLabel:
      M(0, 0) = rho(0, 0) + rho(3, 3);
      M(1, 1) = rho(1, 1) + rho(2, 2);
      M(0, 1) = rho(0, 1) + rho(3, 2);
      break;
    case EntropyObservable::CoinQubit:
      M(0, 0) = rho(0, 0) + rho(2, 2);
      M(1, 1) = rho(1, 1) + rho(3, 3);
      M(0, 1) = rho(0, 1) + rho(2, 3);
      break;
    default:
      throw std::invalid_argument("reduce_spin_density: observable has no 2x2 reduction");
  }
  M(1, 0) = std::conj(M(0, 1));
  return M;
}

MeasureSeries spin_position_entanglement(const SpinVector& spin,
                                         const CoinParams& params, int T,
                                         EntropyObservable obs) {
  if (T < 0) throw std::invalid_argument("spin_position_entanglement: T must be >= 0");
  MeasureSeries series;
  series.label = obs == EntropyObservable::FullSpin      ? "E[full-spin]"
                 : obs == EntropyObservable::CoinQubit   ? "E[coin-qubit]"
                                                         : "E[sector]";
  series.samples.resize(T + 1);
  auto& samples = series.samples;
  parallel_fill(T + 1, [&](int t) {
    const WalkState st = assemble_from_tables(fg_tables(params, t), spin);
    const Mat rho = reduced_spin_density(st);
    const double e = obs == EntropyObservable::FullSpin
                         ? von_neumann_entropy(entropy_input_guard(rho))
                         : von_neumann_entropy(
                               entropy_input_guard(reduce_spin_density(rho, obs)));
    samples[t] = SeriesSample{t, e, false};
  });
  return series;
}

double entangling_power(const CoinParams& params, int t, const QuadratureSpec& quad) {
  if (t < 0) throw std::invalid_argument("entangling_power: t must be >= 0");
  if (quad.nTheta < 2 || quad.nAlpha < 2)
    throw std::invalid_argument("entangling_power: need at least 2 nodes per axis");

  // The state is linear in the initial spin, so evolve the four basis spins
  // once and sample arbitrary products through the sesquilinear site sums
  // TT[i][j] = sum_sites |v_i(site)><v_j(site)|. Then rho~(s) =
  // sum_{ij} s_i conj(s_j) TT[i][j] costs O(1) per quadrature sample.
  const FGTables tab = fg_tables(params, t);
  std::array<WalkState, 4> basis;
  for (int i = 0; i < 4; ++i) {
    SpinVector e{};
    e[i] = 1.0;
    basis[i] = assemble_from_tables(tab, e);
  }

  std::array<std::array<Mat, 4>, 4> TT;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) TT[i][j] = Mat(4);
  auto accumulate_pair = [&TT, &basis](int k, bool diagonal_family) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Mat& M = TT[i][j];
        if (diagonal_family) {
          M(0, 0) += basis[i].a0[k] * std::conj(basis[j].a0[k]);
          M(0, 3) += basis[i].a0[k] * std::conj(basis[j].a3[k]);
          M(3, 0) += basis[i].a3[k] * std::conj(basis[j].a0[k]);
          M(3, 3) += basis[i].a3[k] * std::conj(basis[j].a3[k]);
        } else {
          M(1, 1) += basis[i].a1[k] * std::conj(basis[j].a1[k]);
          M(1, 2) += basis[i].a1[k] * std::conj(basis[j].a2[k]);
          M(2, 1) += basis[i].a2[k] * std::conj(basis[j].a1[k]);
          M(2, 2) += basis[i].a2[k] * std::conj(basis[j].a2[k]);
        }
      }
  };
  auto accumulate_origin_cross = [&TT, &basis](int k) {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Mat& M = TT[i][j];
        M(0, 1) += basis[i].a0[k] * std::conj(basis[j].a1[k]);
        M(0, 2) += basis[i].a0[k] * std::conj(basis[j].a2[k]);
        M(3, 1) += basis[i].a3[k] * std::conj(basis[j].a1[k]);
        M(3, 2) += basis[i].a3[k] * std::conj(basis[j].a2[k]);
        M(1, 0) += basis[i].a1[k] * std::conj(basis[j].a0[k]);
        M(2, 0) += basis[i].a2[k] * std::conj(basis[j].a0[k]);
        M(1, 3) += basis[i].a1[k] * std::conj(basis[j].a3[k]);
        M(2, 3) += basis[i].a2[k] * std::conj(basis[j].a3[k]);
      }
  };
  for (int k = 0; k <= t; ++k) {
    accumulate_pair(k, true);
    accumulate_pair(k, false);
  }
  if (t % 2 == 0) accumulate_origin_cross(t / 2);

  const GaussLegendre gl = gauss_legendre(quad.nTheta);
  const double wAlpha = kTau / quad.nAlpha;
  const int nA = quad.nAlpha;

  // One outer chunk per u1 node, accumulated in index order afterwards so the
  // result is bit-stable under any worker count.
  std::vector<double> partial(quad.nTheta, 0.0);
  parallel_fill(quad.nTheta, [&](int i1) {
    const double u1 = gl.nodes[i1];
    const double c1 = std::sqrt((1.0 + u1) / 2.0);
    const double s1 = std::sqrt((1.0 - u1) / 2.0);
    double acc = 0.0;
    for (int i2 = 0; i2 < quad.nTheta; ++i2) {
      const double u2 = gl.nodes[i2];
      const double c2 = std::sqrt((1.0 + u2) / 2.0);
      const double s2 = std::sqrt((1.0 - u2) / 2.0);
      for (int j1 = 0; j1 < nA; ++j1) {
        const cplx e1 = std::polar(1.0, kTau * j1 / nA);
        for (int j2 = 0; j2 < nA; ++j2) {
          const cplx e2 = std::polar(1.0, kTau * j2 / nA);
          const SpinVector s = {c1 * c2, c1 * s2 * e2, s1 * e1 * c2,
                                s1 * s2 * e1 * e2};
          Mat rho(4);
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
              const cplx w = s[i] * std::conj(s[j]);
              if (w == cplx{}) continue;
              const Mat& M = TT[i][j];
              for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) rho(r, c) += w * M(r, c);
            }
          acc += gl.weights[i2] * (1.0 - purity(rho));
        }
      }
    }
    partial[i1] = gl.weights[i1] * acc * wAlpha * wAlpha;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  // Total measure: int du1 du2 = 4 times int dalpha1 dalpha2 = 4 pi^2.
  constexpr double kMeasure = 4.0 * kTau * kTau;  // 16 pi^2
  return total / kMeasure;
}

namespace {

double renyi_prefactor_check(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument(std::string(who) + ": alpha must lie in (0, 1)");
  return alpha;
}

double safe_log_arg(double value, const char* who) {
  if (value <= kDivergenceFloor)
    throw std::domain_error(std::string(who) + ": divergence (vanishing trace argument)");
  return value;
}

}  // namespace

double srd(const Mat& rho, const Mat& sigma, double alpha) {
  renyi_prefactor_check(alpha, "srd");
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("srd: dimension mismatch");
  const Mat X = mat_power(sigma, (1.0 - alpha) / (2.0 * alpha));
  Mat S = X * rho * X;
  for (int i = 0; i < S.dim(); ++i)
    for (int j = i + 1; j < S.dim(); ++j) {
      const cplx mean = 0.5 * (S(i, j) + std::conj(S(j, i)));
      S(i, j) = mean;
      S(j, i) = std::conj(mean);
    }
  const double num = trace(mat_power(S, alpha)).real();
  const double den = trace(rho).real();
  return std::log(safe_log_arg(num / den, "srd")) / (alpha - 1.0);
}

double rre(const Mat& rho, const Mat& sigma, double alpha) {
  renyi_prefactor_check(alpha, "rre");
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("rre: dimension mismatch");
  const double num = trace(mat_power(rho, alpha) * mat_power(sigma, 1.0 - alpha)).real();
  const double den = trace(rho).real();
  return std::log(safe_log_arg(num / den, "rre")) / (alpha - 1.0);
}

double classical_renyi(const std::vector<double>& p, const std::vector<double>& q,
                       double alpha) {
  if (alpha == 1.0) throw std::invalid_argument("classical_renyi: alpha must differ from 1");
  if (p.size() != q.size())
    throw std::invalid_argument("classical_renyi: length mismatch");
  double sum = 0.0, total = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0)
      throw std::invalid_argument("classical_renyi: negative entry");
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0)
      throw std::invalid_argument("classical_renyi: support of p exceeds support of q");
    sum += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
    total += p[i];
  }
  if (total <= 0.0) throw std::invalid_argument("classical_renyi: p sums to zero");
  return std::log(safe_log_arg(sum / total, "classical_renyi")) / (alpha - 1.0);
}

SpinVector renyi_reference_spin() {
  const double r = 1.0 / std::sqrt(2.0);
  return {cplx(r, 0.0), cplx(0.0, r), 0.0, 0.0};
}

RenyiSeriesPair renyi_series(const SpinVector& spin, const CoinParams& params,
                             double alpha, int T, bool includeT0) {
  renyi_prefactor_check(alpha, "renyi_series");
  if (T < 1) throw std::invalid_argument("renyi_series: T must be >= 1");
  if (std::abs(std::sqrt(bellwalk::norm_squared(spin)) - 1.0) > 1e-9)
    throw std::invalid_argument("renyi_series: spin must be normalized");

  RenyiSeriesPair out;
  out.srd.label = "srd";
  out.rre.label = "rre";
  const int base = includeT0 ? 1 : 0;
  out.srd.samples.resize(T + base);
  out.rre.samples.resize(T + base);
  if (includeT0) {
    out.srd.samples[0] = SeriesSample{0, 0.0, false};
    out.rre.samples[0] = SeriesSample{0, 0.0, false};
  }
  auto& srd_samples = out.srd.samples;
  auto& rre_samples = out.rre.samples;
  parallel_fill(T, [&](int idx) {
    const int t = idx + 1;
    const WalkState st = assemble_from_tables(fg_tables(params, t), spin);
    const Mat rho = reduced_spin_density(st);

    // <psi0| rho |psi0>
    cplx ip{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) ip += std::conj(spin[i]) * rho(i, j) * spin[j];
    // sigma is the projector onto psi0, so sigma^beta = sigma for beta > 0 and
    // the sandwiched divergence collapses to (alpha/(alpha-1)) ln <psi0|rho|psi0>.
    SeriesSample s{t, 0.0, false};
    if (ip.real() <= kDivergenceFloor) {
      s.flagged = true;
    } else {
      s.value = alpha / (alpha - 1.0) * std::log(ip.real());
    }
    srd_samples[base + idx] = s;

    const Mat rho_a = mat_power(rho, alpha);
    cplx ipa{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) ipa += std::conj(spin[i]) * rho_a(i, j) * spin[j];
    SeriesSample r{t, 0.0, false};
    if (ipa.real() <= kDivergenceFloor) {
      r.flagged = true;
    } else {
      r.value = std::log(ipa.real()) / (alpha - 1.0);
    }
    rre_samples[base + idx] = r;
  });
  return out;
}

RenyiSeriesPair renyi_series(const CoinParams& params, double alpha, int T,
                             bool includeT0) {
  return renyi_series(renyi_reference_spin(), params, alpha, T, includeT0);
}

}  // namespace bellwalk

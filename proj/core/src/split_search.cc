/*
 * Copyright 2026 The polygam Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "split_search.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "polygam/errors.h"
#include "polygam/loss.h"

namespace polygam {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Moment slots per coarse bin: g * t^j for j <= 3, h * t^j for j <= 6.
constexpr int kGradMoments = kMaxDegree + 1;
constexpr int kHessMoments = 2 * kMaxDegree + 1;

using Quad = std::array<double, 3>;

double EvalQuad(const Quad& q, double t) { return q[0] + t * (q[1] + t * q[2]); }

double MinOnInterval(const Quad& q, double t0, double t1) {
  double m = std::min(EvalQuad(q, t0), EvalQuad(q, t1));
  if (q[2] > 0) {
    const double tv = -q[1] / (2 * q[2]);
    if (tv > t0 && tv < t1) m = std::min(m, EvalQuad(q, tv));
  }
  return m;
}

double MaxAbsOnInterval(const Quad& q, double t0, double t1) {
  double m = std::max(std::abs(EvalQuad(q, t0)), std::abs(EvalQuad(q, t1)));
  if (q[2] != 0) {
    const double tv = -q[1] / (2 * q[2]);
    if (tv > t0 && tv < t1) m = std::max(m, std::abs(EvalQuad(q, tv)));
  }
  return m;
}

bool StepFeasible(const Quad& a, const Quad& b, double gamma, double t0,
                  double t1) {
  const Quad q{a[0] + gamma * b[0], a[1] + gamma * b[1], a[2] + gamma * b[2]};
  const double scale = MaxAbsOnInterval(a, t0, t1) +
                       std::abs(gamma) * MaxAbsOnInterval(b, t0, t1);
  return MinOnInterval(q, t0, t1) >= -1e-12 * scale;
}

void PushRoots(double c0, double c1, double c2, std::vector<double>& out) {
  if (c2 == 0) {
    if (c1 != 0) out.push_back(-c0 / c1);
    return;
  }
  const double disc = c1 * c1 - 4 * c2 * c0;
  if (disc < 0) return;
  const double s = std::sqrt(disc);
  // Numerically stable pair of roots.
  const double q = -0.5 * (c1 + (c1 >= 0 ? s : -s));
  if (q != 0) {
    out.push_back(q / c2);
    out.push_back(c0 / q);
  } else {
    out.push_back(0.0);
  }
}

// Largest gamma >= 0 such that a(t) + gamma * b(t) >= 0 on [t0, t1], given
// that gamma = 0 is feasible. The bound is the infimum of a / (-b) over the
// points where b < 0; its interior extrema are roots of a'b - ab', which is
// at most quadratic. Shared-root corner cases fall back to bisection.
double MaxStep(const Quad& a, const Quad& b, double t0, double t1) {
  if (b[0] == 0 && b[1] == 0 && b[2] == 0) return kInf;
  std::vector<double> points{t0, t1};
  if (a[2] != 0) points.push_back(-a[1] / (2 * a[2]));
  if (b[2] != 0) points.push_back(-b[1] / (2 * b[2]));
  PushRoots(a[1] * b[0] - a[0] * b[1], 2 * (a[2] * b[0] - a[0] * b[2]),
            a[2] * b[1] - a[1] * b[2], points);

  double best = kInf;
  for (double t : points) {
    if (!(t >= t0 && t <= t1)) continue;
    const double bv = EvalQuad(b, t);
    if (bv < 0) best = std::min(best, std::max(EvalQuad(a, t), 0.0) / -bv);
  }
  if (best == kInf || StepFeasible(a, b, best, t0, t1)) return best;
  double lo = 0.0;
  double hi = best;
  for (int iter = 0; iter < 100 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (StepFeasible(a, b, mid, t0, t1) ? lo : hi) = mid;
  }
  return lo;
}

Interval StepRange(const Quad& a, const Quad& b, double t0, double t1) {
  const Quad neg_b{-b[0], -b[1], -b[2]};
  return {-MaxStep(a, neg_b, t0, t1), MaxStep(a, b, t0, t1)};
}

Quad FirstThree(const Poly& p) { return {p[0], p[1], p[2]}; }

// Feasible range for one shifted monomial nu * gamma * (t + shift)^d applied
// to coarse pieces [first, last] of feature k.
Interval PieceRange(const ParameterStore& store, int output, std::size_t k,
                    int d, std::size_t first, std::size_t last,
                    double origin, double nu) {
  const FeatureConstraint& fc = store.constraints().feature(k);
  const FeatureBins& bins = store.bins(k);
  const ShapeFunction& shape = store.shape(output, k);
  Interval range;
  for (std::size_t b = first; b <= last; ++b) {
    const double lower = bins.coarse_lower(b);
    const double x_lo = std::max(lower, bins.min_value);
    const double x_hi = std::min(bins.coarse_upper(b), bins.max_value);
    if (x_hi < x_lo) continue;
    const double t0 = x_lo - lower;
    const double t1 = x_hi - lower;
    const double shift = lower - origin;
    const Poly& p = shape.pieces[b];
    if (fc.monotone != 0) {
      const double m = fc.monotone;
      const Quad a{m * p[1], m * 2 * p[2], m * 3 * p[3]};
      const Quad upd = FirstThree(ExpandShiftedMonomial(d - 1, shift, m * nu * d));
      range = range.Intersect(StepRange(a, upd, t0, t1));
    }
    if (fc.curvature != 0 && d >= 2) {
      const double c = fc.curvature;
      const Quad a{c * 2 * p[2], c * 6 * p[3], 0.0};
      const Quad upd =
          FirstThree(ExpandShiftedMonomial(d - 2, shift, c * nu * d * (d - 1)));
      range = range.Intersect(StepRange(a, upd, t0, t1));
    }
  }
  // gamma = 0 is always admissible; rounding must not exclude it.
  range.lo = std::min(range.lo, 0.0);
  range.hi = std::max(range.hi, 0.0);
  return range;
}

SideIntervals FeasibleForEdge(const ParameterStore& store, int output,
                              std::size_t k, int d, std::size_t edge,
                              double nu) {
  const FeatureBins& bins = store.bins(k);
  const double u = bins.coarse_edges[edge];
  return {PieceRange(store, output, k, d, 0, edge, u, nu),
          PieceRange(store, output, k, d, edge + 1,
                     bins.num_coarse_bins() - 1, u, nu)};
}

bool IsConstrained(const FeatureConstraint& fc) {
  return fc.monotone != 0 || fc.curvature != 0;
}

}  // namespace

ParamSums ParamGradients(std::span<const double> g, std::span<const double> h,
                         std::span<const double> x, double threshold, int d) {
  ParamSums sums;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double z = x[n] - threshold;
    SideSums& side = x[n] < threshold ? sums.left : sums.right;
    side.g += g[n] * internal::IntPow(z, d);
    side.h += h[n] * internal::IntPow(z, 2 * d);
    ++side.count;
  }
  return sums;
}

double LeafValue(double sum_g, double sum_h, double l1, double l2) {
  const double shrunk =
      std::copysign(std::max(std::abs(sum_g) - l1, 0.0), sum_g);
  return -shrunk / std::max(sum_h + l2, kHessianFloor);
}

double SideGain(double sum_g, double sum_h, double gamma) {
  return -(gamma * sum_g + 0.5 * gamma * gamma * sum_h);
}

double CandidateGain(const ParamSums& sums, double l1, double l2) {
  return SideGain(sums.left.g, sums.left.h,
                  LeafValue(sums.left.g, sums.left.h, l1, l2)) +
         SideGain(sums.right.g, sums.right.h,
                  LeafValue(sums.right.g, sums.right.h, l1, l2));
}

double CandidateGain(const SideSums& global, double l1, double l2) {
  return SideGain(global.g, global.h,
                  LeafValue(global.g, global.h, l1, l2));
}

SideIntervals FeasibleInterval(const ParameterStore& store, int output,
                               std::size_t k, int d,
                               std::optional<double> threshold, double nu) {
  const FeatureConstraint& fc = store.constraints().feature(k);
  if (!IsConstrained(fc) || d == 0) return {};
  const FeatureBins& bins = store.bins(k);
  if (!threshold) {
    const Interval all = PieceRange(store, output, k, d, 0,
                                    bins.num_coarse_bins() - 1,
                                    bins.min_value, nu);
    return {all, all};
  }
  const auto it = std::lower_bound(bins.coarse_edges.begin(),
                                   bins.coarse_edges.end(), *threshold);
  if (it == bins.coarse_edges.end() || *it != *threshold) {
    throw Error("threshold is not a coarse-grid edge");
  }
  return FeasibleForEdge(store, output, k, d,
                         static_cast<std::size_t>(it - bins.coarse_edges.begin()),
                         nu);
}

namespace internal {

BinnedColumn BinColumn(std::span<const double> x, const FeatureBins& bins) {
  BinnedColumn col;
  col.fine_bin.resize(x.size());
  col.coarse_bin.resize(x.size());
  col.local_t.resize(x.size());
  col.fine_count.assign(bins.num_fine_bins(), 0);
  col.coarse_count.assign(bins.num_coarse_bins(), 0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    const std::size_t fb = AssignBin(x[n], bins.fine_edges);
    const std::size_t cb = AssignBin(x[n], bins.coarse_edges);
    col.fine_bin[n] = static_cast<std::uint32_t>(fb);
    col.coarse_bin[n] = static_cast<std::uint32_t>(cb);
    col.local_t[n] = x[n] - bins.coarse_lower(cb);
    ++col.fine_count[fb];
    ++col.coarse_count[cb];
  }
  return col;
}

namespace {

struct CandidateScan {
  const SearchSettings& settings;
  SplitCandidate best;

  void Offer(const SplitCandidate& c) {
    if (std::isfinite(c.gain) && c.gain > best.gain) best = c;
  }
};

// Shifts per-bin moments sum w * t^j from the lower edge to the upper edge:
// sum w * (t - width)^j.
void ShiftMoments(const double* lower, int count, double width, double* out) {
  for (int j = 0; j < count; ++j) {
    double acc = 0.0;
    double power = 1.0;  // (-width)^(j - i), from i = j down
    for (int i = j; i >= 0; --i) {
      acc += Binomial(j, i) * power * lower[i];
      power *= -width;
    }
    out[j] = acc;
  }
}

// sum over bins of sum_j C(n, j) shift^(n - j) moment_j.
double ShiftedSum(const double* moments, int n, double shift) {
  double acc = 0.0;
  double power = 1.0;
  for (int j = n; j >= 0; --j) {
    acc += Binomial(n, j) * power * moments[j];
    power *= shift;
  }
  return acc;
}

}  // namespace

SplitCandidate BestFeatureCandidate(const ParameterStore& store, int output,
                                    std::size_t k, const BinnedColumn& column,
                                    std::span<const double> g,
                                    std::span<const double> h,
                                    const SearchSettings& settings) {
  const FeatureConstraint& fc = store.constraints().feature(k);
  const FeatureBins& bins = store.bins(k);
  const double nu = settings.learning_rate;
  const double l1 = settings.l1;
  const double l2 = settings.l2;
  const std::size_t n_rows = g.size();
  const std::size_t n_fine = bins.num_fine_bins();
  const std::size_t n_coarse = bins.num_coarse_bins();
  const int max_degree = fc.max_degree;
  const bool fine_splits = fc.smoothness < 0;
  const bool need_moments = max_degree >= 1;
  const bool constrained = IsConstrained(fc);

  // Histograms.
  double total_g = 0.0;
  double total_h = 0.0;
  std::vector<double> fine_g(fine_splits ? n_fine : 0, 0.0);
  std::vector<double> fine_h(fine_splits ? n_fine : 0, 0.0);
  std::vector<double> mg(need_moments ? n_coarse * kGradMoments : 0, 0.0);
  std::vector<double> mh(need_moments ? n_coarse * kHessMoments : 0, 0.0);
  const int g_moments = max_degree + 1;
  const int h_moments = 2 * max_degree + 1;
  for (std::size_t n = 0; n < n_rows; ++n) {
    const double gn = g[n];
    const double hn = h[n];
    total_g += gn;
    total_h += hn;
    if (fine_splits) {
      fine_g[column.fine_bin[n]] += gn;
      fine_h[column.fine_bin[n]] += hn;
    }
    if (need_moments) {
      const double t = column.local_t[n];
      double* pg = &mg[column.coarse_bin[n] * kGradMoments];
      double* ph = &mh[column.coarse_bin[n] * kHessMoments];
      double tp = 1.0;
      for (int j = 0; j < h_moments; ++j) {
        if (j < g_moments) pg[j] += gn * tp;
        ph[j] += hn * tp;
        tp *= t;
      }
    }
  }

  // Moments about each bin's upper edge, for bins left of a threshold.
  std::vector<double> mg_up(mg.size(), 0.0);
  std::vector<double> mh_up(mh.size(), 0.0);
  if (need_moments) {
    for (std::size_t b = 0; b + 1 < n_coarse; ++b) {
      const double width = bins.coarse_upper(b) - bins.coarse_lower(b);
      ShiftMoments(&mg[b * kGradMoments], g_moments, width,
                   &mg_up[b * kGradMoments]);
      ShiftMoments(&mh[b * kHessMoments], h_moments, width,
                   &mh_up[b * kHessMoments]);
    }
  }

  CandidateScan scan{settings, SplitCandidate{.output = output}};
  const auto feature = static_cast<int>(k);

  for (int d = 0; d <= max_degree; ++d) {
    if (d <= fc.smoothness) {
      // Global monomial (x - min)^d.
      SideSums sums;
      sums.count = n_rows;
      if (d == 0) {
        sums.g = total_g;
        sums.h = total_h;
      } else {
        for (std::size_t b = 0; b < n_coarse; ++b) {
          const double shift = bins.coarse_lower(b) - bins.min_value;
          sums.g += ShiftedSum(&mg[b * kGradMoments], d, shift);
          sums.h += ShiftedSum(&mh[b * kHessMoments], 2 * d, shift);
        }
      }
      double gamma = LeafValue(sums.g, sums.h, l1, l2);
      if (constrained && d >= 1) {
        gamma = FeasibleInterval(store, output, k, d, std::nullopt, nu)
                    .left.Clamp(gamma);
      }
      scan.Offer({.output = output,
                  .feature = feature,
                  .degree = d,
                  .kind = CandidateKind::kGlobal,
                  .gamma_left = gamma,
                  .gamma_right = gamma,
                  .gain = SideGain(sums.g, sums.h, gamma),
                  .n_left = n_rows,
                  .n_right = 0});
      continue;
    }

    if (d == 0) {
      double left_g = 0.0;
      double left_h = 0.0;
      std::size_t left_n = 0;
      for (std::size_t e = 0; e + 1 < n_fine; ++e) {
        left_g += fine_g[e];
        left_h += fine_h[e];
        left_n += column.fine_count[e];
        const std::size_t right_n = n_rows - left_n;
        if (left_n < settings.min_leaf || right_n < settings.min_leaf) continue;
        const double right_g = total_g - left_g;
        const double right_h = total_h - left_h;
        double gl = LeafValue(left_g, left_h, l1, l2);
        double gr = LeafValue(right_g, right_h, l1, l2);
        if (fc.monotone != 0 && fc.monotone * (gr - gl) < 0) {
          gl = gr = LeafValue(total_g, total_h, l1, l2);
        }
        scan.Offer({.output = output,
                    .feature = feature,
                    .degree = 0,
                    .kind = CandidateKind::kSplit,
                    .threshold = bins.fine_edges[e],
                    .gamma_left = gl,
                    .gamma_right = gr,
                    .gain = SideGain(left_g, left_h, gl) +
                            SideGain(right_g, right_h, gr),
                    .n_left = left_n,
                    .n_right = right_n});
      }
      continue;
    }

    std::size_t left_n = 0;
    for (std::size_t e = 0; e + 1 < n_coarse; ++e) {
      left_n += column.coarse_count[e];
      const std::size_t right_n = n_rows - left_n;
      if (left_n < settings.min_leaf || right_n < settings.min_leaf) continue;
      const double u = bins.coarse_edges[e];
      SideSums left;
      SideSums right;
      for (std::size_t b = 0; b <= e; ++b) {
        const double shift = bins.coarse_upper(b) - u;
        left.g += ShiftedSum(&mg_up[b * kGradMoments], d, shift);
        left.h += ShiftedSum(&mh_up[b * kHessMoments], 2 * d, shift);
      }
      for (std::size_t b = e + 1; b < n_coarse; ++b) {
        const double shift = bins.coarse_lower(b) - u;
        right.g += ShiftedSum(&mg[b * kGradMoments], d, shift);
        right.h += ShiftedSum(&mh[b * kHessMoments], 2 * d, shift);
      }
      double gl = LeafValue(left.g, left.h, l1, l2);
      double gr = LeafValue(right.g, right.h, l1, l2);
      if (constrained) {
        const SideIntervals range = FeasibleForEdge(store, output, k, d, e, nu);
        gl = range.left.Clamp(gl);
        gr = range.right.Clamp(gr);
        if (d == 1 && fc.curvature != 0 && fc.curvature * (gr - gl) < 0) {
          gl = gr = range.left.Intersect(range.right)
                        .Clamp(LeafValue(left.g + right.g, left.h + right.h,
                                         l1, l2));
        }
      }
      scan.Offer({.output = output,
                  .feature = feature,
                  .degree = d,
                  .kind = CandidateKind::kSplit,
                  .threshold = u,
                  .gamma_left = gl,
                  .gamma_right = gr,
                  .gain = SideGain(left.g, left.h, gl) +
                          SideGain(right.g, right.h, gr),
                  .n_left = left_n,
                  .n_right = right_n});
    }
  }
  return scan.best;
}

}  // namespace internal
}  // namespace polygam

// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------
//
// The witness LP  max_b min_u <w - u, b>  is a matrix game. Shifting the
// payoffs by C > max|w - u| makes them positive, and the game value v then
// solves the standard-form LP
//
//   maximize sum_u y_u   s.t.  sum_u y_u (w - u + C)_i <= 1,  y >= 0,
//
// with v = 1 / optimum. The slack rows' shadow prices times v are the
// maximising belief. The origin is feasible, so a single-phase tableau
// simplex suffices, and the tableau has one row per state rather than one
// per competing vector.

#include "lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace beampomdp::detail {

namespace {

constexpr double kPivotEps = 1e-11;

double advantage(std::span<const double> w, std::span<const std::span<const double>> others,
                 std::span<const double> b) {
  double best_other = -std::numeric_limits<double>::infinity();
  double own = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) own += w[i] * b[i];
  for (auto u : others) {
    double v = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) v += u[i] * b[i];
    best_other = std::max(best_other, v);
  }
  return own - best_other;
}

}  // namespace

std::optional<std::vector<double>> find_witness(std::span<const double> w,
                                                std::span<const std::span<const double>> others,
                                                double tolerance) {
  const std::size_t n = w.size();
  const std::size_t k = others.size();

  // Corner beliefs first: cheap and frequently enough.
  double spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double worst = std::numeric_limits<double>::infinity();
    for (auto u : others) {
      const double d = w[i] - u[i];
      worst = std::min(worst, d);
      spread = std::max(spread, std::abs(d));
    }
    if (worst > tolerance) {
      std::vector<double> corner(n, 0.0);
      corner[i] = 1.0;
      return corner;
    }
  }
  const double shift = spread + 1.0;

  // Tableau: n rows, columns [y_0..y_{k-1} | s_0..s_{n-1} | rhs].
  const std::size_t cols = k + n + 1;
  std::vector<double> tab(n * cols, 0.0);
  std::vector<double> reduced(k + n, 0.0);  // c_j - z_j
  std::vector<std::size_t> basis(n);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = tab.data() + i * cols;
    for (std::size_t u = 0; u < k; ++u) row[u] = w[i] - others[u][i] + shift;
    row[k + i] = 1.0;
    row[cols - 1] = 1.0;
    basis[i] = k + i;
  }
  for (std::size_t u = 0; u < k; ++u) reduced[u] = 1.0;
  double objective = 0.0;

  const std::size_t bland_after = 50 * (n + k);
  for (std::size_t iter = 0;; ++iter) {
    // Any feasible y bounds the game value from above: v <= 1 / objective.
    if (objective > 0.0 && 1.0 / objective - shift <= tolerance) return std::nullopt;

    std::size_t enter = reduced.size();
    if (iter < bland_after) {
      double best = kPivotEps;
      for (std::size_t j = 0; j < reduced.size(); ++j) {
        if (reduced[j] > best) {
          best = reduced[j];
          enter = j;
        }
      }
    } else {
      for (std::size_t j = 0; j < reduced.size(); ++j) {
        if (reduced[j] > kPivotEps) {
          enter = j;
          break;
        }
      }
    }
    if (enter == reduced.size()) break;  // optimal

    std::size_t leave = n;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double a = tab[i * cols + enter];
      if (a <= kPivotEps) continue;
      const double ratio = tab[i * cols + cols - 1] / a;
      if (ratio < best_ratio - 1e-15 ||
          (ratio <= best_ratio + 1e-15 && leave < n && basis[i] < basis[leave])) {
        best_ratio = std::min(best_ratio, ratio);
        leave = i;
      }
    }
    if (leave == n) break;  // unbounded cannot happen with positive payoffs

    double* prow = tab.data() + leave * cols;
    const double pivot = prow[enter];
    for (std::size_t j = 0; j < cols; ++j) prow[j] /= pivot;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == leave) continue;
      double* row = tab.data() + i * cols;
      const double factor = row[enter];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) row[j] -= factor * prow[j];
    }
    const double rc = reduced[enter];
    for (std::size_t j = 0; j < reduced.size(); ++j) reduced[j] -= rc * prow[j];
    objective += rc * prow[cols - 1];
    basis[leave] = enter;
  }

  if (!(objective > 0.0)) return std::nullopt;
  const double value = 1.0 / objective;
  if (value - shift <= tolerance) return std::nullopt;

  std::vector<double> belief(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    belief[i] = std::max(0.0, -reduced[k + i]);
    total += belief[i];
  }
  if (!(total > 0.0)) return std::nullopt;
  for (double& b : belief) b /= total;

  // The LP is solved in floating point; only a verified witness counts.
  if (advantage(w, others, belief) <= tolerance) return std::nullopt;
  return belief;
}

}  // namespace beampomdp::detail

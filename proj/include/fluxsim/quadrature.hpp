#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "fluxsim/errors.hpp"
#include "fluxsim/parallel.hpp"
#include "fluxsim/vec3.hpp"

// Adaptive tensor-product quadrature over sub-boxes of the unit cube.
//
// Fixed-order (4-point) Gauss-Legendre per cell and per axis, dyadic cell
// refinement driven by a two-level error estimate (cell value vs. sum of its
// 2^D children). Summation order is the storage order of the cell list and
// is identical for the serial and OpenMP paths, so results are bit-identical
// regardless of execution policy.

namespace fluxsim::quad {

inline constexpr double gl4_nodes[4] = {-0.8611363115940525752, -0.3399810435848562648,
                                        0.3399810435848562648, 0.8611363115940525752};
inline constexpr double gl4_weights[4] = {0.3478548451374538574, 0.6521451548625461426,
                                          0.6521451548625461426, 0.3478548451374538574};

struct QuadStats {
  std::size_t cells_evaluated = 0;
  int max_depth_reached = 0;
  int levels = 0;
  double est_error = 0.0; // absolute, same units as the integral
};

struct AdaptiveOptions {
  double tol_rel = 1e-6;   // relative to max(|integral|, abs_floor)
  double abs_floor = 0.0;  // scale floor for the relative test
  int max_depth = 30;
  std::size_t max_cells = 1'500'000;
  ExecPolicy policy = default_policy();
};

inline double norm_of(double v) { return std::abs(v); }
inline double norm_of(const Vec3& v) { return v.norm(); }

template <int D>
struct Cell {
  std::array<double, D> lo{};
  std::array<double, D> hi{};
  int depth = 0;
};

template <int D>
inline std::vector<Cell<D>> unit_grid(const std::array<int, D>& divs) {
  std::vector<Cell<D>> cells;
  std::array<int, D> idx{};
  std::size_t total = 1;
  for (int d = 0; d < D; ++d) total *= static_cast<std::size_t>(divs[d]);
  cells.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int d = 0; d < D; ++d) {
      idx[d] = static_cast<int>(rem % static_cast<std::size_t>(divs[d]));
      rem /= static_cast<std::size_t>(divs[d]);
    }
    Cell<D> c;
    for (int d = 0; d < D; ++d) {
      c.lo[d] = static_cast<double>(idx[d]) / divs[d];
      c.hi[d] = static_cast<double>(idx[d] + 1) / divs[d];
    }
    cells.push_back(c);
  }
  return cells;
}

// Order-4 tensor Gauss-Legendre over one cell.
template <int D, class Value, class F>
Value gl_cell(const Cell<D>& cell, F&& f) {
  std::size_t npts = 1;
  for (int d = 0; d < D; ++d) npts *= 4;
  double scale = 1.0;
  for (int d = 0; d < D; ++d) scale *= 0.5 * (cell.hi[d] - cell.lo[d]);
  Value sum{};
  for (std::size_t k = 0; k < npts; ++k) {
    std::array<double, D> u;
    double w = 1.0;
    std::size_t rem = k;
    for (int d = 0; d < D; ++d) {
      const int j = static_cast<int>(rem % 4);
      rem /= 4;
      const double mid = 0.5 * (cell.lo[d] + cell.hi[d]);
      const double half = 0.5 * (cell.hi[d] - cell.lo[d]);
      u[d] = mid + half * gl4_nodes[j];
      w *= gl4_weights[j];
    }
    sum += f(u) * w;
  }
  return sum * scale;
}

template <int D>
inline std::array<Cell<D>, (1u << D)> split_cell(const Cell<D>& cell) {
  std::array<Cell<D>, (1u << D)> children;
  for (unsigned k = 0; k < (1u << D); ++k) {
    Cell<D> c;
    c.depth = cell.depth + 1;
    for (int d = 0; d < D; ++d) {
      const double mid = 0.5 * (cell.lo[d] + cell.hi[d]);
      if (k & (1u << d)) {
        c.lo[d] = mid;
        c.hi[d] = cell.hi[d];
      } else {
        c.lo[d] = cell.lo[d];
        c.hi[d] = mid;
      }
    }
    children[k] = c;
  }
  return children;
}

// f maps unit-cube coordinates to the integrand value (the caller folds in
// any region mapping and Jacobian). Starts from `cells` and refines until
// the summed two-level error estimate is below tol_rel * max(|I|, abs_floor).
template <int D, class Value, class F>
Value integrate_adaptive(std::vector<Cell<D>> cells, F&& f, const AdaptiveOptions& opt,
                         QuadStats* stats_out = nullptr) {
  struct Entry {
    Cell<D> cell;
    Value fine{};
    double err = 0.0;
    bool fresh = true;
  };
  std::vector<Entry> entries;
  entries.reserve(cells.size());
  for (const auto& c : cells) entries.push_back(Entry{c, Value{}, 0.0, true});

  QuadStats stats;
  double prev_total_norm = 0.0;
  bool have_prev = false;

  for (;;) {
    // Evaluate fresh cells; each slot is owned by one index.
    std::vector<std::size_t> fresh;
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (entries[i].fresh) fresh.push_back(i);
    parallel_for(fresh.size(), opt.policy, [&](std::size_t k) {
      Entry& e = entries[fresh[k]];
      const Value coarse = gl_cell<D, Value>(e.cell, f);
      Value fine{};
      for (const auto& child : split_cell<D>(e.cell)) fine += gl_cell<D, Value>(child, f);
      e.fine = fine;
      e.err = norm_of(fine - coarse);
      e.fresh = false;
    });
    stats.cells_evaluated += fresh.size();
    stats.levels += 1;

    // Fixed-order reduction.
    Value total{};
    double sum_err = 0.0;
    for (const auto& e : entries) {
      total += e.fine;
      sum_err += e.err;
      stats.max_depth_reached = std::max(stats.max_depth_reached, e.cell.depth);
    }

    const double total_norm = norm_of(total);
    const double budget = opt.tol_rel * std::max(total_norm, opt.abs_floor);
    if (sum_err <= budget) {
      stats.est_error = sum_err;
      if (stats_out) *stats_out = stats;
      return total;
    }

    // Refine every cell whose estimate exceeds its equal share of the
    // budget; the set is provably nonempty while the sum is over budget.
    const double threshold = budget / (2.0 * static_cast<double>(entries.size()));
    std::vector<Entry> next;
    next.reserve(entries.size() + 8);
    bool refined_any = false;
    for (const auto& e : entries) {
      if (e.err > threshold && e.cell.depth < opt.max_depth) {
        for (const auto& child : split_cell<D>(e.cell)) next.push_back(Entry{child, Value{}, 0.0, true});
        refined_any = true;
      } else {
        next.push_back(e);
      }
    }
    if (!refined_any || next.size() > opt.max_cells) {
      throw ConvergenceError("quadrature did not converge to tolerance " +
                                 std::to_string(opt.tol_rel) + " (error estimate " +
                                 std::to_string(sum_err) + ", budget " + std::to_string(budget) + ")",
                             have_prev ? prev_total_norm : total_norm, total_norm);
    }
    prev_total_norm = total_norm;
    have_prev = true;
    entries = std::move(next);
  }
}

template <int D, class Value, class F>
Value integrate_unit_cube(const std::array<int, D>& divs, F&& f, const AdaptiveOptions& opt,
                          QuadStats* stats_out = nullptr) {
  return integrate_adaptive<D, Value>(unit_grid<D>(divs), std::forward<F>(f), opt, stats_out);
}

} // namespace fluxsim::quad

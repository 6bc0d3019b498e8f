#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace catalyx {

struct SimplexResult {
  bool feasible = false;
  std::vector<double> x;
};

/// Dense two-phase primal simplex for  min c^T x  s.t.  A x >= b, x >= 0.
/// Double precision; callers must re-certify any answer exactly.
class SimplexSolver {
 public:
  SimplexResult solve(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                      const std::vector<double>& c) {
    const std::size_t rows = a.size();
    const std::size_t nvar = c.size();
    // standard form: A x - s = b; rows with b <= 0 are flipped so rhs >= 0
    // columns: [x (nvar)] [slack (rows)] [artificial (as needed)]
    std::size_t nart = 0;
    std::vector<int> art_of_row(rows, -1);
    for (std::size_t r = 0; r < rows; ++r)
      if (b[r] > 0) art_of_row[r] = static_cast<int>(nart++);
    const std::size_t ncol = nvar + rows + nart;

    std::vector<std::vector<double>> t(rows, std::vector<double>(ncol + 1, 0.0));
    std::vector<int> basis(rows, -1);
    for (std::size_t r = 0; r < rows; ++r) {
      double flip = b[r] > 0 ? 1.0 : -1.0;
      for (std::size_t v = 0; v < nvar; ++v) t[r][v] = flip * a[r][v];
      t[r][nvar + r] = -flip;  // surplus
      t[r][ncol] = flip * b[r];
      if (art_of_row[r] >= 0) {
        t[r][nvar + rows + art_of_row[r]] = 1.0;
        basis[r] = static_cast<int>(nvar + rows + art_of_row[r]);
      } else {
        basis[r] = static_cast<int>(nvar + r);
      }
    }

    // phase 1: minimize sum of artificials
    if (nart > 0) {
      std::vector<double> obj(ncol, 0.0);
      for (std::size_t k = 0; k < nart; ++k) obj[nvar + rows + k] = 1.0;
      double opt = run(t, basis, obj, ncol, rows);
      if (opt > 1e-7) return {};
      // pivot remaining artificials out where possible
      for (std::size_t r = 0; r < rows; ++r) {
        if (basis[r] >= static_cast<int>(nvar + rows)) {
          for (std::size_t v = 0; v < nvar + rows; ++v) {
            if (std::fabs(t[r][v]) > 1e-9) {
              pivot(t, basis, r, v, ncol, rows);
              break;
            }
          }
        }
      }
    }

    // phase 2
    std::vector<double> obj(ncol, 0.0);
    for (std::size_t v = 0; v < nvar; ++v) obj[v] = c[v];
    run(t, basis, obj, ncol, rows, /*forbid_artificial=*/nvar + rows);

    SimplexResult res;
    res.feasible = true;
    res.x.assign(nvar, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
      if (basis[r] >= 0 && basis[r] < static_cast<int>(nvar)) res.x[basis[r]] = t[r][ncol];
    return res;
  }

 private:
  static void pivot(std::vector<std::vector<double>>& t, std::vector<int>& basis, std::size_t pr,
                    std::size_t pc, std::size_t ncol, std::size_t rows) {
    double pv = t[pr][pc];
    for (std::size_t j = 0; j <= ncol; ++j) t[pr][j] /= pv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pr) continue;
      double f = t[r][pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= ncol; ++j) t[r][j] -= f * t[pr][j];
    }
    basis[pr] = static_cast<int>(pc);
  }

  static double run(std::vector<std::vector<double>>& t, std::vector<int>& basis,
                    const std::vector<double>& obj, std::size_t ncol, std::size_t rows,
                    std::size_t forbid_from = std::numeric_limits<std::size_t>::max()) {
    std::vector<double> z(ncol + 1, 0.0);
    auto recompute_z = [&]() {
      std::fill(z.begin(), z.end(), 0.0);
      for (std::size_t r = 0; r < rows; ++r) {
        double cb = obj[basis[r]];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= ncol; ++j) z[j] += cb * t[r][j];
      }
    };
    recompute_z();
    const int max_iters = 20000;
    for (int it = 0; it < max_iters; ++it) {
      // Bland's rule: first column with negative reduced cost
      std::size_t pc = ncol;
      for (std::size_t j = 0; j < ncol && pc == ncol; ++j) {
        if (j >= forbid_from) break;
        if (obj[j] - z[j] < -1e-9) pc = j;
      }
      if (pc == ncol) break;
      std::size_t pr = rows;
      double best = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        if (t[r][pc] > 1e-11) {
          double ratio = t[r][ncol] / t[r][pc];
          if (pr == rows || ratio < best - 1e-12 ||
              (ratio < best + 1e-12 && basis[r] < basis[pr])) {
            pr = r;
            best = ratio;
          }
        }
      }
      if (pr == rows) break;  // unbounded: callers treat current point as answer
      pivot(t, basis, pr, pc, ncol, rows);
      recompute_z();
    }
    double val = 0.0;
    for (std::size_t r = 0; r < rows; ++r) val += obj[basis[r]] * t[r][ncol];
    return val;
  }
};

}  // namespace catalyx

#pragma once
#include <functional>
#include <string>
#include <vector>

#include "mairy/matrix_airy.hpp"

namespace mairy {

struct ResidualReport {
    std::string check_id;
    std::vector<std::vector<double>> grid; // evaluation points (eigenvalue lists)
    double residual_max = 0.0;
    double residual_rel = 0.0; // max residual / max |A| on the grid
    double tolerance = 0.0;
    bool passed = false;
    std::string to_json() const;
};

struct ComparisonReport {
    std::string rep_a;
    std::string rep_b;
    std::vector<std::vector<double>> grid;
    double max_rel_disagreement = 0.0;
    cplx kappa_a{1.0, 0.0};
    cplx kappa_b{1.0, 0.0};
    double tolerance = 0.0;
    bool passed = false;
    std::string to_json() const;
};

// Radial form of the flat Laplacian (metric tr(dX^2), half-weight on the
// off-diagonal coordinates) on conjugation-invariant functions:
//   Delta f = sum_j d2f/dx_j^2 + 2 * sum_{j != k} (df/dx_j) / (x_j - x_k),
// evaluated by central differences with step h. Exposed so the polynomial
// self-tests (f = 1, sum x, sum x^2 -> 0, 0, 2N^2) can pin the convention.
double radial_laplacian(const std::function<double(const std::vector<double>&)>& f,
                        const std::vector<double>& x, double h);

// max over the grid of |d2/dx2 f + x f| / max |f| for f(x) = ai_std(-x), the
// bounded solution of y'' + x y = 0; five-point second difference, h = 1e-3.
ResidualReport ode_residual_check(const std::vector<double>& grid);

// Residual of  Delta A + (tr X) A = 0  in eigenvalue coordinates for the
// chosen representation, h = 1e-2 with one Richardson halving. N <= 2; every
// spectrum must have min gap > 10 h.
ResidualReport pde_residual_check(int N, const std::vector<Spectrum>& eigen_grid,
                                  Representation rep,
                                  const QuadratureConfig& cfg = QuadratureConfig{});

// max over the grid of |ka*A_a - kb*A_b| / max(|ka*A_a|, 1e-8) with kappas
// from the calibration table. A point passes when its disagreement is within
// max(tolerance, 3x the combined calibrated error estimates).
ComparisonReport cross_compare(Representation rep_a, Representation rep_b,
                               const std::vector<MatrixArgument>& grid,
                               const CalibrationTable& calibration, double tolerance,
                               const QuadratureConfig& cfg = QuadratureConfig{});

} // namespace mairy

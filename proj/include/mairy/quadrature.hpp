#pragma once
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "mairy/errors.hpp"
#include "mairy/exec.hpp"

namespace mairy {

using cplx = std::complex<double>;

enum class MethodTag { damped_extrapolated, rotated_contour, direct };

std::string to_string(MethodTag t);

// Regularization and resolution knobs for the conditionally convergent
// integrals. truncation_radius is the damped-mode radius; rotated-contour
// paths use truncation_radius * (8/12) so that the default pair is (12, 8).
struct QuadratureConfig {
    double damping_epsilon = 0.2;
    std::vector<double> epsilon_ladder{0.2, 0.1, 0.05, 0.025};
    double rotation_angle = 0.9 * 0.5235987755982988; // 0.9 * pi/6
    double truncation_radius = 12.0;
    int nodes_per_dim = 16; // Gauss-Legendre points per panel
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;
    ExecutionPolicy policy = ExecutionPolicy::serial;

    double rotated_radius() const { return truncation_radius * (8.0 / 12.0); }
    void validate() const; // throws DomainError on violated invariants
};

// Parse key=value lines (comma-separated list for epsilon_ladder); '#'
// comments and blank lines ignored. Unknown keys are an error.
QuadratureConfig parse_config_text(const std::string& text,
                                   QuadratureConfig base = QuadratureConfig{});
QuadratureConfig parse_config_file(const std::string& path,
                                   QuadratureConfig base = QuadratureConfig{});
std::string config_to_text(const QuadratureConfig& cfg);

struct Evaluation {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
    long nodes_used = 0;
    MethodTag method_tag = MethodTag::direct;
};

// ---- panel/axis machinery (shared by the representations) ----

struct Axis {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<std::size_t> panel_offsets; // start index of each panel
    std::size_t size() const { return nodes.size(); }
    std::size_t panels() const { return panel_offsets.size(); }
};

// Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Panels on [lo, hi]; width ~ gl_order * 2*pi / (ppw * freq(s)) clamped to
// [wmin, wmax]. freq is a local-oscillation-rate bound in radians per unit.
Axis graded_axis(double lo, double hi, const std::function<double(double)>& freq,
                 double ppw, int gl_order, double wmax, double wmin = 1e-7);

// Geometrically graded panels accumulating toward `lo` (for integrable
// endpoint singularities): edges lo, lo*ratio, ..., hi.
Axis geometric_axis(double lo, double hi, double ratio, int gl_order);

Axis concat_axes(const Axis& a, const Axis& b);
Axis mirror_axis(const Axis& positive_half); // [-hi,-lo] U [lo,hi], symmetric

// Sum of f(node)*weight, panel partial sums combined in fixed panel order;
// bit-identical for serial and parallel policies.
cplx axis_sum(const Axis& ax, ExecutionPolicy pol,
              const std::function<cplx(double)>& f);

// ---- ladder extrapolation ----

// Rational (Bulirsch-Stoer) extrapolation of samples (eps_i, val_i) to
// eps = 0, with Neville polynomial fallback when a denominator degenerates.
// Returns extrapolated value; err receives a stability estimate.
cplx extrapolate_to_zero(const std::vector<double>& eps,
                         const std::vector<cplx>& val, double& err);

// ---- public operations ----

// Integral over the real line of exp(i*(a*t^3/3 + b*t)) * weight(t).
// rotation_angle > 0: contour t -> s*exp(i*theta*sgn(s)) (weight must be
// analytic in the swept sector). rotation_angle == 0: Gaussian damping
// exp(-eps*t^2) on the epsilon_ladder, extrapolated to eps -> 0.
Evaluation cubic_phase_integral(double a, double b,
                                const std::function<cplx(cplx)>& weight,
                                const QuadratureConfig& cfg);
Evaluation cubic_phase_integral(double a, double b, const QuadratureConfig& cfg);

// Tensor-grid quadrature of f * exp(-eps*|t|^2) over R^d for each eps in the
// ladder, extrapolated to eps = 0.
Evaluation damped_lattice_integral(const std::function<cplx(const std::vector<double>&)>& f,
                                   int d, const QuadratureConfig& cfg);

} // namespace mairy

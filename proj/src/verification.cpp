#include "mairy/verification.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "mairy/airy.hpp"
#include "mairy/errors.hpp"

namespace mairy {

namespace {

nlohmann::ordered_json grid_json(const std::vector<std::vector<double>>& grid) {
    nlohmann::ordered_json g = nlohmann::ordered_json::array();
    for (const auto& pt : grid) g.push_back(pt);
    return g;
}

} // namespace

std::string ResidualReport::to_json() const {
    nlohmann::ordered_json j;
    j["check_id"] = check_id;
    j["grid"] = grid_json(grid);
    j["residual_max"] = residual_max;
    j["residual_rel"] = residual_rel;
    j["tolerance"] = tolerance;
    j["passed"] = passed;
    return j.dump(2);
}

std::string ComparisonReport::to_json() const {
    nlohmann::ordered_json j;
    j["rep_pair"] = {rep_a, rep_b};
    j["grid"] = grid_json(grid);
    j["max_rel_disagreement"] = max_rel_disagreement;
    j["kappa_a"] = {{"re", kappa_a.real()}, {"im", kappa_a.imag()}};
    j["kappa_b"] = {{"re", kappa_b.real()}, {"im", kappa_b.imag()}};
    j["tolerance"] = tolerance;
    j["passed"] = passed;
    return j.dump(2);
}

double radial_laplacian(const std::function<double(const std::vector<double>&)>& f,
                        const std::vector<double>& x, double h) {
    const int n = static_cast<int>(x.size());
    if (n == 0) throw InvalidGrid("radial_laplacian: empty point");
    if (!(h > 0.0)) throw DomainError("radial_laplacian: step must be positive");
    const double f0 = f(x);
    double lap = 0.0;
    std::vector<double> y = x;
    std::vector<double> grad(n);
    for (int j = 0; j < n; ++j) {
        y[j] = x[j] + h;
        const double fp = f(y);
        y[j] = x[j] - h;
        const double fm = f(y);
        y[j] = x[j];
        lap += (fp - 2.0 * f0 + fm) / (h * h);
        grad[j] = (fp - fm) / (2.0 * h);
    }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            const double gap = x[j] - x[k];
            if (gap == 0.0) throw ConfluentSpectrum("radial_laplacian: coincident eigenvalues");
            lap += 2.0 * grad[j] / gap;
        }
    return lap;
}

ResidualReport ode_residual_check(const std::vector<double>& grid) {
    if (grid.empty()) throw InvalidGrid("ode_residual_check: empty grid");
    const double h = 1e-3;
    auto f = [](double x) { return airy(-x, 0).ai_std; };

    ResidualReport rep;
    rep.check_id = "ode_residual";
    rep.tolerance = 1e-6;
    double max_res = 0.0, max_f = 0.0;
    for (double x : grid) {
        const double f0 = f(x);
        const double d2 = (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f0 + 16.0 * f(x - h) -
                           f(x - 2 * h)) /
                          (12.0 * h * h);
        max_res = std::max(max_res, std::abs(d2 + x * f0));
        max_f = std::max(max_f, std::abs(f0));
        rep.grid.push_back({x});
    }
    rep.residual_max = max_res;
    rep.residual_rel = max_res / std::max(max_f, 1e-300);
    rep.passed = rep.residual_rel <= rep.tolerance;
    return rep;
}

ResidualReport pde_residual_check(int N, const std::vector<Spectrum>& eigen_grid,
                                  Representation rep, const QuadratureConfig& cfg) {
    if (N < 1 || N > 2) throw DimensionMismatch("pde_residual_check supports N in {1, 2}");
    if (eigen_grid.empty()) throw InvalidGrid("pde_residual_check: empty grid");
    const double h = 1e-2;

    auto value = [&](const std::vector<double>& x) {
        return evaluate_representation(rep, split(x), cfg).value;
    };
    // Delta at step h (same samples feed the second differences and the
    // first-derivative cross term)
    auto lap = [&](const std::vector<double>& x, cplx f0, double step) {
        cplx out{0.0, 0.0};
        std::vector<double> y = x;
        std::vector<cplx> grad(N);
        for (int j = 0; j < N; ++j) {
            y[j] = x[j] + step;
            const cplx fp = value(y);
            y[j] = x[j] - step;
            const cplx fm = value(y);
            y[j] = x[j];
            out += (fp - 2.0 * f0 + fm) / (step * step);
            grad[j] = (fp - fm) / (2.0 * step);
        }
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                if (j != k) out += 2.0 * grad[j] / (x[j] - x[k]);
        return out;
    };

    ResidualReport report;
    report.check_id = "pde_residual";
    report.tolerance = 5e-3;
    double max_res = 0.0, max_f = 0.0;
    for (const Spectrum& s : eigen_grid) {
        if (s.N != N) throw DimensionMismatch("pde_residual_check: spectrum size != N");
        for (int i = 0; i + 1 < N; ++i)
            if (s.values[i] - s.values[i + 1] <= 10.0 * h)
                throw ConfluentSpectrum("pde_residual_check: eigenvalue gap must exceed 10*h");
        const std::vector<double>& x = s.values;
        const cplx f0 = value(x);
        const cplx lap_h = lap(x, f0, h);
        const cplx lap_h2 = lap(x, f0, h / 2.0);
        const cplx lap_r = (4.0 * lap_h2 - lap_h) / 3.0;
        double trx = 0.0;
        for (double v : x) trx += v;
        max_res = std::max(max_res, std::abs(lap_r + trx * f0));
        max_f = std::max(max_f, std::abs(f0));
        report.grid.push_back(x);
    }
    report.residual_max = max_res;
    report.residual_rel = max_res / std::max(max_f, 1e-300);
    report.passed = report.residual_rel <= report.tolerance;
    return report;
}

ComparisonReport cross_compare(Representation rep_a, Representation rep_b,
                               const std::vector<MatrixArgument>& grid,
                               const CalibrationTable& calibration, double tolerance,
                               const QuadratureConfig& cfg) {
    if (grid.empty()) throw InvalidGrid("cross_compare: empty grid");
    ComparisonReport report;
    report.rep_a = to_string(rep_a);
    report.rep_b = to_string(rep_b);
    report.tolerance = tolerance;
    report.passed = true;

    for (const MatrixArgument& X : grid) {
        const int N = X.traceless.N;
        const CalibrationEntry* ea = calibration.find(rep_a, N);
        const CalibrationEntry* eb = calibration.find(rep_b, N);
        if (!ea || !eb)
            throw DomainError("cross_compare: calibration table lacks an entry for N = " +
                              std::to_string(N));
        Evaluation va = evaluate_representation(rep_a, X, cfg);
        Evaluation vb = evaluate_representation(rep_b, X, cfg);
        const cplx a = ea->kappa * va.value;
        const cplx b = eb->kappa * vb.value;
        const double denom = std::max(std::abs(a), 1e-8);
        const double dis = std::abs(a - b) / denom;
        const double combined = (std::abs(ea->kappa) * va.error_estimate +
                                 std::abs(eb->kappa) * vb.error_estimate) /
                                denom;
        if (dis > std::max(tolerance, 3.0 * combined)) report.passed = false;
        report.max_rel_disagreement = std::max(report.max_rel_disagreement, dis);
        report.kappa_a = ea->kappa;
        report.kappa_b = eb->kappa;
        std::vector<double> eig(N);
        for (int i = 0; i < N; ++i) eig[i] = X.xi + X.traceless.values[i];
        report.grid.push_back(std::move(eig));
    }
    return report;
}

} // namespace mairy

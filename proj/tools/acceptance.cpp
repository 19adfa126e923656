// Acceptance gate: one line per criterion, nonzero exit when any fails.
// argv[1] (optional) is the CLI binary used by the determinism criterion.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mairy/hciz.hpp"
#include "mairy/verification.hpp"

using mairy::cplx;
using mairy::Representation;
using mairy::Spectrum;

namespace {

const double kPi = 3.14159265358979323846;
int g_failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& measured) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                measured.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------- criterion 1: scalar function ----------
void criterion1() {
    const double want0 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
    const double dev0 = std::abs(mairy::airy(0.0).ai_std - want0) / want0;
    bool ok = dev0 <= 1e-10;

    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(-6.0 + 10.0 * i / 100.0);
    mairy::ResidualReport ode = mairy::ode_residual_check(grid);
    ok = ok && ode.passed && ode.residual_rel <= 1e-6;

    double qdev = 0.0;
    for (double x : {-4.0, -2.0, 0.0, 1.0, 2.0}) {
        mairy::Evaluation q = mairy::airy_via_quadrature(x);
        qdev = std::max(qdev, std::abs(q.value - cplx{mairy::airy(x).ai_paper, 0.0}));
    }
    ok = ok && qdev <= 2e-5;

    report(1, ok, "scalar function: origin value, equation residual, quadrature agreement",
           "origin rel " + fmt(dev0) + "; ode residual " + fmt(ode.residual_rel) +
               " tol 1e-6; quadrature dev " + fmt(qdev) + " tol 2e-5");
}

// ---------- criterion 2: spherical function ----------
void criterion2() {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u(-2.0, 2.0), gap(0.3, 1.0);
    auto draw = [&](int n) {
        std::vector<double> v(static_cast<std::size_t>(n));
        v[0] = u(rng);
        for (int i = 1; i < n; ++i) v[static_cast<std::size_t>(i)] = v[i - 1] - gap(rng);
        return v;
    };
    double sym_dev = 0.0;
    for (int n : {2, 3, 4})
        for (int t = 0; t < 200; ++t) {
            std::vector<double> pv = draw(n), qv = draw(n);
            Spectrum P(pv), Q(qv);
            cplx v = mairy::spherical_phi(P, Q);
            cplx sw = mairy::spherical_phi(Q, P);
            std::shuffle(pv.begin(), pv.end(), rng);
            std::shuffle(qv.begin(), qv.end(), rng);
            cplx pm = mairy::spherical_phi(Spectrum(pv), Spectrum(qv));
            const double scale = 1.0 + std::abs(v);
            sym_dev = std::max(sym_dev, std::abs(v - sw) / scale);
            sym_dev = std::max(sym_dev, std::abs(v - pm) / scale);
        }
    bool ok = sym_dev <= 1e-12;

    // coalescing limit vs the confluent-column path
    Spectrum Q2({1.3, -0.4});
    cplx conf = mairy::spherical_phi(Spectrum({0.6, 0.6}), Q2);
    auto at = [&](double h) { return mairy::spherical_phi(Spectrum({0.6 + h, 0.6 - h}), Q2); };
    const double conf_dev = std::abs(conf - (4.0 * at(5e-4) - at(1e-3)) / 3.0);
    ok = ok && conf_dev <= 1e-6;

    double cf_dev = 0.0;
    for (double p : {0.4, 1.2})
        for (double q : {0.3, 1.6}) {
            cplx v = mairy::spherical_phi(Spectrum({p, -p}), Spectrum({q, -q}));
            cplx want = cplx{0.0, 1.0} * std::sin(2.0 * p * q) / (2.0 * p * q);
            cf_dev = std::max(cf_dev, std::abs(v - want));
        }
    ok = ok && cf_dev <= 1e-12;

    report(2, ok, "spherical function: symmetries, confluent limit, opposite-pair closed form",
           "symmetry dev " + fmt(sym_dev) + " tol 1e-12; confluent dev " + fmt(conf_dev) +
               " tol 1e-6; closed-form dev " + fmt(cf_dev) + " tol 1e-12");
}

// ---------- criterion 3: eigenvalue reduction vs Monte-Carlo ----------
void criterion3() {
    mairy::InvariantIntegrand gauss = mairy::register_integrand(
        [](const Spectrum& s) {
            double q = 0.0;
            for (double v : s.values) q += v * v;
            return cplx{std::exp(-q), 0.0};
        },
        mairy::DecayHint::schwartz, Spectrum({0.7, -0.4}));

    bool ok = true;
    double worst_ratio = 0.0;
    for (double q : {0.5, 1.0, 2.0}) {
        Spectrum Q({q, -q});
        mairy::Evaluation red = mairy::reduced_integral(gauss, Q);
        mairy::Evaluation mc = mairy::direct_matrix_integral(gauss, Q, 1000000, 20240817);
        const double dev = std::abs(red.value - mc.value);
        const double lim = 3.0 * (red.error_estimate + mc.error_estimate);
        worst_ratio = std::max(worst_ratio, dev / lim);
        ok = ok && dev <= lim;
    }
    mairy::Evaluation mc0 =
        mairy::direct_matrix_integral(gauss, Spectrum({0.0, 0.0}), 1000000, 20240817);
    const double dev0 = std::abs(mc0.value.real() - kPi * kPi / 2.0);
    ok = ok && dev0 <= 3.0 * mc0.error_estimate;

    report(3, ok, "reduction theorem: reduced integral vs 1e6-sample matrix Monte-Carlo",
           "worst dev/limit " + fmt(worst_ratio) + "; Q=0 dev " + fmt(dev0) + " vs 3-sigma " +
               fmt(3.0 * mc0.error_estimate));
}

// ---------- criterion 4: cross-representation agreement ----------
void criterion4() {
    mairy::CalibrationTable table = mairy::default_calibration();

    bool ok = true;
    double worst = 0.0;
    auto run = [&](Representation a, Representation b,
                   const std::vector<mairy::MatrixArgument>& grid, double tol) {
        mairy::ComparisonReport r = mairy::cross_compare(a, b, grid, table, tol);
        ok = ok && r.passed;
        worst = std::max(worst, r.max_rel_disagreement);
    };

    std::vector<mairy::MatrixArgument> g1;
    for (double x : {-3.0, -1.0, 0.0, 1.0, 2.0}) g1.push_back(mairy::split({x}));
    const std::vector<Representation> r1 = {Representation::direct, Representation::separated,
                                            Representation::det_oracle};
    for (std::size_t a = 0; a < r1.size(); ++a)
        for (std::size_t b = a + 1; b < r1.size(); ++b) run(r1[a], r1[b], g1, 1e-3);

    std::vector<mairy::MatrixArgument> g2;
    for (double xi : {-1.0, 0.0, 1.0})
        for (double r : {0.5, 1.0, 2.0}) g2.push_back(mairy::n2_argument(xi, r));
    const std::vector<Representation> r2 = {Representation::direct, Representation::separated,
                                            Representation::n2_double, Representation::n2_single,
                                            Representation::det_oracle};
    for (std::size_t a = 0; a < r2.size(); ++a)
        for (std::size_t b = a + 1; b < r2.size(); ++b) run(r2[a], r2[b], g2, 1e-3);

    double green_worst = 0.0;
    {
        std::vector<mairy::MatrixArgument> gg;
        for (double xi : {-1.0, 0.0, 1.0})
            for (double r : {0.5, 1.25, 2.0}) gg.push_back(mairy::n2_argument(xi, r));
        mairy::ComparisonReport r = mairy::cross_compare(Representation::n2_single,
                                                         Representation::n2_green, gg, table, 5e-3);
        ok = ok && r.passed;
        green_worst = r.max_rel_disagreement;
    }

    double n3_worst = 0.0;
    {
        std::mt19937_64 rng(31337);
        std::uniform_real_distribution<double> hi(0.6, 1.2), mid(-0.2, 0.2), lo(-1.2, -0.6);
        std::vector<mairy::MatrixArgument> g3;
        for (int t = 0; t < 3; ++t) g3.push_back(mairy::split({hi(rng), mid(rng), lo(rng)}));
        mairy::ComparisonReport r = mairy::cross_compare(Representation::separated,
                                                         Representation::det_oracle, g3, table, 1e-2);
        ok = ok && r.passed;
        n3_worst = r.max_rel_disagreement;
    }

    report(4, ok, "cross-representation agreement after single-point calibration",
           "pairwise worst rel " + fmt(worst) + " tol 1e-3; contour-vs-single worst " +
               fmt(green_worst) + " tol 5e-3; N=3 worst " + fmt(n3_worst) + " tol 1e-2");
}

// ---------- criterion 5: defining equation ----------
void criterion5() {
    std::vector<Spectrum> n1;
    for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) n1.push_back(Spectrum({x}));
    mairy::ResidualReport r1 = mairy::pde_residual_check(1, n1, Representation::det_oracle);

    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> hi(0.3, 1.5), lo(-1.5, -0.3);
    std::vector<Spectrum> n2;
    for (int t = 0; t < 5; ++t) n2.push_back(Spectrum({hi(rng), lo(rng)}));
    mairy::ResidualReport r2 = mairy::pde_residual_check(2, n2, Representation::det_oracle);

    // polynomial self-tests of the radial Laplacian
    auto quad = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    auto lin = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    };
    auto one = [](const std::vector<double>&) { return 1.0; };
    double poly_dev = 0.0;
    for (const std::vector<double>& x : {std::vector<double>{1.0, -0.4}, {0.9, 0.1, -0.8}}) {
        const double n = static_cast<double>(x.size());
        poly_dev = std::max(poly_dev, std::abs(mairy::radial_laplacian(one, x, 1e-2)));
        poly_dev = std::max(poly_dev, std::abs(mairy::radial_laplacian(lin, x, 1e-2)));
        poly_dev =
            std::max(poly_dev, std::abs(mairy::radial_laplacian(quad, x, 1e-2) - 2.0 * n * n));
    }
    bool ok = r1.passed && r2.passed && poly_dev <= 1e-7;

    report(5, ok, "defining equation: residual checks and Laplacian self-tests",
           "N=1 residual " + fmt(r1.residual_rel) + ", N=2 residual " + fmt(r2.residual_rel) +
               " tol 5e-3; polynomial dev " + fmt(poly_dev));
}

// ---------- criterion 6: scale audit ----------
void criterion6() {
    mairy::ScaleAudit a = mairy::audit_airy_scale();
    const bool ok = a.fit_residual <= 1e-3 && a.ci_halfwidth <= 1e-3;
    report(6, ok, "scale audit of the single-integral reduction",
           "fitted " + fmt(a.fitted_scale) + " +- " + fmt(a.ci_halfwidth) + ", residual " +
               fmt(a.fit_residual) + "; candidate " + fmt(a.candidates[0]) +
               (a.agrees[0] ? " agrees" : " excluded") + ", candidate " + fmt(a.candidates[1]) +
               (a.agrees[1] ? " agrees" : " excluded"));
}

// ---------- criterion 7: deterministic check reports ----------
void criterion7(const char* cli) {
    if (!cli) {
        report(7, false, "deterministic check reports", "CLI path not supplied");
        return;
    }
    auto slurp = [](const std::string& p) {
        std::ifstream is(p, std::ios::binary);
        std::stringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    const std::string base = std::string("\"") + cli + "\" check --suite all --seed 7 --out ";
    const int rc1 = std::system((base + "accept_run_a.json").c_str());
    const int rc2 = std::system((base + "accept_run_b.json").c_str());
    const std::string a = slurp("accept_run_a.json");
    const std::string b = slurp("accept_run_b.json");
    const bool ok = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
    std::remove("accept_run_a.json");
    std::remove("accept_run_b.json");
    report(7, ok, "repeated `check --suite all --seed 7` is byte-identical",
           std::string("exit codes ") + std::to_string(rc1) + "/" + std::to_string(rc2) +
               ", sizes " + std::to_string(a.size()) + "/" + std::to_string(b.size()) +
               (a == b ? ", identical" : ", DIFFER"));
}

} // namespace

int main(int argc, char** argv) {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7(argc > 1 ? argv[1] : nullptr);
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}

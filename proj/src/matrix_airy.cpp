#include "mairy/matrix_airy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "mairy/errors.hpp"

namespace mairy {

namespace {

constexpr double kPi = 3.141592653589793238462643;
const cplx kI{0.0, 1.0};

double sinc(double z) {
    if (std::abs(z) < 1e-6) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

// 2*pi*Ai(-u): the real solution of y'' + u y = 0 selected by the integral
// representations. Decays superexponentially for u -> -inf; clamped to 0 once
// the true value drops below ~1e-40 so quadrature corners cannot leave the
// scalar evaluator's domain.
double ai_eq3(double u) {
    if (u < -28.0) return 0.0;
    return airy(-u, 0).ai_paper;
}

double ai_eq3_deriv(double u) {
    if (u < -28.0) return 0.0;
    return -airy(-u, 1).ai_paper;
}

double default_angle() { return 0.9 * kPi / 6.0; }

// The deformed-contour representations need a strictly positive angle even
// when the engine-level config selects the damped path.
double contour_angle(const QuadratureConfig& cfg) {
    return cfg.rotation_angle > 1e-3 ? cfg.rotation_angle : default_angle();
}

cplx ipow(cplx base, int k) {
    cplx out{1.0, 0.0};
    for (int i = 0; i < k; ++i) out *= base;
    return out;
}

// ---- direct definition, N = 2 ----
//
// Integrating the off-diagonal pair of Y analytically (a 2-D Fresnel integral
// giving i*pi/(a+b)) leaves
//   A = i*pi * int du dv exp(i((u^3+v^3)/3 - x1 u - x2 v)) / (u+v),
// with the u+v = 0 line crossed in the +i0 sense. Both axes are bent onto
// V-shaped contours s -> s*exp(i*theta*sgn(s)); the corner at u = -v is then
// approached only along rays where |u+v| >= 2*s*sin(theta), and the truncated
// neighbourhood [0, smin) of the corner contributes an error linear in smin.
Evaluation direct_n2_rotated(double x1, double x2, const QuadratureConfig& cfg) {
    const double theta = contour_angle(cfg);
    const double bmax = std::max({std::abs(x1), std::abs(x2), 0.5});
    const double smin = 1e-8;
    const double knee = 0.4;
    const double smax = std::min(4.5 + std::sqrt(bmax), cfg.rotated_radius() + 2.0);

    auto build = [&](int gl) {
        Axis corner = geometric_axis(smin, knee, 1.35, gl);
        Axis tail = graded_axis(
            knee, smax, [&](double s) { return 0.2 * s * s + bmax + 1.0; }, 7.0, gl, 1.0);
        return concat_axes(corner, tail);
    };

    auto run = [&](const Axis& ax, long& nodes) {
        const std::size_t n = ax.size();
        // Per-leg node/exponential tables; leg 0 rotates into the upper-right
        // sector, leg 1 into the lower-left.
        std::vector<cplx> t[2], e1[2], e2[2];
        cplx legrot[2];
        for (int leg = 0; leg < 2; ++leg) {
            double sg = leg == 0 ? 1.0 : -1.0;
            cplx rot = std::exp(kI * (theta * sg));
            // du = rot * ds on either leg: the leg toward -infinity is
            // traversed in reverse, which cancels the sign of s.
            legrot[leg] = rot;
            t[leg].resize(n);
            e1[leg].resize(n);
            e2[leg].resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                cplx u = sg * ax.nodes[i] * rot;
                cplx ph = kI * (u * u * u / 3.0);
                t[leg][i] = u;
                e1[leg][i] = ax.weights[i] * std::exp(ph - kI * (x1 * u));
                e2[leg][i] = ax.weights[i] * std::exp(ph - kI * (x2 * u));
            }
        }
        cplx total{0.0, 0.0};
        for (int l1 = 0; l1 < 2; ++l1) {
            for (int l2 = 0; l2 < 2; ++l2) {
                cplx s = indexed_reduce<cplx>(n, cfg.policy, [&](std::size_t i) {
                    cplx row{0.0, 0.0};
                    const cplx ui = t[l1][i];
                    const cplx fi = e1[l1][i];
                    for (std::size_t j = 0; j < n; ++j)
                        row += e2[l2][j] / (ui + t[l2][j]);
                    return fi * row;
                });
                total += legrot[l1] * legrot[l2] * s;
            }
        }
        nodes += static_cast<long>(4 * n * n);
        return kI * kPi * total;
    };

    long nodes = 0;
    const int gl_f = cfg.nodes_per_dim;
    const int gl_c = std::max(8, (3 * gl_f) / 4);
    Axis ax_c = build(gl_c);
    Axis ax_f = build(gl_f);
    cplx vc = run(ax_c, nodes);
    cplx vf = run(ax_f, nodes);
    Evaluation ev;
    ev.value = vf;
    ev.error_estimate =
        std::abs(vf - vc) + 40.0 * smin * (1.0 + std::abs(vf)) + 5e-14 * (1.0 + std::abs(vf));
    ev.nodes_used = nodes;
    ev.method_tag = MethodTag::rotated_contour;
    return ev;
}

// Coarse fallback: the matrix-coordinate integral over (Y11, Y22, Re Y12,
// Im Y12) with Gaussian damping extrapolated along the epsilon ladder. Slow
// and low-accuracy next to the rotated contour; kept as an independent check
// that needs no analyticity argument.
Evaluation direct_n2_damped(double x1, double x2, const QuadratureConfig& cfg) {
    auto f = [&](const std::vector<double>& y) {
        const double a = y[0], b = y[1], w2 = y[2] * y[2] + y[3] * y[3];
        const double phase = (a * a * a + b * b * b) / 3.0 + (a + b) * w2 - x1 * a - x2 * b;
        return std::polar(1.0, phase);
    };
    return damped_lattice_integral(f, 4, cfg);
}

// ---- separated form, N <= 4 ----
//
// After splitting X = xi*I + Xt and integrating the trace direction of Y, the
// remaining integral runs over the traceless hyperplane sum(p) = 0:
//   V(P)^2 * Phi(Qt | -P) * exp(i tr P^3 / 3)
//     * N^{-1/3} * ai_eq3(N^{-1/3} (N xi - tr P^2)),
// coordinates p_1..p_{N-1}, p_N = -sum. The prefactor (-i pi)^{N(N-1)/2} /
// (N-1)! was measured against the direct definition (N <= 2) and the
// determinant closed form (N = 3, 4) to ~1e-11 relative; with it in place
// calibration lands at kappa ~= 1.
Evaluation separated_impl(const MatrixArgument& X, const QuadratureConfig& cfg, int deriv) {
    const int N = X.traceless.N;
    const double xi = X.xi;
    if (N == 1) {
        Evaluation ev;
        ev.value = deriv ? ai_eq3_deriv(xi) : ai_eq3(xi);
        ev.error_estimate = 1e-12 * (1.0 + std::abs(ev.value));
        ev.nodes_used = 1;
        ev.method_tag = MethodTag::direct;
        return ev;
    }
    const int d = N - 1;
    const double n13 = std::cbrt(static_cast<double>(N));
    const double cut = N <= 3 ? 26.0 : 18.0;
    const double R = std::sqrt(std::max(N * xi, 0.0) + cut * n13 + 2.0);
    const double qmax = std::abs(X.traceless.values.front());
    const Spectrum& qt = X.traceless;

    auto integrand = [&](const std::vector<double>& p) -> cplx {
        double psum = 0.0, trp2 = 0.0, trp3 = 0.0;
        for (int i = 0; i < d; ++i) psum += p[i];
        std::vector<double> pfull(p.begin(), p.end());
        pfull.push_back(-psum);
        for (double v : pfull) {
            trp2 += v * v;
            trp3 += v * v * v;
        }
        const double u = (N * xi - trp2) / n13;
        const double aifac = deriv ? n13 * n13 * ai_eq3_deriv(u) / n13 : ai_eq3(u) / n13;
        if (aifac == 0.0) return {0.0, 0.0};
        std::vector<double> negp(pfull.size());
        for (std::size_t i = 0; i < pfull.size(); ++i) negp[i] = -pfull[i];
        const double vp = vandermonde_raw(pfull);
        const cplx phi = spherical_phi(Spectrum(negp), qt);
        return vp * vp * aifac * phi * std::exp(kI * (trp3 / 3.0));
    };

    auto freq = [&](double s) { return 2.0 * s * s + 4.0 * s + 2.0 * qmax + 3.0; };
    // the V^2 * Ai envelope suppresses the under-resolved corners, so the
    // 3-D case gets away with far fewer points per wavelength (measured
    // against the determinant closed form)
    const double ppw_c = N <= 3 ? 7.0 : 2.6;
    const double ppw_f = N <= 3 ? 10.0 : 3.4;

    long nodes = 0;
    auto run = [&](double ppw) {
        Axis ax = mirror_axis(graded_axis(0.0, R, freq, ppw, cfg.nodes_per_dim, 1.0));
        const std::size_t n = ax.size();
        std::size_t total = 1;
        for (int k = 0; k < d; ++k) total *= n;
        nodes += static_cast<long>(total);
        return indexed_reduce<cplx>(n, cfg.policy, [&](std::size_t i0) {
            std::vector<double> p(d, 0.0);
            p[0] = ax.nodes[i0];
            if (d == 1) return ax.weights[i0] * integrand(p);
            cplx acc{0.0, 0.0};
            std::vector<std::size_t> idx(d - 1, 0);
            for (;;) {
                double w = ax.weights[i0];
                for (int k = 1; k < d; ++k) {
                    p[k] = ax.nodes[idx[k - 1]];
                    w *= ax.weights[idx[k - 1]];
                }
                acc += w * integrand(p);
                int k = 0;
                while (k < d - 1 && ++idx[k] == n) idx[k++] = 0;
                if (k == d - 1) break;
            }
            return acc;
        });
    };

    cplx vc = run(ppw_c);
    cplx vf = run(ppw_f);
    double fact = 1.0;
    for (int k = 2; k < N; ++k) fact *= k;
    const cplx pref = ipow(-kI * kPi, N * (N - 1) / 2) / fact;
    Evaluation ev;
    ev.value = pref * vf;
    ev.error_estimate =
        std::abs(pref) * std::abs(vf - vc) + 5e-14 * (1.0 + std::abs(pref * vf));
    ev.nodes_used = nodes;
    ev.method_tag = MethodTag::direct;
    return ev;
}

// ---- N = 2 reduced forms ----

// A = 4*pi * int deta dp exp(i(2/3 eta^3 + 2 eta p^2 - 2 xi eta))
//                 * sinc(p r) * p^2
// with the eta line bent onto s*exp(i*theta*sgn(s)). The kernel
// exp(i r^2/(8 eta))-like pinch at eta -> 0 appears here as a p-range growing
// like 1/sqrt(Im eta), so the eta axis is graded geometrically toward 0 down
// to smin ~ r^2 sin(theta)/320.
Evaluation n2_double_rotated(double xi, double r, const QuadratureConfig& cfg) {
    const double theta = contour_angle(cfg);
    const double sth = std::sin(theta);
    const double smin = std::max(r * r * sth / 8.0 / 40.0, 1e-7);
    const double smax = 4.0 + std::abs(xi);

    long nodes = 0;
    auto run = [&](double ppw) {
        Axis corner = geometric_axis(smin, 1.0, 1.6, cfg.nodes_per_dim);
        Axis tail = graded_axis(
            1.0, smax, [&](double s) { return 2.0 * (s * s + std::abs(xi)) + r + 1.0; }, ppw,
            cfg.nodes_per_dim, 1.0);
        Axis sax = concat_axes(corner, tail);
        cplx total{0.0, 0.0};
        for (int leg = 0; leg < 2; ++leg) {
            const double sg = leg == 0 ? 1.0 : -1.0;
            const cplx rot = std::exp(kI * (theta * sg));
            total += indexed_reduce<cplx>(sax.size(), cfg.policy, [&](std::size_t is) {
                const double s = sax.nodes[is];
                const cplx eta = sg * s * rot;
                const double im = s * sth;
                const double rp = std::sqrt(23.0 / (2.0 * im));
                const double fenv = 6.0 * std::sqrt(2.0 * im);
                Axis pax = graded_axis(
                    0.0, rp,
                    [&](double p) { return std::max(4.0 * s * p + r + 1.0, fenv); }, ppw,
                    cfg.nodes_per_dim, 1e9);
                const cplx cs = std::exp(kI * (2.0 / 3.0) * eta * eta * eta - kI * (2.0 * xi) * eta);
                cplx inner{0.0, 0.0};
                for (std::size_t j = 0; j < pax.size(); ++j) {
                    const double p = pax.nodes[j];
                    inner += pax.weights[j] * std::exp(kI * (2.0 * p * p) * eta) *
                             (sinc(p * r) * p * p);
                }
                return 2.0 * cs * rot * sax.weights[is] * inner;
            });
            nodes += static_cast<long>(sax.size());
        }
        return 4.0 * kPi * total;
    };

    cplx vc = run(6.0);
    cplx vf = run(8.5);
    Evaluation ev;
    ev.value = vf;
    ev.error_estimate = std::abs(vf - vc) + 5e-14 * (1.0 + std::abs(vf));
    ev.nodes_used = nodes;
    ev.method_tag = MethodTag::rotated_contour;
    return ev;
}

// For small r the eta integral is done first and exactly by the 1-D engine
// (it is the cubic-phase integral with a = 2, b = 2(p^2 - xi)), leaving a
// rapidly convergent p integral. This avoids the corner grading degenerating
// as smin ~ r^2 -> 0.
Evaluation n2_double_small_r(double xi, double r, const QuadratureConfig& cfg) {
    QuadratureConfig inner = cfg;
    inner.rotation_angle = contour_angle(cfg);
    const double R = std::sqrt(std::max(xi, 0.0) + 10.0);
    auto freq = [&](double p) { return 4.0 * p * std::sqrt(std::abs(xi) + 2.0) + r + 1.0; };

    long nodes = 0;
    double inner_err = 0.0;
    auto run = [&](double ppw, bool track) {
        Axis ax = graded_axis(0.0, R, freq, ppw, cfg.nodes_per_dim, 1.0);
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < ax.size(); ++i) {
            const double p = ax.nodes[i];
            Evaluation eta = cubic_phase_integral(2.0, 2.0 * (p * p - xi), inner);
            const double fac = sinc(p * r) * p * p;
            acc += ax.weights[i] * fac * eta.value;
            nodes += eta.nodes_used;
            if (track) inner_err += std::abs(ax.weights[i] * fac) * eta.error_estimate;
        }
        return 4.0 * kPi * 2.0 * acc;
    };

    cplx vc = run(7.0, false);
    cplx vf = run(10.0, true);
    Evaluation ev;
    ev.value = vf;
    ev.error_estimate =
        std::abs(vf - vc) + 8.0 * kPi * inner_err + 5e-14 * (1.0 + std::abs(vf));
    ev.nodes_used = nodes;
    ev.method_tag = MethodTag::rotated_contour;
    return ev;
}

} // namespace

Representation parse_representation(const std::string& tag) {
    if (tag == "direct") return Representation::direct;
    if (tag == "separated") return Representation::separated;
    if (tag == "n2_double") return Representation::n2_double;
    if (tag == "n2_single") return Representation::n2_single;
    if (tag == "n2_green") return Representation::n2_green;
    if (tag == "det_oracle") return Representation::det_oracle;
    throw DomainError("unknown representation tag: " + tag);
}

std::string to_string(Representation rep) {
    switch (rep) {
    case Representation::direct: return "direct";
    case Representation::separated: return "separated";
    case Representation::n2_double: return "n2_double";
    case Representation::n2_single: return "n2_single";
    case Representation::n2_green: return "n2_green";
    case Representation::det_oracle: return "det_oracle";
    }
    throw DomainError("unknown representation enum value");
}

NRange supported_N(Representation rep) {
    switch (rep) {
    case Representation::direct: return {1, 2};
    case Representation::separated: return {1, 4};
    case Representation::n2_double:
    case Representation::n2_single:
    case Representation::n2_green: return {2, 2};
    case Representation::det_oracle: return {1, 4};
    }
    throw DomainError("unknown representation enum value");
}

MatrixArgument n2_argument(double xi, double r) {
    return MatrixArgument{xi, Spectrum({r / 2.0, -r / 2.0})};
}

double n2_r(const MatrixArgument& X) {
    if (X.traceless.N != 2)
        throw DimensionMismatch("n2_r: argument must be 2x2");
    return X.traceless.values[0] - X.traceless.values[1];
}

Evaluation airy_direct(const MatrixArgument& X, const QuadratureConfig& cfg) {
    cfg.validate();
    const int N = X.traceless.N;
    if (N == 1) return cubic_phase_integral(1.0, -X.xi, cfg);
    if (N != 2) throw DimensionMismatch("airy_direct supports N <= 2");
    const double x1 = X.xi + X.traceless.values[0];
    const double x2 = X.xi + X.traceless.values[1];
    if (cfg.rotation_angle > 0.0) return direct_n2_rotated(x1, x2, cfg);
    return direct_n2_damped(x1, x2, cfg);
}

Evaluation airy_separated(const MatrixArgument& X, const QuadratureConfig& cfg) {
    cfg.validate();
    if (X.traceless.N > 4) throw DimensionMismatch("airy_separated supports N <= 4");
    return separated_impl(X, cfg, 0);
}

Evaluation airy_separated_xi_derivative(const MatrixArgument& X, const QuadratureConfig& cfg) {
    cfg.validate();
    if (X.traceless.N > 4) throw DimensionMismatch("airy_separated supports N <= 4");
    return separated_impl(X, cfg, 1);
}

Evaluation airy_n2_double(double xi, double r, const QuadratureConfig& cfg) {
    cfg.validate();
    const double rr = std::abs(r); // even in r
    if (rr < 0.25) return n2_double_small_r(xi, rr, cfg);
    return n2_double_rotated(xi, rr, cfg);
}

Evaluation airy_n2_single(double xi, double r, const QuadratureConfig& cfg) {
    cfg.validate();
    const double s23 = std::cbrt(4.0); // 2^{2/3}
    const double R = std::sqrt(std::max(xi, 0.0) + 10.5);
    auto freq = [&](double p) {
        return 4.0 * p * std::sqrt(std::abs(xi) + 2.0) + std::abs(r) + 1.0;
    };
    auto h = [&](double p) -> cplx {
        const double arg = s23 * (p * p - xi);
        if (arg > 28.0) return {0.0, 0.0};
        return airy(arg, 0).ai_std * sinc(p * r) * p * p;
    };
    long nodes = 0;
    auto run = [&](double ppw) {
        Axis ax = graded_axis(0.0, R, freq, ppw, cfg.nodes_per_dim, 1.0);
        nodes += static_cast<long>(ax.size());
        return 4.0 * kPi * kPi * s23 * 2.0 * axis_sum(ax, cfg.policy, h);
    };
    cplx vc = run(7.0);
    cplx vf = run(10.0);
    Evaluation ev;
    ev.value = vf;
    ev.error_estimate = std::abs(vf - vc) + 5e-14 * (1.0 + std::abs(vf));
    ev.nodes_used = nodes;
    ev.method_tag = MethodTag::direct;
    return ev;
}

// A = pi^{3/2}/sqrt(2) * exp(-3i pi/4)
//       * int_Gamma exp(-(2i/3)(eta^3 - 3 xi eta)) eta^{-3/2}
//                   exp(i r^2/(8 eta)) deta,
// Gamma descending from e^{i pi} infinity, circling eta = 0 through the lower
// half plane (radius contour_radius), and leaving toward e^{0} infinity along
// directions exp(-+i 5pi/6), exp(-i pi/6) where the cubic decays. The kernel
// exp(i r^2/(8 eta)) is essentially singular at eta = 0, hence r > 0 only;
// the result must not depend on contour_radius.
Evaluation airy_n2_green(double xi, double r, const QuadratureConfig& cfg, double contour_radius) {
    cfg.validate();
    if (r <= 0.0) throw DomainError("airy_n2_green requires r > 0");
    const double rho = contour_radius;
    if (!(rho > 0.0) || rho > 1.5)
        throw DomainError("airy_n2_green: contour_radius must lie in (0, 1.5]");

    const cplx kappa = std::pow(kPi, 1.5) / std::sqrt(2.0) * std::exp(-kI * (3.0 * kPi / 4.0));
    const double axi = std::abs(xi);
    const double rtail = std::max(4.0, std::cbrt(66.0 + 6.0 * axi) + 1.0);
    auto phase_part = [&](cplx eta) {
        return std::exp(-kI * (2.0 / 3.0) * (eta * eta * eta - 3.0 * xi * eta) +
                        kI * (r * r) / (8.0 * eta));
    };
    auto tail_freq = [&](double s) {
        return 2.0 * (s + rho) * (s + rho) + 2.0 * axi + r * r / (8.0 * rho * rho) + 2.0;
    };

    std::vector<double> gx, gw;
    long nodes = 0;
    auto run = [&](double ppw, int arc_panels) {
        Axis tax = graded_axis(0.0, rtail, tail_freq, ppw, cfg.nodes_per_dim, 1.0);
        const cplx dir_r = std::exp(-kI * (kPi / 6.0));
        const cplx dir_l = std::exp(-kI * (5.0 * kPi / 6.0));
        cplx right{0.0, 0.0}, left{0.0, 0.0};
        for (std::size_t i = 0; i < tax.size(); ++i) {
            const double s = tax.nodes[i];
            const cplx er = rho + s * dir_r;
            const cplx el = -rho + s * dir_l;
            right += tax.weights[i] * phase_part(er) * std::pow(er, -1.5) * dir_r;
            left += tax.weights[i] * phase_part(el) * std::pow(el, -1.5) * dir_l;
        }
        // lower semicircle, branch written out explicitly so it matches the
        // principal branch of the tails at phi = -pi and phi = 0
        gauss_legendre(cfg.nodes_per_dim, gx, gw);
        cplx arc{0.0, 0.0};
        for (int pnl = 0; pnl < arc_panels; ++pnl) {
            const double lo = -kPi + kPi * pnl / arc_panels;
            const double hi = -kPi + kPi * (pnl + 1) / arc_panels;
            for (int k = 0; k < cfg.nodes_per_dim; ++k) {
                const double phi = 0.5 * (hi - lo) * gx[k] + 0.5 * (hi + lo);
                const double w = 0.5 * (hi - lo) * gw[k];
                const cplx eta = rho * std::exp(kI * phi);
                const cplx br = std::pow(rho, -1.5) * std::exp(-kI * (1.5 * phi));
                arc += w * phase_part(eta) * br * (kI * eta);
            }
        }
        nodes += static_cast<long>(2 * tax.size() + arc_panels * cfg.nodes_per_dim);
        return kappa * (-left + arc + right);
    };

    cplx vc = run(7.0, 4);
    cplx vf = run(10.0, 6);
    Evaluation ev;
    ev.value = vf;
    // floor reflects a measured ~3e-11 systematic at larger r that panel
    // refinement does not see
    ev.error_estimate = std::abs(vf - vc) + 5e-11 * (1.0 + std::abs(vf));
    ev.nodes_used = nodes;
    ev.method_tag = MethodTag::rotated_contour;
    return ev;
}

// (-i pi)^{N(N-1)/2} det[(i d/dx)^{j-1} ai_eq3(x_k)] / V(x); the j-th row is
// (-i)^{j-1} * 2*pi * Ai^{(j-1)}(-x_k).
Evaluation airy_det_oracle(const MatrixArgument& X) {
    const int N = X.traceless.N;
    if (N > 4) throw DimensionMismatch("airy_det_oracle supports N <= 4");
    std::vector<double> x(N);
    for (int i = 0; i < N; ++i) x[i] = X.xi + X.traceless.values[i];
    const double spread = x.front() - x.back();
    const double gap_tol = 1e-8 * (1.0 + spread);
    for (int i = 0; i + 1 < N; ++i)
        if (x[i] - x[i + 1] < gap_tol)
            throw ConfluentSpectrum("airy_det_oracle: eigenvalue gap below threshold");

    Evaluation ev;
    if (N == 1) {
        ev.value = ai_eq3(x[0]);
    } else {
        std::vector<cplx> m(static_cast<std::size_t>(N) * N);
        for (int j = 0; j < N; ++j) {
            const cplx coef = ipow(-kI, j);
            for (int k = 0; k < N; ++k)
                m[static_cast<std::size_t>(j) * N + k] = coef * airy(-x[k], j).ai_paper;
        }
        cplx det = detail::det_lu(m, N);
        ev.value = ipow(-kI * kPi, N * (N - 1) / 2) * det / vandermonde_raw(x);
    }
    ev.error_estimate = 1e-10 * N * (1.0 + std::abs(ev.value));
    ev.nodes_used = static_cast<long>(N) * N;
    ev.method_tag = MethodTag::direct;
    return ev;
}

Evaluation evaluate_representation(Representation rep, const MatrixArgument& X,
                                   const QuadratureConfig& cfg) {
    const int N = X.traceless.N;
    NRange range = supported_N(rep);
    if (!range.contains(N)) {
        std::ostringstream os;
        os << to_string(rep) << " supports N in [" << range.lo << ", " << range.hi
           << "], got N = " << N;
        throw DimensionMismatch(os.str());
    }
    switch (rep) {
    case Representation::direct: return airy_direct(X, cfg);
    case Representation::separated: return airy_separated(X, cfg);
    case Representation::n2_double: return airy_n2_double(X.xi, n2_r(X), cfg);
    case Representation::n2_single: return airy_n2_single(X.xi, n2_r(X), cfg);
    case Representation::n2_green: return airy_n2_green(X.xi, n2_r(X), cfg);
    case Representation::det_oracle: return airy_det_oracle(X);
    }
    throw DomainError("unknown representation enum value");
}

const CalibrationEntry* CalibrationTable::find(Representation rep, int N) const {
    for (const auto& e : entries)
        if (e.rep == rep && e.N == N) return &e;
    return nullptr;
}

std::string CalibrationTable::to_json() const {
    nlohmann::ordered_json root;
    root["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json je;
        je["rep"] = to_string(e.rep);
        je["N"] = e.N;
        je["kappa_re"] = e.kappa.real();
        je["kappa_im"] = e.kappa.imag();
        je["fit_residual"] = e.fit_residual;
        je["fit_eigenvalues"] = e.fit_eigenvalues;
        root["entries"].push_back(je);
    }
    return root.dump(2) + "\n";
}

CalibrationTable CalibrationTable::from_json(const std::string& text) {
    CalibrationTable t;
    try {
        auto root = nlohmann::ordered_json::parse(text);
        for (const auto& je : root.at("entries")) {
            CalibrationEntry e;
            e.rep = parse_representation(je.at("rep").get<std::string>());
            e.N = je.at("N").get<int>();
            e.kappa = cplx(je.at("kappa_re").get<double>(), je.at("kappa_im").get<double>());
            e.fit_residual = je.at("fit_residual").get<double>();
            e.fit_eigenvalues = je.at("fit_eigenvalues").get<std::vector<double>>();
            t.entries.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw DomainError(std::string("calibration table: ") + ex.what());
    }
    return t;
}

CalibrationTable calibrate(const std::vector<Representation>& reps,
                           const MatrixArgument& fit_point, const QuadratureConfig& cfg) {
    const int N = fit_point.traceless.N;
    Evaluation ref = N <= 2 ? airy_direct(fit_point, cfg) : airy_det_oracle(fit_point);
    if (std::abs(ref.value) < 10.0 * ref.error_estimate)
        throw DegenerateFit("calibrate: reference value at the fit point is consistent with 0");
    std::vector<double> eig(N);
    for (int i = 0; i < N; ++i) eig[i] = fit_point.xi + fit_point.traceless.values[i];

    CalibrationTable table;
    for (Representation rep : reps) {
        if (!supported_N(rep).contains(N)) {
            std::ostringstream os;
            os << "calibrate: " << to_string(rep) << " does not support N = " << N;
            throw DimensionMismatch(os.str());
        }
        Evaluation ev = evaluate_representation(rep, fit_point, cfg);
        if (std::abs(ev.value) < 10.0 * ev.error_estimate) {
            std::ostringstream os;
            os << "calibrate: " << to_string(rep)
               << " value at the fit point is consistent with 0; pick a different fit point";
            throw DegenerateFit(os.str());
        }
        CalibrationEntry e;
        e.rep = rep;
        e.N = N;
        e.kappa = ref.value / ev.value;
        e.fit_residual = (std::abs(e.kappa) * ev.error_estimate + ref.error_estimate) /
                         std::abs(ref.value);
        e.fit_eigenvalues = eig;
        table.entries.push_back(std::move(e));
    }
    return table;
}

CalibrationTable default_calibration(const QuadratureConfig& cfg) {
    using R = Representation;
    CalibrationTable table;
    auto add = [&](const std::vector<R>& reps, const std::vector<double>& eig) {
        CalibrationTable part = calibrate(reps, split(eig), cfg);
        for (auto& e : part.entries) table.entries.push_back(std::move(e));
    };
    add({R::direct, R::separated, R::det_oracle}, {0.5});
    add({R::direct, R::separated, R::n2_double, R::n2_single, R::n2_green, R::det_oracle},
        {0.5, -0.5});
    add({R::separated, R::det_oracle}, {0.8, 0.1, -0.9});
    return table;
}

ScaleAudit audit_airy_scale(const QuadratureConfig& cfg) {
    QuadratureConfig ecfg = cfg;
    ecfg.rotation_angle = contour_angle(cfg);

    // eta-integral of the 2-D reduced form at fixed u = p^2 - xi: the engine
    // evaluates int exp(i(2 t^3/3 + 2 u t)) dt on a u-grid straddling the
    // turning point.
    const int n = 41;
    std::vector<double> us(n), g(n);
    for (int i = 0; i < n; ++i) {
        us[i] = -2.0 + 4.0 * i / (n - 1);
        g[i] = cubic_phase_integral(2.0, 2.0 * us[i], ecfg).value.real();
    }
    double gg = 0.0;
    for (double v : g) gg += v * v;

    // residual of the best linear fit g ~ a * Ai(b*u) as a function of b
    auto resid = [&](double b) {
        double mm = 0.0, gm = 0.0;
        for (int i = 0; i < n; ++i) {
            const double m = airy(b * us[i], 0).ai_std;
            mm += m * m;
            gm += g[i] * m;
        }
        if (mm <= 0.0) return gg;
        return gg - gm * gm / mm;
    };

    double best_b = 1.0, best_r = resid(1.0);
    const int steps = 1600;
    for (int i = 1; i <= steps; ++i) {
        const double b = 1.0 + 0.8 * i / steps;
        const double rv = resid(b);
        if (rv < best_r) {
            best_r = rv;
            best_b = b;
        }
    }
    // parabolic refinement on the scan triplet around the minimum
    {
        const double h = 0.8 / steps;
        const double rm = resid(best_b - h), rp = resid(best_b + h);
        const double den = rm - 2.0 * best_r + rp;
        if (den > 0.0) {
            best_b += 0.5 * h * (rm - rp) / den;
            best_r = resid(best_b);
        }
    }

    ScaleAudit audit;
    audit.fitted_scale = best_b;
    audit.fit_residual = std::sqrt(std::max(best_r, 0.0) / gg);

    // half-width where the squared residual doubles
    const double target = 2.0 * std::max(best_r, 1e-30);
    double lo = best_b, hi = best_b;
    while (best_b - lo < 0.5 && resid(lo) < target) lo -= 1e-4;
    while (hi - best_b < 0.5 && resid(hi) < target) hi += 1e-4;
    audit.ci_halfwidth = 0.5 * ((hi - best_b) + (best_b - lo));

    for (int i = 0; i < 2; ++i)
        audit.agrees[i] =
            std::abs(best_b - audit.candidates[i]) <= std::max(3.0 * audit.ci_halfwidth, 1e-3);
    return audit;
}

} // namespace mairy

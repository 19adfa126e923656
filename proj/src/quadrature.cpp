#include "mairy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mairy {

std::string to_string(MethodTag t) {
    switch (t) {
        case MethodTag::damped_extrapolated: return "damped_extrapolated";
        case MethodTag::rotated_contour: return "rotated_contour";
        case MethodTag::direct: return "direct";
    }
    return "?";
}

static constexpr double kPi = 3.141592653589793238462643383279502884;

void QuadratureConfig::validate() const {
    if (!(damping_epsilon > 0.0)) throw DomainError("damping_epsilon must be positive");
    if (epsilon_ladder.empty()) throw DomainError("epsilon_ladder must be nonempty");
    for (std::size_t i = 0; i < epsilon_ladder.size(); ++i) {
        if (!(epsilon_ladder[i] > 0.0)) throw DomainError("epsilon_ladder entries must be positive");
        if (i > 0 && !(epsilon_ladder[i] < epsilon_ladder[i - 1]))
            throw DomainError("epsilon_ladder must be strictly decreasing");
    }
    if (!(rotation_angle >= 0.0 && rotation_angle <= kPi / 6.0 + 1e-12))
        throw DomainError("rotation_angle must lie in [0, pi/6]");
    if (!(truncation_radius > 0.0)) throw DomainError("truncation_radius must be positive");
    if (nodes_per_dim < 8) throw DomainError("nodes_per_dim must be >= 8");
    if (nodes_per_dim > 64) throw DomainError("nodes_per_dim unreasonably large (> 64)");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("tolerances must be positive");
}

QuadratureConfig parse_config_text(const std::string& text, QuadratureConfig base) {
    std::istringstream in(text);
    std::string line;
    auto trim = [](std::string s) {
        const char* ws = " \t\r\n";
        auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return std::string();
        auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError("config line without '=': " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "damping_epsilon") base.damping_epsilon = std::stod(val);
            else if (key == "rotation_angle") base.rotation_angle = std::stod(val);
            else if (key == "truncation_radius") base.truncation_radius = std::stod(val);
            else if (key == "nodes_per_dim") base.nodes_per_dim = std::stoi(val);
            else if (key == "abs_tol") base.abs_tol = std::stod(val);
            else if (key == "rel_tol") base.rel_tol = std::stod(val);
            else if (key == "exec") {
                if (val == "serial") base.policy = ExecutionPolicy::serial;
                else if (val == "parallel") base.policy = ExecutionPolicy::parallel;
                else throw DomainError("exec must be serial or parallel");
            } else if (key == "epsilon_ladder") {
                std::vector<double> ladder;
                std::istringstream ls(val);
                std::string item;
                while (std::getline(ls, item, ',')) ladder.push_back(std::stod(trim(item)));
                base.epsilon_ladder = std::move(ladder);
            } else {
                throw DomainError("unknown config key: " + key);
            }
        } catch (const std::invalid_argument&) {
            throw DomainError("unparseable config value for " + key + ": " + val);
        } catch (const std::out_of_range&) {
            throw DomainError("out-of-range config value for " + key + ": " + val);
        }
    }
    base.validate();
    return base;
}

QuadratureConfig parse_config_file(const std::string& path, QuadratureConfig base) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), base);
}

std::string config_to_text(const QuadratureConfig& cfg) {
    char buf[512];
    std::string out;
    auto emit = [&](const char* k, double v) {
        std::snprintf(buf, sizeof buf, "%s=%.15g\n", k, v);
        out += buf;
    };
    emit("damping_epsilon", cfg.damping_epsilon);
    out += "epsilon_ladder=";
    for (std::size_t i = 0; i < cfg.epsilon_ladder.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.15g", i ? "," : "", cfg.epsilon_ladder[i]);
        out += buf;
    }
    out += "\n";
    emit("rotation_angle", cfg.rotation_angle);
    emit("truncation_radius", cfg.truncation_radius);
    std::snprintf(buf, sizeof buf, "nodes_per_dim=%d\n", cfg.nodes_per_dim);
    out += buf;
    emit("abs_tol", cfg.abs_tol);
    emit("rel_tol", cfg.rel_tol);
    out += std::string("exec=") + (cfg.policy == ExecutionPolicy::parallel ? "parallel" : "serial") + "\n";
    return out;
}

// ---- Gauss-Legendre ----

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

// ---- axes ----

static void append_panel(Axis& ax, double a, double b, const std::vector<double>& gx,
                         const std::vector<double>& gw) {
    ax.panel_offsets.push_back(ax.nodes.size());
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < gx.size(); ++i) {
        ax.nodes.push_back(mid + half * gx[i]);
        ax.weights.push_back(half * gw[i]);
    }
}

Axis graded_axis(double lo, double hi, const std::function<double(double)>& freq,
                 double ppw, int gl_order, double wmax, double wmin) {
    std::vector<double> gx, gw;
    gauss_legendre(gl_order, gx, gw);
    Axis ax;
    double s = lo;
    int guard = 0;
    while (s < hi) {
        double f = std::max(freq(s), 0.5);
        double w = gl_order * 2.0 * kPi / (ppw * f);
        w = std::min({std::max(w, wmin), wmax, hi - s});
        append_panel(ax, s, s + w, gx, gw);
        s += w;
        if (++guard > 2000000) throw NonConvergence("graded_axis produced too many panels");
    }
    return ax;
}

Axis geometric_axis(double lo, double hi, double ratio, int gl_order) {
    std::vector<double> gx, gw;
    gauss_legendre(gl_order, gx, gw);
    Axis ax;
    double s = lo;
    int guard = 0;
    while (s < hi) {
        double e = std::min(s * ratio, hi);
        append_panel(ax, s, e, gx, gw);
        s = e;
        if (++guard > 2000000) throw NonConvergence("geometric_axis produced too many panels");
    }
    return ax;
}

Axis concat_axes(const Axis& a, const Axis& b) {
    Axis out = a;
    std::size_t base = out.nodes.size();
    for (auto off : b.panel_offsets) out.panel_offsets.push_back(base + off);
    out.nodes.insert(out.nodes.end(), b.nodes.begin(), b.nodes.end());
    out.weights.insert(out.weights.end(), b.weights.begin(), b.weights.end());
    return out;
}

Axis mirror_axis(const Axis& pos) {
    Axis neg;
    // negative side panels ordered from most negative toward zero
    for (std::size_t p = pos.panels(); p-- > 0;) {
        std::size_t beg = pos.panel_offsets[p];
        std::size_t end = (p + 1 < pos.panels()) ? pos.panel_offsets[p + 1] : pos.nodes.size();
        neg.panel_offsets.push_back(neg.nodes.size());
        for (std::size_t i = end; i-- > beg;) {
            neg.nodes.push_back(-pos.nodes[i]);
            neg.weights.push_back(pos.weights[i]);
        }
    }
    return concat_axes(neg, pos);
}

cplx axis_sum(const Axis& ax, ExecutionPolicy pol, const std::function<cplx(double)>& f) {
    std::size_t np = ax.panels();
    return indexed_reduce<cplx>(np, pol, [&](std::size_t p) {
        std::size_t beg = ax.panel_offsets[p];
        std::size_t end = (p + 1 < np) ? ax.panel_offsets[p + 1] : ax.nodes.size();
        cplx acc{0.0, 0.0};
        for (std::size_t i = beg; i < end; ++i) acc += f(ax.nodes[i]) * ax.weights[i];
        return acc;
    });
}

// ---- extrapolation ----

static cplx neville_at_zero(const std::vector<double>& x, const std::vector<cplx>& y,
                            double& err) {
    std::size_t n = x.size();
    std::vector<cplx> p = y;
    cplx last = p[0];
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i + j < n; ++i)
            p[i] = ((0.0 - x[i + j]) * p[i] + (x[i] - 0.0) * p[i + 1]) / (x[i] - x[i + j]);
        last = p[0];
    }
    // error: sensitivity to dropping the coarsest sample
    std::vector<cplx> q(y.begin() + 1, y.end());
    std::vector<double> xq(x.begin() + 1, x.end());
    std::vector<cplx> p2 = q;
    for (std::size_t j = 1; j < xq.size(); ++j)
        for (std::size_t i = 0; i + j < xq.size(); ++i)
            p2[i] = ((0.0 - xq[i + j]) * p2[i] + (xq[i] - 0.0) * p2[i + 1]) / (xq[i] - xq[i + j]);
    err = std::abs(last - (xq.empty() ? last : p2[0]));
    return last;
}

cplx extrapolate_to_zero(const std::vector<double>& eps, const std::vector<cplx>& val,
                         double& err) {
    std::size_t n = eps.size();
    if (n == 0) throw DomainError("empty extrapolation ladder");
    if (n == 1) {
        err = std::abs(val[0]) * 0.5;
        return val[0];
    }
    // Bulirsch-Stoer rational extrapolation to eps = 0 (diagonal walk).
    std::vector<std::vector<cplx>> T(n, std::vector<cplx>(n, cplx{0.0, 0.0}));
    bool degenerate = false;
    for (std::size_t i = 0; i < n && !degenerate; ++i) {
        T[i][0] = val[i];
        for (std::size_t j = 1; j <= i; ++j) {
            cplx tip = T[i][j - 1], tim = T[i - 1][j - 1];
            cplx timm = (j >= 2) ? T[i - 1][j - 2] : cplx{0.0, 0.0};
            cplx num = tip - tim;
            cplx inner = tip - timm;
            if (std::abs(inner) < 1e-300) { degenerate = true; break; }
            double ratio = eps[i - j] / eps[i];
            cplx den = ratio * (1.0 - num / inner) - 1.0;
            if (std::abs(den) < 1e-14 * (1.0 + std::abs(ratio))) { degenerate = true; break; }
            T[i][j] = tip + num / den;
            if (!std::isfinite(T[i][j].real()) || !std::isfinite(T[i][j].imag())) {
                degenerate = true;
                break;
            }
        }
    }
    if (degenerate) return neville_at_zero(eps, val, err);
    cplx best = T[n - 1][n - 1];
    cplx prev = T[n - 2][n - 2];
    cplx side = T[n - 1][n - 2];
    err = std::max(std::abs(best - prev), std::abs(best - side));
    return best;
}

// ---- cubic phase ----

static Evaluation cubic_phase_rotated(double a, double b,
                                      const std::function<cplx(cplx)>& weight,
                                      const QuadratureConfig& cfg) {
    const double theta = cfg.rotation_angle;
    const double s3 = std::sin(3.0 * theta), s1 = std::sin(theta);
    const double aa = std::abs(a), ab = std::abs(b);
    auto decay = [&](double s) { return (aa / 3.0) * s * s * s * s3 - ab * s * s1; };
    double smax = std::cbrt(3.0 * 40.0 / (aa * s3));
    smax = std::max(smax, 2.0 * std::sqrt(ab / aa) + 1.0);
    int guard = 0;
    while (decay(smax) < 40.0 && guard++ < 400) smax *= 1.05;
    double cap = cfg.rotated_radius();
    double trunc_err = 0.0;
    if (smax > cap) {
        smax = cap;
        trunc_err = std::exp(-std::max(decay(smax), 0.0));
    }
    auto freq = [&](double s) { return aa * s * s + ab + 1.0; };
    const cplx rot_p = std::exp(cplx{0.0, theta});
    const cplx rot_m = std::exp(cplx{0.0, -theta});
    auto integrand = [&](double s) {
        cplx rot = (s >= 0.0) ? rot_p : rot_m;
        cplx t = s * rot; // s * e^{i*theta*sgn(s)}
        cplx phase = cplx{0.0, 1.0} * (a * t * t * t / 3.0 + b * t);
        return weight(t) * std::exp(phase) * rot;
    };
    Evaluation ev;
    double ppw_c = 7.0, ppw_f = 10.0;
    Axis coarse = mirror_axis(graded_axis(0.0, smax, freq, ppw_c, cfg.nodes_per_dim, 1.0));
    Axis fine = mirror_axis(graded_axis(0.0, smax, freq, ppw_f, cfg.nodes_per_dim, 0.7));
    cplx vc = axis_sum(coarse, cfg.policy, integrand);
    cplx vf = axis_sum(fine, cfg.policy, integrand);
    ev.value = vf;
    ev.error_estimate = std::abs(vf - vc) + trunc_err + 5e-14 * (1.0 + std::abs(vf));
    ev.nodes_used = static_cast<long>(coarse.size() + fine.size());
    ev.method_tag = MethodTag::rotated_contour;
    return ev;
}

static Evaluation cubic_phase_damped(double a, double b,
                                     const std::function<cplx(cplx)>& weight,
                                     const QuadratureConfig& cfg) {
    const double aa = std::abs(a), ab = std::abs(b);
    auto freq = [&](double s) { return aa * s * s + ab + 1.0; };
    std::vector<cplx> ladder_vals;
    double trunc_max = 0.0;
    long nodes = 0;
    for (double eps : cfg.epsilon_ladder) {
        double R = std::min(cfg.truncation_radius, std::sqrt(34.0 / eps));
        Axis ax = mirror_axis(graded_axis(0.0, R, freq, 7.0, cfg.nodes_per_dim, 1.0));
        cplx v = axis_sum(ax, cfg.policy, [&](double s) {
            cplx t{s, 0.0};
            cplx phase = cplx{0.0, 1.0} * (a * s * s * s / 3.0 + b * s);
            return weight(t) * std::exp(phase) * std::exp(-eps * s * s);
        });
        ladder_vals.push_back(v);
        nodes += static_cast<long>(ax.size());
        trunc_max = std::max(trunc_max,
                             8.0 * std::exp(-eps * R * R) / std::max(1.0, aa * R * R + ab));
    }
    double exerr = 0.0;
    cplx v0 = extrapolate_to_zero(cfg.epsilon_ladder, ladder_vals, exerr);
    Evaluation ev;
    ev.value = v0;
    ev.error_estimate = exerr + trunc_max;
    ev.nodes_used = nodes;
    ev.method_tag = MethodTag::damped_extrapolated;
    double scale = std::abs(v0);
    for (const auto& lv : ladder_vals) scale = std::max(scale, std::abs(lv));
    if (ev.error_estimate > 0.25 * scale + 1e4 * cfg.abs_tol)
        throw NonConvergence("cubic_phase_integral: damping ladder did not stabilize");
    return ev;
}

Evaluation cubic_phase_integral(double a, double b, const std::function<cplx(cplx)>& weight,
                                const QuadratureConfig& cfg) {
    cfg.validate();
    if (a == 0.0) throw DomainError("cubic_phase_integral requires a != 0");
    if (cfg.rotation_angle > 0.0) return cubic_phase_rotated(a, b, weight, cfg);
    return cubic_phase_damped(a, b, weight, cfg);
}

Evaluation cubic_phase_integral(double a, double b, const QuadratureConfig& cfg) {
    return cubic_phase_integral(a, b, [](cplx) { return cplx{1.0, 0.0}; }, cfg);
}

// ---- damped lattice ----

Evaluation damped_lattice_integral(const std::function<cplx(const std::vector<double>&)>& f,
                                   int d, const QuadratureConfig& cfg) {
    cfg.validate();
    if (d < 1 || d > 4) throw DomainError("damped_lattice_integral supports 1 <= d <= 4");
    auto freq = [](double s) { return s * s + 4.0; };
    double ppw = (d >= 3) ? 2.5 : 7.0;
    long nodes = 0;
    auto rung = [&](double eps, double R) {
        Axis ax = mirror_axis(graded_axis(0.0, R, freq, ppw, cfg.nodes_per_dim, 1.2));
        std::size_t n = ax.size();
        long total = 1;
        for (int k = 0; k < d; ++k) total *= static_cast<long>(n);
        nodes += total;
        return indexed_reduce<cplx>(n, cfg.policy, [&](std::size_t i0) {
            std::vector<double> t(static_cast<std::size_t>(d), 0.0);
            t[0] = ax.nodes[i0];
            cplx acc{0.0, 0.0};
            // odometer over the remaining d-1 axes, innermost varies fastest
            std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
            if (d == 1) {
                double r2 = t[0] * t[0];
                return f(t) * ax.weights[i0] * std::exp(-eps * r2);
            }
            bool done = false;
            while (!done) {
                double wprod = ax.weights[i0];
                double r2 = t[0] * t[0];
                for (int k = 1; k < d; ++k) {
                    t[static_cast<std::size_t>(k)] = ax.nodes[idx[static_cast<std::size_t>(k)]];
                    wprod *= ax.weights[idx[static_cast<std::size_t>(k)]];
                    r2 += t[static_cast<std::size_t>(k)] * t[static_cast<std::size_t>(k)];
                }
                acc += f(t) * wprod * std::exp(-eps * r2);
                int k = d - 1;
                while (k >= 1) {
                    if (++idx[static_cast<std::size_t>(k)] < n) break;
                    idx[static_cast<std::size_t>(k)] = 0;
                    --k;
                }
                if (k == 0) done = true;
            }
            return acc;
        });
    };
    auto radius = [&](double eps) {
        double R = std::min(cfg.truncation_radius, std::sqrt(34.0 / eps));
        if (d >= 3) R = std::min(R, 4.5);
        return R;
    };
    std::vector<cplx> ladder_vals;
    for (double eps : cfg.epsilon_ladder) ladder_vals.push_back(rung(eps, radius(eps)));
    // truncation measured directly: contribution of the outer shell at the
    // least-damped rung
    double eps_min = cfg.epsilon_ladder.back();
    cplx shrunk = rung(eps_min, 0.8 * radius(eps_min));
    double trunc_emp = 2.0 * std::abs(ladder_vals.back() - shrunk);
    double exerr = 0.0;
    cplx v0 = extrapolate_to_zero(cfg.epsilon_ladder, ladder_vals, exerr);
    Evaluation ev;
    ev.value = v0;
    ev.error_estimate = exerr + trunc_emp;
    ev.nodes_used = nodes;
    ev.method_tag = MethodTag::damped_extrapolated;
    double scale = std::abs(v0);
    for (const auto& lv : ladder_vals) scale = std::max(scale, std::abs(lv));
    if (ev.error_estimate > 0.25 * scale + 1e4 * cfg.abs_tol)
        throw NonConvergence("damped_lattice_integral: damping ladder did not stabilize");
    return ev;
}

} // namespace mairy

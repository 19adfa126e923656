#include "mairy/hciz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mairy {

InvariantIntegrand register_integrand(std::function<cplx(const Spectrum&)> eigen_fn,
                                      DecayHint hint, const Spectrum& probe,
                                      unsigned long seed) {
    std::mt19937_64 rng(seed);
    cplx ref = eigen_fn(probe);
    std::vector<double> vals = probe.values;
    for (int t = 0; t < 5; ++t) {
        std::shuffle(vals.begin(), vals.end(), rng);
        cplx got = eigen_fn(Spectrum(vals));
        if (std::abs(got - ref) > 1e-10 * (1.0 + std::abs(ref)))
            throw DomainError("register_integrand: eigen_fn not permutation symmetric");
    }
    return InvariantIntegrand{std::move(eigen_fn), hint};
}

static cplx ipi_power(int m) {
    static constexpr double kPi = 3.141592653589793238462643383279502884;
    cplx out{1.0, 0.0};
    for (int k = 0; k < m; ++k) out *= cplx{0.0, kPi};
    return out;
}

// Tensor Gauss-Legendre integral of g over R^N for integrands with their own
// decay (no damping); refinement difference doubles as the error estimate.
static Evaluation tensor_gl(const std::function<cplx(const std::vector<double>&)>& g, int n,
                            double freq_floor, const QuadratureConfig& cfg) {
    auto freq = [freq_floor](double s) { return s * s + freq_floor; };
    const double R = std::min(cfg.truncation_radius, 5.85); // exp(-34) for unit Gaussians
    auto pass = [&](double ppw) {
        Axis ax = mirror_axis(graded_axis(0.0, R, freq, ppw, cfg.nodes_per_dim, 1.2));
        const std::size_t nn = ax.size();
        cplx v = indexed_reduce<cplx>(nn, cfg.policy, [&](std::size_t i0) {
            std::vector<double> t(static_cast<std::size_t>(n), 0.0);
            t[0] = ax.nodes[i0];
            if (n == 1) return g(t) * ax.weights[i0];
            std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
            cplx acc{0.0, 0.0};
            bool done = false;
            while (!done) {
                double w = ax.weights[i0];
                for (int k = 1; k < n; ++k) {
                    t[static_cast<std::size_t>(k)] = ax.nodes[idx[static_cast<std::size_t>(k)]];
                    w *= ax.weights[idx[static_cast<std::size_t>(k)]];
                }
                acc += g(t) * w;
                int k = n - 1;
                while (k >= 1) {
                    if (++idx[static_cast<std::size_t>(k)] < nn) break;
                    idx[static_cast<std::size_t>(k)] = 0;
                    --k;
                }
                if (k == 0) done = true;
            }
            return acc;
        });
        long used = 1;
        for (int k = 0; k < n; ++k) used *= static_cast<long>(nn);
        return std::pair<cplx, long>(v, used);
    };
    auto [vc, nc] = pass(7.0);
    auto [vf, nf] = pass(10.0);
    Evaluation ev;
    ev.value = vf;
    ev.error_estimate = std::abs(vf - vc) + 5e-14 * (1.0 + std::abs(vf));
    ev.nodes_used = nc + nf;
    ev.method_tag = MethodTag::direct;
    return ev;
}

Evaluation reduced_integral(const InvariantIntegrand& f, const Spectrum& Q,
                            const QuadratureConfig& cfg) {
    cfg.validate();
    const int n = Q.N;
    if (n > 3) throw DomainError("reduced_integral: N <= 3 supported");
    const double gap_tol = 1e-8 * (1.0 + Q.spread());
    for (int j = 0; j + 1 < n; ++j)
        if (Q.values[static_cast<std::size_t>(j)] - Q.values[static_cast<std::size_t>(j + 1)] <
            gap_tol)
            throw ConfluentSpectrum("reduced_integral: Q has (nearly) coincident entries");

    double qmax = 0.0;
    for (double q : Q.values) qmax = std::max(qmax, std::abs(q));
    auto g = [&](const std::vector<double>& p) {
        double phase = 0.0;
        for (int j = 0; j < n; ++j)
            phase -= Q.values[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(j)];
        return f.eigen_fn(Spectrum(p)) * vandermonde_raw(p) * std::exp(cplx{0.0, phase});
    };

    Evaluation ev = (f.decay_hint == DecayHint::schwartz)
                        ? tensor_gl(g, n, qmax + 1.0, cfg)
                        : damped_lattice_integral(g, n, cfg);
    cplx pref = ipi_power(n * (n - 1) / 2) / vandermonde(Q);
    ev.value *= pref;
    ev.error_estimate *= std::abs(pref);
    return ev;
}

namespace {

struct McAcc {
    cplx sum{0.0, 0.0};
    double sum_sq = 0.0;
    McAcc& operator+=(const McAcc& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        return *this;
    }
};

} // namespace

Evaluation direct_matrix_integral(const InvariantIntegrand& f, const Spectrum& Q, long samples,
                                  unsigned long seed, ExecutionPolicy policy) {
    const int n = Q.N;
    if (n > 2) throw DomainError("direct_matrix_integral: N <= 2 only");
    if (f.decay_hint != DecayHint::schwartz)
        throw DomainError("direct_matrix_integral: Schwartz-class integrands only");
    if (samples < 10000) throw DomainError("direct_matrix_integral: samples >= 1e4 required");

    static constexpr double kPi = 3.141592653589793238462643383279502884;
    // proposal matched to exp(-tr Y^2), widened by 1.2x in each std deviation
    const double sd = 1.2 * std::sqrt(0.5);  // diagonal entries
    const double so = 1.2 * std::sqrt(0.25); // off-diagonal real/imag parts
    const int kChunks = 64;
    const long per = samples / kChunks;
    const long extra = samples % kChunks;

    McAcc total = indexed_reduce<McAcc>(static_cast<std::size_t>(kChunks), policy,
                                        [&](std::size_t c) {
        std::mt19937_64 rng(seed * 64 + c);
        std::normal_distribution<double> gd(0.0, sd), go(0.0, so);
        const long m = per + (static_cast<long>(c) < extra ? 1 : 0);
        McAcc acc;
        std::vector<double> eig(static_cast<std::size_t>(n));
        for (long i = 0; i < m; ++i) {
            double logg;
            double trqy;
            if (n == 1) {
                double u = gd(rng);
                eig[0] = u;
                trqy = Q.values[0] * u;
                logg = -0.5 * u * u / (sd * sd) - std::log(sd * std::sqrt(2.0 * kPi));
            } else {
                double u = gd(rng), v = gd(rng);
                double wr = go(rng), wi = go(rng);
                double half = 0.5 * (u - v);
                double disc = std::sqrt(half * half + wr * wr + wi * wi);
                eig[0] = 0.5 * (u + v) + disc;
                eig[1] = 0.5 * (u + v) - disc;
                trqy = Q.values[0] * u + Q.values[1] * v;
                logg = -0.5 * (u * u + v * v) / (sd * sd) -
                       0.5 * (wr * wr + wi * wi) / (so * so) -
                       2.0 * std::log(sd * std::sqrt(2.0 * kPi)) -
                       2.0 * std::log(so * std::sqrt(2.0 * kPi));
            }
            cplx w = f.eigen_fn(Spectrum(eig)) * std::exp(cplx{0.0, -trqy}) * std::exp(-logg);
            acc.sum += w;
            acc.sum_sq += std::norm(w);
        }
        return acc;
    });

    const double ns = static_cast<double>(samples);
    cplx mean = total.sum / ns;
    double var = std::max(0.0, total.sum_sq / ns - std::norm(mean));
    Evaluation ev;
    ev.value = mean;
    ev.error_estimate = std::sqrt(var / ns);
    ev.nodes_used = samples;
    ev.method_tag = MethodTag::direct;
    return ev;
}

} // namespace mairy

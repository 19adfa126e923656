#include "mairy/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mairy {

Spectrum::Spectrum(std::vector<double> v) : values(std::move(v)) {
    if (values.empty()) throw DomainError("Spectrum: need at least one eigenvalue");
    for (double x : values)
        if (!std::isfinite(x)) throw DomainError("Spectrum: entries must be finite");
    std::sort(values.begin(), values.end(), std::greater<double>());
    N = static_cast<int>(values.size());
}

double Spectrum::spread() const { return values.front() - values.back(); }

MatrixArgument split(const std::vector<double>& raw) {
    if (raw.empty()) throw DomainError("split: empty eigenvalue list");
    double xi = 0.0;
    for (double x : raw) xi += x;
    xi /= static_cast<double>(raw.size());
    std::vector<double> t(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) t[i] = raw[i] - xi;
    return MatrixArgument{xi, Spectrum(std::move(t))};
}

double vandermonde_raw(const std::vector<double>& p) {
    double v = 1.0;
    for (std::size_t j = 0; j < p.size(); ++j)
        for (std::size_t k = j + 1; k < p.size(); ++k) v *= p[j] - p[k];
    return v;
}

double vandermonde(const Spectrum& P) { return vandermonde_raw(P.values); }

double spherical_measure(const Spectrum& P) {
    double v = vandermonde(P);
    return v * v;
}

namespace detail {

cplx det_lu(std::vector<cplx>& a, int n) {
    cplx det{1.0, 0.0};
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(a[static_cast<std::size_t>(c) * n + c]);
        for (int r = c + 1; r < n; ++r) {
            double m = std::abs(a[static_cast<std::size_t>(r) * n + c]);
            if (m > best) {
                best = m;
                piv = r;
            }
        }
        if (best == 0.0) return cplx{0.0, 0.0};
        if (piv != c) {
            for (int k = c; k < n; ++k)
                std::swap(a[static_cast<std::size_t>(piv) * n + k],
                          a[static_cast<std::size_t>(c) * n + k]);
            det = -det;
        }
        cplx d = a[static_cast<std::size_t>(c) * n + c];
        det *= d;
        for (int r = c + 1; r < n; ++r) {
            cplx f = a[static_cast<std::size_t>(r) * n + c] / d;
            for (int k = c + 1; k < n; ++k)
                a[static_cast<std::size_t>(r) * n + k] -= f * a[static_cast<std::size_t>(c) * n + k];
        }
    }
    return det;
}

} // namespace detail

// Cluster nonincreasing values into groups of coincident entries.
static void cluster(const std::vector<double>& v, double tol, std::vector<double>& means,
                    std::vector<int>& sizes) {
    means.clear();
    sizes.clear();
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i + 1;
        while (j < v.size() && v[j - 1] - v[j] < tol) ++j;
        double m = 0.0;
        for (std::size_t k = i; k < j; ++k) m += v[k];
        means.push_back(m / static_cast<double>(j - i));
        sizes.push_back(static_cast<int>(j - i));
        i = j;
    }
}

cplx spherical_phi(const Spectrum& P, const Spectrum& Q) {
    if (P.N != Q.N) throw DimensionMismatch("spherical_phi: P.N != Q.N");
    // Phi is symmetric in (P, Q); evaluate in a fixed argument order so the
    // symmetry holds bitwise, not just to rounding.
    if (std::lexicographical_compare(P.values.begin(), P.values.end(), Q.values.begin(),
                                     Q.values.end()))
        return spherical_phi(Q, P);
    const int n = P.N;
    if (n == 1) return std::exp(cplx{0.0, Q.values[0] * P.values[0]});

    const double tol = 1e-8 * (1.0 + std::max(P.spread(), Q.spread()));
    std::vector<double> pm, qm;
    std::vector<int> ps, qs;
    cluster(P.values, tol, pm, ps);
    cluster(Q.values, tol, qm, qs);

    const bool generic = (static_cast<int>(pm.size()) == n && static_cast<int>(qm.size()) == n);
    if (generic) {
        std::vector<cplx> m(static_cast<std::size_t>(n) * n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                m[static_cast<std::size_t>(j) * n + k] =
                    std::exp(cplx{0.0, Q.values[static_cast<std::size_t>(j)] *
                                           P.values[static_cast<std::size_t>(k)]});
        cplx det = detail::det_lu(m, n);
        return det / (vandermonde(P) * vandermonde(Q));
    }

    // Confluent limit: a q-group of size m contributes derivative rows
    // d^l/dq^l e^{iqp} / l!, l = 0..m-1, and likewise for p-columns; the
    // Vandermonde reduces to group means with multiplicity exponents. Row
    // (group a, order l), column (group b, order l'):
    //   e^{i qa pb} * sum_m i^{l+l'-m} pb^{l-m} qa^{l'-m} / (m!(l-m)!(l'-m)!)
    // (Leibniz expansion of the mixed derivative of e^{iqp}: the row order l
    // differentiates in q, producing powers of p, and conversely).
    std::vector<cplx> mat(static_cast<std::size_t>(n) * n);
    int row = 0;
    for (std::size_t a = 0; a < qm.size(); ++a) {
        for (int l1 = 0; l1 < qs[a]; ++l1, ++row) {
            int col = 0;
            for (std::size_t b = 0; b < pm.size(); ++b) {
                const cplx e = std::exp(cplx{0.0, qm[a] * pm[b]});
                for (int l2 = 0; l2 < ps[b]; ++l2, ++col) {
                    cplx sum{0.0, 0.0};
                    for (int mm = 0; mm <= std::min(l1, l2); ++mm) {
                        double fact = 1.0;
                        for (int t = 2; t <= mm; ++t) fact *= t;
                        for (int t = 2; t <= l1 - mm; ++t) fact *= t;
                        for (int t = 2; t <= l2 - mm; ++t) fact *= t;
                        cplx ip = std::pow(cplx{0.0, 1.0}, l1 + l2 - mm);
                        sum += ip * std::pow(pm[b], l1 - mm) * std::pow(qm[a], l2 - mm) / fact;
                    }
                    mat[static_cast<std::size_t>(row) * n + col] = e * sum;
                }
            }
        }
    }
    cplx det = detail::det_lu(mat, n);
    double vp = 1.0, vq = 1.0;
    for (std::size_t a = 0; a < pm.size(); ++a)
        for (std::size_t b = a + 1; b < pm.size(); ++b)
            vp *= std::pow(pm[a] - pm[b], ps[a] * ps[b]);
    for (std::size_t a = 0; a < qm.size(); ++a)
        for (std::size_t b = a + 1; b < qm.size(); ++b)
            vq *= std::pow(qm[a] - qm[b], qs[a] * qs[b]);
    int sgn_pairs = 0;
    for (int s : ps) sgn_pairs += s * (s - 1) / 2;
    for (int s : qs) sgn_pairs += s * (s - 1) / 2;
    double sgn = (sgn_pairs % 2 == 0) ? 1.0 : -1.0;
    return sgn * det / (vp * vq);
}

Spectrum parse_spectrum(const std::string& csv) {
    std::vector<double> vals;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t pos = 0;
            double v = std::stod(item, &pos);
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
            if (pos != item.size()) throw std::invalid_argument(item);
            vals.push_back(v);
        } catch (const std::exception&) {
            throw DomainError("parse_spectrum: bad entry '" + item + "'");
        }
    }
    if (vals.empty()) throw DomainError("parse_spectrum: empty list");
    return Spectrum(std::move(vals));
}

std::string print_spectrum(const Spectrum& s) {
    std::string out;
    char buf[64];
    for (int i = 0; i < s.N; ++i) {
        std::snprintf(buf, sizeof buf, "%s%.15g", i ? "," : "",
                      s.values[static_cast<std::size_t>(i)]);
        out += buf;
    }
    return out;
}

} // namespace mairy

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "mairy/spectra.hpp"

using mairy::cplx;
using mairy::Spectrum;

namespace {

// permutation-sum oracle: det{e^{i q_j p_k}} / (V(P) V(Q)) expanded literally
cplx phi_oracle(const Spectrum& P, const Spectrum& Q) {
    const int n = P.N;
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    cplx det{0.0, 0.0};
    std::vector<int> perm = idx;
    do {
        // parity by counting inversions
        int inv = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (perm[a] > perm[b]) ++inv;
        double phase = 0.0;
        for (int j = 0; j < n; ++j) phase += Q.values[j] * P.values[perm[j]];
        det += (inv % 2 ? -1.0 : 1.0) * std::exp(cplx{0.0, phase});
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det / (mairy::vandermonde(P) * mairy::vandermonde(Q));
}

} // namespace

TEST_CASE("spectrum storage and splitting") {
    Spectrum s({1.0, 3.0, -1.0});
    CHECK(s.N == 3);
    CHECK(s.values == std::vector<double>{3.0, 1.0, -1.0}); // nonincreasing
    CHECK(s.spread() == doctest::Approx(4.0));

    mairy::MatrixArgument X = mairy::split({3.0, 1.0, -1.0});
    CHECK(X.xi == doctest::Approx(1.0));
    CHECK(X.traceless.values == std::vector<double>{2.0, 0.0, -2.0});

    CHECK_THROWS_AS(Spectrum({}), mairy::DomainError);
    CHECK_THROWS_AS(mairy::split({}), mairy::DomainError);
}

TEST_CASE("vandermonde") {
    CHECK(mairy::vandermonde(Spectrum({3.0, 2.0, 1.0})) == doctest::Approx(2.0));
    CHECK(mairy::vandermonde_raw({1.0, 2.0}) == doctest::Approx(-1.0));
    CHECK(mairy::vandermonde_raw({2.0, 1.0}) == doctest::Approx(1.0));
    // antisymmetry under a transposition
    CHECK(mairy::vandermonde_raw({0.3, 1.7, -0.4}) ==
          doctest::Approx(-mairy::vandermonde_raw({1.7, 0.3, -0.4})));
    CHECK(mairy::spherical_measure(Spectrum({2.0, 0.0})) == doctest::Approx(4.0));
}

TEST_CASE("spherical function: oracle, symmetry, input-order invariance") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> gap(0.3, 1.0);
    // separated eigenvalues keep the Vandermonde division in the oracle
    // well-conditioned; coincidence handling is tested separately
    auto draw = [&](int n) {
        std::vector<double> v(static_cast<std::size_t>(n));
        v[0] = u(rng);
        for (int i = 1; i < n; ++i) v[static_cast<std::size_t>(i)] = v[i - 1] - gap(rng);
        return v;
    };
    for (int n : {2, 3, 4}) {
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> pv = draw(n), qv = draw(n);
            Spectrum P(pv), Q(qv);
            cplx v = mairy::spherical_phi(P, Q);

            cplx want = phi_oracle(P, Q);
            CHECK(std::abs(v - want) <= 1e-10 * (1.0 + std::abs(want)));

            // P <-> Q symmetry
            cplx sw = mairy::spherical_phi(Q, P);
            CHECK(std::abs(v - sw) <= 1e-12 * (1.0 + std::abs(v)));

            // invariance under permuting the raw inputs
            std::vector<double> pv2 = pv, qv2 = qv;
            std::shuffle(pv2.begin(), pv2.end(), rng);
            std::shuffle(qv2.begin(), qv2.end(), rng);
            cplx pm = mairy::spherical_phi(Spectrum(pv2), Spectrum(qv2));
            CHECK(std::abs(v - pm) <= 1e-12 * (1.0 + std::abs(v)));
        }
    }
}

TEST_CASE("closed form at opposite pairs") {
    for (double p : {0.3, 1.1, 2.4})
        for (double q : {0.2, 0.9, 1.7}) {
            cplx v = mairy::spherical_phi(Spectrum({p, -p}), Spectrum({q, -q}));
            cplx want = cplx{0.0, 1.0} * std::sin(2.0 * p * q) / (2.0 * p * q);
            CHECK(std::abs(v - want) <= 1e-12 * (1.0 + std::abs(want)));
        }
    // N=1 reduces to a plain phase
    cplx v1 = mairy::spherical_phi(Spectrum({0.7}), Spectrum({-1.2}));
    CHECK(std::abs(v1 - std::exp(cplx{0.0, -0.84})) < 1e-14);
}

TEST_CASE("confluent columns match the coalescing limit") {
    Spectrum Q({1.3, -0.4});
    const double a = 0.6;
    cplx conf = mairy::spherical_phi(Spectrum({a, a}), Q);
    auto at = [&](double h) { return mairy::spherical_phi(Spectrum({a + h, a - h}), Q); };
    const double h = 1e-3;
    cplx rich = (4.0 * at(h / 2.0) - at(h)) / 3.0; // phi is even in h
    CHECK(std::abs(conf - rich) < 1e-6);

    Spectrum Q3({1.3, 0.2, -0.4});
    cplx conf3 = mairy::spherical_phi(Spectrum({a, a, -1.0}), Q3);
    auto at3 = [&](double h2) {
        return mairy::spherical_phi(Spectrum({a + h2, a - h2, -1.0}), Q3);
    };
    cplx rich3 = (4.0 * at3(h / 2.0) - at3(h)) / 3.0;
    CHECK(std::abs(conf3 - rich3) < 1e-6);

    // fully confluent pair against the N=2 closed form limit p -> 0
    cplx v0 = mairy::spherical_phi(Spectrum({0.0, 0.0}), Spectrum({0.9, -0.9}));
    CHECK(std::abs(v0 - cplx{0.0, 1.0}) < 1e-12); // i*sin(2pq)/(2pq) -> i
}

TEST_CASE("parsing") {
    Spectrum s = mairy::parse_spectrum("1.5,0.5,-2");
    CHECK(s.values == std::vector<double>{1.5, 0.5, -2.0});
    CHECK_THROWS_AS(mairy::parse_spectrum(""), mairy::DomainError);
    CHECK_THROWS_AS(mairy::parse_spectrum("1,,2"), mairy::DomainError);
    CHECK_THROWS_AS(mairy::parse_spectrum("1,abc"), mairy::DomainError);
    CHECK(mairy::print_spectrum(s).size() > 0);

    CHECK_THROWS_AS(mairy::spherical_phi(Spectrum({1.0}), Spectrum({1.0, 2.0})),
                    mairy::DimensionMismatch);
}

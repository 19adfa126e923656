#pragma once
#include <string>
#include <vector>

#include "mairy/quadrature.hpp"

namespace mairy {

// Diagonal of a Hermitian matrix argument. Entries are kept in nonincreasing
// order; every operation on spectra is symmetric, so the ordering is a
// storage convention only.
struct Spectrum {
    std::vector<double> values;
    int N = 0;

    explicit Spectrum(std::vector<double> v);
    double spread() const; // max - min
};

// X = xi*I + traceless part, xi = tr X / N.
struct MatrixArgument {
    double xi = 0.0;
    Spectrum traceless;
};

MatrixArgument split(const std::vector<double>& raw_eigenvalues);

// V(P) = prod_{j<k} (p_j - p_k) over the stored (nonincreasing) order.
double vandermonde(const Spectrum& P);
// Order-sensitive variant (antisymmetric under transpositions).
double vandermonde_raw(const std::vector<double>& p);

// Zonal spherical function det{exp(i q_j p_k)} / (V(P) V(Q)), with the
// coincident-eigenvalue 0/0 limit taken via confluent derivative columns.
cplx spherical_phi(const Spectrum& P, const Spectrum& Q);

// dmu = V(P)^2 dP
double spherical_measure(const Spectrum& P);

Spectrum parse_spectrum(const std::string& csv);
std::string print_spectrum(const Spectrum& s);

namespace detail {
// LU determinant with partial pivoting; a is row-major n x n, destroyed.
cplx det_lu(std::vector<cplx>& a, int n);
} // namespace detail

} // namespace mairy

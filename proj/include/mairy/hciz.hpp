#pragma once
#include <functional>

#include "mairy/spectra.hpp"

namespace mairy {

enum class DecayHint { schwartz, oscillatory };

// Conjugation-invariant integrand, represented by its value on eigenvalues.
struct InvariantIntegrand {
    std::function<cplx(const Spectrum&)> eigen_fn;
    DecayHint decay_hint = DecayHint::schwartz;
};

// Builds an InvariantIntegrand after spot-checking permutation symmetry of
// eigen_fn on 5 shuffles of the probe spectrum (1e-10 relative).
InvariantIntegrand register_integrand(std::function<cplx(const Spectrum&)> eigen_fn,
                                      DecayHint hint, const Spectrum& probe,
                                      unsigned long seed = 1234);

// Eigenvalue-space reduction of the unitary-invariant matrix integral
//   I(Q) = integral of f(Y) exp(-i tr(QY)) dY over Hermitian N x N,
// evaluated as (i*pi)^{N(N-1)/2} / V(Q) * integral over R^N of
//   f(P) V(P) exp(-i tr(QP)) d^N P.
// The V(P)-linear kernel and the (i*pi)^m prefactor are pinned jointly with
// the flat Lebesgue measure on the matrix coordinates by the N=2 Gaussian
// closed form (pi^2/2) e^{-q^2/2} and the Monte-Carlo oracle below.
Evaluation reduced_integral(const InvariantIntegrand& f, const Spectrum& Q,
                            const QuadratureConfig& cfg = QuadratureConfig{});

// Monte-Carlo oracle for the same matrix integral, N <= 2, Schwartz-class f
// only. Importance sampling from a Gaussian matched to exp(-tr Y^2); value
// with 1-sigma statistical error; identical (samples, seed) give identical
// output independent of thread count.
Evaluation direct_matrix_integral(const InvariantIntegrand& f, const Spectrum& Q,
                                  long samples, unsigned long seed,
                                  ExecutionPolicy policy = ExecutionPolicy::serial);

} // namespace mairy

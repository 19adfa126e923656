#pragma once
#include "mairy/quadrature.hpp"

namespace mairy {

// ai_std is the classical Airy function Ai (the one with Ai(0) =
// 3^{-2/3}/Gamma(2/3)); ai_paper carries the 2*pi normalization used by the
// integral representations in this library: ai_paper = 2*pi*ai_std.
struct AiryValue {
    double x = 0.0;
    double ai_std = 0.0;
    double ai_paper = 0.0;
    int derivative_order = 0;
};

// Evaluate Ai^{(k)}(x) for 0 <= k <= 6 on |x| <= 30.
// Branches: Maclaurin series near the origin, Taylor transport of the
// defining ODE anchored at |x| = 9 in between, Poincare asymptotics beyond.
AiryValue airy(double x, int derivative_order = 0);

// Same quantity as ai_paper via the oscillatory quadrature engine:
// integral of exp(i(t^3/3 + x t)) over the real line.
Evaluation airy_via_quadrature(double x, const QuadratureConfig& cfg = QuadratureConfig{});

namespace detail {
// Individual branch evaluators (value and first derivative), exposed so the
// hand-off regions can be checked against each other.
void ai_series(double x, double& ai, double& aip);
void ai_transport(double x, double& ai, double& aip);
void ai_asymptotic(double x, double& ai, double& aip);
} // namespace detail

} // namespace mairy

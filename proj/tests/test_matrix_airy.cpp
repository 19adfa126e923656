#include <cmath>
#include <vector>

#include "doctest.h"
#include "mairy/matrix_airy.hpp"

using mairy::cplx;
using mairy::Representation;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// frozen cross-validated values (agreed among all N=2 representations and the
// derivative-determinant form to ~1e-8 relative)
const double kA_r2 = 5.20027949256;     // eigenvalues (1, -1):  xi = 0, r = 2
const double kA_r1 = 7.40576736202;     // xi = 0, r = 1
const double kA_x1r1 = 29.9936344687;   // xi = 1, r = 1
const double kSep3_conf = 97.5767272522412; // A(0.3 * I), N = 3

} // namespace

TEST_CASE("representation tags round-trip; supported ranges") {
    for (Representation r :
         {Representation::direct, Representation::separated, Representation::n2_double,
          Representation::n2_single, Representation::n2_green, Representation::det_oracle}) {
        CHECK(mairy::parse_representation(mairy::to_string(r)) == r);
    }
    CHECK_THROWS_AS(mairy::parse_representation("nope"), mairy::DomainError);
    CHECK(mairy::supported_N(Representation::direct).contains(2));
    CHECK(!mairy::supported_N(Representation::direct).contains(3));
    CHECK(mairy::supported_N(Representation::separated).contains(4));
    CHECK(mairy::supported_N(Representation::n2_single).lo == 2);
    CHECK(mairy::supported_N(Representation::det_oracle).hi == 4);
}

TEST_CASE("N=1: every applicable representation reduces to the scalar function") {
    for (double x : {-3.0, -1.0, 0.0, 1.0, 2.0}) {
        const double want = mairy::airy(-x).ai_paper;
        mairy::MatrixArgument X = mairy::split({x});
        CHECK(rel(mairy::airy_direct(X).value, {want, 0.0}) < 1e-7);
        CHECK(rel(mairy::airy_separated(X).value, {want, 0.0}) < 1e-10);
        CHECK(rel(mairy::airy_det_oracle(X).value, {want, 0.0}) < 1e-12);
    }
}

TEST_CASE("derivative-determinant value is real for Hermitian arguments") {
    for (auto eig : {std::vector<double>{1.0, -1.0}, {1.3, 0.2, -0.7}, {1.5, 0.5, -0.5, -1.5}}) {
        mairy::Evaluation ev = mairy::airy_det_oracle(mairy::split(eig));
        CHECK(std::abs(ev.value.imag()) <= 1e-10 * (1.0 + std::abs(ev.value.real())));
    }
    CHECK_THROWS_AS(mairy::airy_det_oracle(mairy::split({0.5, 0.5})), mairy::ConfluentSpectrum);
}

TEST_CASE("frozen N=2 values") {
    CHECK(rel(mairy::airy_det_oracle(mairy::split({1.0, -1.0})).value, {kA_r2, 0.0}) < 1e-9);
    CHECK(rel(mairy::airy_direct(mairy::split({1.0, -1.0})).value, {kA_r2, 0.0}) < 5e-6);
    CHECK(rel(mairy::airy_n2_single(0.0, 1.0).value, {kA_r1, 0.0}) < 1e-9);
    CHECK(rel(mairy::airy_n2_single(1.0, 1.0).value, {kA_x1r1, 0.0}) < 1e-9);
}

TEST_CASE("N=2 representations agree with the determinant form") {
    for (auto [xi, r] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {1.0, 2.0},
                                                               {-1.0, 0.5}}) {
        const cplx det = mairy::airy_det_oracle(mairy::n2_argument(xi, r)).value;
        CHECK(rel(mairy::airy_direct(mairy::n2_argument(xi, r)).value, det) < 5e-6);
        CHECK(rel(mairy::airy_separated(mairy::n2_argument(xi, r)).value, det) < 1e-8);
        CHECK(rel(mairy::airy_n2_double(xi, r).value, det) < 1e-7);
        CHECK(rel(mairy::airy_n2_single(xi, r).value, det) < 1e-10);
        CHECK(rel(mairy::airy_n2_green(xi, r).value, det) < 1e-8);
    }
}

TEST_CASE("error estimates cover the deviation from the determinant form") {
    for (auto [xi, r] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {-1.0, 2.0}}) {
        const cplx det = mairy::airy_det_oracle(mairy::n2_argument(xi, r)).value;
        for (Representation rep : {Representation::direct, Representation::n2_double,
                                   Representation::n2_single, Representation::n2_green}) {
            mairy::Evaluation ev =
                mairy::evaluate_representation(rep, mairy::n2_argument(xi, r), {});
            CHECK(std::abs(ev.value - det) <=
                  3.0 * ev.error_estimate + 1e-9 * std::abs(det));
        }
    }
}

TEST_CASE("2-D reduction is continuous across its small-r path switch") {
    for (double r : {0.2, 0.24, 0.26, 0.3}) {
        cplx a = mairy::airy_n2_double(0.4, r).value;
        cplx b = mairy::airy_n2_single(0.4, r).value;
        CHECK(rel(a, b) < 1e-7);
    }
}

TEST_CASE("even in r") {
    cplx p1 = mairy::airy_n2_double(0.3, 1.2).value;
    cplx m1 = mairy::airy_n2_double(0.3, -1.2).value;
    CHECK(rel(p1, m1) < 1e-10);
    cplx p2 = mairy::airy_n2_single(0.3, 1.2).value;
    cplx m2 = mairy::airy_n2_single(0.3, -1.2).value;
    CHECK(rel(p2, m2) < 1e-12);
}

TEST_CASE("contour form does not depend on the junction radius") {
    for (auto [xi, r] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {0.8, 1.5}}) {
        cplx a = mairy::airy_n2_green(xi, r, {}, 0.3).value;
        cplx b = mairy::airy_n2_green(xi, r, {}, 0.6).value;
        CHECK(rel(a, b) < 1e-8);
    }
    CHECK_THROWS_AS(mairy::airy_n2_green(0.5, -1.0), mairy::DomainError);
    CHECK_THROWS_AS(mairy::airy_n2_green(0.5, 0.0), mairy::DomainError);
}

TEST_CASE("hyperplane form, N=3: against the determinant form and at a confluent point") {
    mairy::MatrixArgument X = mairy::split({0.8, 0.1, -0.9});
    cplx det = mairy::airy_det_oracle(X).value;
    CHECK(rel(mairy::airy_separated(X).value, det) < 1e-6);

    // fully confluent argument (the determinant form cannot reach this point)
    cplx conf = mairy::airy_separated(mairy::split({0.3, 0.3, 0.3})).value;
    CHECK(rel(conf, {kSep3_conf, 0.0}) < 1e-6);
}

TEST_CASE("xi-derivative under the integral matches finite differences") {
    mairy::MatrixArgument X = mairy::n2_argument(0.2, 1.0);
    const double h = 1e-3;
    cplx fp = mairy::airy_separated(mairy::n2_argument(0.2 + h, 1.0)).value;
    cplx fm = mairy::airy_separated(mairy::n2_argument(0.2 - h, 1.0)).value;
    cplx fd = (fp - fm) / (2.0 * h);
    cplx dv = mairy::airy_separated_xi_derivative(X).value;
    CHECK(rel(dv, fd) < 1e-4);
}

TEST_CASE("matrix-coordinate damped fallback sides with the determinant form") {
    mairy::QuadratureConfig cfg;
    cfg.rotation_angle = 0.0; // select the damped 4-coordinate lattice
    cfg.epsilon_ladder = {0.2, 0.1};
    cfg.truncation_radius = 3.2;
    cfg.nodes_per_dim = 8;
    mairy::Evaluation ev = mairy::airy_direct(mairy::split({1.0, -1.0}), cfg);
    CHECK(ev.method_tag == mairy::MethodTag::damped_extrapolated);
    CHECK(rel(ev.value, {kA_r2, 0.0}) < 0.15);
}

TEST_CASE("dispatch guards") {
    CHECK_THROWS_AS(mairy::airy_direct(mairy::split({1.0, 0.0, -1.0})),
                    mairy::DimensionMismatch);
    CHECK_THROWS_AS(mairy::evaluate_representation(Representation::n2_double,
                                                   mairy::split({1.0, 0.0, -1.0})),
                    mairy::DimensionMismatch);
    CHECK_THROWS_AS(mairy::airy_det_oracle(mairy::split({2.0, 1.0, 0.0, -1.0, -2.0})),
                    mairy::DimensionMismatch);
    CHECK(mairy::n2_r(mairy::n2_argument(0.7, 1.9)) == doctest::Approx(1.9));
}

TEST_CASE("calibration lands at kappa = 1 for every built-in representation") {
    mairy::CalibrationTable table = mairy::default_calibration();
    CHECK(table.entries.size() == 11);
    for (const auto& e : table.entries) {
        CAPTURE(mairy::to_string(e.rep));
        CAPTURE(e.N);
        CHECK(std::abs(e.kappa - cplx{1.0, 0.0}) < 1e-6);
        CHECK(e.fit_residual < 1e-5);
    }
    const mairy::CalibrationEntry* found = table.find(Representation::n2_green, 2);
    REQUIRE(found != nullptr);
    CHECK(found->fit_eigenvalues.size() == 2);
    CHECK(table.find(Representation::n2_green, 3) == nullptr);

    // serialization round trip
    mairy::CalibrationTable back = mairy::CalibrationTable::from_json(table.to_json());
    REQUIRE(back.entries.size() == table.entries.size());
    for (std::size_t i = 0; i < back.entries.size(); ++i) {
        CHECK(back.entries[i].rep == table.entries[i].rep);
        CHECK(std::abs(back.entries[i].kappa - table.entries[i].kappa) < 1e-13);
    }
    CHECK_THROWS_AS(mairy::CalibrationTable::from_json("{ not json"), mairy::DomainError);
}

TEST_CASE("recalibration under a finer configuration drifts negligibly") {
    mairy::QuadratureConfig fine;
    fine.nodes_per_dim = 20;
    mairy::CalibrationTable a =
        mairy::calibrate({Representation::n2_single}, mairy::n2_argument(0.0, 1.0));
    mairy::CalibrationTable b =
        mairy::calibrate({Representation::n2_single}, mairy::n2_argument(0.0, 1.0), fine);
    CHECK(std::abs(a.entries[0].kappa - b.entries[0].kappa) < 1e-6);
}

TEST_CASE("calibration refuses a fit point where the function vanishes") {
    // A(x) has a zero near x = 2.3381074105 for N = 1
    CHECK_THROWS_AS(mairy::calibrate({Representation::separated},
                                     mairy::split({2.338107410459767})),
                    mairy::DegenerateFit);
}

TEST_CASE("scale audit identifies the change-of-variables constant") {
    mairy::ScaleAudit audit = mairy::audit_airy_scale();
    CHECK(audit.fit_residual < 1e-3);
    CHECK(audit.ci_halfwidth <= 1e-3);
    CHECK(std::abs(audit.fitted_scale - audit.candidates[1]) <= audit.ci_halfwidth);
    CHECK(audit.agrees[1]);
    CHECK(!audit.agrees[0]); // (3/2)^{1/3} is excluded by the interval
}

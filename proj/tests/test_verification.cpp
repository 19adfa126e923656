#include <cmath>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mairy/verification.hpp"

using mairy::Representation;
using mairy::Spectrum;

TEST_CASE("radial laplacian: polynomial self-tests pin the convention") {
    auto one = [](const std::vector<double>&) { return 1.0; };
    auto lin = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    };
    auto quad = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    for (const std::vector<double>& x :
         {std::vector<double>{1.0, -0.4}, {0.9, 0.1, -0.8}, {2.0, 1.0, -0.5}}) {
        const double n = static_cast<double>(x.size());
        CHECK(std::abs(mairy::radial_laplacian(one, x, 1e-2)) < 1e-8);
        CHECK(std::abs(mairy::radial_laplacian(lin, x, 1e-2)) < 1e-8);
        CHECK(std::abs(mairy::radial_laplacian(quad, x, 1e-2) - 2.0 * n * n) < 1e-7);
    }
    CHECK_THROWS_AS(mairy::radial_laplacian(one, {}, 1e-2), mairy::InvalidGrid);
    CHECK_THROWS_AS(mairy::radial_laplacian(one, {1.0, -0.4}, 0.0), mairy::DomainError);
    CHECK_THROWS_AS(mairy::radial_laplacian(one, {0.5, 0.5}, 1e-2), mairy::ConfluentSpectrum);
}

TEST_CASE("scalar equation residual") {
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(-6.0 + 10.0 * i / 100.0);
    mairy::ResidualReport rep = mairy::ode_residual_check(grid);
    CHECK(rep.passed);
    CHECK(rep.residual_rel <= 1e-6);
    CHECK(rep.check_id == "ode_residual");
    CHECK(rep.grid.size() == grid.size());
    CHECK_THROWS_AS(mairy::ode_residual_check({}), mairy::InvalidGrid);

    // single point at the origin still works (the stencil only needs the
    // function nearby)
    mairy::ResidualReport one = mairy::ode_residual_check({0.0});
    CHECK(one.passed);
}

TEST_CASE("matrix equation residual, N=1") {
    std::vector<Spectrum> pts;
    for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) pts.push_back(Spectrum({x}));
    mairy::ResidualReport rep =
        mairy::pde_residual_check(1, pts, Representation::det_oracle);
    CHECK(rep.passed);
    CHECK(rep.residual_rel <= 5e-3);
}

TEST_CASE("matrix equation residual, N=2, well-separated spectra") {
    std::vector<Spectrum> pts = {Spectrum({1.0, -1.0}), Spectrum({0.8, -0.3}),
                                 Spectrum({1.4, -0.6}), Spectrum({0.5, -1.2}),
                                 Spectrum({1.1, 0.2})};
    mairy::ResidualReport rep =
        mairy::pde_residual_check(2, pts, Representation::det_oracle);
    CHECK(rep.passed);
    CHECK(rep.residual_rel <= 5e-3);

    CHECK_THROWS_AS(mairy::pde_residual_check(2, {Spectrum({0.5, 0.45})},
                                              Representation::det_oracle),
                    mairy::ConfluentSpectrum);
    CHECK_THROWS_AS(mairy::pde_residual_check(3, pts, Representation::det_oracle),
                    mairy::DimensionMismatch);
    CHECK_THROWS_AS(mairy::pde_residual_check(2, {}, Representation::det_oracle),
                    mairy::InvalidGrid);
}

TEST_CASE("cross comparison: identical representations agree exactly") {
    mairy::CalibrationTable table;
    table.entries.push_back({Representation::det_oracle, 2, {1.0, 0.0}, 0.0, {0.5, -0.5}});
    std::vector<mairy::MatrixArgument> grid = {mairy::n2_argument(0.0, 1.0),
                                               mairy::n2_argument(1.0, 2.0)};
    mairy::ComparisonReport rep = mairy::cross_compare(
        Representation::det_oracle, Representation::det_oracle, grid, table, 1e-3);
    CHECK(rep.passed);
    CHECK(rep.max_rel_disagreement <= 1e-14);

    // missing calibration entries are an error
    CHECK_THROWS_AS(mairy::cross_compare(Representation::n2_single,
                                         Representation::det_oracle, grid, table, 1e-3),
                    mairy::DomainError);
}

TEST_CASE("cross comparison: calibrated single-integral vs determinant form") {
    mairy::CalibrationTable table = mairy::default_calibration();
    std::vector<mairy::MatrixArgument> grid;
    for (double xi : {-1.0, 0.0, 1.0})
        for (double r : {0.5, 1.0, 2.0}) grid.push_back(mairy::n2_argument(xi, r));
    mairy::ComparisonReport rep = mairy::cross_compare(
        Representation::n2_single, Representation::det_oracle, grid, table, 1e-3);
    CHECK(rep.passed);
    CHECK(rep.max_rel_disagreement < 1e-6);
}

TEST_CASE("report serialization carries the contract fields") {
    mairy::ResidualReport rep = mairy::ode_residual_check({0.0, 1.0});
    nlohmann::json j = nlohmann::json::parse(rep.to_json());
    for (const char* key :
         {"check_id", "grid", "residual_max", "residual_rel", "tolerance", "passed"})
        CHECK(j.contains(key));

    mairy::CalibrationTable table;
    table.entries.push_back({Representation::det_oracle, 2, {1.0, 0.0}, 0.0, {0.5, -0.5}});
    mairy::ComparisonReport cmp = mairy::cross_compare(
        Representation::det_oracle, Representation::det_oracle,
        {mairy::n2_argument(0.0, 1.0)}, table, 1e-3);
    nlohmann::json c = nlohmann::json::parse(cmp.to_json());
    for (const char* key :
         {"rep_pair", "grid", "max_rel_disagreement", "kappa_a", "kappa_b", "tolerance",
          "passed"})
        CHECK(c.contains(key));
}

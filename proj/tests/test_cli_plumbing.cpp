#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "mairy/matrix_airy.hpp"

TEST_CASE("config files: round trip through disk, unknown keys rejected") {
    const std::string path = "test_cfg_tmp.txt";
    {
        std::ofstream os(path);
        os << "# tuning used by the sweep examples\n"
           << "nodes_per_dim = 24\n"
           << "rel_tol = 1e-6\n"
           << "epsilon_ladder = 0.2,0.1,0.05\n";
    }
    mairy::QuadratureConfig cfg = mairy::parse_config_file(path);
    CHECK(cfg.nodes_per_dim == 24);
    CHECK(cfg.rel_tol == doctest::Approx(1e-6));
    CHECK(cfg.epsilon_ladder.size() == 3);
    // untouched keys keep their defaults
    CHECK(cfg.truncation_radius == doctest::Approx(12.0));
    std::remove(path.c_str());

    CHECK_THROWS_AS(mairy::parse_config_file("no_such_file_anywhere.txt"), mairy::DomainError);
}

TEST_CASE("representation tags are stable strings") {
    CHECK(mairy::to_string(mairy::Representation::direct) == "direct");
    CHECK(mairy::to_string(mairy::Representation::separated) == "separated");
    CHECK(mairy::to_string(mairy::Representation::n2_double) == "n2_double");
    CHECK(mairy::to_string(mairy::Representation::n2_single) == "n2_single");
    CHECK(mairy::to_string(mairy::Representation::n2_green) == "n2_green");
    CHECK(mairy::to_string(mairy::Representation::det_oracle) == "det_oracle");
}

TEST_CASE("calibration table file format") {
    // hand-written table, as a user might edit it
    const std::string text = R"({
      "entries": [
        {"rep": "n2_single", "N": 2, "kappa_re": 1.0, "kappa_im": 0.0,
         "fit_residual": 1e-9, "fit_eigenvalues": [0.5, -0.5]}
      ]
    })";
    mairy::CalibrationTable t = mairy::CalibrationTable::from_json(text);
    REQUIRE(t.entries.size() == 1);
    const mairy::CalibrationEntry* e = t.find(mairy::Representation::n2_single, 2);
    REQUIRE(e != nullptr);
    CHECK(e->kappa.real() == doctest::Approx(1.0));
    CHECK(t.find(mairy::Representation::n2_single, 3) == nullptr);
    CHECK(t.find(mairy::Representation::direct, 2) == nullptr);

    // missing fields surface as a parse error, not silent defaults
    CHECK_THROWS_AS(mairy::CalibrationTable::from_json(R"({"entries": [{"rep": "direct"}]})"),
                    mairy::DomainError);

    // emitted JSON is valid and ordered deterministically
    std::string dumped = t.to_json();
    CHECK(dumped == mairy::CalibrationTable::from_json(dumped).to_json());
}

TEST_CASE("two-eigenvalue coordinates") {
    mairy::MatrixArgument X = mairy::n2_argument(0.7, 1.9);
    CHECK(X.xi == doctest::Approx(0.7));
    CHECK(X.traceless.values[0] == doctest::Approx(0.95));
    CHECK(X.traceless.values[1] == doctest::Approx(-0.95));
    CHECK(mairy::n2_r(X) == doctest::Approx(1.9));
    CHECK_THROWS_AS(mairy::n2_r(mairy::split({1.0, 0.0, -1.0})), mairy::DimensionMismatch);
}

TEST_CASE("spectrum text round trip") {
    mairy::Spectrum s = mairy::parse_spectrum("1.25,-0.75,0.5");
    std::string printed = mairy::print_spectrum(s);
    mairy::Spectrum back = mairy::parse_spectrum(printed);
    CHECK(back.values == s.values);
}

TEST_CASE("method tags are stable strings") {
    CHECK(mairy::to_string(mairy::MethodTag::damped_extrapolated) == "damped_extrapolated");
    CHECK(mairy::to_string(mairy::MethodTag::rotated_contour) == "rotated_contour");
    CHECK(mairy::to_string(mairy::MethodTag::direct) == "direct");
}

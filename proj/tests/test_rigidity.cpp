#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sobrig/io_util.hpp"
#include "sobrig/rigidity.hpp"
#include "sobrig/sharp_constants.hpp"

using namespace sobrig;

TEST_CASE("decision at the sharp constant") {
    const double k0 = sharp_constant_second_order(5);
    const RigidityReport r = decide(5, k0);
    CHECK(r.n == 5);
    CHECK(r.C_over_K0 == 1.0);
    CHECK(r.ssi_admissible);
    CHECK(r.isometric_to_euclidean);
    CHECK(r.volume_bound_applicable);
    REQUIRE(r.volume_bound.has_value());
    CHECK(*r.volume_bound == 1.0);
    REQUIRE(r.pi1_order_bound.has_value());
    CHECK(*r.pi1_order_bound == 1);
    CHECK(r.pi1_bound_unconditional);
    REQUIRE(r.simply_connected.has_value());
    CHECK(*r.simply_connected);
    REQUIRE(r.homotopy_vanishing_level.has_value());
    CHECK(*r.homotopy_vanishing_level == 5);
    CHECK(*r.homotopy_level_literal == 5);
    CHECK(*r.homotopy_level_claimed == 5);
    REQUIRE(r.contractible.has_value());
    CHECK(*r.contractible);
}

TEST_CASE("decision slightly above the sharp constant") {
    const double k0 = sharp_constant_second_order(5);
    const RigidityReport r = decide(5, 1.1 * k0);
    CHECK(r.ssi_admissible);
    CHECK_FALSE(r.isometric_to_euclidean);
    REQUIRE(r.volume_bound.has_value());
    CHECK(*r.volume_bound == Catch::Approx(std::pow(1.0 / 1.1, 1.25)).epsilon(1e-12));
    CHECK(*r.volume_bound == Catch::Approx(0.8876855).epsilon(1e-6));
    REQUIRE(r.pi1_order_value.has_value());
    CHECK(*r.pi1_order_value == Catch::Approx(std::pow(1.1, 1.25)).epsilon(1e-12));
    CHECK(*r.pi1_order_bound == 1);
    CHECK(r.pi1_bound_unconditional);
    CHECK(*r.simply_connected);  // 1.1 < 2^{4/5} = 1.7411
    CHECK(*r.homotopy_level_claimed == 1);
    CHECK(*r.homotopy_level_literal == 0);  // the printed threshold sits at K0 + e^{-56}
    CHECK(*r.homotopy_vanishing_level == 1);
    CHECK_FALSE(*r.contractible);
}

TEST_CASE("decision above the volume window") {
    const double k0 = sharp_constant_second_order(5);
    const RigidityReport r = decide(5, 3.0 * k0);
    CHECK(r.ssi_admissible);
    CHECK_FALSE(r.volume_bound_applicable);  // 3 > 7/3
    CHECK_FALSE(r.volume_bound.has_value());
    REQUIRE(r.pi1_order_bound.has_value());
    CHECK(*r.pi1_order_bound == 3);  // floor(3^{5/4}) = floor(3.948)
    CHECK_FALSE(r.pi1_bound_unconditional);
    CHECK_FALSE(*r.simply_connected);
    CHECK(*r.homotopy_vanishing_level == 0);
    CHECK_FALSE(*r.contractible);
}

TEST_CASE("decision below the sharp constant withholds conclusions") {
    const double k0 = sharp_constant_second_order(5);
    const RigidityReport r = decide(5, 0.5 * k0);
    CHECK_FALSE(r.ssi_admissible);
    CHECK_FALSE(r.isometric_to_euclidean);
    CHECK_FALSE(r.volume_bound.has_value());
    CHECK_FALSE(r.pi1_order_value.has_value());
    CHECK_FALSE(r.pi1_order_bound.has_value());
    CHECK_FALSE(r.simply_connected.has_value());
    CHECK_FALSE(r.homotopy_vanishing_level.has_value());
    CHECK_FALSE(r.contractible.has_value());
}

TEST_CASE("tolerance band around the sharp constant") {
    const double k0 = sharp_constant_second_order(5);
    const RigidityReport inside = decide(5, k0 * (1.0 - 0.5e-12));
    CHECK(inside.ssi_admissible);
    CHECK(inside.isometric_to_euclidean);
    CHECK(*inside.contractible);

    const RigidityReport at = decide(5, k0);
    const RigidityReport above = decide(5, k0 * (1.0 + 2e-12));
    CHECK(at.isometric_to_euclidean);
    CHECK_FALSE(above.isometric_to_euclidean);
    // everything else moves the monotone way
    CHECK(*above.homotopy_vanishing_level <= *at.homotopy_vanishing_level);
    CHECK(*above.pi1_order_value >= *at.pi1_order_value);
    CHECK(*above.simply_connected);
    CHECK(*above.volume_bound < 1.0);
}

TEST_CASE("threshold mode picks the headline level") {
    const double k0 = sharp_constant_second_order(5);
    const RigidityReport literal = decide(5, 1.05 * k0, ThresholdMode::literal_formula);
    CHECK(literal.mode == ThresholdMode::literal_formula);
    CHECK(*literal.homotopy_vanishing_level == 0);
    CHECK(*literal.homotopy_level_claimed == 1);  // both routes stay on the report
    CHECK(*literal.simply_connected);             // the 2^{4/n} test is its own field

    const RigidityReport claimed = decide(5, 1.05 * k0, ThresholdMode::claimed_identity);
    CHECK(*claimed.homotopy_vanishing_level == 1);
    CHECK(*claimed.homotopy_level_literal == 0);
}

TEST_CASE("decision is monotone across a C sweep") {
    const double k0 = sharp_constant_second_order(5);
    std::vector<RigidityReport> reports;
    for (int i = 0; i < 100; ++i)
        reports.push_back(decide(5, k0 * (0.9 + 2.6 * i / 99.0)));
    for (std::size_t i = 1; i < reports.size(); ++i) {
        const RigidityReport& lo = reports[i - 1];
        const RigidityReport& hi = reports[i];
        if (lo.homotopy_vanishing_level && hi.homotopy_vanishing_level)
            CHECK(*hi.homotopy_vanishing_level <= *lo.homotopy_vanishing_level);
        if (lo.pi1_order_bound && hi.pi1_order_bound)
            CHECK(*hi.pi1_order_bound >= *lo.pi1_order_bound);
        if (lo.simply_connected && hi.simply_connected)
            CHECK_FALSE((!*lo.simply_connected && *hi.simply_connected));
        CHECK(hi.ssi_admissible >= lo.ssi_admissible);
    }
}

TEST_CASE("oversized order bounds are withheld rather than overflowed") {
    const double k0 = sharp_constant_second_order(5);
    const RigidityReport r = decide(5, 1e17 * k0);
    REQUIRE(r.pi1_order_value.has_value());
    CHECK(*r.pi1_order_value > 9e18);
    CHECK_FALSE(r.pi1_order_bound.has_value());
}

TEST_CASE("decision input screening") {
    CHECK_THROWS_AS(decide(4, 1.0), std::domain_error);
    CHECK_THROWS_AS(decide(5, 0.0), std::domain_error);
    CHECK_THROWS_AS(decide(5, -1.0), std::domain_error);
    CHECK_THROWS_AS(decide(5, 1.0, ThresholdMode::claimed_identity, -1e-3), std::domain_error);
    CHECK_THROWS_AS(decide(5, 1.0, ThresholdMode::claimed_identity, 1.0), std::domain_error);
}

TEST_CASE("report serialization round-trips") {
    const double k0 = sharp_constant_second_order(5);
    for (const double c : {1.0 * k0, 1.1 * k0, 3.0 * k0, 0.5 * k0}) {
        for (const ThresholdMode mode :
             {ThresholdMode::claimed_identity, ThresholdMode::literal_formula}) {
            const RigidityReport r = decide(5, c, mode);
            const std::string text = serialize_report(r);
            CHECK(parse_report(text) == r);
        }
    }
    // stable key order: a second serialization is bytewise identical
    const RigidityReport r = decide(6, 1.3 * sharp_constant_second_order(6));
    CHECK(serialize_report(r) == serialize_report(parse_report(serialize_report(r))));
}

TEST_CASE("report parsing rejects malformed text") {
    const std::string good = serialize_report(decide(5, sharp_constant_second_order(5)));
    CHECK_THROWS_AS(parse_report(good + "extra_key = 1\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_report("n = 5\n"), std::runtime_error);  // missing keys
    std::string broken = good;
    broken.replace(broken.find("ssi_admissible = true"), 21, "ssi_admissible = yes!");
    CHECK_THROWS_AS(parse_report(broken), std::runtime_error);
    CHECK_THROWS_AS(parse_report("no separator line\n"), std::runtime_error);
}

TEST_CASE("real formatting survives a round trip") {
    for (const double x : {sharp_constant_second_order(5), 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
        CHECK(parse_real(format_real(x)) == x);
    }
    CHECK_THROWS_AS(parse_real("12x"), std::runtime_error);
    CHECK_THROWS_AS(parse_real(""), std::runtime_error);
}

TEST_CASE("atomic text writes land complete or not at all") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "sobrig_io_test";
    fs::create_directories(dir);
    const fs::path target = dir / "report.txt";
    atomic_write_text(target.string(), "first\n");
    atomic_write_text(target.string(), "second\n");  // overwrite in place
    std::ifstream in(target);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == "second\n");
    CHECK_FALSE(fs::exists(dir / "report.txt.tmp"));
    CHECK_THROWS_AS(atomic_write_text((dir / "missing" / "report.txt").string(), "x"),
                    std::runtime_error);
}

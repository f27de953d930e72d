#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sobrig/sharp_constants.hpp"
#include "sobrig/volume_profile.hpp"

using namespace sobrig;

namespace {

// tabulated sampler for a known theta generator, knots log-spaced on [lo, hi]
std::vector<std::pair<double, double>> sample_theta(int n, double lo, double hi, int count,
                                                    double (*theta)(double)) {
    const double omega = unit_ball_volume(n);
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < count; ++i) {
        const double t = lo * std::pow(hi / lo, double(i) / (count - 1));
        samples.emplace_back(t, theta(t) * omega * std::pow(t, n));
    }
    return samples;
}

double theta_inverse_square(double t) { return 0.6 + 0.4 / (1.0 + t * t); }
double theta_half_family(double t) { return 0.5 + 0.5 / (1.0 + t * t); }

}  // namespace

TEST_CASE("flat profile is the unit baseline") {
    const VolumeProfile prof = VolumeProfile::euclidean(5);
    CHECK(prof.theta(0.0) == 1.0);
    CHECK(prof.theta(7.3) == 1.0);
    CHECK(prof.theta_tail() == 1.0);
    CHECK(prof.scale() == 1.0);
    CHECK(prof.value(2.0) == Catch::Approx(unit_ball_volume(5) * 32.0).epsilon(1e-14));
    CHECK(prof.value(0.0) == 0.0);
    CHECK(prof.value(-1.0) == 0.0);
    CHECK_THROWS_AS(VolumeProfile::euclidean(4), std::domain_error);
}

TEST_CASE("ratio family shape and parameter screening") {
    const VolumeProfile prof = VolumeProfile::ratio_family(5, 0.8, 2.0, 3.0);
    CHECK(prof.theta(0.0) == 1.0);
    CHECK(prof.theta(2.0) == Catch::Approx(0.9).epsilon(1e-14));  // halfway at t = t0
    CHECK(prof.theta(1e9) == Catch::Approx(0.8).epsilon(1e-12));
    CHECK(prof.theta_tail() == 0.8);
    CHECK(prof.scale() == 2.0);
    // theta decreasing along a log grid
    double prev = 1.0;
    for (int i = 0; i <= 40; ++i) {
        const double th = prof.theta(0.01 * std::pow(10.0, 4.0 * i / 40.0));
        CHECK(th <= prev + 1e-15);
        prev = th;
    }
    // degenerate upper edge keeps theta constant
    CHECK(VolumeProfile::ratio_family(5, 1.0, 1.0, 2.0).theta(5.0) == 1.0);

    CHECK_THROWS_AS(VolumeProfile::ratio_family(5, 0.0, 1.0, 2.0), ProfileFormatError);
    CHECK_THROWS_AS(VolumeProfile::ratio_family(5, 1.2, 1.0, 2.0), ProfileFormatError);
    CHECK_THROWS_AS(VolumeProfile::ratio_family(5, 0.8, 0.0, 2.0), ProfileFormatError);
    CHECK_THROWS_AS(VolumeProfile::ratio_family(5, 0.8, 1.0, -1.0), ProfileFormatError);
}

TEST_CASE("tabulated profile recovers ratios from raw volumes") {
    const double omega = unit_ball_volume(5);
    const VolumeProfile prof =
        VolumeProfile::tabulated(5, {{1.0, omega}, {3.0, 0.5 * omega * 243.0}});
    CHECK(prof.knot_t.front() == 0.0);  // anchor
    CHECK(prof.knot_theta.front() == 1.0);
    CHECK(prof.theta(1.0) == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(prof.theta(3.0) == Catch::Approx(0.5).epsilon(1e-13));
    CHECK(prof.theta(0.5) == Catch::Approx(1.0).epsilon(1e-13));   // flat before first sample
    CHECK(prof.theta(2.0) == Catch::Approx(0.75).epsilon(1e-13));  // linear in ratio space
    CHECK(prof.theta(50.0) == Catch::Approx(0.5).epsilon(1e-13));  // constant extrapolation
    CHECK(prof.theta_tail() == Catch::Approx(0.5).epsilon(1e-13));
    CHECK(prof.scale() == 3.0);
    CHECK(prof.value(3.0) == Catch::Approx(0.5 * omega * 243.0).epsilon(1e-13));

    // a zero volume sample is representable
    CHECK(VolumeProfile::tabulated(5, {{1.0, 0.0}}).theta(1.0) == 0.0);

    CHECK_THROWS_AS(VolumeProfile::tabulated(5, {}), ProfileFormatError);
    CHECK_THROWS_AS(VolumeProfile::tabulated(5, {{0.0, 1.0}}), ProfileFormatError);
    CHECK_THROWS_AS(VolumeProfile::tabulated(5, {{-1.0, 1.0}}), ProfileFormatError);
    CHECK_THROWS_AS(VolumeProfile::tabulated(5, {{2.0, 1.0}, {2.0, 1.0}}), ProfileFormatError);
    CHECK_THROWS_AS(VolumeProfile::tabulated(5, {{2.0, 1.0}, {1.0, 1.0}}), ProfileFormatError);
    CHECK_THROWS_AS(VolumeProfile::tabulated(5, {{1.0, -3.0}}), ProfileFormatError);
}

TEST_CASE("validation passes the closed-form profiles") {
    CHECK(profile_validate(VolumeProfile::euclidean(5)).valid);
    CHECK(profile_validate(VolumeProfile::ratio_family(5, 0.8, 1.0, 2.0)).valid);
    CHECK(profile_validate(VolumeProfile::ratio_family(7, 0.3, 0.1, 0.5)).valid);
    const VolumeProfile tab =
        VolumeProfile::tabulated(5, sample_theta(5, 0.01, 100.0, 61, theta_inverse_square));
    CHECK(profile_validate(tab).valid);
}

TEST_CASE("validation flags a ball exceeding flat volume") {
    const double omega = unit_ball_volume(5);
    // v(2) > omega * 2^5 breaks the upper volume bound
    const VolumeProfile prof =
        VolumeProfile::tabulated(5, {{1.0, omega}, {2.0, 1.2 * omega * 32.0}});
    const ProfileValidation report = profile_validate(prof);
    CHECK_FALSE(report.valid);
    CHECK(report.violation == "volume exceeds the flat-space ball volume");
    CHECK(report.location > 1.0);
    CHECK(report.location <= 2.0);
}

TEST_CASE("validation flags an increasing ratio") {
    const double omega = unit_ball_volume(5);
    const VolumeProfile prof =
        VolumeProfile::tabulated(5, {{1.0, 0.8 * omega}, {2.0, 0.9 * omega * 32.0}});
    const ProfileValidation report = profile_validate(prof);
    CHECK_FALSE(report.valid);
    CHECK(report.violation == "volume ratio increases");
    CHECK(report.location > 1.0);
    CHECK(report.location < 2.0);
}

TEST_CASE("validation flags shrinking balls") {
    const double omega = unit_ball_volume(5);
    const VolumeProfile prof = VolumeProfile::tabulated(
        5, {{1.0, omega}, {1.1, 0.5 * omega}});  // half the volume in a bigger ball
    const ProfileValidation report = profile_validate(prof);
    CHECK_FALSE(report.valid);
    CHECK(report.violation == "volume decreases");
    CHECK(report.location > 1.0);
    CHECK(report.location <= 1.1);
}

TEST_CASE("asymptotic ratio of the closed-form kinds is exact") {
    CHECK(asymptotic_ratio(VolumeProfile::euclidean(6)) == 1.0);
    CHECK(asymptotic_ratio(VolumeProfile::ratio_family(5, 0.8, 1.0, 2.0)) == 0.8);
    CHECK(asymptotic_ratio(VolumeProfile::ratio_family(5, 0.37, 4.0, 1.5)) == 0.37);
}

TEST_CASE("asymptotic ratio extrapolates a sampled inverse-square tail") {
    const VolumeProfile tab =
        VolumeProfile::tabulated(5, sample_theta(5, 0.1, 100.0, 61, theta_inverse_square));
    CHECK(asymptotic_ratio(tab) == Catch::Approx(0.6).margin(1e-3));
    const VolumeProfile half =
        VolumeProfile::tabulated(5, sample_theta(5, 0.1, 200.0, 81, theta_half_family));
    CHECK(asymptotic_ratio(half) == Catch::Approx(0.5).margin(1e-3));
}

TEST_CASE("asymptotic ratio accepts an already flat tail") {
    const double omega = unit_ball_volume(5);
    const VolumeProfile flat = VolumeProfile::tabulated(
        5, {{1.0, 0.9 * omega}, {2.0, 0.9 * omega * 32.0}, {4.0, 0.9 * omega * 1024.0}});
    CHECK(asymptotic_ratio(flat) == Catch::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("asymptotic ratio refuses tails it cannot extrapolate") {
    const double omega = unit_ball_volume(5);
    auto tab = [omega](std::vector<std::pair<double, double>> knots) {
        return VolumeProfile::tabulated(5, std::move(knots));
    };
    // flat then a late drop: no decay visible before the last knot
    CHECK_THROWS_AS(
        asymptotic_ratio(tab({{2.0, 0.9 * omega * 32.0},
                              {4.0, 0.9 * omega * 1024.0},
                              {8.0, 0.8 * omega * 32768.0}})),
        TailUndetermined);
    // linear-in-t decay: successive decade differences grow
    CHECK_THROWS_AS(
        asymptotic_ratio(tab({{1.0, 0.9 * omega},
                              {25.0, 0.85 * omega * std::pow(25.0, 5)},
                              {50.0, 0.80 * omega * std::pow(50.0, 5)},
                              {100.0, 0.70 * omega * std::pow(100.0, 5)}})),
        TailUndetermined);
    // geometric decrements overshoot zero when extrapolated
    CHECK_THROWS_AS(
        asymptotic_ratio(tab({{1.0, 0.9 * omega},
                              {2.0, 0.42 * omega * 32.0},
                              {4.0, 0.18 * omega * 1024.0},
                              {8.0, 0.06 * omega * 32768.0}})),
        TailUndetermined);
}

TEST_CASE("profile config parsing covers the three kinds") {
    {
        std::istringstream in("# flat space\nn = 5\nkind = euclidean\n");
        const VolumeProfile prof = parse_profile_config(in);
        CHECK(prof.kind == ProfileKind::euclidean);
        CHECK(prof.n == 5);
    }
    {
        std::istringstream in(
            "n = 6\nkind = ratio_family\nb_inf = 0.75\nt0 = 2.5  # knee\np = 1.5\n");
        const VolumeProfile prof = parse_profile_config(in);
        CHECK(prof.kind == ProfileKind::ratio_family);
        CHECK(prof.n == 6);
        CHECK(prof.b_inf == 0.75);
        CHECK(prof.t0 == 2.5);
        CHECK(prof.p == 1.5);
    }
    {
        const double omega = unit_ball_volume(5);
        std::ostringstream cfg;
        cfg << std::setprecision(17) << "n = 5\nkind = tabulated\ntable = 1 " << omega << ", 2 "
            << 0.9 * omega * 32.0 << "\n";
        std::istringstream in(cfg.str());
        const VolumeProfile prof = parse_profile_config(in);
        CHECK(prof.kind == ProfileKind::tabulated);
        CHECK(prof.theta(2.0) == Catch::Approx(0.9).epsilon(1e-12));
    }
}

TEST_CASE("profile config errors carry line numbers") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_profile_config(in);
    };
    auto message_of = [&parse](const std::string& text) {
        try {
            parse(text);
        } catch (const ProfileFormatError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };

    CHECK(message_of("n = 5\nkind = euclidean\nnot a key value line\n").find("line 3")
          != std::string::npos);
    CHECK(message_of("n = 5\nn = 6\nkind = euclidean\n").find("duplicate key 'n'")
          != std::string::npos);
    CHECK(message_of("kind = euclidean\n").find("missing required key 'n'")
          != std::string::npos);
    CHECK(message_of("n = five\nkind = euclidean\n").find("needs a number")
          != std::string::npos);
    CHECK(message_of("n = 4\nkind = euclidean\n").find("n must be an integer >= 5")
          != std::string::npos);
    CHECK(message_of("n = 5.5\nkind = euclidean\n").find("n must be an integer >= 5")
          != std::string::npos);
    CHECK(message_of("n = 5\nkind = hyperbolic\n").find("unknown kind")
          != std::string::npos);
    CHECK(message_of("n = 5\nkind = euclidean\nt0 = 1\n").find("does not apply here")
          != std::string::npos);
    CHECK(message_of("n = 5\nkind = ratio_family\nb_inf = 0.8\nt0 = 1\n")
              .find("missing required key 'p'")
          != std::string::npos);
    CHECK(message_of("n = 5\nkind = tabulated\n").find("exactly one") != std::string::npos);
    CHECK(message_of("n = 5\nkind = tabulated\ntable = 1 2\ntable_file = t.txt\n")
              .find("exactly one")
          != std::string::npos);
    CHECK(message_of("n = 5\nkind = tabulated\ntable = 1 2, 3\n").find("'t v' pairs")
          != std::string::npos);
    CHECK(message_of("n = 5\nkind = ratio_family\nb_inf = 2\nt0 = 1\np = 2\n")
              .find("b_inf")
          != std::string::npos);
}

TEST_CASE("table files resolve relative to the config directory") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "sobrig_profile_config_test";
    fs::create_directories(dir);
    const double omega = unit_ball_volume(5);
    {
        std::ofstream table(dir / "radii.txt");
        table << std::setprecision(17);
        table << "# t v pairs\n";
        table << "1 " << omega << "\n";
        table << "2 " << 0.8 * omega * 32.0 << "\n";
    }
    {
        std::ofstream cfg(dir / "profile.conf");
        cfg << "n = 5\nkind = tabulated\ntable_file = radii.txt\n";
    }
    const VolumeProfile prof = load_profile_config((dir / "profile.conf").string());
    CHECK(prof.kind == ProfileKind::tabulated);
    CHECK(prof.theta(2.0) == Catch::Approx(0.8).epsilon(1e-12));

    CHECK_THROWS_AS(load_profile_config((dir / "missing.conf").string()), ProfileFormatError);
    {
        std::ofstream cfg(dir / "broken.conf");
        cfg << "n = 5\nkind = tabulated\ntable_file = nowhere.txt\n";
    }
    CHECK_THROWS_AS(load_profile_config((dir / "broken.conf").string()), ProfileFormatError);
}

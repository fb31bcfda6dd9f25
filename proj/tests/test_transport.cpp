#include <catch_amalgamated.hpp>

#include "heliox/calibration.hpp"
#include "heliox/numerics.hpp"

using namespace heliox;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

DampingModel toy() {
    DampingModel m;
    m.phonon_prefactor_Cp = 2e7;
    m.he3_prefactor_Ch = 5e10;
    return m;
}

const Device& device() {
    static const Device d = make_device(paper_default_params());
    return d;
}

} // namespace

TEST_CASE("damping rate channels") {
    const auto m = toy();
    const auto r = damping_rate(0.02, 1e-9, m);
    CHECK_THAT(r.phonon, WithinRel(2e7 * std::pow(0.02, 4), 1e-15));
    CHECK_THAT(r.he3, WithinRel(1e-9 * 5e10 * std::sqrt(0.02), 1e-15));
    CHECK(r.total == r.phonon + r.he3);
    CHECK(damping_rate(0.02, 0.0, m).he3 == 0.0);
    CHECK_THROWS_AS(damping_rate(0.0, 1e-9, m), DomainError);
    CHECK_THROWS_AS(damping_rate(0.02, -1e-9, m), DomainError);
    CHECK_THROWS_AS(damping_rate(0.02, 1.5, m), DomainError);
    CHECK(std::isinf(q_factor(0.02, 1e-9, DampingModel{}, 1e7)));
    CHECK_THAT(q_factor(0.02, 1e-9, m, 1e7), WithinRel(1e7 / r.total, 1e-15));
}

TEST_CASE("damping is monotone in T and x3") {
    const auto m = toy();
    double last = 0.0;
    for (double T : numerics::logspace(1e-3, 1.0, 40)) {
        const double g = damping_rate(T, 1e-8, m).total;
        CHECK(g > last);
        last = g;
    }
    last = 0.0;
    for (double x3 : numerics::logspace(1e-14, 1e-2, 40)) {
        const double g = damping_rate(0.03, x3, m).total;
        CHECK(g > last);
        last = g;
    }
}

TEST_CASE("channel crossover closed form") {
    const auto m = toy();
    for (double x3 : {1e-12, 1e-9, 1e-6}) {
        const double T = channel_crossover_temperature(x3, m);
        const auto r = damping_rate(T, x3, m);
        CHECK_THAT(r.phonon, WithinRel(r.he3, 1e-12));
    }
    CHECK_THROWS_AS(channel_crossover_temperature(0.0, m), DomainError);
}

TEST_CASE("damping model json") {
    auto m = toy();
    m.calibration_tag = "toy";
    const auto back = damping_model_from_json(nlohmann::json::parse(to_json(m).dump()));
    CHECK(back.phonon_prefactor_Cp == m.phonon_prefactor_Cp);
    CHECK(back.he3_prefactor_Ch == m.he3_prefactor_Ch);
    CHECK(back.calibration_tag == "toy");
    auto j = to_json(m);
    j["he3_prefactor_Ch"] = -1.0;
    CHECK_THROWS_AS(damping_model_from_json(j), ValidationError);
    j.erase("he3_prefactor_Ch");
    CHECK_THROWS_AS(damping_model_from_json(j), ConfigError);
}

TEST_CASE("calibration recovers a known model from rate anchors") {
    const auto truth = toy();
    std::vector<CalibrationAnchor> anchors;
    for (double T : {0.01, 0.03, 0.08})
        for (double x3 : {1e-12, 1e-8}) {
            CalibrationAnchor a;
            a.label = "g";
            a.T = T;
            a.x3 = x3;
            a.kind = AnchorKind::Gamma;
            a.value = damping_rate(T, x3, truth).total;
            anchors.push_back(a);
        }
    const auto m = calibrate(anchors, device());
    CHECK_THAT(m.phonon_prefactor_Cp, WithinRel(truth.phonon_prefactor_Cp, 1e-9));
    CHECK_THAT(m.he3_prefactor_Ch, WithinRel(truth.he3_prefactor_Ch, 1e-9));
    for (const auto& r : m.residuals) CHECK_THAT(r.relative, WithinAbs(0.0, 1e-9));
}

TEST_CASE("calibration rank errors") {
    auto a = builtin_anchors();
    CHECK_THROWS_AS(calibrate({a[0]}, device()), CalibrationError);
    CHECK_THROWS_AS(calibrate({a[0], a[2]}, device()), CalibrationError); // same (T, x3)
}

TEST_CASE("built-in calibration") {
    const auto m = default_damping_model(device());
    REQUIRE(m.residuals.size() == 3);
    CHECK(m.calibration_tag == "builtin-anchors");
    CHECK(std::abs(m.residuals[0].relative) < 0.01);
    CHECK(std::abs(m.residuals[1].relative) < 0.01);
    // the weak Q prior cannot be met at the same time as the SNR anchor
    CHECK(std::abs(m.residuals[2].relative) < 0.25);

    const double Q30 = q_factor(0.030, 1e-12, m, device().omega_EB());
    CHECK(Q30 > 5e5);
    CHECK(Q30 < 1e6);

    // the channels cross inside the 10-100 mK window for 1e-4 .. 1e-1 ppm
    for (double ppm : {1e-4, 1e-3, 1e-2, 1e-1}) {
        const double T = channel_crossover_temperature(ppm * 1e-6, m);
        CHECK(T > 0.010);
        CHECK(T < 0.100);
    }
}

TEST_CASE("anchor json") {
    const auto a = anchor_from_json({{"label", "x"}, {"T_mK", 30}, {"x3_ppm", 1e-6}, {"kind", "snr"}, {"value", 16}});
    CHECK_THAT(a.T, WithinRel(0.03, 1e-15));
    CHECK_THAT(a.x3, WithinRel(1e-12, 1e-15));
    CHECK(a.kind == AnchorKind::Snr);
    CHECK_THROWS_AS(anchor_from_json({{"T", 0.03}, {"x3", 0}, {"kind", "tau"}, {"value", 1}}), ConfigError);
    CHECK_THROWS_AS(anchor_from_json({{"T", -0.03}, {"x3", 0}, {"kind", "q"}, {"value", 1}}), ValidationError);
    const auto list = anchors_from_json({{"anchors", {to_json(builtin_anchors()[0]), to_json(builtin_anchors()[1])}}});
    CHECK(list.size() == 2);
    CHECK(list[1].G.value() == 100.0);
}

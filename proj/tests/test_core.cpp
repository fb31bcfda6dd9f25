#include <catch_amalgamated.hpp>

#include <cstring>
#include <random>

#include "heliox/params.hpp"
#include "heliox/units.hpp"

using namespace heliox;
using Catch::Matchers::WithinRel;

namespace {

nlohmann::json full_document() { return to_json(paper_default_params()); }

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_CASE("physical constants") {
    const PhysicalConstants k;
    CHECK(k.electron_g_factor == 2.0023);
    CHECK_THAT(k.hbar, WithinRel(k.planck_h / kTwoPi, 1e-12));
    for (double v : {k.planck_h, k.hbar, k.boltzmann_kB, k.electron_mass_me, k.bohr_magneton_muB,
                     k.speed_of_light_c, k.elementary_charge_e})
        CHECK(v > 0.0);
    const HeliumMedium he;
    CHECK_THAT(he.youngs_modulus(), WithinRel(8.21e6, 1e-3));
}

TEST_CASE("paper-default preset") {
    const auto p = load_params(nlohmann::json{{"preset", "paper-default"}});
    CHECK(p == paper_default_params());
    CHECK(p.omega_ac == kTwoPi * 320e6);
    CHECK(p.Q_ac == 1e5);
    CHECK(p.m_EB == 1.6e-24);
    CHECK(p.n_opt_trap == 129);
    CHECK(p.n_opt_probe == 130);
    CHECK(p.n_ac_mode == 258);
    CHECK(p.kappa == kTwoPi * 15e6);
    CHECK(p.radiation_ratio_sigma_rad == 1.0);
}

TEST_CASE("load_params errors") {
    SECTION("missing key names the key") {
        auto doc = full_document();
        doc.erase("finesse_F");
        CHECK_THROWS_WITH(load_params(doc), Catch::Matchers::ContainsSubstring("finesse_F"));
        CHECK_THROWS_AS(load_params(doc), ConfigError);
    }
    SECTION("negative x3") {
        CHECK_THROWS_AS(load_params({{"preset", "paper-default"}, {"he3_fraction_x3", -1.0}}), ValidationError);
    }
    SECTION("mode rules") {
        CHECK_THROWS_WITH(load_params({{"preset", "paper-default"}, {"n_ac_mode", 260}}),
                          Catch::Matchers::ContainsSubstring("n_ac_mode = 2 * n_opt_trap"));
        CHECK_THROWS_AS(load_params({{"preset", "paper-default"}, {"n_opt_probe", 131}}), ValidationError);
    }
    SECTION("kappa_ex_ratio range") {
        CHECK_THROWS_AS(load_params({{"preset", "paper-default"}, {"kappa_ex_ratio", 0.0}}), ValidationError);
        CHECK_NOTHROW(load_params({{"preset", "paper-default"}, {"kappa_ex_ratio", 1.0}}));
    }
    SECTION("unknown key, unknown preset, double assignment") {
        CHECK_THROWS_AS(load_params({{"preset", "paper-default"}, {"frobnicate", 1}}), ConfigError);
        CHECK_THROWS_AS(load_params({{"preset", "lab-2019"}}), ConfigError);
        CHECK_THROWS_AS(load_params({{"preset", "paper-default"}, {"temperature_T", 0.03}, {"temperature_mK", 30}}),
                        ConfigError);
    }
    SECTION("negative lengths and fields") {
        CHECK_THROWS_AS(load_params({{"preset", "paper-default"}, {"cavity_waist_w", -1e-6}}), ValidationError);
        CHECK_THROWS_AS(load_params({{"preset", "paper-default"}, {"B1", -1e-3}}), ValidationError);
        CHECK_THROWS_AS(load_params({{"preset", "paper-default"}, {"laser_power_P", -1e-6}}), ValidationError);
        CHECK_THROWS_AS(load_params({{"preset", "paper-default"}, {"temperature_T", 0.0}}), ValidationError);
    }
}

TEST_CASE("field isolation") {
    const auto base = paper_default_params();
    auto p = load_params({{"preset", "paper-default"}, {"bandwidth_b", 10.0}});
    CHECK(p.bandwidth_b == 10.0);
    p.bandwidth_b = base.bandwidth_b;
    CHECK(p == base);
}

TEST_CASE("suffixed keys convert to SI") {
    const auto p = load_params({{"preset", "paper-default"},
                                {"temperature_mK", 55.0},
                                {"he3_fraction_ppm", 1e-2},
                                {"laser_power_uW", 3.0},
                                {"kappa_MHz", 10.0},
                                {"B1_mT", 1.2},
                                {"cavity_length_um", 100.0},
                                {"R0_override_nm", 2.0}});
    CHECK_THAT(p.medium.temperature_T, WithinRel(0.055, 1e-15));
    CHECK_THAT(p.medium.he3_fraction_x3, WithinRel(1e-8, 1e-15));
    CHECK_THAT(p.laser_power_P, WithinRel(3e-6, 1e-15));
    CHECK_THAT(p.kappa, WithinRel(kTwoPi * 10e6, 1e-15));
    CHECK_THAT(p.B1, WithinRel(1.2e-3, 1e-15));
    CHECK_THAT(p.cavity_length_L, WithinRel(100e-6, 1e-15));
    REQUIRE(p.R0_override);
    CHECK_THAT(*p.R0_override, WithinRel(2e-9, 1e-15));
    CHECK_FALSE(resolve_key("temperature_furlong"));
    CHECK_FALSE(resolve_key("finesse_F_kHz"));
}

TEST_CASE("kappa/finesse and lambda_ac warnings are soft") {
    std::vector<std::string> warnings;
    load_params({{"preset", "paper-default"}}, &warnings);
    CHECK(warnings.empty());
    load_params({{"preset", "paper-default"}, {"finesse_F", 1e4}}, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK_THAT(warnings[0], Catch::Matchers::ContainsSubstring("kappa"));
    load_params({{"preset", "paper-default"}, {"lambda_ac", 800e-9}}, &warnings);
    CHECK(warnings.size() == 1);
}

TEST_CASE("derived_kappa_ex") {
    auto p = paper_default_params();
    auto r = derived_kappa_ex(p);
    CHECK_THAT(r.kappa_ex, WithinRel(0.44 * kTwoPi * 15e6, 1e-15));
    CHECK_THAT(r.kappa_in + r.kappa_ex, WithinRel(p.kappa, 1e-15));
    p.kappa_ex_ratio = 1.0;
    CHECK(derived_kappa_ex(p).kappa_in == 0.0);
    p.kappa_ex_ratio = 0.5;
    p.kappa = kTwoPi * 10e6;
    CHECK_THAT(derived_kappa_ex(p).kappa_ex, WithinRel(kTwoPi * 5e6, 1e-15));
    CHECK_THAT(kappa_for_finesse(paper_default_params(), 1e4), WithinRel(kTwoPi * 150e6, 1e-14));
}

TEST_CASE("round trip is bitwise for random records") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> scale(0.5, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = paper_default_params();
        DeviceParams q = p;
        for (const auto& f : field_registry()) f.ref(q) = f.ref(p) * scale(rng);
        q.kappa_ex_ratio = std::min(1.0, q.kappa_ex_ratio);
        q.medium.he3_fraction_x3 = std::min(1.0, q.medium.he3_fraction_x3);
        q.probe_detuning_Delta_l = 1e6 * (scale(rng) - 1.0);
        if (trial % 2) q.R0_override = 1.9e-9 * scale(rng);
        const auto text = to_json(q).dump();
        const auto back = load_params(nlohmann::json::parse(text));
        DeviceParams b2 = back;
        for (const auto& f : field_registry()) CHECK(bitwise_equal(f.ref(q), f.ref(b2)));
        CHECK(back == q);
    }
}

TEST_CASE("set_parameter resolves paths and suffixes") {
    auto p = paper_default_params();
    set_parameter(p, "laser_power_uW", 10.0);
    CHECK_THAT(p.laser_power_P, WithinRel(1e-5, 1e-15));
    set_parameter(p, "gradient_G", 1000.0);
    CHECK(p.gradient_G == 1000.0);
    CHECK_THROWS_AS(set_parameter(p, "no_such_field", 1.0), UsageError);
}

// Unit audit: every public formula restated with dimension-tagged operands.
// A wrong exponent anywhere fails to compile.
TEST_CASE("unit audit") {
    using namespace heliox::units;
    const PhysicalConstants k;
    const Quantity<JouleSecond> h{k.planck_h}, hbar{k.hbar};
    const Quantity<JoulePerKelvin> kB{k.boltzmann_kB};
    const Quantity<Kilogram> me{k.electron_mass_me}, m{1.6e-24};
    const Quantity<Pascal> sigma_over_len{1.0};
    const Quantity<NewtonPerMeter> sigma{3.75e-4};
    const Quantity<Meter> R{1.9e-9}, w0{5e-6}, L{100e-6}, zzpf{1.3e-9};
    const Quantity<Kelvin> T{0.03};
    const Quantity<Hertz> w{1.8e7}, b{1.0}, kappa{9.4e7}, wl{1.2e15}, g0{0.64};
    const Quantity<Watt> P{1e-6};
    const Quantity<TeslaPerMeter> G{100.0};
    const Quantity<JoulePerTesla> mu{k.spin_moment()};
    const Quantity<Tesla> B1{1.5e-3};
    const Quantity<FaradPerMeter> eps{k.vacuum_permittivity_eps0};
    const Quantity<Pascal> rho_c2{8.2e6};
    const Quantity<JoulePerCubicMeter> W{8.5};
    const Quantity<Dim<-3, 1, 0, 0, 0>> rho{145.0};

    Quantity<Joule> e_conf = h * h / (me * R * R);
    Quantity<Joule> e_surf = sigma * R * R;
    Quantity<Joule> e_pv = sigma_over_len * R * R * R;
    Quantity<Meter> r0 = sqrt(sqrt(h * h / (me * sigma)));
    Quantity<Pascal> p_vol = h * h / (me * R * R * R * R * R) - sigma / R;
    Quantity<CubicMeter> V = R * R * R;
    Quantity<Joule> U = V * W;
    Quantity<NewtonPerMeter> kEB = V * W * (Quantity<PerMeter>{1.0} * Quantity<PerMeter>{1.0});
    Quantity<Hertz> wEB = sqrt(kEB / m);
    Quantity<Meter> zamp = sqrt(W / (rho * w * w));
    Quantity<Dimensionless> n_ac = (W * V) / (hbar * w);
    Quantity<Dimensionless> drho = sqrt(rho_c2 * W) / rho_c2;
    Quantity<Polarizability> alpha = eps * V;
    Quantity<Meter> z_zpf = sqrt(hbar / (m * w));
    Quantity<Hertz> g0_formula = w * alpha * Quantity<PerMeter>{1.0} * z_zpf / (eps * w0 * w0 * L);
    Quantity<Newton> F_th = sqrt(kB * T * m * w * b);
    Quantity<Newton> F_shot = hbar * w * kappa * sqrt(b * m * w * wl / (P * g0 * g0));
    Quantity<Newton> F_mag = mu * G;
    Quantity<Dimensionless> n_cav = kappa * (P / (hbar * wl)) / (kappa * kappa);
    Quantity<NewtonSqPerHertz> S_rpsn = hbar * hbar * g0 * g0 * n_cav / (zzpf * zzpf) / kappa;
    Quantity<Newton> F_rpsn = sqrt(S_rpsn * b);
    Quantity<Hertz> w1 = mu * B1 / hbar;
    Quantity<Dimensionless> lz = w1 * w1 / (w * w1);
    Quantity<Meter> zEB = F_mag / (m * w * w);
    Quantity<Dimensionless> snr = F_mag / (F_th + F_shot + F_rpsn);

    for (double v : {e_conf.value, e_surf.value, e_pv.value, r0.value, p_vol.value, U.value, wEB.value, zamp.value,
                     n_ac.value, drho.value, alpha.value, g0_formula.value, n_cav.value, lz.value, zEB.value,
                     snr.value})
        CHECK(std::isfinite(v));
}

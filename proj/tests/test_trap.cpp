#include <catch_amalgamated.hpp>

#include <random>

#include "heliox/numerics.hpp"
#include "heliox/trap.hpp"

using namespace heliox;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Fixture {
    DeviceParams p = paper_default_params();
    BubbleProperties b = make_bubble(p);
    TrapSpec t = make_trap(p, b);
};

} // namespace

TEST_CASE("contrast factors") {
    Fixture f;
    CHECK_THAT(f.t.contrast_f1, WithinAbs(-14.0, 1.0));
    CHECK(f.t.contrast_f2 == -2.0);
    CHECK_THAT(f.t.contrast_Phi, WithinAbs(-17.0, 1.0));
    CHECK_THAT(f.t.contrast_Phi, WithinRel(f.t.contrast_f1 - 3.0, 1e-14));

    BubbleProperties stiff = f.b;
    stiff.youngs_modulus_E_EB = f.p.medium.youngs_modulus();
    stiff.density_rho = f.p.medium.density_rho;
    const auto cf = contrast_factors(stiff, f.p.medium);
    CHECK(cf.f1 == 0.0);
    CHECK(cf.f2 == 0.0);
    stiff.youngs_modulus_E_EB = 0.0;
    CHECK_THROWS_AS(contrast_factors(stiff, f.p.medium), NumericalError);
}

TEST_CASE("trap at the default depth") {
    Fixture f;
    CHECK_THAT(f.t.energy_density_Wac, WithinRel(8.5, 0.03));
    CHECK_THAT(f.t.omega_EB / kTwoPi, WithinRel(2.9e6, 0.03));
    CHECK_THAT(f.t.depth_U0, WithinRel(f.p.trap_depth_U0_over_kB * PhysicalConstants{}.boltzmann_kB, 1e-13));
    // z0 is a pressure antinode near L/4
    CHECK_THAT(std::sin(f.t.wavevector_k * f.t.equilibrium_z0), WithinAbs(0.0, 1e-9));
    CHECK(std::abs(f.t.equilibrium_z0 - 0.25 * f.p.cavity_length_L) <= 0.5 * kPi / f.t.wavevector_k);
}

TEST_CASE("spring constant oracle") {
    Fixture f;
    const auto& t = f.t;
    const double expected = -2.0 * t.bubble_volume * t.energy_density_Wac * t.contrast_Phi * t.wavevector_k * t.wavevector_k;
    CHECK_THAT(t.spring_kEB, WithinRel(expected, 1e-13));
    CHECK_THAT(t.omega_EB, WithinRel(std::sqrt(expected / t.mass), 1e-13));

    // curvature and gradient against finite differences of U
    const double h = 1e-4 / t.wavevector_k;
    for (double z : {t.equilibrium_z0, t.equilibrium_z0 + 0.1e-6, 3.3e-6}) {
        const double d1 = (potential(z + h, t) - potential(z - h, t)) / (2 * h);
        const double d2 = (potential(z + h, t) - 2 * potential(z, t) + potential(z - h, t)) / (h * h);
        const double scale = std::abs(expected);
        CHECK_THAT(potential_gradient(z, t) / (scale / t.wavevector_k), WithinAbs(d1 / (scale / t.wavevector_k), 1e-6));
        CHECK_THAT(potential_curvature(z, t) / scale, WithinAbs(d2 / scale, 1e-5));
    }
    CHECK_THROWS_AS(spring_constant(t, t.equilibrium_z0 + 0.5 * kPi / t.wavevector_k), NumericalError);
}

TEST_CASE("omega scales as sqrt(Wac)") {
    Fixture f;
    const double w1 = make_trap_from_energy_density(1.0, f.p, f.b).omega_EB;
    for (double W : {0.5, 2.0, 8.0, 100.0})
        CHECK_THAT(make_trap_from_energy_density(W, f.p, f.b).omega_EB, WithinRel(w1 * std::sqrt(W), 1e-13));
    CHECK_THROWS_AS(make_trap_from_energy_density(-1.0, f.p, f.b), DomainError);
}

TEST_CASE("minima are evenly spaced antinodes") {
    Fixture f;
    const auto zs = locate_minima(f.t, 0.0, f.p.cavity_length_L);
    const double half = kPi / f.t.wavevector_k;
    REQUIRE(zs.size() >= static_cast<std::size_t>(f.p.n_ac_mode) - 1);
    for (std::size_t i = 1; i < zs.size(); ++i) CHECK_THAT(zs[i] - zs[i - 1], WithinRel(half, 1e-8));
    for (double z : zs) CHECK(potential_curvature(z, f.t) > 0.0);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-0.15, 0.15);
    for (int i = 0; i < 50; ++i) {
        const double guess = f.t.equilibrium_z0 + u(rng) * half;
        CHECK_THAT(refine_minimum(f.t, guess), WithinAbs(f.t.equilibrium_z0, 1e-12 * half * 2));
    }
}

TEST_CASE("explicit z0 and tie-breaking") {
    Fixture f;
    const double half = kPi / f.t.wavevector_k;
    const auto t = make_trap(f.p, f.b, {}, 10 * half);
    CHECK(t.equilibrium_z0 == 10 * half);
    CHECK_THAT(t.omega_EB, WithinRel(f.t.omega_EB, 1e-12));

    // L/4 exactly halfway between two minima goes to the lower one
    TrapSpec s = f.t;
    const double L = 4.0 * 10.5 * half;
    CHECK_THAT(default_equilibrium(s, L), WithinRel(10 * half, 1e-12));
}

TEST_CASE("drive amplitude and stored phonons") {
    Fixture f;
    const auto amp = required_drive_amplitude(f.t, f.p);
    CHECK_THAT(amp.bare, WithinRel(240e-12, 0.05));
    CHECK_THAT(amp.resonant, WithinRel(2.4e-15, 0.05));
    CHECK_THAT(amp.bare / amp.resonant, WithinRel(f.p.Q_ac, 1e-14));

    const auto st = stored_energy_and_phonons(f.t, f.p);
    CHECK_THAT(st.phonons, WithinRel(1.5e11, 0.10));
    CHECK_THAT(st.density_modulation, WithinRel(2.0e-3, 0.05));
    CHECK_THAT(readout_modulation_depth(f.t, f.p), WithinRel(190.0, 0.05));

    // n_ac grows linearly with Wac, delta rho / rho as its square root
    const auto t4 = make_trap_from_energy_density(4 * f.t.energy_density_Wac, f.p, f.b);
    const auto st4 = stored_energy_and_phonons(t4, f.p);
    CHECK_THAT(st4.energy, WithinRel(4 * st.energy, 1e-14));
    CHECK_THAT(st4.density_modulation, WithinRel(2 * st.density_modulation, 1e-14));

    auto p = f.p;
    p.radiation_ratio_sigma_rad = 0.0;
    CHECK_THROWS_AS(required_drive_amplitude(f.t, p), DomainError);
    p = f.p;
    p.g0_ac = 0.0;
    CHECK_THROWS_AS(readout_modulation_depth(f.t, p), DomainError);
}

TEST_CASE("potential table") {
    Fixture f;
    const auto grid = numerics::linspace(0.0, 2e-6, 11);
    const auto table = potential_table(f.t, grid);
    REQUIRE(table.rows.size() == 11);
    CHECK(table.columns == std::vector<std::string>{"z_m", "U_J", "U_over_kB_mK"});
    for (const auto& row : table.rows) {
        CHECK(row[1] == potential(row[0], f.t));
        CHECK_THAT(row[2], WithinRel(row[1] / PhysicalConstants{}.boltzmann_kB * 1e3, 1e-15));
    }
}

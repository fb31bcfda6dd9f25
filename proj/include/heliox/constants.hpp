#pragma once
// heliox/constants.hpp - physical constants and the superfluid helium host
//
// Everything here is SI. Values are CODATA 2018 (exact where the SI fixes them).

#include <numbers>

namespace heliox {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PhysicalConstants {
    double planck_h{6.62607015e-34};            ///< [J s]
    double hbar{6.62607015e-34 / kTwoPi};       ///< [J s]
    double boltzmann_kB{1.380649e-23};          ///< [J/K]
    double electron_mass_me{9.1093837015e-31};  ///< [kg]
    double bohr_magneton_muB{9.2740100783e-24}; ///< [J/T]
    double electron_g_factor{2.0023};           ///< free-electron g in helium
    double speed_of_light_c{299792458.0};       ///< [m/s]
    double elementary_charge_e{1.602176634e-19};///< [C]
    double vacuum_permittivity_eps0{8.8541878128e-12}; ///< [F/m]

    /// Moment of one spin projection, g mu_B / 2 [J/T]
    constexpr double spin_moment() const { return 0.5 * electron_g_factor * bohr_magneton_muB; }

    /// Larmor conversion g mu_B / hbar [rad/(s T)]
    constexpr double gyromagnetic_ratio() const {
        return electron_g_factor * bohr_magneton_muB / hbar;
    }
};

/// Liquid helium-4 below 100 mK.
struct HeliumMedium {
    double density_rho{145.0};              ///< [kg/m^3]
    double sound_speed_c{238.0};            ///< [m/s]
    double surface_tension_sigma{3.75e-4};  ///< [N/m] (0.375 erg/cm^2)
    double refractive_index_nHe{1.028};
    double permittivity_ratio{1.028 * 1.028}; ///< relative permittivity, ~ n_He^2
    double he3_fraction_x3{1e-12};          ///< fractional He-3 concentration
    double temperature_T{0.030};            ///< [K]

    /// Bulk (Young's) modulus rho c^2 [Pa]
    constexpr double youngs_modulus() const { return density_rho * sound_speed_c * sound_speed_c; }

    /// Absolute permittivity [F/m]
    constexpr double permittivity(const PhysicalConstants& k) const {
        return permittivity_ratio * k.vacuum_permittivity_eps0;
    }

    bool operator==(const HeliumMedium&) const = default;
};

} // namespace heliox

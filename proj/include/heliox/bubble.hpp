#pragma once
// heliox/bubble.hpp - electron bubble energetics
//
// Three-term energy: confined-electron zero point + surface + pV work.
//   E(R) = h^2/(8 m_e R^2) + 4 pi R^2 sigma + (4/3) pi R^3 P

#include <cmath>

#include "heliox/constants.hpp"
#include "heliox/errors.hpp"
#include "heliox/params.hpp"

namespace heliox {

struct BubbleProperties {
    double radius_R{};             ///< [m]
    double volume_V{};             ///< [m^3]
    double youngs_modulus_E_EB{};  ///< [Pa]
    double effective_mass_m{};     ///< [kg]
    double refractive_index_nEB{1.0};
    double polarizability_alpha{}; ///< [C m^2 / V]
    double density_rho{0.0};       ///< [kg/m^3], empty cavity
};

namespace bubble_detail {

inline double sphere_volume(double R) { return 4.0 / 3.0 * kPi * R * R * R; }

// x = 3V/4pi = R^3
inline double cube_radius(double V) { return 3.0 * V / (4.0 * kPi); }

inline double zero_point_coefficient(const PhysicalConstants& k) {
    return k.planck_h * k.planck_h / (16.0 * kPi * k.electron_mass_me);
}

} // namespace bubble_detail

inline double total_energy(double R, double P, const HeliumMedium& medium, const PhysicalConstants& k = {}) {
    if (!(R > 0.0)) throw DomainError("total_energy: radius must be positive");
    const double h2 = k.planck_h * k.planck_h;
    return h2 / (8.0 * k.electron_mass_me * R * R) + 4.0 * kPi * R * R * medium.surface_tension_sigma +
           4.0 / 3.0 * kPi * R * R * R * P;
}

inline double equilibrium_radius(const HeliumMedium& medium, const PhysicalConstants& k = {}) {
    if (!(medium.surface_tension_sigma > 0.0)) throw DomainError("equilibrium_radius: sigma must be positive");
    return std::pow(k.planck_h * k.planck_h / (32.0 * kPi * k.electron_mass_me * medium.surface_tension_sigma), 0.25);
}

/// Pressure the bubble exerts on the liquid at volume V, -dE/dV at zero external pressure.
inline double pressure_of_volume(double V, const HeliumMedium& medium, const PhysicalConstants& k = {}) {
    if (!(V > 0.0)) throw DomainError("pressure_of_volume: volume must be positive");
    const double x = bubble_detail::cube_radius(V);
    const double A = bubble_detail::zero_point_coefficient(k);
    return A * std::pow(x, -5.0 / 3.0) - 2.0 * medium.surface_tension_sigma * std::pow(x, -1.0 / 3.0);
}

/// -V dP/dV, analytic.
inline double youngs_modulus(double V, const HeliumMedium& medium, const PhysicalConstants& k = {}) {
    if (!(V > 0.0)) throw DomainError("youngs_modulus: volume must be positive");
    const double x = bubble_detail::cube_radius(V);
    const double A = bubble_detail::zero_point_coefficient(k);
    return 5.0 / 3.0 * A * std::pow(x, -5.0 / 3.0) - 2.0 / 3.0 * medium.surface_tension_sigma * std::pow(x, -1.0 / 3.0);
}

/// Clausius-Mossotti bracket (n_EB^2/n_He^2 - 1)/(n_EB^2/n_He^2 + 2).
inline double polarizability_contrast(double n_EB, const HeliumMedium& medium) {
    if (!(medium.refractive_index_nHe > 0.0)) throw DomainError("polarizability: n_He must be positive");
    const double r = (n_EB * n_EB) / (medium.refractive_index_nHe * medium.refractive_index_nHe);
    return (r - 1.0) / (r + 2.0);
}

inline double polarizability(const BubbleProperties& b, const HeliumMedium& medium, const PhysicalConstants& k = {}) {
    return 3.0 * medium.permittivity(k) * b.volume_V * polarizability_contrast(b.refractive_index_nEB, medium);
}

inline BubbleProperties make_bubble(const DeviceParams& p, const PhysicalConstants& k = {}) {
    BubbleProperties b;
    b.radius_R = p.R0_override ? *p.R0_override : equilibrium_radius(p.medium, k);
    b.volume_V = bubble_detail::sphere_volume(b.radius_R);
    b.youngs_modulus_E_EB = youngs_modulus(b.volume_V, p.medium, k);
    b.effective_mass_m = p.m_EB;
    b.polarizability_alpha = polarizability(b, p.medium, k);
    return b;
}

} // namespace heliox

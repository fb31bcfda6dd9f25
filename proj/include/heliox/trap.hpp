#pragma once
// heliox/trap.hpp - acoustic standing-wave trap
//
//   U(z) = V_EB W_ac [f1 - Phi sin^2(k z)]
//
// k is the acoustic wavevector of cavity mode n_ac, k = n_ac pi / L. For Phi < 0
// the minima are the pressure antinodes sin(kz) = 0 (the mirrors and every
// half acoustic wavelength in between).

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "heliox/bubble.hpp"
#include "heliox/constants.hpp"
#include "heliox/csv.hpp"
#include "heliox/errors.hpp"
#include "heliox/params.hpp"

namespace heliox {

struct ContrastFactors {
    double f1;
    double f2;
    double Phi;
};

struct TrapSpec {
    double energy_density_Wac{}; ///< [J/m^3]
    double contrast_f1{};
    double contrast_f2{};
    double contrast_Phi{};
    double wavevector_k{};       ///< [1/m]
    double depth_U0{};           ///< [J]
    double spring_kEB{};         ///< [N/m]
    double omega_EB{};           ///< [rad/s]
    double equilibrium_z0{};     ///< [m]
    double bubble_volume{};      ///< [m^3]
    double mass{};               ///< [kg]
};

inline ContrastFactors contrast_factors(const BubbleProperties& b, const HeliumMedium& medium) {
    if (b.youngs_modulus_E_EB == 0.0) throw NumericalError("contrast_factors: E_EB = 0 is singular");
    const double f1 = 1.0 - medium.youngs_modulus() / b.youngs_modulus_E_EB;
    const double rr = b.density_rho / medium.density_rho;
    const double f2 = 2.0 * (rr - 1.0) / (2.0 * rr + 1.0);
    return {f1, f2, f1 + 1.5 * f2};
}

inline double potential(double z, const TrapSpec& t) {
    const double s = std::sin(t.wavevector_k * z);
    return t.bubble_volume * t.energy_density_Wac * (t.contrast_f1 - t.contrast_Phi * s * s);
}

inline double potential_gradient(double z, const TrapSpec& t) {
    const double k = t.wavevector_k;
    return -t.bubble_volume * t.energy_density_Wac * t.contrast_Phi * k * std::sin(2.0 * k * z);
}

inline double potential_curvature(double z, const TrapSpec& t) {
    const double k = t.wavevector_k;
    return -2.0 * t.bubble_volume * t.energy_density_Wac * t.contrast_Phi * k * k * std::cos(2.0 * k * z);
}

/// k_EB at z; throws NumericalError unless z is a stable point.
inline double spring_constant(const TrapSpec& t, double z) {
    const double kEB = potential_curvature(z, t);
    if (!(kEB > 0.0)) throw NumericalError("spring_constant: Phi cos(2 k z0) >= 0, not a stable trap point");
    return kEB;
}

inline double trap_frequency(const TrapSpec& t) { return std::sqrt(spring_constant(t, t.equilibrium_z0) / t.mass); }

/// Newton refinement of a potential minimum from a nearby guess.
inline double refine_minimum(const TrapSpec& t, double z_guess) {
    const double lambda = kTwoPi / t.wavevector_k;
    double z = z_guess;
    for (int i = 0; i < 60; ++i) {
        const double c = potential_curvature(z, t);
        if (!(c > 0.0)) throw NumericalError("refine_minimum: guess not in a convex basin");
        const double step = potential_gradient(z, t) / c;
        z -= step;
        if (std::abs(step) <= 1e-12 * lambda) return z;
    }
    throw NumericalError("refine_minimum: Newton iteration did not converge");
}

/// All minima in [z_lo, z_hi]: coarse scan for sign changes of U' then Newton.
inline std::vector<double> locate_minima(const TrapSpec& t, double z_lo, double z_hi, int points_per_wavelength = 64) {
    const double lambda = kTwoPi / t.wavevector_k;
    const auto n = static_cast<std::size_t>(std::ceil((z_hi - z_lo) / lambda * points_per_wavelength)) + 1;
    std::vector<double> out;
    const double h = (z_hi - z_lo) / static_cast<double>(n);
    double prev = potential_gradient(z_lo, t);
    for (std::size_t i = 1; i <= n; ++i) {
        const double z = z_lo + h * static_cast<double>(i);
        const double g = potential_gradient(z, t);
        if (prev < 0.0 && g >= 0.0) {
            const double zm = refine_minimum(t, z - 0.5 * h);
            if (zm >= z_lo && zm <= z_hi && (out.empty() || std::abs(zm - out.back()) > 1e-6 * lambda))
                out.push_back(zm);
        }
        prev = g;
    }
    return out;
}

/// Trap minimum nearest L/4 from the z = 0 mirror; an exact tie goes to the mirror side.
inline double default_equilibrium(const TrapSpec& t, double cavity_length) {
    const double half = kPi / t.wavevector_k; // spacing of minima
    const double offset = t.contrast_Phi < 0.0 ? 0.0 : 0.5 * half;
    const double target = 0.25 * cavity_length;
    const double m = (target - offset) / half;
    double idx = std::round(m);
    if (std::abs(m - std::floor(m) - 0.5) < 1e-9) idx = std::floor(m);
    return offset + idx * half;
}

namespace trap_detail {

inline TrapSpec base_spec(double Wac, const DeviceParams& p, const BubbleProperties& b) {
    const auto cf = contrast_factors(b, p.medium);
    TrapSpec t;
    t.energy_density_Wac = Wac;
    t.contrast_f1 = cf.f1;
    t.contrast_f2 = cf.f2;
    t.contrast_Phi = cf.Phi;
    t.wavevector_k = p.n_ac_mode * kPi / p.cavity_length_L;
    t.bubble_volume = b.volume_V;
    t.mass = b.effective_mass_m;
    t.depth_U0 = b.volume_V * std::abs(cf.Phi) * Wac;
    return t;
}

inline void finish(TrapSpec& t, std::optional<double> z0, double L) {
    t.equilibrium_z0 = z0 ? *z0 : default_equilibrium(t, L);
    t.spring_kEB = spring_constant(t, t.equilibrium_z0);
    t.omega_EB = std::sqrt(t.spring_kEB / t.mass);
}

} // namespace trap_detail

/// Trap at an explicit acoustic energy density.
inline TrapSpec make_trap_from_energy_density(double Wac, const DeviceParams& p, const BubbleProperties& b,
                                              std::optional<double> z0 = std::nullopt) {
    if (!(Wac >= 0.0)) throw DomainError("energy density must be nonnegative");
    auto t = trap_detail::base_spec(Wac, p, b);
    trap_detail::finish(t, z0, p.cavity_length_L);
    return t;
}

/// Energy density that makes the trap depth U0 = kB * trap_depth_U0_over_kB.
inline double energy_density_for_depth(double depth_J, const BubbleProperties& b, const ContrastFactors& cf) {
    if (cf.Phi == 0.0) throw NumericalError("energy_density_for_depth: Phi = 0, no trap");
    return depth_J / (b.volume_V * std::abs(cf.Phi));
}

inline TrapSpec make_trap(const DeviceParams& p, const BubbleProperties& b, const PhysicalConstants& k = {},
                          std::optional<double> z0 = std::nullopt) {
    const double depth = k.boltzmann_kB * p.trap_depth_U0_over_kB;
    return make_trap_from_energy_density(energy_density_for_depth(depth, b, contrast_factors(b, p.medium)), p, b, z0);
}

struct DriveAmplitude {
    double bare;     ///< [m]
    double resonant; ///< [m], bare / Q_ac
};

inline DriveAmplitude required_drive_amplitude(const TrapSpec& t, const DeviceParams& p) {
    if (!(p.radiation_ratio_sigma_rad > 0.0)) throw DomainError("sigma_rad must be positive");
    if (!(p.Q_ac >= 1.0)) throw DomainError("Q_ac must be >= 1");
    const double bare = std::sqrt(4.0 * t.energy_density_Wac /
                                  (p.radiation_ratio_sigma_rad * p.medium.density_rho * p.omega_ac * p.omega_ac));
    return {bare, bare / p.Q_ac};
}

struct AcousticStore {
    double energy;           ///< [J]
    double phonons;          ///< n_ac
    double density_modulation; ///< delta rho / rho
};

inline double acoustic_mode_volume(const DeviceParams& p) {
    return kPi * p.cavity_waist_w * p.cavity_waist_w * p.cavity_length_L;
}

inline AcousticStore stored_energy_and_phonons(const TrapSpec& t, const DeviceParams& p,
                                               const PhysicalConstants& k = {}) {
    const double V = acoustic_mode_volume(p);
    if (!(V > 0.0)) throw DomainError("acoustic mode volume must be positive");
    const double E = 0.5 * t.energy_density_Wac * V;
    const double n = std::max(0.0, E / (k.hbar * p.omega_ac) - 0.5);
    const double EHe = p.medium.youngs_modulus();
    return {E, n, std::sqrt(4.0 * EHe * t.energy_density_Wac) / EHe};
}

/// Optical-frequency excursion of the trap-readout mode, in units of kappa.
inline double readout_modulation_depth(const TrapSpec& t, const DeviceParams& p, const PhysicalConstants& k = {}) {
    if (!(p.g0_ac > 0.0)) throw DomainError("g0_ac must be positive");
    const double n = stored_energy_and_phonons(t, p, k).phonons;
    return p.g0_ac * 2.0 * std::sqrt(n) / p.kappa;
}

inline CsvTable potential_table(const TrapSpec& t, std::span<const double> z_grid, const PhysicalConstants& k = {}) {
    CsvTable out;
    out.columns = {"z_m", "U_J", "U_over_kB_mK"};
    for (double z : z_grid) {
        const double U = potential(z, t);
        out.add_row({z, U, U / k.boltzmann_kB * 1e3});
    }
    return out;
}

} // namespace heliox

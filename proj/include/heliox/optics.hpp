#pragma once
// heliox/optics.hpp - Fabry-Perot modes of the helium-filled cavity and the
// dispersive EB-light coupling.
//
// Modes are plane standing waves cos^2(k z) with k = n pi / L; the Gaussian
// beam only enters through V = pi w^2 L.

#include <cmath>

#include "heliox/bubble.hpp"
#include "heliox/constants.hpp"
#include "heliox/errors.hpp"
#include "heliox/params.hpp"
#include "heliox/trap.hpp"

namespace heliox {

struct OpticalMode {
    int longitudinal_index_n{};
    double wavevector_k_opt{}; ///< [1/m] in the medium
    double resonance_omega_c{}; ///< [rad/s]
    double mode_volume{};       ///< [m^3]
    double cavity_length{};     ///< [m]
};

struct CouplingPoint {
    double position_z0{}; ///< [m]
    double g0{};          ///< [rad/s], signed
    double z_zpf{};       ///< [m]
};

inline OpticalMode make_mode(const DeviceParams& p, int n, const PhysicalConstants& k = {}) {
    if (n <= 0) throw DomainError("mode index must be positive");
    OpticalMode m;
    m.longitudinal_index_n = n;
    m.cavity_length = p.cavity_length_L;
    m.wavevector_k_opt = n * kPi / p.cavity_length_L;
    m.resonance_omega_c = k.speed_of_light_c * m.wavevector_k_opt / p.medium.refractive_index_nHe;
    m.mode_volume = kPi * p.cavity_waist_w * p.cavity_waist_w * p.cavity_length_L;
    return m;
}

inline double mode_intensity(double z, const OpticalMode& m) {
    if (z < 0.0 || z > m.cavity_length) throw DomainError("mode_intensity: z outside the cavity");
    const double c = std::cos(m.wavevector_k_opt * z);
    return c * c;
}

inline double zero_point_motion(double mass, double omega, const PhysicalConstants& k = {}) {
    if (!(mass > 0.0 && omega > 0.0)) throw DomainError("z_zpf needs positive mass and frequency");
    return std::sqrt(k.hbar / (2.0 * mass * omega));
}

/// g0 = omega_c alpha k sin(2 k z0) z_zpf / (2 eps_He V). Positive when moving +z
/// raises the cavity frequency (alpha < 0 pulls it down where the field is strong).
inline CouplingPoint coupling_rate(double z0, const OpticalMode& m, const BubbleProperties& b, const TrapSpec& t,
                                   const HeliumMedium& medium, const PhysicalConstants& k = {}) {
    CouplingPoint c;
    c.position_z0 = z0;
    c.z_zpf = zero_point_motion(b.effective_mass_m, t.omega_EB, k);
    const double kk = m.wavevector_k_opt;
    c.g0 = m.resonance_omega_c * b.polarizability_alpha * kk * std::sin(2.0 * kk * z0) * c.z_zpf /
           (2.0 * medium.permittivity(k) * m.mode_volume);
    return c;
}

/// Probe candidate is usable only if it is not the mode the trap wave modulates
/// at first order (2 n = n_ac).
inline void check_probe_candidate(int n_ac, int candidate) {
    if (2 * candidate == n_ac)
        throw ConfigError("probe mode " + std::to_string(candidate) + " has 2n = n_ac = " + std::to_string(n_ac) +
                          " and is first-order sensitive to the trap wave");
}

inline OpticalMode select_probe_mode(const DeviceParams& p, const PhysicalConstants& k = {}) {
    check_probe_candidate(p.n_ac_mode, p.n_opt_probe);
    return make_mode(p, p.n_opt_probe, k);
}

} // namespace heliox

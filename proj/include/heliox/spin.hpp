#pragma once
// heliox/spin.hpp - magnetic forcing protocols
//
// I   gradient modulation:  F = mu_s G cos(w t)
// II  Rabi drive tuned so sqrt(Delta^2 + w1^2) = w_EB
// III adiabatic passage with the bias field swept through resonance, LZ errors

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "heliox/constants.hpp"
#include "heliox/errors.hpp"

namespace heliox {

enum class ProtocolKind { GradientMod, Rabi, AdiabaticFlip };

inline std::string to_string(ProtocolKind k) {
    switch (k) {
    case ProtocolKind::GradientMod: return "gradient-mod";
    case ProtocolKind::Rabi: return "rabi";
    case ProtocolKind::AdiabaticFlip: return "adiabatic-flip";
    }
    return "?";
}

inline ProtocolKind protocol_kind_from_string(const std::string& s) {
    if (s == "gradient-mod") return ProtocolKind::GradientMod;
    if (s == "rabi") return ProtocolKind::Rabi;
    if (s == "adiabatic-flip") return ProtocolKind::AdiabaticFlip;
    throw ConfigError("unknown protocol '" + s + "' (gradient-mod, rabi, adiabatic-flip)");
}

struct ProtocolSpec {
    ProtocolKind kind{ProtocolKind::GradientMod};
    double G{100.0};              ///< [T/m]
    double B0_or_mean{45e-3};     ///< [T]
    double B1{1.5e-3};            ///< [T]
    double Bmod{1.6e-3};          ///< [T]
    double detuning_Delta{0.0};   ///< [rad/s]
    int spin_sign{+1};
    double T1{1e3};               ///< [s]
    double omega_EB{kTwoPi * 2.9e6}; ///< drive frequency [rad/s]
    double phase{0.0};            ///< [rad]
};

struct HarmonicAmplitude {
    int index;
    double amplitude; ///< [N]
};

struct ForceWaveform {
    double fundamental_amplitude{}; ///< [N]
    std::vector<double> t;          ///< [s]
    std::vector<double> F;          ///< [N]
    std::vector<HarmonicAmplitude> harmonic_content; ///< index 0 is the mean
};

/// Magnitude of the n-th Fourier coefficient of samples spanning whole periods
/// of w (one-sided amplitude; n = 0 gives the mean).
inline double fourier_amplitude(const std::vector<double>& t, const std::vector<double>& f, double omega, int n) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < t.size(); ++i) acc += f[i] * std::polar(1.0, -n * omega * t[i]);
    const double scale = (n == 0 ? 1.0 : 2.0) / static_cast<double>(t.size());
    return std::abs(acc) * scale;
}

namespace spin_detail {

template <typename Fn>
ForceWaveform sample(Fn&& force, double omega, int periods = 4, int samples_per_period = 512, int harmonics = 5) {
    ForceWaveform w;
    const int N = periods * samples_per_period;
    const double dt = kTwoPi / omega / samples_per_period;
    w.t.resize(N);
    w.F.resize(N);
    for (int i = 0; i < N; ++i) {
        w.t[i] = i * dt;
        w.F[i] = force(w.t[i]);
    }
    for (int h = 0; h <= harmonics; ++h) w.harmonic_content.push_back({h, fourier_amplitude(w.t, w.F, omega, h)});
    w.fundamental_amplitude = w.harmonic_content[1].amplitude;
    return w;
}

} // namespace spin_detail

inline ForceWaveform gradient_mod_force(const ProtocolSpec& s, const PhysicalConstants& k = {}) {
    if (s.kind != ProtocolKind::GradientMod) throw UsageError("gradient_mod_force: protocol is not gradient-mod");
    const double amp = s.spin_sign * k.spin_moment() * s.G;
    return spin_detail::sample([&](double t) { return amp * std::cos(s.omega_EB * t + s.phase); }, s.omega_EB);
}

/// Larmor conversion of a field to an angular frequency.
inline double larmor(double B, const PhysicalConstants& k = {}) { return k.gyromagnetic_ratio() * B; }

/// Largest B1 for which a real detuning keeps the Rabi frequency at w_EB.
inline double rabi_b1_max(double omega_EB, const PhysicalConstants& k = {}) {
    return k.hbar * omega_EB / (k.electron_g_factor * k.bohr_magneton_muB);
}

inline double rabi_tuning(double B1, double omega_EB, const PhysicalConstants& k = {}) {
    const double w1 = larmor(B1, k);
    if (w1 > omega_EB * (1.0 + 1e-12))
        throw DomainError("rabi_tuning: B1 above B1_max = " + std::to_string(rabi_b1_max(omega_EB, k)) +
                          " T, no detuning gives Rabi frequency w_EB");
    return std::sqrt(std::max(0.0, omega_EB * omega_EB - w1 * w1));
}

/// Sets detuning_Delta so the Rabi frequency equals omega_EB.
inline ProtocolSpec tune_rabi(ProtocolSpec s, const PhysicalConstants& k = {}) {
    s.kind = ProtocolKind::Rabi;
    s.detuning_Delta = rabi_tuning(s.B1, s.omega_EB, k);
    return s;
}

inline ForceWaveform rabi_force(const ProtocolSpec& s, const PhysicalConstants& k = {}) {
    if (s.kind != ProtocolKind::Rabi) throw UsageError("rabi_force: protocol is not rabi");
    const double w1 = larmor(s.B1, k);
    const double Omega = std::hypot(s.detuning_Delta, w1);
    if (std::abs(Omega / s.omega_EB - 1.0) > 1e-9)
        throw DomainError("rabi_force: Rabi frequency " + std::to_string(Omega / kTwoPi) +
                          " Hz differs from w_EB; tune the detuning first");
    const double contrast = (w1 / Omega) * (w1 / Omega);
    const double amp = s.spin_sign * k.spin_moment() * s.G * contrast;
    return spin_detail::sample(
        [&](double t) {
            const double sn = std::sin(0.5 * (Omega * t + s.phase));
            return amp * sn * sn;
        },
        s.omega_EB);
}

inline double adiabatic_magnetization(double t, const ProtocolSpec& s, const PhysicalConstants& k = {}) {
    if (s.kind != ProtocolKind::AdiabaticFlip) throw UsageError("adiabatic_magnetization: protocol is not adiabatic-flip");
    if (s.B1 == 0.0 && s.Bmod == 0.0) throw NumericalError("adiabatic_magnetization: B1 = Bmod = 0 is singular");
    const double sn = std::sin(s.omega_EB * t + s.phase);
    return s.spin_sign * k.spin_moment() * s.Bmod * sn / std::sqrt(s.B1 * s.B1 + s.Bmod * s.Bmod * sn * sn);
}

inline ForceWaveform adiabatic_force(const ProtocolSpec& s, const PhysicalConstants& k = {}) {
    return spin_detail::sample([&](double t) { return adiabatic_magnetization(t, s, k) * s.G; }, s.omega_EB, 4, 4096,
                               7);
}

inline ForceWaveform protocol_force(const ProtocolSpec& s, const PhysicalConstants& k = {}) {
    switch (s.kind) {
    case ProtocolKind::GradientMod: return gradient_mod_force(s, k);
    case ProtocolKind::Rabi: return rabi_force(s, k);
    case ProtocolKind::AdiabaticFlip: return adiabatic_force(s, k);
    }
    throw UsageError("unknown protocol");
}

/// Instantaneous protocol force for a +1 spin, for time-domain simulation.
inline double protocol_force_at(double t, const ProtocolSpec& s, const PhysicalConstants& k = {}) {
    switch (s.kind) {
    case ProtocolKind::GradientMod: return k.spin_moment() * s.G * std::cos(s.omega_EB * t + s.phase);
    case ProtocolKind::Rabi: {
        const double w1 = larmor(s.B1, k);
        const double Omega = std::hypot(s.detuning_Delta, w1);
        const double sn = std::sin(0.5 * (Omega * t + s.phase));
        return k.spin_moment() * s.G * (w1 / Omega) * (w1 / Omega) * sn * sn;
    }
    case ProtocolKind::AdiabaticFlip: {
        ProtocolSpec up = s;
        up.spin_sign = +1;
        return adiabatic_magnetization(t, up, k) * s.G;
    }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Landau-Zener
// ---------------------------------------------------------------------------

/// ln P_LZ = -(pi/2) w1^2 / (w_EB wmod)
inline double lz_exponent(double B1, double Bmod, double omega_EB, const PhysicalConstants& k = {}) {
    if (!(B1 >= 0.0 && Bmod > 0.0 && omega_EB > 0.0)) throw DomainError("lz: need B1 >= 0, Bmod > 0, w_EB > 0");
    const double w1 = larmor(B1, k);
    const double wm = larmor(Bmod, k);
    return -0.5 * kPi * w1 * w1 / (omega_EB * wm);
}

inline double lz_probability(double B1, double Bmod, double omega_EB, const PhysicalConstants& k = {}) {
    return std::exp(lz_exponent(B1, Bmod, omega_EB, k));
}

/// Same quantity written with mu_eff = g mu_B / 2.
inline double lz_probability_moment_form(double B1, double Bmod, double omega_EB, const PhysicalConstants& k = {}) {
    if (!(Bmod > 0.0)) throw DomainError("lz: Bmod must be positive");
    return std::exp(-kPi * k.spin_moment() * B1 * B1 / (k.hbar * omega_EB * Bmod));
}

/// Two resonance passages per modulation period.
inline double diabatic_error_rate(double B1, double Bmod, double omega_EB, const PhysicalConstants& k = {}) {
    return 2.0 * omega_EB / kTwoPi * lz_probability(B1, Bmod, omega_EB, k);
}

/// Bmod on the constant-rate contour through B1.
inline double error_rate_contour_bmod(double rate, double B1, double omega_EB, const PhysicalConstants& k = {}) {
    const double P = rate * kPi / omega_EB;
    if (!(P > 0.0 && P < 1.0)) throw DomainError("error-rate contour: rate must be in (0, w_EB/pi)");
    const double w1 = larmor(B1, k);
    const double wm = 0.5 * kPi * w1 * w1 / (omega_EB * -std::log(P));
    return wm / k.gyromagnetic_ratio();
}

// ---------------------------------------------------------------------------

struct DisplacementResponse {
    double amplitude;    ///< [m]
    bool exceeds_limit;  ///< above 100 nm, the largest amplitude the damping estimates cover
};

inline DisplacementResponse displacement_response(double F, double Q, double omega_EB, double mass) {
    if (!(Q >= 1.0)) throw DomainError("displacement_response: Q must be >= 1");
    const double z = std::abs(F) * Q / (mass * omega_EB * omega_EB);
    return {z, z > 100e-9};
}

} // namespace heliox

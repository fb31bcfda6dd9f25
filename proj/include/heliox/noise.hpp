#pragma once
// heliox/noise.hpp - force-noise budget, SNR, required Q, linearized spectra
//
//   F_th   = sqrt(4 kB T m w b / Q)
//   F_shot = hbar w |kappa/2 - i w| (kappa/kappa_ex) sqrt(b m w w_l / (8 P Q^2 g0^2))
//   SNR    = F_mag / (sqrt2 (F_th + F_shot [+ F_rpsn]))
//
// Spectra follow the rotating-frame input-output treatment: chi_c, chi_m,
// Sigma_opt, chi_eff, S_b+b / S_bb+, S_xx and the heterodyne photocurrent PSD.

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heliox/device.hpp"
#include "heliox/errors.hpp"
#include "heliox/numerics.hpp"
#include "heliox/parallel.hpp"
#include "heliox/spin.hpp"
#include "heliox/transport.hpp"

namespace heliox {

struct OperatingPoint {
    double T{0.030};        ///< [K]
    double x3{1e-12};
    double G{100.0};        ///< [T/m]
    double P{1e-6};         ///< [W]
    double finesse{1e5};
    double b{1.0};          ///< [Hz]
    std::optional<double> Q_EB{}; ///< overrides the damping model when set
    double Delta_l{0.0};    ///< [rad/s]
};

inline OperatingPoint operating_point_from(const DeviceParams& p) {
    OperatingPoint op;
    op.T = p.medium.temperature_T;
    op.x3 = p.medium.he3_fraction_x3;
    op.G = p.gradient_G;
    op.P = p.laser_power_P;
    op.finesse = p.finesse_F;
    op.b = p.bandwidth_b;
    op.Delta_l = p.probe_detuning_Delta_l;
    return op;
}

inline double thermal_force(double T, double Q, double mass, double omega, double b, const PhysicalConstants& k = {}) {
    if (T < 0.0 || !(Q > 0.0) || !(b > 0.0)) throw DomainError("thermal_force: need T >= 0, Q > 0, b > 0");
    return std::sqrt(4.0 * k.boltzmann_kB * T * mass * omega * b / Q);
}

inline double thermal_force(const Device& d, double T, double Q, double b) {
    return thermal_force(T, Q, d.mass(), d.omega_EB(), b, d.constants);
}

inline double detector_shot_force(const Device& d, double P, double finesse, double Q, double g0, double b) {
    if (g0 == 0.0) throw DomainError("detector_shot_force: g0 = 0, the probe is blind to the motion");
    if (!(P > 0.0)) throw DomainError("detector_shot_force: P must be positive");
    const auto& k = d.constants;
    const double w = d.omega_EB();
    const double kappa = kappa_for_finesse(d.params, finesse);
    const double kappa_ex = d.params.kappa_ex_ratio * kappa;
    const double cavity = std::abs(std::complex<double>(0.5 * kappa, -w));
    return k.hbar * w * cavity * (kappa / kappa_ex) *
           std::sqrt(b * d.mass() * w * d.omega_laser() / (8.0 * P * Q * Q * g0 * g0));
}

/// |a0|^2 from the input-output steady state.
inline double intracavity_photons(const Device& d, double P, double finesse, double Delta_l) {
    const double kappa = kappa_for_finesse(d.params, finesse);
    const double kappa_ex = d.params.kappa_ex_ratio * kappa;
    const double flux = P / (d.constants.hbar * d.omega_laser());
    return kappa_ex * flux / (0.25 * kappa * kappa + Delta_l * Delta_l);
}

/// Radiation-pressure shot-noise force PSD [N^2/Hz].
inline double rpsn_force_psd(double omega, double g0, double n_cav, double z_zpf, double kappa, double Delta_l,
                             const PhysicalConstants& k = {}) {
    const double x = omega + Delta_l;
    return k.hbar * k.hbar * g0 * g0 * n_cav / (z_zpf * z_zpf) * kappa / (0.25 * kappa * kappa + x * x);
}

/// White force with the same power in band b as RPSN at the two motional sidebands.
inline double rpsn_equivalent_force(const Device& d, double P, double finesse, double Delta_l, double b) {
    const double n = intracavity_photons(d, P, finesse, Delta_l);
    const double kappa = kappa_for_finesse(d.params, finesse);
    const auto& c = d.probe_coupling;
    const double w = d.omega_EB();
    const double S = rpsn_force_psd(w, c.g0, n, c.z_zpf, kappa, Delta_l, d.constants) +
                     rpsn_force_psd(-w, c.g0, n, c.z_zpf, kappa, Delta_l, d.constants);
    return std::sqrt(S * b);
}

struct NoiseBudget {
    double F_th{};
    double F_shot{};
    double F_rpsn_equiv{};
    double F_mag{};         ///< idealized mu_s G [N]
    double F_fundamental{}; ///< protocol's true w_EB Fourier amplitude [N]
    double snr{};           ///< F_mag / (sqrt2 (F_th + F_shot + F_rpsn))
    double snr_quadrature{};
    double snr_fundamental{};
    double Q_EB{};
    double gamma_EB{};
    OperatingPoint point{};
};

inline NoiseBudget budget_at_q(const Device& d, const OperatingPoint& op, double Q,
                               const std::optional<ProtocolSpec>& protocol = std::nullopt) {
    NoiseBudget nb;
    nb.point = op;
    nb.Q_EB = Q;
    nb.gamma_EB = d.omega_EB() / Q;
    nb.F_th = thermal_force(d, op.T, Q, op.b);
    nb.F_shot = detector_shot_force(d, op.P, op.finesse, Q, d.probe_coupling.g0, op.b);
    nb.F_rpsn_equiv = rpsn_equivalent_force(d, op.P, op.finesse, op.Delta_l, op.b);
    nb.F_mag = d.constants.spin_moment() * op.G;
    if (protocol) {
        ProtocolSpec s = *protocol;
        s.G = op.G;
        s.omega_EB = d.omega_EB();
        if (s.kind == ProtocolKind::Rabi) s = tune_rabi(s, d.constants);
        nb.F_fundamental = protocol_force(s, d.constants).fundamental_amplitude;
    } else {
        nb.F_fundamental = nb.F_mag;
    }
    const double sum = nb.F_th + nb.F_shot + nb.F_rpsn_equiv;
    const double quad = std::sqrt(nb.F_th * nb.F_th + nb.F_shot * nb.F_shot + nb.F_rpsn_equiv * nb.F_rpsn_equiv);
    nb.snr = nb.F_mag / (std::sqrt(2.0) * sum);
    nb.snr_quadrature = nb.F_mag / (std::sqrt(2.0) * quad);
    nb.snr_fundamental = nb.F_fundamental / (std::sqrt(2.0) * sum);
    return nb;
}

inline double resolve_q(const Device& d, const OperatingPoint& op, const DampingModel& model) {
    if (op.Q_EB) return *op.Q_EB;
    return q_factor(op.T, op.x3, model, d.omega_EB());
}

inline NoiseBudget snr(const Device& d, const OperatingPoint& op, const DampingModel& model,
                       const std::optional<ProtocolSpec>& protocol = std::nullopt) {
    return budget_at_q(d, op, resolve_q(d, op, model), protocol);
}

/// Q_EB at which the primary SNR equals target (bisection on log10 Q over [0, 12]).
inline double required_q(const Device& d, const OperatingPoint& op, double target = 1.0) {
    auto f = [&](double lq) { return std::log(budget_at_q(d, op, std::pow(10.0, lq)).snr / target); };
    const double lo = 0.0, hi = 12.0;
    const double flo = f(lo), fhi = f(hi);
    if (fhi < 0.0)
        throw NumericalError("required_q: SNR " + std::to_string(target) + " unattainable for Q <= 1e12 at T = " +
                             std::to_string(op.T) + " K, G = " + std::to_string(op.G) + " T/m");
    if (flo > 0.0)
        throw NumericalError("required_q: SNR already exceeds " + std::to_string(target) + " at Q = 1");
    return std::pow(10.0, numerics::bisect(f, lo, hi, 1e-15));
}

/// Temperature where the model Q_EB(T, x3) meets the Q required for SNR = target.
inline double required_q_crossing(const Device& d, OperatingPoint op, const DampingModel& model, double T_lo,
                                  double T_hi, double target = 1.0) {
    op.Q_EB.reset();
    auto f = [&](double lT) {
        op.T = std::exp(lT);
        return std::log(q_factor(op.T, op.x3, model, d.omega_EB()) / required_q(d, op, target));
    };
    return std::exp(numerics::bisect(f, std::log(T_lo), std::log(T_hi), 1e-13));
}

/// Probe power where detector shot noise equals thermal noise.
inline double shot_thermal_crossing_power(const Device& d, OperatingPoint op, const DampingModel& model, double P_lo,
                                          double P_hi) {
    const double Q = resolve_q(d, op, model);
    const double Fth = thermal_force(d, op.T, Q, op.b);
    auto f = [&](double lP) {
        return std::log(detector_shot_force(d, std::exp(lP), op.finesse, Q, d.probe_coupling.g0, op.b) / Fth);
    };
    return std::exp(numerics::bisect(f, std::log(P_lo), std::log(P_hi), 1e-13));
}

// ---------------------------------------------------------------------------
// Linearized spectra
// ---------------------------------------------------------------------------

inline double bose_occupation(double omega, double T, const PhysicalConstants& k = {}) {
    if (T <= 0.0) return 0.0;
    return 1.0 / std::expm1(k.hbar * omega / (k.boltzmann_kB * T));
}

enum SpectrumSource : unsigned { kRpsn = 1u, kThermal = 2u, kMagnetic = 4u, kAllForces = 7u };

struct SpectrumInputs {
    double T{0.030};
    double Q_EB{6e5};
    double P{1e-6};
    double finesse{1e5};
    double b{1.0};
    double Delta_l{0.0};
    double F_mag{0.0};      ///< magnetic force amplitude at w_EB [N]
    bool backaction{true};  ///< false drops Sigma_opt and RPSN
};

/// Closed-form evaluation of every linearized quantity at one angular frequency.
class SpectrumModel {
public:
    using cplx = std::complex<double>;

    SpectrumModel(const Device& d, const SpectrumInputs& in) : k_(d.constants), in_(in) {
        w_ = d.omega_EB();
        gamma_ = w_ / in.Q_EB;
        kappa_ = kappa_for_finesse(d.params, in.finesse);
        kappa_ex_ = d.params.kappa_ex_ratio * kappa_;
        g0_ = d.probe_coupling.g0;
        z_zpf_ = d.probe_coupling.z_zpf;
        mass_ = d.mass();
        n_cav_ = in.P > 0.0 ? intracavity_photons(d, in.P, in.finesse, in.Delta_l) : 0.0;
        n_th_ = bose_occupation(w_, in.T, k_);
        const double s = k_.hbar * k_.hbar / (z_zpf_ * z_zpf_) * gamma_;
        S_th_dF_ = s * n_th_;
        S_th_Fd_ = s * (n_th_ + 1.0);
    }

    double omega_EB() const { return w_; }
    double gamma() const { return gamma_; }
    double kappa() const { return kappa_; }
    double kappa_ex() const { return kappa_ex_; }
    double n_th() const { return n_th_; }
    double n_cav() const { return n_cav_; }
    double z_zpf() const { return z_zpf_; }
    double mass() const { return mass_; }
    double g0() const { return g0_; }

    cplx chi_c(double w) const { return 1.0 / cplx(0.5 * kappa_, -w); }
    cplx chi_m(double w) const { return 1.0 / cplx(0.5 * gamma_, -(w - w_)); }
    cplx sigma_opt(double w) const {
        if (!in_.backaction) return 0.0;
        return cplx(0.0, 1.0) * g0_ * g0_ * n_cav_ * (chi_c(w - in_.Delta_l) - chi_c(w + in_.Delta_l));
    }
    cplx chi_eff(double w) const { return 1.0 / (1.0 / chi_m(w) + cplx(0.0, 1.0) * sigma_opt(w)); }
    double optical_spring(double w) const { return sigma_opt(w).real(); }
    double optical_damping(double w) const { return -2.0 * sigma_opt(w).imag(); }

    double S_rpsn(double w) const {
        if (!in_.backaction || n_cav_ == 0.0) return 0.0;
        return rpsn_force_psd(w, g0_, n_cav_, z_zpf_, kappa_, in_.Delta_l, k_);
    }
    double S_th_FdF() const { return S_th_dF_; }
    double S_th_FFd() const { return S_th_Fd_; }

    /// Coherent drive as a line of equivalent-noise bandwidth b at +-w_EB.
    double S_mag(double w) const {
        if (in_.F_mag == 0.0) return 0.0;
        const double G = 2.0 * in_.b; // half width [rad/s]
        const double peak = in_.F_mag * in_.F_mag / (4.0 * in_.b);
        auto line = [&](double x) { return G * G / (G * G + x * x); };
        return peak * (line(w - w_) + line(w + w_));
    }

    double S_bdb(double w, unsigned src = kAllForces) const {
        return std::norm(chi_eff(-w)) * z_zpf_ * z_zpf_ / (k_.hbar * k_.hbar) * forces(w, src, S_th_dF_);
    }
    double S_bbd(double w, unsigned src = kAllForces) const {
        return std::norm(chi_eff(w)) * z_zpf_ * z_zpf_ / (k_.hbar * k_.hbar) * forces(w, src, S_th_Fd_);
    }
    double S_xx(double w, unsigned src = kAllForces) const {
        return z_zpf_ * z_zpf_ * (S_bdb(w, src) + S_bbd(w, src));
    }

    /// Output-field sideband PSD (kappa_ex kept).
    double S_out(double nu, unsigned src = kAllForces) const {
        const double x = nu + in_.Delta_l;
        return kappa_ex_ * std::norm(chi_c(-nu)) * g0_ * g0_ * n_cav_ * (S_bdb(x, src) + S_bbd(x, src));
    }

private:
    double forces(double w, unsigned src, double thermal) const {
        double s = 0.0;
        if (src & kRpsn) s += S_rpsn(w);
        if (src & kMagnetic) s += S_mag(w);
        if (src & kThermal) s += thermal;
        return s;
    }

    PhysicalConstants k_;
    SpectrumInputs in_;
    double w_{}, gamma_{}, kappa_{}, kappa_ex_{}, g0_{}, z_zpf_{}, mass_{}, n_cav_{}, n_th_{};
    double S_th_dF_{}, S_th_Fd_{};
};

struct SpectrumSet {
    std::vector<double> grid_omega;
    std::vector<std::complex<double>> chi_c, chi_m, chi_eff, Sigma_opt;
    std::vector<double> S_FF_rpsn;
    std::vector<double> S_FF_thermal_FdF;
    std::vector<double> S_FF_thermal_FFd;
    std::vector<double> S_bdb, S_bbd;
    std::vector<double> S_xx;
    double n_th{};
    double gamma_EB{};
};

inline SpectrumSet linearized_spectra(const Device& d, const SpectrumInputs& in, std::span<const double> grid) {
    const SpectrumModel m(d, in);
    SpectrumSet s;
    const std::size_t n = grid.size();
    s.grid_omega.assign(grid.begin(), grid.end());
    s.chi_c.resize(n);
    s.chi_m.resize(n);
    s.chi_eff.resize(n);
    s.Sigma_opt.resize(n);
    s.S_FF_rpsn.resize(n);
    s.S_FF_thermal_FdF.assign(n, m.S_th_FdF());
    s.S_FF_thermal_FFd.assign(n, m.S_th_FFd());
    s.S_bdb.resize(n);
    s.S_bbd.resize(n);
    s.S_xx.resize(n);
    s.n_th = m.n_th();
    s.gamma_EB = m.gamma();
    parallel_for(n, [&](std::size_t i) {
        const double w = grid[i];
        s.chi_c[i] = m.chi_c(w);
        s.chi_m[i] = m.chi_m(w);
        s.chi_eff[i] = m.chi_eff(w);
        s.Sigma_opt[i] = m.sigma_opt(w);
        s.S_FF_rpsn[i] = m.S_rpsn(w);
        s.S_bdb[i] = m.S_bdb(w);
        s.S_bbd[i] = m.S_bbd(w);
        s.S_xx[i] = m.S_xx(w);
    });
    return s;
}

/// Default grid: w_EB +- 10 gamma.
inline std::vector<double> default_spectrum_grid(double omega_EB, double gamma, std::size_t count = 2001) {
    return numerics::linspace(omega_EB - 10.0 * gamma, omega_EB + 10.0 * gamma, count);
}

// ---------------------------------------------------------------------------
// Heterodyne photocurrent
// ---------------------------------------------------------------------------

enum class HeterodyneNormalization { MagneticPeak, ShotNoise };

struct HeterodyneOptions {
    double omega_lo{kTwoPi * 80e6};
    double lo_power_ratio{1e6}; ///< |a_lo|^2 relative to |a0|^2
    double detector_gain{1.0};
    HeterodyneNormalization normalization{HeterodyneNormalization::MagneticPeak};
};

struct HeterodyneSpectrum {
    std::vector<double> offset;   ///< photocurrent frequency minus signal frequency [rad/s]
    std::vector<double> omega;    ///< photocurrent angular frequency [rad/s]
    std::vector<double> total, rpsn, thermal, magnetic, shot;
    double signal_omega{};        ///< w_lo + Delta_l - w_EB
    double normalization{};       ///< divisor applied to G^2 |a_lo|^2 (...)
    bool lo_assumption_violated{};
};

inline HeterodyneSpectrum heterodyne_psd(const Device& d, const SpectrumInputs& in, std::span<const double> offsets,
                                         const HeterodyneOptions& opt = {}) {
    const SpectrumModel m(d, in);
    HeterodyneSpectrum h;
    h.signal_omega = opt.omega_lo + in.Delta_l - m.omega_EB();
    h.lo_assumption_violated = opt.lo_power_ratio < 10.0;
    const double a_lo2 = opt.lo_power_ratio * m.n_cav();
    const double scale = opt.detector_gain * opt.detector_gain * a_lo2;

    auto component = [&](double w, unsigned src) {
        return scale * (m.S_out(opt.omega_lo + w, src) + m.S_out(opt.omega_lo - w, src));
    };
    const double mag_peak = component(h.signal_omega, kMagnetic);
    h.normalization = opt.normalization == HeterodyneNormalization::ShotNoise ? scale : mag_peak;
    if (!(h.normalization > 0.0)) throw NumericalError("heterodyne_psd: normalization is zero (no signal or no LO)");

    const std::size_t n = offsets.size();
    h.offset.assign(offsets.begin(), offsets.end());
    h.omega.resize(n);
    h.total.resize(n);
    h.rpsn.resize(n);
    h.thermal.resize(n);
    h.magnetic.resize(n);
    h.shot.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const double w = h.signal_omega + offsets[i];
        h.omega[i] = w;
        h.rpsn[i] = component(w, kRpsn) / h.normalization;
        h.thermal[i] = component(w, kThermal) / h.normalization;
        h.magnetic[i] = component(w, kMagnetic) / h.normalization;
        h.shot[i] = scale / h.normalization;
        h.total[i] = h.rpsn[i] + h.thermal[i] + h.magnetic[i] + h.shot[i];
    });
    return h;
}

} // namespace heliox

#pragma once
// heliox/montecarlo.hpp - Langevin time-domain oracle
//
//   m x'' = -U'(z0 + x) - m gamma x' + s(t) F_p(t) + xi(t)
//
// BAOAB splitting: half kick, half drift, exact Ornstein-Uhlenbeck velocity
// update, half drift, half kick, with the trap force rescaled so the discrete
// oscillator keeps the continuum frequency. The OU step samples the Maxwell distribution
// exactly, so <v^2> carries no dt-dependent temperature bias. The force at the
// end of a step is reused for the next one.
//
// Two lock-in channels per window of length 1/b:
//   displacement  x(t) demodulated at w_EB
//   force         impulse of the non-conservative forces (drive + Langevin)
//                 per step, demodulated at w_EB; std of its I quadrature is
//                 sqrt(4 kB T m gamma b) = F_th.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heliox/constants.hpp"
#include "heliox/errors.hpp"
#include "heliox/spin.hpp"
#include "heliox/trap.hpp"

namespace heliox {

struct SimConfig {
    double dt{0.0};            ///< [s]; 0 picks period/64
    double duration{1e-3};     ///< [s]
    std::uint64_t seed{1};
    double temperature{0.030}; ///< [K]
    double Q_EB{6e5};
    std::optional<ProtocolSpec> protocol{};
    int record_decimation{1000};
    double bandwidth_b{1e3};   ///< lock-in window is 1/b [Hz]
    double detector_force_std{0.0}; ///< white detector + backaction force, std per window quadrature [N]
    double z_init{0.0};        ///< offset from z0 [m]
    double v_init{0.0};        ///< [m/s]
    bool thermalize{true};     ///< draw the initial state from the harmonic Boltzmann law
    double T1{std::numeric_limits<double>::infinity()}; ///< mean time between spin flips [s]
};

struct Trajectory {
    // decimated record
    std::vector<double> times, positions, velocities;
    std::vector<int> spin_signs;
    // one entry per lock-in window
    std::vector<double> lockin_I, lockin_Q;             ///< displacement channel [m]
    std::vector<double> force_I, force_Q;               ///< force channel [N]
    std::vector<int> window_spin;                       ///< spin at the window start
    std::vector<double> window_z2;                      ///< mean x^2 per window [m^2]
    double max_speed{};
    long flip_count{};
    double z2_mean{};
    double z2_stderr{};
    double v2_mean{};
    std::uint64_t steps{};
    double dt{};
    double omega_ref{};
};

inline double default_timestep(const TrapSpec& t) { return kTwoPi / t.omega_EB / 64.0; }

inline void validate(const SimConfig& cfg, const TrapSpec& t) {
    const double period = kTwoPi / t.omega_EB;
    const double dt = cfg.dt > 0.0 ? cfg.dt : default_timestep(t);
    if (dt > period / 50.0 * (1.0 + 1e-12))
        throw ValidationError("sim: dt must be <= period/50 = " + std::to_string(period / 50.0) + " s");
    if (cfg.duration < 100.0 * period * (1.0 - 1e-12))
        throw ValidationError("sim: duration must cover >= 100 trap periods");
    if (cfg.temperature < 0.0) throw ValidationError("sim: temperature must be >= 0");
    if (!(cfg.Q_EB >= 1.0)) throw ValidationError("sim: Q_EB must be >= 1");
    if (cfg.record_decimation < 1) throw ValidationError("sim: record_decimation must be >= 1");
    if (!(cfg.bandwidth_b > 0.0)) throw ValidationError("sim: bandwidth_b must be positive");
    if (!(cfg.T1 > 0.0)) throw ValidationError("sim: T1 must be positive");
    if (cfg.detector_force_std < 0.0) throw ValidationError("sim: detector_force_std must be >= 0");
}

namespace mc_detail {

inline std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

/// Unit phasor advanced by a fixed angle, renormalized periodically.
struct Phasor {
    double c, s, cd, sd;
    int count{0};
    Phasor(double phase, double step) : c(std::cos(phase)), s(std::sin(phase)), cd(std::cos(step)), sd(std::sin(step)) {}
    void advance() {
        const double nc = c * cd - s * sd;
        s = s * cd + c * sd;
        c = nc;
        if (++count == 4096) {
            const double r = 1.0 / std::hypot(c, s);
            c *= r;
            s *= r;
            count = 0;
        }
    }
};

// Protocol force (spin +1) from the drive phasor cos/sin(w t + phi).
inline double drive_force(const ProtocolSpec& p, double c, double s, double mu, double w1_over_Omega_sq) {
    switch (p.kind) {
    case ProtocolKind::GradientMod: return mu * p.G * c;
    case ProtocolKind::Rabi: return mu * p.G * w1_over_Omega_sq * 0.5 * (1.0 - c);
    case ProtocolKind::AdiabaticFlip: return mu * p.G * p.Bmod * s / std::sqrt(p.B1 * p.B1 + p.Bmod * p.Bmod * s * s);
    }
    return 0.0;
}

} // namespace mc_detail

inline Trajectory simulate(const SimConfig& cfg, const TrapSpec& trap, const PhysicalConstants& k = {}) {
    validate(cfg, trap);
    const double dt = cfg.dt > 0.0 ? cfg.dt : default_timestep(trap);
    const double m = trap.mass;
    const double w = trap.omega_EB;
    const double gamma = w / cfg.Q_EB;
    const double z0 = trap.equilibrium_z0;
    const double kT = k.boltzmann_kB * cfg.temperature;
    const double c1 = std::exp(-gamma * dt);
    const double c2 = std::sqrt(-std::expm1(-2.0 * gamma * dt)) * std::sqrt(kT / m);
    const double lambda_half = kPi / trap.wavevector_k;

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::exponential_distribution<double> flip_wait(1.0 / cfg.T1);

    const auto steps = static_cast<std::uint64_t>(std::llround(cfg.duration / dt));
    const auto window = static_cast<std::uint64_t>(std::max<long long>(1, std::llround(1.0 / (cfg.bandwidth_b * dt))));

    double x = cfg.z_init, v = cfg.v_init;
    if (cfg.thermalize && kT > 0.0) {
        x += normal(rng) * std::sqrt(kT / (m * w * w));
        v += normal(rng) * std::sqrt(kT / m);
    }
    int spin = 1;
    double next_flip = std::isfinite(cfg.T1) ? flip_wait(rng) : std::numeric_limits<double>::infinity();

    const bool driven = cfg.protocol.has_value();
    const ProtocolSpec proto = driven ? *cfg.protocol : ProtocolSpec{};
    const double mu = k.spin_moment();
    double w1_ratio = 0.0;
    if (driven && proto.kind == ProtocolKind::Rabi) {
        const double w1 = larmor(proto.B1, k);
        const double Om = std::hypot(proto.detuning_Delta, w1);
        w1_ratio = (w1 / Om) * (w1 / Om);
    }
    mc_detail::Phasor drive(proto.phase, proto.omega_EB * dt);
    mc_detail::Phasor ref(0.0, w * dt);               // at t_n
    mc_detail::Phasor ref_mid(0.5 * w * dt, w * dt);  // at t_n + dt/2

    // Verlet rings at acos(1 - (w dt)^2/2)/dt, not w; scaling the trap force by
    // sinc^2(w dt/2) puts the discrete harmonic frequency back on w exactly.
    const double half_phase = 0.5 * w * dt;
    const double force_scale = (std::sin(half_phase) / half_phase) * (std::sin(half_phase) / half_phase);
    auto conservative = [&](double xx) { return -force_scale * potential_gradient(z0 + xx, trap); };
    auto protocol_now = [&]() { return driven ? spin * mc_detail::drive_force(proto, drive.c, drive.s, mu, w1_ratio) : 0.0; };

    Trajectory tr;
    tr.dt = dt;
    tr.omega_ref = w;
    tr.steps = steps;
    const std::size_t n_rec = steps / cfg.record_decimation + 1;
    tr.times.reserve(n_rec);
    tr.positions.reserve(n_rec);
    tr.velocities.reserve(n_rec);
    tr.spin_signs.reserve(n_rec);

    double fc = conservative(x);
    double fp = protocol_now();
    double sIx = 0, sQx = 0, sIf = 0, sQf = 0, sz2 = 0;
    double sum_v2 = 0;
    std::uint64_t in_window = 0;
    int win_spin = spin;
    double t = 0.0;

    const double inv_m = 1.0 / m;
    const double inv_dt = 1.0 / dt;
    const double half_dt = 0.5 * dt;
    int until_record = 0;
    for (std::uint64_t n = 0; n < steps; ++n) {
        if (until_record-- == 0) {
            until_record = cfg.record_decimation - 1;
            tr.times.push_back(t);
            tr.positions.push_back(x);
            tr.velocities.push_back(v);
            tr.spin_signs.push_back(spin);
        }
        if (in_window == 0) win_spin = spin;
        sIx += x * ref.c;
        sQx += x * ref.s;
        sz2 += x * x;

        // B A O A B
        const double v_prev = v;
        const double vB = v + half_dt * (fc + fp) * inv_m;
        x += half_dt * vB;
        const double noise = c2 * normal(rng);
        const double vO = c1 * vB + noise;
        x += half_dt * vO;

        t = static_cast<double>(n + 1) * dt;
        drive.advance();
        while (t >= next_flip) {
            spin = -spin;
            ++tr.flip_count;
            next_flip += flip_wait(rng);
        }
        const double fc_new = conservative(x);
        const double fp_new = protocol_now();
        v = vO + half_dt * (fc_new + fp_new) * inv_m;

        // non-conservative impulse of the step: m (v_{n+1} - v_n) minus the
        // conservative kicks and the deterministic part of the OU damping
        const double f = (m * (v - v_prev) - m * (c1 - 1.0) * vB) * inv_dt - 0.5 * (fc + fc_new);
        sIf += f * ref_mid.c;
        sQf += f * ref_mid.s;

        fc = fc_new;
        fp = fp_new;
        ref.advance();
        ref_mid.advance();

        if (!std::isfinite(x) || !std::isfinite(v) || std::abs(x) > lambda_half)
            throw NumericalError("sim: bubble left the trap well or the integrator diverged at t = " + std::to_string(t) +
                                 " s (x = " + mc_detail::fmt_g(x) + " m)");
        tr.max_speed = std::max(tr.max_speed, std::abs(v));
        sum_v2 += v * v;

        if (++in_window == window) {
            const double norm = 2.0 / static_cast<double>(window);
            tr.lockin_I.push_back(norm * sIx);
            tr.lockin_Q.push_back(norm * sQx);
            tr.force_I.push_back(norm * sIf);
            tr.force_Q.push_back(norm * sQf);
            tr.window_spin.push_back(win_spin);
            tr.window_z2.push_back(sz2 / static_cast<double>(window));
            sIx = sQx = sIf = sQf = sz2 = 0.0;
            in_window = 0;
        }
    }

    if (!tr.window_z2.empty()) {
        double s = 0, s2 = 0;
        for (double z2 : tr.window_z2) {
            s += z2;
            s2 += z2 * z2;
        }
        const double nw = static_cast<double>(tr.window_z2.size());
        tr.z2_mean = s / nw;
        tr.z2_stderr = nw > 1 ? std::sqrt(std::max(0.0, (s2 / nw - tr.z2_mean * tr.z2_mean) / (nw - 1.0))) : 0.0;
    }
    tr.v2_mean = steps ? sum_v2 / static_cast<double>(steps) : 0.0;
    return tr;
}

struct LockinResult {
    double snr{};
    double mean_I{};  ///< [N]
    double std_I{};   ///< [N]
    double snr_stderr{};
    std::size_t windows{};
};

/// Force-channel lock-in SNR = mean(I) / (sqrt2 std(I)) across windows, with
/// white detector noise of std cfg.detector_force_std added per window.
inline LockinResult lockin_snr(const Trajectory& tr, const SimConfig& cfg) {
    const std::size_t n = tr.force_I.size();
    if (n < 4) throw NumericalError("lockin_snr: need >= 4 windows, have " + std::to_string(n));
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> I(n);
    for (std::size_t i = 0; i < n; ++i) I[i] = tr.force_I[i] + cfg.detector_force_std * normal(rng);
    double s = 0;
    for (double v : I) s += v;
    const double mean = s / static_cast<double>(n);
    double ss = 0;
    for (double v : I) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    LockinResult r;
    r.windows = n;
    r.mean_I = mean;
    r.std_I = sd;
    r.snr = mean / (std::sqrt(2.0) * sd);
    // delta method: var(mean)/sd^2/n and var(sd) ~ sd^2/(2n)
    r.snr_stderr = std::sqrt(1.0 / static_cast<double>(n) + r.snr * r.snr / (2.0 * static_cast<double>(n))) / std::sqrt(2.0);
    return r;
}

inline SimConfig sim_config_from_json(const nlohmann::json& j, const TrapSpec& trap) {
    SimConfig c;
    try {
        c.dt = j.value("dt", 0.0);
        c.duration = j.value("duration", c.duration);
        c.seed = j.value("seed", std::uint64_t{1});
        if (j.contains("temperature_mK"))
            c.temperature = j.at("temperature_mK").get<double>() * 1e-3;
        else
            c.temperature = j.value("temperature", c.temperature);
        if (j.contains("Q_EB") && j.at("Q_EB").is_number()) c.Q_EB = j.at("Q_EB").get<double>();
        c.record_decimation = j.value("record_decimation", c.record_decimation);
        c.bandwidth_b = j.value("bandwidth_b", c.bandwidth_b);
        c.z_init = j.contains("z_init_nm") ? j.at("z_init_nm").get<double>() * 1e-9 : j.value("z_init", 0.0);
        c.v_init = j.value("v_init", 0.0);
        c.thermalize = j.value("thermalize", true);
        if (j.contains("T1") && !j.at("T1").is_null()) c.T1 = j.at("T1").get<double>();
        if (j.contains("protocol") && !j.at("protocol").is_null()) {
            const auto& pj = j.at("protocol");
            ProtocolSpec p;
            p.kind = protocol_kind_from_string(pj.value("kind", std::string("gradient-mod")));
            p.G = pj.value("G", p.G);
            p.B0_or_mean = pj.value("B0", p.B0_or_mean);
            p.B1 = pj.contains("B1_mT") ? pj.at("B1_mT").get<double>() * 1e-3 : pj.value("B1", p.B1);
            p.Bmod = pj.contains("Bmod_mT") ? pj.at("Bmod_mT").get<double>() * 1e-3 : pj.value("Bmod", p.Bmod);
            p.spin_sign = pj.value("spin_sign", 1);
            p.phase = pj.value("phase", 0.0);
            p.omega_EB = trap.omega_EB;
            if (p.kind == ProtocolKind::Rabi) p = tune_rabi(p);
            c.protocol = p;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("sim config: ") + e.what());
    }
    return c;
}

} // namespace heliox

#pragma once
// heliox/figures.hpp - CSV data behind each figure
//
// Every table carries its own provenance in '#' lines: tool version, figure
// name, the full parameter record and (where used) the damping model, so the
// header alone is enough to regenerate the file.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heliox/calibration.hpp"
#include "heliox/csv.hpp"
#include "heliox/device.hpp"
#include "heliox/errors.hpp"
#include "heliox/noise.hpp"
#include "heliox/numerics.hpp"
#include "heliox/parallel.hpp"
#include "heliox/spin.hpp"
#include "heliox/transport.hpp"

#ifndef HELIOX_VERSION
#define HELIOX_VERSION "0.3.0"
#endif

namespace heliox {

inline constexpr const char* kVersion = HELIOX_VERSION;

struct FigureOptions {
    std::vector<double> G_list{10.0, 100.0, 1000.0};        ///< fig3 required-Q curves [T/m]
    std::vector<double> x3_list{1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6}; ///< fig3 model curves
    std::vector<double> error_rates{1e-3, 1e-2, 1e-1};      ///< fig4c contour levels [1/s]
};

inline const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names{"fig2",  "fig3",  "fig4a", "fig4b",   "fig4c",
                                                "fig4d", "fig5a", "fig5b", "si-fig2", "si-fig4"};
    return names;
}

inline bool figure_needs_damping(const std::string& name) {
    return name == "fig3" || name == "fig4a" || name == "fig4b" || name == "fig5a" || name == "fig5b" ||
           name == "si-fig2";
}

namespace fig_detail {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline CsvTable start(const std::string& name, const std::string& what, const Device& d,
                      const DampingModel* model) {
    CsvTable t;
    t.header_lines.push_back(std::string("heliox ") + kVersion);
    t.header_lines.push_back("figure " + name + ": " + what);
    t.header_lines.push_back("params " + to_json(d.params).dump());
    if (model) t.header_lines.push_back("damping_model " + to_json(*model).dump());
    return t;
}

// x3 in ppm as a column tag: 1e-6 -> "1em6", 1 -> "1"
inline std::string ppm_tag(double x3) {
    const int e = static_cast<int>(std::lround(std::log10(x3 * 1e6)));
    if (e == 0) return "1";
    return e < 0 ? "1em" + std::to_string(-e) : "1e" + std::to_string(e);
}

inline std::string g_tag(double G) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", G);
    return buf;
}

inline OperatingPoint point(const Device& d) { return operating_point_from(d.params); }

} // namespace fig_detail

/// U(z), mode intensities and g0(z) over two acoustic wavelengths centred on z0.
inline CsvTable figure_fig2(const Device& d) {
    auto t = fig_detail::start("fig2", "trap potential, optical intensities and coupling rates vs z", d, nullptr);
    t.header_lines.push_back("g0 uses V = pi w^2 L (full cylinder); half-cylinder would double g0");
    const int n_tr = d.params.n_opt_trap, n_pr = d.params.n_opt_probe;
    const std::string s_tr = std::to_string(n_tr), s_pr = std::to_string(n_pr);
    t.columns = {"z_m", "U_J", "U_over_kB_mK", "I_mode" + s_tr, "I_mode" + s_pr, "g0_mode" + s_tr + "_Hz",
                 "g0_mode" + s_pr + "_Hz"};
    const double lam = kTwoPi / d.trap.wavevector_k;
    const double z0 = d.trap.equilibrium_z0;
    const std::size_t n = 401; // odd, so z0 is a grid point
    for (std::size_t i = 0; i < n; ++i) {
        const double z = z0 + lam * (2.0 * static_cast<double>(i) / static_cast<double>(n - 1) - 1.0);
        const double U = potential(z, d.trap);
        const auto c_tr = coupling_rate(z, d.trap_mode, d.bubble, d.trap, d.params.medium, d.constants);
        const auto c_pr = coupling_rate(z, d.probe_mode, d.bubble, d.trap, d.params.medium, d.constants);
        t.add_row({z, U, U / d.constants.boltzmann_kB * 1e3, mode_intensity(z, d.trap_mode),
                   mode_intensity(z, d.probe_mode), c_tr.g0 / kTwoPi, c_pr.g0 / kTwoPi});
    }
    return t;
}

/// Required Q for SNR = 1 per G, and the model Q(T) per x3.
inline CsvTable figure_fig3(const Device& d, const DampingModel& m, const FigureOptions& o = {}) {
    auto t = fig_detail::start("fig3", "Q_EB required for SNR = 1 and model Q_EB(T)", d, &m);
    t.header_lines.push_back("calibration-constrained: the model passes through the SNR anchors by construction");
    t.header_lines.push_back("nan marks SNR = 1 unattainable for Q <= 1e12");
    t.columns = {"T_mK"};
    for (double G : o.G_list) t.columns.push_back("Q_required_G" + fig_detail::g_tag(G));
    for (double x3 : o.x3_list) t.columns.push_back("Q_model_x3_" + fig_detail::ppm_tag(x3));

    const auto T_grid = numerics::linspace(0.010, 0.100, 91);
    std::vector<std::vector<double>> rows(T_grid.size());
    parallel_for(T_grid.size(), [&](std::size_t i) {
        auto op = fig_detail::point(d);
        op.T = T_grid[i];
        auto& row = rows[i];
        row.push_back(op.T * 1e3);
        for (double G : o.G_list) {
            op.G = G;
            try {
                row.push_back(required_q(d, op, 1.0));
            } catch (const NumericalError&) {
                row.push_back(fig_detail::kNaN);
            }
        }
        for (double x3 : o.x3_list) row.push_back(q_factor(op.T, x3, m, d.omega_EB()));
    });
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

/// Gradient-modulation response amplitude vs G at the parameter-record operating point.
inline CsvTable figure_fig4a(const Device& d, const DampingModel& m) {
    auto t = fig_detail::start("fig4a", "resonant displacement z_EB vs gradient G (gradient modulation)", d, &m);
    const auto op = fig_detail::point(d);
    const double Q = resolve_q(d, op, m);
    t.header_lines.push_back("Q_EB " + format_double(Q));
    t.columns = {"G_T_per_m", "F_fundamental_N", "z_EB_m", "exceeds_100nm"};
    for (double G : numerics::logspace(1.0, 1e4, 81)) {
        const double F = d.constants.spin_moment() * G;
        const auto r = displacement_response(F, Q, d.omega_EB(), d.mass());
        t.add_row({G, F, r.amplitude, r.exceeds_limit ? 1.0 : 0.0});
    }
    return t;
}

/// Rabi protocol: detuning that keeps the Rabi frequency at w_EB, and the response, vs B1.
inline CsvTable figure_fig4b(const Device& d, const DampingModel& m) {
    auto t = fig_detail::start("fig4b", "Rabi detuning Delta(B1) and displacement z_EB(B1)", d, &m);
    const auto op = fig_detail::point(d);
    const double Q = resolve_q(d, op, m);
    const double b1max = rabi_b1_max(d.omega_EB(), d.constants);
    t.header_lines.push_back("Q_EB " + format_double(Q) + ", B1_max_T " + format_double(b1max));
    t.columns = {"B1_T", "Delta_over_2pi_Hz", "contrast", "F_fundamental_N", "z_EB_m", "exceeds_100nm"};
    for (double B1 : numerics::linspace(0.0, b1max, 101)) {
        ProtocolSpec s;
        s.kind = ProtocolKind::Rabi;
        s.G = op.G;
        s.B1 = B1;
        s.omega_EB = d.omega_EB();
        s = tune_rabi(s, d.constants);
        const double w1 = larmor(B1, d.constants);
        const double contrast = (w1 / d.omega_EB()) * (w1 / d.omega_EB());
        const double F = B1 > 0.0 ? rabi_force(s, d.constants).fundamental_amplitude : 0.0;
        const auto r = displacement_response(F, Q, d.omega_EB(), d.mass());
        t.add_row({B1, s.detuning_Delta / kTwoPi, contrast, F, r.amplitude, r.exceeds_limit ? 1.0 : 0.0});
    }
    return t;
}

/// Constant diabatic-error-rate contours in the (B1, Bmod) plane, long format.
inline CsvTable figure_fig4c(const Device& d, const FigureOptions& o = {}) {
    auto t = fig_detail::start("fig4c", "contours of constant Landau-Zener error rate", d, nullptr);
    const double B1p = d.params.B1, Bmp = d.params.Bmod;
    t.header_lines.push_back("operating point B1 " + format_double(B1p) + " T, Bmod " + format_double(Bmp) +
                             " T, rate " + format_double(diabatic_error_rate(B1p, Bmp, d.omega_EB(), d.constants)) +
                             " 1/s");
    t.columns = {"level_index", "rate_per_s", "B1_T", "Bmod_T"};
    const auto B1_grid = numerics::linspace(0.2e-3, 3e-3, 57);
    for (std::size_t li = 0; li < o.error_rates.size(); ++li)
        for (double B1 : B1_grid)
            t.add_row({static_cast<double>(li), o.error_rates[li], B1,
                       error_rate_contour_bmod(o.error_rates[li], B1, d.omega_EB(), d.constants)});
    return t;
}

/// Adiabatic-flip timing over two modulation periods.
inline CsvTable figure_fig4d(const Device& d) {
    auto t = fig_detail::start("fig4d", "adiabatic flip timing: bias field, moment and force vs t", d, nullptr);
    t.columns = {"t_s", "B0_T", "mu_s_J_per_T", "F_N"};
    ProtocolSpec s;
    s.kind = ProtocolKind::AdiabaticFlip;
    s.G = d.params.gradient_G;
    s.B0_or_mean = d.params.B0;
    s.B1 = d.params.B1;
    s.Bmod = d.params.Bmod;
    s.omega_EB = d.omega_EB();
    const double period = kTwoPi / d.omega_EB();
    for (double tt : numerics::linspace(0.0, 2.0 * period, 401)) {
        const double mu = adiabatic_magnetization(tt, s, d.constants);
        t.add_row({tt, s.B0_or_mean + s.Bmod * std::sin(d.omega_EB() * tt), mu, mu * s.G});
    }
    return t;
}

namespace fig_detail {

inline std::vector<double> budget_row(const NoiseBudget& nb) {
    return {nb.F_th, nb.F_shot, nb.F_rpsn_equiv, nb.F_th + nb.F_shot + nb.F_rpsn_equiv, nb.snr};
}

} // namespace fig_detail

/// Noise forces vs finesse at P = 100 uW.
inline CsvTable figure_fig5a(const Device& d, const DampingModel& m) {
    auto t = fig_detail::start("fig5a", "noise forces vs cavity finesse at P = 100 uW", d, &m);
    t.columns = {"finesse", "F_th_N", "F_shot_N", "F_rpsn_N", "F_sum_N", "snr"};
    auto op = fig_detail::point(d);
    op.P = 100e-6;
    for (double F : numerics::logspace(1e4, 1e5, 41)) {
        op.finesse = F;
        auto row = fig_detail::budget_row(snr(d, op, m));
        row.insert(row.begin(), F);
        t.add_row(std::move(row));
    }
    return t;
}

/// Noise forces vs probe power at the record finesse.
inline CsvTable figure_fig5b(const Device& d, const DampingModel& m) {
    auto t = fig_detail::start("fig5b", "noise forces vs probe power", d, &m);
    const auto op0 = fig_detail::point(d);
    try {
        t.header_lines.push_back("shot_thermal_crossing_P_W " +
                                 format_double(shot_thermal_crossing_power(d, op0, m, 1e-10, 1.0)));
    } catch (const NumericalError&) {
        t.header_lines.push_back("shot_thermal_crossing_P_W none in [1e-10, 1] W");
    }
    t.columns = {"P_W", "F_th_N", "F_shot_N", "F_rpsn_N", "F_sum_N", "snr"};
    auto op = op0;
    for (double P : numerics::logspace(1e-7, 1e-3, 41)) {
        op.P = P;
        auto row = fig_detail::budget_row(snr(d, op, m));
        row.insert(row.begin(), P);
        t.add_row(std::move(row));
    }
    return t;
}

/// Damping-rate decomposition vs T.
inline CsvTable figure_si_fig2(const Device& d, const DampingModel& m, const FigureOptions& o = {}) {
    auto t = fig_detail::start("si-fig2", "damping rate by channel vs T", d, &m);
    t.header_lines.push_back("absolute rates follow from the calibrated prefactors, not from first principles");
    t.columns = {"T_mK", "gamma_phonon_per_s"};
    for (double x3 : o.x3_list) t.columns.push_back("gamma_he3_x3_" + fig_detail::ppm_tag(x3) + "_per_s");
    for (double T : numerics::logspace(0.005, 0.2, 81)) {
        std::vector<double> row{T * 1e3, damping_rate(T, 0.0, m).phonon};
        for (double x3 : o.x3_list) row.push_back(damping_rate(T, x3, m).he3);
        t.add_row(std::move(row));
    }
    return t;
}

/// Normalized heterodyne photocurrent PSD around the signal frequency.
inline CsvTable figure_si_fig4(const Device& d) {
    SpectrumInputs in;
    in.T = 0.030;
    in.Q_EB = 6e5;
    in.P = 3e-6;
    in.finesse = 1e5;
    in.b = 1.0;
    in.Delta_l = d.params.probe_detuning_Delta_l;
    in.F_mag = d.constants.spin_moment() * d.params.gradient_G;
    HeterodyneOptions opt;
    opt.omega_lo = d.params.lo_offset_omega_lo;

    auto t = fig_detail::start("si-fig4", "heterodyne photocurrent PSD normalized to the magnetic peak", d, nullptr);
    t.header_lines.push_back("inputs T 0.03 K, Q_EB 6e5, P 3e-6 W, finesse 1e5, b 1 Hz, lo_power_ratio " +
                             format_double(opt.lo_power_ratio));
    const double gamma = d.omega_EB() / in.Q_EB;
    const auto offsets = numerics::linspace(-10.0 * gamma, 10.0 * gamma, 2001);
    const auto h = heterodyne_psd(d, in, offsets, opt);
    t.header_lines.push_back("signal_omega_rad_per_s " + format_double(h.signal_omega) +
                             (h.lo_assumption_violated ? ", LO assumption violated" : ""));
    t.columns = {"offset_rad_per_s", "omega_rad_per_s", "S_total", "S_rpsn", "S_thermal", "S_magnetic", "S_shot"};
    for (std::size_t i = 0; i < offsets.size(); ++i)
        t.add_row({h.offset[i], h.omega[i], h.total[i], h.rpsn[i], h.thermal[i], h.magnetic[i], h.shot[i]});
    return t;
}

/// Dispatch by name; UsageError for an unknown figure.
inline CsvTable make_figure(const std::string& name, const Device& d, const DampingModel& m,
                            const FigureOptions& o = {}) {
    if (name == "fig2") return figure_fig2(d);
    if (name == "fig3") return figure_fig3(d, m, o);
    if (name == "fig4a") return figure_fig4a(d, m);
    if (name == "fig4b") return figure_fig4b(d, m);
    if (name == "fig4c") return figure_fig4c(d, o);
    if (name == "fig4d") return figure_fig4d(d);
    if (name == "fig5a") return figure_fig5a(d, m);
    if (name == "fig5b") return figure_fig5b(d, m);
    if (name == "si-fig2") return figure_si_fig2(d, m, o);
    if (name == "si-fig4") return figure_si_fig4(d);
    std::string known;
    for (const auto& n : figure_names()) known += (known.empty() ? "" : ", ") + n;
    throw UsageError("unknown figure '" + name + "' (known: " + known + ")");
}

} // namespace heliox

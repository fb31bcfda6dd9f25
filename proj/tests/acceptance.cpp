// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "heliox/heliox.hpp"

using namespace heliox;

namespace {

int failures = 0;

bool rel_ok(double v, double target, double tol) { return std::abs(v / target - 1.0) <= tol; }
bool abs_ok(double v, double target, double tol) { return std::abs(v - target) <= tol; }

struct Line {
    int id;
    std::string title;
    std::vector<std::string> details;
    bool pass{true};

    Line(int i, std::string t) : id(i), title(std::move(t)) {}

    void check(bool ok, const char* fmt, auto... args) {
        char buf[256];
        if constexpr (sizeof...(args) == 0)
            std::snprintf(buf, sizeof buf, "%s", fmt);
        else
            std::snprintf(buf, sizeof buf, fmt, args...);
        details.push_back(std::string(ok ? "  ok   " : "  FAIL ") + buf);
        pass = pass && ok;
    }
    void note(const std::string& s) { details.push_back("       " + s); }

    ~Line() {
        std::printf("%s  %2d  %s\n", pass ? "PASS" : "FAIL", id, title.c_str());
        for (const auto& d : details) std::printf("%s\n", d.c_str());
        if (!pass) ++failures;
    }
};

std::string render(const CsvTable& t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

// integral of f over w0 + hw tan(theta), divided by 2 pi
template <typename F>
double lorentz_integral(F&& f, double w0, double hw, double cut = 1e-9) {
    auto g = [&](double th) {
        const double c = std::cos(th);
        return f(w0 + hw * std::tan(th)) * hw / (c * c);
    };
    const double edge = 0.5 * kPi * (1.0 - cut);
    return numerics::simpson(g, -edge, edge, 20000) / kTwoPi;
}

} // namespace

int run() {
    const auto t_start = std::chrono::steady_clock::now();
    const DeviceParams p = paper_default_params();
    const Device d = make_device(p);
    const PhysicalConstants& k = d.constants;
    const double w = d.omega_EB();

    {
        Line l{1, "equilibrium radius"};
        l.check(rel_ok(d.bubble.radius_R, 1.9e-9, 0.02), "R0 = %.4f nm (1.9 nm +- 2%%)", d.bubble.radius_R * 1e9);
    }
    {
        Line l{2, "bubble Young's modulus"};
        l.check(rel_ok(d.bubble.youngs_modulus_E_EB, 530e3, 0.02), "E_EB = %.2f kPa (530 kPa +- 2%%)",
                d.bubble.youngs_modulus_E_EB * 1e-3);
    }
    {
        Line l{3, "acoustic contrast factors"};
        l.check(abs_ok(d.trap.contrast_f1, -14.0, 1.0), "f1 = %.3f (-14 +- 1)", d.trap.contrast_f1);
        l.check(d.trap.contrast_f2 == -2.0, "f2 = %.17g (-2 exactly)", d.trap.contrast_f2);
        l.check(abs_ok(d.trap.contrast_Phi, -17.0, 1.0), "Phi = %.3f (-17 +- 1)", d.trap.contrast_Phi);
    }
    {
        Line l{4, "trap energy density and frequency"};
        l.check(rel_ok(d.trap.energy_density_Wac, 8.5, 0.03), "Wac = %.4f J/m^3 at U0 = 300 mK (8.5 +- 3%%)",
                d.trap.energy_density_Wac);
        l.check(rel_ok(w / kTwoPi, 2.9e6, 0.03), "f_EB = %.4f MHz (2.9 MHz +- 3%%)", w / kTwoPi * 1e-6);
    }
    {
        Line l{5, "actuator amplitudes"};
        const auto a = required_drive_amplitude(d.trap, p);
        l.check(rel_ok(a.bare, 240e-12, 0.05), "bare = %.2f pm (240 pm +- 5%%)", a.bare * 1e12);
        l.check(rel_ok(a.resonant, 2.4e-15, 0.05), "resonant = %.3f fm at Q_ac = %.0e (2.4 fm +- 5%%)",
                a.resonant * 1e15, p.Q_ac);
    }
    {
        Line l{6, "acoustic store and readout depth"};
        const auto st = stored_energy_and_phonons(d.trap, p, k);
        const double depth = readout_modulation_depth(d.trap, p, k);
        l.check(rel_ok(st.phonons, 1.6e11, 0.10), "n_ac = %.4e (1.6e11 +- 10%%)", st.phonons);
        l.check(rel_ok(st.density_modulation, 2e-3, 0.05), "drho/rho = %.4e (2e-3 +- 5%%)", st.density_modulation);
        l.check(rel_ok(depth, 190.0, 0.05), "depth = %.2f kappa (190 +- 5%%)", depth);
    }
    {
        Line l{7, "thermal occupation at 30 mK"};
        const double n = bose_occupation(w, 0.030, k);
        l.check(rel_ok(n, 215.0, 0.02), "n_th = %.2f (215 +- 2%%)", n);
    }
    {
        Line l{8, "probe single-photon coupling"};
        const double g = std::abs(d.probe_coupling.g0) / kTwoPi;
        l.check(g >= 0.05 && g <= 0.2, "|g0|/2pi = %.4f Hz (0.1 Hz within x2)", g);
        l.note("convention: V_opt = pi w^2 L (full cylinder), z_zpf = sqrt(hbar / 2 m w)");
        l.note("a half-cylinder or Gaussian-standing-wave volume scales g0 by 2");
    }
    {
        Line l{9, "Landau-Zener at B1 = 1.5 mT, Bmod = 1.6 mT"};
        const double e = lz_exponent(1.5e-3, 1.6e-3, w, k);
        const double r = diabatic_error_rate(1.5e-3, 1.6e-3, w, k);
        l.check(abs_ok(e, -21.3, 0.5), "exponent = %.3f (-21.3 +- 0.5)", e);
        l.check(r < 0.01, "diabatic error rate = %.3e 1/s (< 0.01)", r);
    }
    {
        Line l{10, "Rabi bound"};
        const double b = rabi_b1_max(w, k);
        l.check(rel_ok(b, 0.103e-3, 0.02), "B1_max = %.5f mT (0.103 mT +- 2%%)", b * 1e3);
        l.check(rabi_tuning(b, w, k) == 0.0, "detuning at B1_max = %g", rabi_tuning(b, w, k));
        bool threw = false;
        try {
            rabi_tuning(b * 1.01, w, k);
        } catch (const DomainError&) {
            threw = true;
        }
        l.check(threw, "B1 = 1.01 B1_max raises a domain error");
    }
    const DampingModel model = default_damping_model(d);
    {
        Line l{11, "calibrated SNR pipeline"};
        OperatingPoint op = operating_point_from(p);
        op.G = 100.0;
        op.x3 = 1e-12;
        op.T = 0.030;
        op.P = 1e-6;
        op.finesse = 1e5;
        const auto nb = snr(d, op, model);
        l.check(rel_ok(nb.snr, 16.0, 0.20), "SNR = %.3f at Q_EB = %.3e (16 +- 20%%)", nb.snr, nb.Q_EB);
        op.x3 = 1e-8;
        const double Tc = required_q_crossing(d, op, model, 0.010, 0.100);
        l.check(abs_ok(Tc, 0.055, 0.005), "required-Q crossing at x3 = 1e-2 ppm: %.2f mK (55 +- 5)", Tc * 1e3);
        l.note("calibration-constrained: the damping prefactors are fitted to these two anchors");
    }
    {
        Line l{12, "property suite"};
        // modulus and spring constant against central differences
        double worst_E = 0;
        for (double f : {0.8, 1.0, 1.5}) {
            const double V = d.bubble.volume_V * f, h = 1e-5 * V;
            const double fd = -V * (pressure_of_volume(V + h, p.medium, k) - pressure_of_volume(V - h, p.medium, k)) /
                              (2 * h);
            worst_E = std::max(worst_E, std::abs(youngs_modulus(V, p.medium, k) / fd - 1.0));
        }
        l.check(worst_E <= 1e-6, "E_EB vs finite difference: %.2e rel (<= 1e-6)", worst_E);
        const auto& t = d.trap;
        auto d2 = [&](double h) {
            return (potential(t.equilibrium_z0 + h, t) - 2 * potential(t.equilibrium_z0, t) +
                    potential(t.equilibrium_z0 - h, t)) /
                   (h * h);
        };
        const double h = 1e-3 / t.wavevector_k;
        const double rich = (4.0 * d2(h / 2) - d2(h)) / 3.0;
        const double err_k = std::abs(t.spring_kEB / rich - 1.0);
        l.check(err_k <= 1e-6, "k_EB vs finite difference: %.2e rel (<= 1e-6)", err_k);

        // displacement spectrum area against kB T / (m w^2)
        SpectrumInputs in;
        in.backaction = false;
        in.Q_EB = 1e4;
        const SpectrumModel sm(d, in);
        const double hw = 0.5 * sm.gamma();
        const double area = lorentz_integral([&](double x) { return sm.S_xx(x, kThermal); }, w, hw) +
                            lorentz_integral([&](double x) { return sm.S_xx(x, kThermal); }, -w, hw);
        const double classical = k.boltzmann_kB * in.T / (d.mass() * w * w);
        l.check(rel_ok(area, classical, 0.01), "int S_xx / (kB T / m w^2) = %.5f (1 +- 1%%)", area / classical);

        // sideband asymmetry from mirrored quadrature nodes
        const double up = lorentz_integral([&](double x) { return sm.S_bbd(x, kThermal); }, w, hw);
        const double dn = lorentz_integral([&](double x) { return sm.S_bdb(-x, kThermal); }, w, hw);
        const double asym = std::abs((dn / up) / (sm.n_th() / (sm.n_th() + 1.0)) - 1.0);
        l.check(asym <= 1e-9, "sideband ratio vs n_th/(n_th+1): %.2e rel (<= 1e-9)", asym);

        // Monte-Carlo equipartition; at 30 mK and Q = 50 the bubble hops wells on this time scale
        const double period = kTwoPi / w;
        SimConfig eq;
        eq.temperature = 0.001;
        eq.Q_EB = 50;
        eq.duration = 200000 * period;
        eq.dt = period / 50;
        eq.bandwidth_b = 1.0 / (400 * period);
        eq.record_decimation = 1 << 20;
        eq.seed = 11;
        const auto te = simulate(eq, t, k);
        const double harmonic = k.boltzmann_kB * eq.temperature / (d.mass() * w * w);
        const double sig = std::abs(te.z2_mean - harmonic) / te.z2_stderr;
        l.check(sig <= 3.0, "MC <x^2> / (kB T / m w^2) = %.4f, %.2f sigma (<= 3)", te.z2_mean / harmonic, sig);

        // Monte-Carlo lock-in SNR against the analytic budget at the operating point
        OperatingPoint op = operating_point_from(p);
        op.b = 1e3;
        const auto nb = snr(d, op, model);
        SimConfig mc;
        mc.temperature = op.T;
        mc.Q_EB = nb.Q_EB;
        mc.bandwidth_b = op.b;
        mc.dt = period / 50;
        mc.duration = 1.5;
        mc.record_decimation = 1 << 30;
        mc.detector_force_std = nb.F_shot + nb.F_rpsn_equiv;
        mc.seed = 2024;
        ProtocolSpec ps;
        ps.G = op.G;
        ps.omega_EB = w;
        mc.protocol = ps;
        const auto tm = simulate(mc, t, k);
        const auto r = lockin_snr(tm, mc);
        const double ratio = r.snr / nb.snr;
        l.check(ratio >= 0.7 && ratio <= 1.3, "MC / analytic SNR = %.3f / %.3f = %.3f (in [0.7, 1.3])", r.snr, nb.snr,
                ratio);
        l.note("the simulation adds noise in quadrature; the budget sums amplitudes, so ~1.2 is expected");

        // replay
        SimConfig rp = eq;
        rp.duration = 2000 * period;
        rp.record_decimation = 1;
        rp.protocol = ps;
        const auto a = simulate(rp, t, k), b = simulate(rp, t, k);
        const bool same = a.positions.size() == b.positions.size() &&
                          std::memcmp(a.positions.data(), b.positions.data(), a.positions.size() * sizeof(double)) == 0 &&
                          std::memcmp(a.velocities.data(), b.velocities.data(), a.velocities.size() * sizeof(double)) == 0 &&
                          a.force_I == b.force_I;
        l.check(same, "same seed replays bit-exactly (%zu samples)", a.positions.size());
    }
    {
        Line l{13, "figure emitters"};
        for (const auto& name : figure_names()) {
            const auto first = render(make_figure(name, d, model));
            const auto second = render(make_figure(name, d, model));
            const auto table = make_figure(name, d, model);
            const bool ok = first == second && first.rfind("# heliox ", 0) == 0 &&
                            first.find("# params {") != std::string::npos && first.find(",nan") == std::string::npos &&
                            first.find(",inf") == std::string::npos &&
                            first.find(",-inf") == std::string::npos && !table.rows.empty();
            l.check(ok, "%-8s %4zu rows x %zu columns, %zu bytes", name.c_str(), table.rows.size(),
                    table.columns.size(), first.size());
        }
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    std::printf("%s: %d failing criteria, %.1f s\n", failures ? "FAIL" : "PASS", failures, secs);
    return failures ? 1 : 0;
}

int main() {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    try {
        return run();
    } catch (const std::exception& e) {
        std::printf("FAIL  aborted: %s\n", e.what());
        return 1;
    }
}

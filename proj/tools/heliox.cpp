// heliox command-line front end.
//
//   heliox params [--preset paper-default] [--config FILE] [--set k=v]... [--dump]
//   heliox figure NAME -o FILE
//   heliox sweep -s SPEC -o FILE
//   heliox calibrate [-a ANCHORS] -o MODEL
//   heliox mc -c CFG -o DIR
//
// Exit codes: 0 ok, 2 usage, 3 validation/config/calibration, 4 numerical.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heliox/heliox.hpp"

namespace fs = std::filesystem;
using namespace heliox;

namespace {

struct Common {
    std::string preset;
    std::string config;
    std::string model;
    std::vector<std::string> sets;
};

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

std::ofstream open_out(const std::string& path) {
    if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    return out;
}

DeviceParams load(const Common& c) {
    if (!c.preset.empty() && !c.config.empty()) throw UsageError("--preset and --config are exclusive");
    nlohmann::json doc = c.config.empty() ? nlohmann::json{{"preset", c.preset.empty() ? "paper-default" : c.preset}}
                                          : read_json(c.config);
    std::vector<std::string> warnings;
    DeviceParams p = load_params(doc, &warnings);
    for (const auto& kv : c.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
        double v{};
        try {
            std::size_t used = 0;
            v = std::stod(kv.substr(eq + 1), &used);
            if (used != kv.size() - eq - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw UsageError("--set value is not a number: '" + kv + "'");
        }
        set_parameter(p, kv.substr(0, eq), v);
    }
    warnings = validate(p);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return p;
}

DampingModel load_model(const Common& c, const Device& d) {
    if (!c.model.empty()) return damping_model_from_json(read_json(c.model));
    return default_damping_model(d);
}

void add_common(CLI::App* app, Common& c, bool with_model) {
    app->add_option("--preset", c.preset, "parameter preset (paper-default)");
    app->add_option("--config", c.config, "parameter document (JSON)");
    app->add_option("--set", c.sets, "override one parameter, key=value (suffix units allowed)");
    if (with_model) app->add_option("--model", c.model, "damping model JSON from 'calibrate' (default: built-in anchors)");
}

int cmd_params(const Common& c, bool dump) {
    const auto p = load(c);
    if (dump) {
        std::cout << to_json(p).dump(2) << '\n';
        return 0;
    }
    const Device d = make_device(p);
    const auto amp = required_drive_amplitude(d.trap, p);
    const auto st = stored_energy_and_phonons(d.trap, p, d.constants);
    nlohmann::json j = {
        {"R0_m", d.bubble.radius_R},
        {"E_EB_Pa", d.bubble.youngs_modulus_E_EB},
        {"f1", d.trap.contrast_f1},
        {"f2", d.trap.contrast_f2},
        {"Phi", d.trap.contrast_Phi},
        {"Wac_J_per_m3", d.trap.energy_density_Wac},
        {"f_EB_Hz", d.omega_EB() / kTwoPi},
        {"z0_m", d.trap.equilibrium_z0},
        {"z_amp_bare_m", amp.bare},
        {"z_amp_resonant_m", amp.resonant},
        {"n_ac", st.phonons},
        {"density_modulation", st.density_modulation},
        {"modulation_depth_kappa", readout_modulation_depth(d.trap, p, d.constants)},
        {"n_th", bose_occupation(d.omega_EB(), p.medium.temperature_T, d.constants)},
        {"g0_probe_Hz", d.probe_coupling.g0 / kTwoPi},
        {"g0_convention", "V = pi w^2 L"},
        {"z_zpf_m", d.probe_coupling.z_zpf},
        {"B1_max_T", rabi_b1_max(d.omega_EB(), d.constants)},
        {"lz_exponent", lz_exponent(p.B1, p.Bmod, d.omega_EB(), d.constants)},
        {"diabatic_error_rate_per_s", diabatic_error_rate(p.B1, p.Bmod, d.omega_EB(), d.constants)},
    };
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_figure(const Common& c, const std::string& name, const std::string& out, const FigureOptions& opt) {
    if (std::find(figure_names().begin(), figure_names().end(), name) == figure_names().end()) {
        std::string known;
        for (const auto& n : figure_names()) known += " " + n;
        throw UsageError("unknown figure '" + name + "'; known:" + known);
    }
    const Device d = make_device(load(c));
    const DampingModel m = figure_needs_damping(name) ? load_model(c, d) : DampingModel{};
    const auto table = make_figure(name, d, m, opt);
    auto os = open_out(out);
    write_csv(os, table);
    return 0;
}

int cmd_sweep(const Common& c, const std::string& spec_path, const std::string& out) {
    const auto spec = sweep_spec_from_json(read_json(spec_path));
    const auto p = load(c);
    const Device d = make_device(p);
    const auto m = load_model(c, d);
    const auto table = run_sweep(spec, p, m);
    auto os = open_out(out);
    write_sweep(os, table, spec.format);
    return 0;
}

int cmd_calibrate(const Common& c, const std::string& anchors_path, const std::string& out, double np, double nh) {
    const Device d = make_device(load(c));
    const auto anchors = anchors_path.empty() ? builtin_anchors() : anchors_from_json(read_json(anchors_path));
    const auto m = calibrate(anchors, d, np, nh, anchors_path.empty() ? "builtin-anchors" : anchors_path);
    for (const auto& r : m.residuals)
        std::cerr << r.label << ": target " << r.target_gamma << " 1/s, model " << r.model_gamma << " 1/s ("
                  << r.relative * 100.0 << "%)\n";
    auto os = open_out(out);
    os << to_json(m).dump(2) << '\n';
    return 0;
}

int cmd_mc(const Common& c, const std::string& cfg_path, const std::string& out_dir) {
    const auto doc = read_json(cfg_path);
    const auto p = load(c);
    const Device d = make_device(p);
    const auto m = load_model(c, d);
    SimConfig cfg = sim_config_from_json(doc, d.trap);

    OperatingPoint op = operating_point_from(p);
    op.T = cfg.temperature;
    op.b = cfg.bandwidth_b;
    if (cfg.protocol) op.G = cfg.protocol->G;
    const bool q_from_model = !(doc.contains("Q_EB") && doc.at("Q_EB").is_number());
    if (q_from_model) cfg.Q_EB = q_factor(op.T, op.x3, m, d.omega_EB());
    const auto analytic = budget_at_q(d, op, cfg.Q_EB, cfg.protocol);
    const bool detector_noise = doc.value("detector_noise", false);
    if (detector_noise) cfg.detector_force_std = analytic.F_shot + analytic.F_rpsn_equiv;

    const auto tr = simulate(cfg, d.trap, d.constants);
    fs::create_directories(out_dir);

    CsvTable traj;
    traj.header_lines = {std::string("heliox ") + kVersion, "mc trajectory (decimated)", "config " + doc.dump(),
                         "params " + to_json(p).dump()};
    traj.columns = {"t_s", "x_m", "v_m_per_s", "spin"};
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        traj.add_row({tr.times[i], tr.positions[i], tr.velocities[i], static_cast<double>(tr.spin_signs[i])});
    {
        auto os = open_out((fs::path(out_dir) / "trajectory.csv").string());
        write_csv(os, traj);
    }

    CsvTable win;
    win.header_lines = {std::string("heliox ") + kVersion, "mc lock-in windows of 1/b", "config " + doc.dump()};
    win.columns = {"window", "x_I_m", "x_Q_m", "F_I_N", "F_Q_N", "spin", "z2_m2"};
    for (std::size_t i = 0; i < tr.force_I.size(); ++i)
        win.add_row({static_cast<double>(i), tr.lockin_I[i], tr.lockin_Q[i], tr.force_I[i], tr.force_Q[i],
                     static_cast<double>(tr.window_spin[i]), tr.window_z2[i]});
    {
        auto os = open_out((fs::path(out_dir) / "windows.csv").string());
        write_csv(os, win);
    }

    nlohmann::json s;
    s["version"] = kVersion;
    s["seed"] = cfg.seed;
    s["dt_s"] = tr.dt;
    s["steps"] = tr.steps;
    s["temperature_K"] = cfg.temperature;
    s["Q_EB"] = cfg.Q_EB;
    s["Q_EB_source"] = q_from_model ? "damping model" : "config";
    s["bandwidth_Hz"] = cfg.bandwidth_b;
    s["protocol"] = cfg.protocol ? to_string(cfg.protocol->kind) : "none";
    s["z2_mean_m2"] = tr.z2_mean;
    s["z2_stderr_m2"] = tr.z2_stderr;
    s["flip_count"] = tr.flip_count;
    s["max_speed_m_per_s"] = tr.max_speed;
    const double kT = d.constants.boltzmann_kB * cfg.temperature;
    if (kT > 0.0 && !cfg.protocol) {
        const double harmonic = kT / (d.mass() * d.omega_EB() * d.omega_EB());
        s["equipartition"] = {{"ratio", tr.z2_mean / harmonic},
                              {"sigma", tr.z2_stderr > 0 ? std::abs(tr.z2_mean - harmonic) / tr.z2_stderr : 0.0}};
    }
    s["detector_noise"] = detector_noise ? "white force noise of std F_shot + F_rpsn at b, added per window"
                                         : "none";
    if (tr.force_I.size() >= 4) {
        const auto r = lockin_snr(tr, cfg);
        s["lockin"] = {{"windows", r.windows}, {"snr", r.snr},        {"snr_stderr", r.snr_stderr},
                       {"mean_I_N", r.mean_I}, {"std_I_N", r.std_I}};
        if (cfg.protocol) {
            // the simulation sees thermal force plus, optionally, one white detector term
            const double det = detector_noise ? analytic.F_shot + analytic.F_rpsn_equiv : 0.0;
            const double a = analytic.F_fundamental / (std::sqrt(2.0) * (analytic.F_th + det));
            const double aq = analytic.F_fundamental / (std::sqrt(2.0) * std::hypot(analytic.F_th, det));
            s["analytic"] = {{"snr_linear_sum", a},
                             {"snr_quadrature", aq},
                             {"F_fundamental_N", analytic.F_fundamental},
                             {"F_th_N", analytic.F_th},
                             {"F_shot_N", analytic.F_shot},
                             {"F_rpsn_N", analytic.F_rpsn_equiv},
                             {"ratio_to_linear_sum", r.snr / a},
                             {"ratio_to_quadrature", r.snr / aq},
                             {"note", "rpsn enters as white force noise at w_EB"}};
        }
    }
    auto os = open_out((fs::path(out_dir) / "summary.json").string());
    os << s.dump(2) << '\n';
    std::cout << s.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"heliox: electron-bubble spin detection design toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Common common;

    auto* params = app.add_subcommand("params", "load, validate and summarize a parameter record");
    bool dump = false;
    add_common(params, common, false);
    params->add_flag("--dump", dump, "print the canonical SI record");

    auto* figure = app.add_subcommand("figure", "write the data behind one figure");
    std::string fig_name, fig_out;
    FigureOptions fig_opt;
    add_common(figure, common, true);
    figure->add_option("name", fig_name, "fig2 fig3 fig4a fig4b fig4c fig4d fig5a fig5b si-fig2 si-fig4")->required();
    figure->add_option("-o,--output", fig_out, "CSV file")->required();
    figure->add_option("--G-list", fig_opt.G_list, "fig3 gradients [T/m]");
    figure->add_option("--levels", fig_opt.error_rates, "fig4c error-rate contour levels [1/s]");

    auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
    std::string sweep_spec, sweep_out;
    add_common(sweep, common, true);
    sweep->add_option("-s,--spec", sweep_spec, "sweep spec JSON")->required();
    sweep->add_option("-o,--output", sweep_out, "output file")->required();

    auto* cal = app.add_subcommand("calibrate", "fit the damping model to anchors");
    std::string anchors, cal_out;
    double np = 4.0, nh = 0.5;
    add_common(cal, common, false);
    cal->add_option("-a,--anchors", anchors, "anchor JSON (default: built-in set)");
    cal->add_option("-o,--output", cal_out, "model JSON")->required();
    cal->add_option("--np", np, "phonon exponent");
    cal->add_option("--nh", nh, "He-3 exponent");

    auto* mc = app.add_subcommand("mc", "Langevin simulation with lock-in readout");
    std::string mc_cfg, mc_out;
    add_common(mc, common, true);
    mc->add_option("-c,--config-mc", mc_cfg, "simulation config JSON")->required();
    mc->add_option("-o,--output", mc_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*params) return cmd_params(common, dump);
        if (*figure) return cmd_figure(common, fig_name, fig_out, fig_opt);
        if (*sweep) return cmd_sweep(common, sweep_spec, sweep_out);
        if (*cal) return cmd_calibrate(common, anchors, cal_out, np, nh);
        if (*mc) return cmd_mc(common, mc_cfg, mc_out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 2;
}

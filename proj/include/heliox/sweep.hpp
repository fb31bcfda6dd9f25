#pragma once
// heliox/sweep.hpp - one-parameter sweeps over the device record
//
// Each row rebuilds the Device from scratch with the swept field set, then
// evaluates the requested outputs. The damping model is held fixed across rows.

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heliox/csv.hpp"
#include "heliox/device.hpp"
#include "heliox/errors.hpp"
#include "heliox/figures.hpp"
#include "heliox/noise.hpp"
#include "heliox/numerics.hpp"
#include "heliox/parallel.hpp"
#include "heliox/spin.hpp"
#include "heliox/transport.hpp"

namespace heliox {

enum class SweepFormat { Csv, Json };

struct SweepSpec {
    std::string variable;           ///< config key, suffix units allowed (e.g. laser_power_uW)
    std::vector<double> values;     ///< in the key's units
    std::vector<std::string> outputs;
    SweepFormat format{SweepFormat::Csv};
};

struct SweepContext {
    const Device& device;
    const DampingModel& model;
    OperatingPoint point;
};

using SweepOutput = std::function<double(const SweepContext&)>;

inline const std::map<std::string, SweepOutput>& sweep_outputs() {
    static const std::map<std::string, SweepOutput> outputs{
        {"R0_m", [](const SweepContext& c) { return c.device.bubble.radius_R; }},
        {"E_EB_Pa", [](const SweepContext& c) { return c.device.bubble.youngs_modulus_E_EB; }},
        {"Wac_J_per_m3", [](const SweepContext& c) { return c.device.trap.energy_density_Wac; }},
        {"Phi", [](const SweepContext& c) { return c.device.trap.contrast_Phi; }},
        {"omega_EB_rad_per_s", [](const SweepContext& c) { return c.device.omega_EB(); }},
        {"f_EB_Hz", [](const SweepContext& c) { return c.device.omega_EB() / kTwoPi; }},
        {"g0_Hz", [](const SweepContext& c) { return c.device.probe_coupling.g0 / kTwoPi; }},
        {"z_zpf_m", [](const SweepContext& c) { return c.device.probe_coupling.z_zpf; }},
        {"n_ac", [](const SweepContext& c) {
             return stored_energy_and_phonons(c.device.trap, c.device.params, c.device.constants).phonons;
         }},
        {"modulation_depth_kappa", [](const SweepContext& c) {
             return readout_modulation_depth(c.device.trap, c.device.params, c.device.constants);
         }},
        {"n_th", [](const SweepContext& c) { return bose_occupation(c.device.omega_EB(), c.point.T, c.device.constants); }},
        {"Q_EB", [](const SweepContext& c) { return resolve_q(c.device, c.point, c.model); }},
        {"gamma_EB_per_s", [](const SweepContext& c) { return damping_rate(c.point.T, c.point.x3, c.model).total; }},
        {"F_th_N", [](const SweepContext& c) { return snr(c.device, c.point, c.model).F_th; }},
        {"F_shot_N", [](const SweepContext& c) { return snr(c.device, c.point, c.model).F_shot; }},
        {"F_rpsn_N", [](const SweepContext& c) { return snr(c.device, c.point, c.model).F_rpsn_equiv; }},
        {"F_mag_N", [](const SweepContext& c) { return snr(c.device, c.point, c.model).F_mag; }},
        {"snr", [](const SweepContext& c) { return snr(c.device, c.point, c.model).snr; }},
        {"snr_quadrature", [](const SweepContext& c) { return snr(c.device, c.point, c.model).snr_quadrature; }},
        {"required_q", [](const SweepContext& c) { return required_q(c.device, c.point, 1.0); }},
        {"z_EB_m", [](const SweepContext& c) {
             const double F = c.device.constants.spin_moment() * c.point.G;
             return displacement_response(F, resolve_q(c.device, c.point, c.model), c.device.omega_EB(),
                                          c.device.mass())
                 .amplitude;
         }},
        {"B1_max_T", [](const SweepContext& c) { return rabi_b1_max(c.device.omega_EB(), c.device.constants); }},
        {"lz_exponent", [](const SweepContext& c) {
             return lz_exponent(c.device.params.B1, c.device.params.Bmod, c.device.omega_EB(), c.device.constants);
         }},
        {"diabatic_error_rate", [](const SweepContext& c) {
             return diabatic_error_rate(c.device.params.B1, c.device.params.Bmod, c.device.omega_EB(),
                                        c.device.constants);
         }},
    };
    return outputs;
}

inline SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
    SweepSpec s;
    try {
        s.variable = j.at("variable").get<std::string>();
        const auto& v = j.at("values");
        if (v.is_array()) {
            s.values = v.get<std::vector<double>>();
        } else {
            const auto count = v.at("count").get<long>();
            if (count < 2) throw ValidationError("sweep: count must be >= 2");
            const double start = v.at("start").get<double>(), stop = v.at("stop").get<double>();
            const auto scale = v.value("scale", std::string("linear"));
            if (scale == "linear")
                s.values = numerics::linspace(start, stop, static_cast<std::size_t>(count));
            else if (scale == "log")
                s.values = numerics::logspace(start, stop, static_cast<std::size_t>(count));
            else
                throw ConfigError("sweep: scale must be linear or log, got '" + scale + "'");
        }
        s.outputs = j.at("outputs").get<std::vector<std::string>>();
        const auto fmt = j.value("format", std::string("csv"));
        if (fmt == "csv")
            s.format = SweepFormat::Csv;
        else if (fmt == "json")
            s.format = SweepFormat::Json;
        else
            throw ConfigError("sweep: format must be csv or json, got '" + fmt + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("sweep spec: ") + e.what());
    }
    if (s.values.size() < 2) throw ValidationError("sweep: need at least 2 values");
    if (!resolve_key(s.variable)) throw UsageError("sweep: parameter path '" + s.variable + "' does not resolve");
    if (s.outputs.empty()) throw ValidationError("sweep: no outputs requested");
    for (const auto& o : s.outputs)
        if (!sweep_outputs().count(o)) {
            std::string known;
            for (const auto& [k, _] : sweep_outputs()) known += (known.empty() ? "" : ", ") + k;
            throw UsageError("sweep: unknown output '" + o + "' (known: " + known + ")");
        }
    return s;
}

inline CsvTable run_sweep(const SweepSpec& s, const DeviceParams& base, const DampingModel& model) {
    if (!resolve_key(s.variable)) throw UsageError("sweep: parameter path '" + s.variable + "' does not resolve");
    std::vector<const SweepOutput*> fns;
    for (const auto& o : s.outputs) {
        auto it = sweep_outputs().find(o);
        if (it == sweep_outputs().end()) throw UsageError("sweep: unknown output '" + o + "'");
        fns.push_back(&it->second);
    }

    CsvTable t;
    t.header_lines.push_back(std::string("heliox ") + kVersion);
    t.header_lines.push_back("sweep " + s.variable + " over " + std::to_string(s.values.size()) + " values");
    t.header_lines.push_back("params " + to_json(base).dump());
    t.header_lines.push_back("damping_model " + to_json(model).dump());
    t.columns.push_back(s.variable);
    for (const auto& o : s.outputs) t.columns.push_back(o);

    std::vector<std::vector<double>> rows(s.values.size());
    parallel_for(s.values.size(), [&](std::size_t i) {
        DeviceParams p = base;
        set_parameter(p, s.variable, s.values[i]);
        validate(p);
        const Device d = make_device(p);
        const SweepContext ctx{d, model, operating_point_from(p)};
        auto& row = rows[i];
        row.push_back(s.values[i]);
        for (const auto* f : fns) row.push_back((*f)(ctx));
    });
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

inline void write_sweep(std::ostream& os, const CsvTable& t, SweepFormat format) {
    if (format == SweepFormat::Csv) {
        write_csv(os, t);
        return;
    }
    nlohmann::json j;
    j["header"] = t.header_lines;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    os << j.dump(1) << '\n';
}

} // namespace heliox

#pragma once
// heliox/params.hpp - the validated device-parameter record and its JSON form
//
// Config documents are flat JSON objects. Keys are the field names below in SI,
// or `<base>_<unit>` for the fixed suffix set (e.g. "temperature_mK",
// "laser_power_uW", "he3_fraction_ppm", "kappa_MHz" meaning kappa/2pi in MHz).
// {"preset": "paper-default"} starts from the published parameter table; any
// other key then overrides one field.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "heliox/constants.hpp"
#include "heliox/errors.hpp"

namespace heliox {

struct DeviceParams {
    // optical cavity
    double lambda_opt{1550e-9};           ///< vacuum wavelength [m]
    double cavity_length_L{100e-6};       ///< [m]
    double cavity_waist_w{5e-6};          ///< [m]
    double finesse_F{1e5};
    double kappa{kTwoPi * 15e6};          ///< total linewidth [rad/s]
    double kappa_ex_ratio{0.44};          ///< kappa_ex / kappa
    // acoustic trap
    double lambda_ac{775e-9};             ///< [m]
    double omega_ac{kTwoPi * 320e6};      ///< [rad/s]
    double Q_ac{1e5};
    double g0_ac{kTwoPi * 3.6e3};         ///< acousto-optic single-phonon coupling [rad/s]
    double trap_depth_U0_over_kB{0.300};  ///< [K]
    // electron bubble
    double m_EB{1.6e-24};                 ///< effective mass [kg]
    std::optional<double> R0_override{};  ///< [m]
    // mode bookkeeping
    int n_opt_trap{129};
    int n_opt_probe{130};
    int n_ac_mode{258};
    // operating point
    double laser_power_P{1e-6};           ///< incident probe power [W]
    double gradient_G{100.0};             ///< [T/m]
    double B0{45e-3};                     ///< static / mean field [T]
    double B1{1.5e-3};                    ///< microwave amplitude [T]
    double Bmod{1.6e-3};                  ///< field modulation amplitude [T]
    double bandwidth_b{1.0};              ///< measurement bandwidth [Hz]
    double radiation_ratio_sigma_rad{1.0};
    double probe_detuning_Delta_l{0.0};   ///< omega_l - omega_c [rad/s]
    double lo_offset_omega_lo{kTwoPi * 80e6}; ///< heterodyne LO offset [rad/s]

    HeliumMedium medium{};

    bool operator==(const DeviceParams&) const = default;
};

/// The published parameter table (plus the main-text operating point).
inline DeviceParams paper_default_params() { return DeviceParams{}; }

// ---------------------------------------------------------------------------
// Field registry
// ---------------------------------------------------------------------------

enum class UnitKind { Length, Temperature, Fraction, Power, Field, AngularFrequency, Frequency, Plain };

struct FieldSpec {
    std::string_view key;   ///< canonical SI key
    std::string_view base;  ///< prefix for suffixed keys (empty: no suffixes)
    UnitKind kind;
    bool mandatory;
    double& (*ref)(DeviceParams&);
};

struct IntFieldSpec {
    std::string_view key;
    int& (*ref)(DeviceParams&);
};

namespace detail {

inline std::optional<double> unit_multiplier(UnitKind kind, std::string_view suffix) {
    struct Entry {
        std::string_view name;
        double factor;
    };
    auto find = [&](std::initializer_list<Entry> table) -> std::optional<double> {
        for (const auto& e : table)
            if (e.name == suffix) return e.factor;
        return std::nullopt;
    };
    switch (kind) {
    case UnitKind::Length:
        return find({{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}, {"pm", 1e-12}});
    case UnitKind::Temperature: return find({{"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}});
    case UnitKind::Fraction: return find({{"ppm", 1e-6}, {"ppb", 1e-9}});
    case UnitKind::Power: return find({{"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}, {"nW", 1e-9}});
    case UnitKind::Field: return find({{"T", 1.0}, {"mT", 1e-3}, {"uT", 1e-6}});
    case UnitKind::AngularFrequency:
        return find({{"Hz", kTwoPi}, {"kHz", kTwoPi * 1e3}, {"MHz", kTwoPi * 1e6}, {"GHz", kTwoPi * 1e9}});
    case UnitKind::Frequency: return find({{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}});
    case UnitKind::Plain: return std::nullopt;
    }
    return std::nullopt;
}

} // namespace detail

#define HELIOX_FIELD(KEY, BASE, KIND, MAND, EXPR) \
    FieldSpec { KEY, BASE, UnitKind::KIND, MAND, [](DeviceParams& p) -> double& { return EXPR; } }

inline const std::vector<FieldSpec>& field_registry() {
    static const std::vector<FieldSpec> fields{
        HELIOX_FIELD("lambda_opt", "lambda_opt", Length, true, p.lambda_opt),
        HELIOX_FIELD("cavity_length_L", "cavity_length", Length, true, p.cavity_length_L),
        HELIOX_FIELD("cavity_waist_w", "cavity_waist", Length, true, p.cavity_waist_w),
        HELIOX_FIELD("finesse_F", "", Plain, true, p.finesse_F),
        HELIOX_FIELD("kappa", "kappa", AngularFrequency, true, p.kappa),
        HELIOX_FIELD("kappa_ex_ratio", "", Plain, true, p.kappa_ex_ratio),
        HELIOX_FIELD("lambda_ac", "lambda_ac", Length, true, p.lambda_ac),
        HELIOX_FIELD("omega_ac", "omega_ac", AngularFrequency, true, p.omega_ac),
        HELIOX_FIELD("Q_ac", "", Plain, true, p.Q_ac),
        HELIOX_FIELD("g0_ac", "g0_ac", AngularFrequency, true, p.g0_ac),
        HELIOX_FIELD("trap_depth_U0_over_kB", "trap_depth", Temperature, true, p.trap_depth_U0_over_kB),
        HELIOX_FIELD("m_EB", "", Plain, true, p.m_EB),
        HELIOX_FIELD("laser_power_P", "laser_power", Power, true, p.laser_power_P),
        HELIOX_FIELD("gradient_G", "", Plain, true, p.gradient_G),
        HELIOX_FIELD("B0", "B0", Field, true, p.B0),
        HELIOX_FIELD("B1", "B1", Field, true, p.B1),
        HELIOX_FIELD("Bmod", "Bmod", Field, true, p.Bmod),
        HELIOX_FIELD("bandwidth_b", "bandwidth", Frequency, true, p.bandwidth_b),
        HELIOX_FIELD("radiation_ratio_sigma_rad", "", Plain, false, p.radiation_ratio_sigma_rad),
        HELIOX_FIELD("probe_detuning_Delta_l", "probe_detuning", AngularFrequency, false, p.probe_detuning_Delta_l),
        HELIOX_FIELD("lo_offset_omega_lo", "lo_offset", AngularFrequency, false, p.lo_offset_omega_lo),
        HELIOX_FIELD("density_rho", "", Plain, true, p.medium.density_rho),
        HELIOX_FIELD("sound_speed_c", "", Plain, true, p.medium.sound_speed_c),
        HELIOX_FIELD("surface_tension_sigma", "", Plain, true, p.medium.surface_tension_sigma),
        HELIOX_FIELD("refractive_index_nHe", "", Plain, true, p.medium.refractive_index_nHe),
        HELIOX_FIELD("permittivity_ratio", "", Plain, true, p.medium.permittivity_ratio),
        HELIOX_FIELD("he3_fraction_x3", "he3_fraction", Fraction, true, p.medium.he3_fraction_x3),
        HELIOX_FIELD("temperature_T", "temperature", Temperature, true, p.medium.temperature_T),
    };
    return fields;
}

#undef HELIOX_FIELD

inline const std::vector<IntFieldSpec>& int_field_registry() {
    static const std::vector<IntFieldSpec> fields{
        {"n_opt_trap", [](DeviceParams& p) -> int& { return p.n_opt_trap; }},
        {"n_opt_probe", [](DeviceParams& p) -> int& { return p.n_opt_probe; }},
        {"n_ac_mode", [](DeviceParams& p) -> int& { return p.n_ac_mode; }},
    };
    return fields;
}

/// A config key resolved to a registry field plus the factor converting the
/// key's unit to SI.
struct ResolvedKey {
    const FieldSpec* field{nullptr};
    const IntFieldSpec* int_field{nullptr};
    bool is_r0_override{false};
    double to_si{1.0};
};

inline std::optional<ResolvedKey> resolve_key(std::string_view key) {
    for (const auto& f : field_registry())
        if (f.key == key) return ResolvedKey{&f, nullptr, false, 1.0};
    for (const auto& f : int_field_registry())
        if (f.key == key) return ResolvedKey{nullptr, &f, false, 1.0};
    if (key == "R0_override") return ResolvedKey{nullptr, nullptr, true, 1.0};

    const auto split = key.rfind('_');
    if (split == std::string_view::npos) return std::nullopt;
    const auto base = key.substr(0, split);
    const auto suffix = key.substr(split + 1);
    if (base == "R0_override") {
        if (auto m = detail::unit_multiplier(UnitKind::Length, suffix)) return ResolvedKey{nullptr, nullptr, true, *m};
        return std::nullopt;
    }
    for (const auto& f : field_registry()) {
        if (f.base.empty() || f.base != base) continue;
        if (auto m = detail::unit_multiplier(f.kind, suffix)) return ResolvedKey{&f, nullptr, false, *m};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Throws ValidationError naming the first violated rule; returns soft warnings.
inline std::vector<std::string> validate(const DeviceParams& p, const PhysicalConstants& k = {}) {
    auto fail = [](const std::string& rule) { throw ValidationError("validation failed: " + rule); };
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " > 0");
    };
    auto nonneg = [&](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) fail(std::string(name) + " >= 0");
    };

    positive(p.lambda_opt, "lambda_opt");
    positive(p.cavity_length_L, "cavity_length_L");
    positive(p.cavity_waist_w, "cavity_waist_w");
    positive(p.finesse_F, "finesse_F");
    positive(p.kappa, "kappa");
    if (!(p.kappa_ex_ratio > 0.0 && p.kappa_ex_ratio <= 1.0)) fail("kappa_ex_ratio in (0, 1]");
    positive(p.lambda_ac, "lambda_ac");
    positive(p.omega_ac, "omega_ac");
    if (!(p.Q_ac >= 1.0)) fail("Q_ac >= 1");
    nonneg(p.g0_ac, "g0_ac");
    nonneg(p.trap_depth_U0_over_kB, "trap_depth_U0_over_kB");
    positive(p.m_EB, "m_EB");
    if (p.R0_override) positive(*p.R0_override, "R0_override");
    nonneg(p.laser_power_P, "laser_power_P");
    nonneg(p.gradient_G, "gradient_G");
    nonneg(p.B0, "B0");
    nonneg(p.B1, "B1");
    nonneg(p.Bmod, "Bmod");
    positive(p.bandwidth_b, "bandwidth_b");
    positive(p.radiation_ratio_sigma_rad, "radiation_ratio_sigma_rad");
    nonneg(p.lo_offset_omega_lo, "lo_offset_omega_lo");
    if (!std::isfinite(p.probe_detuning_Delta_l)) fail("probe_detuning_Delta_l finite");

    const auto& m = p.medium;
    positive(m.density_rho, "density_rho");
    positive(m.sound_speed_c, "sound_speed_c");
    positive(m.surface_tension_sigma, "surface_tension_sigma");
    positive(m.refractive_index_nHe, "refractive_index_nHe");
    positive(m.permittivity_ratio, "permittivity_ratio");
    if (!(m.he3_fraction_x3 >= 0.0 && m.he3_fraction_x3 <= 1.0)) fail("0 <= he3_fraction_x3 <= 1");
    positive(m.temperature_T, "temperature_T");

    if (p.n_opt_trap <= 0 || p.n_opt_probe <= 0 || p.n_ac_mode <= 0) fail("mode indices > 0");
    if (p.n_ac_mode != 2 * p.n_opt_trap) fail("n_ac_mode = 2 * n_opt_trap");
    if (p.n_opt_probe != p.n_opt_trap + 1) fail("n_opt_probe = n_opt_trap + 1");

    std::vector<std::string> warnings;
    const double kappa_finesse = kPi * k.speed_of_light_c / (m.refractive_index_nHe * p.cavity_length_L * p.finesse_F);
    if (std::abs(p.kappa / kappa_finesse - 1.0) > 0.10) {
        warnings.push_back("kappa differs from pi c/(n_He L F) = 2pi x " +
                           std::to_string(kappa_finesse / kTwoPi / 1e6) + " MHz by more than 10%");
    }
    const double lambda_ac_cavity = 2.0 * p.cavity_length_L / p.n_ac_mode;
    if (std::abs(p.lambda_ac / lambda_ac_cavity - 1.0) > 0.01) {
        warnings.push_back("lambda_ac differs from 2 L / n_ac_mode by more than 1%");
    }
    return warnings;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

/// Build a record from a config document; throws ConfigError / ValidationError.
inline DeviceParams load_params(const nlohmann::json& doc, std::vector<std::string>* warnings = nullptr,
                                const PhysicalConstants& k = {}) {
    if (!doc.is_object()) throw ConfigError("config document must be a JSON object");

    DeviceParams p{};
    bool from_preset = false;
    if (auto it = doc.find("preset"); it != doc.end()) {
        if (!it->is_string() || it->get<std::string>() != "paper-default")
            throw ConfigError("unknown preset '" + it->dump() + "' (known: paper-default)");
        from_preset = true;
    }

    std::vector<std::string> seen;
    bool r0_seen = false;
    for (const auto& [key, value] : doc.items()) {
        if (key == "preset") continue;
        auto resolved = resolve_key(key);
        if (!resolved) throw ConfigError("unknown config key '" + key + "'");
        const std::string canonical = resolved->field       ? std::string(resolved->field->key)
                                      : resolved->int_field ? std::string(resolved->int_field->key)
                                                            : std::string("R0_override");
        if (std::find(seen.begin(), seen.end(), canonical) != seen.end())
            throw ConfigError("key '" + key + "' sets '" + canonical + "' more than once");
        seen.push_back(canonical);

        if (resolved->is_r0_override) {
            r0_seen = true;
            if (value.is_null()) {
                p.R0_override.reset();
                continue;
            }
        }
        if (resolved->int_field) {
            if (!value.is_number_integer()) throw ConfigError("key '" + key + "' must be an integer");
            resolved->int_field->ref(p) = value.get<int>();
            continue;
        }
        if (!value.is_number()) throw ConfigError("key '" + key + "' must be a number");
        const double si = value.get<double>() * resolved->to_si;
        if (resolved->is_r0_override)
            p.R0_override = si;
        else
            resolved->field->ref(p) = si;
    }
    (void)r0_seen;

    if (!from_preset) {
        for (const auto& f : field_registry())
            if (f.mandatory && std::find(seen.begin(), seen.end(), std::string(f.key)) == seen.end())
                throw ConfigError("missing mandatory key '" + std::string(f.key) + "'");
        for (const auto& f : int_field_registry())
            if (std::find(seen.begin(), seen.end(), std::string(f.key)) == seen.end())
                throw ConfigError("missing mandatory key '" + std::string(f.key) + "'");
    }

    auto w = validate(p, k);
    if (warnings) *warnings = std::move(w);
    return p;
}

/// Canonical SI document; load_params(to_json(p)) == p bit for bit.
inline nlohmann::json to_json(const DeviceParams& p) {
    nlohmann::json doc = nlohmann::json::object();
    DeviceParams copy = p;
    for (const auto& f : field_registry()) doc[std::string(f.key)] = f.ref(copy);
    for (const auto& f : int_field_registry()) doc[std::string(f.key)] = f.ref(copy);
    doc["R0_override"] = p.R0_override ? nlohmann::json(*p.R0_override) : nlohmann::json(nullptr);
    return doc;
}

/// Set one field by config key (suffix units allowed). Used by sweeps.
inline void set_parameter(DeviceParams& p, std::string_view key, double value) {
    auto resolved = resolve_key(key);
    if (!resolved) throw UsageError("parameter path '" + std::string(key) + "' does not resolve");
    if (resolved->int_field) {
        resolved->int_field->ref(p) = static_cast<int>(std::lround(value));
    } else if (resolved->is_r0_override) {
        p.R0_override = value * resolved->to_si;
    } else {
        resolved->field->ref(p) = value * resolved->to_si;
    }
}

// ---------------------------------------------------------------------------
// Derived optical rates
// ---------------------------------------------------------------------------

struct CouplingRates {
    double kappa_ex; ///< [rad/s]
    double kappa_in; ///< [rad/s]
};

inline CouplingRates derived_kappa_ex(const DeviceParams& p) {
    const double ex = p.kappa_ex_ratio * p.kappa;
    return {ex, p.kappa - ex};
}

/// Linewidth at finesse F, scaled from the table's (kappa, finesse) pair.
inline double kappa_for_finesse(const DeviceParams& p, double finesse) {
    if (!(finesse > 0.0)) throw DomainError("finesse must be positive");
    return p.kappa * p.finesse_F / finesse;
}

} // namespace heliox

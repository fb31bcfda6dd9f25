#pragma once
// heliox/calibration.hpp - fit (Cp, Ch) of the damping model to anchors
//
// Each anchor is turned into a target damping rate at its (T, x3):
//   Gamma  -> as given
//   Q      -> w_EB / Q
//   Snr    -> w_EB / required_q(SNR = value)
// then gamma_i = Cp T_i^np + Ch x3_i T_i^nh is solved by weighted linear least
// squares on relative residuals.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heliox/device.hpp"
#include "heliox/errors.hpp"
#include "heliox/noise.hpp"
#include "heliox/transport.hpp"

namespace heliox {

enum class AnchorKind { Snr, Q, Gamma };

struct CalibrationAnchor {
    std::string label;
    double T{};
    double x3{};
    AnchorKind kind{AnchorKind::Snr};
    double value{};
    double weight{1.0};
    std::optional<double> G{};       ///< [T/m], defaults to the params
    std::optional<double> P{};       ///< [W]
    std::optional<double> finesse{};
};

/// Built-in set: SNR 16 at 30 mK / 1e-6 ppm, SNR 1 crossing at 55 mK / 1e-2 ppm,
/// and a weak Q = 6e5 prior at 30 mK.
inline std::vector<CalibrationAnchor> builtin_anchors() {
    std::vector<CalibrationAnchor> a(3);
    a[0] = {"snr16_30mK", 0.030, 1e-12, AnchorKind::Snr, 16.0, 1.0, 100.0, 1e-6, 1e5};
    a[1] = {"snr1_crossing_55mK", 0.055, 1e-8, AnchorKind::Snr, 1.0, 1.0, 100.0, 1e-6, 1e5};
    a[2] = {"q6e5_30mK", 0.030, 1e-12, AnchorKind::Q, 6e5, 0.01, std::nullopt, std::nullopt, std::nullopt};
    return a;
}

inline std::string to_string(AnchorKind k) {
    switch (k) {
    case AnchorKind::Snr: return "snr";
    case AnchorKind::Q: return "q";
    case AnchorKind::Gamma: return "gamma";
    }
    return "?";
}

inline nlohmann::json to_json(const CalibrationAnchor& a) {
    nlohmann::json j = {{"label", a.label}, {"T", a.T}, {"x3", a.x3}, {"kind", to_string(a.kind)},
                        {"value", a.value}, {"weight", a.weight}};
    if (a.G) j["G"] = *a.G;
    if (a.P) j["P"] = *a.P;
    if (a.finesse) j["finesse"] = *a.finesse;
    return j;
}

inline CalibrationAnchor anchor_from_json(const nlohmann::json& j) {
    CalibrationAnchor a;
    try {
        a.label = j.value("label", std::string("anchor"));
        a.T = j.contains("T_mK") ? j.at("T_mK").get<double>() * 1e-3 : j.at("T").get<double>();
        a.x3 = j.contains("x3_ppm") ? j.at("x3_ppm").get<double>() * 1e-6 : j.at("x3").get<double>();
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "snr")
            a.kind = AnchorKind::Snr;
        else if (kind == "q")
            a.kind = AnchorKind::Q;
        else if (kind == "gamma")
            a.kind = AnchorKind::Gamma;
        else
            throw ConfigError("anchor kind must be snr, q or gamma, got '" + kind + "'");
        a.value = j.at("value").get<double>();
        a.weight = j.value("weight", 1.0);
        if (j.contains("G")) a.G = j.at("G").get<double>();
        if (j.contains("P")) a.P = j.at("P").get<double>();
        if (j.contains("finesse")) a.finesse = j.at("finesse").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("anchor: ") + e.what());
    }
    if (!(a.T > 0.0) || !(a.x3 >= 0.0 && a.x3 <= 1.0) || !(a.value > 0.0) || !(a.weight > 0.0))
        throw ValidationError("anchor '" + a.label + "': need T > 0, 0 <= x3 <= 1, value > 0, weight > 0");
    return a;
}

inline std::vector<CalibrationAnchor> anchors_from_json(const nlohmann::json& j) {
    const auto& arr = j.is_object() ? j.at("anchors") : j;
    if (!arr.is_array()) throw ConfigError("anchors document must be an array or {\"anchors\": [...]}");
    std::vector<CalibrationAnchor> out;
    for (const auto& e : arr) out.push_back(anchor_from_json(e));
    return out;
}

/// Damping rate an anchor asks for.
inline double anchor_target_gamma(const CalibrationAnchor& a, const Device& d) {
    const double w = d.omega_EB();
    switch (a.kind) {
    case AnchorKind::Gamma: return a.value;
    case AnchorKind::Q: return w / a.value;
    case AnchorKind::Snr: {
        OperatingPoint op = operating_point_from(d.params);
        op.T = a.T;
        op.x3 = a.x3;
        if (a.G) op.G = *a.G;
        if (a.P) op.P = *a.P;
        if (a.finesse) op.finesse = *a.finesse;
        return w / required_q(d, op, a.value);
    }
    }
    return 0.0;
}

inline DampingModel calibrate(const std::vector<CalibrationAnchor>& anchors, const Device& d, double np = 4.0,
                              double nh = 0.5, const std::string& tag = "calibrated") {
    if (anchors.size() < 2)
        throw CalibrationError("calibrate: " + std::to_string(anchors.size()) +
                               " anchor(s) for 2 free prefactors; rank 1 < 2");

    // relative-residual rows: (T^np / g, x3 T^nh / g) . (Cp, Ch) = 1, scaled by sqrt(w)
    std::vector<double> targets;
    double a11 = 0, a12 = 0, a22 = 0, r1 = 0, r2 = 0;
    for (const auto& a : anchors) {
        const double g = anchor_target_gamma(a, d);
        if (!(g > 0.0) || !std::isfinite(g)) throw CalibrationError("anchor '" + a.label + "' gives no positive rate");
        targets.push_back(g);
        const double sw = std::sqrt(a.weight);
        const double u = sw * std::pow(a.T, np) / g;
        const double v = sw * a.x3 * std::pow(a.T, nh) / g;
        a11 += u * u;
        a12 += u * v;
        a22 += v * v;
        r1 += u * sw;
        r2 += v * sw;
    }

    // rank test on the column-normalized normal matrix
    const double det_norm = (a11 > 0 && a22 > 0) ? 1.0 - a12 * a12 / (a11 * a22) : 0.0;
    if (!(det_norm > 1e-12))
        throw CalibrationError("calibrate: anchors do not separate the phonon and He-3 channels (rank 1 < 2)");

    const double det = a11 * a22 - a12 * a12;
    double Cp = (r1 * a22 - r2 * a12) / det;
    double Ch = (a11 * r2 - a12 * r1) / det;
    if (Cp < 0.0) {
        Cp = 0.0;
        Ch = r2 / a22;
    } else if (Ch < 0.0) {
        Ch = 0.0;
        Cp = r1 / a11;
    }

    DampingModel m;
    m.phonon_prefactor_Cp = Cp;
    m.phonon_exponent_np = np;
    m.he3_prefactor_Ch = Ch;
    m.he3_exponent_nh = nh;
    m.calibration_tag = tag;
    m.anchors = nlohmann::json::array();
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const auto& a = anchors[i];
        m.anchors.push_back(to_json(a));
        const double model_g = damping_rate(a.T, a.x3, m).total;
        m.residuals.push_back({a.label, targets[i], model_g, model_g / targets[i] - 1.0});
    }
    return m;
}

inline DampingModel default_damping_model(const Device& d) {
    return calibrate(builtin_anchors(), d, 4.0, 0.5, "builtin-anchors");
}

} // namespace heliox

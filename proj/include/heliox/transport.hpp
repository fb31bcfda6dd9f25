#pragma once
// heliox/transport.hpp - two-channel damping of the bubble's motion
//
//   gamma(T, x3) = Cp T^np + x3 Ch T^nh
//
// Phonon drag plus He-3 gas collisions. The prefactors come out of calibrate()
// (calibration.hpp); the exponents are fixed inputs.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heliox/errors.hpp"

namespace heliox {

struct AnchorResidual {
    std::string label;
    double target_gamma;
    double model_gamma;
    double relative;
};

struct DampingModel {
    double phonon_prefactor_Cp{0.0}; ///< [1/(s K^np)]
    double phonon_exponent_np{4.0};
    double he3_prefactor_Ch{0.0};    ///< [1/(s K^nh)]
    double he3_exponent_nh{0.5};
    std::string calibration_tag{"uncalibrated"};
    nlohmann::json anchors = nlohmann::json::array();
    std::vector<AnchorResidual> residuals;
};

struct DampingRate {
    double phonon; ///< [1/s]
    double he3;    ///< [1/s]
    double total;  ///< [1/s]
};

inline DampingRate damping_rate(double T, double x3, const DampingModel& m) {
    if (!(T > 0.0)) throw DomainError("damping_rate: T must be positive");
    if (!(x3 >= 0.0 && x3 <= 1.0)) throw DomainError("damping_rate: x3 must lie in [0, 1]");
    const double gp = m.phonon_prefactor_Cp * std::pow(T, m.phonon_exponent_np);
    const double gh = x3 * m.he3_prefactor_Ch * std::pow(T, m.he3_exponent_nh);
    return {gp, gh, gp + gh};
}

/// omega_EB / gamma; +inf for a lossless model.
inline double q_factor(double T, double x3, const DampingModel& m, double omega_EB) {
    const double g = damping_rate(T, x3, m).total;
    if (g == 0.0) return std::numeric_limits<double>::infinity();
    return omega_EB / g;
}

/// Temperature where the phonon and He-3 channels are equal (closed form).
inline double channel_crossover_temperature(double x3, const DampingModel& m) {
    const double dn = m.phonon_exponent_np - m.he3_exponent_nh;
    if (x3 <= 0.0 || m.he3_prefactor_Ch <= 0.0 || m.phonon_prefactor_Cp <= 0.0 || dn == 0.0)
        throw DomainError("channel crossover undefined for this model");
    return std::pow(x3 * m.he3_prefactor_Ch / m.phonon_prefactor_Cp, 1.0 / dn);
}

inline nlohmann::json to_json(const DampingModel& m) {
    nlohmann::json res = nlohmann::json::array();
    for (const auto& r : m.residuals)
        res.push_back({{"label", r.label}, {"target_gamma", r.target_gamma}, {"model_gamma", r.model_gamma},
                       {"relative", r.relative}});
    return {{"phonon_prefactor_Cp", m.phonon_prefactor_Cp},
            {"phonon_exponent_np", m.phonon_exponent_np},
            {"he3_prefactor_Ch", m.he3_prefactor_Ch},
            {"he3_exponent_nh", m.he3_exponent_nh},
            {"calibration_tag", m.calibration_tag},
            {"anchors", m.anchors},
            {"residuals", res}};
}

inline DampingModel damping_model_from_json(const nlohmann::json& j) {
    DampingModel m;
    try {
        m.phonon_prefactor_Cp = j.at("phonon_prefactor_Cp").get<double>();
        m.phonon_exponent_np = j.at("phonon_exponent_np").get<double>();
        m.he3_prefactor_Ch = j.at("he3_prefactor_Ch").get<double>();
        m.he3_exponent_nh = j.at("he3_exponent_nh").get<double>();
        m.calibration_tag = j.value("calibration_tag", std::string("external"));
        m.anchors = j.value("anchors", nlohmann::json::array());
        for (const auto& r : j.value("residuals", nlohmann::json::array()))
            m.residuals.push_back({r.at("label").get<std::string>(), r.at("target_gamma").get<double>(),
                                   r.at("model_gamma").get<double>(), r.at("relative").get<double>()});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("damping model: ") + e.what());
    }
    if (m.phonon_prefactor_Cp < 0.0 || m.he3_prefactor_Ch < 0.0)
        throw ValidationError("damping model prefactors must be >= 0");
    if (!std::isfinite(m.phonon_exponent_np) || !std::isfinite(m.he3_exponent_nh))
        throw ValidationError("damping model exponents must be finite");
    return m;
}

} // namespace heliox

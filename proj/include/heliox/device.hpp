#pragma once
// heliox/device.hpp - everything derivable from a DeviceParams record, computed once

#include "heliox/bubble.hpp"
#include "heliox/constants.hpp"
#include "heliox/optics.hpp"
#include "heliox/params.hpp"
#include "heliox/trap.hpp"

namespace heliox {

struct Device {
    DeviceParams params;
    PhysicalConstants constants;
    BubbleProperties bubble;
    TrapSpec trap;
    OpticalMode trap_mode;
    OpticalMode probe_mode;
    CouplingPoint probe_coupling; ///< probe mode at the trap equilibrium

    double omega_EB() const { return trap.omega_EB; }
    double mass() const { return bubble.effective_mass_m; }
    /// Probe laser angular frequency 2 pi c / lambda_opt
    double omega_laser() const { return kTwoPi * constants.speed_of_light_c / params.lambda_opt; }
};

inline Device make_device(const DeviceParams& p, const PhysicalConstants& k = {}) {
    Device d;
    d.params = p;
    d.constants = k;
    d.bubble = make_bubble(p, k);
    d.trap = make_trap(p, d.bubble, k);
    d.trap_mode = make_mode(p, p.n_opt_trap, k);
    d.probe_mode = select_probe_mode(p, k);
    d.probe_coupling = coupling_rate(d.trap.equilibrium_z0, d.probe_mode, d.bubble, d.trap, p.medium, k);
    return d;
}

} // namespace heliox

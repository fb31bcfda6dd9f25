// Force-noise budget at the default operating point, then a short temperature scan.
//   ./noise_budget [G_T_per_m]

#include <cstdio>
#include <cstdlib>

#include "heliox/heliox.hpp"

int main(int argc, char** argv) {
    using namespace heliox;
    const Device d = make_device(paper_default_params());
    const DampingModel model = default_damping_model(d);

    OperatingPoint op = operating_point_from(d.params);
    if (argc > 1) op.G = std::atof(argv[1]);

    const auto nb = snr(d, op, model);
    std::printf("f_EB      %.4f MHz\n", d.omega_EB() / kTwoPi * 1e-6);
    std::printf("Q_EB      %.3e  (T = %.0f mK, x3 = %.0e)\n", nb.Q_EB, op.T * 1e3, op.x3);
    std::printf("F_mag     %.3e N\n", nb.F_mag);
    std::printf("F_th      %.3e N\n", nb.F_th);
    std::printf("F_shot    %.3e N\n", nb.F_shot);
    std::printf("F_rpsn    %.3e N\n", nb.F_rpsn_equiv);
    std::printf("SNR       %.2f  (quadrature %.2f)\n\n", nb.snr, nb.snr_quadrature);

    std::printf("%6s %12s %10s\n", "T[mK]", "Q_EB", "SNR");
    for (double T_mK = 10.0; T_mK <= 100.0; T_mK += 10.0) {
        op.T = T_mK * 1e-3;
        const auto r = snr(d, op, model);
        std::printf("%6.0f %12.4e %10.4f\n", T_mK, r.Q_EB, r.snr);
    }
}

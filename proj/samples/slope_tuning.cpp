// Walk the control phase phi2 downward and watch the interferogram sharpen:
// the maximum slope grows far past the Michelson ceiling of 1/2 while the
// curve stays fully visible.

#include <cstdio>

#include "gmi/gmi.hpp"

int main() {
    std::printf("%8s  %12s  %12s  %10s\n", "phi2", "max |dR/dp1|", "at phi1", "visibility");
    for (double phi2 : {gmi::pi, 2.0, 1.0, 0.5, 0.25, 0.125}) {
        gmi::SweepSpec spec;
        spec.phi2 = phi2;
        spec.phi1_start = -gmi::pi;
        spec.phi1_end = gmi::pi;
        spec.points = 2001;
        const auto slope = gmi::refined_max_slope(spec);
        const double vis = gmi::visibility(gmi::sweep(spec));
        std::printf("%8.4f  %12.4f  %12.4f  %10.6f\n", phi2, slope.slope, slope.at_phi1, vis);
    }

    const auto scan = gmi::slope_scan(7.0);
    std::printf("\nfirst phi2 with slope >= 7: %.5f (slope %.2f)\n",
                scan.phi2, scan.slope.slope);

    const auto rep = gmi::enhancement_report(scan.phi2, 0.0, 1e-3);
    std::printf("intensity response vs Michelson at delta_phi = 1e-3: %.1fx\n",
                rep.intensity_ratio);
    return 0;
}

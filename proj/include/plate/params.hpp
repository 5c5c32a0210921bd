#ifndef PLATE_PARAMS_HPP
#define PLATE_PARAMS_HPP

#include "plate/errors.hpp"

namespace plate {

// Physical coefficients of the generalized plate equation
//   rho_h w_tt = -K0 w + T lap w - D bilap w - K1 w_t + T1 lap w_t + F.
struct PlateParams {
    double rho_h = 1.0; // areal density (mass/area)
    double K0 = 0.0;    // linear restoring stiffness
    double T = 0.0;     // tension
    double D = 0.0;     // flexural rigidity
    double K1 = 0.0;    // linear damping
    double T1 = 0.0;    // visco-elastic damping
    double nu = 0.0;    // Poisson ratio

    void validate() const {
        if (!(rho_h > 0)) throw ConfigError("rho_h must be positive");
        if (K0 < 0 || T < 0 || D < 0 || K1 < 0 || T1 < 0)
            throw ConfigError("stiffness/damping coefficients must be nonnegative");
        if (nu < 0 || nu >= 0.5) throw ConfigError("Poisson ratio must lie in [0, 0.5)");
    }
};

// D = E h^3 / (12 (1 - nu^2)).  E=69 GPa, h=1 mm, nu=0.33 gives 6.4527.
inline double flexural_rigidity(double E, double h_thick, double nu) {
    return E * h_thick * h_thick * h_thick / (12.0 * (1.0 - nu * nu));
}

} // namespace plate

#endif

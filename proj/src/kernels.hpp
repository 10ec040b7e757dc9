#ifndef NCIHF_KERNELS_HPP
#define NCIHF_KERNELS_HPP

#include <array>

#include "params.hpp"
#include "vec3.hpp"

namespace ncihf {
namespace kernels {

inline constexpr double kDefaultPoleTol = 1e-12;  // in units of delta

// Distance from z to the pole lattice 2*i*delta*Z.
double pole_distance(cplx z, const Params& p);
// Distance from z to the shifted lattice i*delta + 2*i*delta*Z.
double pole_distance_shifted(cplx z, const Params& p);

// alpha(z) = kappa coth(kappa z); odd, 2*i*delta periodic.
cplx alpha(cplx z, const Params& p, double pole_tol = kDefaultPoleTol);
// alpha_tilde(z) = alpha(z + i delta) = kappa tanh(kappa z).
cplx alpha_tilde(cplx z, const Params& p, double pole_tol = kDefaultPoleTol);
// V(z) = kappa^2 / sinh^2(kappa z) = -alpha'(z).
cplx pot_V(cplx z, const Params& p, double pole_tol = kDefaultPoleTol);
// V~(z) = V(z + i delta) = -kappa^2 / cosh^2(kappa z).
cplx pot_Vt(cplx z, const Params& p, double pole_tol = kDefaultPoleTol);
// V'(z) = -2 kappa^3 cosh(kappa z) / sinh^3(kappa z).
cplx pot_V_prime(cplx z, const Params& p, double pole_tol = kDefaultPoleTol);

// A_r(z) = (alpha(z + r i delta/2), alpha(z - r i delta/2)).
Pair<cplx> a_pair(cplx z, Chir r, const Params& p, double pole_tol = kDefaultPoleTol);
// d/dz A_r(z) = (-V(z + r i delta/2), -V(z - r i delta/2)) = -d/da A_r evaluated at z = x-a.
Pair<cplx> d_a_pair(cplx z, Chir r, const Params& p, double pole_tol = kDefaultPoleTol);

// Absolute residuals of the seven functional identities used by the soliton
// construction:
//   [0] alpha(z-a)alpha(z-b) - alpha(a-b)(alpha(z-a)-alpha(z-b)) - kappa^2
//   [1] alpha(z - i delta) - alpha(z + i delta)
//   [2] V(z) - alpha(z)^2 + kappa^2
//   [3] alpha(z-a)alpha'(z-b) + alpha(a-b)alpha'(z-b) - alpha'(a-b)(alpha(z-a)-alpha(z-b))
//   [4] A_r(z-a) o A_s(z-b) - alpha(a-b+(r-s)i delta/2)(A_r - A_s) - kappa^2 (1,1)
//   [5] A_r o A_r + dz A_r - kappa^2 (1,1)
//   [6] A_r(z-a) o dz A_s(z-b) + alpha(a-b+(r-s)i delta/2) dz A_s
//       + V(a-b+(r-s)i delta/2)(A_r - A_s)
// Entries [4]-[6] are maxima over both chirality choices and both components.
std::array<double, 7> identity_residuals(cplx z, cplx a, cplx b, const Params& p,
                                         double pole_tol = kDefaultPoleTol);

}  // namespace kernels
}  // namespace ncihf

#endif

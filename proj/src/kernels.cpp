#include "kernels.hpp"

#include <algorithm>
#include <cmath>

namespace ncihf {
namespace kernels {

namespace {

// coth and tanh with saturation for large |Re|; avoids overflow of
// cosh/sinh while keeping full precision (the correction term 2 e^{-2w}
// carries the whole deviation from +-1 once |Re w| > 19).
cplx coth_c(cplx w) {
    const double x = w.real();
    if (std::abs(x) > 19.0) {
        const double sgn = x > 0.0 ? 1.0 : -1.0;
        const cplx q = std::exp(-2.0 * sgn * w);
        return sgn * (1.0 + 2.0 * q * (1.0 + q));
    }
    return std::cosh(w) / std::sinh(w);
}

cplx tanh_c(cplx w) {
    const double x = w.real();
    if (std::abs(x) > 19.0) {
        const double sgn = x > 0.0 ? 1.0 : -1.0;
        const cplx q = std::exp(-2.0 * sgn * w);
        return sgn * (1.0 - 2.0 * q * (1.0 - q));
    }
    return std::tanh(w);
}

// 1/sinh and 1/cosh, underflowing gracefully to 0 for large |Re|.
cplx inv_sinh(cplx w) {
    const double x = w.real();
    if (std::abs(x) > 19.0) {
        const double sgn = x > 0.0 ? 1.0 : -1.0;
        const cplx q = std::exp(-sgn * w);
        return sgn * 2.0 * q * (1.0 + q * q);
    }
    return 1.0 / std::sinh(w);
}

cplx inv_cosh(cplx w) {
    const double x = w.real();
    if (std::abs(x) > 19.0) {
        const cplx q = std::exp(-(x > 0.0 ? 1.0 : -1.0) * w);
        return 2.0 * q * (1.0 - q * q);
    }
    return 1.0 / std::cosh(w);
}

void check_pole(double dist, double tol_units, const Params& p, const char* fn) {
    if (dist < tol_units * p.delta)
        throw PoleError(std::string(fn) + ": argument within pole tolerance of kernel pole");
}

}  // namespace

double pole_distance(cplx z, const Params& p) {
    const double period = 2.0 * p.delta;
    const double y = z.imag() - period * std::round(z.imag() / period);
    return std::hypot(z.real(), y);
}

double pole_distance_shifted(cplx z, const Params& p) {
    return pole_distance(z - cplx(0.0, p.delta), p);
}

cplx alpha(cplx z, const Params& p, double pole_tol) {
    check_pole(pole_distance(z, p), pole_tol, p, "alpha");
    return p.kappa * coth_c(p.kappa * z);
}

cplx alpha_tilde(cplx z, const Params& p, double pole_tol) {
    check_pole(pole_distance_shifted(z, p), pole_tol, p, "alpha_tilde");
    return p.kappa * tanh_c(p.kappa * z);
}

cplx pot_V(cplx z, const Params& p, double pole_tol) {
    check_pole(pole_distance(z, p), pole_tol, p, "pot_V");
    const cplx s = inv_sinh(p.kappa * z);
    return p.kappa * p.kappa * s * s;
}

cplx pot_Vt(cplx z, const Params& p, double pole_tol) {
    check_pole(pole_distance_shifted(z, p), pole_tol, p, "pot_Vt");
    const cplx c = inv_cosh(p.kappa * z);
    return -p.kappa * p.kappa * c * c;
}

cplx pot_V_prime(cplx z, const Params& p, double pole_tol) {
    check_pole(pole_distance(z, p), pole_tol, p, "pot_V_prime");
    const cplx s = inv_sinh(p.kappa * z);
    return -2.0 * p.kappa * p.kappa * p.kappa * coth_c(p.kappa * z) * s * s;
}

Pair<cplx> a_pair(cplx z, Chir r, const Params& p, double pole_tol) {
    const cplx shift(0.0, 0.5 * sign(r) * p.delta);
    return {alpha(z + shift, p, pole_tol), alpha(z - shift, p, pole_tol)};
}

Pair<cplx> d_a_pair(cplx z, Chir r, const Params& p, double pole_tol) {
    const cplx shift(0.0, 0.5 * sign(r) * p.delta);
    return {-pot_V(z + shift, p, pole_tol), -pot_V(z - shift, p, pole_tol)};
}

std::array<double, 7> identity_residuals(cplx z, cplx a, cplx b, const Params& p,
                                         double pole_tol) {
    if (std::abs(a - b) < pole_tol * p.delta)
        throw DegenerateArguments("identity_residuals: a == b");

    const double k2 = p.kappa * p.kappa;
    std::array<double, 7> res{};

    const cplx aza = alpha(z - a, p, pole_tol);
    const cplx azb = alpha(z - b, p, pole_tol);
    const cplx aab = alpha(a - b, p, pole_tol);
    res[0] = std::abs(aza * azb - aab * (aza - azb) - k2);

    res[1] = std::abs(alpha(z - cplx(0, p.delta), p, pole_tol) -
                      alpha(z + cplx(0, p.delta), p, pole_tol));

    res[2] = std::abs(pot_V(z, p, pole_tol) - alpha(z, p, pole_tol) * alpha(z, p, pole_tol) + k2);

    // alpha' = -V
    const cplx dzb = -pot_V(z - b, p, pole_tol);
    const cplx dab = -pot_V(a - b, p, pole_tol);
    res[3] = std::abs(aza * dzb + aab * dzb - dab * (aza - azb));

    const Chir chs[2] = {Chir::plus, Chir::minus};
    for (Chir r : chs) {
        const Pair<cplx> Ara = a_pair(z - a, r, p, pole_tol);
        const Pair<cplx> dAra = d_a_pair(z - a, r, p, pole_tol);
        // [5] A_r o A_r + dz A_r - kappa^2
        res[5] = std::max({res[5], std::abs(Ara.up * Ara.up + dAra.up - k2),
                           std::abs(Ara.dn * Ara.dn + dAra.dn - k2)});
        for (Chir s : chs) {
            const Pair<cplx> Asb = a_pair(z - b, s, p, pole_tol);
            const Pair<cplx> dAsb = d_a_pair(z - b, s, p, pole_tol);
            const cplx arg = a - b + cplx(0.0, 0.5 * p.delta * (sign(r) - sign(s)));
            const cplx al = alpha(arg, p, pole_tol);
            const cplx vv = pot_V(arg, p, pole_tol);
            // [4] product identity
            res[4] = std::max({res[4],
                               std::abs(Ara.up * Asb.up - al * (Ara.up - Asb.up) - k2),
                               std::abs(Ara.dn * Asb.dn - al * (Ara.dn - Asb.dn) - k2)});
            // [6] derivative product identity
            res[6] = std::max({res[6],
                               std::abs(Ara.up * dAsb.up + al * dAsb.up + vv * (Ara.up - Asb.up)),
                               std::abs(Ara.dn * dAsb.dn + al * dAsb.dn + vv * (Ara.dn - Asb.dn))});
        }
    }
    return res;
}

}  // namespace kernels
}  // namespace ncihf

#include "verify.hpp"

#include <algorithm>
#include <cmath>

#include "dynamics.hpp"
#include "fields.hpp"
#include "kernels.hpp"
#include "spectral.hpp"

namespace ncihf {
namespace verify {

double pde_residual_analytic(const CMState& st, std::span<const double> xs) {
    const auto U = fields::eval_fields(st, xs);
    const auto Ut = fields::eval_Ut(st, xs);
    const auto TUx = fields::eval_scriptT_Ux_closed(st, xs);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const CVec3 ru = Ut[i].u - wedge(U[i].u, TUx[i].up);
        const CVec3 rv = Ut[i].v - wedge(U[i].v, TUx[i].dn);
        worst = std::max({worst, max_abs(ru), max_abs(rv)});
    }
    return worst;
}

double pde_residual_spectral(const CMState& st, const Grid& g) {
    double outer = 0.0;
    for (const auto& q : st.particles) outer = std::max(outer, std::abs(q.a.real()));
    if (g.window < 40.0 * st.params.delta || 0.5 * g.window < outer + 5.0 * st.params.delta)
        throw WindowTooSmall(
            "pde_residual_spectral: window must be >= 40 delta and clear the poles by 5 delta");

    const auto xs = g.xs();
    const auto Ux = fields::eval_Ux(st, xs);
    PairFieldV F;
    F.up.resize(g.n);
    F.dn.resize(g.n);
    for (int m = 0; m < g.n; ++m) {
        F.up[m] = Ux[m].up;
        F.dn[m] = Ux[m].dn;
    }
    PairFieldV TUx = spectral::transform_script_T(F, st.params, g);

    // restore the k = 0 content of script-T U_x: its exact integral is
    // 2 kappa sum_j s_j in both components
    CVec3 mean_corr{};
    for (const auto& q : st.particles) mean_corr += q.s;
    mean_corr = (2.0 * st.params.kappa / g.window) * mean_corr;
    for (int m = 0; m < g.n; ++m) {
        TUx.up[m] += mean_corr;
        TUx.dn[m] += mean_corr;
    }

    const auto U = fields::eval_fields(st, xs);
    const auto Ut = fields::eval_Ut(st, xs);
    double worst = 0.0;
    for (int m = 0; m < g.n; ++m) {
        const CVec3 ru = Ut[m].u - wedge(U[m].u, TUx.up[m]);
        const CVec3 rv = Ut[m].v - wedge(U[m].v, TUx.dn[m]);
        worst = std::max({worst, max_abs(ru), max_abs(rv)});
    }
    return worst;
}

HamiltonianReport hamiltonianReport_impl(const CMState& st, const Grid& g) {
    double outer = 0.0;
    for (const auto& q : st.particles) outer = std::max(outer, std::abs(q.a.real()));
    if (0.5 * g.window < outer + 5.0 * st.params.delta)
        throw WindowTooSmall("hamiltonian_equivalence: window must clear the poles by 5 delta");

    const auto xs = g.xs();
    const auto U = fields::eval_fields(st, xs);
    const auto TUx = fields::eval_scriptT_Ux_closed(st, xs);
    const auto Ux = fields::eval_Ux(st, xs);
    const double dx = g.dx();

    HamiltonianReport rep;
    // (i) bilinear form: -(1/2) int ( u . (TUx)_1 - v . (TUx)_2 ) dx
    double acc = 0.0;
    for (int m = 0; m < g.n; ++m)
        acc += (dot(U[m].u, TUx[m].up) - dot(U[m].v, TUx[m].dn)).real();
    rep.bilinear = -0.5 * acc * dx;

    // (ii) double-integral form, diagonal replaced by its limit
    const Params& p = st.params;
    std::vector<double> Vrow(g.n), Vtrow(g.n);
    Vrow[0] = 0.0;
    Vtrow[0] = kernels::pot_Vt(cplx(0.0, 0.0), p).real();
    for (int d = 1; d < g.n; ++d) {
        const double y = d * dx;
        Vrow[d] = kernels::pot_V(cplx(y, 0.0), p).real();
        Vtrow[d] = kernels::pot_Vt(cplx(y, 0.0), p).real();
    }
    auto sqr = [](const CVec3& a) { return (a.x * a.x + a.y * a.y + a.z * a.z).real(); };
    double acc2 = 0.0;
    for (int i = 0; i < g.n; ++i) {
        // diagonal limit of the V-term plus the regular V~ term at x' = x
        acc2 += sqr(Ux[i].up) + sqr(Ux[i].dn) - Vtrow[0] * (2.0 * sqr(U[i].u - U[i].v));
        for (int j = i + 1; j < g.n; ++j) {
            const int d = j - i;
            const double t1 = sqr(U[j].u - U[i].u) + sqr(U[j].v - U[i].v);
            const double t2 = sqr(U[j].u - U[i].v) + sqr(U[j].v - U[i].u);
            acc2 += 2.0 * (Vrow[d] * t1 - Vtrow[d] * t2);
        }
    }
    rep.double_integral = acc2 * dx * dx / (4.0 * M_PI);
    rep.difference = std::abs(rep.bilinear - rep.double_integral);
    rep.closed_form = fields::total_energy(st);
    return rep;
}

HamiltonianReport hamiltonian_equivalence(const CMState& st, const Grid& g) {
    return hamiltonianReport_impl(st, g);
}

SpinCheckReport spin_conservation_check(const std::vector<CMState>& snapshots, const Grid& g) {
    SpinCheckReport rep;
    rep.max_drift = 0.0;
    rep.max_closed_form_gap = 0.0;
    const auto xs = g.xs();
    for (const CMState& st : snapshots) {
        double outer = 0.0;
        for (const auto& q : st.particles) outer = std::max(outer, std::abs(q.a.real()));
        if (0.5 * g.window < outer + 5.0 * st.params.delta)
            throw WindowTooSmall("spin_conservation_check: window too small for snapshot");
        const auto U = fields::eval_fields(st, xs);
        Vec3 acc{};
        for (int m = 0; m < g.n; ++m) acc += real(U[m].u) - real(U[m].v);
        acc = g.dx() * acc;
        rep.quadrature.push_back(acc);
        rep.max_closed_form_gap =
            std::max(rep.max_closed_form_gap, max_abs(acc - fields::total_spin(st)));
    }
    for (const Vec3& s : rep.quadrature)
        rep.max_drift = std::max(rep.max_drift, max_abs(s - rep.quadrature.front()));
    return rep;
}

}  // namespace verify
}  // namespace ncihf

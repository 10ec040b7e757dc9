#include "fields.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dynamics.hpp"
#include "kernels.hpp"

namespace ncihf {
namespace fields {

using kernels::a_pair;
using kernels::alpha;
using kernels::d_a_pair;
using kernels::pot_Vt;

std::vector<FieldSample> eval_fields(const CMState& st, std::span<const double> xs) {
    std::vector<FieldSample> out;
    out.reserve(xs.size());
    for (double x : xs) {
        CVec3 u = st.m0, v = st.m0;
        for (const Particle& q : st.particles) {
            const Pair<cplx> A = a_pair(x - q.a, q.r, st.params);
            const cplx ir = cplx(0, 1) * static_cast<double>(sign(q.r));
            u += (ir * A.up) * q.s;
            v += (ir * A.dn) * q.s;
        }
        out.push_back(FieldSample{x, u, v});
    }
    return out;
}

std::vector<FieldSample> eval_Ut(const CMState& st, std::span<const double> xs) {
    const Derivs d = rhs_first_order(st);
    std::vector<FieldSample> out;
    out.reserve(xs.size());
    for (double x : xs) {
        CVec3 ut{}, vt{};
        for (std::size_t j = 0; j < st.particles.size(); ++j) {
            const Particle& q = st.particles[j];
            const Pair<cplx> A = a_pair(x - q.a, q.r, st.params);
            const Pair<cplx> dA = d_a_pair(x - q.a, q.r, st.params);
            const cplx ir = cplx(0, 1) * static_cast<double>(sign(q.r));
            ut += (ir * A.up) * d.ds[j] - (ir * d.da[j] * dA.up) * q.s;
            vt += (ir * A.dn) * d.ds[j] - (ir * d.da[j] * dA.dn) * q.s;
        }
        out.push_back(FieldSample{x, ut, vt});
    }
    return out;
}

std::vector<PairSample> eval_scriptT_Ux_closed(const CMState& st, std::span<const double> xs) {
    std::vector<PairSample> out;
    out.reserve(xs.size());
    for (double x : xs) {
        CVec3 up{}, dn{};
        for (const Particle& q : st.particles) {
            const Pair<cplx> dA = d_a_pair(x - q.a, q.r, st.params);
            up += dA.up * q.s;
            dn += dA.dn * q.s;
        }
        out.push_back(PairSample{x, up, dn});
    }
    return out;
}

std::vector<PairSample> eval_Ux(const CMState& st, std::span<const double> xs) {
    std::vector<PairSample> out;
    out.reserve(xs.size());
    for (double x : xs) {
        CVec3 up{}, dn{};
        for (const Particle& q : st.particles) {
            const Pair<cplx> dA = d_a_pair(x - q.a, q.r, st.params);
            const cplx ir = cplx(0, 1) * static_cast<double>(sign(q.r));
            up += (ir * dA.up) * q.s;
            dn += (ir * dA.dn) * q.s;
        }
        out.push_back(PairSample{x, up, dn});
    }
    return out;
}

namespace {

// + particles of a physical state, with their indices
std::vector<std::size_t> plus_indices(const CMState& st) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < st.particles.size(); ++j)
        if (st.particles[j].r == Chir::plus) idx.push_back(j);
    return idx;
}

void require_physical(const CMState& st, const char* fn) {
    if (st.pairing_violation() > 1e-9 || max_abs(imag(st.m0)) > 1e-12 ||
        std::abs(st.rho - cplx(1.0)) > 1e-12)
        throw DegenerateArguments(std::string(fn) + ": requires a real physical state");
}

}  // namespace

std::vector<EnergyDensitySample> energy_density(const CMState& st,
                                                std::span<const double> xs) {
    require_physical(st, "energy_density");
    const auto plus = plus_indices(st);
    // Precompute the pair couplings s_j.s_k^* V~(a_j - a_k^*).
    std::vector<cplx> coup(plus.size() * plus.size());
    for (std::size_t j = 0; j < plus.size(); ++j)
        for (std::size_t k = 0; k < plus.size(); ++k) {
            const Particle& pj = st.particles[plus[j]];
            const Particle& pk = st.particles[plus[k]];
            coup[j * plus.size() + k] =
                dot(pj.s, conj(pk.s)) * pot_Vt(pj.a - std::conj(pk.a), st.params);
        }
    std::vector<EnergyDensitySample> out;
    out.reserve(xs.size());
    const cplx half_shift(0.0, 0.5 * st.params.delta);
    for (double x : xs) {
        cplx acc_u = 0.0, acc_v = 0.0;
        for (std::size_t j = 0; j < plus.size(); ++j) {
            const Particle& pj = st.particles[plus[j]];
            cplx row = 0.0;
            for (std::size_t k = 0; k < plus.size(); ++k) row += coup[j * plus.size() + k];
            acc_u += row * alpha(x - pj.a + half_shift, st.params);
            acc_v += row * alpha(x - pj.a - half_shift, st.params);
        }
        out.push_back(EnergyDensitySample{x, -2.0 * acc_u.imag(), 2.0 * acc_v.imag()});
    }
    return out;
}

double total_energy(const CMState& st) {
    require_physical(st, "total_energy");
    const auto plus = plus_indices(st);
    cplx e = 0.0;
    for (std::size_t j : plus)
        for (std::size_t k : plus) {
            const Particle& pj = st.particles[j];
            const Particle& pk = st.particles[k];
            e += dot(pj.s, conj(pk.s)) * pot_Vt(pj.a - std::conj(pk.a), st.params);
            e += dot(conj(pj.s), pk.s) * pot_Vt(std::conj(pj.a) - pk.a, st.params);
        }
    e *= -M_PI;
    if (std::abs(e.imag()) > 1e-12 * std::max(1.0, std::abs(e.real())))
        throw DegenerateArguments("total_energy: non-real result on physical state");
    return e.real();
}

Vec3 total_spin(const CMState& st) {
    require_physical(st, "total_spin");
    Vec3 acc{};
    for (std::size_t j : plus_indices(st)) acc += real(st.particles[j].s);
    return -2.0 * M_PI * acc;
}

OneSolitonDiagnostics one_soliton_diagnostics(const CMState& st) {
    require_physical(st, "one_soliton_diagnostics");
    const auto plus = plus_indices(st);
    if (plus.size() != 1)
        throw DegenerateArguments("one_soliton_diagnostics: state must have N = 1");
    const Particle& q = st.particles[plus[0]];
    const Params& p = st.params;
    const double aI = q.a.imag();
    const Vec3 sR = real(q.s), sI = imag(q.s);
    const double s2 = std::norm(q.s.x) + std::norm(q.s.y) + std::norm(q.s.z);
    const Vec3 m0 = real(st.m0);

    OneSolitonDiagnostics d;
    d.velocity = 2.0 * dot(wedge(sR, sI), m0) / s2;
    d.m_minus_inf = m0 + 2.0 * p.kappa * sI;
    d.m_plus_inf = m0 - 2.0 * p.kappa * sI;
    const double c = std::cos(2.0 * p.kappa * aI);
    d.chirality_defined = std::abs(aI - p.delta) > 1e-12 * p.delta;
    d.chirality = d.chirality_defined ? (aI < p.delta ? +1 : -1) : 0;
    if (d.chirality_defined) {
        d.circle_center = m0 - (2.0 * p.kappa * std::tan(2.0 * p.kappa * aI)) * sR;
        d.circle_radius = -2.0 * p.kappa * norm(sR) / c;
        d.energy = 2.0 * M_PI * p.kappa * p.kappa * s2 / (c * c);
        d.channel_split = 2.0 * (1.0 - aI / p.delta);
    } else {
        // static limit: great circle, equal channel weight
        d.circle_center = Vec3{0.0, 0.0, 0.0};
        d.circle_radius = 1.0;
        d.energy = 2.0 * M_PI * p.kappa * p.kappa * s2;  // cos^2 -> 1 at aI = delta
        d.channel_split = 0.0;
    }
    return d;
}

AsymptoticDiagnostics asymptotic_diagnostics(const CMState& st, double margin,
                                             double half_window, int n_quad) {
    require_physical(st, "asymptotic_diagnostics");
    const Params& p = st.params;
    auto plus = plus_indices(st);
    std::sort(plus.begin(), plus.end(), [&](std::size_t a, std::size_t b) {
        return st.particles[a].a.real() < st.particles[b].a.real();
    });
    const std::size_t N = plus.size();

    AsymptoticDiagnostics rep;
    rep.margin = margin;
    rep.all_separated = true;
    rep.total_energy = total_energy(st);

    // local vacua m_j = m0 - sum_{k<j} 2 kappa Im s_k + sum_{k>j} 2 kappa Im s_k
    const Vec3 m0 = real(st.m0);
    std::vector<Vec3> mj(N);
    for (std::size_t j = 0; j < N; ++j) {
        Vec3 acc = m0;
        for (std::size_t k = 0; k < N; ++k) {
            if (k == j) continue;
            const Vec3 term = (2.0 * p.kappa) * imag(st.particles[plus[k]].s);
            acc += (k < j ? -1.0 : 1.0) * term;
        }
        mj[j] = acc;
    }

    // energy partition bounds: midpoints of consecutive Re a, clipped to window
    std::vector<double> bounds(N + 1);
    bounds[0] = -half_window;
    bounds[N] = half_window;
    for (std::size_t j = 1; j < N; ++j)
        bounds[j] = 0.5 * (st.particles[plus[j - 1]].a.real() + st.particles[plus[j]].a.real());

    // single trapezoid pass over the whole window, accumulated per interval
    const double h = 2.0 * half_window / n_quad;
    std::vector<double> xs(n_quad + 1);
    for (int i = 0; i <= n_quad; ++i) xs[i] = -half_window + i * h;
    const auto eps = energy_density(st, xs);
    std::vector<double> e_int(N, 0.0);
    {
        std::size_t seg = 0;
        for (int i = 0; i < n_quad; ++i) {
            const double xm = 0.5 * (xs[i] + xs[i + 1]);
            while (seg + 1 < N && xm > bounds[seg + 1]) ++seg;
            e_int[seg] += 0.5 * h *
                          (eps[i].eps_u + eps[i].eps_v + eps[i + 1].eps_u + eps[i + 1].eps_v);
        }
    }
    rep.sum_energy = std::accumulate(e_int.begin(), e_int.end(), 0.0);

    for (std::size_t j = 0; j < N; ++j) {
        const Particle& q = st.particles[plus[j]];
        SolitonRecord r;
        r.index = static_cast<int>(j);
        r.re_a = q.a.real();
        r.im_a = q.a.imag();
        r.m_local = mj[j];
        const Vec3 sR = real(q.s), sI = imag(q.s);
        r.m_left = mj[j] + 2.0 * p.kappa * sI;
        r.m_right = mj[j] - 2.0 * p.kappa * sI;
        const double s2 = std::norm(q.s.x) + std::norm(q.s.y) + std::norm(q.s.z);
        r.velocity = 2.0 * dot(wedge(sR, sI), mj[j]) / s2;
        // circle center/radius evaluated from the exact fields at the center
        const double xc[1] = {r.re_a};
        const auto fs = eval_fields(st, xc);
        r.circle_center = 0.5 * (real(fs[0].u) + real(fs[0].v));
        r.circle_radius = 0.5 * norm(real(fs[0].u) - real(fs[0].v));
        r.energy = e_int[j];
        r.chirality = std::abs(r.im_a - p.delta) < 1e-12 ? 0 : (r.im_a < p.delta ? +1 : -1);
        const double gap_l = j == 0 ? std::numeric_limits<double>::infinity()
                                    : r.re_a - st.particles[plus[j - 1]].a.real();
        const double gap_r = j + 1 == N ? std::numeric_limits<double>::infinity()
                                        : st.particles[plus[j + 1]].a.real() - r.re_a;
        r.separated = gap_l > 2.0 * margin && gap_r > 2.0 * margin;
        rep.all_separated = rep.all_separated && r.separated;
        rep.solitons.push_back(r);
    }
    return rep;
}

}  // namespace fields
}  // namespace ncihf

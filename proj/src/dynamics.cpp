#include "dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "fields.hpp"
#include "kernels.hpp"

namespace ncihf {

using kernels::alpha;
using kernels::pot_V;
using kernels::pot_V_prime;

CMState CMState::physical(const DressedData& data, const std::vector<cplx>& poles,
                          const Params& p, double t) {
    CMState st(p);
    st.t = t;
    st.m0 = complexify(data.m0);
    st.rho = 1.0;
    const std::size_t N = poles.size();
    st.particles.resize(2 * N);
    for (std::size_t j = 0; j < N; ++j) {
        st.particles[j] = Particle{poles[j], data.s[j], Chir::plus};
        st.particles[j + N] = Particle{std::conj(poles[j]), conj(data.s[j]), Chir::minus};
    }
    return st;
}

std::size_t CMState::n_plus() const {
    std::size_t n = 0;
    for (const auto& q : particles)
        if (q.r == Chir::plus) ++n;
    return n;
}

double CMState::pairing_violation() const {
    const std::size_t N = n_plus();
    if (2 * N != particles.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const Particle& pp = particles[j];
        const Particle& pm = particles[j + N];
        if (pp.r != Chir::plus || pm.r != Chir::minus)
            return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(pm.a - std::conj(pp.a)));
        worst = std::max(worst, max_abs(pm.s - conj(pp.s)));
    }
    return worst;
}

double CMState::strip_excess() const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& q : particles)
        worst = std::max(worst, StripRegion{q.r}.excess(q.a, params));
    return worst;
}

namespace {

CVec3 interaction_sum(const CMState& st, std::size_t j) {
    const cplx I(0, 1);
    CVec3 w = I * st.m0;
    const Particle& pj = st.particles[j];
    for (std::size_t k = 0; k < st.particles.size(); ++k) {
        if (k == j) continue;
        const Particle& pk = st.particles[k];
        const cplx arg =
            pj.a - pk.a + cplx(0.0, 0.5 * st.params.delta * (sign(pj.r) - sign(pk.r)));
        w -= (static_cast<double>(sign(pk.r)) * alpha(arg, st.params)) * pk.s;
    }
    return w;
}

}  // namespace

cplx pole_velocity(const CMState& st, std::size_t j) {
    const Particle& pj = st.particles[j];
    const cplx sc = cdot(pj.s, pj.s);
    if (std::abs(sc) < 1e-14)
        throw DegenerateSpin("pole_velocity: s*.s vanishes");
    const CVec3 w = interaction_sum(st, j);
    // From s_j da_j/dt = -r_j s_j ^ w: contract with s_j^*.
    return -static_cast<double>(sign(pj.r)) * dot(wedge(conj(pj.s), pj.s), w) / sc;
}

Derivs rhs_first_order(const CMState& st) {
    const std::size_t P = st.particles.size();
    Derivs d;
    d.da.resize(P);
    d.ds.assign(P, CVec3{});
    for (std::size_t j = 0; j < P; ++j) {
        const Particle& pj = st.particles[j];
        for (std::size_t k = 0; k < P; ++k) {
            if (k == j) continue;
            const Particle& pk = st.particles[k];
            const double factor = 1.0 + sign(pj.r) * sign(pk.r);
            if (factor == 0.0) continue;
            const cplx arg =
                pj.a - pk.a + cplx(0.0, 0.5 * st.params.delta * (sign(pj.r) - sign(pk.r)));
            d.ds[j] -= (factor * pot_V(arg, st.params)) * wedge(pj.s, pk.s);
        }
        d.da[j] = pole_velocity(st, j);
    }
    return d;
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

using Vec = std::vector<cplx>;

Vec pack(const CMState& st) {
    Vec y;
    y.reserve(4 * st.particles.size());
    for (const auto& q : st.particles) {
        y.push_back(q.a);
        y.push_back(q.s.x);
        y.push_back(q.s.y);
        y.push_back(q.s.z);
    }
    return y;
}

void unpack(const Vec& y, CMState& st) {
    for (std::size_t j = 0; j < st.particles.size(); ++j) {
        st.particles[j].a = y[4 * j];
        st.particles[j].s = CVec3{y[4 * j + 1], y[4 * j + 2], y[4 * j + 3]};
    }
}

Vec eval_rhs(CMState& scratch, const Vec& y, double t) {
    unpack(y, scratch);
    scratch.t = t;
    const Derivs d = rhs_first_order(scratch);
    Vec f(y.size());
    for (std::size_t j = 0; j < scratch.particles.size(); ++j) {
        f[4 * j] = d.da[j];
        f[4 * j + 1] = d.ds[j].x;
        f[4 * j + 2] = d.ds[j].y;
        f[4 * j + 3] = d.ds[j].z;
    }
    return f;
}

}  // namespace

Trajectory integrate(const CMState& st0, double t_end, const IntegrateControls& ctl) {
    Trajectory traj;
    CMState scratch = st0;

    std::vector<double> outs = ctl.output_times;
    if (outs.empty()) outs = {t_end};
    const double dir = t_end >= st0.t ? 1.0 : -1.0;
    for (std::size_t i = 0; i + 1 < outs.size(); ++i)
        if ((outs[i + 1] - outs[i]) * dir < 0.0)
            throw ConfigError("integrate: output_times must be monotone toward t_end");

    const double min_step = ctl.min_step_factor * st0.params.delta;
    const std::size_t dim = 4 * st0.particles.size();

    Vec y = pack(st0);
    double t = st0.t;
    Vec f0 = eval_rhs(scratch, y, t);

    std::size_t next_out = 0;
    auto record = [&](const Vec& yy, double tt) {
        unpack(yy, scratch);
        scratch.t = tt;
        if (ctl.monitor_strips) {
            const double excess = scratch.strip_excess();
            if (excess > ctl.strip_tol_factor * st0.params.delta)
                throw StripExit("integrate: pole left its strip (excess=" +
                                    std::to_string(excess) + ")",
                                tt);
        }
        traj.max_pairing_violation =
            std::max(traj.max_pairing_violation, scratch.pairing_violation());
        traj.states.push_back(scratch);
    };
    while (next_out < outs.size() && (outs[next_out] - t) * dir <= 0.0) {
        record(y, outs[next_out]);
        ++next_out;
    }
    if (next_out >= outs.size()) return traj;

    // initial step size guess
    double h = dir * 0.01 * st0.params.delta;
    if (std::abs(t_end - t) < std::abs(h)) h = t_end - t;

    Vec k2v(dim), k3v(dim), k4v(dim), k5v(dim), k6v(dim), ytmp(dim), y1(dim);

    while ((t_end - t) * dir > 0.0) {
        if (std::abs(h) > std::abs(t_end - t)) h = t_end - t;
        bool accepted = false;
        Vec f1;
        while (!accepted) {
            if (std::abs(h) < min_step)
                throw StepFailure("integrate: step size underflow at t=" + std::to_string(t));
            for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * f0[i];
            k2v = eval_rhs(scratch, ytmp, t + c2 * h);
            for (std::size_t i = 0; i < dim; ++i)
                ytmp[i] = y[i] + h * (a31 * f0[i] + a32 * k2v[i]);
            k3v = eval_rhs(scratch, ytmp, t + c3 * h);
            for (std::size_t i = 0; i < dim; ++i)
                ytmp[i] = y[i] + h * (a41 * f0[i] + a42 * k2v[i] + a43 * k3v[i]);
            k4v = eval_rhs(scratch, ytmp, t + c4 * h);
            for (std::size_t i = 0; i < dim; ++i)
                ytmp[i] = y[i] + h * (a51 * f0[i] + a52 * k2v[i] + a53 * k3v[i] + a54 * k4v[i]);
            k5v = eval_rhs(scratch, ytmp, t + c5 * h);
            for (std::size_t i = 0; i < dim; ++i)
                ytmp[i] = y[i] + h * (a61 * f0[i] + a62 * k2v[i] + a63 * k3v[i] + a64 * k4v[i] +
                                      a65 * k5v[i]);
            k6v = eval_rhs(scratch, ytmp, t + h);
            for (std::size_t i = 0; i < dim; ++i)
                y1[i] = y[i] + h * (b1 * f0[i] + b3 * k3v[i] + b4 * k4v[i] + b5 * k5v[i] +
                                    b6 * k6v[i]);
            f1 = eval_rhs(scratch, y1, t + h);

            double err = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const cplx e = h * (e1 * f0[i] + e3 * k3v[i] + e4 * k4v[i] + e5 * k5v[i] +
                                    e6 * k6v[i] + e7 * f1[i]);
                const double sk =
                    ctl.atol + ctl.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
                const double q = std::abs(e) / sk;
                err += q * q;
            }
            err = std::sqrt(err / dim);

            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            fac = std::clamp(fac, 0.2, 5.0);
            if (err <= 1.0) {
                accepted = true;
                ++traj.n_steps;
                // dense output within [t, t+h]
                while (next_out < outs.size() && (outs[next_out] - (t + h)) * dir <= 0.0 &&
                       (outs[next_out] - t) * dir >= 0.0) {
                    const double th = (outs[next_out] - t) / h;
                    Vec yd(dim);
                    for (std::size_t i = 0; i < dim; ++i) {
                        const cplx dy = y1[i] - y[i];
                        const cplx r1 = y[i];
                        const cplx r2 = dy;
                        const cplx r3 = h * f0[i] - dy;
                        const cplx r4 = dy - h * f1[i] - r3;
                        const cplx r5 = h * (d1 * f0[i] + d3 * k3v[i] + d4 * k4v[i] +
                                             d5 * k5v[i] + d6 * k6v[i] + d7 * f1[i]);
                        yd[i] = r1 + th * (r2 + (1.0 - th) * (r3 + th * (r4 + (1.0 - th) * r5)));
                    }
                    record(yd, outs[next_out]);
                    ++next_out;
                }
                t += h;
                y = y1;
                f0 = f1;
                h *= fac;
            } else {
                ++traj.n_rejected;
                h *= fac;
            }
        }
        if (next_out >= outs.size()) break;
    }
    return traj;
}

double newtonian_residual(const Trajectory& traj) {
    const auto& st = traj.states;
    if (st.size() < 5)
        throw ConfigError("newtonian_residual: need at least 5 states");
    const double h = st[1].t - st[0].t;
    for (std::size_t i = 0; i + 1 < st.size(); ++i)
        if (std::abs(st[i + 1].t - st[i].t - h) > 1e-9 * std::abs(h))
            throw ConfigError("newtonian_residual: states must be uniformly spaced");

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < st.size(); ++i) {
        const CMState& sm = st[i];
        for (std::size_t j = 0; j < sm.particles.size(); ++j) {
            const cplx addot =
                (st[i + 1].particles[j].a - 2.0 * sm.particles[j].a + st[i - 1].particles[j].a) /
                (h * h);
            cplx rhs = 0.0;
            for (std::size_t k = 0; k < sm.particles.size(); ++k) {
                if (k == j) continue;
                const double factor =
                    1.0 + sign(sm.particles[j].r) * sign(sm.particles[k].r);
                if (factor == 0.0) continue;
                rhs -= factor * dot(sm.particles[j].s, sm.particles[k].s) *
                       pot_V_prime(sm.particles[j].a - sm.particles[k].a, sm.params);
            }
            worst = std::max(worst, std::abs(addot - rhs));
        }
    }
    return worst;
}

MonitorReport conserved_monitors(const Trajectory& traj) {
    MonitorReport rep;
    if (traj.states.empty()) return rep;
    double emin = std::numeric_limits<double>::infinity();
    double emax = -emin;
    for (const CMState& st : traj.states) {
        MonitorSample ms;
        ms.t = st.t;
        for (const auto& q : st.particles)
            (q.r == Chir::plus ? ms.sum_s_plus : ms.sum_s_minus) += q.s;
        ms.energy = fields::total_energy(st);
        ms.max_constraint = 0.0;
        for (std::size_t j = 0; j < st.particles.size(); ++j) {
            const CVec3 w = [&] {
                const cplx I(0, 1);
                CVec3 acc = I * st.m0;
                for (std::size_t k = 0; k < st.particles.size(); ++k) {
                    if (k == j) continue;
                    const auto& pk = st.particles[k];
                    const cplx arg = st.particles[j].a - pk.a +
                                     cplx(0.0, 0.5 * st.params.delta *
                                                   (sign(st.particles[j].r) - sign(pk.r)));
                    acc -= (static_cast<double>(sign(pk.r)) * alpha(arg, st.params)) * pk.s;
                }
                return acc;
            }();
            ms.max_constraint =
                std::max({ms.max_constraint, std::abs(dot(st.particles[j].s, w)),
                          std::abs(dot(st.particles[j].s, st.particles[j].s))});
        }
        emin = std::min(emin, ms.energy);
        emax = std::max(emax, ms.energy);
        rep.max_constraint = std::max(rep.max_constraint, ms.max_constraint);
        rep.samples.push_back(ms);
    }
    const MonitorSample& s0 = rep.samples.front();
    for (const MonitorSample& ms : rep.samples) {
        const CVec3 dp = ms.sum_s_plus - s0.sum_s_plus;
        const CVec3 dm = ms.sum_s_minus - s0.sum_s_minus;
        rep.max_drift_plus = Vec3{std::max(rep.max_drift_plus.x, std::abs(dp.x)),
                                  std::max(rep.max_drift_plus.y, std::abs(dp.y)),
                                  std::max(rep.max_drift_plus.z, std::abs(dp.z))};
        rep.max_drift_minus = Vec3{std::max(rep.max_drift_minus.x, std::abs(dm.x)),
                                   std::max(rep.max_drift_minus.y, std::abs(dm.y)),
                                   std::max(rep.max_drift_minus.z, std::abs(dm.z))};
    }
    rep.energy_drift_rel = (emax - emin) / std::max(1e-300, std::abs(emax));
    return rep;
}

std::vector<CollisionEvent> detect_collisions(const CMState& st0, double t0, double t1,
                                              double dt, const IntegrateControls& ctl) {
    IntegrateControls c = ctl;
    const int nt = static_cast<int>(std::round((t1 - t0) / dt));
    c.output_times.clear();
    for (int i = 0; i <= nt; ++i) c.output_times.push_back(t0 + i * dt);

    // Reach t0 first (the state may be specified at an interior time).
    Trajectory traj;
    if (st0.t != t0) {
        IntegrateControls c0 = ctl;
        c0.output_times = {t0};
        CMState start = integrate(st0, t0, c0).states.back();
        traj = integrate(start, t1, c);
    } else {
        traj = integrate(st0, t1, c);
    }

    std::vector<std::size_t> plus;
    for (std::size_t j = 0; j < st0.particles.size(); ++j)
        if (st0.particles[j].r == Chir::plus) plus.push_back(j);

    std::vector<CollisionEvent> events;
    for (std::size_t aj = 0; aj < plus.size(); ++aj) {
        for (std::size_t ak = aj + 1; ak < plus.size(); ++ak) {
            std::vector<double> sep(traj.states.size());
            for (std::size_t i = 0; i < traj.states.size(); ++i)
                sep[i] = std::abs(traj.states[i].particles[plus[aj]].a.real() -
                                  traj.states[i].particles[plus[ak]].a.real());
            for (std::size_t i = 1; i + 1 < sep.size(); ++i) {
                if (sep[i] < sep[i - 1] && sep[i] <= sep[i + 1]) {
                    const double dminus = sep[i] - sep[i - 1];
                    const double dplus = sep[i + 1] - sep[i];
                    const double denom = dplus - dminus;
                    double tref = traj.states[i].t;
                    if (denom > 0.0)
                        tref -= 0.5 * dt * (dplus + dminus) / denom;
                    const double before =
                        traj.states[i - 1].particles[plus[aj]].a.real() -
                        traj.states[i - 1].particles[plus[ak]].a.real();
                    const double after =
                        traj.states[i + 1].particles[plus[aj]].a.real() -
                        traj.states[i + 1].particles[plus[ak]].a.real();
                    events.push_back(CollisionEvent{tref, static_cast<int>(aj),
                                                    static_cast<int>(ak), sep[i],
                                                    before * after < 0.0});
                }
            }
        }
    }
    std::sort(events.begin(), events.end(),
              [](const CollisionEvent& a, const CollisionEvent& b) { return a.t < b.t; });
    return events;
}

}  // namespace ncihf

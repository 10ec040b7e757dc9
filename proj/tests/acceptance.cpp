// Acceptance suite: one line per criterion, exit 0 iff all pass.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fields.hpp"
#include "kernels.hpp"
#include "lax.hpp"
#include "oracles.hpp"
#include "spectral.hpp"
#include "states.hpp"
#include "verify.hpp"

using namespace ncihf;

namespace {

int n_pass = 0, n_fail = 0;

void report(int idx, bool pass, const std::string& name, const std::string& detail) {
    std::printf("[%2d] %s  %-28s %s\n", idx, pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    (pass ? n_pass : n_fail)++;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    return out;
}

std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

// half-ulp of a value printed with six significant digits
double print_tol(double v) {
    const double mag = std::floor(std::log10(std::abs(v)));
    return std::max(5e-7, 0.5 * std::pow(10.0, mag - 5.0));
}

struct Runs {
    CMState one = states::one_state();
    CMState two = states::two_state();
    CMState three = states::three_state();
    Trajectory traj_one, traj_two, traj_three;
};

Trajectory run(const CMState& st, double t0, double t1, int n_out) {
    IntegrateControls ctl;
    ctl.rtol = 1e-11;
    ctl.atol = 1e-13;
    std::vector<double> back, fwd;
    for (double t : linspace(t0, t1, n_out)) (t < 0 ? back : fwd).push_back(t);
    std::sort(back.begin(), back.end(), std::greater<>());
    Trajectory out;
    if (!back.empty()) {
        ctl.output_times = back;
        Trajectory tb = integrate(st, back.back(), ctl);
        std::reverse(tb.states.begin(), tb.states.end());
        out.states = std::move(tb.states);
    }
    if (!fwd.empty()) {
        ctl.output_times = fwd;
        Trajectory tf = integrate(st, fwd.back(), ctl);
        for (auto& s : tf.states) out.states.push_back(std::move(s));
    }
    return out;
}

}  // namespace

int main() {
    Runs R;
    R.traj_one = run(R.one, -5.0, 17.5, 46);
    R.traj_two = run(R.two, -5.0, 17.5, 46);
    R.traj_three = run(R.three, -5.0, 17.5, 46);
    const Params& P = states::P1();

    // ---- 1: constraint reproduction ---------------------------------------
    {
        const DressedData d1 = solve_constraints(states::one_spec());
        const DressedData d2 = solve_constraints(states::two_spec());
        const DressedData d3 = solve_constraints(states::three_spec());
        const double s2 = 1.0 / std::sqrt(2.0);
        double worst12 = std::abs(d1.m - std::sqrt(2.0 / 3.0));
        worst12 = std::max(worst12, max_abs(d1.X[0] - CVec3{cplx(0, -s2), 0.5, 0.5}));
        const double r7 = 1.0 / 7.0, q7 = std::sqrt(2.0) / 7.0;
        worst12 = std::max(worst12,
                           max_abs(d2.X[0] - CVec3{cplx(8 * r7, -10 * q7), cplx(10 * r7, 4 * q7),
                                                   cplx(10 * r7, 4 * q7)}));
        worst12 = std::max(
            worst12, max_abs(d2.X[1] - CVec3{cplx(-10 * r7, -4 * q7), cplx(-8 * r7, 10 * q7),
                                             cplx(-10 * r7, -4 * q7)}));
        worst12 = std::max(worst12, std::abs(d2.m - 1.0 / std::sqrt(17.0)));

        // published six-significant-digit values for the N=3 example;
        // tolerance = half an ulp of each printed value ("accurate up to the
        // last given digit"), floored at the stated 5e-7
        const double X3[9][2] = {{-0.618461, -1.04500}, {0.738925, -0.437318},
                                 {0.738925, -0.437318}, {0.774004, 0.779477},
                                 {1.10235, -1.09461},   {0.774004, 0.779477},
                                 {-0.195438, -1.09476}, {-1.03355, 0.410442},
                                 {-0.614496, -0.342159}};
        double worst3 = 0.0;  // normalized by the per-value tolerance
        for (int j = 0; j < 3; ++j) {
            const cplx comp[3] = {d3.X[j].x, d3.X[j].y, d3.X[j].z};
            for (int c = 0; c < 3; ++c) {
                const auto& e = X3[3 * j + c];
                worst3 = std::max(worst3, std::abs(comp[c].real() - e[0]) / print_tol(e[0]));
                worst3 = std::max(worst3, std::abs(comp[c].imag() - e[1]) / print_tol(e[1]));
            }
        }
        worst3 = std::max(worst3, std::abs(d3.m - 0.493378) / 5e-7);
        const bool pass = worst12 < 1e-12 && worst3 < 1.0;
        report(1, pass, "constraint reproduction",
               "N=1,2 err " + fmt(worst12) + " (tol 1e-12); N=3 err " + fmt(worst3) +
                   " printed-digit units");
    }

    // ---- 2: one-soliton velocity -------------------------------------------
    {
        const cplx v = pole_velocity(R.one, 0);
        const bool pass =
            std::abs(v.real() - std::sqrt(1.0 / 3.0)) < 1e-12 && std::abs(v.imag()) < 1e-14;
        report(2, pass, "one-soliton velocity",
               "v = " + fmt(v.real()) + ", Im " + fmt(v.imag()));
    }

    // ---- 3 + 4: exact-solution gate and norm constraint --------------------
    {
        const auto xs = linspace(-20.0, 20.0, 401);
        double r0 = 0.0, rt = 0.0, nrm = 0.0;
        for (const CMState* st : {&R.one, &R.two, &R.three})
            r0 = std::max(r0, verify::pde_residual_analytic(*st, xs));
        for (const Trajectory* tr : {&R.traj_one, &R.traj_two, &R.traj_three}) {
            for (const CMState& st : tr->states) {
                rt = std::max(rt, verify::pde_residual_analytic(st, xs));
                for (const auto& f : fields::eval_fields(st, xs))
                    nrm = std::max({nrm, std::abs(dot(f.u, f.u) - 1.0),
                                    std::abs(dot(f.v, f.v) - 1.0)});
            }
        }
        report(3, r0 < 1e-10 && rt < 1e-8, "exact-solution gate",
               "t=0 residual " + fmt(r0) + " (tol 1e-10), trajectory " + fmt(rt) +
                   " (tol 1e-8)");
        report(4, nrm < 1e-10, "norm constraint", "max |u.u-1|,|v.v-1| = " + fmt(nrm));
    }

    // ---- 5: conservation along the three-soliton run ----------------------
    {
        const MonitorReport mon = conserved_monitors(R.traj_three);
        double sdrift = 0.0;
        const Vec3 S0 = fields::total_spin(R.traj_three.states.front());
        for (const CMState& st : R.traj_three.states)
            sdrift = std::max(sdrift, max_abs(fields::total_spin(st) - S0));
        const double sum_drift =
            std::max(max_abs(mon.max_drift_plus), max_abs(mon.max_drift_minus));
        const bool pass =
            mon.energy_drift_rel < 1e-8 && sum_drift < 1e-8 && sdrift < 1e-8;
        report(5, pass, "conservation",
               "dE/E " + fmt(mon.energy_drift_rel) + ", d(sum s) " + fmt(sum_drift) +
                   ", dS " + fmt(sdrift));
    }

    // ---- 6: collision times -------------------------------------------------
    {
        IntegrateControls ctl;
        ctl.rtol = 1e-10;
        ctl.atol = 1e-12;
        const auto events = detect_collisions(R.three, -5.0, 17.5, 0.01, ctl);
        auto found = [&](double t, double tol) {
            for (const auto& e : events)
                if (std::abs(e.t - t) < tol) return true;
            return false;
        };
        const bool pass = found(1.03, 0.05) && found(3.30, 0.05) && found(15.01, 0.10);
        std::string detail = "events:";
        for (const auto& e : events)
            detail += " t=" + fmt(e.t) + "(" + std::to_string(e.j + 1) +
                      std::to_string(e.k + 1) + ")";
        report(6, pass, "collision times", detail + "  [expected 1.03, 3.30, 15.01]");
    }

    // ---- 7: energy consistency ----------------------------------------------
    {
        double quad_rel = 0.0;
        for (const CMState* st : {&R.two, &R.three}) {
            const auto xs = linspace(-30.0, 30.0, 1 << 14);
            const auto eps = fields::energy_density(*st, xs);
            double acc = 0.0;
            const double h = xs[1] - xs[0];
            for (std::size_t i = 0; i + 1 < xs.size(); ++i)
                acc += 0.5 * h *
                       (eps[i].eps_u + eps[i].eps_v + eps[i + 1].eps_u + eps[i + 1].eps_v);
            quad_rel =
                std::max(quad_rel, std::abs(acc - fields::total_energy(*st)) /
                                       fields::total_energy(*st));
        }
        // one-soliton profile: unit mass
        auto fprof = [&](double x) {
            return -(4.0 * P.kappa / M_PI) * std::cosh(2.0 * P.kappa * x) *
                   std::cos(1.5 * M_PI) /
                   (std::cosh(4.0 * P.kappa * x) + std::cos(3.0 * M_PI));
        };
        const double mass = oracles::adaptive_simpson(fprof, -30.0, 30.0, 1e-13);
        // E1 = pi R^2 and channel split over the stated aI values
        double e_pr2 = 0.0, split_err = 0.0;
        for (double aI : {0.6, 0.75, 1.25}) {
            const double s2 = 1.0 / std::sqrt(2.0);
            const DressedData d = one_soliton_closed_form(
                Vec3{0, 0, 1}, cplx(0.0, aI), Vec3{0.0, -s2, s2}, P);
            const CMState st = CMState::physical(d, {cplx(0.0, aI)}, P);
            const auto diag = fields::one_soliton_diagnostics(st);
            e_pr2 = std::max(e_pr2, std::abs(diag.energy -
                                             M_PI * diag.circle_radius * diag.circle_radius));
            auto eu = [&](double x) {
                return fields::energy_density(st, std::vector<double>{x})[0].eps_u;
            };
            auto ev = [&](double x) {
                return fields::energy_density(st, std::vector<double>{x})[0].eps_v;
            };
            const double Eu = oracles::adaptive_simpson(eu, -35.0, 35.0, 1e-13);
            const double Ev = oracles::adaptive_simpson(ev, -35.0, 35.0, 1e-13);
            split_err =
                std::max(split_err, std::abs((Eu - Ev) / (Eu + Ev) - 2.0 * (1.0 - aI)));
        }
        const bool pass = quad_rel < 1e-6 && std::abs(mass - 1.0) < 1e-8 &&
                          e_pr2 < 1e-10 && split_err < 1e-10;
        report(7, pass, "energy consistency",
               "quad " + fmt(quad_rel) + ", mass-1 " + fmt(mass - 1.0) + ", E-piR2 " +
                   fmt(e_pr2) + ", split " + fmt(split_err));
    }

    // ---- 8: operator identities ----------------------------------------------
    {
        std::mt19937 rng(2024);
        const Grid g(40.0, 4096);
        // script-T squared on random zero-mean band-limited pair
        std::normal_distribution<double> nd;
        PairFieldC F;
        F.up.assign(g.n, 0.0);
        F.dn.assign(g.n, 0.0);
        for (int q = 1; q <= 40; ++q) {
            const cplx cu(nd(rng), nd(rng)), cv(nd(rng), nd(rng));
            const double k = 2.0 * M_PI * q / g.window;
            for (int m = 0; m < g.n; ++m) {
                const cplx e = std::exp(cplx(0.0, k * g.x(m)));
                F.up[m] += cu * e + std::conj(cu * e);
                F.dn[m] += cv * e + std::conj(cv * e);
            }
        }
        const PairFieldC TTF =
            spectral::transform_script_T(spectral::transform_script_T(F, P, g), P, g);
        double t2 = 0.0;
        for (int m = 0; m < g.n; ++m)
            t2 = std::max({t2, std::abs(TTF.up[m] + F.up[m]), std::abs(TTF.dn[m] + F.dn[m])});

        // eigen-relation on a kernel difference at the stated grid
        double eig = 0.0;
        {
            const cplx a(0.3, 0.9), b(-1.2, 1.1);
            PairFieldC D;
            D.up.resize(g.n);
            D.dn.resize(g.n);
            for (int m = 0; m < g.n; ++m) {
                const auto Aa = kernels::a_pair(g.x(m) - a, Chir::plus, P);
                const auto Ab = kernels::a_pair(g.x(m) - b, Chir::plus, P);
                D.up[m] = Aa.up - Ab.up;
                D.dn[m] = Aa.dn - Ab.dn;
            }
            const PairFieldC TD = spectral::transform_script_T(D, P, g);
            cplx mu = 0.0, md = 0.0, nu = 0.0, ndn = 0.0;
            for (int m = 0; m < g.n; ++m) {
                mu += TD.up[m];
                md += TD.dn[m];
                nu += D.up[m];
                ndn += D.dn[m];
            }
            mu /= g.n;
            md /= g.n;
            nu /= g.n;
            ndn /= g.n;
            for (int m = 0; m < g.n; ++m) {
                eig = std::max(eig, std::abs((TD.up[m] - mu) + cplx(0, 1) * (D.up[m] - nu)));
                eig = std::max(eig, std::abs((TD.dn[m] - md) + cplx(0, 1) * (D.dn[m] - ndn)));
            }
        }

        std::uniform_real_distribution<double> u10(-10.0, 10.0);
        double cot = 0.0;
        int done = 0;
        while (done < 1000) {
            const double a = u10(rng), b = u10(rng);
            if (std::abs(a) < 1e-3 || std::abs(b) < 1e-3 || std::abs(a - b) < 1e-3) continue;
            ++done;
            const auto r = spectral::cotlar_residual(a, b);
            cot = std::max({cot, r[0], r[1], r[2], r[3]});
        }

        std::uniform_real_distribution<double> u20(-20.0, 20.0);
        double red = 0.0;
        done = 0;
        while (done < 1000) {
            const double kd = u20(rng);
            if (std::abs(kd) < 1e-3) continue;
            ++done;
            const auto r = spectral::multiplier_identities(kd / P.delta, P);
            red = std::max(red, r.ihf_reduction);
        }

        std::vector<double> rT;
        for (double d : {0.1, 0.05, 0.025})
            rT.push_back(spectral::multiplier_identities(1.0, Params(d)).t_expansion);
        const double order = std::log(rT[0] / rT[2]) / std::log(4.0);

        const bool pass =
            t2 < 1e-10 && eig < 1e-6 && cot < 1e-12 && red < 1e-13 && order >= 3.0 - 0.1;
        report(8, pass, "operator identities",
               "T^2 " + fmt(t2) + ", eigrel " + fmt(eig) + ", cotlar " + fmt(cot) +
                   ", reduction " + fmt(red) + ", order " + fmt(order));
    }

    // ---- 9: Lax structure ------------------------------------------------------
    {
        const Grid gd(30.0, 512);
        const auto adj1 = lax::adjointness_residuals(lax::build_lax_matrix(R.one, gd));
        const auto adj2 = lax::adjointness_residuals(lax::build_lax_matrix(R.two, gd));
        const double graded = std::max(adj1.graded, adj2.graded);

        double i2rel = 0.0;
        for (const CMState* st : {&R.one, &R.two}) {
            const double E = fields::total_energy(*st);
            const Vec3 S = fields::total_spin(*st);
            const double closed =
                8.0 / M_PI * E - 4.0 / (M_PI * M_PI) * P.kappa * P.kappa * dot(S, S);
            const double i2 = lax::trace_I2_direct(*st, Grid(30.0, 2048));
            i2rel = std::max(i2rel, std::abs(i2 - closed) / std::abs(closed));
        }

        // drift across the full three-soliton trajectory
        std::vector<CMState> snaps;
        for (double t : {-5.0, 0.0, 2.5, 8.5, 17.5})
            for (const CMState& st : R.traj_three.states)
                if (std::abs(st.t - t) < 1e-9) snaps.push_back(st);
        const Grid gt(48.0, 8192);
        double i2_min = 1e300, i2_max = -1e300, i3_max = 0.0;
        for (const CMState& st : snaps) {
            const double v = lax::trace_I2_direct(st, gt);
            i2_min = std::min(i2_min, v);
            i2_max = std::max(i2_max, v);
        }
        // I3 from the dense matrix at a resolvable snapshot scale
        for (const CMState& st : {snaps[2], snaps[3]}) {
            const auto tr = lax::lax_traces(lax::build_lax_matrix(st, Grid(48.0, 1024)), 3);
            i3_max = std::max(i3_max, std::abs(tr[1]));
        }
        const double Ethree = fields::total_energy(R.three);
        const Vec3 Sthree = fields::total_spin(R.three);
        const double closed3 = 8.0 / M_PI * Ethree -
                               4.0 / (M_PI * M_PI) * P.kappa * P.kappa * dot(Sthree, Sthree);
        const double i2_drift = (i2_max - i2_min) / std::abs(closed3);
        const double i3_scale = std::pow(std::abs(closed3), 1.5);
        const double i3_drift = i3_max / i3_scale;  // I3 vanishes identically here

        const auto sdrift = lax::isospectrality_drift(snaps, gt, 20);

        const bool pass = graded < 1e-8 && i2rel < 1e-3 && i2_drift < 1e-3 &&
                          i3_drift < 1e-3 && sdrift.max_rel_drift < 1e-3;
        report(9, pass, "Lax structure",
               "adj " + fmt(graded) + ", I2 " + fmt(i2rel) + ", I2 drift " + fmt(i2_drift) +
                   ", I3/scale " + fmt(i3_drift) + ", eig drift " + fmt(sdrift.max_rel_drift));
    }

    // ---- 10: property-based gates ----------------------------------------------
    {
        // gauge invariance: exercised against rotated frames
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> uphi(0.0, 2.0 * M_PI);
        const SolitonSpec spec = states::three_spec();
        const DressedData base = solve_constraints(spec);
        double gauge = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            const auto N = spec.solitons.size();
            std::vector<CVec3> n12(N);
            for (std::size_t j = 0; j < N; ++j) {
                const Frame f = orthonormal_frame(spec.solitons[j].n3);
                const double phi = uphi(rng);
                const Vec3 n1 = std::cos(phi) * f.n1 + std::sin(phi) * f.n2;
                const Vec3 n2 = std::cos(phi) * f.n2 - std::sin(phi) * f.n1;
                n12[j] = complexify(n1) + cplx(0, 1) * complexify(n2);
            }
            Eigen::MatrixXcd A(N, N), B(N, N);
            Eigen::VectorXcd C(N);
            B.setZero();
            const cplx I(0, 1);
            for (std::size_t j = 0; j < N; ++j) {
                const cplx aj = std::conj(spec.solitons[j].a);
                for (std::size_t k = 0; k < N; ++k) {
                    A(j, k) = -I * dot(conj(n12[j]), n12[k]) *
                              kernels::alpha_tilde(aj - spec.solitons[k].a, P) / P.kappa;
                    if (j != k)
                        B(j, k) = I * dot(conj(n12[j]), conj(n12[k])) *
                                  kernels::alpha(aj - std::conj(spec.solitons[k].a), P) /
                                  P.kappa;
                }
                C(j) = 2.0 * dot(spec.n0, conj(n12[j]));
            }
            Eigen::MatrixXcd M(2 * N, 2 * N);
            M.topLeftCorner(N, N) = A;
            M.topRightCorner(N, N) = B;
            M.bottomLeftCorner(N, N) = -B.conjugate();
            M.bottomRightCorner(N, N) = -A.conjugate();
            Eigen::VectorXcd rhs(2 * N);
            rhs.head(N) = C;
            rhs.tail(N) = -C.conjugate();
            const Eigen::VectorXcd y = M.partialPivLu().solve(rhs);
            Vec3 im_sum{};
            std::vector<CVec3> X(N);
            for (std::size_t j = 0; j < N; ++j) {
                X[j] = y(j) * n12[j];
                im_sum += imag(X[j]);
            }
            const double m = 1.0 / std::sqrt(1.0 + dot(im_sum, im_sum));
            gauge = std::max(gauge, std::abs(m - base.m));
            for (std::size_t j = 0; j < N; ++j)
                gauge = std::max(gauge, max_abs((m / (2.0 * P.kappa)) * X[j] - base.s[j]));
        }

        // time reversibility at 10x the integrator tolerance
        IntegrateControls ctl;
        ctl.rtol = 1e-10;
        ctl.atol = 1e-12;
        ctl.output_times = {8.0};
        const CMState mid = integrate(R.three, 8.0, ctl).states.back();
        ctl.output_times = {0.0};
        const CMState back = integrate(mid, 0.0, ctl).states.back();
        double rev = 0.0;
        for (std::size_t j = 0; j < R.three.particles.size(); ++j) {
            rev = std::max(rev, std::abs(back.particles[j].a - R.three.particles[j].a));
            rev = std::max(rev, max_abs(back.particles[j].s - R.three.particles[j].s));
        }

        // U_t against finite differences
        const auto xs = linspace(-6.0, 6.0, 25);
        const auto ut = fields::eval_Ut(R.two, xs);
        IntegrateControls ctl2;
        ctl2.rtol = 1e-12;
        ctl2.atol = 1e-14;
        const double h = 1e-5;
        ctl2.output_times = {h};
        const CMState stp = integrate(R.two, h, ctl2).states.back();
        ctl2.output_times = {-h};
        const CMState stm = integrate(R.two, -h, ctl2).states.back();
        const auto fp = fields::eval_fields(stp, xs);
        const auto fm = fields::eval_fields(stm, xs);
        double fd = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            fd = std::max(fd, max_abs((1.0 / (2.0 * h)) * (fp[i].u - fm[i].u) - ut[i].u));
            fd = std::max(fd, max_abs((1.0 / (2.0 * h)) * (fp[i].v - fm[i].v) - ut[i].v));
        }

        // Newtonian residual: second-order convergence in output spacing
        auto newt = [&](double hh) {
            IntegrateControls c;
            c.rtol = 1e-12;
            c.atol = 1e-14;
            c.output_times = linspace(1.0, 1.0 + 8.0 * hh, 9);
            return newtonian_residual(integrate(R.two, 1.0 + 8.0 * hh, c));
        };
        const double r1 = newt(1e-3), r2 = newt(2e-3);
        const double ratio = r2 / r1;

        const bool pass = gauge < 1e-12 && rev < 10.0 * 1e-9 && fd < 1e-7 && r1 < 1e-6 &&
                          ratio > 2.5 && ratio < 6.0;
        report(10, pass, "property gates",
               "gauge " + fmt(gauge) + ", reverse " + fmt(rev) + ", Ut-fd " + fmt(fd) +
                   ", newton " + fmt(r1) + " ratio " + fmt(ratio));
    }

    std::printf("ACCEPTANCE: %d/%d criteria passed\n", n_pass, n_pass + n_fail);
    return n_fail == 0 ? 0 : 1;
}

#ifndef NCIHF_DYNAMICS_HPP
#define NCIHF_DYNAMICS_HPP

#include <optional>
#include <vector>

#include "constraints.hpp"
#include "params.hpp"
#include "vec3.hpp"

namespace ncihf {

struct Particle {
    cplx a;
    CVec3 s;
    Chir r;
};

// Complete spin-pole state. The physical case carries 2N particles in
// conjugate pairs (a, s, +) / (a*, s*, -); the general complex case allows
// independent +/- families, complex m0 and rho != 1.
struct CMState {
    double t = 0.0;
    std::vector<Particle> particles;
    CVec3 m0;
    cplx rho = 1.0;
    Params params;

    CMState(const Params& p) : params(p) {}

    static CMState physical(const DressedData& data, const std::vector<cplx>& poles,
                            const Params& p, double t = 0.0);

    std::size_t n_plus() const;
    // max componentwise deviation from conjugate pairing (physical layout:
    // particle j+N must be the conjugate of particle j)
    double pairing_violation() const;
    // positive when some pole has left its strip; value is the worst excess
    double strip_excess() const;
};

cplx pole_velocity(const CMState& st, std::size_t j);

struct Derivs {
    std::vector<cplx> da;
    std::vector<CVec3> ds;
};
Derivs rhs_first_order(const CMState& st);

struct IntegrateControls {
    double rtol = 1e-10;
    double atol = 1e-12;
    std::vector<double> output_times;  // must be monotone toward t_end
    double min_step_factor = 1e-12;    // in units of delta
    double strip_tol_factor = 1e-6;    // in units of delta
    bool monitor_strips = true;
};

struct Trajectory {
    std::vector<CMState> states;
    double max_pairing_violation = 0.0;
    std::size_t n_steps = 0;
    std::size_t n_rejected = 0;
};

Trajectory integrate(const CMState& st0, double t_end, const IntegrateControls& ctl);

// Max modulus residual of the Newtonian form: centered second difference of
// a_j against -(1 + r_j r_k) s_j.s_k V'(a_j - a_k) summed over same-chirality
// partners. Requires >= 5 uniformly spaced states.
double newtonian_residual(const Trajectory& traj);

struct MonitorSample {
    double t;
    CVec3 sum_s_plus, sum_s_minus;
    double energy;                 // E_N (physical states)
    double max_constraint;         // worst second-constraint residual
};
struct MonitorReport {
    std::vector<MonitorSample> samples;
    Vec3 max_drift_plus, max_drift_minus;
    double energy_drift_rel = 0.0;
    double max_constraint = 0.0;
};
MonitorReport conserved_monitors(const Trajectory& traj);

struct CollisionEvent {
    double t;
    int j, k;           // 0-based indices among the + particles
    double separation;  // |Re a_j - Re a_k| at the minimum
    bool swapped;       // Re-ordering of the pair differs before/after
};

// Local minima of pairwise Re-pole separation among same-chirality poles,
// scanned at spacing dt over [t0, t1] and refined parabolically.
std::vector<CollisionEvent> detect_collisions(const CMState& st0, double t0, double t1,
                                              double dt, const IntegrateControls& ctl = {});

}  // namespace ncihf

#endif

#ifndef NCIHF_FIELDS_HPP
#define NCIHF_FIELDS_HPP

#include <span>
#include <vector>

#include "params.hpp"
#include "vec3.hpp"

namespace ncihf {

struct CMState;

namespace fields {

struct FieldSample {
    double x;
    CVec3 u, v;
};

// U(x) = m0 (1,1) + i sum_j r_j s_j A_{r_j}(x - a_j).
std::vector<FieldSample> eval_fields(const CMState& st, std::span<const double> xs);

// U_t = i sum_j r_j ( sdot_j A_{r_j} - s_j adot_j dz A_{r_j} ).
std::vector<FieldSample> eval_Ut(const CMState& st, std::span<const double> xs);

// script-T U_x = sum_j s_j dz A_{r_j}(x - a_j), closed form.
struct PairSample {
    double x;
    CVec3 up, dn;
};
std::vector<PairSample> eval_scriptT_Ux_closed(const CMState& st, std::span<const double> xs);

// U_x = i sum_j r_j s_j dz A_{r_j}(x - a_j) (decaying).
std::vector<PairSample> eval_Ux(const CMState& st, std::span<const double> xs);

struct EnergyDensitySample {
    double x;
    double eps_u, eps_v;
};
std::vector<EnergyDensitySample> energy_density(const CMState& st, std::span<const double> xs);

// E_N = -pi sum_{jk} ( s_j.s_k^* V~(a_j - a_k^*) + c.c. ); physical states.
double total_energy(const CMState& st);

// S = int (u - v) dx = -2 pi sum_j Re s_j (physical states).
Vec3 total_spin(const CMState& st);

struct OneSolitonDiagnostics {
    double velocity;
    Vec3 m_minus_inf, m_plus_inf;
    Vec3 circle_center;
    double circle_radius;
    double energy;
    double channel_split;  // (E_u - E_v)/(E_u + E_v) = 2 (1 - aI/delta)
    int chirality;         // +1, -1, or 0 when undefined (aI == delta)
    bool chirality_defined;
};
OneSolitonDiagnostics one_soliton_diagnostics(const CMState& st);

struct SolitonRecord {
    int index;        // position among + particles sorted by Re a
    double re_a, im_a;
    Vec3 m_local;     // local vacuum reference m_j
    Vec3 m_left, m_right;
    double velocity;
    Vec3 circle_center;
    double circle_radius;
    double energy;    // quadrature of eps over the midpoint-bounded interval
    int chirality;
    bool separated;   // margin condition satisfied on both sides
};
struct AsymptoticDiagnostics {
    std::vector<SolitonRecord> solitons;
    double margin;        // the separation parameter d
    bool all_separated;
    double total_energy;  // closed form, for the partition check
    double sum_energy;    // sum of per-soliton quadratures
};
// Quadrature window: [-half_window, half_window]; margin d in {delta/2, delta}.
AsymptoticDiagnostics asymptotic_diagnostics(const CMState& st, double margin,
                                             double half_window, int n_quad = 1 << 15);

}  // namespace fields
}  // namespace ncihf

#endif

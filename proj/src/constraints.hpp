#ifndef NCIHF_CONSTRAINTS_HPP
#define NCIHF_CONSTRAINTS_HPP

#include <Eigen/Dense>
#include <vector>

#include "params.hpp"
#include "vec3.hpp"

namespace ncihf {

// User-level free data for one soliton: a pole in the upper strip and the
// unit axis of its spin plane.
struct PoleAxis {
    cplx a;
    Vec3 n3;
};

struct SolitonSpec {
    Vec3 n0;
    std::vector<PoleAxis> solitons;
    Params params;

    void validate() const;  // throws ConfigError on bad data
    std::vector<cplx> poles() const;
};

struct Frame {
    Vec3 n1, n2;
};

// Deterministic frame: n1 is the normalized component of e_z orthogonal to
// n3 (e_x when n3 is within 1e-8 of +-e_z), n2 = n3 ^ n1.
Frame orthonormal_frame(const Vec3& n3);

struct ConstraintResiduals {
    std::vector<double> spin_null;  // |s_j . s_j|
    std::vector<double> second;     // |s_j . (i m0 - sum ...)|
    double background;              // |m0^2 + 4 kappa^2 (sum Im s)^2 - 1|
    double max() const;
};

struct DressedData {
    std::vector<CVec3> s;       // s_{j,0}
    std::vector<CVec3> X;       // X_j = 2 kappa s_j / m (frame-invariant)
    Vec3 m0;
    double m;
    std::vector<Frame> frames;  // the frames actually used
    ConstraintResiduals residuals;
    double condition_number;
};

struct LinearSystem {
    Eigen::MatrixXcd A, B;
    Eigen::VectorXcd C;
    Eigen::MatrixXcd stacked() const;  // [[A, B], [-B*, -A*]]
    Eigen::VectorXcd rhs() const;      // (C, -C*)
};

LinearSystem build_system(const SolitonSpec& spec);

struct SolveOptions {
    double cond_bound = 1e12;
    double conj_tol = 1e-10;
};

DressedData solve_constraints(const SolitonSpec& spec, const SolveOptions& opt = {});

ConstraintResiduals constraint_residuals(const std::vector<CVec3>& s,
                                         const std::vector<cplx>& poles, const Vec3& m0,
                                         const Params& p);

// Closed-form one-soliton data. For Im(a) == delta the linear system is
// singular but the limit is finite; limit_side selects Im(a) -> delta -+ 0
// (+1 approaches from below).
DressedData one_soliton_closed_form(const Vec3& n0, cplx a, const Vec3& n3, const Params& p,
                                    int limit_side = +1);

}  // namespace ncihf

#endif

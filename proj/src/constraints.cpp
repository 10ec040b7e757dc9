#include "constraints.hpp"

#include <algorithm>
#include <cmath>

#include "kernels.hpp"

namespace ncihf {

using kernels::alpha;
using kernels::alpha_tilde;

void SolitonSpec::validate() const {
    if (std::abs(norm(n0) - 1.0) > 1e-12)
        throw ConfigError("SolitonSpec: n0 must be a unit vector");
    const StripRegion upper{Chir::plus};
    for (std::size_t j = 0; j < solitons.size(); ++j) {
        if (std::abs(norm(solitons[j].n3) - 1.0) > 1e-12)
            throw ConfigError("SolitonSpec: axis n3 must be a unit vector");
        if (!upper.contains(solitons[j].a, params))
            throw ConfigError("SolitonSpec: pole must satisfy delta/2 < Im(a) < 3 delta/2");
        for (std::size_t k = 0; k < j; ++k)
            if (std::abs(solitons[j].a - solitons[k].a) <= 1e-10 * params.delta)
                throw ConfigError("SolitonSpec: poles must be pairwise distinct");
    }
}

std::vector<cplx> SolitonSpec::poles() const {
    std::vector<cplx> out;
    out.reserve(solitons.size());
    for (const auto& s : solitons) out.push_back(s.a);
    return out;
}

Frame orthonormal_frame(const Vec3& n3) {
    const Vec3 ez{0.0, 0.0, 1.0};
    const Vec3 ex{1.0, 0.0, 0.0};
    const Vec3 ref = std::abs(dot(n3, ez)) > 1.0 - 1e-8 ? ex : ez;
    const Vec3 n1 = normalized(ref - dot(ref, n3) * n3);
    return Frame{n1, wedge(n3, n1)};
}

LinearSystem build_system(const SolitonSpec& spec) {
    spec.validate();
    const auto N = static_cast<Eigen::Index>(spec.solitons.size());
    const Params& p = spec.params;

    std::vector<CVec3> n12(N);
    for (Eigen::Index j = 0; j < N; ++j) {
        const Frame f = orthonormal_frame(spec.solitons[j].n3);
        n12[j] = complexify(f.n1) + cplx(0, 1) * complexify(f.n2);
    }

    LinearSystem sys;
    sys.A.resize(N, N);
    sys.B.setZero(N, N);
    sys.C.resize(N);
    const cplx I(0, 1);
    for (Eigen::Index j = 0; j < N; ++j) {
        const cplx aj = std::conj(spec.solitons[j].a);
        for (Eigen::Index k = 0; k < N; ++k) {
            const cplx ak = spec.solitons[k].a;
            sys.A(j, k) = -I * dot(conj(n12[j]), n12[k]) * alpha_tilde(aj - ak, p) / p.kappa;
            if (j != k)
                sys.B(j, k) = I * dot(conj(n12[j]), conj(n12[k])) *
                              alpha(aj - std::conj(spec.solitons[k].a), p) / p.kappa;
        }
        sys.C(j) = 2.0 * dot(spec.n0, conj(n12[j]));
    }
    return sys;
}

Eigen::MatrixXcd LinearSystem::stacked() const {
    const Eigen::Index N = A.rows();
    Eigen::MatrixXcd M(2 * N, 2 * N);
    M.topLeftCorner(N, N) = A;
    M.topRightCorner(N, N) = B;
    M.bottomLeftCorner(N, N) = -B.conjugate();
    M.bottomRightCorner(N, N) = -A.conjugate();
    return M;
}

Eigen::VectorXcd LinearSystem::rhs() const {
    const Eigen::Index N = C.size();
    Eigen::VectorXcd b(2 * N);
    b.head(N) = C;
    b.tail(N) = -C.conjugate();
    return b;
}

ConstraintResiduals constraint_residuals(const std::vector<CVec3>& s,
                                         const std::vector<cplx>& poles, const Vec3& m0,
                                         const Params& p) {
    const std::size_t N = s.size();
    ConstraintResiduals r;
    r.spin_null.resize(N);
    r.second.resize(N);
    const cplx I(0, 1);
    Vec3 im_sum{};
    for (std::size_t j = 0; j < N; ++j) {
        r.spin_null[j] = std::abs(dot(s[j], s[j]));
        CVec3 w = I * complexify(m0);
        for (std::size_t k = 0; k < N; ++k) {
            if (k != j) w -= alpha(poles[j] - poles[k], p) * s[k];
            w += alpha_tilde(poles[j] - std::conj(poles[k]), p) * conj(s[k]);
        }
        r.second[j] = std::abs(dot(s[j], w));
        im_sum += imag(s[j]);
    }
    const double four_k2 = 4.0 * p.kappa * p.kappa;
    r.background = std::abs(dot(m0, m0) + four_k2 * dot(im_sum, im_sum) - 1.0);
    return r;
}

double ConstraintResiduals::max() const {
    double m = background;
    for (double v : spin_null) m = std::max(m, v);
    for (double v : second) m = std::max(m, v);
    return m;
}

DressedData solve_constraints(const SolitonSpec& spec, const SolveOptions& opt) {
    const LinearSystem sys = build_system(spec);
    const Eigen::Index N = sys.A.rows();
    const Eigen::MatrixXcd M = sys.stacked();
    const Eigen::VectorXcd b = sys.rhs();

    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    const double smin = svd.singularValues()(2 * N - 1);
    const double smax = svd.singularValues()(0);
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond < opt.cond_bound))
        throw SingularSystem("solve_constraints: stacked system is numerically singular", cond);

    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    Eigen::VectorXcd y = lu.solve(b);
    y += lu.solve(b - M * y);  // one round of iterative refinement

    const Eigen::VectorXcd X = y.head(N);
    const Eigen::VectorXcd Xc = y.tail(N);
    const double conj_err = (X.conjugate() - Xc).cwiseAbs().maxCoeff();
    if (conj_err > opt.conj_tol)
        throw ConjugacyViolation("solve_constraints: solution halves are not conjugate (err=" +
                                 std::to_string(conj_err) + ")");

    DressedData out;
    out.condition_number = cond;
    out.frames.resize(N);
    out.X.resize(N);
    Vec3 im_sum{};
    for (Eigen::Index j = 0; j < N; ++j) {
        out.frames[j] = orthonormal_frame(spec.solitons[j].n3);
        const CVec3 n12 =
            complexify(out.frames[j].n1) + cplx(0, 1) * complexify(out.frames[j].n2);
        out.X[j] = X(j) * n12;
        im_sum += imag(out.X[j]);
    }
    out.m = 1.0 / std::sqrt(1.0 + dot(im_sum, im_sum));
    out.m0 = out.m * spec.n0;
    out.s.resize(N);
    for (Eigen::Index j = 0; j < N; ++j)
        out.s[j] = (out.m / (2.0 * spec.params.kappa)) * out.X[j];
    out.residuals = constraint_residuals(out.s, spec.poles(), out.m0, spec.params);
    return out;
}

DressedData one_soliton_closed_form(const Vec3& n0, cplx a, const Vec3& n3, const Params& p,
                                    int limit_side) {
    const Frame f = orthonormal_frame(n3);
    const double aI = a.imag();
    const double c = std::cos(2.0 * p.kappa * aI);
    const double s_ = std::sin(2.0 * p.kappa * aI);
    const Vec3 n0_wedge_n3 = wedge(n0, n3);

    DressedData out;
    out.frames = {f};
    out.condition_number = 0.0;

    const double w = norm(n0_wedge_n3);
    if (std::abs(s_) < 1e-13) {
        // Im(a) = delta: s diverges while m -> 0 with a finite product.
        if (w < 1e-13)
            throw SingularSystem("one_soliton_closed_form: n0 parallel to n3 at Im(a)=delta", 0.0);
        const double mcot = (limit_side >= 0 ? -1.0 : 1.0) / w;  // lim m cot(2 kappa aI)
        out.m = 0.0;
        const CVec3 n12 = complexify(f.n1) + cplx(0, 1) * complexify(f.n2);
        out.s = {(-mcot / (2.0 * p.kappa)) * (dot(n0, conj(n12)) * n12)};
        out.X = {};  // X = 2 kappa s / m diverges in the limit; not reported
        out.m0 = Vec3{0.0, 0.0, 0.0};
        out.residuals = constraint_residuals(out.s, {a}, out.m0, p);
        return out;
    }

    const double cot = c / s_;
    const CVec3 n12 = complexify(f.n1) + cplx(0, 1) * complexify(f.n2);
    // m from m^2 + (2 kappa Im s)^2 = 1 with (2 kappa / m) Im s = cot * n0 ^ n3
    out.m = 1.0 / std::sqrt(1.0 + cot * cot * dot(n0_wedge_n3, n0_wedge_n3));
    out.s = {(-out.m * cot / (2.0 * p.kappa)) * (dot(n0, conj(n12)) * n12)};
    out.X = {(2.0 * p.kappa / out.m) * out.s[0]};
    out.m0 = out.m * n0;
    out.residuals = constraint_residuals(out.s, {a}, out.m0, p);
    return out;
}

}  // namespace ncihf

#include "lax.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dynamics.hpp"
#include "fields.hpp"
#include "kernels.hpp"

namespace ncihf {
namespace lax {

namespace {

using Mat2 = Eigen::Matrix2cd;

Mat2 pauli(const CVec3& w) {
    Mat2 m;
    m(0, 0) = w.z;
    m(0, 1) = w.x - cplx(0, 1) * w.y;
    m(1, 0) = w.x + cplx(0, 1) * w.y;
    m(1, 1) = -w.z;
    return m;
}

struct StateSamples {
    std::vector<CVec3> u, v, ux, vx;
};

StateSamples sample_state(const CMState& st, const Grid& g) {
    const auto xs = g.xs();
    const auto fs = fields::eval_fields(st, xs);
    const auto dfs = fields::eval_Ux(st, xs);
    StateSamples s;
    s.u.resize(g.n);
    s.v.resize(g.n);
    s.ux.resize(g.n);
    s.vx.resize(g.n);
    for (int m = 0; m < g.n; ++m) {
        s.u[m] = fs[m].u;
        s.v[m] = fs[m].v;
        s.ux[m] = dfs[m].up;
        s.vx[m] = dfs[m].dn;
    }
    return s;
}

void check_window(const CMState& st, const Grid& g) {
    double outer = 0.0;
    for (const auto& q : st.particles) outer = std::max(outer, std::abs(q.a.real()));
    if (0.5 * g.window < outer + 5.0 * st.params.delta)
        throw WindowTooSmall("lax: window edge must clear the outermost pole by 5 delta");
}

}  // namespace

Eigen::MatrixXcd build_lax_matrix(const CMState& st, const Grid& g) {
    if (g.n > 2048) throw ConfigError("build_lax_matrix: dense assembly capped at n = 2048");
    check_window(st, g);
    const StateSamples s = sample_state(st, g);
    const double w = g.dx() / M_PI;
    const Params& p = st.params;

    std::vector<Mat2> Pu(g.n), Pv(g.n);
    for (int m = 0; m < g.n; ++m) {
        Pu[m] = pauli(s.u[m]);
        Pv[m] = pauli(s.v[m]);
    }
    // kernel values as a function of the index offset
    std::vector<double> av(2 * g.n - 1), atv(2 * g.n - 1);
    for (int d = -(g.n - 1); d <= g.n - 1; ++d) {
        const double y = d * g.dx();
        av[d + g.n - 1] = d == 0 ? 0.0 : kernels::alpha(cplx(y, 0.0), p).real();
        atv[d + g.n - 1] = kernels::alpha_tilde(cplx(y, 0.0), p).real();
    }

    Eigen::MatrixXcd M(4 * g.n, 4 * g.n);
    for (int mi = 0; mi < g.n; ++mi) {
        for (int mj = 0; mj < g.n; ++mj) {
            Mat2 K11, K12, K21, K22;
            if (mi == mj) {
                K11 = pauli(s.ux[mi]);
                K22 = -pauli(s.vx[mi]);
                K12.setZero();
                K21.setZero();
            } else {
                const double al = av[mj - mi + g.n - 1];
                const double at = atv[mj - mi + g.n - 1];
                K11 = al * (Pu[mj] - Pu[mi]);
                K22 = al * (Pv[mi] - Pv[mj]);
                K12 = at * (Pu[mi] - Pv[mj]);
                K21 = at * (Pu[mj] - Pv[mi]);
            }
            M.block<2, 2>(4 * mi, 4 * mj) = w * K11;
            M.block<2, 2>(4 * mi, 4 * mj + 2) = w * K12;
            M.block<2, 2>(4 * mi + 2, 4 * mj) = w * K21;
            M.block<2, 2>(4 * mi + 2, 4 * mj + 2) = w * K22;
        }
    }
    return M;
}

AdjointnessResiduals adjointness_residuals(const Eigen::MatrixXcd& M) {
    const Eigen::Index n4 = M.rows();
    Eigen::VectorXd lam(n4);
    for (Eigen::Index i = 0; i < n4; ++i) lam(i) = (i % 4 < 2) ? 1.0 : -1.0;
    const Eigen::MatrixXcd Mh = M.adjoint();
    AdjointnessResiduals r;
    r.graded = (Mh - lam.asDiagonal() * M * lam.asDiagonal()).cwiseAbs().maxCoeff();
    r.plain = (Mh - M).cwiseAbs().maxCoeff();
    return r;
}

std::vector<cplx> lax_traces(const Eigen::MatrixXcd& M, int n_max) {
    if (n_max < 2 || n_max > 4) throw ConfigError("lax_traces: n_max must be in [2,4]");
    std::vector<cplx> out;
    const Eigen::MatrixXcd M2 = M * M;
    out.push_back(M2.trace());
    if (n_max >= 3) out.push_back((M2 * M).trace());
    if (n_max >= 4) out.push_back((M2 * M2).trace());
    return out;
}

double trace_I2_direct(const CMState& st, const Grid& g) {
    check_window(st, g);
    const StateSamples s = sample_state(st, g);
    const Params& p = st.params;
    const double w2 = (g.dx() / M_PI) * (g.dx() / M_PI);

    std::vector<double> a2(g.n), at2(g.n);
    for (int d = 0; d < g.n; ++d) {
        const double y = d * g.dx();
        a2[d] = d == 0 ? 0.0 : std::norm(kernels::alpha(cplx(y, 0.0), p));
        at2[d] = std::norm(kernels::alpha_tilde(cplx(y, 0.0), p));
    }
    auto sq = [](const CVec3& a) {
        return (a.x * a.x + a.y * a.y + a.z * a.z).real();
    };

    double acc = 0.0;
    // diagonal: tr(K(x,x)^2) = 2 (ux.ux + vx.vx)
    for (int m = 0; m < g.n; ++m) acc += 2.0 * (sq(s.ux[m]) + sq(s.vx[m]));
    // off-diagonal pairs (i<j), doubled by symmetry of the trace expansion
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
            const int d = j - i;
            const CVec3 du = s.u[j] - s.u[i];
            const CVec3 dv = s.v[j] - s.v[i];
            const CVec3 uv = s.u[i] - s.v[j];
            const CVec3 vu = s.u[j] - s.v[i];
            acc += 2.0 * 2.0 *
                   (a2[d] * (sq(du) + sq(dv)) - at2[d] * (sq(uv) + sq(vu)));
        }
    }
    return acc * w2;
}

// ---- matrix-free operator ---------------------------------------------------

LaxOperator::LaxOperator(const CMState& st, const Grid& g)
    : n_(g.n), scale_(g.dx() / M_PI) {
    check_window(st, g);
    const StateSamples s = sample_state(st, g);
    u_ = s.u;
    v_ = s.v;
    ux_ = s.ux;
    vx_ = s.vx;

    const int m = 2 * n_;
    buf_.assign(m, 0.0);
    plan_fwd_ = fftw_plan_dft_1d(m, reinterpret_cast<fftw_complex*>(buf_.data()),
                                 reinterpret_cast<fftw_complex*>(buf_.data()), FFTW_FORWARD,
                                 FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(m, reinterpret_cast<fftw_complex*>(buf_.data()),
                                 reinterpret_cast<fftw_complex*>(buf_.data()), FFTW_BACKWARD,
                                 FFTW_ESTIMATE);

    // padded kernel arrays: index offset d = j - i stored at (d + 2n) mod 2n
    const Params& p = st.params;
    std::vector<cplx> ka(m, 0.0), kat(m, 0.0);
    for (int d = -(n_ - 1); d <= n_ - 1; ++d) {
        const double y = d * g.dx();
        const int idx = (d + m) % m;
        ka[idx] = d == 0 ? 0.0 : kernels::alpha(cplx(y, 0.0), p).real();
        kat[idx] = kernels::alpha_tilde(cplx(y, 0.0), p).real();
    }
    std::copy(ka.begin(), ka.end(), buf_.begin());
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    fft_alpha_ = buf_;
    std::copy(kat.begin(), kat.end(), buf_.begin());
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    fft_alphat_ = buf_;
}

LaxOperator::~LaxOperator() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

// Linear convolutions of sig (length n) with the alpha and alpha~ kernels.
void LaxOperator::conv_pair(const std::vector<cplx>& sig, std::vector<cplx>& out_alpha,
                            std::vector<cplx>& out_alphat) const {
    const int m = 2 * n_;
    std::fill(buf_.begin(), buf_.end(), cplx(0.0));
    std::copy(sig.begin(), sig.end(), buf_.begin());
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    const std::vector<cplx> spec = buf_;

    for (int i = 0; i < m; ++i) buf_[i] = spec[i] * fft_alpha_[i];
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    out_alpha.assign(buf_.begin(), buf_.begin() + n_);
    for (cplx& v : out_alpha) v /= static_cast<double>(m);

    for (int i = 0; i < m; ++i) buf_[i] = spec[i] * fft_alphat_[i];
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    out_alphat.assign(buf_.begin(), buf_.begin() + n_);
    for (cplx& v : out_alphat) v /= static_cast<double>(m);
}

Eigen::MatrixXcd LaxOperator::apply(const Eigen::MatrixXcd& Y) const {
    const Eigen::Index cols = Y.cols();
    Eigen::MatrixXcd out(4 * n_, cols);
    std::vector<cplx> p1a(n_), p1b(n_), p2a(n_), p2b(n_);
    std::vector<cplx> q1a(n_), q1b(n_), q2a(n_), q2b(n_);
    std::vector<cplx> ca(n_), cat(n_);
    std::vector<cplx> r1a(n_), r1b(n_), r2a(n_), r2b(n_);

    for (Eigen::Index c = 0; c < cols; ++c) {
        for (int i = 0; i < n_; ++i) {
            p1a[i] = Y(4 * i, c);
            p1b[i] = Y(4 * i + 1, c);
            p2a[i] = Y(4 * i + 2, c);
            p2b[i] = Y(4 * i + 3, c);
        }
        auto mul_pauli = [&](const std::vector<CVec3>& w, const std::vector<cplx>& fa,
                             const std::vector<cplx>& fb, std::vector<cplx>& ga,
                             std::vector<cplx>& gb) {
            for (int i = 0; i < n_; ++i) {
                const CVec3& ww = w[i];
                ga[i] = ww.z * fa[i] + (ww.x - cplx(0, 1) * ww.y) * fb[i];
                gb[i] = (ww.x + cplx(0, 1) * ww.y) * fa[i] - ww.z * fb[i];
            }
        };
        // products u psi1, v psi2
        mul_pauli(u_, p1a, p1b, q1a, q1b);
        mul_pauli(v_, p2a, p2b, q2a, q2b);

        std::vector<cplx> A_up1a, At_up1a, A_up1b, At_up1b;
        conv_pair(q1a, A_up1a, At_up1a);
        conv_pair(q1b, A_up1b, At_up1b);
        std::vector<cplx> A_p1a, At_p1a, A_p1b, At_p1b;
        conv_pair(p1a, A_p1a, At_p1a);
        conv_pair(p1b, A_p1b, At_p1b);
        std::vector<cplx> A_vp2a, At_vp2a, A_vp2b, At_vp2b;
        conv_pair(q2a, A_vp2a, At_vp2a);
        conv_pair(q2b, A_vp2b, At_vp2b);
        std::vector<cplx> A_p2a, At_p2a, A_p2b, At_p2b;
        conv_pair(p2a, A_p2a, At_p2a);
        conv_pair(p2b, A_p2b, At_p2b);

        // row 1 = conv_a(u psi1) - u conv_a(psi1) - conv_at(v psi2) + u conv_at(psi2)
        //         + diagonal derivative limit
        mul_pauli(u_, A_p1a, A_p1b, r1a, r1b);
        mul_pauli(u_, At_p2a, At_p2b, r2a, r2b);
        std::vector<cplx> d1a(n_), d1b(n_);
        mul_pauli(ux_, p1a, p1b, d1a, d1b);
        for (int i = 0; i < n_; ++i) {
            out(4 * i, c) = scale_ * (A_up1a[i] - r1a[i] - At_vp2a[i] + r2a[i] + d1a[i]);
            out(4 * i + 1, c) = scale_ * (A_up1b[i] - r1b[i] - At_vp2b[i] + r2b[i] + d1b[i]);
        }
        // row 2 = conv_at(u psi1) - v conv_at(psi1) - conv_a(v psi2) + v conv_a(psi2)
        //         - diagonal derivative limit
        mul_pauli(v_, At_p1a, At_p1b, r1a, r1b);
        mul_pauli(v_, A_p2a, A_p2b, r2a, r2b);
        std::vector<cplx> d2a(n_), d2b(n_);
        mul_pauli(vx_, p2a, p2b, d2a, d2b);
        for (int i = 0; i < n_; ++i) {
            out(4 * i + 2, c) = scale_ * (At_up1a[i] - r1a[i] - A_vp2a[i] + r2a[i] - d2a[i]);
            out(4 * i + 3, c) = scale_ * (At_up1b[i] - r1b[i] - A_vp2b[i] + r2b[i] - d2b[i]);
        }
    }
    return out;
}

std::vector<cplx> leading_eigenvalues(const LaxOperator& op, int k, int subspace, int iters,
                                      unsigned seed) {
    const int dim = op.dim();
    const int m = std::min(subspace, dim);
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd Q(dim, m);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < m; ++j) Q(i, j) = cplx(nd(gen), nd(gen));
    for (int it = 0; it < iters; ++it) {
        Eigen::MatrixXcd Y = op.apply(Q);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Y);
        Q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, m);
    }
    const Eigen::MatrixXcd B = Q.adjoint() * op.apply(Q);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(B);
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + m);
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
    ev.resize(std::min<std::size_t>(k, ev.size()));
    return ev;
}

SpectrumDrift isospectrality_drift(const std::vector<CMState>& snapshots, const Grid& g, int k,
                                   double floor_rel) {
    SpectrumDrift rep;
    rep.max_rel_drift = 0.0;
    for (const CMState& st : snapshots) {
        LaxOperator op(st, g);
        rep.spectra.push_back(leading_eigenvalues(op, k));
    }
    if (rep.spectra.empty()) return rep;
    const auto& base = rep.spectra.front();
    const double lam1 = std::abs(base[0]);
    for (std::size_t i = 1; i < rep.spectra.size(); ++i) {
        const auto& cur = rep.spectra[i];
        std::vector<bool> used(cur.size(), false);
        for (const cplx lam : base) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t bestj = 0;
            for (std::size_t j = 0; j < cur.size(); ++j) {
                if (used[j]) continue;
                const double d = std::abs(lam - cur[j]);
                if (d < best) {
                    best = d;
                    bestj = j;
                }
            }
            used[bestj] = true;
            const double denom = std::abs(lam) > floor_rel * lam1 ? std::abs(lam) : lam1;
            rep.max_rel_drift = std::max(rep.max_rel_drift, best / denom);
        }
    }
    return rep;
}

}  // namespace lax
}  // namespace ncihf

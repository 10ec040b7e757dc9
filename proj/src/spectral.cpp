#include "spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

namespace ncihf {
namespace spectral {

namespace {

void fft_inplace(std::vector<cplx>& f, int direction) {
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(f.size()),
                                      reinterpret_cast<fftw_complex*>(f.data()),
                                      reinterpret_cast<fftw_complex*>(f.data()),
                                      direction, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

}  // namespace

void apply_multiplier(std::vector<cplx>& f, const Grid& g,
                      const std::function<cplx(double)>& mult) {
    if (static_cast<int>(f.size()) != g.n)
        throw ConfigError("apply_multiplier: sample count does not match grid");
    for (const cplx& v : f)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DegenerateArguments("apply_multiplier: non-finite input sample");
    fft_inplace(f, FFTW_FORWARD);
    f[0] = 0.0;
    for (int m = 1; m < g.n; ++m) f[m] *= mult(g.k(m));
    fft_inplace(f, FFTW_BACKWARD);
    const double inv_n = 1.0 / g.n;
    for (cplx& v : f) v *= inv_n;
}

void check_edges(const std::vector<cplx>& f, const char* fn) {
    const std::size_t n = f.size();
    const double jump = std::abs(f[0] - f[n - 1]);
    const double local =
        std::max(std::abs(f[1] - f[0]), std::abs(f[n - 1] - f[n - 2]));
    if (jump > 1e-8 + 2.0 * local)
        throw DegenerateArguments(std::string(fn) +
                                  ": input has a step background across the window edges; "
                                  "pass decaying data (derivatives or kernel differences)");
}

std::vector<cplx> transform_T(std::vector<cplx> f, const Params& p, const Grid& g) {
    check_edges(f, "transform_T");
    apply_multiplier(f, g, [&](double k) { return cplx(0.0, 1.0 / std::tanh(k * p.delta)); });
    return f;
}

std::vector<cplx> transform_Tt(std::vector<cplx> f, const Params& p, const Grid& g) {
    check_edges(f, "transform_Tt");
    apply_multiplier(f, g, [&](double k) { return cplx(0.0, 1.0 / std::sinh(k * p.delta)); });
    return f;
}

std::vector<cplx> hilbert(std::vector<cplx> f, const Grid& g) {
    check_edges(f, "hilbert");
    apply_multiplier(f, g, [](double k) { return cplx(0.0, k > 0 ? 1.0 : -1.0); });
    return f;
}

PairFieldC transform_script_T(const PairFieldC& F, const Params& p, const Grid& g) {
    PairFieldC out;
    std::vector<cplx> Tu = transform_T(F.up, p, g);
    std::vector<cplx> Tv = transform_T(F.dn, p, g);
    std::vector<cplx> Ttu = transform_Tt(F.up, p, g);
    std::vector<cplx> Ttv = transform_Tt(F.dn, p, g);
    out.up.resize(g.n);
    out.dn.resize(g.n);
    for (int m = 0; m < g.n; ++m) {
        out.up[m] = Tu[m] - Ttv[m];
        out.dn[m] = Ttu[m] - Tv[m];
    }
    return out;
}

PairFieldV transform_script_T(const PairFieldV& F, const Params& p, const Grid& g) {
    PairFieldV out;
    out.up.resize(g.n);
    out.dn.resize(g.n);
    std::vector<cplx> fu(g.n), fv(g.n);
    for (int c = 0; c < 3; ++c) {
        auto comp = [c](const CVec3& v) -> const cplx& {
            return c == 0 ? v.x : (c == 1 ? v.y : v.z);
        };
        auto compw = [c](CVec3& v) -> cplx& { return c == 0 ? v.x : (c == 1 ? v.y : v.z); };
        for (int m = 0; m < g.n; ++m) {
            fu[m] = comp(F.up[m]);
            fv[m] = comp(F.dn[m]);
        }
        PairFieldC res = transform_script_T(PairFieldC{fu, fv}, p, g);
        for (int m = 0; m < g.n; ++m) {
            compw(out.up[m]) = res.up[m];
            compw(out.dn[m]) = res.dn[m];
        }
    }
    return out;
}

MultiplierResiduals multiplier_identities(double k, const Params& p) {
    if (k == 0.0) throw DegenerateArguments("multiplier_identities: k must be nonzero");
    const double kd = k * p.delta;
    const double coth = 1.0 / std::tanh(kd);
    const double csch = 1.0 / std::sinh(kd);
    MultiplierResiduals r;
    r.ihf_reduction = std::abs(coth + csch - 1.0 / std::tanh(0.5 * kd));
    r.tanh_reduction = std::abs(coth - csch - std::tanh(0.5 * kd));
    r.t_expansion = std::abs(coth - 1.0 / kd - kd / 3.0);
    r.tt_expansion = std::abs(csch - 1.0 / kd + kd / 6.0);
    return r;
}

std::array<double, 4> cotlar_residual(double p_val, double p_prime) {
    const double q = p_val - p_prime;
    if (p_val == 0.0 || p_prime == 0.0 || q == 0.0)
        throw DegenerateArguments("cotlar_residual: p, p', p-p' must all be nonzero");
    const double cp = std::cosh(p_val), sp = std::sinh(p_val);
    const double cq = std::cosh(q), sq = std::sinh(q);
    const double cr = std::cosh(p_prime), sr = std::sinh(p_prime);

    auto rel = [](std::initializer_list<double> terms) {
        double sum = 0.0, scale = 0.0;
        for (double t : terms) {
            sum += t;
            scale = std::max(scale, std::abs(t));
        }
        return std::abs(sum) / scale;
    };
    return {
        rel({cp * sq * sr, -sp * cq * sr, -sp * sq * cr, cp * cq * cr, -1.0}),
        rel({sq * sr, -cp, cq * cr}),
        rel({sp * sr, -cp * cr, cq}),
        rel({sp * sq, -cp * cq, cr}),
    };
}

}  // namespace spectral
}  // namespace ncihf

#ifndef NCIHF_SPECTRAL_HPP
#define NCIHF_SPECTRAL_HPP

#include <array>
#include <functional>
#include <vector>

#include "grid.hpp"
#include "params.hpp"

namespace ncihf {
namespace spectral {

// Apply a Fourier multiplier in place. The k = 0 mode is always mapped to 0
// (the transforms annihilate constants); forward FFT carries no prefactor,
// inverse carries 1/n.
void apply_multiplier(std::vector<cplx>& f, const Grid& g,
                      const std::function<cplx(double)>& mult);

// Reject step-like backgrounds: edge values must agree up to 1e-8 plus twice
// the local sample-to-sample variation at the edges (so periodic and decaying
// inputs pass, tanh-like backgrounds do not).
void check_edges(const std::vector<cplx>& f, const char* fn);

// T: multiplier i coth(k delta).  T~: multiplier i / sinh(k delta).
std::vector<cplx> transform_T(std::vector<cplx> f, const Params& p, const Grid& g);
std::vector<cplx> transform_Tt(std::vector<cplx> f, const Params& p, const Grid& g);
// Hilbert transform: multiplier i sgn(k).
std::vector<cplx> hilbert(std::vector<cplx> f, const Grid& g);

// Matrix operator script-T acting on a pair: (T f1 - T~ f2, T~ f1 - T f2).
PairFieldC transform_script_T(const PairFieldC& F, const Params& p, const Grid& g);
PairFieldV transform_script_T(const PairFieldV& F, const Params& p, const Grid& g);

// Multiplier-level identity residuals at a single wavenumber:
//   ihf_reduction   | coth(kd) + csch(kd) - coth(kd/2) |
//   tanh_reduction  | coth(kd) - csch(kd) - tanh(kd/2) |
//   t_expansion     | coth(kd) - 1/(kd) - kd/3 |
//   tt_expansion    | csch(kd) - 1/(kd) + kd/6 |
struct MultiplierResiduals {
    double ihf_reduction;
    double tanh_reduction;
    double t_expansion;
    double tt_expansion;
};
MultiplierResiduals multiplier_identities(double k, const Params& p);

// Relative residuals of the four hyperbolic identities equivalent to the
// generalized Cotlar identity, at p = k delta, p' = k' delta. Each residual
// is normalized by the largest term magnitude (the raw sums reach 1e16 at
// |p| = 10, so absolute residuals would be meaningless in doubles).
std::array<double, 4> cotlar_residual(double p_val, double p_prime);

}  // namespace spectral
}  // namespace ncihf

#endif

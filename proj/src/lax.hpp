#ifndef NCIHF_LAX_HPP
#define NCIHF_LAX_HPP

#include <Eigen/Dense>
#include <vector>

#include "grid.hpp"
#include "params.hpp"

namespace ncihf {

struct CMState;

namespace lax {

// Dense discretization of the Lax kernel: (4n)x(4n), entries
// (1/pi) K(x_m, x_m') dx, diagonal blocks replaced by the removable-
// singularity limits u_x(x), -v_x(x). Index layout: row 4m + c with
// c in {0,1} the u-channel spinor and {2,3} the v-channel spinor.
Eigen::MatrixXcd build_lax_matrix(const CMState& st, const Grid& g);

// Pseudo-adjointness residuals of a discretized Lax matrix:
//   graded: max |M^dag - Lambda M Lambda|, Lambda = diag(I, -I)
//   plain:  max |M^dag - M|
struct AdjointnessResiduals {
    double graded;
    double plain;
};
AdjointnessResiduals adjointness_residuals(const Eigen::MatrixXcd& M);

// I_n = tr(M^n) for n = 2..n_max (n_max <= 4).
std::vector<cplx> lax_traces(const Eigen::MatrixXcd& M, int n_max);

// tr(M^2) evaluated from the scalar expansion of tr4(K(x,x')K(x',x))
// without forming the matrix; supports large n.
double trace_I2_direct(const CMState& st, const Grid& g);

// Matrix-free application of the same windowed-kernel discretization via
// zero-padded linear convolutions (O(n log n) per apply).
class LaxOperator {
  public:
    LaxOperator(const CMState& st, const Grid& g);
    ~LaxOperator();
    LaxOperator(const LaxOperator&) = delete;
    LaxOperator& operator=(const LaxOperator&) = delete;

    int dim() const { return 4 * n_; }
    // Y: dim() x m block; applies the operator column-by-column.
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& Y) const;

  private:
    int n_;
    double scale_;  // dx / pi
    std::vector<cplx> fft_alpha_, fft_alphat_;          // padded kernel spectra
    std::vector<CVec3> u_, v_;
    std::vector<CVec3> ux_, vx_;
    mutable std::vector<cplx> buf_;                     // length 2n scratch
    void* plan_fwd_;
    void* plan_bwd_;

    void conv_pair(const std::vector<cplx>& sig, std::vector<cplx>& out_alpha,
                   std::vector<cplx>& out_alphat) const;
};

// Top-k eigenvalues by modulus via block subspace iteration with
// Rayleigh-Ritz extraction (the soliton Lax operator is numerically
// finite-rank, so a modest subspace converges in a few sweeps).
std::vector<cplx> leading_eigenvalues(const LaxOperator& op, int k, int subspace = 48,
                                      int iters = 12, unsigned seed = 1234);

// Max relative drift of the k leading eigenvalues across snapshots,
// nearest-neighbor matched against the first snapshot. Eigenvalues below
// floor_rel * |lambda_1| are compared on the |lambda_1| scale instead.
struct SpectrumDrift {
    std::vector<std::vector<cplx>> spectra;
    double max_rel_drift;
};
SpectrumDrift isospectrality_drift(const std::vector<CMState>& snapshots, const Grid& g,
                                   int k = 20, double floor_rel = 1e-3);

}  // namespace lax
}  // namespace ncihf

#endif

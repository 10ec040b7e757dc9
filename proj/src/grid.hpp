#ifndef NCIHF_GRID_HPP
#define NCIHF_GRID_HPP

#include <vector>

#include "params.hpp"
#include "vec3.hpp"

namespace ncihf {

// Uniform periodic truncation of the line: x_m = -W/2 + m W/n, wavenumbers
// k_m = 2 pi m'/W with m' the signed FFT index.
struct Grid {
    double window;
    int n;

    Grid(double window_, int n_);

    double dx() const { return window / n; }
    double x(int m) const { return -0.5 * window + m * dx(); }
    int signed_index(int m) const { return m < n / 2 ? m : m - n; }
    double k(int m) const { return 2.0 * M_PI * signed_index(m) / window; }
    std::vector<double> xs() const;
};

// Samples of a two-component (u,v) field over a Grid; scalar or 3-vector
// arity depending on which member is populated.
struct PairFieldC {
    std::vector<cplx> up, dn;
};
struct PairFieldV {
    std::vector<CVec3> up, dn;
};

}  // namespace ncihf

#endif

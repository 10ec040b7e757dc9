#include "grid.hpp"

namespace ncihf {

Grid::Grid(double window_, int n_) : window(window_), n(n_) {
    if (!(window > 0.0)) throw ConfigError("Grid: window must be positive");
    if (n < 16 || (n & (n - 1)) != 0)
        throw ConfigError("Grid: n must be a power of two >= 16");
}

std::vector<double> Grid::xs() const {
    std::vector<double> out(n);
    for (int m = 0; m < n; ++m) out[m] = x(m);
    return out;
}

}  // namespace ncihf

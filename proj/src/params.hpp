#ifndef NCIHF_PARAMS_HPP
#define NCIHF_PARAMS_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ncihf {

using cplx = std::complex<double>;

// Model parameter: the strip half-width delta and the derived wavenumber
// kappa = pi/(2 delta). kappa is never stored independently.
struct Params {
    double delta;
    double kappa;
    explicit Params(double d = 1.0) : delta(d), kappa(M_PI / (2.0 * d)) {
        if (!(d > 0.0)) throw std::invalid_argument("Params: delta must be positive");
    }
};

enum class Chir : int { plus = +1, minus = -1 };

inline int sign(Chir r) { return static_cast<int>(r); }
inline Chir conj(Chir r) { return r == Chir::plus ? Chir::minus : Chir::plus; }

// Admissible pole region: delta/2 < +-Im(z) < 3 delta/2 (open).
struct StripRegion {
    Chir side;
    bool contains(cplx z, const Params& p) const {
        const double y = sign(side) * z.imag();
        return y > 0.5 * p.delta && y < 1.5 * p.delta;
    }
    // signed distance past the boundary (positive = outside)
    double excess(cplx z, const Params& p) const {
        const double y = sign(side) * z.imag();
        return std::max(0.5 * p.delta - y, y - 1.5 * p.delta);
    }
};

struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateArguments : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularSystem : std::runtime_error {
    double condition_number;
    SingularSystem(const std::string& msg, double cond)
        : std::runtime_error(msg), condition_number(cond) {}
};
struct ConjugacyViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateSpin : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StripExit : std::runtime_error {
    double t;
    StripExit(const std::string& msg, double time) : std::runtime_error(msg), t(time) {}
};
struct StepFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct WindowTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ncihf

#endif

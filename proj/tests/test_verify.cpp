#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lax.hpp"
#include "fields.hpp"
#include "states.hpp"
#include "verify.hpp"

using namespace ncihf;
namespace vf = ncihf::verify;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    return out;
}

}  // namespace

TEST_CASE("analytic PDE residual at t = 0") {
    const auto xs = linspace(-20.0, 20.0, 401);
    CHECK(vf::pde_residual_analytic(states::one_state(), xs) < 1e-12);
    CHECK(vf::pde_residual_analytic(states::two_state(), xs) < 1e-12);
    CHECK(vf::pde_residual_analytic(states::three_state(), xs) < 1e-12);
    CHECK(vf::pde_residual_analytic(states::vacuum_state(), xs) == 0.0);
    // complex (N, M) family states satisfy the equation too
    CHECK(vf::pde_residual_analytic(states::complex_nm_state(), xs) < 1e-12);
}

TEST_CASE("analytic PDE residual along a trajectory") {
    const CMState st = states::three_state();
    IntegrateControls ctl;
    ctl.rtol = 1e-11;
    ctl.atol = 1e-13;
    ctl.output_times = linspace(0.0, 17.5, 15);
    const Trajectory traj = integrate(st, 17.5, ctl);
    const auto xs = linspace(-20.0, 20.0, 201);
    for (const CMState& s : traj.states)
        CHECK(vf::pde_residual_analytic(s, xs) < 1e-8);
}

TEST_CASE("residual is sensitive to perturbations") {
    CMState st = states::two_state();
    st.particles[0].s.y += 1e-4;
    const auto xs = linspace(-10.0, 10.0, 101);
    CHECK(vf::pde_residual_analytic(st, xs) > 1e-5);
}

TEST_CASE("spectral PDE residual") {
    const Grid g(48.0, 4096);
    CHECK(vf::pde_residual_spectral(states::one_state(), g) < 1e-6);
    CHECK(vf::pde_residual_spectral(states::vacuum_state(), g) < 1e-13);
    // window guard
    CHECK_THROWS_AS(vf::pde_residual_spectral(states::one_state(), Grid(16.0, 1024)),
                    WindowTooSmall);
    // truncation error shrinks with the window at fixed resolution per delta
    const double r40 = vf::pde_residual_spectral(states::one_state(), Grid(40.0, 2048));
    const double r64 = vf::pde_residual_spectral(states::one_state(), Grid(64.0, 4096));
    CHECK(r64 <= r40 * 1.5);  // both are tiny; no growth allowed
}

TEST_CASE("hamiltonian equivalence") {
    const Grid g(30.0, 1024);
    const auto rep2 = vf::hamiltonian_equivalence(states::two_state(), g);
    CHECK(rep2.bilinear >= 0.0);
    CHECK(std::abs(rep2.bilinear - rep2.closed_form) < 1e-8 * rep2.closed_form);
    CHECK(rep2.difference / rep2.closed_form < 1e-4);

    const auto rep1 = vf::hamiltonian_equivalence(states::one_state(), g);
    CHECK(std::abs(rep1.bilinear - 2.0 * M_PI / 3.0) < 1e-8);
    CHECK(rep1.difference / rep1.closed_form < 1e-6);

    const auto rep0 = vf::hamiltonian_equivalence(states::vacuum_state(), g);
    CHECK(std::abs(rep0.bilinear) < 1e-12);
    CHECK(std::abs(rep0.double_integral) < 1e-12);
}

TEST_CASE("lax matrix structure") {
    const Grid g(30.0, 256);
    const CMState st = states::one_state();
    const Eigen::MatrixXcd M = lax::build_lax_matrix(st, g);
    const auto adj = lax::adjointness_residuals(M);
    CHECK(adj.graded < 1e-12);      // exact for real fields on a uniform grid
    CHECK(adj.plain > 1e-2);        // genuinely not plain self-adjoint

    // vacuum gives the zero matrix
    const Eigen::MatrixXcd M0 = lax::build_lax_matrix(states::vacuum_state(), g);
    CHECK(M0.cwiseAbs().maxCoeff() == 0.0);

    // trace = I_1 = 0 up to quadrature noise
    CHECK(std::abs(M.trace()) < 1e-10);

    CHECK_THROWS_AS(lax::build_lax_matrix(st, Grid(30.0, 4096)), ConfigError);
}

TEST_CASE("I2 identity and direct trace") {
    const Grid g(30.0, 512);
    const CMState st = states::one_state();
    const Eigen::MatrixXcd M = lax::build_lax_matrix(st, g);
    const auto traces = lax::lax_traces(M, 3);
    const double E = fields::total_energy(st);
    const Vec3 S = fields::total_spin(st);
    const double closed =
        8.0 / M_PI * E - 4.0 / (M_PI * M_PI) * st.params.kappa * st.params.kappa * dot(S, S);
    CHECK(std::abs(closed - 4.0) < 1e-12);  // exact value for this example
    CHECK(std::abs(traces[0].real() - closed) / closed < 1e-3);
    CHECK(std::abs(traces[0].imag()) < 1e-10);
    // I3 vanishes for these states (symmetric spectrum)
    CHECK(std::abs(traces[1]) < 1e-8);

    // the direct scalar trace agrees with the dense matrix trace
    const double direct = lax::trace_I2_direct(st, g);
    CHECK(std::abs(direct - traces[0].real()) < 1e-10);

    // two-soliton: I2 matches the closed form at moderate resolution
    const CMState st2 = states::two_state();
    const Grid g2(30.0, 1024);
    const double i2_2 = lax::trace_I2_direct(st2, g2);
    const double E2 = fields::total_energy(st2);
    const Vec3 S2 = fields::total_spin(st2);
    const double closed2 =
        8.0 / M_PI * E2 - 4.0 / (M_PI * M_PI) * st.params.kappa * st.params.kappa * dot(S2, S2);
    CHECK(std::abs(i2_2 - closed2) / std::abs(closed2) < 1e-3);

    // convergence under refinement (order >= 1 toward the closed form)
    const double e_coarse =
        std::abs(lax::trace_I2_direct(st2, Grid(30.0, 256)) - closed2);
    const double e_fine = std::abs(lax::trace_I2_direct(st2, Grid(30.0, 1024)) - closed2);
    CHECK(e_fine < 0.5 * e_coarse);
}

TEST_CASE("matrix-free operator matches the dense matrix") {
    const Grid g(30.0, 256);
    const CMState st = states::two_state();
    const Eigen::MatrixXcd M = lax::build_lax_matrix(st, g);
    const lax::LaxOperator op(st, g);
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Random(4 * g.n, 3);
    const Eigen::MatrixXcd d = op.apply(Y) - M * Y;
    CHECK(d.cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("leading eigenvalues against dense decomposition") {
    const Grid g(30.0, 256);
    const CMState st = states::one_state();
    const Eigen::MatrixXcd M = lax::build_lax_matrix(st, g);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
    std::vector<cplx> dense(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(dense.begin(), dense.end(),
              [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });

    const lax::LaxOperator op(st, g);
    const auto lead = lax::leading_eigenvalues(op, 8);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(std::abs(lead[i]) - std::abs(dense[i])) < 1e-8);
}

TEST_CASE("isospectrality drift for the one-soliton") {
    const CMState st = states::one_state();
    IntegrateControls ctl;
    ctl.output_times = linspace(0.0, 5.0, 5);
    const Trajectory traj = integrate(st, 5.0, ctl);
    const Grid g(40.0, 1024);
    const auto drift = lax::isospectrality_drift(traj.states, g, 8);
    CHECK(drift.max_rel_drift < 1e-4);
}

TEST_CASE("spin conservation by quadrature") {
    const CMState st = states::three_state();
    IntegrateControls ctl;
    ctl.rtol = 1e-11;
    ctl.atol = 1e-13;
    ctl.output_times = linspace(0.0, 8.5, 5);
    const Trajectory traj = integrate(st, 8.5, ctl);
    const Grid g(64.0, 4096);
    const auto rep = vf::spin_conservation_check(traj.states, g);
    CHECK(rep.max_drift < 1e-6);
    CHECK(rep.max_closed_form_gap < 1e-6);

    // vacuum: identically zero
    const auto rep0 = vf::spin_conservation_check({states::vacuum_state()}, g);
    CHECK(max_abs(rep0.quadrature[0]) < 1e-12);
}

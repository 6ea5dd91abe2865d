#include "doctest.h"

#include <cmath>

#include "machclock/dynamics.hpp"
#include "machclock/models.hpp"

using namespace machclock;

TEST_CASE("model validation") {
    const HilbertSpace q = HilbertSpace::single(2);
    CHECK_THROWS_AS(LindbladModel(q, sigma_minus(), {}), Error); // non-Hermitian H
    CHECK_THROWS_AS(LindbladModel::dissipative(q, {{"bad", -1.0, sigma_minus()}}), Error);
    CHECK_THROWS_AS(LindbladModel::dissipative(q, {{"x", 1.0, number(3)}}), Error);
}

TEST_CASE("generator is trace preserving and Hermiticity preserving") {
    const auto model = build_two_level_thermal(1.3, 0.7);
    Matrix m(2, 2);
    m << 0.3, cplx(0.2, 0.1), cplx(0.2, -0.1), 0.7;
    const DensityMatrix rho = DensityMatrix::from_matrix(model.space(), m);
    const Operator l = generator_action(model, rho);
    CHECK(std::abs(l.trace()) < 1e-14);
    CHECK(l.is_hermitian(1e-14));
}

TEST_CASE("Hermitian fast path agrees with the general generator") {
    OptomechParams p;
    p.g = 0.7;
    p.gamma_m = 5.0;
    p.nbar = 0.4;
    const LindbladModel model = build_full_optomech(p, {3, 2}, 18);
    const CompiledGenerator gen(model);
    Matrix a = Matrix::Random(model.space().total(), model.space().total());
    const Matrix rho = a * a.adjoint();
    Matrix fast, slow;
    gen.apply_hermitian(rho, fast);
    gen.apply(rho, slow);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-10 * slow.cwiseAbs().maxCoeff());
}

TEST_CASE("diagonal preservation detection") {
    CHECK(build_two_level_thermal(1, 1).preserves_diagonal());
    CHECK(build_swap_model(1.0, 0.5).model.preserves_diagonal());
    const LindbladModel h(HilbertSpace::single(2), sigma_x(), {});
    CHECK_FALSE(h.preserves_diagonal());
}

TEST_CASE("time grid") {
    const auto g = TimeGrid::span(1.0, 0.25, 2);
    CHECK(g.steps == 4);
    CHECK_THROWS_AS(TimeGrid::span(1.0, 0.3), Error);
}

TEST_CASE("evolve reproduces the two-level closed form") {
    const double gamma = 1.0, nbar = 1.0;
    const auto model = build_two_level_thermal(gamma, nbar);
    const Bloch x0{0.3, -0.2, 0.5};
    const auto res = evolve(model, from_bloch(x0), TimeGrid::span(5.0, 1e-3, 100));
    double err = 0.0;
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        const Bloch b = bloch(res.states[i]);
        const Bloch c = two_level_closed_form(x0, gamma, nbar, res.times[i]);
        err = std::max({err, std::abs(b.x1 - c.x1), std::abs(b.x2 - c.x2), std::abs(b.x3 - c.x3)});
    }
    CHECK(err < 1e-10);
    CHECK(res.max_trace_drift < 1e-12);
    CHECK(res.max_step_error < 1e-12);
}

TEST_CASE("evolve rejects large steps") {
    const auto model = build_two_level_thermal(10.0, 1.0);
    CHECK_THROWS_AS(evolve(model, thermal_qubit(1.0), TimeGrid::span(1.0, 0.01)), Error);
}

TEST_CASE("steady state and stride independence") {
    const auto model = build_two_level_thermal(2.0, 3.0);
    const auto res = evolve(model, DensityMatrix::basis_state(model.space(), 1), TimeGrid::span(10.0, 1e-3, 1000));
    CHECK(std::abs(bloch(res.states.back()).x3 - two_level_steady_x3(3.0)) < 1e-10);
    EvolveOptions o;
    o.error_check_stride = 0;
    const auto res2 = evolve(model, DensityMatrix::basis_state(model.space(), 1), TimeGrid::span(10.0, 1e-3, 1000), o);
    CHECK((res.states.back().matrix() - res2.states.back().matrix()).norm() == 0.0);
}

TEST_CASE("statistical distance rate") {
    const double gamma = 0.8, nbar = 0.5, x30 = 0.4;
    const auto model = build_two_level_thermal(gamma, nbar);
    for (double t : {0.0, 0.3, 1.0, 2.5}) {
        const Bloch b = two_level_closed_form({0, 0, x30}, gamma, nbar, t);
        const DensityMatrix rho = from_bloch(b);
        const double num = statistical_distance_rate(rho, generator_action(model, rho));
        const double exact = two_level_statistical_distance_rate(x30, gamma, nbar, t);
        CHECK(std::abs(num - exact) <= 1e-10 * std::max(1.0, exact));
    }
    const DensityMatrix ss = from_bloch({0, 0, two_level_steady_x3(nbar)});
    CHECK(statistical_distance_rate(ss, generator_action(model, ss)) < 1e-10);
    CHECK(std::isinf(clock_bound(0.0)));
    CHECK(clock_bound(2.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(clock_bound(-1.0), Error);
}

TEST_CASE("statistical distance matches the fidelity oracle") {
    // ds/dt from 2 arccos(F(rho(t), rho(t+h)))/h
    const double gamma = 1.0, nbar = 2.0;
    const Bloch x0{0.0, 0.0, 0.6};
    const double t = 0.4, h = 1e-5;
    const DensityMatrix a = from_bloch(two_level_closed_form(x0, gamma, nbar, t));
    const DensityMatrix b = from_bloch(two_level_closed_form(x0, gamma, nbar, t + h));
    const double oracle = 2.0 * std::acos(std::min(1.0, root_fidelity(a, b))) / h;
    const auto model = build_two_level_thermal(gamma, nbar);
    const double num = statistical_distance_rate(a, generator_action(model, a));
    CHECK(std::abs(num - oracle) < 1e-3 * num);
}

#include "doctest.h"

#include <cmath>

#include "machclock/models.hpp"

using namespace machclock;

TEST_CASE("two-level thermal model") {
    const auto m = build_two_level_thermal(2.0, 0.0);
    CHECK(m.dissipator("excite").rate == 0.0);
    CHECK(m.dissipator("decay").rate == 2.0);
    CHECK_THROWS_AS(build_two_level_thermal(-1.0, 0.0), Error);
}

TEST_CASE("swap model") {
    const auto sw = build_swap_model(1.5);
    const Operator& s = sw.swap;
    CHECK((s * s).matrix().isIdentity(1e-15));
    CHECK(sw.channels.empty());
    // D[S] rho = S rho S - rho for unitary S
    const DensityMatrix rho = tensor(thermal_qubit(0.4), from_bloch({0.2, 0.1, 0.3}));
    const Operator d = dissipator(s, rho);
    CHECK((d.matrix() - (s.matrix() * rho.matrix() * s.matrix() - rho.matrix())).norm() < 1e-14);

    const auto meas = build_swap_model(1.0, 0.25);
    REQUIRE(meas.channels.size() == 2);
    CHECK(meas.channels[0].record_noise_scale == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(swap_output_tanh(0.8, 0.4) == doctest::Approx(0.6));
}

TEST_CASE("swap stationary state") {
    const DensityMatrix rho0 = tensor(thermal_qubit(0.2), thermal_qubit(1.4));
    const Matrix inf = swap_closed_form(rho0.matrix(), 1.0, 50.0);
    const Matrix& s = swap_operator().matrix();
    CHECK((inf - 0.5 * (rho0.matrix() + s * rho0.matrix() * s)).norm() < 1e-14);
}

TEST_CASE("optomech parameters") {
    OptomechParams p;
    p.g = 1;
    p.gamma_m = 100;
    p.nbar = 1;
    p.kappa_probe = 1;
    p.gamma_q = 100;
    CHECK(p.adiabatic_rate() == doctest::Approx(0.04));
    CHECK(p.number_decoherence_rate() == doctest::Approx(0.04));
    CHECK(p.validate().empty());
    p.gamma_m = 5;
    CHECK(p.validate().size() == 1);
    p.g = -1;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("adiabatic model rates and number-difference identity") {
    OptomechParams p;
    p.g = 1;
    p.gamma_m = 40;
    p.nbar = 1;
    const auto m = build_optomech_adiabatic(p, Direction::Plus, {6, 6});
    const double G = p.adiabatic_rate();
    CHECK(m.dissipator("dN12").rate == doctest::Approx(G * 2));
    CHECK(m.dissipator("dN21").rate / m.dissipator("dN12").rate == doctest::Approx(std::exp(-std::log(2.0))));
    const auto su = two_mode_su2({6, 6});
    // state supported on N <= 4 so truncation is exact
    const DensityMatrix rho = two_mode_thermal_projected(1.2, 0.4, {6, 6}, 4);
    const Operator l = generator_action(m, rho);
    const double lhs = (l * (su.n2 - su.n1)).trace().real();
    const double rhs = 2 * G * rho.expectation(su.n2 * su.n1) + 2 * G * (p.nbar + 1) * rho.expectation(su.n1) -
                       2 * G * p.nbar * rho.expectation(su.n2);
    CHECK(std::abs(lhs - rhs) < 1e-12);
    CHECK(std::abs((l * su.total).trace()) < 1e-12);

    const auto minus = build_optomech_adiabatic(p, Direction::Minus, {6, 6});
    CHECK(minus.dissipator("dN12").rate == doctest::Approx(G));
}

TEST_CASE("full optomechanical model") {
    OptomechParams p;
    p.g = 0.0;
    p.gamma_m = 1.0;
    p.nbar = 0.5;
    const auto m = build_full_optomech(p, {2, 2}, 20);
    const auto su = two_mode_su2({2, 2});
    const Operator total = tensor(su.total, Operator::identity(HilbertSpace::single(20)));
    CHECK(commutator(m.hamiltonian(), total).matrix().norm() < 1e-14);
    p.g = 0.3;
    const auto m2 = build_full_optomech(p, {3, 3}, 20);
    const auto su3 = two_mode_su2({3, 3});
    const Operator total3 = tensor(su3.total, Operator::identity(HilbertSpace::single(20)));
    CHECK(commutator(m2.hamiltonian(), total3).matrix().norm() < 1e-12);
    CHECK_THROWS_AS(build_full_optomech(p, {3, 3}, 5), Error);
}

TEST_CASE("Dicke rates") {
    CHECK(dicke_rates(2, 2).first == doctest::Approx(2.0));
    CHECK(dicke_rates(2, -2).first == 0.0);
    CHECK(dicke_rates(2, 2).second == 0.0);
    const auto half = dicke_rates(1, 1);
    CHECK(half.first == doctest::Approx(1.0));
    CHECK(half.second == 0.0);
    CHECK_THROWS_AS(dicke_rates(2, 1), Error);
    CHECK_THROWS_AS(dicke_rates(2, 4), Error);
}

TEST_CASE("birth-death generator") {
    const DickeBlock b{6, 1.5, 0.7};
    const Eigen::MatrixXd q = classical_birth_death(b);
    CHECK(q.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    // detailed balance ratio nbar/(nbar+1)
    Eigen::VectorXd p0 = Eigen::VectorXd::Zero(7);
    p0(6) = 1.0;
    const Eigen::VectorXd ss = evolve_birth_death(q, p0, 200.0);
    for (int i = 0; i + 1 < 7; ++i) CHECK(ss(i + 1) / ss(i) == doctest::Approx(1.5 / 2.5).epsilon(1e-8));
}

TEST_CASE("block weights reconstruct the product law") {
    const double l1 = 0.3, l2 = 0.1;
    const int nmax = block_cutoff(l1, l2);
    const auto w = initial_block_weights(l1, l2, nmax);
    CHECK(w.tail < 1e-6);
    for (int n1 = 0; n1 <= nmax; ++n1)
        for (int n2 = 0; n1 + n2 <= nmax; ++n2)
            CHECK(std::abs(w.joint(n1, n2) - (1 - l1) * std::pow(l1, n1) * (1 - l2) * std::pow(l2, n2)) < 1e-12);
    for (const auto& t : w.p_n_given_N) {
        double s = 0;
        for (double x : t) s += x;
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
    // mu > 1 branch and the printed conditional formula
    const auto w2 = initial_block_weights(0.2, 0.5, block_cutoff(0.2, 0.5));
    const double mu = 0.2 / 0.5;
    for (int N = 0; N < 6; ++N)
        for (int n = 0; n <= N; ++n) {
            const double printed = (1 - mu) * std::pow(mu, n - N / 2.0) / (std::pow(mu, -N / 2.0) - std::pow(mu, N / 2.0 + 1));
            CHECK(std::abs(w2.p_n_given_N[N][n] - printed) < 1e-12);
        }
    const auto w3 = initial_block_weights(0.7, 0.4, block_cutoff(0.7, 0.4));
    CHECK(std::abs(w3.joint(3, 2) - 0.3 * std::pow(0.7, 3) * 0.6 * 0.16) < 1e-12);
}

TEST_CASE("block weights limits") {
    const auto eq = initial_block_weights(0.4, 0.4, block_cutoff(0.4, 0.4));
    for (std::size_t N = 0; N < 5; ++N) {
        CHECK(eq.pN[N] == doctest::Approx(0.36 * (N + 1) * std::pow(0.4, N)).epsilon(1e-12));
        CHECK(eq.p_n_given_N[N][0] == doctest::Approx(1.0 / (N + 1)));
    }
    const auto vac2 = initial_block_weights(0.5, 0.0, block_cutoff(0.5, 0.0));
    for (std::size_t N = 0; N < vac2.pN.size(); ++N) CHECK(vac2.p_n_given_N[N][N] == 1.0);
    CHECK_THROWS_AS(initial_block_weights(0.5, 0.5, 3), Error);
    CHECK_THROWS_AS(initial_block_weights(1.0, 0.5, 3), Error);
}

TEST_CASE("initial Jz and N moments against operators") {
    const double n1 = 0.8, n2 = 0.3;
    const int c = 20;
    const DensityMatrix rho = tensor(thermal_mode(n1, c), thermal_mode(n2, c));
    const auto su = two_mode_su2({c, c});
    CHECK(std::abs(rho.expectation(su.jz) - jz_initial_mean(n1, n2)) < 1e-5);
    const auto mom = thermal_N_moments(n1, n2);
    CHECK(std::abs(rho.expectation(su.total * su.total) - mom.second) < 1e-3);
    CHECK(jz_initial_mean(3, 1) == 1.0);
    CHECK(thermal_N_moments(0, 0).second == 0.0);
    const auto half = thermal_N_moments(2.5, 2.5);
    CHECK(half.second == doctest::Approx(1.5 * 25 + 5));
}

TEST_CASE("semiclassical variants") {
    CHECK(semiclassical_rhs(0.0, 1.0, 3.0, 10.0, SemiclassicalVariant::Paper) == doctest::Approx(-16.5));
    CHECK(semiclassical_rhs(0.0, 1.0, 3.0, 10.0, SemiclassicalVariant::Derived) == doctest::Approx(-9.0));
    for (auto v : {SemiclassicalVariant::Paper, SemiclassicalVariant::Derived})
        CHECK(std::abs(semiclassical_rhs(0.5, 1.0, 1e4, 10.0, v) / (-2.0 * 1e4 * 0.5) - 1.0) < 0.01);
}

TEST_CASE("su2 equation of motion matches the generator") {
    OptomechParams p;
    p.g = 1;
    p.gamma_m = 20;
    p.nbar = 0.7;
    const CavityCutoffs c{6, 6};
    const auto m = build_optomech_adiabatic(p, Direction::Plus, c);
    const auto su = two_mode_su2(c);
    const DensityMatrix rho = two_mode_thermal_projected(1.0, 0.6, c, 5);
    const double lhs = (generator_action(m, rho) * su.jz).trace().real();
    const Operator n2 = su.total * (su.total + 2.0 * Operator::identity(su.total.space()));
    const double rhs = su2_jz_rhs(p.adiabatic_rate(), p.nbar, rho.expectation(n2), rho.expectation(su.jz * su.jz),
                                  rho.expectation(su.jz));
    CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("number measurement") {
    OptomechParams p;
    p.g = 1;
    p.gamma_m = 40;
    p.nbar = 1;
    const auto base = build_optomech_adiabatic(p, Direction::Plus, {3, 3});
    const auto mm = build_number_measurement(base, 4.0);
    CHECK(mm.channel.record_noise_scale == doctest::Approx(0.5));
    CHECK(mm.model.dissipator("number_dephasing").rate == 8.0);
    // 2 Lambda D[n] = -Lambda [n,[n,rho]]
    Matrix r = Matrix::Random(9, 9);
    r = r * r.adjoint();
    r /= r.trace();
    const DensityMatrix rho = DensityMatrix::from_matrix(base.space(), r);
    const Operator n = mm.channel.op;
    const Operator dc = commutator(n, commutator(n, rho.as_operator()));
    CHECK((8.0 * dissipator(n, rho).matrix() + 4.0 * dc.matrix()).norm() < 1e-12);
    // diagonal states: dephasing term vanishes
    const DensityMatrix diag = two_mode_thermal_projected(1.0, 0.5, {3, 3}, 2);
    CHECK(dissipator(n, diag).matrix().norm() < 1e-15);
    CHECK(mm.model.preserves_diagonal());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expsplit/benchcli.hpp"

#include <random>
#include <sstream>

using namespace expsplit;

TEST_CASE("rotation generator: 101 purely imaginary half-integer multiples") {
    const StructuredOperator D = gen_rotation(1.0);
    CHECK(D.dim() == 101);
    CHECK(D.data()[0] == Complex(0.0, -25.0));
    CHECK(D.data()[100] == Complex(0.0, 25.0));
    for (int j = 0; j < 101; ++j) CHECK(D.data()[j].real() == 0.0);

    const StructuredOperator D2 = gen_rotation(100.0);
    CHECK(one_norm(D2.densify()) == doctest::Approx(2500.0).epsilon(1e-14));
    CHECK(one_norm(D2.densify()) == doctest::Approx(100.0 * one_norm(D.densify())));
}

TEST_CASE("dissipation generator: 61 real entries, symmetric spectrum") {
    const StructuredOperator D = gen_dissipation();
    CHECK(D.dim() == 61);
    CHECK(D.data()[0] == Complex(15.0, 0.0));
    CHECK(D.data()[60] == Complex(-15.0, 0.0));
    Complex sum(0.0);
    double dmax = -1e300, dmin = 1e300;
    for (int j = 0; j < 61; ++j) {
        sum += D.data()[j];
        dmax = std::max(dmax, D.data()[j].real());
        dmin = std::min(dmin, D.data()[j].real());
    }
    CHECK(std::abs(sum) <= 1e-12);
    CHECK(dmax - dmin == doctest::Approx(30.0));
}

TEST_CASE("perturbation generator: antisymmetric, zero diagonal, matched norm") {
    for (double scale : {1.0, 100.0}) {
        const PerturbedMatrix P = gen_perturbation(gen_rotation(scale), 1e-2);
        const int n = P.D.dim();
        for (int i = 0; i < n; ++i) {
            CHECK(P.B(i, i) == Complex(0.0));
            for (int j = 0; j < i; ++j) CHECK(P.B(i, j) == -P.B(j, i));
        }
        CHECK(one_norm(P.B) / one_norm(P.D.densify()) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(P.eps == 1e-2);
    }
}

TEST_CASE("spread-based commutator bound holds for the dissipation problem") {
    // ||[D,B]|| <= ||B|| (d+ - d-) with d+ - d- = 30.
    const PerturbedMatrix P = gen_perturbation(gen_dissipation(), 1e-3);
    const DenseMatrix D = P.D.densify();
    const DenseMatrix C = D * P.B - P.B * D;
    CHECK(one_norm(C) <= 30.0 * one_norm(P.B) * (1 + 1e-12));
}

TEST_CASE("2x2 example: closed form and perturbed structure") {
    {
        const auto [P, exact] = gen_example2x2(0.0);
        const DenseMatrix E = exact(0);
        CHECK(E(0, 0).real() == doctest::Approx(std::cos(1.0)));
        CHECK(E(0, 1).real() == doctest::Approx(std::sin(1.0)));
        CHECK(E(1, 0).real() == doctest::Approx(-std::sin(1.0)));
        CHECK(P.eps == 0.0);
    }
    {
        const auto [P, exact] = gen_example2x2(1e-1);
        const DenseMatrix A = P.densify();
        CHECK(A(0, 0).real() == doctest::Approx(0.1));
        CHECK(A(0, 1).real() == doctest::Approx(1.1));
        CHECK(A(1, 0).real() == doctest::Approx(-0.9));
        CHECK(A(1, 1).real() == doctest::Approx(-0.1));
        // mu = sqrt(0.98): the flow has period 2 pi / mu.
        for (int s = 0; s <= 6; ++s) {
            const DenseMatrix R = reference_expm(DenseMatrix(std::pow(2.0, s) * A));
            CHECK(one_norm(exact(s) - R) <= 1e-12 * one_norm(R));
        }
    }
    CHECK_THROWS_AS(gen_example2x2(0.8), InvalidConfig);
}

TEST_CASE("reference oracle: identity at zero, eigendecomposition agreement") {
    CHECK(one_norm(reference_expm(DenseMatrix::Zero(4, 4)) - DenseMatrix::Identity(4, 4)) <=
          1e-15);
    std::mt19937 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    DenseMatrix M(10, 10);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) M(i, j) = Complex(g(rng), g(rng));
    const Eigen::HouseholderQR<DenseMatrix> qr(M);
    const DenseMatrix Q = qr.householderQ();
    Vector lam(10), elam(10);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 10; ++i) lam[i] = Complex(u(rng), u(rng));
    for (int i = 0; i < 10; ++i) elam[i] = std::exp(lam[i]);
    const DenseMatrix A = Q * lam.asDiagonal() * Q.adjoint();
    const DenseMatrix E = Q * elam.asDiagonal() * Q.adjoint();
    CHECK(one_norm(reference_expm(A) - E) / one_norm(E) <= 1e-13);
}

TEST_CASE("longtime experiment emits one deterministic row per grid point") {
    ExperimentConfig cfg;
    cfg.experiment = "longtime";
    cfg.eps_list = {1e-3};
    cfg.s_range = {0, 1, 2, 3};
    const auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.scheme == "strang");
        CHECK(!r.failed);
        CHECK(r.cost_thirds == 3 * r.s + 4);
    }
    const auto rows2 = run_experiment(cfg);
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].error == rows2[i].error);
        CHECK(rows[i].cost_thirds == rows2[i].cost_thirds);
    }
}

TEST_CASE("rotation experiment covers baseline, automatic, and fixed schemes") {
    ExperimentConfig cfg;
    cfg.experiment = "rotation";
    cfg.eps_list = {1e-3};
    cfg.tolerance = 1e-6;
    cfg.schemes = {"pade", "auto", "Yt1_64"};
    cfg.s_range = {5};
    const auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].scheme == "pade");
    CHECK(rows[0].error <= 1e-6);
    CHECK(rows[1].scheme == "auto:Yt0_62");
    CHECK(rows[1].error <= 1e-5);
    CHECK(rows[1].cost_thirds < rows[0].cost_thirds);
    CHECK(rows[2].scheme == "Yt1_64");
    CHECK(rows[2].predicted_error >= 0.0);
    CHECK(rows[2].error <= rows[2].predicted_error * 10);
}

TEST_CASE("invalid configurations are rejected") {
    ExperimentConfig cfg;
    cfg.experiment = "rotation";
    cfg.eps_list = {2.0};
    CHECK_THROWS_AS(run_experiment(cfg), InvalidConfig);
    cfg.eps_list = {1e-3};
    cfg.experiment = "does-not-exist";
    CHECK_THROWS_AS(run_experiment(cfg), InvalidConfig);
    cfg.experiment = "longtime";
    cfg.s_range.clear();
    CHECK_THROWS_AS(run_experiment(cfg), InvalidConfig);
}

TEST_CASE("CSV output has the documented header and one line per record") {
    ExperimentConfig cfg;
    cfg.experiment = "longtime";
    cfg.eps_list = {1e-3};
    cfg.s_range = {0, 1};
    const auto rows = run_experiment(cfg);
    std::ostringstream out;
    write_csv(rows, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "experiment,scheme,eps,s,h,error,cost,predicted_error,wall_ms");
    int count = 0;
    while (std::getline(in, line)) ++count;
    CHECK(count == static_cast<int>(rows.size()));
}

TEST_CASE("empirical order reproduces Strang's declared (2,2)") {
    const OrderEstimate est = empirical_order("strang");
    CHECK(std::abs(est.p1_hat - 2.0) <= 0.25);
    CHECK(std::abs(est.p2_hat - 2.0) <= 0.25);
    CHECK_THROWS_AS(empirical_order("no-such-scheme"), UnknownScheme);
}

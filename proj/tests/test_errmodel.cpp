#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expsplit/benchcli.hpp"
#include "expsplit/errmodel.hpp"

using namespace expsplit;

namespace {

DenseMatrix dense_commutator(const DenseMatrix& X, const DenseMatrix& Y) {
    return X * Y - Y * X;
}

}  // namespace

TEST_CASE("commutator norm table matches dense commutators, built structurally") {
    const PerturbedMatrix P = gen_perturbation(gen_rotation(1.0), 1e-3);
    const CommutatorNorms t = commutator_norm_table(P);
    const DenseMatrix D = P.D.densify();
    const DenseMatrix c1 = dense_commutator(D, P.B);
    const DenseMatrix c2 = dense_commutator(D, c1);
    const DenseMatrix c4 = dense_commutator(D, dense_commutator(D, c2));
    CHECK(t.nB == doctest::Approx(one_norm(P.B)).epsilon(1e-12));
    CHECK(t.nDB == doctest::Approx(one_norm(c1)).epsilon(1e-12));
    CHECK(t.nD2B == doctest::Approx(one_norm(c2)).epsilon(1e-12));
    CHECK(t.nD4B == doctest::Approx(one_norm(c4)).epsilon(1e-12));
    // Spread of i*{-25..25} is 50; the sixth-adjoint bound is spread^2 times
    // the fourth.
    CHECK(t.spread == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(t.nD6B == doctest::Approx(2500.0 * t.nD4B).epsilon(1e-12));
}

TEST_CASE("derived bounds really bound the mixed commutators") {
    const PerturbedMatrix P = gen_perturbation(gen_dissipation(), 1e-2);
    const CommutatorNorms t = commutator_norm_table(P);
    const DenseMatrix D = P.D.densify();
    const DenseMatrix c1 = dense_commutator(D, P.B);
    const DenseMatrix c2 = dense_commutator(D, c1);
    const DenseMatrix c3 = dense_commutator(D, c2);
    const DenseMatrix c6 = dense_commutator(D, dense_commutator(D, dense_commutator(D, c3)));
    CHECK(one_norm(c6) <= t.nD6B * (1 + 1e-12));
    CHECK(one_norm(dense_commutator(P.B, c1)) <= t.bBDB * (1 + 1e-12));
    CHECK(one_norm(dense_commutator(P.B, c3)) <= t.bBD3B * (1 + 1e-12));
    CHECK(one_norm(dense_commutator(D, dense_commutator(P.B, c2))) <= t.bDBD2B * (1 + 1e-12));
    CHECK(one_norm(dense_commutator(P.B, dense_commutator(P.B, c2))) <= t.bB2D2B * (1 + 1e-12));
}

TEST_CASE("error polynomial terms scale with the stated powers of h and eps") {
    CommutatorNorms t;
    t.nD6B = t.bBDB = t.bBD3B = t.bDBD2B = t.bB2D2B = t.bCrossD = 1.0;
    for (ErrorBoundKind kind : {ErrorBoundKind::Order62, ErrorBoundKind::Order64}) {
        const double e1 = error_polynomial(kind, 0.1, 1e-3, t);
        const double e2 = error_polynomial(kind, 0.05, 1e-3, t);
        CHECK(e1 > 0.0);
        CHECK(e2 < e1);  // monotone in h
        CHECK(error_polynomial(kind, 0.1, 2e-3, t) > e1);  // monotone in eps
    }
    // Zeroing the only eps^1 term isolates the leading h^7 contribution.
    CommutatorNorms lead;
    lead.nD6B = 1.0;
    const double ratio = error_polynomial(ErrorBoundKind::Order62, 0.2, 1e-3, lead) /
                         error_polynomial(ErrorBoundKind::Order62, 0.1, 1e-3, lead);
    CHECK(ratio == doctest::Approx(128.0).epsilon(1e-12));
}

TEST_CASE("bound kinds are assigned per scheme") {
    CHECK(error_bound_for("Yt0_62") == ErrorBoundKind::Order62);
    CHECK(error_bound_for("Yt1_64") == ErrorBoundKind::Order64);
    CHECK(error_bound_for("Yt2_64") == ErrorBoundKind::Order64);
    CHECK_THROWS_AS(error_bound_for("strang"), UnknownScheme);
}

TEST_CASE("choose_squarings picks the smallest feasible count") {
    const PerturbedMatrix P = gen_perturbation(gen_rotation(1.0), 1e-3);
    const CommutatorNorms t = commutator_norm_table(P);
    const int s2 = choose_squarings(ErrorBoundKind::Order62, 1e-3, t, 1e-6);
    CHECK(s2 == 5);
    CHECK(error_polynomial(ErrorBoundKind::Order62, std::pow(0.5, s2), 1e-3, t) <= 1e-6);
    CHECK(error_polynomial(ErrorBoundKind::Order62, std::pow(0.5, s2 - 1), 1e-3, t) > 1e-6);
    CHECK_THROWS_AS(choose_squarings(ErrorBoundKind::Order62, 1e-3, t, 0.0), NoFeasibleScaling);
}

TEST_CASE("method selection: splitting wins for small eps, Pade for large eps") {
    const StructuredOperator D = gen_rotation(1.0);
    {
        const SelectionPlan plan = select_method(gen_perturbation(D, 1e-3), 1e-6);
        CHECK(plan.method == "Yt0_62");
        CHECK(plan.s2 == 5);
        CHECK(plan.predicted_cost_thirds == 19);  // 5 squarings + 4/3 inner
        CHECK(plan.predicted_error <= 1e-6);
    }
    {
        const SelectionPlan plan = select_method(gen_perturbation(D, 0.5), 1e-6);
        CHECK(plan.method.rfind("pade", 0) == 0);
    }
}

TEST_CASE("method selection: unperturbed input needs no dense work") {
    PerturbedMatrix P = gen_perturbation(gen_rotation(1.0), 1e-3);
    P.eps = 0.0;
    const SelectionPlan plan = select_method(P, 1e-6);
    CHECK(plan.method == "exp_structured");
    CHECK(plan.predicted_cost_thirds == 0);
    CHECK(plan.predicted_error == 0.0);
}

TEST_CASE("epsilon threshold reproduces the published break-even sizes") {
    const double t6 = epsilon_threshold(1e-6);
    const double t4 = epsilon_threshold(1e-4);
    CHECK(t6 > 0.007);
    CHECK(t6 < 0.013);
    CHECK(t4 > 0.035);
    CHECK(t4 < 0.065);
    CHECK_THROWS_AS(epsilon_threshold(1e-8), UnknownTolerance);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expsplit/padetaylor.hpp"
#include "expsplit/splitcat.hpp"

#include <random>

using namespace expsplit;

namespace {

PerturbedMatrix small_problem(double eps, unsigned seed = 11) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    const int n = 8;
    Vector d(n);
    for (int i = 0; i < n; ++i) d[i] = Complex(0.0, 2.0 * u(rng));
    DenseMatrix B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B(i, j) = Complex(g(rng), g(rng));
    B /= one_norm(B);
    return PerturbedMatrix{StructuredOperator::diagonal(d), std::move(B), eps};
}

DenseMatrix exp_oracle(const DenseMatrix& A) {
    CostTally untracked;
    const double nrm = one_norm(A);
    int s = 0;
    if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    DenseMatrix Y = pade_r26(DenseMatrix(A / std::pow(2.0, s)), untracked);
    for (int i = 0; i < s; ++i) Y = Y * Y;
    return Y;
}

}  // namespace

TEST_CASE("every catalog entry passes its consistency check") {
    const Catalog& cat = catalog();
    CHECK(cat.squarings.size() == 12);
    CHECK(cat.splittings.size() == 5);
    CHECK(cat.processed.size() == 3);
    for (const auto& s : cat.squarings) {
        INFO(s.id);
        CHECK(consistency_check(s));
    }
    for (const auto& g : cat.splittings) {
        INFO(g.id);
        CHECK(consistency_check(g));
    }
    for (const auto& p : cat.processed) {
        INFO(p.id);
        CHECK(consistency_check(p.kernel));
    }
}

TEST_CASE("real-only schemes carry real coefficients") {
    for (const auto& s : catalog().squarings) {
        if (!s.real_only) continue;
        INFO(s.id);
        for (const auto& a : s.a) CHECK(a.imag() == 0.0);
    }
}

TEST_CASE("center exponent combines B with its structured commutators") {
    const PerturbedMatrix P = small_problem(1e-2);
    const ModifiedExponentSpec spec{Complex(0.5), -1.0 / 144.0, 121.0 / 311040.0, 4};
    const double h = 0.3;
    CostTally tally;
    const DenseMatrix M = build_center_exponent(P, h, spec, tally);
    const DenseMatrix D = P.D.densify();
    DenseMatrix c2 = D * P.B - P.B * D;
    c2 = D * c2 - c2 * D;
    DenseMatrix c4 = D * c2 - c2 * D;
    c4 = D * c4 - c4 * D;
    const DenseMatrix expected = spec.alpha * h * P.eps * P.B +
                                 spec.beta * std::pow(h, 3) * P.eps * c2 +
                                 spec.gamma * std::pow(h, 5) * P.eps * c4;
    CHECK(one_norm(M - expected) <= 1e-13);
    CHECK(tally.product_thirds == 0);
}

TEST_CASE("eps = 0 reduces every scheme to the exact structured flow") {
    const PerturbedMatrix P0 = [] {
        PerturbedMatrix P = small_problem(0.0);
        P.eps = 0.0;
        return P;
    }();
    const double h = 0.7;
    const DenseMatrix exact = exp_structured(P0.D, Complex(h)).densify();
    const Catalog& cat = catalog();
    for (const auto& s : cat.squarings) {
        INFO(s.id);
        CostTally tally;
        CHECK(one_norm(run_modified_squaring(P0, s, h, 0, tally) - exact) <= 1e-12);
    }
    for (const auto& g : cat.splittings) {
        INFO(g.id);
        CostTally tally;
        CHECK(one_norm(run_general_splitting(P0, g, h, 0, tally) - exact) <= 1e-12);
    }
    for (const auto& p : cat.processed) {
        INFO(p.id);
        CostTally tally;
        CHECK(one_norm(run_processed(P0, p, h, 0, tally) - exact) <= 1e-12);
    }
}

TEST_CASE("time symmetry: one step forward times one step backward is the identity") {
    const PerturbedMatrix P = small_problem(1e-2);
    const double h = 0.4;
    const DenseMatrix I = DenseMatrix::Identity(P.B.rows(), P.B.cols());
    const Catalog& cat = catalog();
    for (const auto& s : cat.squarings) {
        INFO(s.id);
        CostTally tally;
        const DenseMatrix F = run_modified_squaring(P, s, h, 0, tally);
        const DenseMatrix Bk = run_modified_squaring(P, s, -h, 0, tally);
        CHECK(one_norm(F * Bk - I) <= 1e-11);
    }
    for (const auto& g : cat.splittings) {
        INFO(g.id);
        CostTally tally;
        const DenseMatrix F = run_general_splitting(P, g, h, 0, tally);
        const DenseMatrix Bk = run_general_splitting(P, g, -h, 0, tally);
        CHECK(one_norm(F * Bk - I) <= 1e-11);
    }
    for (const auto& p : cat.processed) {
        INFO(p.id);
        CostTally tally;
        const DenseMatrix F = run_processed(P, p, h, 0, tally);
        const DenseMatrix Bk = run_processed(P, p, -h, 0, tally);
        CHECK(one_norm(F * Bk - I) <= 1e-11);
    }
}

TEST_CASE("modified squaring cost is s1 + s2 dense products plus the inner kernel") {
    const PerturbedMatrix P = small_problem(1e-3);
    for (const auto& s : catalog().squarings) {
        for (int s2 : {0, 3}) {
            INFO(s.id << " s2=" << s2);
            CostTally tally;
            run_modified_squaring(P, s, 0.25, s2, tally, 2);
            CHECK(tally.products_equal(s.s1 + s2, 4));  // + 4/3 for the inner solve
            CostTally tally4;
            run_modified_squaring(P, s, 0.25, s2, tally4, 4);
            CHECK(tally4.products_equal(s.s1 + s2 + 1, 4));
        }
    }
}

TEST_CASE("general splittings reuse repeated groups; chain costs are exact") {
    const PerturbedMatrix P = small_problem(1e-3);
    for (const auto& g : catalog().splittings) {
        INFO(g.id);
        CostTally tally;
        run_general_splitting(P, g, 0.25, 0, tally, 2);
        // Each distinct modified exponent is exponentiated once (4/3 each).
        const long long expected =
            3 * g.chain_product_count + 4 * static_cast<long long>(g.bspecs.size());
        CHECK(tally.product_thirds == expected);
    }
}

TEST_CASE("processed schemes cost kernel + 1 product + two solves") {
    const PerturbedMatrix P = small_problem(1e-3);
    for (const auto& p : catalog().processed) {
        for (int s2 : {0, 2}) {
            INFO(p.id << " s2=" << s2);
            CostTally tally;
            run_processed(P, p, 0.25, s2, tally, 2);
            CHECK(tally.products_equal(p.kernel.s1 + s2 + 5));
        }
    }
}

TEST_CASE("squarings double the simulated time") {
    const PerturbedMatrix P = small_problem(1e-3);
    const auto& strang = catalog().squarings.front();
    REQUIRE(strang.id == "strang");
    CostTally tally;
    const double h = 0.125;
    const DenseMatrix Y = run_modified_squaring(P, strang, h, 3, tally);
    const DenseMatrix exact = exp_oracle(8.0 * h * P.densify());
    CHECK(one_norm(Y - exact) / one_norm(exact) <= 1e-5);
}

TEST_CASE("higher-order schemes beat Strang at the same step size") {
    const PerturbedMatrix P = small_problem(1e-3);
    const double h = 0.25;
    const DenseMatrix exact = exp_oracle(h * P.densify());
    auto local_error = [&](const std::string& id) {
        for (const auto& s : catalog().squarings)
            if (s.id == id) {
                CostTally tally;
                return one_norm(run_modified_squaring(P, s, h, 0, tally) - exact);
            }
        throw UnknownScheme(id);
    };
    const double e_strang = local_error("strang");
    const double e_yt1 = local_error("Yt1_64");
    CHECK(e_yt1 < 1e-2 * e_strang);
}

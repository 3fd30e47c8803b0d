#include "expsplit/padetaylor.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace expsplit {

std::vector<double> pade_numerator_coefficients(int m) {
    // p_0 = 1, p_1 = 2 + A, p_m = 2(2m-1) p_{m-1} + A^2 p_{m-2}.
    std::vector<double> pm2 = {1.0};
    std::vector<double> pm1 = {2.0, 1.0};
    if (m == 0) return pm2;
    for (int k = 2; k <= m; ++k) {
        std::vector<double> p(k + 1, 0.0);
        const double c = 2.0 * (2.0 * k - 1.0);
        for (size_t i = 0; i < pm1.size(); ++i) p[i] += c * pm1[i];
        for (size_t i = 0; i < pm2.size(); ++i) p[i + 2] += pm2[i];
        pm2 = std::move(pm1);
        pm1 = std::move(p);
    }
    for (size_t i = pm1.size(); i-- > 0;) pm1[i] /= pm1[0];
    return pm1;
}

DenseMatrix pade_r2(const DenseMatrix& X, CostTally& tally) {
    const DenseMatrix I = DenseMatrix::Identity(X.rows(), X.cols());
    return inverse_multiply(I - 0.5 * X, I + 0.5 * X, tally);
}

DenseMatrix pade_r4(const DenseMatrix& X, CostTally& tally) {
    const DenseMatrix I = DenseMatrix::Identity(X.rows(), X.cols());
    const DenseMatrix X2 = matmul(X, X, tally);
    return inverse_multiply(I - 0.5 * X + X2 / 12.0, I + 0.5 * X + X2 / 12.0, tally);
}

DenseMatrix pade_r10(const DenseMatrix& X, CostTally& tally) {
    static const std::vector<double> b = pade_numerator_coefficients(5);
    const DenseMatrix I = DenseMatrix::Identity(X.rows(), X.cols());
    const DenseMatrix X2 = matmul(X, X, tally);
    const DenseMatrix X4 = matmul(X2, X2, tally);
    const DenseMatrix u = matmul(X, DenseMatrix(b[5] * X4 + b[3] * X2 + b[1] * I), tally);
    const DenseMatrix v = b[4] * X4 + b[2] * X2 + b[0] * I;
    return inverse_multiply(v - u, v + u, tally);
}

DenseMatrix pade_r26(const DenseMatrix& X, CostTally& tally) {
    static const std::vector<double> b = pade_numerator_coefficients(13);
    const DenseMatrix I = DenseMatrix::Identity(X.rows(), X.cols());
    const DenseMatrix X2 = matmul(X, X, tally);
    const DenseMatrix X4 = matmul(X2, X2, tally);
    const DenseMatrix X6 = matmul(X2, X4, tally);
    const DenseMatrix wu = matmul(X6, DenseMatrix(b[13] * X6 + b[11] * X4 + b[9] * X2), tally);
    const DenseMatrix u =
        matmul(X, DenseMatrix(wu + b[7] * X6 + b[5] * X4 + b[3] * X2 + b[1] * I), tally);
    const DenseMatrix wv = matmul(X6, DenseMatrix(b[12] * X6 + b[10] * X4 + b[8] * X2), tally);
    const DenseMatrix v = wv + b[6] * X6 + b[4] * X4 + b[2] * X2 + b[0] * I;
    return inverse_multiply(v - u, v + u, tally);
}

DenseMatrix taylor_t16(const DenseMatrix& X, CostTally& tally) {
    const DenseMatrix I = DenseMatrix::Identity(X.rows(), X.cols());
    const DenseMatrix X2 = matmul(X, X, tally);
    const DenseMatrix X3 = matmul(X2, X, tally);
    const DenseMatrix X4 = matmul(X2, X2, tally);
    auto inv_factorial = [](int n) {
        double f = 1.0;
        for (int k = 2; k <= n; ++k) f *= k;
        return 1.0 / f;
    };
    std::array<DenseMatrix, 4> g;
    for (int i = 0; i < 4; ++i)
        g[i] = inv_factorial(4 * i) * I + inv_factorial(4 * i + 1) * X +
               inv_factorial(4 * i + 2) * X2 + inv_factorial(4 * i + 3) * X3;
    const double g4 = inv_factorial(16);
    DenseMatrix T = g[3] + g4 * X4;
    T = matmul(T, X4, tally) + g[2];
    T = matmul(T, X4, tally) + g[1];
    T = matmul(T, X4, tally) + g[0];
    return T;
}

namespace {

struct ThetaRow {
    double u;
    std::array<double, 13> theta;  // m = 1..13
};

const std::array<ThetaRow, 3> kThetaTable = {{
    {std::ldexp(1.0, -53),
     {3.65e-8, 5.32e-4, 1.50e-2, 8.54e-2, 2.54e-1, 5.41e-1, 9.50e-1, 1.47, 2.10, 2.81, 3.60, 4.46,
      5.37}},
    {1e-10,
     {3.46e-5, 1.64e-2, 1.47e-1, 4.73e-1, 9.98e-1, 1.69, 2.51, 3.44, 4.44, 5.51, 6.62, 7.76,
      8.94}},
    {1e-6,
     {3.46e-3, 1.64e-1, 6.80e-1, 1.49, 2.48, 3.58, 4.76, 5.98, 7.24, 8.52, 9.81, 1.11e1, 1.24e1}},
}};

}  // namespace

double theta_lookup(double u, int m) {
    if (m < 1 || m > 13) throw InvalidConfig("theta_lookup: order index out of range");
    for (const auto& row : kThetaTable)
        if (std::abs(u - row.u) <= 1e-12 * row.u) return row.theta[m - 1];
    throw UnknownTolerance("theta_lookup: tolerance not tabulated");
}

StandardPlan expm_standard_plan(double norm_one, double u) {
    constexpr std::array<int, 4> ms = {1, 2, 5, 13};
    constexpr std::array<int, 4> pi = {0, 1, 3, 6};
    StandardPlan best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < ms.size(); ++i) {
        const double theta = theta_lookup(u, ms[i]);
        int s = 0;
        if (norm_one > theta) s = static_cast<int>(std::ceil(std::log2(norm_one / theta)));
        const double cost = pi[i] + 4.0 / 3.0 + s;
        // Ties go to the larger kernel (smaller truncation error).
        if (cost < best_cost - 1e-12 || (std::abs(cost - best_cost) <= 1e-12 && ms[i] > best.m)) {
            best_cost = cost;
            best = {ms[i], s, cost};
        }
    }
    return best;
}

DenseMatrix expm_standard(const DenseMatrix& A, double u, CostTally& tally) {
    const StandardPlan plan = expm_standard_plan(one_norm(A), u);
    const DenseMatrix X = A / std::pow(2.0, plan.s);
    DenseMatrix R;
    switch (plan.m) {
        case 1: R = pade_r2(X, tally); break;
        case 2: R = pade_r4(X, tally); break;
        case 5: R = pade_r10(X, tally); break;
        default: R = pade_r26(X, tally); break;
    }
    for (int i = 0; i < plan.s; ++i) R = matmul(R, R, tally);
    return R;
}

}  // namespace expsplit

#pragma once

#include "expsplit/matrixcore.hpp"

namespace expsplit {

// Coefficients b_0..b_m of the degree-m diagonal Pade numerator, normalized
// to b_0 = 1. The denominator is the same polynomial evaluated at -A.
std::vector<double> pade_numerator_coefficients(int m);

DenseMatrix pade_r2(const DenseMatrix& X, CostTally& tally);
DenseMatrix pade_r4(const DenseMatrix& X, CostTally& tally);
DenseMatrix pade_r10(const DenseMatrix& X, CostTally& tally);
DenseMatrix pade_r26(const DenseMatrix& X, CostTally& tally);
DenseMatrix taylor_t16(const DenseMatrix& X, CostTally& tally);

// Largest norm at which the order-2m diagonal Pade approximant meets the
// backward-error tolerance u. Stored rows: u in {2^-53, 1e-10, 1e-6}.
double theta_lookup(double u, int m);

// Printed companion value used by the epsilon-threshold analysis (the theta
// table itself has no 1e-4 row).
inline constexpr double kTheta5Tol1em4 = 3.85;

struct StandardPlan {
    int m = 1;       // half-order of the chosen diagonal Pade kernel
    int s = 0;       // number of squarings
    double cost = 0; // pi_m + 4/3 + s dense products
};

StandardPlan expm_standard_plan(double norm_one, double u);

DenseMatrix expm_standard(const DenseMatrix& A, double u, CostTally& tally);

}  // namespace expsplit

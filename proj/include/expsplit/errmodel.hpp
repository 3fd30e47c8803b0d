#pragma once

#include "expsplit/matrixcore.hpp"
#include "expsplit/splitcat.hpp"

namespace expsplit {

// One-norms of the structurally computable commutators plus derived upper
// bounds for the mixed commutators appearing in the truncated error bounds.
struct CommutatorNorms {
    double nB = 0;      // ||B||
    double nDB = 0;     // ||[D,B]||
    double nD2B = 0;    // ||[D,[D,B]]||
    double nD4B = 0;    // ||ad_D^4(B)||
    double nD6B = 0;    // bound: spread^2 * ||ad_D^4(B)||
    double spread = 0;  // diameter bound of D's spectrum / numerical range
    double bBDB = 0;    // ||[B,[D,B]]||        <= 2*nDB*nB
    double bBD3B = 0;   // ||[B,ad_D^3(B)]||    <= 2*nDB*nD2B
    double bDBD2B = 0;  // ||[D,[B,[D,[D,B]]]]||<= 2*nDB*nD2B
    double bB2D2B = 0;  // ||[B,[B,[D,[D,B]]]]||<= 4*nB^2*nD2B
    double bCrossD = 0; // ||[[B,D],[B,[B,D]]]||<= 4*nDB^2*nB
};

enum class ErrorBoundKind { Order62, Order64 };

struct SelectionPlan {
    std::string method;  // scheme id or "pade_r10" etc.
    int s1 = 0;
    int s2 = 0;          // external squarings (or total squarings for Pade)
    double predicted_error = 0.0;
    double predicted_cost_products = 0.0;
    long long predicted_cost_thirds = 0;
    double tolerance = 0.0;
};

CommutatorNorms commutator_norm_table(const PerturbedMatrix& P);

// Truncated local error bound at step size h; eps enters explicitly (single-B
// commutators carry eps, double-B eps^2, triple-B eps^3).
double error_polynomial(ErrorBoundKind kind, double h, double eps, const CommutatorNorms& norms);
ErrorBoundKind error_bound_for(const std::string& scheme_id);

// Smallest s2 >= 0 with error_polynomial(kind, 2^-s2, eps, norms) <= u.
int choose_squarings(ErrorBoundKind kind, double eps, const CommutatorNorms& norms, double u);

SelectionPlan select_method(const PerturbedMatrix& P, double u);

// Largest eps for which the order-(6,2) bound at h = 2^-3 stays below u under
// the rough norm estimates, matching the cost of the scaled order-10 Pade
// baseline. u must be 1e-6 or 1e-4.
double epsilon_threshold(double u);

}  // namespace expsplit

#pragma once

#include "expsplit/matrixcore.hpp"

#include <optional>

namespace expsplit {

// Exponent of the central B-exponential:
//   alpha*h*eps*B + beta*h^3*eps*[D,[D,B]] + gamma*h^5*eps*[D,[D,[D,[D,B]]]].
struct ModifiedExponentSpec {
    Complex alpha{0.0};
    double beta = 0.0;
    double gamma = 0.0;
    int pade_order = 2;  // inner approximant: 2 or 4
};

// Recursive doubling scheme: X_0 = inner exponential, then
// X_k = X_{k-1} * e^{a_k h D} * X_{k-1} for k = 1..s1, wrapped by
// e^{a_{s1+1} h D} on both sides, followed by s2 plain squarings.
struct SquaringScheme {
    std::string id;
    int s1 = 0;
    std::vector<Complex> a;  // a_1..a_{s1+1}, a_1 innermost
    ModifiedExponentSpec center;
    int p1 = 2, p2 = 2;
    bool real_only = true;
    bool verified = true;
};

struct SplitStage {
    enum class Op { D, B, Group };
    Op op;
    Complex coeff{0.0};  // D stages: time-step fraction
    int index = 0;       // B stages: exponent-spec index; Group stages: group index
};

// Symmetric composition of structured and dense exponentials. Repeated
// contiguous sub-chains are named groups so their dense product is reused.
struct GeneralSplitting {
    std::string id;
    std::vector<ModifiedExponentSpec> bspecs;
    std::vector<std::vector<SplitStage>> groups;
    std::vector<SplitStage> stages;
    int p1 = 2, p2 = 2;
    long long chain_product_count = 0;  // dense products in the stage chain
    bool experimental = false;
    bool verified = true;
};

// Similarity wrapper K -> F K F^{-1} with
//   F = r2(x*h^2*eps*[D,B] + y*h^4*eps*[D,[D,[D,B]]]).
struct ProcessorSpec {
    std::string id;
    double x = 0.0;
    double y = 0.0;
    SquaringScheme kernel;
    int p1 = 6, p2 = 4;
    bool verified = true;
};

struct Catalog {
    std::vector<SquaringScheme> squarings;
    std::vector<GeneralSplitting> splittings;
    std::vector<ProcessorSpec> processed;
};

const Catalog& catalog();

bool consistency_check(const SquaringScheme& scheme);
bool consistency_check(const GeneralSplitting& scheme);

DenseMatrix build_center_exponent(const PerturbedMatrix& P, double h,
                                  const ModifiedExponentSpec& spec, CostTally& tally);

// inner_order: 0 = use each exponent spec's own pade_order, else force 2 or 4.
DenseMatrix run_modified_squaring(const PerturbedMatrix& P, const SquaringScheme& scheme, double h,
                                  int s2, CostTally& tally, int inner_order = 0);

DenseMatrix run_general_splitting(const PerturbedMatrix& P, const GeneralSplitting& scheme,
                                  double h, int s2, CostTally& tally, int inner_order = 0);

DenseMatrix run_processed(const PerturbedMatrix& P, const ProcessorSpec& proc, double h, int s2,
                          CostTally& tally, int inner_order = 0);

}  // namespace expsplit

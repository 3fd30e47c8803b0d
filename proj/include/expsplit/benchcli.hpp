#pragma once

#include "expsplit/errmodel.hpp"
#include "expsplit/matrixcore.hpp"
#include "expsplit/splitcat.hpp"

#include <functional>
#include <iosfwd>

namespace expsplit {

struct ExperimentConfig {
    std::string experiment;  // longtime | rotation | rotation-large | dissipation | order-check
    std::vector<double> eps_list;
    double tolerance = 1e-6;
    std::vector<std::string> schemes;  // catalog ids, "auto", or "pade"
    std::vector<int> s_range;
    std::string out_path;
    unsigned seed = 7;
};

struct ResultRecord {
    std::string experiment;
    std::string scheme;
    double eps = 0.0;
    int s = 0;
    double h = 0.0;
    double error = 0.0;           // measured relative 1-norm error
    long long cost_thirds = 0;    // exact dense-product tally, in thirds
    double predicted_error = -1;  // < 0 when no printed bound applies
    double wall_ms = 0.0;
    bool failed = false;
};

StructuredOperator gen_rotation(double scale);
StructuredOperator gen_dissipation();

// B_{ij} = k(i-j)/(i+j), 1-based, scaled so ||B||_1 = ||D||_1; eps stays an
// explicit factor in the returned PerturbedMatrix.
PerturbedMatrix gen_perturbation(const StructuredOperator& D, double eps);

// Rotation D = [[0,1],[-1,0]] with B = [[1,1],[1,-1]]; exact(s) evaluates the
// closed form of e^{2^s (D + eps B)} via mu = sqrt(1 - 2 eps^2).
std::pair<PerturbedMatrix, std::function<DenseMatrix(int)>> gen_example2x2(double eps);

// High-accuracy oracle: order-26 Pade after scaling to one-norm <= 1.
// Its cost is never charged to any tally.
DenseMatrix reference_expm(const DenseMatrix& A);

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg);

void write_csv(const std::vector<ResultRecord>& records, std::ostream& out);
void write_csv(const std::vector<ResultRecord>& records, const std::string& path);

struct OrderEstimate {
    double p1_hat = 0.0;
    double p2_hat = 0.0;
    double residual1 = 0.0;
    double residual2 = 0.0;
};

// Measured convergence orders of the eps- and eps^2-error components on a
// fixed random diagonal problem, with exact inner exponentials.
OrderEstimate empirical_order(const std::string& scheme_id, unsigned seed = 7);

}  // namespace expsplit

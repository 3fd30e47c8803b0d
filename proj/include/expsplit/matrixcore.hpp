#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace expsplit {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularMatrix : NumericalError {
    using NumericalError::NumericalError;
};
struct DimensionMismatch : NumericalError {
    using NumericalError::NumericalError;
};
struct UnsupportedStructure : NumericalError {
    using NumericalError::NumericalError;
};
struct UnknownTolerance : NumericalError {
    using NumericalError::NumericalError;
};
struct UnknownScheme : NumericalError {
    using NumericalError::NumericalError;
};
struct NoFeasibleScaling : NumericalError {
    using NumericalError::NumericalError;
};
struct IllConditionedFit : NumericalError {
    using NumericalError::NumericalError;
};
struct InvalidConfig : NumericalError {
    using NumericalError::NumericalError;
};

// Running cost accumulator. Dense products are tracked in exact thirds so
// that inversion-solves (4/3 of a product) compare exactly as rationals.
struct CostTally {
    long long product_thirds = 0;  // dense products, in units of 1/3
    int dense_exponentials = 0;    // dense exponential fallbacks
    int inversions = 0;
    long long structured_ops = 0;  // diagnostic counter for O(k n^2) work

    void add_products(int n) { product_thirds += 3LL * n; }
    void add_inverse_multiply() {
        product_thirds += 4;
        ++inversions;
    }
    double dense_products() const { return static_cast<double>(product_thirds) / 3.0; }
    bool products_equal(long long whole, long long extra_thirds = 0) const {
        return product_thirds == 3 * whole + extra_thirds;
    }
};

class StructuredOperator {
  public:
    enum class Kind { Diagonal, BlockOscillator, GeneralSparse };

    static StructuredOperator diagonal(Vector d);
    // Coupled position/velocity pairs: block j is [[0, 1], [-omega_j^2, 0]].
    static StructuredOperator oscillator(Vector omega);
    static StructuredOperator sparse(int dim, const std::vector<Eigen::Triplet<Complex>>& entries,
                                     int bandwidth);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    int bandwidth() const { return bandwidth_; }
    const Vector& data() const { return data_; }
    const Eigen::SparseMatrix<Complex>& sparse_matrix() const { return sparse_; }

    DenseMatrix densify() const;

  private:
    StructuredOperator() = default;
    Kind kind_ = Kind::Diagonal;
    int dim_ = 0;
    int bandwidth_ = 1;
    Vector data_;                            // diagonal entries or oscillator frequencies
    Eigen::SparseMatrix<Complex> sparse_;    // GeneralSparse storage
};

struct PerturbedMatrix {
    StructuredOperator D;
    DenseMatrix B;
    double eps = 0.0;

    DenseMatrix densify() const { return D.densify() + eps * B; }
};

enum class Side { Left, Right };

double one_norm(const DenseMatrix& M);

DenseMatrix matmul(const DenseMatrix& X, const DenseMatrix& Y, CostTally& tally);

// X^{-1} Y via LU factorization + solve; costs 4/3 of a product.
DenseMatrix inverse_multiply(const DenseMatrix& X, const DenseMatrix& Y, CostTally& tally);

// D*X (Left) or X*D (Right); never touches the dense-product tally.
DenseMatrix struct_multiply(const StructuredOperator& D, const DenseMatrix& X, Side side,
                            CostTally& tally);

// ad_D^r(X) = [D,[D,...,[D,X]...]] using structured multiplies only.
DenseMatrix nested_commutator(const StructuredOperator& D, const DenseMatrix& X, int r,
                              CostTally& tally);

// exp(scale*D) in structured form; closed form for Diagonal/BlockOscillator,
// dense fallback (charged to tally->dense_exponentials) for GeneralSparse.
StructuredOperator exp_structured(const StructuredOperator& D, Complex scale,
                                  CostTally* tally = nullptr);

}  // namespace expsplit

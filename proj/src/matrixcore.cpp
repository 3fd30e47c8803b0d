#include "expsplit/matrixcore.hpp"

#include <cmath>
#include <limits>

namespace expsplit {

StructuredOperator StructuredOperator::diagonal(Vector d) {
    if (d.size() < 1) throw DimensionMismatch("diagonal operator needs at least one entry");
    StructuredOperator op;
    op.kind_ = Kind::Diagonal;
    op.dim_ = static_cast<int>(d.size());
    op.bandwidth_ = 1;
    op.data_ = std::move(d);
    return op;
}

StructuredOperator StructuredOperator::oscillator(Vector omega) {
    if (omega.size() < 1) throw DimensionMismatch("oscillator operator needs at least one block");
    StructuredOperator op;
    op.kind_ = Kind::BlockOscillator;
    op.dim_ = 2 * static_cast<int>(omega.size());
    op.bandwidth_ = 2;
    op.data_ = std::move(omega);
    return op;
}

StructuredOperator StructuredOperator::sparse(int dim,
                                              const std::vector<Eigen::Triplet<Complex>>& entries,
                                              int bandwidth) {
    if (dim < 1) throw DimensionMismatch("sparse operator needs positive dimension");
    StructuredOperator op;
    op.kind_ = Kind::GeneralSparse;
    op.dim_ = dim;
    op.bandwidth_ = bandwidth;
    op.sparse_.resize(dim, dim);
    op.sparse_.setFromTriplets(entries.begin(), entries.end());
    return op;
}

DenseMatrix StructuredOperator::densify() const {
    DenseMatrix M = DenseMatrix::Zero(dim_, dim_);
    switch (kind_) {
        case Kind::Diagonal:
            M.diagonal() = data_;
            break;
        case Kind::BlockOscillator:
            for (int j = 0; j < data_.size(); ++j) {
                const Complex w = data_[j];
                M(2 * j, 2 * j + 1) = Complex(1.0);
                M(2 * j + 1, 2 * j) = -w * w;
            }
            break;
        case Kind::GeneralSparse:
            M = DenseMatrix(sparse_);
            break;
    }
    return M;
}

double one_norm(const DenseMatrix& M) {
    if (M.size() == 0) return 0.0;
    return M.cwiseAbs().colwise().sum().maxCoeff();
}

DenseMatrix matmul(const DenseMatrix& X, const DenseMatrix& Y, CostTally& tally) {
    if (X.cols() != Y.rows()) throw DimensionMismatch("matmul dimension mismatch");
    tally.add_products(1);
    return X * Y;
}

DenseMatrix inverse_multiply(const DenseMatrix& X, const DenseMatrix& Y, CostTally& tally) {
    if (X.rows() != X.cols() || X.cols() != Y.rows())
        throw DimensionMismatch("inverse_multiply dimension mismatch");
    Eigen::PartialPivLU<DenseMatrix> lu(X);
    const double rcond = lu.rcond();
    if (!(rcond > 100.0 * std::numeric_limits<double>::epsilon()))
        throw SingularMatrix("inverse_multiply: matrix singular or too ill-conditioned");
    tally.add_inverse_multiply();
    return lu.solve(Y);
}

DenseMatrix struct_multiply(const StructuredOperator& D, const DenseMatrix& X, Side side,
                            CostTally& tally) {
    if (D.dim() != X.rows() || X.rows() != X.cols())
        throw DimensionMismatch("struct_multiply dimension mismatch");
    ++tally.structured_ops;
    switch (D.kind()) {
        case StructuredOperator::Kind::Diagonal:
            return side == Side::Left ? DenseMatrix(D.data().asDiagonal() * X)
                                      : DenseMatrix(X * D.data().asDiagonal());
        case StructuredOperator::Kind::BlockOscillator: {
            DenseMatrix R(X.rows(), X.cols());
            const Vector& w = D.data();
            if (side == Side::Left) {
                for (int j = 0; j < w.size(); ++j) {
                    R.row(2 * j) = X.row(2 * j + 1);
                    R.row(2 * j + 1) = -w[j] * w[j] * X.row(2 * j);
                }
            } else {
                for (int j = 0; j < w.size(); ++j) {
                    R.col(2 * j) = -w[j] * w[j] * X.col(2 * j + 1);
                    R.col(2 * j + 1) = X.col(2 * j);
                }
            }
            return R;
        }
        case StructuredOperator::Kind::GeneralSparse:
            return side == Side::Left ? DenseMatrix(D.sparse_matrix() * X)
                                      : DenseMatrix(X * D.sparse_matrix());
    }
    throw UnsupportedStructure("unknown structured kind");
}

DenseMatrix nested_commutator(const StructuredOperator& D, const DenseMatrix& X, int r,
                              CostTally& tally) {
    if (r < 1) throw InvalidConfig("nested_commutator requires r >= 1");
    DenseMatrix C = X;
    for (int i = 0; i < r; ++i)
        C = struct_multiply(D, C, Side::Left, tally) - struct_multiply(D, C, Side::Right, tally);
    return C;
}

namespace {

// Self-contained dense exponential (scaled Taylor) for the sparse fallback.
DenseMatrix dense_exp_fallback(const DenseMatrix& A) {
    const double nrm = one_norm(A);
    int s = 0;
    if (nrm > 0.25) s = static_cast<int>(std::ceil(std::log2(nrm / 0.25)));
    DenseMatrix X = A / std::pow(2.0, s);
    DenseMatrix T = DenseMatrix::Identity(A.rows(), A.cols());
    DenseMatrix term = T;
    for (int k = 1; k <= 25; ++k) {
        term = (term * X) / static_cast<double>(k);
        T += term;
    }
    for (int i = 0; i < s; ++i) T = T * T;
    return T;
}

}  // namespace

StructuredOperator exp_structured(const StructuredOperator& D, Complex scale, CostTally* tally) {
    switch (D.kind()) {
        case StructuredOperator::Kind::Diagonal: {
            Vector e(D.dim());
            for (int i = 0; i < D.dim(); ++i) e[i] = std::exp(scale * D.data()[i]);
            return StructuredOperator::diagonal(std::move(e));
        }
        case StructuredOperator::Kind::BlockOscillator: {
            std::vector<Eigen::Triplet<Complex>> trip;
            trip.reserve(static_cast<size_t>(2) * D.dim());
            const Vector& w = D.data();
            for (int j = 0; j < w.size(); ++j) {
                Complex c, s01, s10;
                if (std::abs(w[j]) < 1e-300) {
                    c = Complex(1.0);
                    s01 = scale;
                    s10 = Complex(0.0);
                } else {
                    const Complex wt = w[j] * scale;
                    c = std::cos(wt);
                    s01 = std::sin(wt) / w[j];
                    s10 = -w[j] * std::sin(wt);
                }
                trip.emplace_back(2 * j, 2 * j, c);
                trip.emplace_back(2 * j, 2 * j + 1, s01);
                trip.emplace_back(2 * j + 1, 2 * j, s10);
                trip.emplace_back(2 * j + 1, 2 * j + 1, c);
            }
            return StructuredOperator::sparse(D.dim(), trip, 2);
        }
        case StructuredOperator::Kind::GeneralSparse: {
            if (tally) ++tally->dense_exponentials;
            DenseMatrix E = dense_exp_fallback(scale * D.densify());
            std::vector<Eigen::Triplet<Complex>> trip;
            trip.reserve(static_cast<size_t>(E.size()));
            for (int j = 0; j < E.cols(); ++j)
                for (int i = 0; i < E.rows(); ++i)
                    if (E(i, j) != Complex(0.0)) trip.emplace_back(i, j, E(i, j));
            return StructuredOperator::sparse(D.dim(), trip, D.dim());
        }
    }
    throw UnsupportedStructure("unknown structured kind");
}

}  // namespace expsplit

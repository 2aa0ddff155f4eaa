#pragma once

#include <cstddef>
#include <vector>

namespace peakonlab {

// Dense row-major square matrix, just enough for the spectral checks.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    double frobenius_norm() const;
    double off_diagonal_norm() const;
    Matrix transposed() const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

struct JacobiOptions {
    double relative_threshold = 1e-12;  // stop when off(A) <= threshold * ||A||_F
    int max_sweeps = 50;
};

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column j is the eigenvector of values[j]
    int sweeps = 0;
    bool converged = false;
};

// Cyclic Jacobi for a symmetric matrix (only the symmetric part is used).
EigenDecomposition jacobi_eigen(Matrix a, const JacobiOptions& options = {});

}  // namespace peakonlab

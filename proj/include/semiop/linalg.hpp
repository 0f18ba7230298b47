#pragma once

#include <cstddef>
#include <vector>

#include "semiop/common.hpp"

namespace semiop {

// Dense row-major complex matrix.  Everything in this project is desk-scale
// (n <= 256), so there is no sparsity or blocking; clarity wins.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Mat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    // conjugate transpose
    Mat dagger() const;

    std::vector<cx> apply(const std::vector<cx>& x) const;
    std::vector<cx> column(std::size_t j) const;

    double norm_fro() const;
    double off_diag_norm() const;
    double max_abs() const;

    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);
    Mat& operator*=(cx s);

    friend Mat operator*(const Mat& a, const Mat& b);
    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(cx s, Mat a) { return a *= s; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cx> a_;
};

struct EigenSystem {
    std::vector<double> values; // ascending
    Mat vectors;                // columns, orthonormal in the flat metric
};

// Cyclic Jacobi diagonalization of a Hermitian matrix.  The input is
// symmetrized to (H + H^*)/2 first; sweeps continue until the off-diagonal
// mass falls below machine precision relative to ||H||_F.
EigenSystem jacobi_hermitian(Mat h, int max_sweeps = 60);

// Moore-Penrose inverse in the flat metric via jacobi_hermitian(M^* M);
// singular values below rtol * s_max count as zero.
Mat pinv_flat(const Mat& m, double rtol = kDefaultTol);

// Modified Gram-Schmidt (two passes) in the flat metric.  Vectors whose
// residual drops below rtol * (largest input norm) are dropped.
std::vector<std::vector<cx>> flat_orthonormalize(const std::vector<std::vector<cx>>& vecs,
                                                 double rtol = kDefaultTol);

} // namespace semiop

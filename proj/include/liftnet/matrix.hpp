#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace liftnet {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& v);
bool all_finite(const Vec& v);

/// Dense row-major matrix of 64-bit floats.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
    }
    Matrix(int rows, int cols, std::vector<double> entries) : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != static_cast<size_t>(rows) * cols)
            throw std::invalid_argument("Matrix: entry count does not match dimensions");
    }

    static Matrix identity(int n);
    static Matrix diag(const Vec& d);
    /// Outer product a bᵀ (rows = len(a), cols = len(b)).
    static Matrix outer(const Vec& a, const Vec& b);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix transpose() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix& operator+=(const Matrix& rhs);
    Matrix operator*(double s) const;
    Matrix& operator*=(double s);

    /// Matrix-vector product W x.
    Vec apply(const Vec& x) const;
    /// Wᵀ x without forming the transpose.
    Vec apply_transpose(const Vec& x) const;

    double frobenius_norm() const;
    double max_abs() const;
    bool is_finite() const;

    bool operator==(const Matrix& rhs) const {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Symmetric matrix; symmetrized exactly on construction so S == Sᵀ bitwise.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int dim) : m_(dim, dim) {}
    /// Symmetrizes as (M + Mᵀ)/2; requires a square input.
    explicit SymMatrix(const Matrix& m);

    static SymMatrix identity(int n) { return SymMatrix(Matrix::identity(n)); }
    static SymMatrix diag(const Vec& d) { return SymMatrix(Matrix::diag(d)); }

    int dim() const { return m_.rows(); }
    double operator()(int i, int j) const { return m_(i, j); }
    /// Sets both (i,j) and (j,i).
    void set(int i, int j, double v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }

    const Matrix& mat() const { return m_; }

    SymMatrix operator+(const SymMatrix& rhs) const { return SymMatrix(m_ + rhs.m_); }
    SymMatrix operator-(const SymMatrix& rhs) const { return SymMatrix(m_ - rhs.m_); }
    SymMatrix operator*(double s) const { return SymMatrix(m_ * s); }

    double frobenius_norm() const { return m_.frobenius_norm(); }
    bool is_finite() const { return m_.is_finite(); }

private:
    Matrix m_;
};

void ensure_finite(const Matrix& m, const std::string& what);
void ensure_finite(const Vec& v, const std::string& what);

}  // namespace liftnet

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "latticefm/errors.hpp"

namespace latfm {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// Dense exact integer matrix, row-major. No floating point anywhere in the library.
class IntMat {
public:
    IntMat() = default;
    IntMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntMat identity(std::size_t n);
    static IntMat zero(std::size_t rows, std::size_t cols) { return IntMat(rows, cols); }
    static IntMat from_rows(std::initializer_list<std::initializer_list<long>> rows);
    static IntMat diagonal(const std::vector<Int>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const IntMat& other) const = default;

    IntMat transposed() const;
    IntMat operator*(const IntMat& rhs) const;
    IntMat operator-() const;
    IntVec operator*(const IntVec& v) const;

    bool is_symmetric() const;
    bool is_zero() const;

    void swap_rows(std::size_t i, std::size_t j);
    void swap_cols(std::size_t i, std::size_t j);
    // row i += c * row j  /  col i += c * col j
    void add_row(std::size_t i, std::size_t j, const Int& c);
    void add_col(std::size_t i, std::size_t j, const Int& c);
    void negate_row(std::size_t i);
    void negate_col(std::size_t i);

    IntMat submatrix_cols(const std::vector<std::size_t>& idx) const;
    IntVec col(std::size_t j) const;
    IntVec row(std::size_t i) const;

    std::string to_string() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> data_;
};

// Dense exact rational matrix. GMP keeps mpq_class canonical (reduced, positive denominator).
class RatMat {
public:
    RatMat() = default;
    RatMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    explicit RatMat(const IntMat& m);

    static RatMat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const RatMat& other) const = default;

    RatMat transposed() const;
    RatMat operator*(const RatMat& rhs) const;
    RatVec operator*(const RatVec& v) const;
    RatVec col(std::size_t j) const;

    bool is_integral() const;
    IntMat to_int() const; // requires is_integral()

    std::string to_string() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> data_;
};

// u * m * v = d with u, v unimodular and d diagonal, d_1 | d_2 | ... | d_k, d_i >= 0.
struct SmithResult {
    IntMat u, d, v;
    std::vector<Int> diagonal() const;
    std::size_t rank() const;
};
SmithResult smith_normal_form(const IntMat& m);

// u * m = h with u unimodular, h in row-style Hermite form
// (row echelon, positive pivots, entries above a pivot reduced into [0, pivot)).
struct HermiteResult {
    IntMat h, u;
    std::size_t rank() const;
};
HermiteResult hermite_normal_form(const IntMat& m);

// Exact determinant via fraction-free Bareiss elimination.
Int det_exact(const IntMat& m);

// Exact solution of a * x = b over Q, or nullopt when inconsistent.
// Underdetermined consistent systems get free variables set to zero.
std::optional<RatVec> solve_rational(const IntMat& a, const RatVec& b);
std::optional<RatVec> solve_rational(const RatMat& a, const RatVec& b);

// Columns form a Z-basis of ker(m) on Z^cols, saturated (primitive in Z^cols).
IntMat integer_kernel_saturated(const IntMat& m);

// Inverse of a matrix with det = +-1.
IntMat inverse_unimodular(const IntMat& m);
RatMat inverse_rational(const RatMat& m);

Int gcd_vec(const IntVec& v);
IntVec mat_vec_int(const IntMat& m, const IntVec& v);
Rat bilinear(const IntMat& gram, const RatVec& x, const RatVec& y);

// Row-span equality of two integer matrices, decided by comparing Hermite forms.
bool same_row_span(const IntMat& a, const IntMat& b);

} // namespace latfm

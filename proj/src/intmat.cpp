#include "latticefm/intmat.hpp"

#include <algorithm>
#include <sstream>

namespace latfm {

IntMat IntMat::identity(std::size_t n) {
    IntMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMat IntMat::from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    IntMat m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw ValidationError("ragged row list");
        std::size_t j = 0;
        for (long x : row) m(i, j++) = x;
        ++i;
    }
    return m;
}

IntMat IntMat::diagonal(const std::vector<Int>& d) {
    IntMat m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

IntMat IntMat::transposed() const {
    IntMat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMat IntMat::operator*(const IntMat& rhs) const {
    if (cols_ != rhs.rows_) throw ValidationError("matrix product shape mismatch");
    IntMat out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

IntMat IntMat::operator-() const {
    IntMat out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = -data_[i];
    return out;
}

IntVec IntMat::operator*(const IntVec& v) const {
    if (v.size() != cols_) throw ValidationError("matrix-vector shape mismatch");
    IntVec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

bool IntMat::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

bool IntMat::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Int& x) { return x == 0; });
}

void IntMat::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void IntMat::swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
}

void IntMat::add_row(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) += c * (*this)(j, k);
}

void IntMat::add_col(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < rows_; ++k) (*this)(k, i) += c * (*this)(k, j);
}

void IntMat::negate_row(std::size_t i) {
    for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) = -(*this)(i, k);
}

void IntMat::negate_col(std::size_t i) {
    for (std::size_t k = 0; k < rows_; ++k) (*this)(k, i) = -(*this)(k, i);
}

IntMat IntMat::submatrix_cols(const std::vector<std::size_t>& idx) const {
    IntMat out(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = (*this)(i, idx[j]);
    return out;
}

IntVec IntMat::col(std::size_t j) const {
    IntVec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

IntVec IntMat::row(std::size_t i) const {
    IntVec v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
}

std::string IntMat::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

RatMat::RatMat(const IntMat& m) : rows_(m.rows()), cols_(m.cols()), data_(rows_ * cols_) {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = Rat(m(i, j));
}

RatMat RatMat::identity(std::size_t n) {
    RatMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMat RatMat::transposed() const {
    RatMat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RatMat RatMat::operator*(const RatMat& rhs) const {
    if (cols_ != rhs.rows_) throw ValidationError("matrix product shape mismatch");
    RatMat out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rat& a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

RatVec RatMat::operator*(const RatVec& v) const {
    if (v.size() != cols_) throw ValidationError("matrix-vector shape mismatch");
    RatVec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

RatVec RatMat::col(std::size_t j) const {
    RatVec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

bool RatMat::is_integral() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Rat& x) { return x.get_den() == 1; });
}

IntMat RatMat::to_int() const {
    if (!is_integral()) throw ValidationError("matrix is not integral");
    IntMat out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).get_num();
    return out;
}

std::string RatMat::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

std::vector<Int> SmithResult::diagonal() const {
    std::vector<Int> out;
    std::size_t n = std::min(d.rows(), d.cols());
    for (std::size_t i = 0; i < n; ++i) out.push_back(d(i, i));
    return out;
}

std::size_t SmithResult::rank() const {
    std::size_t r = 0;
    for (const Int& x : diagonal())
        if (x != 0) ++r;
    return r;
}

namespace {

// position of a nonzero entry of smallest absolute value in d[t.., t..], if any
bool find_min_pivot(const IntMat& d, std::size_t t, std::size_t& pi, std::size_t& pj) {
    bool found = false;
    Int best;
    for (std::size_t i = t; i < d.rows(); ++i)
        for (std::size_t j = t; j < d.cols(); ++j) {
            if (d(i, j) == 0) continue;
            Int a = abs(d(i, j));
            if (!found || a < best) {
                found = true;
                best = a;
                pi = i;
                pj = j;
            }
        }
    return found;
}

} // namespace

SmithResult smith_normal_form(const IntMat& m) {
    SmithResult r{IntMat::identity(m.rows()), m, IntMat::identity(m.cols())};
    IntMat& d = r.d;
    std::size_t n = std::min(d.rows(), d.cols());

    for (std::size_t t = 0; t < n; ++t) {
        std::size_t pi, pj;
        if (!find_min_pivot(d, t, pi, pj)) break;
        d.swap_rows(t, pi);
        r.u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        r.v.swap_cols(t, pj);

        for (;;) {
            // clear column t below the pivot (Euclid on rows)
            for (std::size_t i = t + 1; i < d.rows(); ++i) {
                while (d(i, t) != 0) {
                    if (abs(d(i, t)) < abs(d(t, t))) {
                        d.swap_rows(t, i);
                        r.u.swap_rows(t, i);
                    }
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
                    if (q != 0) {
                        d.add_row(i, t, -q);
                        r.u.add_row(i, t, -q);
                    }
                }
            }
            // clear row t to the right of the pivot
            for (std::size_t j = t + 1; j < d.cols(); ++j) {
                while (d(t, j) != 0) {
                    if (abs(d(t, j)) < abs(d(t, t))) {
                        d.swap_cols(t, j);
                        r.v.swap_cols(t, j);
                    }
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
                    if (q != 0) {
                        d.add_col(j, t, -q);
                        r.v.add_col(j, t, -q);
                    }
                }
            }
            // column swaps above may have refilled column t
            bool col_clear = true;
            for (std::size_t i = t + 1; i < d.rows(); ++i)
                if (d(i, t) != 0) col_clear = false;
            if (!col_clear) continue;

            // enforce pivot | remaining submatrix, so invariant factors chain
            bool divides = true;
            for (std::size_t i = t + 1; i < d.rows() && divides; ++i)
                for (std::size_t j = t + 1; j < d.cols() && divides; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        d.add_row(t, i, 1);
                        r.u.add_row(t, i, 1);
                        divides = false;
                    }
            if (divides) break;
        }
    }

    for (std::size_t t = 0; t < n; ++t)
        if (d(t, t) < 0) {
            d.negate_row(t);
            r.u.negate_row(t);
        }
    return r;
}

std::size_t HermiteResult::rank() const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        bool nonzero = false;
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (h(i, j) != 0) nonzero = true;
        if (nonzero) ++r;
    }
    return r;
}

HermiteResult hermite_normal_form(const IntMat& m) {
    HermiteResult r{m, IntMat::identity(m.rows())};
    IntMat& h = r.h;
    std::size_t row = 0;
    for (std::size_t col = 0; col < h.cols() && row < h.rows(); ++col) {
        // gcd the column entries at and below `row` into a single pivot
        for (;;) {
            std::size_t best = h.rows();
            for (std::size_t i = row; i < h.rows(); ++i) {
                if (h(i, col) == 0) continue;
                if (best == h.rows() || abs(h(i, col)) < abs(h(best, col))) best = i;
            }
            if (best == h.rows()) break;
            h.swap_rows(row, best);
            r.u.swap_rows(row, best);
            bool clear = true;
            for (std::size_t i = row + 1; i < h.rows(); ++i) {
                if (h(i, col) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), h(i, col).get_mpz_t(), h(row, col).get_mpz_t());
                h.add_row(i, row, -q);
                r.u.add_row(i, row, -q);
                if (h(i, col) != 0) clear = false;
            }
            if (clear) break;
        }
        if (h(row, col) == 0) continue;
        if (h(row, col) < 0) {
            h.negate_row(row);
            r.u.negate_row(row);
        }
        for (std::size_t i = 0; i < row; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h(i, col).get_mpz_t(), h(row, col).get_mpz_t());
            if (q != 0) {
                h.add_row(i, row, -q);
                r.u.add_row(i, row, -q);
            }
        }
        ++row;
    }
    return r;
}

Int det_exact(const IntMat& m) {
    if (m.rows() != m.cols()) throw ValidationError("determinant of non-square matrix");
    std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMat a = m;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t piv = n;
            for (std::size_t i = k + 1; i < n; ++i)
                if (a(i, k) != 0) {
                    piv = i;
                    break;
                }
            if (piv == n) return 0;
            a.swap_rows(k, piv);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

std::optional<RatVec> solve_rational(const IntMat& a, const RatVec& b) {
    return solve_rational(RatMat(a), b);
}

std::optional<RatVec> solve_rational(const RatMat& a, const RatVec& b) {
    if (b.size() != a.rows()) throw ValidationError("solve: rhs length mismatch");
    std::size_t rows = a.rows(), cols = a.cols();
    RatMat w(rows, cols + 1);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) w(i, j) = a(i, j);
        w(i, cols) = b[i];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = rows;
        for (std::size_t i = row; i < rows; ++i)
            if (w(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv == rows) continue;
        for (std::size_t j = 0; j <= cols; ++j) std::swap(w(row, j), w(piv, j));
        Rat inv = 1 / w(row, col);
        for (std::size_t j = col; j <= cols; ++j) w(row, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || w(i, col) == 0) continue;
            Rat f = w(i, col);
            for (std::size_t j = col; j <= cols; ++j) w(i, j) -= f * w(row, j);
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (std::size_t i = row; i < rows; ++i)
        if (w(i, cols) != 0) return std::nullopt;
    RatVec x(cols, Rat(0));
    for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = w(i, cols);
    return x;
}

IntMat integer_kernel_saturated(const IntMat& m) {
    SmithResult s = smith_normal_form(m);
    std::size_t rank = s.rank();
    std::vector<std::size_t> idx;
    for (std::size_t j = rank; j < m.cols(); ++j) idx.push_back(j);
    // columns of v past the rank form a basis of the kernel; v unimodular makes it saturated
    return s.v.submatrix_cols(idx);
}

IntMat inverse_unimodular(const IntMat& m) {
    RatMat inv = inverse_rational(RatMat(m));
    if (!inv.is_integral()) throw ValidationError("matrix is not unimodular");
    return inv.to_int();
}

RatMat inverse_rational(const RatMat& m) {
    if (m.rows() != m.cols()) throw ValidationError("inverse of non-square matrix");
    std::size_t n = m.rows();
    RatMat out(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        RatVec e(n, Rat(0));
        e[j] = 1;
        auto x = solve_rational(m, e);
        if (!x) throw ValidationError("matrix is singular");
        for (std::size_t i = 0; i < n; ++i) out(i, j) = (*x)[i];
    }
    return out;
}

Int gcd_vec(const IntVec& v) {
    Int g = 0;
    for (const Int& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

IntVec mat_vec_int(const IntMat& m, const IntVec& v) { return m * v; }

Rat bilinear(const IntMat& gram, const RatVec& x, const RatVec& y) {
    if (x.size() != gram.rows() || y.size() != gram.cols())
        throw ValidationError("bilinear: vector length mismatch");
    Rat acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        Rat row = 0;
        for (std::size_t j = 0; j < y.size(); ++j)
            if (y[j] != 0) row += Rat(gram(i, j)) * y[j];
        acc += x[i] * row;
    }
    return acc;
}

namespace {
IntMat nonzero_rows(const IntMat& h) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (h(i, j) != 0) {
                keep.push_back(i);
                break;
            }
    IntMat out(keep.size(), h.cols());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) out(i, j) = h(keep[i], j);
    return out;
}
} // namespace

bool same_row_span(const IntMat& a, const IntMat& b) {
    if (a.cols() != b.cols()) return false;
    return nonzero_rows(hermite_normal_form(a).h) == nonzero_rows(hermite_normal_form(b).h);
}

} // namespace latfm

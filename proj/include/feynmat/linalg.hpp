#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "feynmat/element_set.hpp"
#include "feynmat/errors.hpp"
#include "feynmat/scalar.hpp"

namespace feynmat {

using Index = Eigen::Index;

template <class S>
using Dense = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using RowVector = Eigen::Matrix<S, 1, Eigen::Dynamic>;
template <class S>
using ColVector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using IntDense = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// Entrywise equality.  (Eigen's operator== is ambiguous for multiprecision
/// scalars.)
template <class S>
bool same_entries(const Dense<S>& a, const Dense<S>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            if (!(a(i, j) == b(i, j))) return false;
    return true;
}

/// Dense matrix whose columns carry distinct string labels (edge ids).
template <class S>
class LabeledMatrix {
public:
    using Scalar = S;
    static constexpr Field field = scalar_field<S>::value;

    LabeledMatrix() = default;
    LabeledMatrix(Dense<S> values, std::vector<std::string> labels)
        : values_(std::move(values)), labels_(std::move(labels)) {
        if (static_cast<Index>(labels_.size()) != values_.cols())
            throw DimensionError("column label count " + std::to_string(labels_.size()) +
                                 " does not match column count " + std::to_string(values_.cols()));
        std::unordered_set<std::string> seen;
        for (const auto& l : labels_) {
            if (l.empty()) throw DomainError("empty column label");
            if (!seen.insert(l).second) throw DomainError("duplicate column label '" + l + "'");
        }
    }

    const Dense<S>& values() const { return values_; }
    const std::vector<std::string>& labels() const { return labels_; }
    Index rows() const { return values_.rows(); }
    Index cols() const { return values_.cols(); }
    const S& operator()(Index r, Index c) const { return values_(r, c); }

    bool has_label(const std::string& label) const {
        for (const auto& l : labels_)
            if (l == label) return true;
        return false;
    }
    std::size_t index_of(const std::string& label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == label) return i;
        throw LookupError("unknown element '" + label + "'");
    }

    /// Columns in the given order, labels following.
    LabeledMatrix select_columns(const std::vector<std::size_t>& idx) const {
        std::vector<Index> cols(idx.begin(), idx.end());
        std::vector<std::string> labels;
        labels.reserve(idx.size());
        for (auto i : idx) labels.push_back(labels_.at(i));
        return LabeledMatrix(values_(Eigen::all, cols), std::move(labels));
    }
    LabeledMatrix select_columns(const std::vector<std::string>& names) const {
        std::vector<std::size_t> idx;
        for (const auto& n : names) idx.push_back(index_of(n));
        return select_columns(idx);
    }
    LabeledMatrix without_column(std::size_t c) const {
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (i != c) keep.push_back(i);
        return select_columns(keep);
    }

    friend bool operator==(const LabeledMatrix& a, const LabeledMatrix& b) {
        return a.labels_ == b.labels_ && a.values_.rows() == b.values_.rows() &&
               a.values_.cols() == b.values_.cols() && same_entries(a.values_, b.values_);
    }

private:
    Dense<S> values_;
    std::vector<std::string> labels_;
};

using RationalMatrix = LabeledMatrix<Rational>;

/// Integer matrix from a list of rows; convenient for fixtures and tests.
Dense<Rational> make_dense(std::initializer_list<std::initializer_list<long long>> rows);
RationalMatrix make_labeled(std::initializer_list<std::initializer_list<long long>> rows,
                            std::vector<std::string> labels);
/// Labels "1", "2", ..., "n".
std::vector<std::string> numbered_labels(std::size_t n, const std::string& prefix = "");

// ---------------------------------------------------------------------------
// Determinants

/// Fraction-free (Bareiss) elimination.  Works over any integral domain whose
/// scalar type provides exact division, including polynomial rings.  Full
/// pivoting on the cheapest entry keeps polynomial intermediates small.
template <class S>
S det(const Dense<S>& m) {
    if (m.rows() != m.cols())
        throw DimensionError("determinant of non-square " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + " matrix");
    const Index n = m.rows();
    if (n == 0) return S(1);
    Dense<S> a = m;
    S prev(1);
    bool negate = false;
    for (Index k = 0; k + 1 < n; ++k) {
        Index pr = -1, pc = -1;
        std::size_t best = 0;
        for (Index i = k; i < n; ++i)
            for (Index j = k; j < n; ++j) {
                if (is_zero(a(i, j))) continue;
                const std::size_t c = pivot_cost(a(i, j));
                if (pr < 0 || c < best) {
                    pr = i;
                    pc = j;
                    best = c;
                }
            }
        if (pr < 0) return S(0);
        if (pr != k) {
            a.row(k).swap(a.row(pr));
            negate = !negate;
        }
        if (pc != k) {
            a.col(k).swap(a.col(pc));
            negate = !negate;
        }
        for (Index i = k + 1; i < n; ++i) {
            for (Index j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
            a(i, k) = S(0);
        }
        prev = a(k, k);
    }
    return negate ? S(S(0) - a(n - 1, n - 1)) : a(n - 1, n - 1);
}

/// Bareiss over 128-bit integers; nullopt if an intermediate minor leaves the
/// 62-bit range.
std::optional<long long> det_integer(const IntDense& m);

/// Entrywise conversion; nullopt unless every entry is an integer of at most
/// 2^31 in magnitude.
std::optional<IntDense> to_integer_matrix(const Dense<Rational>& m);

/// Cofactor expansion along the first row.  Exponential; intended as an
/// independent check for small matrices.
template <class S>
S det_cofactor(const Dense<S>& m) {
    if (m.rows() != m.cols()) throw DimensionError("determinant of non-square matrix");
    const Index n = m.rows();
    if (n == 0) return S(1);
    if (n == 1) return m(0, 0);
    S total(0);
    for (Index j = 0; j < n; ++j) {
        if (is_zero(m(0, j))) continue;
        std::vector<Index> keep;
        for (Index c = 0; c < n; ++c)
            if (c != j) keep.push_back(c);
        Dense<S> minor = m.bottomRows(n - 1)(Eigen::all, keep);
        S term = m(0, j) * det_cofactor(minor);
        total = (j % 2 == 0) ? S(total + term) : S(total - term);
    }
    return total;
}

/// Determinants of maximal column-selected minors of a fixed matrix with an
/// integer fast path.
template <class S>
class ColumnMinors {
public:
    explicit ColumnMinors(const Dense<S>& m) : m_(m) {
        if constexpr (std::is_same_v<S, Rational>) int_ = to_integer_matrix(m);
    }
    S operator()(const std::vector<std::size_t>& cols) const {
        std::vector<Index> c(cols.begin(), cols.end());
        if constexpr (std::is_same_v<S, Rational>) {
            if (int_) {
                IntDense sub = (*int_)(Eigen::all, c);
                if (auto d = det_integer(sub)) return Rational(*d);
            }
        }
        return det<S>(m_(Eigen::all, c));
    }

private:
    Dense<S> m_;
    std::optional<IntDense> int_;
};

// ---------------------------------------------------------------------------
// Row reduction

template <class S>
struct Rref {
    Dense<S> matrix;            // zero rows removed
    std::vector<Index> pivots;  // pivot column of each row
    std::size_t rank() const { return pivots.size(); }
};

/// Reduced row echelon form.  Columns are scanned left to right; the pivot of a
/// column is the first remaining row with a nonzero entry.  Zero rows are
/// dropped and column order is never changed.
template <class S>
Rref<S> rref(const Dense<S>& m) {
    Dense<S> a = m;
    const Index rows = a.rows(), cols = a.cols();
    Rref<S> out;
    Index row = 0;
    for (Index c = 0; c < cols && row < rows; ++c) {
        Index p = row;
        while (p < rows && is_zero(a(p, c))) ++p;
        if (p == rows) continue;
        if (p != row) a.row(p).swap(a.row(row));
        if (a(row, c) != S(1)) {
            const S inv = S(1) / a(row, c);
            for (Index j = 0; j < cols; ++j) a(row, j) = a(row, j) * inv;
        }
        for (Index r = 0; r < rows; ++r) {
            if (r == row || is_zero(a(r, c))) continue;
            const S f = a(r, c);
            for (Index j = 0; j < cols; ++j) a(r, j) = a(r, j) - f * a(row, j);
        }
        out.pivots.push_back(c);
        ++row;
    }
    out.matrix = a.topRows(row);
    return out;
}

template <class S>
std::size_t rank(const Dense<S>& m) {
    return rref(m).rank();
}

/// Labeled variant: labels stay attached to their (unmoved) columns.
template <class S>
std::pair<LabeledMatrix<S>, std::vector<std::size_t>> rref(const LabeledMatrix<S>& m) {
    auto r = rref(m.values());
    std::vector<std::size_t> piv(r.pivots.begin(), r.pivots.end());
    return {LabeledMatrix<S>(std::move(r.matrix), m.labels()), std::move(piv)};
}

/// Rational solution of a x = b when one exists (free variables set to zero).
std::optional<ColVector<Rational>> solve(const Dense<Rational>& a, const ColVector<Rational>& b);

/// Basis of the right null space, one column per non-pivot column of rref(m),
/// with a 1 in that column (the fundamental-circuit vectors of the pivot base).
Dense<Rational> null_space(const Dense<Rational>& m);

// ---------------------------------------------------------------------------
// Total unimodularity and field casts

struct UnimodularityVerdict {
    bool unimodular = true;
    // Witness of the first violation (empty when unimodular).
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    Rational det = 0;
};

/// Exhaustive check of every square submatrix in increasing size; returns the
/// first violation found.
UnimodularityVerdict is_totally_unimodular(const Dense<Rational>& m);

bool entries_in_unit_range(const Dense<Rational>& m);

template <int P>
Dense<Fp<P>> cast_to_field(const Dense<Rational>& m) {
    Dense<Fp<P>> out(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            const Rational& x = m(i, j);
            if (x == 0)
                out(i, j) = Fp<P>(0);
            else if (x == 1)
                out(i, j) = Fp<P>(1);
            else if (x == -1)
                out(i, j) = Fp<P>(-1);
            else
                throw DomainError("entry " + to_string(x) + " at (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ") is outside {-1,0,1}");
        }
    return out;
}

template <int P>
LabeledMatrix<Fp<P>> cast_to_field(const RationalMatrix& m) {
    return LabeledMatrix<Fp<P>>(cast_to_field<P>(m.values()), m.labels());
}

// ---------------------------------------------------------------------------
// Matrix literal text format
//
//   # comment
//   a b c d          <- column labels
//   -1 -1 0 0        <- rows of integers or n/d rationals
//   0 1 1 1

RationalMatrix parse_matrix_literal(std::istream& in);
RationalMatrix parse_matrix_literal(const std::string& text);

template <class S>
void write_matrix_literal(std::ostream& os, const LabeledMatrix<S>& m);
template <class S>
std::string matrix_literal(const LabeledMatrix<S>& m);

}  // namespace feynmat

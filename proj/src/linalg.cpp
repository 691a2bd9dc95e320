#include "feynmat/linalg.hpp"

#include <iomanip>
#include <istream>
#include <sstream>

namespace feynmat {

Dense<Rational> make_dense(std::initializer_list<std::initializer_list<long long>> rows) {
    const Index r = static_cast<Index>(rows.size());
    const Index c = r == 0 ? 0 : static_cast<Index>(rows.begin()->size());
    Dense<Rational> m(r, c);
    Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Index>(row.size()) != c) throw DimensionError("ragged matrix literal");
        Index j = 0;
        for (long long v : row) m(i, j++) = Rational(v);
        ++i;
    }
    return m;
}

RationalMatrix make_labeled(std::initializer_list<std::initializer_list<long long>> rows,
                            std::vector<std::string> labels) {
    return RationalMatrix(make_dense(rows), std::move(labels));
}

std::vector<std::string> numbered_labels(std::size_t n, const std::string& prefix) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

std::optional<long long> det_integer(const IntDense& m) {
    if (m.rows() != m.cols()) throw DimensionError("determinant of non-square matrix");
    const Index n = m.rows();
    if (n == 0) return 1;
    constexpr __int128 limit = static_cast<__int128>(1) << 62;
    Eigen::Matrix<__int128, Eigen::Dynamic, Eigen::Dynamic> a = m.cast<__int128>();
    __int128 prev = 1;
    bool negate = false;
    for (Index k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            Index p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            a.row(k).swap(a.row(p));
            negate = !negate;
        }
        for (Index i = k + 1; i < n; ++i)
            for (Index j = k + 1; j < n; ++j) {
                const __int128 v = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
                if (v >= limit || v <= -limit) return std::nullopt;
                a(i, j) = v;
            }
        prev = a(k, k);
    }
    const __int128 d = negate ? -a(n - 1, n - 1) : a(n - 1, n - 1);
    return static_cast<long long>(d);
}

std::optional<IntDense> to_integer_matrix(const Dense<Rational>& m) {
    IntDense out(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            long long v = 0;
            if (!to_int64(m(i, j), v) || v > (1LL << 31) || v < -(1LL << 31)) return std::nullopt;
            out(i, j) = v;
        }
    return out;
}

std::optional<ColVector<Rational>> solve(const Dense<Rational>& a, const ColVector<Rational>& b) {
    if (a.rows() != b.rows()) throw DimensionError("right-hand side length mismatch");
    Dense<Rational> aug(a.rows(), a.cols() + 1);
    aug.leftCols(a.cols()) = a;
    aug.col(a.cols()) = b;
    const auto r = rref(aug);
    ColVector<Rational> x = ColVector<Rational>::Zero(a.cols());
    for (std::size_t i = 0; i < r.pivots.size(); ++i) {
        if (r.pivots[i] == a.cols()) return std::nullopt;
        x(r.pivots[i]) = r.matrix(static_cast<Index>(i), a.cols());
    }
    return x;
}

Dense<Rational> null_space(const Dense<Rational>& m) {
    const auto r = rref(m);
    std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
    for (auto p : r.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<Index> free_cols;
    for (Index c = 0; c < m.cols(); ++c)
        if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);
    Dense<Rational> n = Dense<Rational>::Zero(m.cols(), static_cast<Index>(free_cols.size()));
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        const Index f = free_cols[k];
        n(f, static_cast<Index>(k)) = 1;
        for (std::size_t i = 0; i < r.pivots.size(); ++i)
            n(r.pivots[i], static_cast<Index>(k)) = -r.matrix(static_cast<Index>(i), f);
    }
    return n;
}

bool entries_in_unit_range(const Dense<Rational>& m) {
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0 && m(i, j) != 1 && m(i, j) != -1) return false;
    return true;
}

UnimodularityVerdict is_totally_unimodular(const Dense<Rational>& m) {
    UnimodularityVerdict v;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0 && m(i, j) != 1 && m(i, j) != -1) {
                v.unimodular = false;
                v.rows = {static_cast<std::size_t>(i)};
                v.cols = {static_cast<std::size_t>(j)};
                v.det = m(i, j);
                return v;
            }
    const auto im = to_integer_matrix(m);  // entries are in {-1,0,1}
    const std::size_t rows = static_cast<std::size_t>(m.rows());
    const std::size_t cols = static_cast<std::size_t>(m.cols());
    for (std::size_t k = 2; k <= std::min(rows, cols); ++k) {
        bool found = false;
        for_each_combination(rows, k, [&](const std::vector<std::size_t>& rs) {
            std::vector<Index> ri(rs.begin(), rs.end());
            const IntDense strip = (*im)(ri, Eigen::all);
            for_each_combination(cols, k, [&](const std::vector<std::size_t>& cs) {
                std::vector<Index> ci(cs.begin(), cs.end());
                const long long d = *det_integer(strip(Eigen::all, ci));
                if (d < -1 || d > 1) {
                    v.unimodular = false;
                    v.rows = rs;
                    v.cols = cs;
                    v.det = d;
                    found = true;
                }
                return !found;
            });
            return !found;
        });
        if (found) return v;
    }
    return v;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

RationalMatrix parse_matrix_literal(std::istream& in) {
    std::string line;
    std::vector<std::string> labels;
    std::vector<std::vector<Rational>> rows;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (labels.empty()) {
            labels = std::move(toks);
            continue;
        }
        if (toks.size() != labels.size())
            throw SchemaError("line " + std::to_string(lineno) + ": expected " + std::to_string(labels.size()) +
                              " entries, found " + std::to_string(toks.size()));
        std::vector<Rational> row;
        for (const auto& t : toks) {
            try {
                row.push_back(parse_rational(t));
            } catch (const SchemaError& e) {
                throw SchemaError("line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        rows.push_back(std::move(row));
    }
    if (labels.empty()) throw SchemaError("matrix literal has no label line");
    Dense<Rational> m(static_cast<Index>(rows.size()), static_cast<Index>(labels.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < labels.size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return RationalMatrix(std::move(m), std::move(labels));
}

RationalMatrix parse_matrix_literal(const std::string& text) {
    std::istringstream ss(text);
    return parse_matrix_literal(ss);
}

template <class S>
void write_matrix_literal(std::ostream& os, const LabeledMatrix<S>& m) {
    std::vector<std::vector<std::string>> cells(static_cast<std::size_t>(m.rows()));
    std::vector<std::size_t> width(m.labels().size());
    for (std::size_t j = 0; j < m.labels().size(); ++j) width[j] = m.labels()[j].size();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            cells[static_cast<std::size_t>(i)].push_back(to_string(m(i, j)));
            width[static_cast<std::size_t>(j)] =
                std::max(width[static_cast<std::size_t>(j)], cells[static_cast<std::size_t>(i)].back().size());
        }
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) os << ' ';
            os << std::setw(static_cast<int>(width[j])) << row[j];
        }
        os << '\n';
    };
    emit(m.labels());
    for (const auto& row : cells) emit(row);
}

template <class S>
std::string matrix_literal(const LabeledMatrix<S>& m) {
    std::ostringstream os;
    write_matrix_literal(os, m);
    return os.str();
}

template void write_matrix_literal(std::ostream&, const LabeledMatrix<Rational>&);
template void write_matrix_literal(std::ostream&, const LabeledMatrix<F2>&);
template void write_matrix_literal(std::ostream&, const LabeledMatrix<F3>&);
template std::string matrix_literal(const LabeledMatrix<Rational>&);
template std::string matrix_literal(const LabeledMatrix<F2>&);
template std::string matrix_literal(const LabeledMatrix<F3>&);

}  // namespace feynmat

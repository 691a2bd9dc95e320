#include "feynmat/tensor_reduce.hpp"

#include <algorithm>
#include <sstream>

namespace feynmat {

namespace {

using Row = std::vector<Rational>;

std::vector<Row> rows_of(const Dense<Rational>& m) {
    std::vector<Row> out(static_cast<std::size_t>(m.rows()), Row(static_cast<std::size_t>(m.cols())));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return out;
}

Dense<Rational> from_rows(const std::vector<Row>& rows, std::size_t cols) {
    Dense<Rational> m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return m;
}

bool unit_entry(const Rational& x) { return x == 0 || x == 1 || x == -1; }

long long as_integer(const Rational& q) {
    long long v = 0;
    if (!to_int64(q, v)) throw IntegrityError("expected an integer weight, got " + to_string(q));
    return v;
}

}  // namespace

DotPair DotPair::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size() ||
        text.find(':', colon + 1) != std::string::npos)
        throw SchemaError("pair '" + text + "' must look like e1:e2");
    return {text.substr(0, colon), text.substr(colon + 1)};
}

std::string to_string(const DotPair& p) { return p.first + ":" + p.second; }

// ---------------------------------------------------------------------------
// BlockMatrix

std::optional<std::size_t> BlockMatrix::pivot_row(std::size_t col) const {
    for (std::size_t r = 0; r < pivot.size(); ++r)
        if (pivot[r] == col) return r;
    return std::nullopt;
}

RationalMatrix BlockMatrix::layout() const {
    std::vector<std::size_t> order(pivot.begin(), pivot.end());
    for (std::size_t c = 0; c < matrix.labels().size(); ++c)
        if (std::find(pivot.begin(), pivot.end(), c) == pivot.end()) order.push_back(c);
    return matrix.select_columns(order);
}

bool BlockMatrix::well_formed() const {
    const auto& m = matrix.values();
    if (pivot.size() != static_cast<std::size_t>(m.rows()) || top_rows > pivot.size()) return false;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (!unit_entry(m(i, j))) return false;
    for (std::size_t r = 0; r < pivot.size(); ++r)
        for (Index i = 0; i < m.rows(); ++i)
            if (m(i, static_cast<Index>(pivot[r])) != (static_cast<std::size_t>(i) == r ? 1 : 0)) return false;
    return true;
}

std::vector<Rational> safe_combine(const std::vector<Rational>& r1, const std::vector<Rational>& r2, std::size_t i) {
    if (r1.size() != r2.size()) throw DimensionError("rows of different length");
    if (i >= r1.size()) throw DimensionError("column out of range");
    if (r1[i] == 0 || r2[i] == 0)
        throw DomainError("safe_combine needs both rows nonzero in column " + std::to_string(i));
    Row out(r1.size());
    for (std::size_t c = 0; c < r1.size(); ++c) {
        out[c] = r2[i] * r1[c] - r1[i] * r2[c];
        if (!unit_entry(out[c]))
            throw IntegrityError("row combination produced " + to_string(out[c]) + " in column " + std::to_string(c) +
                                 "; the rows carry a 2x2 minor of ±2 and cannot represent a binary matroid");
    }
    return out;
}

BlockMatrix normalize_to_ic(const RationalMatrix& m) {
    if (!entries_in_unit_range(m.values())) throw DomainError("normalize_to_ic expects entries in {-1, 0, 1}");
    auto rows = rows_of(m.values());
    const std::size_t cols = static_cast<std::size_t>(m.cols());
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[r]);
        if (rows[r][c] == -1)
            for (auto& x : rows[r]) x = -x;
        for (std::size_t x = 0; x < rows.size(); ++x)
            if (x != r && rows[x][c] != 0) rows[x] = safe_combine(rows[x], rows[r], c);
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    BlockMatrix out{RationalMatrix(from_rows(rows, cols), m.labels()), pivots, r};
    return out;
}

BlockMatrix normalize_to_ic(const FeynGraph& g, bool externals) {
    const auto b = incidence_matrix(g);
    if (!externals || g.externals().empty()) return normalize_to_ic(b);
    const Index ne = b.cols(), nl = static_cast<Index>(g.externals().size());
    Dense<Rational> m = Dense<Rational>::Zero(b.rows(), ne + nl);
    m.leftCols(ne) = b.values();
    auto labels = b.labels();
    for (Index l = 0; l < nl; ++l) {
        const auto& x = g.externals()[static_cast<std::size_t>(l)];
        m(static_cast<Index>(g.vertex_index(x.vertex)), ne + l) = 1;
        labels.push_back(x.id);
    }
    return normalize_to_ic(RationalMatrix(std::move(m), std::move(labels)));
}

BlockMatrix repivot(const BlockMatrix& a, std::size_t row, std::size_t col) {
    if (row >= a.pivot.size()) throw DimensionError("row out of range");
    if (a.pivot_row(col)) throw DomainError("column '" + a.matrix.labels()[col] + "' is already a pivot");
    auto rows = rows_of(a.matrix.values());
    if (rows[row][col] == 0) throw DomainError("cannot pivot on a zero entry");
    if (rows[row][col] == -1)
        for (auto& x : rows[row]) x = -x;
    for (std::size_t x = 0; x < rows.size(); ++x)
        if (x != row && rows[x][col] != 0) rows[x] = safe_combine(rows[x], rows[row], col);
    BlockMatrix out = a;
    out.matrix = RationalMatrix(from_rows(rows, a.matrix.labels().size()), a.matrix.labels());
    out.pivot[row] = col;
    return out;
}

Coextension coextend_pair(const BlockMatrix& a, std::size_t i, std::size_t j, const std::string& label, bool flip) {
    const std::size_t n = a.matrix.labels().size();
    if (i == j) throw DomainError("coextension needs two distinct columns");
    if (i >= n || j >= n) throw DimensionError("column out of range");
    for (const auto& l : a.matrix.labels())
        if (l == label) throw DomainError("element '" + label + "' already exists");
    const auto pi = a.pivot_row(i), pj = a.pivot_row(j);
    if ((pi && *pi >= a.top_rows) || (pj && *pj >= a.top_rows))
        throw DomainError("pairs must consist of graph elements, not coextension elements");

    auto rows = rows_of(a.matrix.values());
    for (auto& r : rows) r.push_back(0);
    Row pre(n + 1, 0);
    pre[n] = 1;
    Coextension out;
    Row fin;
    if (!pi && !pj) {
        out.construction = 1;
        out.v_i = 1;
        out.v_j = flip ? 1 : -1;
        pre[i] = out.v_i;
        pre[j] = out.v_j;
        fin = pre;
    } else if (!pi || !pj) {
        out.construction = 2;
        const bool i_is_pivot = pi.has_value();
        const std::size_t ip = i_is_pivot ? i : j, jc = i_is_pivot ? j : i;
        const std::size_t p = i_is_pivot ? *pi : *pj;
        const Rational eps = rows[p][jc];
        const Rational v1 = -1;
        const Rational v2 = eps != 0 ? Rational(-eps) : Rational(flip ? -1 : 1);
        pre[ip] = v1;
        pre[jc] = v2;
        out.v_i = i_is_pivot ? v1 : v2;
        out.v_j = i_is_pivot ? v2 : v1;
        fin = safe_combine(pre, rows[p], ip);
    } else {
        out.construction = 3;
        std::optional<std::size_t> shared;
        for (std::size_t k = 0; k < n && !shared; ++k)
            if (!a.pivot_row(k) && rows[*pi][k] != 0 && rows[*pj][k] != 0) shared = k;
        if (shared) {
            out.v_i = rows[*pi][*shared];
            out.v_j = -rows[*pj][*shared];
        } else {
            out.v_i = 1;
            out.v_j = flip ? 1 : -1;
        }
        pre[i] = out.v_i;
        pre[j] = out.v_j;
        fin = safe_combine(safe_combine(pre, rows[*pi], i), rows[*pj], j);
    }
    rows.push_back(fin);
    auto labels = a.matrix.labels();
    labels.push_back(label);
    out.matrix.matrix = RationalMatrix(from_rows(rows, n + 1), std::move(labels));
    out.matrix.pivot = a.pivot;
    out.matrix.pivot.push_back(n);
    out.matrix.top_rows = a.top_rows;
    if (!out.matrix.well_formed()) throw IntegrityError("coextension left block form");
    return out;
}

// ---------------------------------------------------------------------------
// Momenta

std::optional<Combination> solve_combination(const MomentumExpr& x, const MomentumExpr& k1, const MomentumExpr& k2) {
    if (x.is_zero()) return std::nullopt;
    std::set<std::string, MomentumExpr::SymbolOrder> syms;
    for (const auto* e : {&x, &k1, &k2})
        for (const auto& s : e->symbols()) syms.insert(s);
    Dense<Rational> a(static_cast<Index>(syms.size()), 2);
    ColVector<Rational> b(static_cast<Index>(syms.size()));
    Index r = 0;
    for (const auto& s : syms) {
        a(r, 0) = k1.coefficient(s);
        a(r, 1) = k2.coefficient(s);
        b(r) = x.coefficient(s);
        ++r;
    }
    const std::size_t rk = rank(a);
    if (rk == 2) {
        const auto sol = solve(a, b);
        if (!sol || (*sol)(0) == 0 || (*sol)(1) == 0) return std::nullopt;
        return Combination{(*sol)(0), (*sol)(1)};
    }
    if (rk == 0) return std::nullopt;
    // collinear: one of k1, k2 spans the line
    const bool first_spans = !k1.is_zero();
    const MomentumExpr& other = first_spans ? k2 : k1;
    Dense<Rational> col(static_cast<Index>(syms.size()), 1);
    for (Index i = 0; i < col.rows(); ++i) col(i, 0) = a(i, first_spans ? 0 : 1);
    const auto g = solve(col, b);
    if (!g) return std::nullopt;
    const Rational gamma = (*g)(0);
    ColVector<Rational> ov(col.rows());
    for (Index i = 0; i < col.rows(); ++i) ov(i) = a(i, first_spans ? 1 : 0);
    const Rational c = other.is_zero() ? Rational(0) : (*solve(col, ov))(0);
    // x = γ base = w_base base + w_other other, other = c base
    Rational w_other = 1, w_base = gamma - c;
    if (w_base == 0) {
        w_other = -1;
        w_base = gamma + c;
    }
    if (w_base == 0) return std::nullopt;
    return first_spans ? Combination{w_base, w_other} : Combination{w_other, w_base};
}

std::optional<Witness> pair_redundant(const FeynGraph& g, const std::map<std::string, MomentumExpr>& momenta,
                                      const DotPair& p, const std::vector<std::string>& added) {
    if (p.first == p.second) return Witness{p.first, Rational(1, 2), Rational(1, 2)};
    auto k = [&](const std::string& e) -> const MomentumExpr& {
        auto it = momenta.find(e);
        if (it == momenta.end()) throw LookupError("no momentum for '" + e + "'");
        return it->second;
    };
    const auto& k1 = k(p.first);
    const auto& k2 = k(p.second);
    std::vector<std::string> candidates = g.edge_ids();
    candidates.insert(candidates.end(), added.begin(), added.end());
    for (const auto& x : candidates) {
        if (x == p.first || x == p.second) continue;
        if (auto c = solve_combination(k(x), k1, k2)) return Witness{x, c->alpha, c->beta};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Circuit completion

CircuitSystem circuits_after_coextension(const RepresentedMatroid& before, const CircuitSystem& circuits,
                                         const std::vector<Rational>& phi, const std::string& label) {
    const std::size_t n = before.size();
    if (phi.size() != n) throw DimensionError("functional length does not match the ground set");
    const auto& a = before.matrix().values();

    struct Vec {
        ElementSet support;
        std::vector<Rational> x;  // over the old ground set
        Rational phi;
    };
    std::vector<Vec> gaining;
    std::vector<ElementSet> keep;
    for (auto c : circuits.circuits()) {
        std::vector<std::size_t> idx;
        for (const auto& l : circuits.labels_of(c)) idx.push_back(before.index_of(l));
        std::sort(idx.begin(), idx.end());
        const std::vector<Index> cols(idx.begin(), idx.end());
        const Dense<Rational> sub = a(Eigen::all, cols);
        const Dense<Rational> ns = null_space(sub);
        if (ns.cols() != 1) throw IntegrityError("supplied set is not a circuit of the matrix");
        Vec v{ElementSet::of(idx), std::vector<Rational>(n, 0), 0};
        for (std::size_t k = 0; k < idx.size(); ++k) {
            v.x[idx[k]] = ns(static_cast<Index>(k), 0);
            v.phi += phi[idx[k]] * v.x[idx[k]];
        }
        if (v.phi == 0)
            keep.push_back(v.support);
        else
            gaining.push_back(std::move(v));
    }

    std::vector<ElementSet> candidates = keep;
    for (std::size_t s = 0; s < gaining.size(); ++s)
        for (std::size_t t = s + 1; t < gaining.size(); ++t) {
            ElementSet supp;
            for (std::size_t e = 0; e < n; ++e)
                if (gaining[t].phi * gaining[s].x[e] - gaining[s].phi * gaining[t].x[e] != 0) supp.insert(e);
            if (!supp.empty()) candidates.push_back(supp);
        }
    std::vector<ElementSet> out;
    for (auto c : candidates) {
        bool minimal = true;
        for (auto d : candidates)
            if (d.proper_subset_of(c)) minimal = false;
        if (minimal && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    for (const auto& v : gaining) {
        ElementSet s = v.support;
        s.insert(n);
        out.push_back(s);
    }
    auto ground = before.labels();
    ground.push_back(label);
    return CircuitSystem(std::move(ground), std::move(out));
}

// ---------------------------------------------------------------------------
// reduce_graph

std::vector<std::string> ReducedForm::internal_elements() const {
    auto out = edges;
    for (const auto& e : new_elements) out.push_back(e.id);
    return out;
}

std::string next_element_name(const std::vector<std::string>& taken) {
    std::set<std::string> used(taken.begin(), taken.end());
    if (!taken.empty()) {
        const auto [prefix, first] = split_label(taken.front());
        if (first >= 0) {
            long long hi = first;
            for (const auto& t : taken) {
                const auto [p, k] = split_label(t);
                if (p == prefix) hi = std::max(hi, k);
            }
            for (long long k = hi + 1;; ++k)
                if (!used.count(prefix + std::to_string(k))) return prefix + std::to_string(k);
        }
    }
    for (long long k = 1;; ++k)
        if (!used.count("n" + std::to_string(k))) return "n" + std::to_string(k);
}

namespace {

// Move a pivot off `col` onto another graph column of the same row, if any.
BlockMatrix free_column(const BlockMatrix& a, std::size_t col, std::size_t other, std::size_t graph_columns) {
    const auto row = a.pivot_row(col);
    if (!row || *row >= a.top_rows) return a;
    const auto& m = a.matrix.values();
    for (std::size_t c = 0; c < graph_columns; ++c) {
        if (c == col || c == other || a.pivot_row(c)) continue;
        if (m(static_cast<Index>(*row), static_cast<Index>(c)) != 0) return repivot(a, *row, c);
    }
    return a;
}

}  // namespace

ReducedForm reduce_graph(const FeynGraph& g, const std::vector<DotPair>& pairs, const ReduceOptions& opts) {
    ReducedForm f;
    f.routing = route_momenta(g);
    f.edges = g.edge_ids();
    f.momenta = f.routing.momenta;
    for (const auto& e : g.edges())
        if (e.mass2) f.masses[e.id] = *e.mass2;
    if (opts.externals)
        for (const auto& x : g.externals()) f.externals.push_back(x.id);
    f.block = normalize_to_ic(g, opts.externals);
    f.graph_rank = f.block.top_rows;
    f.circuits = circuits_of(RepresentedMatroid(f.block.matrix));

    std::vector<std::string> taken = f.edges;
    for (const auto& x : g.externals()) taken.push_back(x.id);
    std::vector<std::string> added;
    for (const auto& p : pairs) {
        g.edge_index(p.first);
        g.edge_index(p.second);
        if (auto w = pair_redundant(g, f.momenta, p, added)) {
            f.discarded.push_back({p, *w});
            continue;
        }
        const std::size_t i = f.block.matrix.index_of(p.first), j = f.block.matrix.index_of(p.second);
        if (opts.prefer_free_signs) {
            f.block = free_column(f.block, i, j, f.edges.size());
            f.block = free_column(f.block, j, i, f.edges.size());
        }
        const std::string label = next_element_name(taken);
        const bool flip = std::any_of(opts.flip.begin(), opts.flip.end(), [&](const DotPair& q) { return q == p; });
        const RepresentedMatroid before(f.block.matrix);
        const auto co = coextend_pair(f.block, i, j, label, flip);
        std::vector<Rational> phi(before.size(), 0);
        phi[i] = co.v_i;
        phi[j] = co.v_j;
        f.circuits = circuits_after_coextension(before, f.circuits, phi, label);

        NewElement ne;
        ne.id = label;
        ne.source = p;
        ne.alpha = -co.v_i;
        ne.beta = -co.v_j;
        ne.construction = co.construction;
        ne.momentum = as_integer(ne.alpha) * f.momenta.at(p.first) + as_integer(ne.beta) * f.momenta.at(p.second);
        f.momenta[label] = ne.momentum;
        f.new_elements.push_back(ne);
        f.block = co.matrix;
        taken.push_back(label);
        added.push_back(label);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Dot products and scalarization

std::vector<DotTerm> expand_dot_product(const std::string& e, const std::string& j, const std::string& f,
                                        const Rational& alpha, const Rational& beta,
                                        const std::map<std::string, std::string>& masses) {
    std::vector<DotTerm> out;
    auto add = [&](const std::string& x, const Rational& c) {
        out.push_back({c, x, false});
        if (masses.count(x)) out.push_back({Rational(-c), x, true});
    };
    if (e == j) {
        add(e, 1);
        return out;
    }
    if (alpha == 0 || beta == 0) throw DomainError("both weights of the combination must be nonzero");
    const Rational denom = 2 * alpha * beta;
    add(f, Rational(1 / denom));
    add(e, Rational(-alpha * alpha / denom));
    add(j, Rational(-beta * beta / denom));
    return out;
}

std::vector<DotTerm> expand_dot_product(const std::string& e, const std::string& j, const std::string& f,
                                        const std::map<std::string, MomentumExpr>& momenta,
                                        const std::map<std::string, std::string>& masses) {
    if (e == j) return expand_dot_product(e, j, f, Rational(1, 2), Rational(1, 2), masses);
    auto k = [&](const std::string& x) -> const MomentumExpr& {
        auto it = momenta.find(x);
        if (it == momenta.end()) throw LookupError("no momentum for '" + x + "'");
        return it->second;
    };
    const auto c = solve_combination(k(f), k(e), k(j));
    if (!c)
        throw ConsistencyError("momentum of '" + f + "' (" + to_string(k(f)) + ") is not a combination of '" + e +
                               "' and '" + j + "' with both weights nonzero");
    return expand_dot_product(e, j, f, c->alpha, c->beta, masses);
}

std::string to_string(const ScalarTerm& t) {
    std::ostringstream os;
    os << to_string(t.coefficient);
    for (const auto& [m, p] : t.mass_factor) {
        os << " * " << m;
        if (p > 1) os << "^" << p;
    }
    os << " * {";
    bool first = true;
    for (const auto& [x, s] : t.shift) {
        os << (first ? "" : ", ") << x << ":" << (s > 0 ? "+" : "") << s;
        first = false;
    }
    os << "}";
    return os.str();
}

Scalarization scalarize(const FeynGraph& g, const std::vector<DotPair>& numerator, const ReduceOptions& opts,
                        const Rational& coefficient) {
    Scalarization out;
    out.form = reduce_graph(g, numerator, opts);
    const auto& form = out.form;

    using Key = std::pair<std::map<std::string, int>, std::map<std::string, unsigned>>;
    std::map<Key, Rational> acc;
    acc[Key{}] = coefficient;
    for (const auto& p : numerator) {
        std::vector<DotTerm> factor;
        if (p.first == p.second) {
            factor = expand_dot_product(p.first, p.second, p.first, 1, 1, form.masses);
        } else {
            bool found = false;
            for (const auto& d : form.discarded)
                if (d.pair == p && !found) {
                    factor = expand_dot_product(d.pair.first, d.pair.second, d.witness.element, d.witness.alpha,
                                                d.witness.beta, form.masses);
                    found = true;
                }
            for (const auto& n : form.new_elements)
                if (n.source == p && !found) {
                    factor = expand_dot_product(n.source.first, n.source.second, n.id, n.alpha, n.beta, form.masses);
                    found = true;
                }
            if (!found) throw IntegrityError("pair " + to_string(p) + " was neither coextended nor discarded");
        }
        std::map<Key, Rational> next;
        for (const auto& [key, c] : acc)
            for (const auto& t : factor) {
                Key k = key;
                if (t.mass)
                    k.second[form.masses.at(t.element)] += 1;
                else if (--k.first[t.element] == 0)
                    k.first.erase(t.element);
                next[k] += c * t.coefficient;
            }
        acc.clear();
        for (auto& [k, c] : next)
            if (c != 0) acc.emplace(k, c);
    }
    for (const auto& [k, c] : acc) out.terms.push_back({c, k.first, k.second});
    return out;
}

}  // namespace feynmat

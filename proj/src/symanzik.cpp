#include "feynmat/symanzik.hpp"

#include <algorithm>
#include <set>

namespace feynmat {

namespace {

Polynomial complement_product(std::size_t n, ElementSet keep_out, const std::vector<std::size_t>& var_of) {
    std::vector<unsigned> e(n == 0 ? 0 : *std::max_element(var_of.begin(), var_of.end()) + 1, 0);
    for (std::size_t j = 0; j < n; ++j)
        if (!keep_out.contains(j) && var_of[j] != static_cast<std::size_t>(-1)) e[var_of[j]] = 1;
    return Polynomial(Monomial(std::move(e)));
}

std::vector<std::size_t> identity_map(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

void require_q(const RepresentedMatroid& m, const char* what) {
    if (m.field() != Field::Q) throw DomainError(std::string(what) + " needs a matroid read over Q");
}

}  // namespace

Polynomial psi_block_det(const RepresentedMatroid& m) {
    require_q(m, "psi_block_det");
    const Index e = static_cast<Index>(m.size()), r = static_cast<Index>(m.rank());
    const auto& b = m.matrix().values();
    Dense<Polynomial> k = Dense<Polynomial>::Constant(e + r, e + r, Polynomial());
    for (Index i = 0; i < e; ++i) k(i, i) = Polynomial::var(static_cast<std::size_t>(i));
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < e; ++j) {
            if (b(i, j) == 0) continue;
            k(j, e + i) = Polynomial(b(i, j));
            k(e + i, j) = Polynomial(Rational(-b(i, j)));
        }
    return det(k);
}

Polynomial psi_base_expansion(const RepresentedMatroid& m) {
    Polynomial out;
    const auto vars = identity_map(m.size());
    for (const auto& wb : bases_with_weights(m)) out += complement_product(m.size(), wb.base, vars) * Polynomial(wb.weight);
    return out;
}

Polynomial psi_circuit_gram(const RepresentedMatroid& m) {
    require_q(m, "psi_circuit_gram");
    const auto& a = m.matrix().values();
    const auto red = rref(a);
    const Rational scale = det<Rational>(a(Eigen::all, red.pivots));
    const Dense<Rational> n = null_space(a);
    const Index loops = n.cols();
    Dense<Polynomial> g = Dense<Polynomial>::Constant(loops, loops, Polynomial());
    for (Index i = 0; i < loops; ++i)
        for (Index j = i; j < loops; ++j) {
            Polynomial s;
            for (Index e = 0; e < n.rows(); ++e) {
                const Rational c = n(e, i) * n(e, j);
                if (c != 0) s += Polynomial(Monomial::var(static_cast<std::size_t>(e)), c);
            }
            g(i, j) = s;
            g(j, i) = s;
        }
    return det(g) * Polynomial(Rational(scale * scale));
}

Polynomial psi_tree_oracle(const FeynGraph& g) {
    Polynomial out;
    const auto vars = identity_map(g.edges().size());
    for (auto t : spanning_trees(g)) out += complement_product(g.edges().size(), t, vars);
    return out;
}

Polynomial psi_inverted(const Polynomial& psi, std::size_t nvars) {
    Polynomial out;
    for (const auto& [m, c] : psi.terms()) {
        std::vector<unsigned> e(nvars, 1);
        for (std::size_t i = 0; i < m.exponents().size(); ++i) {
            if (m.exponents()[i] > 1 || i >= nvars)
                throw DomainError("psi_inverted expects a multilinear polynomial in the given variables");
            e[i] -= m.exponents()[i];
        }
        out.add_term(Monomial(std::move(e)), c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// DotTable

DotTable::DotTable(std::vector<std::string> symbols, std::vector<std::vector<Rational>> relations)
    : symbols_(std::move(symbols)), relations_(std::move(relations)) {
    const std::size_t k = symbols_.size();
    for (const auto& r : relations_)
        if (r.size() != k) throw DimensionError("relation length does not match the symbol count");
    for (std::size_t a = 0; a < k; ++a) order_.emplace_back(a, a);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) order_.emplace_back(a, b);
    const std::size_t n = order_.size();
    rewrite_.assign(n, std::nullopt);

    // (Σ ρ_α q_α)·q_β = 0 for every relation ρ and symbol β.
    std::vector<std::vector<Rational>> rows;
    for (const auto& rho : relations_)
        for (std::size_t b = 0; b < k; ++b) {
            std::vector<Rational> v(n, 0);
            for (std::size_t a = 0; a < k; ++a)
                if (rho[a] != 0) v[index(a, b)] += rho[a];
            rows.push_back(std::move(v));
        }
    if (rows.empty()) return;
    // Columns in reverse preference so the least preferred variables become pivots.
    Dense<Rational> m(static_cast<Index>(rows.size()), static_cast<Index>(n));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t c = 0; c < n; ++c) m(static_cast<Index>(i), static_cast<Index>(n - 1 - c)) = rows[i][c];
    const auto red = rref(m);
    for (std::size_t i = 0; i < red.pivots.size(); ++i) {
        const std::size_t pv = n - 1 - static_cast<std::size_t>(red.pivots[i]);
        std::vector<std::pair<std::size_t, Rational>> expr;
        for (Index c = 0; c < static_cast<Index>(n); ++c) {
            if (c == red.pivots[i]) continue;
            const Rational& x = red.matrix(static_cast<Index>(i), c);
            if (x != 0) expr.emplace_back(n - 1 - static_cast<std::size_t>(c), Rational(-x));
        }
        rewrite_[pv] = std::move(expr);
    }
}

std::size_t DotTable::symbol_index(const std::string& s) const {
    auto it = std::find(symbols_.begin(), symbols_.end(), s);
    if (it == symbols_.end()) throw LookupError("unknown momentum symbol '" + s + "'");
    return static_cast<std::size_t>(it - symbols_.begin());
}

std::size_t DotTable::index(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    const std::size_t k = symbols_.size();
    if (b >= k) throw LookupError("symbol index out of range");
    if (a == b) return a;
    // mixed pairs follow the diagonal in lexicographic order
    return k + a * k - a * (a + 1) / 2 + (b - a - 1);
}

std::string DotTable::name(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    if (symbols_.size() < 10) return "s" + std::to_string(a + 1) + std::to_string(b + 1);
    return "s" + std::to_string(a + 1) + "_" + std::to_string(b + 1);
}

std::vector<std::string> DotTable::names() const {
    std::vector<std::string> out;
    for (const auto& [a, b] : order_) out.push_back(name(a, b));
    return out;
}

Polynomial DotTable::dot(const MomentumExpr& p, const MomentumExpr& q, std::size_t offset) const {
    Polynomial out;
    for (const auto& [s, c] : p.terms())
        for (const auto& [t, d] : q.terms())
            out += Polynomial(Monomial::var(offset + index(symbol_index(s), symbol_index(t))), Rational(c * d));
    return out;
}

Polynomial DotTable::normalize(const Polynomial& p, std::size_t offset) const {
    Polynomial out = p;
    for (std::size_t v = 0; v < rewrite_.size(); ++v) {
        if (!rewrite_[v]) continue;
        Polynomial r;
        for (const auto& [w, c] : *rewrite_[v]) r += Polynomial(Monomial::var(offset + w), c);
        out = out.substitute(offset + v, r);
    }
    return out;
}

std::vector<std::size_t> DotTable::basis() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < rewrite_.size(); ++v)
        if (!rewrite_[v]) out.push_back(v);
    return out;
}

// ---------------------------------------------------------------------------
// Second Symanzik polynomial

namespace {

std::vector<std::string> symbols_of(const std::vector<MomentumExpr>& momenta) {
    std::set<std::string, MomentumExpr::SymbolOrder> seen;
    for (const auto& p : momenta)
        for (const auto& s : p.symbols()) seen.insert(s);
    return {seen.begin(), seen.end()};
}

DotTable dot_table_for(const std::vector<MomentumExpr>& momenta, const std::vector<std::vector<Rational>>& leg_rel) {
    auto symbols = symbols_of(momenta);
    std::vector<std::vector<Rational>> rel;
    for (const auto& r : leg_rel) {
        std::vector<Rational> v(symbols.size(), 0);
        for (std::size_t i = 0; i < momenta.size(); ++i)
            for (const auto& [s, c] : momenta[i].terms()) {
                const auto at = static_cast<std::size_t>(std::find(symbols.begin(), symbols.end(), s) - symbols.begin());
                v[at] += r[i] * c;
            }
        if (std::any_of(v.begin(), v.end(), [](const Rational& x) { return x != 0; })) rel.push_back(std::move(v));
    }
    return DotTable(std::move(symbols), std::move(rel));
}

std::vector<MomentumExpr> leg_momenta(const FeynGraph& g) {
    std::vector<MomentumExpr> out;
    for (const auto& x : g.externals()) out.push_back(MomentumExpr::parse(x.symbol));
    return out;
}

std::vector<std::string> leg_ids(const FeynGraph& g) {
    std::vector<std::string> out;
    for (const auto& x : g.externals()) out.push_back(x.id);
    return out;
}

}  // namespace

RepresentedMatroid leg_extended_matroid(const FeynGraph& g) {
    const auto b = incidence_matrix(g);
    const Index nv = b.rows(), ne = b.cols();
    const Index nl = static_cast<Index>(g.externals().size());
    Dense<Rational> m = Dense<Rational>::Zero(nv, ne + nl);
    m.leftCols(ne) = b.values();
    auto labels = b.labels();
    for (Index l = 0; l < nl; ++l) {
        const auto& x = g.externals()[static_cast<std::size_t>(l)];
        m(static_cast<Index>(g.vertex_index(x.vertex)), ne + l) = 1;
        labels.push_back(x.id);
    }
    return RepresentedMatroid(RationalMatrix(std::move(m), std::move(labels)));
}

std::vector<std::vector<Rational>> leg_relations(const RepresentedMatroid& extended,
                                                 const std::vector<std::string>& legs) {
    const auto& a = extended.matrix().values();
    std::vector<Index> leg_cols, internal_cols;
    for (const auto& l : legs) leg_cols.push_back(static_cast<Index>(extended.index_of(l)));
    for (std::size_t j = 0; j < extended.size(); ++j)
        if (std::find(legs.begin(), legs.end(), extended.labels()[j]) == legs.end())
            internal_cols.push_back(static_cast<Index>(j));
    const Dense<Rational> internal_t = a(Eigen::all, internal_cols).transpose();
    const Dense<Rational> y = null_space(internal_t);  // columns y with yᵀ B_int = 0
    std::vector<std::vector<Rational>> out;
    for (Index k = 0; k < y.cols(); ++k) {
        std::vector<Rational> r(legs.size(), 0);
        for (std::size_t l = 0; l < legs.size(); ++l)
            for (Index i = 0; i < a.rows(); ++i) r[l] += y(i, k) * a(i, leg_cols[l]);
        out.push_back(std::move(r));
    }
    return out;
}

SecondSymanzik phi_second(const RepresentedMatroid& extended, const std::vector<std::string>& legs,
                          const std::vector<MomentumExpr>& momenta) {
    if (legs.size() < 2) throw DomainError("the second Symanzik polynomial needs at least two external legs");
    if (legs.size() != momenta.size()) throw DimensionError("one momentum per external leg is required");
    require_q(extended, "phi_second");

    const std::size_t n = extended.size();
    std::vector<std::size_t> leg_pos(n, static_cast<std::size_t>(-1)), var_of(n, static_cast<std::size_t>(-1));
    for (std::size_t l = 0; l < legs.size(); ++l) leg_pos[extended.index_of(legs[l])] = l;
    SecondSymanzik out;
    for (std::size_t j = 0; j < n; ++j)
        if (leg_pos[j] == static_cast<std::size_t>(-1)) {
            var_of[j] = out.names.size();
            out.names.push_back(extended.labels()[j]);
        }
    out.edges = out.names.size();
    out.dots = dot_table_for(momenta, leg_relations(extended, legs));
    for (auto& s : out.dots.names()) out.names.push_back(s);

    for (const auto& wb : bases_with_weights(extended)) {
        std::vector<std::size_t> in;
        for (auto j : wb.base.indices())
            if (leg_pos[j] != static_cast<std::size_t>(-1)) in.push_back(leg_pos[j]);
        if (in.size() != 2) continue;
        std::vector<unsigned> e(out.edges, 0);
        for (std::size_t j = 0; j < n; ++j)
            if (var_of[j] != static_cast<std::size_t>(-1) && !wb.base.contains(j)) e[var_of[j]] = 1;
        // sigma = -1
        out.poly += Polynomial(Monomial(std::move(e)), Rational(-wb.weight)) *
                    out.dots.dot(momenta[in[0]], momenta[in[1]], out.edges);
    }
    out.poly = out.dots.normalize(out.poly, out.edges);
    return out;
}

SecondSymanzik phi_second(const FeynGraph& g) {
    if (g.externals().size() < 2) throw DomainError("the second Symanzik polynomial needs at least two external legs");
    return phi_second(leg_extended_matroid(g), leg_ids(g), leg_momenta(g));
}

SecondSymanzik phi_2forest_oracle(const FeynGraph& g) {
    if (g.externals().size() < 2) throw DomainError("the second Symanzik polynomial needs at least two external legs");
    const auto momenta = leg_momenta(g);
    // Σ legs = 0 per component
    std::vector<std::vector<Rational>> rel;
    for (const auto& comp : g.components()) {
        std::vector<Rational> r(momenta.size(), 0);
        for (std::size_t l = 0; l < momenta.size(); ++l)
            if (std::find(comp.begin(), comp.end(), g.vertex_index(g.externals()[l].vertex)) != comp.end()) r[l] = 1;
        rel.push_back(std::move(r));
    }
    SecondSymanzik out;
    out.names = g.edge_ids();
    out.edges = out.names.size();
    out.dots = dot_table_for(momenta, rel);
    for (auto& s : out.dots.names()) out.names.push_back(s);

    const auto vars = identity_map(out.edges);
    for (const auto& f : two_forests(g)) {
        MomentumExpr side;
        for (std::size_t l = 0; l < momenta.size(); ++l)
            if (std::find(f.first.begin(), f.first.end(), g.vertex_index(g.externals()[l].vertex)) != f.first.end())
                side += momenta[l];
        out.poly += complement_product(out.edges, f.edges, vars) * out.dots.dot(side, side, out.edges);
    }
    out.poly = out.dots.normalize(out.poly, out.edges);
    return out;
}

}  // namespace feynmat

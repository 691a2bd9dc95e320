#pragma once

#include <optional>
#include <string>
#include <vector>

#include "feynmat/graph.hpp"
#include "feynmat/matroid.hpp"
#include "feynmat/polynomial.hpp"

namespace feynmat {

// First Symanzik polynomial.  Variable i is the edge variable of column i;
// the matroid's labels are the name table.

/// det [[diag(a), Bᵀ], [-B, 0]].
Polynomial psi_block_det(const RepresentedMatroid& m);
/// Σ_T w_T Π_{e∉T} a_e over weighted bases.
Polynomial psi_base_expansion(const RepresentedMatroid& m);
/// det(Nᵀ diag(a) N) for the fundamental-circuit basis N of the null space,
/// times det(A_B)² for the pivot base B so that all three methods agree on
/// non-unimodular representations too.
Polynomial psi_circuit_gram(const RepresentedMatroid& m);
/// Σ_T Π_{e∉T} a_e over spanning trees, edge variables in edge order.
Polynomial psi_tree_oracle(const FeynGraph& g);

/// Σ_T w_T Π_{e∈T} a_e: the polynomial Π a_e · Ψ(1/a).
Polynomial psi_inverted(const Polynomial& psi, std::size_t nvars);

// ---------------------------------------------------------------------------
// Dot products

/// Formal scalar products s_αβ = q_α·q_β of the external symbols, with the
/// linear relations among the symbols (momentum conservation) used to bring
/// expressions into a normal form.  s_αβ with α ≤ β is variable
/// offset + index(α, β); the preferred basis is s_11..s_kk followed by the
/// mixed products in lexicographic order.
class DotTable {
public:
    DotTable() = default;
    /// `relations` are rational coefficient vectors over `symbols` that vanish.
    DotTable(std::vector<std::string> symbols, std::vector<std::vector<Rational>> relations);

    const std::vector<std::string>& symbols() const { return symbols_; }
    std::size_t symbol_index(const std::string& s) const;
    std::size_t size() const { return order_.size(); }
    std::size_t index(std::size_t a, std::size_t b) const;
    std::string name(std::size_t a, std::size_t b) const;
    /// Names in variable order.
    std::vector<std::string> names() const;
    const std::vector<std::vector<Rational>>& relations() const { return relations_; }

    /// p·p' expanded into s-variables (shifted by `offset`), not normalized.
    Polynomial dot(const MomentumExpr& p, const MomentumExpr& q, std::size_t offset) const;
    /// Rewrite the non-basis s-variables in terms of the basis ones.
    Polynomial normalize(const Polynomial& p, std::size_t offset) const;
    /// The s-variables kept by the normal form.
    std::vector<std::size_t> basis() const;

private:
    std::vector<std::string> symbols_;
    std::vector<std::vector<Rational>> relations_;
    std::vector<std::pair<std::size_t, std::size_t>> order_;  // variable -> (α, β)
    // eliminated variable -> Σ coef * basis variable
    std::vector<std::optional<std::vector<std::pair<std::size_t, Rational>>>> rewrite_;
};

/// Second Symanzik polynomial with its variable table: the first `edges`
/// names are edge variables, the rest are the s-variables of `dots`.
struct SecondSymanzik {
    Polynomial poly;
    std::vector<std::string> names;
    std::size_t edges = 0;
    DotTable dots;
};

/// Graph incidence matrix with one column per external leg (+1 at the attach
/// vertex; the leg's far end is a new vertex whose row is dropped).
RepresentedMatroid leg_extended_matroid(const FeynGraph& g);

/// Conservation relations among leg momenta: y·B_leg for every y with
/// y·B_internal = 0.
std::vector<std::vector<Rational>> leg_relations(const RepresentedMatroid& extended,
                                                 const std::vector<std::string>& legs);

/// Extended matroid version.  `legs` name the external columns of `extended`
/// and `momenta` the momentum each carries.
SecondSymanzik phi_second(const RepresentedMatroid& extended, const std::vector<std::string>& legs,
                          const std::vector<MomentumExpr>& momenta);
SecondSymanzik phi_second(const FeynGraph& g);

/// Σ over 2-forests of (momentum into the side holding the first vertex)² ×
/// Π_{e∉F} a_e, normalized with the same DotTable as phi_second.
SecondSymanzik phi_2forest_oracle(const FeynGraph& g);

}  // namespace feynmat

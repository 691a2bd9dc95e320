#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "feynmat/graph.hpp"
#include "feynmat/matroid.hpp"

namespace feynmat {

/// Unordered pair of edges whose momenta are dotted together.
struct DotPair {
    std::string first;
    std::string second;

    /// "a1:a5"
    static DotPair parse(const std::string& text);
    bool same_as(const DotPair& o) const {
        return (first == o.first && second == o.second) || (first == o.second && second == o.first);
    }
    friend bool operator==(const DotPair& a, const DotPair& b) { return a.same_as(b); }
};
std::string to_string(const DotPair& p);

// ---------------------------------------------------------------------------
// Block matrices (I 0 C / 0 I D)

/// A 0/±1 matrix whose row r has a unit column pivot[r]; rows below
/// `top_rows` belong to coextension elements.
struct BlockMatrix {
    RationalMatrix matrix;
    std::vector<std::size_t> pivot;
    std::size_t top_rows = 0;

    std::optional<std::size_t> pivot_row(std::size_t col) const;
    /// Columns reordered to (top pivots | bottom pivots | the rest in matrix order).
    RationalMatrix layout() const;
    /// Every pivot column is a unit vector and all entries are 0/±1.
    bool well_formed() const;
};

/// r2[i]·r1 − r1[i]·r2: zero in column i.  Throws DomainError if either row
/// vanishes in column i, IntegrityError if an entry leaves {−1, 0, 1}.
std::vector<Rational> safe_combine(const std::vector<Rational>& r1, const std::vector<Rational>& r2, std::size_t i);

/// Gauss-Jordan by safe row combinations on a 0/±1 matrix: pivots are the
/// first independent columns, pivot entries +1, zero rows dropped.
BlockMatrix normalize_to_ic(const RationalMatrix& m);
/// Incidence matrix of g (plus leg columns when `externals`) brought to (I | C).
BlockMatrix normalize_to_ic(const FeynGraph& g, bool externals = false);

/// Exchange pivot row `row` onto column `col` (which must be nonzero there).
BlockMatrix repivot(const BlockMatrix& a, std::size_t row, std::size_t col);

struct Coextension {
    BlockMatrix matrix;
    int construction = 0;  // 1: both in C, 2: one pivot, 3: both pivots
    // The appended row before clearing reads k_new + v_i k_i + v_j k_j = 0.
    Rational v_i, v_j;
};

/// One-element coextension for the pair of columns (i, j).  `flip` selects the
/// other sign where the construction leaves it free.  The default makes the
/// new element carry ±(k_i − k_j).
Coextension coextend_pair(const BlockMatrix& a, std::size_t i, std::size_t j, const std::string& label,
                          bool flip = false);

// ---------------------------------------------------------------------------
// Momentum bookkeeping

/// k_x = α k_1 + β k_2 with α, β both nonzero, when such weights exist.
struct Combination {
    Rational alpha, beta;
};
std::optional<Combination> solve_combination(const MomentumExpr& x, const MomentumExpr& k1, const MomentumExpr& k2);

struct Witness {
    std::string element;
    Rational alpha, beta;
};

/// First element (graph edges in edge order, then `added` in order) other
/// than the pair itself whose momentum is α k_1 + β k_2 with α, β ≠ 0.  For
/// e1 = e2 the witness is e1 itself with α = β = 1/2.
std::optional<Witness> pair_redundant(const FeynGraph& g, const std::map<std::string, MomentumExpr>& momenta,
                                      const DotPair& p, const std::vector<std::string>& added = {});

/// Circuits of the coextension from the circuits of `before`: each circuit C
/// becomes C ∪ {label} when φ·c ≠ 0, and circuits avoiding the new element are
/// the minimal supports of φ(c₂)c₁ − φ(c₁)c₂ over pairs of such C.
CircuitSystem circuits_after_coextension(const RepresentedMatroid& before, const CircuitSystem& circuits,
                                         const std::vector<Rational>& phi, const std::string& label);

// ---------------------------------------------------------------------------
// Reduction of a graph

struct NewElement {
    std::string id;
    MomentumExpr momentum;
    DotPair source;
    Rational alpha, beta;  // momentum = α k_first + β k_second
    int construction = 0;
};

struct DiscardedPair {
    DotPair pair;
    Witness witness;
};

struct ReduceOptions {
    bool externals = false;      // carry the legs as extra columns
    std::vector<DotPair> flip;   // pairs whose free sign is flipped
    bool prefer_free_signs = true;  // repivot so both columns sit in C when possible
};

struct ReducedForm {
    BlockMatrix block;
    std::size_t graph_rank = 0;
    std::vector<std::string> edges;      // internal edge ids of the source graph
    std::vector<std::string> externals;  // leg columns present in the matrix
    std::vector<NewElement> new_elements;
    std::vector<DiscardedPair> discarded;
    Routing routing;
    std::map<std::string, MomentumExpr> momenta;  // every internal element
    std::map<std::string, std::string> masses;    // element -> mass-squared symbol
    CircuitSystem circuits;                       // by iterated completion

    RationalMatrix matrix() const { return block.layout(); }
    RepresentedMatroid matroid() const { return RepresentedMatroid(block.layout()); }
    /// Graph edges followed by new elements.
    std::vector<std::string> internal_elements() const;
};

/// "a1".."a10" -> "a11", "1".."9" -> "10", otherwise "n1", "n2", ...
std::string next_element_name(const std::vector<std::string>& taken);

ReducedForm reduce_graph(const FeynGraph& g, const std::vector<DotPair>& pairs, const ReduceOptions& opts = {});

// ---------------------------------------------------------------------------
// Scalar products and scalarization, with D_x = k_x² + m_x²

struct DotTerm {
    Rational coefficient;
    std::string element;
    bool mass = false;  // coefficient · m_element² instead of coefficient · D_element
};

/// k_e·k_j = (D_f − m_f² − α²(D_e − m_e²) − β²(D_j − m_j²)) / (2αβ) for
/// k_f = α k_e + β k_j; for e = j simply D_e − m_e².
std::vector<DotTerm> expand_dot_product(const std::string& e, const std::string& j, const std::string& f,
                                        const Rational& alpha, const Rational& beta,
                                        const std::map<std::string, std::string>& masses = {});
/// As above with α, β solved from the momenta; ConsistencyError if k_f is not
/// a combination of k_e and k_j with both weights nonzero.
std::vector<DotTerm> expand_dot_product(const std::string& e, const std::string& j, const std::string& f,
                                        const std::map<std::string, MomentumExpr>& momenta,
                                        const std::map<std::string, std::string>& masses = {});

struct ScalarTerm {
    Rational coefficient;
    std::map<std::string, int> shift;            // added to the power ν_x
    std::map<std::string, unsigned> mass_factor;  // mass-squared symbol -> exponent

    friend bool operator==(const ScalarTerm&, const ScalarTerm&) = default;
};
std::string to_string(const ScalarTerm& t);

struct Scalarization {
    ReducedForm form;
    std::vector<ScalarTerm> terms;
};

/// coefficient · Π (k_e·k_j) over `numerator`, rewritten as scalar integrals
/// over one reduced form.
Scalarization scalarize(const FeynGraph& g, const std::vector<DotPair>& numerator, const ReduceOptions& opts = {},
                        const Rational& coefficient = 1);

}  // namespace feynmat

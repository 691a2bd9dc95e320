#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "feynmat/element_set.hpp"
#include "feynmat/labels.hpp"
#include "feynmat/linalg.hpp"
#include "feynmat/matroid.hpp"

namespace feynmat {

struct Edge {
    std::string id;
    std::string tail;
    std::string head;
    std::optional<std::string> mass2;  // mass-squared symbol; massless if absent

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct ExternalLeg {
    std::string id;
    std::string vertex;
    std::string symbol;  // momentum injected at `vertex`, e.g. "q1" or "-q1-q2+q3"

    friend bool operator==(const ExternalLeg&, const ExternalLeg&) = default;
};

/// Directed Feynman graph with external legs.  Vertex order is the order of
/// declaration and determines which incidence row is dropped.
class FeynGraph {
public:
    FeynGraph() = default;
    FeynGraph(std::vector<std::string> vertices, std::vector<Edge> edges, std::vector<ExternalLeg> externals = {});

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<ExternalLeg>& externals() const { return externals_; }
    std::size_t vertex_index(const std::string& v) const;
    std::size_t edge_index(const std::string& e) const;
    const Edge& edge(const std::string& e) const { return edges_[edge_index(e)]; }
    std::vector<std::string> edge_ids() const;

    /// Vertex components as sorted index lists, ordered by smallest member.
    std::vector<std::vector<std::size_t>> components() const;
    bool connected() const { return components().size() <= 1; }

    FeynGraph with_reversed(const std::string& e) const;

    friend bool operator==(const FeynGraph&, const FeynGraph&) = default;

private:
    std::vector<std::string> vertices_;
    std::vector<Edge> edges_;
    std::vector<ExternalLeg> externals_;
};

/// JSON document {vertices[], edges[{id,tail,head,mass2?}], externals[{id,vertex,symbol}]}.
FeynGraph parse_graph_json(const std::string& text);
FeynGraph parse_graph_json(std::istream& in);
std::string graph_to_json(const FeynGraph& g);

/// v x e, -1 where an edge starts and +1 where it ends.
RationalMatrix incidence_matrix(const FeynGraph& g);
/// Incidence matrix without the highest-indexed vertex row of each component.
RepresentedMatroid cycle_matroid(const FeynGraph& g);

/// Brute-force oracles.
std::vector<ElementSet> spanning_trees(const FeynGraph& g);

struct TwoForest {
    ElementSet edges;
    // Vertex indices; `first` holds the lowest-indexed vertex.
    std::vector<std::size_t> first;
    std::vector<std::size_t> second;
};
std::vector<TwoForest> two_forests(const FeynGraph& g);

/// Simple cycles as edge sets (self-loops and parallel pairs included).
std::vector<ElementSet> simple_cycles(const FeynGraph& g);

// ---------------------------------------------------------------------------
// Momenta

/// Integer combination of loop symbols l1..lL and external symbols.
class MomentumExpr {
public:
    struct SymbolOrder {
        bool operator()(const std::string& a, const std::string& b) const;
    };
    using Terms = std::map<std::string, long long, SymbolOrder>;

    MomentumExpr() = default;
    static MomentumExpr symbol(const std::string& s, long long c = 1);
    /// Parses e.g. "q1", "-q3", "q1+q2-2*l1", "0".
    static MomentumExpr parse(const std::string& text);

    const Terms& terms() const { return terms_; }
    long long coefficient(const std::string& s) const;
    bool is_zero() const { return terms_.empty(); }
    std::vector<std::string> symbols() const;

    MomentumExpr& operator+=(const MomentumExpr& o);
    MomentumExpr& operator-=(const MomentumExpr& o);
    friend MomentumExpr operator+(MomentumExpr a, const MomentumExpr& b) { return a += b; }
    friend MomentumExpr operator-(MomentumExpr a, const MomentumExpr& b) { return a -= b; }
    friend MomentumExpr operator*(long long c, const MomentumExpr& a);
    MomentumExpr operator-() const { return -1 * *this; }
    friend bool operator==(const MomentumExpr& a, const MomentumExpr& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const MomentumExpr& a, const MomentumExpr& b) { return !(a == b); }

    /// Replace symbol s by e.
    MomentumExpr substitute(const std::string& s, const MomentumExpr& e) const;

private:
    void add(const std::string& s, long long c);
    Terms terms_;
};

std::string to_string(const MomentumExpr& e);
bool is_loop_symbol(const std::string& s);

struct Routing {
    std::vector<std::string> loops;                // l1..lL, one per chord
    std::map<std::string, MomentumExpr> momenta;   // edge id -> momentum
    std::map<std::string, MomentumExpr> injected;  // vertex -> external injection
    // Symbols eliminated to enforce conservation, in order of elimination.
    std::vector<std::pair<std::string, MomentumExpr>> eliminated;

    const MomentumExpr& momentum(const std::string& edge) const;
    MomentumExpr reduce(MomentumExpr e) const;
};

/// Loop momenta along the chords of the lexicographically first spanning
/// forest; tree edges by leaf peeling.  Throws ConsistencyError when the
/// external momenta of a component cannot be balanced.
Routing route_momenta(const FeynGraph& g);

/// B k + q_in == 0 identically, where B is the incidence matrix.
bool conservation_holds(const FeynGraph& g, const Routing& r);

}  // namespace feynmat

#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "feynmat/element_set.hpp"
#include "feynmat/linalg.hpp"

namespace feynmat {

using LabelSet = std::set<std::string>;

/// Ground set plus circuits, the axiomatic face of a matroid.  Circuits are
/// kept sorted (size, then index order) and free of duplicates.
class CircuitSystem {
public:
    CircuitSystem() = default;
    CircuitSystem(std::vector<std::string> ground, std::vector<ElementSet> circuits);
    static CircuitSystem from_labels(std::vector<std::string> ground,
                                     const std::vector<std::vector<std::string>>& circuits);

    const std::vector<std::string>& ground() const { return ground_; }
    const std::vector<ElementSet>& circuits() const { return circuits_; }
    std::size_t size() const { return circuits_.size(); }

    ElementSet set_of(const std::vector<std::string>& labels) const;
    std::vector<std::string> labels_of(ElementSet s) const;
    std::set<LabelSet> label_sets() const;
    bool contains(const LabelSet& c) const;

    /// Same ground labels and same circuits, independent of label order.
    friend bool operator==(const CircuitSystem& a, const CircuitSystem& b);
    friend bool operator!=(const CircuitSystem& a, const CircuitSystem& b) { return !(a == b); }

private:
    std::vector<std::string> ground_;
    std::vector<ElementSet> circuits_;
};

struct CircuitVerdict {
    bool valid = true;
    int axiom = 0;                    // 1, 2 or 3 on failure
    std::vector<ElementSet> witness;  // offending circuit(s)
    std::optional<std::size_t> element;  // the shared element for axiom 3
};

CircuitVerdict validate_circuits(const CircuitSystem& c);

struct WeightedBase {
    ElementSet base;
    Rational weight;
};

/// A full-row-rank labeled matrix tagged with the field it is read over.
/// Entries are stored as rationals; for finite fields they are the integer
/// representatives of the residues.
class RepresentedMatroid {
public:
    RepresentedMatroid() = default;
    /// Throws StateError unless the matrix has full row rank over `field`.
    explicit RepresentedMatroid(RationalMatrix m, Field field = Field::Q);
    /// Keeps a maximal set of independent rows (first rows win).
    static RepresentedMatroid from_matrix(const RationalMatrix& m, Field field = Field::Q);

    const RationalMatrix& matrix() const { return m_; }
    const std::vector<std::string>& labels() const { return m_.labels(); }
    Field field() const { return field_; }
    std::size_t rank() const { return static_cast<std::size_t>(m_.rows()); }
    std::size_t size() const { return static_cast<std::size_t>(m_.cols()); }
    std::size_t index_of(const std::string& label) const { return m_.index_of(label); }

    /// The first rank() columns form an identity block.
    bool is_standard() const;

    friend bool operator==(const RepresentedMatroid& a, const RepresentedMatroid& b) {
        return a.field_ == b.field_ && a.m_ == b.m_;
    }

private:
    RationalMatrix m_;
    Field field_ = Field::Q;
};

/// Rank of a rational grid read over the given field.
std::size_t rank_over(const Dense<Rational>& m, Field field);

/// Every column subset of size rank() with nonzero determinant over the
/// matroid's field, in lexicographic order.
std::vector<ElementSet> bases_of(const RepresentedMatroid& m);
/// As above with weight det^2 (always 1 over a finite field).
std::vector<WeightedBase> bases_with_weights(const RepresentedMatroid& m);

CircuitSystem circuits_of(const RepresentedMatroid& m);
/// Fundamental circuits from the known base set: for each base B and e not in
/// B, {e} together with every b in B such that B - b + e is a base.
std::vector<ElementSet> circuits_from_bases(std::size_t n, const std::vector<ElementSet>& bases);

/// Pivot columns (the lexicographically first base) moved to the front.
RepresentedMatroid standardize(const RepresentedMatroid& m);
/// (I|D) -> (-D^T|I); labels stay with their elements.
RepresentedMatroid dual(const RepresentedMatroid& m);
RepresentedMatroid contract(const RepresentedMatroid& m, const std::string& e);
RepresentedMatroid delete_element(const RepresentedMatroid& m, const std::string& e);

bool is_1pi(const RepresentedMatroid& m);
/// Elements lying in no circuit.
std::vector<std::string> coloops(const RepresentedMatroid& m);

/// Compares the bases of the grid over Q with those of the same grid over
/// GF(2).  Entries must lie in {-1,0,1}.
bool is_regular_by_binary_test(const RepresentedMatroid& m);
/// Same comparison as a reusable predicate on arbitrary grids.
bool same_matroid_over_q_and_f2(const Dense<Rational>& m);

// ---------------------------------------------------------------------------
// Text record
//
//   field Q
//   matrix
//   a b c d
//   -1 -1 0 0
//   0 1 1 1
//   circuits            <- optional
//   c d
//   a b c

struct MatroidRecord {
    RepresentedMatroid matroid;
    std::optional<CircuitSystem> circuits;
};

MatroidRecord parse_matroid_record(std::istream& in);
MatroidRecord parse_matroid_record(const std::string& text);
void write_matroid_record(std::ostream& os, const RepresentedMatroid& m, const CircuitSystem* circuits = nullptr);

}  // namespace feynmat

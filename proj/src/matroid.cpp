#include "feynmat/matroid.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace feynmat {

namespace {

template <class Fn>
decltype(auto) over_field(const Dense<Rational>& m, Field field, Fn&& fn) {
    switch (field) {
        case Field::F2:
            return fn(cast_to_field<2>(m));
        case Field::F3:
            return fn(cast_to_field<3>(m));
        case Field::Q:
            break;
    }
    return fn(m);
}

template <class S>
std::vector<ElementSet> bases_of_grid(const Dense<S>& m) {
    std::vector<ElementSet> out;
    const std::size_t r = rank(m);
    const std::size_t n = static_cast<std::size_t>(m.cols());
    // Reduce to full row rank first so every candidate is a square minor.
    const auto red = rref(m);
    const ColumnMinors<S> minors(red.matrix);
    for_each_combination(n, r, [&](const std::vector<std::size_t>& cols) {
        if (!is_zero(minors(cols))) out.push_back(ElementSet::of(cols));
        return true;
    });
    return out;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// CircuitSystem

CircuitSystem::CircuitSystem(std::vector<std::string> ground, std::vector<ElementSet> circuits)
    : ground_(std::move(ground)), circuits_(std::move(circuits)) {
    if (ground_.size() > ElementSet::capacity) throw DomainError("ground set exceeds 64 elements");
    std::unordered_set<std::string> seen;
    for (const auto& g : ground_)
        if (!seen.insert(g).second) throw DomainError("duplicate ground element '" + g + "'");
    const ElementSet all = ElementSet::full(ground_.size());
    for (auto c : circuits_)
        if (!c.subset_of(all)) throw DomainError("circuit mentions an element outside the ground set");
    std::sort(circuits_.begin(), circuits_.end(), ElementSetOrder{});
    circuits_.erase(std::unique(circuits_.begin(), circuits_.end()), circuits_.end());
}

CircuitSystem CircuitSystem::from_labels(std::vector<std::string> ground,
                                         const std::vector<std::vector<std::string>>& circuits) {
    CircuitSystem tmp(std::move(ground), {});
    std::vector<ElementSet> sets;
    for (const auto& c : circuits) sets.push_back(tmp.set_of(c));
    return CircuitSystem(tmp.ground_, std::move(sets));
}

ElementSet CircuitSystem::set_of(const std::vector<std::string>& labels) const {
    ElementSet s;
    for (const auto& l : labels) {
        auto it = std::find(ground_.begin(), ground_.end(), l);
        if (it == ground_.end()) throw LookupError("unknown element '" + l + "'");
        s.insert(static_cast<std::size_t>(it - ground_.begin()));
    }
    return s;
}

std::vector<std::string> CircuitSystem::labels_of(ElementSet s) const {
    std::vector<std::string> out;
    for (auto i : s.indices()) out.push_back(ground_.at(i));
    return out;
}

std::set<LabelSet> CircuitSystem::label_sets() const {
    std::set<LabelSet> out;
    for (auto c : circuits_) {
        auto l = labels_of(c);
        out.emplace(l.begin(), l.end());
    }
    return out;
}

bool CircuitSystem::contains(const LabelSet& c) const { return label_sets().count(c) > 0; }

bool operator==(const CircuitSystem& a, const CircuitSystem& b) {
    if (LabelSet(a.ground_.begin(), a.ground_.end()) != LabelSet(b.ground_.begin(), b.ground_.end())) return false;
    return a.label_sets() == b.label_sets();
}

CircuitVerdict validate_circuits(const CircuitSystem& sys) {
    CircuitVerdict v;
    const auto& cs = sys.circuits();
    for (auto c : cs)
        if (c.empty()) {
            v.valid = false;
            v.axiom = 1;
            v.witness = {c};
            return v;
        }
    for (auto c1 : cs)
        for (auto c2 : cs)
            if (c1.proper_subset_of(c2)) {
                v.valid = false;
                v.axiom = 2;
                v.witness = {c1, c2};
                return v;
            }
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j)
            for (auto e : (cs[i] & cs[j]).indices()) {
                ElementSet target = cs[i] | cs[j];
                target.erase(e);
                const bool ok = std::any_of(cs.begin(), cs.end(), [&](ElementSet c) { return c.subset_of(target); });
                if (!ok) {
                    v.valid = false;
                    v.axiom = 3;
                    v.witness = {cs[i], cs[j]};
                    v.element = e;
                    return v;
                }
            }
    return v;
}

// ---------------------------------------------------------------------------
// RepresentedMatroid

std::size_t rank_over(const Dense<Rational>& m, Field field) {
    return over_field(m, field, [](const auto& g) { return rank(g); });
}

RepresentedMatroid::RepresentedMatroid(RationalMatrix m, Field field) : m_(std::move(m)), field_(field) {
    if (m_.cols() > static_cast<Index>(ElementSet::capacity)) throw DomainError("more than 64 columns");
    const std::size_t r = rank_over(m_.values(), field_);
    if (r != static_cast<std::size_t>(m_.rows()))
        throw StateError("matrix has rank " + std::to_string(r) + " but " + std::to_string(m_.rows()) +
                         " rows; it must have full row rank");
}

RepresentedMatroid RepresentedMatroid::from_matrix(const RationalMatrix& m, Field field) {
    std::vector<Index> keep;
    std::size_t r = 0;
    for (Index i = 0; i < m.rows(); ++i) {
        keep.push_back(i);
        const std::size_t nr = rank_over(m.values()(keep, Eigen::all), field);
        if (nr == r)
            keep.pop_back();
        else
            r = nr;
    }
    return RepresentedMatroid(RationalMatrix(m.values()(keep, Eigen::all), m.labels()), field);
}

bool RepresentedMatroid::is_standard() const {
    const Index r = m_.rows();
    if (m_.cols() < r) return false;
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < r; ++j)
            if (m_(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

std::vector<ElementSet> bases_of(const RepresentedMatroid& m) {
    return over_field(m.matrix().values(), m.field(), [](const auto& g) { return bases_of_grid(g); });
}

std::vector<WeightedBase> bases_with_weights(const RepresentedMatroid& m) {
    std::vector<WeightedBase> out;
    if (m.field() != Field::Q) {
        for (auto b : bases_of(m)) out.push_back({b, Rational(1)});
        return out;
    }
    const ColumnMinors<Rational> minors(m.matrix().values());
    for_each_combination(m.size(), m.rank(), [&](const std::vector<std::size_t>& cols) {
        const Rational d = minors(cols);
        if (d != 0) out.push_back({ElementSet::of(cols), d * d});
        return true;
    });
    return out;
}

std::vector<ElementSet> circuits_from_bases(std::size_t n, const std::vector<ElementSet>& bases) {
    std::unordered_set<std::uint64_t> base_bits;
    for (auto b : bases) base_bits.insert(b.bits());
    std::vector<ElementSet> out;
    std::unordered_set<std::uint64_t> seen;
    for (auto b : bases)
        for (std::size_t e = 0; e < n; ++e) {
            if (b.contains(e)) continue;
            ElementSet c = ElementSet::of({e});
            for (auto x : b.indices()) {
                ElementSet swapped = b;
                swapped.erase(x);
                swapped.insert(e);
                if (base_bits.count(swapped.bits())) c.insert(x);
            }
            if (seen.insert(c.bits()).second) out.push_back(c);
        }
    std::sort(out.begin(), out.end(), ElementSetOrder{});
    return out;
}

CircuitSystem circuits_of(const RepresentedMatroid& m) {
    return CircuitSystem(m.labels(), circuits_from_bases(m.size(), bases_of(m)));
}

RepresentedMatroid standardize(const RepresentedMatroid& m) {
    auto r = over_field(m.matrix().values(), m.field(), [](const auto& g) {
        const auto red = rref(g);
        Dense<Rational> out(red.matrix.rows(), red.matrix.cols());
        for (Index i = 0; i < out.rows(); ++i)
            for (Index j = 0; j < out.cols(); ++j) {
                if constexpr (std::is_same_v<std::decay_t<decltype(g(0, 0))>, Rational>)
                    out(i, j) = red.matrix(i, j);
                else {
                    // Symmetric residues: 2 in GF(3) prints as -1.
                    const int x = red.matrix(i, j).residue();
                    out(i, j) = Rational(x == 2 ? -1 : x);
                }
            }
        return std::make_pair(out, red.pivots);
    });
    std::vector<std::size_t> order(r.second.begin(), r.second.end());
    std::vector<bool> is_pivot(m.size(), false);
    for (auto p : r.second) is_pivot[static_cast<std::size_t>(p)] = true;
    for (std::size_t j = 0; j < m.size(); ++j)
        if (!is_pivot[j]) order.push_back(j);
    const RationalMatrix reduced(std::move(r.first), m.labels());
    return RepresentedMatroid(reduced.select_columns(order), m.field());
}

RepresentedMatroid dual(const RepresentedMatroid& m) {
    if (!m.is_standard()) throw StateError("dual requires standard form (I|D); standardize first");
    const Index n = static_cast<Index>(m.rank());
    const Index k = static_cast<Index>(m.size()) - n;
    const Dense<Rational> d = m.matrix().values().rightCols(k);
    Dense<Rational> out(k, n + k);
    out.leftCols(n) = -d.transpose();
    out.rightCols(k) = Dense<Rational>::Identity(k, k);
    return RepresentedMatroid(RationalMatrix(std::move(out), m.labels()), m.field());
}

namespace {

Rational reduce_mod(const Rational& x, Field f) {
    if (f == Field::Q) return x;
    const int p = f == Field::F2 ? 2 : 3;
    long long v = 0;
    to_int64(x, v);
    long long r = ((v % p) + p) % p;
    if (p == 3 && r == 2) r = -1;
    return Rational(r);
}

}  // namespace

RepresentedMatroid contract(const RepresentedMatroid& m, const std::string& e) {
    const Index c = static_cast<Index>(m.index_of(e));
    const Dense<Rational>& a = m.matrix().values();
    Index pivot = -1;
    for (Index i = 0; i < a.rows(); ++i)
        if (reduce_mod(a(i, c), m.field()) != 0) {
            pivot = i;
            break;
        }
    if (pivot < 0) return delete_element(m, e);  // a loop
    Dense<Rational> b = a;
    const Rational pv = a(pivot, c);
    for (Index i = 0; i < b.rows(); ++i) {
        if (i == pivot || reduce_mod(b(i, c), m.field()) == 0) continue;
        const Rational f = b(i, c) / pv;
        for (Index j = 0; j < b.cols(); ++j) b(i, j) = reduce_mod(b(i, j) - f * b(pivot, j), m.field());
    }
    std::vector<Index> rows, cols;
    for (Index i = 0; i < b.rows(); ++i)
        if (i != pivot) rows.push_back(i);
    std::vector<std::string> labels;
    for (Index j = 0; j < b.cols(); ++j)
        if (j != c) {
            cols.push_back(j);
            labels.push_back(m.labels()[static_cast<std::size_t>(j)]);
        }
    return RepresentedMatroid(RationalMatrix(b(rows, cols), std::move(labels)), m.field());
}

RepresentedMatroid delete_element(const RepresentedMatroid& m, const std::string& e) {
    const auto reduced = m.matrix().without_column(m.index_of(e));
    return RepresentedMatroid::from_matrix(reduced, m.field());
}

std::vector<std::string> coloops(const RepresentedMatroid& m) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < m.size(); ++j) {
        const auto rest = m.matrix().without_column(j);
        if (rank_over(rest.values(), m.field()) < m.rank()) out.push_back(m.labels()[j]);
    }
    return out;
}

bool is_1pi(const RepresentedMatroid& m) { return coloops(m).empty(); }

bool same_matroid_over_q_and_f2(const Dense<Rational>& m) {
    if (!entries_in_unit_range(m)) throw DomainError("binary test needs entries in {-1,0,1}");
    const auto f2 = cast_to_field<2>(m);
    if (rank(m) != rank(f2)) return false;
    return bases_of_grid(m) == bases_of_grid(f2);
}

bool is_regular_by_binary_test(const RepresentedMatroid& m) {
    return same_matroid_over_q_and_f2(m.matrix().values());
}

// ---------------------------------------------------------------------------
// Text record

MatroidRecord parse_matroid_record(std::istream& in) {
    std::string line;
    int lineno = 0;
    std::optional<Field> field;
    std::string section;
    std::string matrix_text;
    std::vector<std::vector<std::string>> circuits;
    bool have_circuits = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks[0] == "field") {
            if (toks.size() != 2) throw SchemaError("line " + std::to_string(lineno) + ": expected 'field <Q|F2|F3>'");
            try {
                field = parse_field(toks[1]);
            } catch (const DomainError& e) {
                throw SchemaError("line " + std::to_string(lineno) + ": " + e.what());
            }
            continue;
        }
        if (toks.size() == 1 && (toks[0] == "matrix" || toks[0] == "circuits")) {
            section = toks[0];
            have_circuits = have_circuits || section == "circuits";
            continue;
        }
        if (section == "matrix") {
            matrix_text += line + "\n";
        } else if (section == "circuits") {
            circuits.push_back(toks);
        } else {
            throw SchemaError("line " + std::to_string(lineno) + ": unexpected '" + toks[0] +
                              "' (expected 'field', 'matrix' or 'circuits')");
        }
    }
    if (matrix_text.empty()) throw SchemaError("matroid record has no matrix section");
    MatroidRecord rec;
    rec.matroid = RepresentedMatroid(parse_matrix_literal(matrix_text), field.value_or(Field::Q));
    if (have_circuits) rec.circuits = CircuitSystem::from_labels(rec.matroid.labels(), circuits);
    return rec;
}

MatroidRecord parse_matroid_record(const std::string& text) {
    std::istringstream ss(text);
    return parse_matroid_record(ss);
}

void write_matroid_record(std::ostream& os, const RepresentedMatroid& m, const CircuitSystem* circuits) {
    os << "field " << to_string(m.field()) << "\n";
    os << "matrix\n";
    write_matrix_literal(os, m.matrix());
    if (circuits) {
        os << "circuits\n";
        for (auto c : circuits->circuits()) {
            const auto l = circuits->labels_of(c);
            for (std::size_t i = 0; i < l.size(); ++i) os << (i ? " " : "") << l[i];
            os << "\n";
        }
    }
}

}  // namespace feynmat

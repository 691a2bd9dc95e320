#include "feynmat/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace feynmat {

using nlohmann::json;

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

std::string describe_components(const FeynGraph& g) {
    std::string s;
    for (const auto& comp : g.components()) {
        s += " {";
        for (std::size_t i = 0; i < comp.size(); ++i) s += (i ? "," : "") + g.vertices()[comp[i]];
        s += "}";
    }
    return s;
}

void require_connected(const FeynGraph& g) {
    if (!g.connected()) throw DomainError("graph is disconnected; components:" + describe_components(g));
}

}  // namespace

// ---------------------------------------------------------------------------
// FeynGraph

FeynGraph::FeynGraph(std::vector<std::string> vertices, std::vector<Edge> edges, std::vector<ExternalLeg> externals)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), externals_(std::move(externals)) {
    std::set<std::string> seen;
    for (const auto& v : vertices_)
        if (!seen.insert(v).second) throw DomainError("duplicate vertex '" + v + "'");
    std::set<std::string> ids;
    for (const auto& e : edges_) {
        if (e.id.empty()) throw DomainError("edge with empty id");
        if (!ids.insert(e.id).second) throw DomainError("duplicate edge id '" + e.id + "'");
        if (!seen.count(e.tail)) throw DomainError("edge '" + e.id + "': unknown tail vertex '" + e.tail + "'");
        if (!seen.count(e.head)) throw DomainError("edge '" + e.id + "': unknown head vertex '" + e.head + "'");
    }
    std::set<std::string> symbols;
    for (const auto& x : externals_) {
        if (!ids.insert(x.id).second) throw DomainError("external id '" + x.id + "' clashes with another id");
        if (!seen.count(x.vertex)) throw DomainError("external '" + x.id + "': unknown vertex '" + x.vertex + "'");
        if (!symbols.insert(x.symbol).second) throw DomainError("duplicate external momentum '" + x.symbol + "'");
        MomentumExpr::parse(x.symbol);
    }
    if (edges_.size() > ElementSet::capacity) throw DomainError("more than 64 edges");
}

std::size_t FeynGraph::vertex_index(const std::string& v) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i] == v) return i;
    throw LookupError("unknown vertex '" + v + "'");
}

std::size_t FeynGraph::edge_index(const std::string& e) const {
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (edges_[i].id == e) return i;
    throw LookupError("unknown edge '" + e + "'");
}

std::vector<std::string> FeynGraph::edge_ids() const {
    std::vector<std::string> out;
    for (const auto& e : edges_) out.push_back(e.id);
    return out;
}

std::vector<std::vector<std::size_t>> FeynGraph::components() const {
    UnionFind uf(vertices_.size());
    for (const auto& e : edges_) uf.unite(vertex_index(e.tail), vertex_index(e.head));
    std::map<std::size_t, std::vector<std::size_t>> by_root;
    for (std::size_t v = 0; v < vertices_.size(); ++v) by_root[uf.find(v)].push_back(v);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : by_root) out.push_back(std::move(members));
    return out;
}

FeynGraph FeynGraph::with_reversed(const std::string& e) const {
    FeynGraph g = *this;
    auto& edge = g.edges_[edge_index(e)];
    std::swap(edge.tail, edge.head);
    return g;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string as_id(const json& j, const std::string& where) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw SchemaError(where + ": expected a string or integer");
}

const json& member(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(where + ": missing field '" + key + "'");
    return *it;
}

}  // namespace

FeynGraph parse_graph_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("graph document must be a JSON object");
    std::vector<std::string> vertices;
    const json& vs = member(doc, "vertices", "document");
    if (!vs.is_array()) throw SchemaError("vertices: expected an array");
    for (std::size_t i = 0; i < vs.size(); ++i) vertices.push_back(as_id(vs[i], "vertices[" + std::to_string(i) + "]"));

    std::vector<Edge> edges;
    const json& es = member(doc, "edges", "document");
    if (!es.is_array()) throw SchemaError("edges: expected an array");
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string where = "edges[" + std::to_string(i) + "]";
        Edge e;
        e.id = as_id(member(es[i], "id", where), where + ".id");
        e.tail = as_id(member(es[i], "tail", where), where + ".tail");
        e.head = as_id(member(es[i], "head", where), where + ".head");
        if (auto it = es[i].find("mass2"); it != es[i].end() && !it->is_null()) {
            if (!it->is_string()) throw SchemaError(where + ".mass2: expected a symbol string");
            e.mass2 = it->get<std::string>();
        }
        edges.push_back(std::move(e));
    }

    std::vector<ExternalLeg> legs;
    if (auto it = doc.find("externals"); it != doc.end()) {
        if (!it->is_array()) throw SchemaError("externals: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string where = "externals[" + std::to_string(i) + "]";
            const json& x = (*it)[i];
            ExternalLeg leg;
            leg.id = as_id(member(x, "id", where), where + ".id");
            leg.vertex = as_id(member(x, "vertex", where), where + ".vertex");
            const json& sym = member(x, "symbol", where);
            if (!sym.is_string()) throw SchemaError(where + ".symbol: expected a string");
            leg.symbol = sym.get<std::string>();
            legs.push_back(std::move(leg));
        }
    }
    try {
        return FeynGraph(std::move(vertices), std::move(edges), std::move(legs));
    } catch (const DomainError& e) {
        throw SchemaError(e.what());
    }
}

FeynGraph parse_graph_json(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_graph_json(ss.str());
}

std::string graph_to_json(const FeynGraph& g) {
    json doc = json::object();
    doc["vertices"] = g.vertices();
    json es = json::array();
    for (const auto& e : g.edges()) {
        json j = {{"id", e.id}, {"tail", e.tail}, {"head", e.head}};
        if (e.mass2) j["mass2"] = *e.mass2;
        es.push_back(j);
    }
    doc["edges"] = es;
    json xs = json::array();
    for (const auto& x : g.externals()) xs.push_back({{"id", x.id}, {"vertex", x.vertex}, {"symbol", x.symbol}});
    doc["externals"] = xs;
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Matrices

RationalMatrix incidence_matrix(const FeynGraph& g) {
    Dense<Rational> b = Dense<Rational>::Zero(static_cast<Index>(g.vertices().size()),
                                              static_cast<Index>(g.edges().size()));
    for (std::size_t j = 0; j < g.edges().size(); ++j) {
        const auto& e = g.edges()[j];
        if (e.tail == e.head) continue;
        b(static_cast<Index>(g.vertex_index(e.tail)), static_cast<Index>(j)) = -1;
        b(static_cast<Index>(g.vertex_index(e.head)), static_cast<Index>(j)) = 1;
    }
    return RationalMatrix(std::move(b), g.edge_ids());
}

RepresentedMatroid cycle_matroid(const FeynGraph& g) {
    const auto b = incidence_matrix(g);
    std::vector<bool> drop(g.vertices().size(), false);
    for (const auto& comp : g.components()) drop[comp.back()] = true;
    std::vector<Index> keep;
    for (std::size_t v = 0; v < drop.size(); ++v)
        if (!drop[v]) keep.push_back(static_cast<Index>(v));
    return RepresentedMatroid(RationalMatrix(b.values()(keep, Eigen::all), b.labels()));
}

std::vector<ElementSet> spanning_trees(const FeynGraph& g) {
    require_connected(g);
    const std::size_t n = g.edges().size();
    const std::size_t k = g.vertices().empty() ? 0 : g.vertices().size() - 1;
    std::vector<ElementSet> out;
    for_each_combination(n, k, [&](const std::vector<std::size_t>& s) {
        UnionFind uf(g.vertices().size());
        for (auto j : s)
            if (!uf.unite(g.vertex_index(g.edges()[j].tail), g.vertex_index(g.edges()[j].head))) return true;
        out.push_back(ElementSet::of(s));
        return true;
    });
    return out;
}

std::vector<TwoForest> two_forests(const FeynGraph& g) {
    require_connected(g);
    std::vector<TwoForest> out;
    const std::size_t nv = g.vertices().size();
    if (nv < 2) return out;
    for_each_combination(g.edges().size(), nv - 2, [&](const std::vector<std::size_t>& s) {
        UnionFind uf(nv);
        for (auto j : s)
            if (!uf.unite(g.vertex_index(g.edges()[j].tail), g.vertex_index(g.edges()[j].head))) return true;
        TwoForest f;
        f.edges = ElementSet::of(s);
        const std::size_t r0 = uf.find(0);
        for (std::size_t v = 0; v < nv; ++v) (uf.find(v) == r0 ? f.first : f.second).push_back(v);
        out.push_back(std::move(f));
        return true;
    });
    return out;
}

std::vector<ElementSet> simple_cycles(const FeynGraph& g) {
    const std::size_t n = g.edges().size();
    if (n > 20) throw DomainError("simple_cycles is exhaustive; at most 20 edges");
    std::vector<ElementSet> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<int> degree(g.vertices().size(), 0);
        UnionFind uf(g.vertices().size());
        std::set<std::size_t> touched;
        for (std::size_t j = 0; j < n; ++j)
            if (mask >> j & 1U) {
                const auto t = g.vertex_index(g.edges()[j].tail), h = g.vertex_index(g.edges()[j].head);
                degree[t]++;
                degree[h]++;
                uf.unite(t, h);
                touched.insert(t);
                touched.insert(h);
            }
        bool ok = true;
        std::set<std::size_t> roots;
        for (auto v : touched) {
            if (degree[v] != 2) ok = false;
            roots.insert(uf.find(v));
        }
        if (ok && roots.size() == 1) out.push_back(ElementSet(mask));
    }
    std::sort(out.begin(), out.end(), ElementSetOrder{});
    return out;
}

// ---------------------------------------------------------------------------
// MomentumExpr

bool is_loop_symbol(const std::string& s) {
    if (s.size() < 2 || s[0] != 'l') return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool MomentumExpr::SymbolOrder::operator()(const std::string& a, const std::string& b) const {
    const bool la = is_loop_symbol(a), lb = is_loop_symbol(b);
    if (la != lb) return la;
    return natural_less(a, b);
}

MomentumExpr MomentumExpr::symbol(const std::string& s, long long c) {
    MomentumExpr e;
    e.add(s, c);
    return e;
}

void MomentumExpr::add(const std::string& s, long long c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(s, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

MomentumExpr MomentumExpr::parse(const std::string& text) {
    MomentumExpr out;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto fail = [&](const std::string& why) {
        throw SchemaError("momentum '" + text + "': " + why + " at position " + std::to_string(i));
    };
    skip();
    if (i == text.size()) fail("empty expression");
    bool first = true;
    while (true) {
        skip();
        if (i == text.size()) break;
        long long sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip();
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;
        long long coef = 1;
        bool have_number = false;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            coef = std::stoll(text.substr(i, j - i));
            i = j;
            have_number = true;
            skip();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip();
            }
        }
        if (i < text.size() && (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            out.add(text.substr(i, j - i), sign * coef);
            i = j;
        } else if (have_number) {
            if (coef != 0) fail("constant terms are not momenta");
        } else {
            fail("expected a symbol");
        }
    }
    return out;
}

long long MomentumExpr::coefficient(const std::string& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? 0 : it->second;
}

std::vector<std::string> MomentumExpr::symbols() const {
    std::vector<std::string> out;
    for (const auto& [s, c] : terms_) out.push_back(s);
    return out;
}

MomentumExpr& MomentumExpr::operator+=(const MomentumExpr& o) {
    for (const auto& [s, c] : o.terms_) add(s, c);
    return *this;
}

MomentumExpr& MomentumExpr::operator-=(const MomentumExpr& o) {
    for (const auto& [s, c] : o.terms_) add(s, -c);
    return *this;
}

MomentumExpr operator*(long long c, const MomentumExpr& a) {
    MomentumExpr out;
    if (c == 0) return out;
    for (const auto& [s, k] : a.terms_) out.terms_.emplace(s, c * k);
    return out;
}

MomentumExpr MomentumExpr::substitute(const std::string& s, const MomentumExpr& e) const {
    const long long c = coefficient(s);
    if (c == 0) return *this;
    MomentumExpr out = *this;
    out.terms_.erase(s);
    return out + c * e;
}

std::string to_string(const MomentumExpr& e) {
    if (e.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [s, c] : e.terms()) {
        const long long mag = c < 0 ? -c : c;
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        first = false;
        if (mag != 1) out += std::to_string(mag) + "*";
        out += s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Routing

const MomentumExpr& Routing::momentum(const std::string& edge) const {
    auto it = momenta.find(edge);
    if (it == momenta.end()) throw LookupError("no momentum routed for '" + edge + "'");
    return it->second;
}

MomentumExpr Routing::reduce(MomentumExpr e) const {
    for (const auto& [s, r] : eliminated) e = e.substitute(s, r);
    return e;
}

Routing route_momenta(const FeynGraph& g) {
    const std::size_t nv = g.vertices().size();
    Routing out;
    std::vector<MomentumExpr> inj(nv);
    for (const auto& x : g.externals()) inj[g.vertex_index(x.vertex)] += MomentumExpr::parse(x.symbol);

    for (const auto& comp : g.components()) {
        MomentumExpr total;
        for (auto v : comp) total += out.reduce(inj[v]);
        if (total.is_zero()) continue;
        std::string pick;
        for (const auto& [s, c] : total.terms())
            if (c == 1 || c == -1) pick = s;
        if (pick.empty())
            throw ConsistencyError("external momenta at component" + describe_components(g) +
                                   " sum to " + to_string(total) + ", which cannot be balanced");
        // c*pick + rest = 0  =>  pick = -c*rest
        const long long c = total.coefficient(pick);
        MomentumExpr rest = total - MomentumExpr::symbol(pick, c);
        out.eliminated.emplace_back(pick, -c * rest);
    }
    for (std::size_t v = 0; v < nv; ++v) {
        inj[v] = out.reduce(inj[v]);
        out.injected[g.vertices()[v]] = inj[v];
    }

    UnionFind uf(nv);
    std::vector<bool> in_tree(g.edges().size(), false);
    for (std::size_t j = 0; j < g.edges().size(); ++j) {
        const auto& e = g.edges()[j];
        if (e.tail != e.head && uf.unite(g.vertex_index(e.tail), g.vertex_index(e.head))) in_tree[j] = true;
    }

    // B k = -q_in: d(v) is what the tree edges at v still have to supply.
    std::vector<MomentumExpr> d(nv);
    for (std::size_t v = 0; v < nv; ++v) d[v] = -inj[v];
    for (std::size_t j = 0; j < g.edges().size(); ++j) {
        if (in_tree[j]) continue;
        const auto& e = g.edges()[j];
        const std::string l = "l" + std::to_string(out.loops.size() + 1);
        out.loops.push_back(l);
        const MomentumExpr k = MomentumExpr::symbol(l);
        out.momenta[e.id] = k;
        d[g.vertex_index(e.head)] -= k;
        d[g.vertex_index(e.tail)] += k;
    }

    std::vector<std::vector<std::size_t>> incident(nv);
    for (std::size_t j = 0; j < g.edges().size(); ++j)
        if (in_tree[j]) {
            incident[g.vertex_index(g.edges()[j].tail)].push_back(j);
            incident[g.vertex_index(g.edges()[j].head)].push_back(j);
        }
    std::vector<bool> done(g.edges().size(), false);
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t v = 0; v < nv; ++v) {
            std::vector<std::size_t> live;
            for (auto j : incident[v])
                if (!done[j]) live.push_back(j);
            if (live.size() != 1) continue;
            const auto& e = g.edges()[live[0]];
            const bool enters = g.vertex_index(e.head) == v;
            const MomentumExpr k = enters ? d[v] : -d[v];
            out.momenta[e.id] = k;
            done[live[0]] = true;
            const std::size_t u = enters ? g.vertex_index(e.tail) : g.vertex_index(e.head);
            d[u] -= enters ? -k : k;
            d[v] = MomentumExpr();
            progress = true;
        }
    }
    return out;
}

bool conservation_holds(const FeynGraph& g, const Routing& r) {
    std::vector<MomentumExpr> sum(g.vertices().size());
    for (const auto& e : g.edges()) {
        const MomentumExpr k = r.reduce(r.momentum(e.id));
        sum[g.vertex_index(e.head)] += k;
        sum[g.vertex_index(e.tail)] -= k;
    }
    for (const auto& x : g.externals()) sum[g.vertex_index(x.vertex)] += r.reduce(MomentumExpr::parse(x.symbol));
    return std::all_of(sum.begin(), sum.end(), [](const MomentumExpr& m) { return m.is_zero(); });
}

}  // namespace feynmat

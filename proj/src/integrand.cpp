#include "feynmat/integrand.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "json.hpp"

namespace feynmat {

LinearForm to_linear_form(const MomentumExpr& e) {
    LinearForm out;
    for (const auto& [s, c] : e.terms()) out[s] = Rational(c);
    return out;
}

std::string to_string(const LinearForm& f) {
    if (f.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, c] : f) {
        const bool neg = c < 0;
        const Rational mag = neg ? Rational(-c) : c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        if (mag != 1) os << to_string(mag) << "*";
        os << s;
        first = false;
    }
    return os.str();
}

std::string to_string(const Power& p) {
    if (p.shift == 0) return p.base;
    return p.base + (p.shift > 0 ? " + " : " - ") + std::to_string(std::abs(p.shift));
}

namespace {

void add_scaled(LinearForm& to, const LinearForm& f, const Rational& c) {
    for (const auto& [s, x] : f) {
        to[s] += c * x;
        if (to[s] == 0) to.erase(s);
    }
}

Power power_of(const std::string& e, const std::map<std::string, int>& shifts) {
    auto it = shifts.find(e);
    return {"nu_" + e, it == shifts.end() ? 0 : it->second};
}

}  // namespace

MomentumSpaceIntegrand momentum_space(const RationalMatrix& m, const std::vector<std::string>& externals,
                                      const std::map<std::string, LinearForm>& leg_momenta,
                                      const std::map<std::string, std::string>& masses,
                                      const std::map<std::string, int>& shifts) {
    std::set<std::string> legs;
    for (const auto& x : externals) {
        if (!m.has_label(x)) throw SchemaError("external column '" + x + "' is not a label of the matrix");
        legs.insert(x);
    }
    for (const auto& [x, p] : leg_momenta)
        if (!legs.count(x)) throw SchemaError("momentum given for '" + x + "', which is not an external column");

    std::vector<std::string> internal, external;
    for (const auto& l : m.labels()) (legs.count(l) ? external : internal).push_back(l);
    std::sort(internal.begin(), internal.end(), NaturalLess{});
    std::sort(external.begin(), external.end(), NaturalLess{});
    auto order = internal;
    order.insert(order.end(), external.begin(), external.end());
    const auto r = rref(m.select_columns(order).values());
    const Index rows = r.matrix.rows(), cols = r.matrix.cols();
    const std::size_t ni = internal.size();

    // Signs: make the entries on a spanning forest of the nonzero pattern
    // positive, rows taken as roots in order.  Pivot columns are leaves, so
    // pivots stay +1.
    std::vector<int> rs(static_cast<std::size_t>(rows), 0), cs(static_cast<std::size_t>(cols), 0);
    for (Index root = 0; root < rows; ++root) {
        if (rs[static_cast<std::size_t>(root)]) continue;
        rs[static_cast<std::size_t>(root)] = 1;
        std::deque<std::pair<bool, Index>> queue{{true, root}};
        while (!queue.empty()) {
            const auto [is_row, at] = queue.front();
            queue.pop_front();
            if (is_row) {
                for (Index c = 0; c < cols; ++c) {
                    if (cs[static_cast<std::size_t>(c)] || r.matrix(at, c) == 0) continue;
                    cs[static_cast<std::size_t>(c)] = (r.matrix(at, c) > 0 ? 1 : -1) * rs[static_cast<std::size_t>(at)];
                    queue.push_back({false, c});
                }
            } else {
                for (Index i = 0; i < rows; ++i) {
                    if (rs[static_cast<std::size_t>(i)] || r.matrix(i, at) == 0) continue;
                    rs[static_cast<std::size_t>(i)] = (r.matrix(i, at) > 0 ? 1 : -1) * cs[static_cast<std::size_t>(at)];
                    queue.push_back({true, i});
                }
            }
        }
    }
    for (auto& s : cs)
        if (!s) s = 1;  // zero columns
    auto entry = [&](Index i, Index c) {
        return Rational(rs[static_cast<std::size_t>(i)] * cs[static_cast<std::size_t>(c)]) * r.matrix(i, c);
    };

    MomentumSpaceIntegrand out;
    std::vector<LinearForm> k(static_cast<std::size_t>(cols));
    std::vector<bool> pivot(static_cast<std::size_t>(cols), false);
    for (auto p : r.pivots) pivot[static_cast<std::size_t>(p)] = true;
    for (std::size_t c = 0; c < static_cast<std::size_t>(cols); ++c) {
        if (c < ni) {
            if (!pivot[c]) {
                out.loops.push_back("l" + std::to_string(out.loops.size() + 1));
                k[c][out.loops.back()] = 1;
            }
        } else if (auto it = leg_momenta.find(order[c]); it != leg_momenta.end()) {
            add_scaled(k[c], it->second, Rational(cs[c]));
        } else {
            k[c]["p_" + order[c]] = 1;
        }
    }
    for (Index i = 0; i < rows; ++i) {
        LinearForm delta;
        for (Index c = 0; c < cols; ++c)
            if (r.matrix(i, c) != 0) delta["k_" + order[static_cast<std::size_t>(c)]] = entry(i, c);
        out.deltas.push_back(std::move(delta));
        const auto p = static_cast<std::size_t>(r.pivots[static_cast<std::size_t>(i)]);
        if (p >= ni) {
            ++out.external_constraints;
            continue;
        }
        for (Index c = 0; c < cols; ++c)
            if (static_cast<std::size_t>(c) != p && r.matrix(i, c) != 0)
                add_scaled(k[p], k[static_cast<std::size_t>(c)], Rational(-entry(i, c)));
    }
    for (std::size_t c = 0; c < ni; ++c) {
        PropagatorSpec s;
        s.element = order[c];
        s.momentum = k[c];
        if (auto it = masses.find(order[c]); it != masses.end()) s.mass2 = it->second;
        s.power = power_of(order[c], shifts);
        s.orientation = cs[c];
        out.propagators.push_back(std::move(s));
    }
    return out;
}

MomentumSpaceIntegrand momentum_space(const FeynGraph& g, const ReducedForm& rf, const std::map<std::string, int>& shifts) {
    if (!g.externals().empty() && rf.externals.empty())
        throw DomainError("the reduced form must carry the external legs as columns");
    std::map<std::string, LinearForm> legs;
    for (const auto& x : g.externals()) legs[x.id] = to_linear_form(rf.routing.reduce(MomentumExpr::parse(x.symbol)));
    return momentum_space(rf.matrix(), rf.externals, legs, rf.masses, shifts);
}

ParametricIntegrand parametric(const RepresentedMatroid& extended, const std::vector<std::string>& legs,
                               const std::vector<MomentumExpr>& momenta, const std::map<std::string, int>& shifts) {
    std::vector<std::string> internal;
    for (const auto& l : extended.labels())
        if (std::find(legs.begin(), legs.end(), l) == legs.end()) internal.push_back(l);
    std::sort(internal.begin(), internal.end(), NaturalLess{});
    auto order = internal;
    order.insert(order.end(), legs.begin(), legs.end());
    // rref so that the first base has weight 1 whatever rows came in
    auto canonical = [&](const RationalMatrix& m) {
        return RepresentedMatroid(rref(m).first, extended.field());
    };
    const auto sorted = canonical(extended.matrix().select_columns(order));

    ParametricIntegrand out;
    out.variables = internal;
    out.first = psi_base_expansion(canonical(sorted.matrix().select_columns(internal)));
    if (legs.size() >= 2) out.second = phi_second(sorted, legs, momenta);
    for (const auto& e : internal) out.powers.push_back({e, power_of(e, shifts)});
    return out;
}

ParametricIntegrand parametric(const FeynGraph& g, const ReducedForm& rf, const std::map<std::string, int>& shifts) {
    if (!g.externals().empty() && rf.externals.empty())
        throw DomainError("the reduced form must carry the external legs as columns");
    std::vector<MomentumExpr> momenta;
    for (const auto& x : g.externals()) momenta.push_back(MomentumExpr::parse(x.symbol));
    return parametric(rf.matroid(), rf.externals, momenta, shifts);
}

IntegrandDocument integrand(const FeynGraph& g, const ReducedForm& rf, const std::map<std::string, int>& shifts) {
    return {momentum_space(g, rf, shifts), parametric(g, rf, shifts)};
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string delta_string(const LinearForm& d) { return "delta(" + to_string(d) + ")"; }

std::string propagator_string(const PropagatorSpec& p) {
    std::string s = "1/((" + to_string(p.momentum) + ")^2";
    if (!p.mass2.empty()) s += " + " + p.mass2;
    return s + ")^(" + to_string(p.power) + ")";
}

}  // namespace

std::string integrand_text(const IntegrandDocument& d) {
    std::ostringstream os;
    const auto& m = d.momentum;
    os << "loops:";
    for (const auto& l : m.loops) os << " " << l;
    os << "\ndeltas: " << m.deltas.size() << " (" << m.external_constraints << " among legs only)\n";
    for (const auto& x : m.deltas) os << "  " << delta_string(x) << "\n";
    os << "propagators:\n";
    for (const auto& p : m.propagators) os << "  " << p.element << ": " << propagator_string(p) << "\n";
    const auto& par = d.parametric;
    os << "psi:\n";
    for (const auto& t : term_lines(par.first, par.variables)) os << "  " << t << "\n";
    if (par.second) {
        os << "phi:\n";
        for (const auto& t : term_lines(par.second->poly, par.second->names)) os << "  " << t << "\n";
    } else {
        os << "phi: none (fewer than two external legs)\n";
    }
    os << "powers:";
    for (const auto& [e, p] : par.powers) os << " " << e << "=" << to_string(p);
    os << "\n";
    return os.str();
}

std::string integrand_json(const IntegrandDocument& d) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["loops"] = d.momentum.loops;
    j["deltas"] = ordered_json::array();
    for (const auto& x : d.momentum.deltas) j["deltas"].push_back(to_string(x));
    j["external_constraints"] = d.momentum.external_constraints;
    j["propagators"] = ordered_json::array();
    for (const auto& p : d.momentum.propagators) {
        ordered_json e;
        e["element"] = p.element;
        e["momentum"] = to_string(p.momentum);
        e["mass2"] = p.mass2.empty() ? ordered_json(nullptr) : ordered_json(p.mass2);
        e["power"] = to_string(p.power);
        j["propagators"].push_back(e);
    }
    const auto& par = d.parametric;
    j["psi"]["variables"] = par.variables;
    j["psi"]["terms"] = term_lines(par.first, par.variables);
    if (par.second) {
        j["phi"]["variables"] = par.second->names;
        j["phi"]["terms"] = term_lines(par.second->poly, par.second->names);
    } else {
        j["phi"] = nullptr;
    }
    j["powers"] = ordered_json::array();
    for (const auto& [e, p] : par.powers) j["powers"].push_back({{"element", e}, {"base", p.base}, {"shift", p.shift}});
    return j.dump(2) + "\n";
}

}  // namespace feynmat

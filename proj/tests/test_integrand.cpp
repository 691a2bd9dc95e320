#include <gtest/gtest.h>

#include "feynmat/integrand.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace feynmat;

namespace {

FeynGraph load_graph(const std::string& name) { return parse_graph_json(read_fixture(name)); }

ReducedForm reduce_with_legs(const FeynGraph& g, const std::vector<DotPair>& pairs = {}) {
    ReduceOptions o;
    o.externals = true;
    return reduce_graph(g, pairs, o);
}

std::string momentum_text(const MomentumSpaceIntegrand& m) {
    std::ostringstream os;
    for (const auto& l : m.loops) os << l << " ";
    os << "\n" << m.external_constraints << "\n";
    for (const auto& d : m.deltas) os << to_string(d) << "\n";
    for (const auto& p : m.propagators)
        os << p.element << " " << to_string(p.momentum) << " " << p.mass2 << " " << to_string(p.power) << "\n";
    return os.str();
}

LinearForm substitute(const LinearForm& f, const std::map<std::string, LinearForm>& by) {
    LinearForm out;
    for (const auto& [s, c] : f) {
        auto it = by.find(s);
        if (it == by.end()) {
            out[s] += c;
            continue;
        }
        for (const auto& [t, d] : it->second) out[t] += c * d;
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

LinearForm scaled(LinearForm f, int s) {
    for (auto& [k, c] : f) c *= s;
    return f;
}

// The emitted momenta are the routed ones after a change of loop variables.
void expect_matches_routing(const ReducedForm& rf, const MomentumSpaceIntegrand& m,
                            const std::string& ctx) {
    std::map<std::string, LinearForm> loop_value;
    for (const auto& p : m.propagators)
        if (p.momentum.size() == 1 && p.momentum.begin()->second == 1 &&
            std::find(m.loops.begin(), m.loops.end(), p.momentum.begin()->first) != m.loops.end())
            loop_value[p.momentum.begin()->first] = scaled(to_linear_form(rf.momenta.at(p.element)), p.orientation);
    ASSERT_EQ(loop_value.size(), m.loops.size()) << ctx;
    for (const auto& p : m.propagators)
        EXPECT_EQ(substitute(p.momentum, loop_value), scaled(to_linear_form(rf.momenta.at(p.element)), p.orientation))
            << ctx << " " << p.element;
}

// Row ops, a zero row, ±1 column scalings and a column permutation.
RationalMatrix scramble(const RationalMatrix& m, oracle::Gen& gen, const std::set<std::string>& fixed_sign = {}) {
    Dense<Rational> a = m.values();
    for (int t = 0; t < 6; ++t) {
        const Index i = gen.uniform(0, static_cast<int>(a.rows()) - 1), j = gen.uniform(0, static_cast<int>(a.rows()) - 1);
        if (i == j) continue;
        const Rational f(gen.uniform(-2, 2), gen.uniform(1, 3));
        for (Index c = 0; c < a.cols(); ++c) a(i, c) += f * a(j, c);
    }
    Dense<Rational> z = Dense<Rational>::Zero(a.rows() + 1, a.cols());
    z.topRows(a.rows()) = a;
    for (Index c = 0; c < z.cols(); ++c)
        if (gen.coin() && !fixed_sign.count(m.labels()[static_cast<std::size_t>(c)]))
            for (Index i = 0; i < z.rows(); ++i) z(i, c) = -z(i, c);
    std::vector<std::size_t> perm(static_cast<std::size_t>(z.cols()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen.engine());
    return RationalMatrix(z, m.labels()).select_columns(perm);
}

}  // namespace

TEST(MomentumSpace, BigExampleShape) {
    const auto g = load_graph("big_example.json");
    const auto rf = reduce_with_legs(g, {DotPair::parse("a1:a5")});
    const auto m = momentum_space(g, rf);
    EXPECT_EQ(m.deltas.size(), 9u);
    EXPECT_EQ(m.propagators.size(), 11u);
    EXPECT_EQ(m.loops.size(), 3u);
    EXPECT_EQ(m.external_constraints, 1u);
    EXPECT_EQ(m.propagators.back().element, "a11");
    expect_matches_routing(rf, m, "big");
}

TEST(MomentumSpace, ReferenceMatrixHasSameShape) {
    const auto m = momentum_space(load_matrix("big_matrix.mat"), {"e1", "e2", "e3", "e4"});
    EXPECT_EQ(m.deltas.size(), 9u);
    EXPECT_EQ(m.propagators.size(), 11u);
    EXPECT_EQ(m.loops.size(), 3u);
    for (const auto& p : m.propagators) EXPECT_FALSE(p.momentum.empty()) << p.element;
}

TEST(MomentumSpace, SingleEdge) {
    Dense<Rational> b(1, 1);
    b << -1;
    const auto bare = momentum_space(RationalMatrix(b, {"a"}), {});
    EXPECT_EQ(bare.deltas.size(), 1u);
    EXPECT_EQ(bare.propagators.size(), 1u);
    EXPECT_TRUE(bare.loops.empty());

    const auto g = load_graph("single_edge.json");
    const auto m = momentum_space(g, reduce_with_legs(g));
    ASSERT_EQ(m.propagators.size(), 1u);
    EXPECT_EQ(m.deltas.size() - m.external_constraints, 1u);
    EXPECT_EQ(m.propagators[0].mass2, "m2");
    EXPECT_EQ(to_string(m.propagators[0].momentum), "q");
}

TEST(MomentumSpace, RepresentationIndependent) {
    oracle::Gen gen(5);
    const auto ref = load_matrix("big_matrix.mat");
    const std::vector<std::string> legs{"e1", "e2", "e3", "e4"};
    const auto expected = momentum_text(momentum_space(ref, legs));
    for (int t = 0; t < 10; ++t) EXPECT_EQ(momentum_text(momentum_space(scramble(ref, gen), legs)), expected) << t;
    const auto k = load_matrix("k33_coext_a.mat");
    const auto kexp = momentum_text(momentum_space(k, {}));
    for (int t = 0; t < 10; ++t) EXPECT_EQ(momentum_text(momentum_space(scramble(k, gen), {})), kexp) << t;
}

TEST(MomentumSpace, ShiftsBecomePowers) {
    const auto g = load_graph("big_example.json");
    const auto s = scalarize(g, {DotPair::parse("a1:a5")}, [] {
        ReduceOptions o;
        o.externals = true;
        return o;
    }());
    for (const auto& t : s.terms) {
        const auto m = momentum_space(g, s.form, t.shift);
        for (const auto& p : m.propagators) {
            auto it = t.shift.find(p.element);
            EXPECT_EQ(p.power.shift, it == t.shift.end() ? 0 : it->second);
            EXPECT_EQ(p.power.base, "nu_" + p.element);
        }
    }
    EXPECT_EQ(to_string(Power{"nu_a1", -1}), "nu_a1 - 1");
    EXPECT_EQ(to_string(Power{"nu_a1", 0}), "nu_a1");
}

TEST(MomentumSpace, Errors) {
    const auto ref = load_matrix("big_matrix.mat");
    EXPECT_THROW(momentum_space(ref, {"zz"}), SchemaError);
    EXPECT_THROW(momentum_space(ref, {"e1"}, {{"e2", LinearForm{}}}), SchemaError);
    const auto g = load_graph("big_example.json");
    EXPECT_THROW(momentum_space(g, reduce_graph(g, {})), DomainError);
}

TEST(MomentumSpaceProperty, CountingAndRouting) {
    oracle::Gen gen(77);
    for (int t = 0; t < 25; ++t) {
        const auto g = gen.connected_graph(6, 8, gen.uniform(0, 3));
        const auto ids = g.edge_ids();
        std::vector<DotPair> pairs;
        if (gen.coin()) pairs.push_back({ids.front(), ids.back()});
        const auto rf = reduce_with_legs(g, pairs);
        const auto m = momentum_space(g, rf);
        const std::string ctx = "case " + std::to_string(t);
        const auto internal = rf.internal_elements();
        const auto rk = rank(rf.matrix().select_columns(internal).values());
        EXPECT_EQ(m.deltas.size(), static_cast<std::size_t>(rf.matrix().rows())) << ctx;
        EXPECT_EQ(m.deltas.size() - m.external_constraints, rk) << ctx;
        EXPECT_EQ(m.loops.size(), internal.size() - rk) << ctx;
        expect_matches_routing(rf, m, ctx);
        // every element sits in a delta or is a loop column
        for (const auto& p : m.propagators) {
            bool seen = false;
            for (const auto& d : m.deltas) seen = seen || d.count("k_" + p.element);
            EXPECT_TRUE(seen || (p.momentum.size() == 1 && p.momentum.begin()->first[0] == 'l')) << ctx;
        }
    }
}

TEST(Parametric, DunceCap) {
    const auto g = load_graph("dunce_cap.json");
    const auto p = parametric(g, reduce_with_legs(g));
    EXPECT_EQ(p.variables, (std::vector<std::string>{"a", "b", "c", "d"}));
    EXPECT_EQ(to_string(p.first, p.variables), to_string(psi_tree_oracle(g), g.edge_ids()));
    EXPECT_EQ(p.first.size(), 5u);
    ASSERT_TRUE(p.second);
    const auto phi = phi_second(g);
    EXPECT_EQ(p.second->names, phi.names);
    EXPECT_EQ(p.second->poly, phi.poly);
}

TEST(Parametric, BubbleAndTree) {
    const auto b = load_graph("bubble.json");
    const auto p = parametric(b, reduce_with_legs(b));
    EXPECT_EQ(to_string(p.first, p.variables), "a + b");
    ASSERT_TRUE(p.second);
    EXPECT_EQ(to_string(p.second->poly, p.second->names), "a*b*s11");
    const auto t = load_graph("path.json");
    const auto q = parametric(t, reduce_with_legs(t));
    EXPECT_EQ(q.first, Polynomial(Rational(1)));
}

TEST(Parametric, InvariantUnderRowOpsAndInternalColumns) {
    oracle::Gen gen(9);
    const auto ref = RepresentedMatroid::from_matrix(load_matrix("big_matrix.mat"));
    const std::vector<std::string> legs{"e1", "e2", "e3", "e4"};
    const std::vector<MomentumExpr> q{MomentumExpr::parse("q1"), MomentumExpr::parse("q2"),
                                      MomentumExpr::parse("-q3"), MomentumExpr::parse("-q1-q2+q3")};
    const auto base = parametric(ref, legs, q);
    ASSERT_TRUE(base.second);
    for (int t = 0; t < 3; ++t) {
        // leg columns keep their sign: their momenta stay fixed
        const auto m = scramble(ref.matrix(), gen, {legs.begin(), legs.end()});
        const auto p = parametric(RepresentedMatroid::from_matrix(m), legs, q);
        EXPECT_EQ(p.variables, base.variables);
        EXPECT_EQ(p.first, base.first);
        ASSERT_TRUE(p.second);
        EXPECT_EQ(p.second->names, base.second->names);
        EXPECT_EQ(p.second->poly, base.second->poly);
    }
}

TEST(Document, TextAndJson) {
    const auto g = load_graph("dunce_cap.json");
    const auto d = integrand(g, reduce_with_legs(g));
    const auto text = integrand_text(d);
    EXPECT_EQ(text, integrand_text(integrand(g, reduce_with_legs(g))));
    EXPECT_NE(text.find("psi:"), std::string::npos);
    EXPECT_NE(text.find("phi:"), std::string::npos);
    const auto j = nlohmann::ordered_json::parse(integrand_json(d));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"loops", "deltas", "external_constraints", "propagators", "psi", "phi",
                                              "powers"}));
    EXPECT_EQ(j["psi"]["terms"].size(), 5u);
    EXPECT_EQ(j["propagators"].size(), 4u);
    EXPECT_EQ(j["powers"][0]["base"], "nu_a");
    const auto one = load_graph("single_edge.json");
    ReduceOptions o;
    o.externals = true;
    EXPECT_TRUE(nlohmann::json::parse(integrand_json(integrand(one, reduce_graph(one, {}, o))))["phi"].is_object());
}

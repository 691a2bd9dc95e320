#include <gtest/gtest.h>

#include "feynmat/symanzik.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace feynmat;

namespace {

FeynGraph load_graph(const std::string& name) { return parse_graph_json(read_fixture(name)); }

// Parses "a*b + 2*c*d - s11*a" over a name table.
Polynomial poly(const std::string& text, const std::vector<std::string>& names) {
    Polynomial out;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && text[i] == ' ') ++i;
    };
    while (true) {
        skip();
        if (i >= text.size()) break;
        Rational sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            if (text[i] == '-') sign = -1;
            ++i;
            skip();
        }
        Polynomial term(sign);
        while (i < text.size() && text[i] != '+' && text[i] != '-') {
            skip();
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '/')) ++j;
            const std::string tok = text.substr(i, j - i);
            i = j;
            if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
                term *= Polynomial(Rational(tok));
            } else {
                auto it = std::find(names.begin(), names.end(), tok);
                if (it == names.end()) throw std::runtime_error("unknown name " + tok);
                term *= Polynomial::var(static_cast<std::size_t>(it - names.begin()));
            }
            skip();
            if (i < text.size() && text[i] == '*') ++i;
            skip();
        }
        out += term;
    }
    return out;
}

const std::vector<std::string> kDunceNames{"a", "b", "c", "d"};

RepresentedMatroid dunce() { return RepresentedMatroid::from_matrix(load_matrix("dunce_cap.mat")); }

void expect_methods_agree(const RepresentedMatroid& m, const std::string& what) {
    const auto base = psi_base_expansion(m);
    EXPECT_EQ(psi_block_det(m), base) << what;
    EXPECT_EQ(psi_circuit_gram(m), base) << what;
    unsigned deg = 0;
    EXPECT_TRUE(base.is_homogeneous_in(0, m.size(), &deg)) << what;
    EXPECT_EQ(deg, m.size() - m.rank()) << what;
    for (const auto& [mono, c] : base.terms()) EXPECT_GT(c, 0) << what;
}

}  // namespace

TEST(Psi, DunceCapAllMethods) {
    const auto expected = poly("a*c + a*d + b*c + b*d + c*d", kDunceNames);
    const auto m = dunce();
    EXPECT_EQ(psi_block_det(m), expected);
    EXPECT_EQ(psi_base_expansion(m), expected);
    EXPECT_EQ(psi_circuit_gram(m), expected);
    EXPECT_EQ(psi_tree_oracle(load_graph("dunce_cap.json")), expected);
    EXPECT_EQ(expected.size(), 5u);
}

TEST(Psi, DunceCapGramMatrixOnNamedCircuits) {
    // det [[a+b+c, a+b], [a+b, a+b+d]]
    const auto ab = poly("a + b", kDunceNames);
    const auto g = (ab + poly("c", kDunceNames)) * (ab + poly("d", kDunceNames)) - ab * ab;
    EXPECT_EQ(g, psi_circuit_gram(dunce()));
}

TEST(Psi, TriangleAndBubble) {
    const std::vector<std::string> abc{"a", "b", "c"};
    for (const auto* name : {"triangle.json"}) {
        const auto m = cycle_matroid(load_graph(name));
        EXPECT_EQ(psi_block_det(m), poly("a + b + c", abc));
        EXPECT_EQ(psi_circuit_gram(m), poly("a + b + c", abc));
    }
    const auto b = cycle_matroid(load_graph("bubble.json"));
    EXPECT_EQ(psi_base_expansion(b), poly("a + b", abc));
    EXPECT_EQ(psi_block_det(b), poly("a + b", abc));
}

TEST(Psi, SingleColoopIsOne) {
    const RepresentedMatroid m(make_labeled({{1}}, {"a"}));
    EXPECT_EQ(psi_base_expansion(m), Polynomial(1));
    EXPECT_EQ(psi_block_det(m), Polynomial(1));
    EXPECT_EQ(psi_circuit_gram(m), Polynomial(1));
}

TEST(Psi, K33CoextensionHasCoefficientFour) {
    for (const auto* f : {"k33_coext_a.mat", "k33_coext_b.mat"}) {
        const auto m = RepresentedMatroid::from_matrix(load_matrix(f));
        const auto psi = psi_base_expansion(m);
        bool four = false;
        for (const auto& [mono, c] : psi.terms()) four = four || c == 4;
        EXPECT_TRUE(four) << f;
        EXPECT_EQ(psi_block_det(m), psi) << f;
        EXPECT_EQ(psi_circuit_gram(m), psi) << f;
    }
}

TEST(Psi, FixturesAgreeAcrossMethods) {
    for (const auto* f : {"dunce_cap.mat", "big_matrix.mat", "u24.mat", "k33.mat"})
        expect_methods_agree(RepresentedMatroid::from_matrix(load_matrix(f)), f);
    for (const auto* g : {"dunce_cap.json", "big_example.json", "k33.json", "two_triangles.json"})
        expect_methods_agree(cycle_matroid(load_graph(g)), g);
}

TEST(Psi, GraphicMatchesTreeOracle) {
    for (const auto* g : {"dunce_cap.json", "big_example.json", "k33.json", "triangle.json", "bubble.json"}) {
        const auto graph = load_graph(g);
        EXPECT_EQ(psi_base_expansion(cycle_matroid(graph)), psi_tree_oracle(graph)) << g;
    }
}

TEST(Psi, LoopDeletionAndColoopContraction) {
    // e is a loop: Ψ(M) = a_e Ψ(M \ e)
    const RepresentedMatroid m(make_labeled({{1, 1, 0, 0}, {0, 1, 1, 0}}, {"a", "b", "c", "e"}));
    const auto without = delete_element(m, "e");
    const auto psi_del = rename_variables(psi_base_expansion(without), without.labels(), m.labels());
    EXPECT_EQ(psi_base_expansion(m), psi_del * Polynomial::var(3));
    // d is a coloop: Ψ(M) = Ψ(M / d)
    const RepresentedMatroid n(make_labeled({{1, 1, 1, 0}, {0, 0, 0, 1}}, {"a", "b", "c", "d"}));
    const auto con = contract(n, "d");
    EXPECT_EQ(psi_base_expansion(n), rename_variables(psi_base_expansion(con), con.labels(), n.labels()));
    EXPECT_EQ(psi_block_det(n), psi_base_expansion(n));
}

TEST(Psi, DualityOnPlanarFixtures) {
    for (const auto* g : {"dunce_cap.json", "triangle.json", "bubble.json", "big_example.json", "two_triangles.json"}) {
        const auto m = cycle_matroid(load_graph(g));
        const auto d = dual(standardize(m));
        const auto lhs = rename_variables(psi_base_expansion(d), d.labels(), m.labels());
        EXPECT_EQ(lhs, psi_inverted(psi_base_expansion(m), m.size())) << g;
    }
}

TEST(Psi, BlockDetRejectsFiniteField) {
    const RepresentedMatroid m(make_labeled({{1, 1}}, {"a", "b"}), Field::F2);
    EXPECT_THROW(psi_block_det(m), DomainError);
    EXPECT_EQ(psi_base_expansion(m), poly("a + b", {"a", "b"}));
}

// ---------------------------------------------------------------------------
// Second polynomial

TEST(Phi, DunceCapGoldenValue) {
    const auto g = load_graph("dunce_cap.json");
    const auto phi = phi_second(g);
    ASSERT_EQ(phi.names, (std::vector<std::string>{"a", "b", "c", "d", "s11", "s22", "s33", "s12", "s13", "s23"}));
    EXPECT_EQ(phi.poly, poly("s11*a*b*c + s11*a*b*d + s22*b*c*d + s33*a*c*d", phi.names));
    const auto oracle = phi_2forest_oracle(g);
    EXPECT_EQ(oracle.names, phi.names);
    EXPECT_EQ(oracle.poly, phi.poly);
}

TEST(Phi, DunceCapFromSuppliedExtendedMatrix) {
    // legs as extra columns with +1 at their vertex; the far-end row is gone
    const RepresentedMatroid ext(make_labeled({{-1, -1, 0, 0, 1, 0, 0}, {0, 1, 1, 1, 0, 1, 0}, {1, 0, -1, -1, 0, 0, 1}},
                                              {"a", "b", "c", "d", "e1", "e2", "e3"}));
    const auto phi = phi_second(ext, {"e1", "e2", "e3"},
                                {MomentumExpr::parse("q1"), MomentumExpr::parse("q2"), MomentumExpr::parse("q3")});
    EXPECT_EQ(phi.poly, poly("s11*a*b*c + s11*a*b*d + s22*b*c*d + s33*a*c*d", phi.names));
}

TEST(Phi, BubbleAndSingleEdge) {
    const auto b = load_graph("bubble.json");
    const auto phi = phi_second(b);
    EXPECT_EQ(phi.poly, poly("s11*a*b", phi.names));
    EXPECT_EQ(phi.poly, phi_2forest_oracle(b).poly);
    const auto s = load_graph("single_edge.json");
    EXPECT_EQ(phi_2forest_oracle(s).poly, poly("s11*a", phi_2forest_oracle(s).names));
    EXPECT_EQ(phi_second(s).poly, phi_2forest_oracle(s).poly);
}

TEST(Phi, HomogeneousOfLoopPlusOne) {
    for (const auto* f : {"dunce_cap.json", "big_example.json", "bubble.json", "path.json"}) {
        const auto g = load_graph(f);
        const auto phi = phi_second(g);
        unsigned deg = 0;
        EXPECT_TRUE(phi.poly.is_homogeneous_in(0, phi.edges, &deg)) << f;
        EXPECT_EQ(deg, g.edges().size() - cycle_matroid(g).rank() + 1) << f;
        EXPECT_TRUE(phi.poly.is_homogeneous_in(phi.edges, phi.names.size(), &deg)) << f;
        EXPECT_EQ(deg, 1u) << f;
        EXPECT_EQ(phi.poly, phi_2forest_oracle(g).poly) << f;
    }
}

TEST(Phi, TooFewLegs) {
    const FeynGraph g({"1", "2"}, {{"a", "1", "2", std::nullopt}}, {{"x", "1", "q"}});
    EXPECT_THROW(phi_second(g), DomainError);
    EXPECT_THROW(phi_2forest_oracle(g), DomainError);
}

TEST(DotTable, NormalFormPrefersSquares) {
    const DotTable t({"q1", "q2", "q3"}, {{1, 1, 1}});
    EXPECT_EQ(t.basis(), (std::vector<std::size_t>{0, 1, 2}));
    const auto names = t.names();
    // s12 = (s33 - s11 - s22)/2
    EXPECT_EQ(t.normalize(Polynomial::var(t.index(0, 1)), 0), poly("1/2 s33 - 1/2 s11 - 1/2 s22", names));
    const DotTable free({"p", "q"}, {});
    EXPECT_EQ(free.basis().size(), 3u);
    EXPECT_EQ(free.dot(MomentumExpr::parse("p+q"), MomentumExpr::parse("p-q"), 0), poly("s11 - s22", free.names()));
}

// ---------------------------------------------------------------------------
// Properties

TEST(PsiProperty, RandomGraphsAllMethodsAndTrees) {
    oracle::Gen gen(21);
    for (int trial = 0; trial < 25; ++trial) {
        const auto g = gen.connected_graph(6, 8, 0, trial % 5 == 0);
        const auto m = cycle_matroid(g);
        const auto base = psi_base_expansion(m);
        EXPECT_EQ(psi_block_det(m), base) << graph_to_json(g);
        EXPECT_EQ(psi_circuit_gram(m), base) << graph_to_json(g);
        EXPECT_EQ(psi_tree_oracle(g), base) << graph_to_json(g);
        for (const auto& wb : bases_with_weights(m)) EXPECT_EQ(wb.weight, 1);
        // reversing an edge changes nothing
        const auto h = g.with_reversed(g.edges().front().id);
        EXPECT_EQ(psi_base_expansion(cycle_matroid(h)), base);
    }
}

TEST(PsiProperty, RandomUnitMatricesAllMethods) {
    oracle::Gen gen(22);
    int done = 0;
    while (done < 25) {
        const int r = gen.uniform(1, 5), c = gen.uniform(r, std::min(10, r + 5));
        const auto v = gen.unit_matrix(r, c);
        if (rank(v) != static_cast<std::size_t>(r)) continue;
        const RepresentedMatroid m(RationalMatrix(v, numbered_labels(static_cast<std::size_t>(c), "x")));
        expect_methods_agree(m, matrix_literal(m.matrix()));
        for (const auto& wb : bases_with_weights(m)) {
            Rational root = 0;
            while (root * root < wb.weight) root += 1;
            EXPECT_EQ(root * root, wb.weight);
        }
        ++done;
    }
}

TEST(PhiProperty, RandomGraphsMatchTwoForests) {
    oracle::Gen gen(23);
    for (int trial = 0; trial < 25; ++trial) {
        const auto g = gen.connected_graph(5, 7, gen.uniform(2, 4));
        const auto phi = phi_second(g);
        const auto oracle = phi_2forest_oracle(g);
        EXPECT_EQ(phi.names, oracle.names);
        EXPECT_EQ(phi.poly, oracle.poly) << graph_to_json(g) << to_string(phi.poly, phi.names) << "\n"
                                         << to_string(oracle.poly, oracle.names);
    }
}

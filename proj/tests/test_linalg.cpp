#include <gtest/gtest.h>

#include "feynmat/linalg.hpp"
#include "oracles.hpp"

using namespace feynmat;

namespace {

const Dense<Rational> kK33 = make_dense({{1, 0, 0, 1, 1, 0, 0, 0, 0},
                                         {0, 1, 0, 0, 0, 1, 1, 0, 0},
                                         {0, 0, 1, 0, 0, 0, 0, 1, 1},
                                         {0, 0, 0, -1, 0, -1, 0, -1, 0},
                                         {0, 0, 0, 0, -1, 0, -1, 0, -1}});

const Dense<Rational> kK33Reduced = make_dense({{1, 0, 0, 0, 0, -1, -1, -1, -1},
                                                {0, 1, 0, 0, 0, 1, 1, 0, 0},
                                                {0, 0, 1, 0, 0, 0, 0, 1, 1},
                                                {0, 0, 0, 1, 0, 1, 0, 1, 0},
                                                {0, 0, 0, 0, 1, 0, 1, 0, 1}});

const Dense<Rational> kK33CoextA = make_dense({{1, 0, 0, 0, 0, 0, -1, -1, -1, -1},
                                               {0, 1, 0, 0, 0, 0, 1, 1, 0, 0},
                                               {0, 0, 1, 0, 0, 0, 0, 0, 1, 1},
                                               {0, 0, 0, 1, 0, 0, 1, 0, 1, 0},
                                               {0, 0, 0, 0, 1, 0, 0, 1, 0, 1},
                                               {0, 0, 0, 0, 0, 1, 0, 1, 1, 0}});

const Dense<Rational> kDunce = make_dense({{-1, -1, 0, 0}, {0, 1, 1, 1}, {1, 0, -1, -1}});

const Dense<Rational> kU24 = make_dense({{1, 0, 1, 1}, {0, 1, 1, -1}});

}  // namespace

TEST(Det, TwoByTwoObstruction) { EXPECT_EQ(det(make_dense({{1, 1}, {1, -1}})), Rational(-2)); }

TEST(Det, Identity) { EXPECT_EQ(det<Rational>(Dense<Rational>::Identity(3, 3)), Rational(1)); }

TEST(Det, K33CoextensionMinorIsTwo) {
    // columns 2,5,6,8,9,10 counted from one
    const std::vector<Index> cols = {1, 4, 5, 7, 8, 9};
    EXPECT_EQ(det<Rational>(kK33CoextA(Eigen::all, cols)), Rational(2));
}

TEST(Det, NonSquareIsDimensionError) {
    EXPECT_THROW(det<Rational>(make_dense({{1, 2, 3}})), DimensionError);
}

TEST(Det, FractionFreeOverPrimeFields) {
    const auto m = make_dense({{1, 1}, {1, -1}});
    EXPECT_EQ(det(cast_to_field<2>(m)), F2(0));
    EXPECT_EQ(det(cast_to_field<3>(m)), F3(1));  // -2 = 1 mod 3
}

TEST(Det, RationalEntries) {
    Dense<Rational> m(2, 2);
    m << Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 5);
    EXPECT_EQ(det(m), Rational(1, 10) - Rational(1, 12));
}

TEST(DetProperty, MatchesPermutationExpansion) {
    oracle::Gen gen(20240611);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = gen.uniform(1, 4);
        const auto m = gen.unit_matrix(n, n);
        ASSERT_EQ(det(m), Rational(oracle::leibniz_det(oracle::to_grid(m)))) << "trial " << trial;
        ASSERT_EQ(det_cofactor(m), det(m));
    }
}

TEST(DetProperty, IntegerPathAgreesWithRational) {
    oracle::Gen gen(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = gen.uniform(1, 6);
        Dense<Rational> m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = gen.uniform(-5, 5);
        const auto d = det_integer(*to_integer_matrix(m));
        ASSERT_TRUE(d.has_value());
        ASSERT_EQ(Rational(*d), det(m));
    }
}

TEST(Rref, K33MatchesRowReducedForm) {
    const auto r = rref(kK33);
    EXPECT_TRUE(same_entries(r.matrix, kK33Reduced));
    EXPECT_EQ(r.pivots, (std::vector<Index>{0, 1, 2, 3, 4}));
}

TEST(Rref, Identity) {
    const auto r = rref<Rational>(Dense<Rational>::Identity(2, 2));
    const Dense<Rational> id = Dense<Rational>::Identity(2, 2);
    EXPECT_TRUE(same_entries(r.matrix, id));
    EXPECT_EQ(r.pivots, (std::vector<Index>{0, 1}));
}

TEST(Rref, DunceCapIncidenceHasRankTwo) {
    const auto r = rref(kDunce);
    EXPECT_EQ(r.rank(), 2u);
    EXPECT_EQ(r.matrix.rows(), 2);
    // independent count over GF(2)
    std::size_t f2_rank = 0;
    for (std::size_t k = 1; k <= 3; ++k)
        oracle::subsets(4, k, [&](const std::vector<std::size_t>& s) {
            if (oracle::independent_f2(oracle::to_grid(kDunce), s)) f2_rank = std::max(f2_rank, s.size());
        });
    EXPECT_EQ(f2_rank, 2u);
}

TEST(Rref, LabelsStayInPlace) {
    const auto m = make_labeled({{0, 2, 4}, {0, 1, 1}}, {"x", "y", "z"});
    const auto [r, piv] = rref(m);
    EXPECT_EQ(r.labels(), m.labels());
    EXPECT_EQ(piv, (std::vector<std::size_t>{1, 2}));
}

TEST(RrefProperty, Idempotent) {
    oracle::Gen gen(99);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = gen.unit_matrix(gen.uniform(1, 5), gen.uniform(1, 7));
        const auto r1 = rref(m);
        const auto r2 = rref(r1.matrix);
        ASSERT_TRUE(same_entries(r1.matrix, r2.matrix));
        ASSERT_EQ(r1.pivots, r2.pivots);
    }
}

TEST(RrefProperty, RankOverQDominatesRankOverF2) {
    oracle::Gen gen(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = gen.unit_matrix(gen.uniform(1, 5), gen.uniform(1, 7));
        ASSERT_GE(rank(m), rank(cast_to_field<2>(m)));
    }
    EXPECT_EQ(rank(kDunce), rank(cast_to_field<2>(kDunce)));
    EXPECT_EQ(rank(kK33), rank(cast_to_field<2>(kK33)));
}

TEST(Unimodular, IncidenceMatrix) { EXPECT_TRUE(is_totally_unimodular(kDunce).unimodular); }

TEST(Unimodular, U24HasMinusTwoMinor) {
    const auto v = is_totally_unimodular(kU24);
    EXPECT_FALSE(v.unimodular);
    EXPECT_EQ(v.cols, (std::vector<std::size_t>{2, 3}));
    EXPECT_EQ(v.rows, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(v.det, Rational(-2));
}

TEST(Unimodular, IdentityAndLargeEntry) {
    EXPECT_TRUE(is_totally_unimodular(Dense<Rational>::Identity(4, 4)).unimodular);
    const auto v = is_totally_unimodular(make_dense({{1, 0}, {0, 3}}));
    EXPECT_FALSE(v.unimodular);
    EXPECT_EQ(v.det, Rational(3));
}

TEST(UnimodularProperty, VerdictMatchesFullEnumeration) {
    oracle::Gen gen(31);
    for (int trial = 0; trial < 150; ++trial) {
        const int rows = gen.uniform(1, 4), cols = gen.uniform(1, 6);
        const auto m = gen.unit_matrix(rows, cols);
        const auto g = oracle::to_grid(m);
        bool all_unit = true;
        for (int k = 1; k <= std::min(rows, cols); ++k)
            oracle::subsets(static_cast<std::size_t>(rows), static_cast<std::size_t>(k), [&](const auto& rs) {
                oracle::subsets(static_cast<std::size_t>(cols), static_cast<std::size_t>(k), [&](const auto& cs) {
                    if (std::llabs(oracle::leibniz_det(oracle::submatrix(g, rs, cs))) > 1) all_unit = false;
                });
            });
        const auto v = is_totally_unimodular(m);
        ASSERT_EQ(v.unimodular, all_unit) << "trial " << trial;
        if (!v.unimodular) {
            const long long d = oracle::leibniz_det(oracle::submatrix(g, v.rows, v.cols));
            ASSERT_EQ(Rational(d), v.det);
            ASSERT_GT(std::llabs(d), 1);
        }
    }
}

TEST(Cast, MinusOneIsOneModTwo) {
    const auto f = cast_to_field<2>(make_dense({{1, -1}, {0, 1}}));
    EXPECT_EQ(f(0, 1), F2(1));
    EXPECT_EQ(f(1, 0), F2(0));
}

TEST(Cast, MinusOneIsTwoModThree) {
    const auto f = cast_to_field<3>(RationalMatrix(kDunce, {"a", "b", "c", "d"}));
    EXPECT_EQ(f.labels(), (std::vector<std::string>{"a", "b", "c", "d"}));
    EXPECT_EQ(f(0, 0).residue(), 2);
    EXPECT_EQ(f(2, 0).residue(), 1);
    EXPECT_EQ(f(1, 0).residue(), 0);
}

TEST(Cast, OutOfRangeIsDomainError) { EXPECT_THROW(cast_to_field<2>(make_dense({{2}})), DomainError); }

TEST(LabeledMatrix, RejectsDuplicateLabels) {
    EXPECT_THROW(RationalMatrix(make_dense({{1, 0}}), {"a", "a"}), DomainError);
    EXPECT_THROW(RationalMatrix(make_dense({{1, 0}}), {"a"}), DimensionError);
}

TEST(MatrixLiteral, RoundTrip) {
    const std::string text = "# dunce's cap\n a  b  c  d\n-1 -1  0  0\n 0  1  1  1\n 1  0 -1 -1\n";
    const auto m = parse_matrix_literal(text);
    EXPECT_EQ(m.labels(), (std::vector<std::string>{"a", "b", "c", "d"}));
    EXPECT_TRUE(same_entries(m.values(), kDunce));
    EXPECT_EQ(parse_matrix_literal(matrix_literal(m)), m);
}

TEST(MatrixLiteral, RationalsAndErrors) {
    const auto m = parse_matrix_literal("x y\n1/2 -3/4\n");
    EXPECT_EQ(m(0, 1), Rational(-3, 4));
    EXPECT_THROW(parse_matrix_literal("x y\n1 2 3\n"), SchemaError);
    EXPECT_THROW(parse_matrix_literal("x y\n1 z\n"), SchemaError);
    EXPECT_THROW(parse_matrix_literal("# nothing\n"), SchemaError);
}

TEST(NullSpace, FundamentalVectors) {
    const auto n = null_space(kDunce);
    ASSERT_EQ(n.cols(), 2);
    for (Index i = 0; i < kDunce.rows(); ++i)
        for (Index k = 0; k < n.cols(); ++k) {
            Rational s = 0;
            for (Index j = 0; j < kDunce.cols(); ++j) s += kDunce(i, j) * n(j, k);
            EXPECT_EQ(s, Rational(0));
        }
}

TEST(Solve, ConsistentAndInconsistent) {
    const auto a = make_dense({{1, 1}, {1, -1}});
    ColVector<Rational> b(2);
    b << 3, 1;
    const auto x = solve(a, b);
    ASSERT_TRUE(x);
    EXPECT_EQ((*x)(0), Rational(2));
    EXPECT_EQ((*x)(1), Rational(1));
    ColVector<Rational> c(2);
    c << 1, 2;
    EXPECT_FALSE(solve(make_dense({{1, 1}, {1, 1}}), c));
}

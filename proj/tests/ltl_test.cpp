#include <gtest/gtest.h>

#include "random_ltl.hpp"
#include "ringsynth/ltl.hpp"

using namespace ringsynth;

namespace {

ParseContext declared(std::set<std::string> names) {
    ParseContext ctx;
    ctx.declared = std::move(names);
    return ctx;
}

}  // namespace

TEST(Parse, IndexedAtomsAndTemporalOps) {
    const Formula f = parse_ltl("G(r(i) -> F g(i))");
    ASSERT_EQ(f.op(), Op::globally);
    const Formula& imp = f.lhs();
    ASSERT_EQ(imp.op(), Op::implies);
    EXPECT_EQ(imp.lhs().signal(), (SignalRef{"r", IndexTerm::i(), false}));
    ASSERT_EQ(imp.rhs().op(), Op::finally);
    EXPECT_EQ(imp.rhs().lhs().signal(), (SignalRef{"g", IndexTerm::i(), false}));
}

TEST(Parse, IndexForms) {
    EXPECT_EQ(parse_ltl("SEND(i-1)").signal().index, IndexTerm::i_minus_1());
    EXPECT_EQ(parse_ltl("TOK(0)").signal().index, IndexTerm::lit(0));
    EXPECT_EQ(parse_ltl("g(j)").signal().index, IndexTerm::j());
    const Formula eq = parse_ltl("HMASTER == i");
    EXPECT_TRUE(eq.signal().index_equality);
    EXPECT_EQ(eq.signal().index, IndexTerm::i());
}

TEST(Parse, EnumValues) {
    const Formula f = parse_ltl("HBURST == INCR");
    EXPECT_EQ(f, parse_ltl("HBURST1 && !HBURST0"));
    EXPECT_EQ(parse_ltl("HBURST == BURST4"), parse_ltl("!HBURST1 && HBURST0"));
}

TEST(Parse, CountedWeakUntil) {
    const Formula f = parse_ltl("!START(i) W[3] (!START(i) && HREADY)");
    ASSERT_EQ(f.op(), Op::counted_weak_until);
    EXPECT_EQ(f.count(), 3);
}

TEST(Parse, Precedence) {
    EXPECT_EQ(parse_ltl("a && b || c"), parse_ltl("(a && b) || c"));
    EXPECT_EQ(parse_ltl("a -> b -> c"), parse_ltl("a -> (b -> c)"));
    EXPECT_EQ(parse_ltl("!a U b"), parse_ltl("(!a) U b"));
    EXPECT_EQ(parse_ltl("X a && b"), parse_ltl("(X a) && b"));
    EXPECT_EQ(parse_ltl("a U b U c"), parse_ltl("a U (b U c)"));
}

TEST(Parse, Errors) {
    EXPECT_THROW(parse_ltl("G(r(i) -> "), ParseError);
    EXPECT_THROW(parse_ltl("a W[0] b"), ParseError);
    try {
        parse_ltl("G(r(i) -> q(i))", declared({"r"}));
        FAIL() << "undeclared signal accepted";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1);
        EXPECT_EQ(e.column(), 11);
    }
}

TEST(Print, RoundTripRandom) {
    std::mt19937 rng(7);
    const std::vector<std::string> atoms{"a", "b", "c"};
    for (int k = 0; k < 500; ++k) {
        const Formula f = rtest::random_formula(rng, 4, atoms);
        EXPECT_EQ(parse_ltl(f.to_string()), f) << f.to_string();
    }
}

TEST(Rewrite, CountedUntilExpansion) {
    const Formula f = parse_ltl("a W[2] b");
    EXPECT_EQ(expand_counted_until(f), parse_ltl("a W (b && X (a W b))"));
    EXPECT_EQ(expand_counted_until(parse_ltl("a W[1] b")), parse_ltl("a W b"));
}

TEST(Rewrite, CountedUntilMeaning) {
    // a W[2] b: b must be witnessed twice (each time strictly later) or a forever.
    const Formula f = parse_ltl("a W[2] b");
    EXPECT_TRUE(evaluate_lasso(f, {{"b"}, {"b"}}, {{}}));
    EXPECT_FALSE(evaluate_lasso(f, {{"b"}}, {{}}));
    EXPECT_TRUE(evaluate_lasso(f, {{"b"}}, {{"a"}}));
    EXPECT_TRUE(evaluate_lasso(f, {{"a"}, {"a", "b"}, {"b"}}, {{}}));
}

TEST(Rewrite, NnfShapes) {
    EXPECT_EQ(to_nnf(parse_ltl("!(a U b)")), parse_ltl("!b W (!a && !b)"));
    EXPECT_EQ(to_nnf(parse_ltl("!(a W b)")), parse_ltl("!b U (!a && !b)"));
    EXPECT_EQ(to_nnf(parse_ltl("!G F a")), parse_ltl("F G !a"));
    EXPECT_EQ(to_nnf(parse_ltl("!X a")), parse_ltl("X !a"));
}

TEST(Rewrite, NnfPreservesLanguageRandom) {
    std::mt19937 rng(11);
    const std::vector<std::string> atoms{"a", "b", "c"};
    for (int k = 0; k < 300; ++k) {
        const Formula f = expand_counted_until(rtest::random_formula(rng, 4, atoms));
        const Formula n = to_nnf(f);
        ASSERT_TRUE(is_nnf(n)) << n.to_string();
        ASSERT_LE(max_negation_depth(n), 1);
        for (int l = 0; l < 8; ++l) {
            const auto w = rtest::random_lasso(rng, atoms);
            ASSERT_EQ(evaluate_lasso(f, w.prefix, w.loop), evaluate_lasso(n, w.prefix, w.loop)) << f.to_string();
            ASSERT_EQ(evaluate_lasso(f, w.prefix, w.loop), evaluate_lasso(simplify(n), w.prefix, w.loop))
                << f.to_string();
        }
    }
}

TEST(Rewrite, SubstituteIndex) {
    const Formula f = parse_ltl("G(SEND(i-1) -> X TOK(i)) && g(j)");
    const Formula g = substitute_index(f, {0, 2}, 3);
    EXPECT_EQ(g, parse_ltl("G(SEND_2 -> X TOK_0) && g_2"));
    EXPECT_THROW(substitute_index(parse_ltl("g(j)"), {1, std::nullopt}, 3), Error);
    EXPECT_EQ(substitute_index(parse_ltl("HREADY && r(0)"), {}, 4), parse_ltl("HREADY && r_0"));
}

TEST(Lasso, BasicOperators) {
    EXPECT_TRUE(evaluate_lasso(parse_ltl("G F a"), {}, {{"a"}, {}}));
    EXPECT_FALSE(evaluate_lasso(parse_ltl("F G a"), {}, {{"a"}, {}}));
    EXPECT_TRUE(evaluate_lasso(parse_ltl("a U b"), {{"a"}, {"a"}}, {{"b"}}));
    EXPECT_FALSE(evaluate_lasso(parse_ltl("a U b"), {}, {{"a"}}));
    EXPECT_TRUE(evaluate_lasso(parse_ltl("a W b"), {}, {{"a"}}));
    EXPECT_TRUE(evaluate_lasso(parse_ltl("X X a"), {{}, {}}, {{"a"}}));
    EXPECT_FALSE(evaluate_lasso(parse_ltl("X a"), {{"a"}}, {{}}));
}

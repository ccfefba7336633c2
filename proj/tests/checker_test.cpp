#include <gtest/gtest.h>

#include "random_ltl.hpp"
#include "ringsynth/checker.hpp"
#include "templates.hpp"

using namespace ringsynth;

namespace {

QuantifiedProperty prop(Quantifier q, const std::string& text) { return {q, parse_ltl(text), ""}; }

}  // namespace

TEST(Checker, PassingArbiterSatisfiesArbiterSpec) {
    const auto spec = builtin_corpus("simple_arbiter");
    for (Timing timing : {Timing::synchronous, Timing::interleaving, Timing::fully_asynchronous})
        for (int n : {1, 2, 3}) {
            Ring ring(rtest::passing_arbiter(), n, timing);
            for (const auto& g : spec.guarantees) EXPECT_TRUE(verify_ring(ring, g, {}).holds) << g.label << " n=" << n;
        }
}

TEST(Checker, HoardingArbiterFailsLiveness) {
    Ring ring(rtest::hoarding_arbiter(), 2, Timing::fully_asynchronous);
    const auto r = verify_ring(ring, prop(Quantifier::forall_i, "G(r(i) -> F g(i))"), {});
    ASSERT_FALSE(r.holds);
    ASSERT_TRUE(r.counterexample.has_value());
    EXPECT_TRUE(is_fair(*r.counterexample, 2));
    EXPECT_FALSE(eval_indexed(ring, *r.counterexample, parse_ltl("G(r(i) -> F g(i))"), Quantifier::forall_i,
                              r.failing_instance));
}

TEST(Checker, AssumptionsRestrictRuns) {
    Ring ring(rtest::hoarding_arbiter(), 2, Timing::fully_asynchronous);
    // Under "requests never happen" the liveness property is vacuous.
    const auto r = verify_ring(ring, prop(Quantifier::forall_i, "G(r(i) -> F g(i))"), {prop(Quantifier::forall_i, "G !r(i)")});
    EXPECT_TRUE(r.holds);
}

TEST(Checker, TokenRelease) {
    EXPECT_TRUE(check_token_release(rtest::passing_arbiter(), Formula::tt()).holds);
    EXPECT_FALSE(check_token_release(rtest::hoarding_arbiter(), Formula::tt()).holds);
}

TEST(Checker, NdfsAgreesWithSccRandom) {
    std::mt19937 rng(21);
    const std::vector<std::string> atoms{"g_0", "g_1", "TOK_0", "r_1"};
    int violations = 0;
    for (int k = 0; k < 60; ++k) {
        const auto t = rtest::random_template(rng, 2 + k % 3);
        Ring ring(t, 2, k % 2 ? Timing::fully_asynchronous : Timing::interleaving);
        const Formula f = rtest::random_formula(rng, 3, atoms);
        for (bool fair : {true, false}) {
            std::vector<Component> comps{{ltl_to_nba(f), -1}};
            RingSystem s1(ring, component_atoms(comps)), s2(ring, component_atoms(comps));
            const auto a = find_accepting_run(s1, comps, fair, Algorithm::ndfs);
            const auto b = find_accepting_run(s2, comps, fair, Algorithm::scc);
            ASSERT_EQ(a.empty, b.empty) << f.to_string();
            if (!a.empty) {
                ++violations;
                // the witness satisfies f on the global run
                RingLasso run;
                run.loop_start = a.lasso->loop_start;
                for (const auto& [s, e] : a.lasso->steps) run.positions.push_back({s1.state(s), e.env, e.scheduled, e.receiver});
                EXPECT_TRUE(is_valid_run(ring, run));
                EXPECT_TRUE(eval_indexed(ring, run, f, Quantifier::unquantified, {}));
                if (fair) EXPECT_TRUE(is_fair(run, 2));
            }
        }
    }
    EXPECT_GT(violations, 0);
}

TEST(Checker, CutoffTable) {
    EXPECT_EQ(cutoff_for(prop(Quantifier::forall_i, "G F g(i)"), {}, true).cutoff, 2);
    EXPECT_EQ(cutoff_for(prop(Quantifier::forall_ij, "G !(g(i) && g(j))"), {}, true).cutoff, 4);
    EXPECT_FALSE(cutoff_for(prop(Quantifier::forall_i, "G F g(i)"), {}, false).cutoff.has_value());
    EXPECT_FALSE(cutoff_for(prop(Quantifier::forall_i, "G F g(i)"), {prop(Quantifier::unquantified, "G F TOK(0)")}, true)
                     .cutoff.has_value());
}

TEST(Checker, CutoffSamplesAgree) {
    const auto samples = cutoff_sample_check(rtest::passing_arbiter(), prop(Quantifier::forall_i, "G(r(i) -> F g(i))"), {},
                                             Timing::fully_asynchronous, 2, 4);
    ASSERT_EQ(samples.size(), 3u);
    for (const auto& s : samples) EXPECT_TRUE(s.holds);
    const auto mutex = cutoff_sample_check(rtest::passing_arbiter(), prop(Quantifier::forall_ij, "G !(g(i) && g(j))"), {},
                                           Timing::fully_asynchronous, 4, 5);
    for (const auto& s : mutex) EXPECT_TRUE(s.holds);
}

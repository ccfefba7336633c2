#include <gtest/gtest.h>

#include <random>

#include "random_ltl.hpp"
#include "ringsynth/checker.hpp"
#include "ringsynth/synth.hpp"

using namespace ringsynth;

namespace {

// minimal bound found for the simple arbiter on first derivation
constexpr int kSimpleArbiterBound = 2;

HubSpec hub_of(const std::string& text) { return prepare_hub(parse_spec(text)); }

SynthOptions quiet(int lo, int hi) {
    SynthOptions o;
    o.min_bound = lo;
    o.max_bound = hi;
    return o;
}

std::string one_output_spec(const std::string& guarantees) { return rtest::beta_spec_text(guarantees); }

SynthesisInstance only_beta(SynthesisInstance inst, const std::string& label) {
    std::erase_if(inst.betas, [&](const HubProperty& p) { return p.label != label; });
    return inst;
}

std::size_t beta_count(const HubSpec& hub) {
    std::size_t n = 0;
    for (const auto& b : plan_encoding(hub, true).betas)
        if (b.label.rfind("TR", 0) != 0) ++n;
    return n;
}

}  // namespace

TEST(Synth, NeverGrantIsSatAtTwo) {
    const auto hub = hub_of(one_output_spec("forall i: G !g(i)\n"));
    const auto r = synthesize(hub, quiet(2, 2));
    ASSERT_EQ(r.status, SynthesisResult::Status::ok);
    const auto& t = *r.model;
    EXPECT_EQ(t.num_states(), 2);
    for (int q = 0; q < t.num_states(); ++q) EXPECT_FALSE(t.output(q, "g"));
    EXPECT_TRUE(check_wellformed(t, true).empty());
}

TEST(Synth, ContradictionUnsat) {
    const auto hub = hub_of(one_output_spec("forall i: G g(i)\nforall i: G !g(i)\n"));
    for (bool direct : {true, false}) {
        auto o = quiet(2, 4);
        o.direct_encoding = direct;
        const auto r = synthesize(hub, o);
        EXPECT_EQ(r.status, SynthesisResult::Status::no_model);
        EXPECT_EQ(r.attempts.size(), 3u);
    }
}

TEST(Synth, SimpleArbiterBoundFrozen) {
    const auto r = synthesize(prepare_hub(builtin_corpus("simple_arbiter")), quiet(2, 6));
    ASSERT_EQ(r.status, SynthesisResult::Status::ok);
    EXPECT_EQ(r.model->num_states(), kSimpleArbiterBound);
}

TEST(Synth, DirectGuaranteeShapes) {
    // G12-like beta has no next-state part, G4-like reads the successor
    const auto hub = hub_of(
        "[SIGNALS]\nlocal_in: r\nlocal_out: g m\n[GUARANTEES]\n"
        "forall i [B1]: G(g(i) -> TOK(i))\nforall i [B2]: G(r(i) -> (g(i) <-> X m(i)))\n");
    const auto plan = plan_encoding(hub, true);
    const auto inst = make_instance(plan, plan_automaton(plan), 2, true);
    // B1 only binds the token-free state: 4 letters there
    const auto b1 = build_direct_guarantees(only_beta(inst, "B1"));
    EXPECT_EQ(b1.size(), 4u);
    for (const auto& c : b1) EXPECT_EQ(c.to_string().find("delta"), std::string::npos);
    // B2 on letters with r: 2 in state 0, 1 in state 1 (no RCV there)
    const auto b2 = build_direct_guarantees(only_beta(inst, "B2"));
    EXPECT_EQ(b2.size(), 3u);
    for (const auto& c : b2) EXPECT_NE(c.to_string().find("delta"), std::string::npos);
}

TEST(Synth, AssumptionPremiseDropsLetters) {
    // A3-style assumption: letters with l && !r generate nothing
    const std::string text =
        "[SIGNALS]\nlocal_in: r l\nlocal_out: g\n[ASSUMPTIONS]\nforall i [A]: G(l(i) -> r(i))\n"
        "[GUARANTEES]\nforall i [B]: G(r(i) -> X g(i))\n";
    const auto plan = plan_encoding(hub_of(text), true);
    ASSERT_EQ(plan.invariants.size(), 2u);  // A and G(TOK -> !RCV)
    const auto inst = make_instance(plan, plan_automaton(plan), 2, true);
    // letters with r: 4 in state 0, 2 in state 1
    EXPECT_EQ(build_direct_guarantees(only_beta(inst, "B")).size(), 6u);
    auto no_inv = inst;
    no_inv.invariant = Formula::tt();
    EXPECT_EQ(build_direct_guarantees(only_beta(no_inv, "B")).size(), 8u);
}

TEST(Synth, EncodingEquivalence) {
    std::mt19937 rng(7);
    int compared = 0, sat = 0, unsat = 0;
    while (compared < 24) {
        std::string g;
        const int n = 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < n; ++k) g += "forall i: G(" + rtest::random_beta(rng, 2).to_string() + ")\n";
        IndexedSpec spec;
        try {
            spec = parse_spec(one_output_spec(g));
        } catch (const Error&) {
            continue;
        }
        const auto hub = prepare_hub(spec);
        if (beta_count(hub) != static_cast<std::size_t>(n)) continue;
        for (int b = 2; b <= 3; ++b) {
            auto d = quiet(b, b);
            auto a = quiet(b, b);
            a.direct_encoding = false;
            const auto rd = synthesize(hub, d);
            const auto ra = synthesize(hub, a);
            ASSERT_NE(rd.status, SynthesisResult::Status::solver_failure);
            ASSERT_NE(ra.status, SynthesisResult::Status::solver_failure);
            EXPECT_EQ(rd.status, ra.status) << g << "bound " << b;
            (rd.status == SynthesisResult::Status::ok ? sat : unsat)++;
        }
        ++compared;
    }
    EXPECT_GT(sat, 0);
    EXPECT_GT(unsat, 0);
}

TEST(Synth, Monotone) {
    const auto hub = prepare_hub(builtin_corpus("simple_arbiter"));
    for (int b = 2; b <= 4; ++b) {
        const auto r = synthesize(hub, quiet(b, b));
        EXPECT_EQ(r.status, SynthesisResult::Status::ok) << b;
    }
}

TEST(Synth, PinLimits) {
    const auto hub = prepare_hub(builtin_corpus("simple_arbiter"));
    const auto first = synthesize(hub, quiet(2, 2));
    ASSERT_TRUE(first.model);
    const auto plan = plan_encoding(hub, true);
    const auto nba = plan_automaton(plan);
    const auto n = static_cast<std::size_t>(first.model->num_states());
    const std::size_t outs = plan.outputs.size() - 1;  // TOK hardcoded
    const std::size_t defined = num_transitions(*first.model);

    auto all = make_instance(plan, nba, 3, true, PinnedPrefix{*first.model, Formula::tt()});
    EXPECT_EQ(build_pin_constraints(all).size(), n * outs + defined);
    auto none = make_instance(plan, nba, 3, true, PinnedPrefix{*first.model, Formula::ff()});
    EXPECT_EQ(build_pin_constraints(none).size(), n * outs);
    EXPECT_THROW(make_instance(plan, nba, 1, true, PinnedPrefix{*first.model, Formula::tt()}), Error);

    auto o = quiet(3, 3);
    o.pinned = PinnedPrefix{*first.model, Formula::tt()};
    const auto ext = synthesize(hub, o);
    ASSERT_EQ(ext.status, SynthesisResult::Status::ok);
    for (int q = 0; q < static_cast<int>(n); ++q)
        for (const auto& s : first.model->outputs) EXPECT_EQ(ext.model->output(q, s), first.model->output(q, s));
}

TEST(Synth, RecheckCatchesBadModel) {
    const auto hub = prepare_hub(builtin_corpus("simple_arbiter"));
    const auto r = synthesize(hub, quiet(2, 2));
    ASSERT_TRUE(r.model);
    const auto plan = plan_encoding(hub, true);
    const auto inst = make_instance(plan, plan_automaton(plan), 2, true);
    EXPECT_TRUE(recheck(*r.model, inst, &hub).ok);
    auto bad = *r.model;
    const auto gi = static_cast<std::size_t>(bad.output_index("g"));
    for (auto& l : bad.label) l[gi] = false;  // never grants
    const auto rep = recheck(bad, inst, &hub);
    EXPECT_FALSE(rep.ok);
}

TEST(Synth, PlanShrinksAmbaAutomaton) {
    const auto hub = prepare_hub(builtin_corpus("amba_non0"));
    const auto direct = plan_automaton(plan_encoding(hub, true));
    const auto plain = plan_automaton(plan_encoding(hub, false));
    EXPECT_LT(direct.num_states, plain.num_states);
}

TEST(Synth, HubInputConstraint) {
    EXPECT_EQ(hub_input_constraint(parse_ltl("G(HLOCK(i) && HBURST==BURST4)")),
              parse_ltl("HLOCK && (!HBURST1 && HBURST0)"));
}

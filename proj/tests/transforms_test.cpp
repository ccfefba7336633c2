#include <gtest/gtest.h>

#include "ringsynth/transforms.hpp"

using namespace ringsynth;

namespace {

IndexedSpec fixture(const std::string& name) { return load_spec(std::string(RINGSYNTH_FIXTURES) + "/" + name); }

const Obligation& obligation(const LocalizedSpec& l, const std::string& name) {
    for (const auto& o : l.obligations)
        if (o.name == name) return o;
    throw Error("no obligation " + name);
}

bool has_label(const std::vector<QuantifiedProperty>& v, const std::string& label) {
    for (const auto& p : v)
        if (p.label == label) return true;
    return false;
}

}  // namespace

TEST(Split, CombinedAmbaGivesBuiltins) {
    const auto split = split_zero_process(fixture("amba_combined.spec"));
    EXPECT_EQ(split.non_zero, builtin_corpus("amba_non0"));
    EXPECT_EQ(split.zero, builtin_corpus("amba_zero"));
}

TEST(Split, InjectsAuxAssumption) {
    auto s = fixture("amba_combined.spec");
    s.signals.global_inputs.pop_back();  // drop NO_REQ; G10.2 still needs it
    EXPECT_THROW(validate(s), Error);
    auto t = fixture("amba_combined.spec");
    const auto split = split_zero_process(t);
    EXPECT_TRUE(has_label(split.zero.assumptions, "A6"));
    EXPECT_FALSE(split.non_zero.signals.is_declared("NO_REQ"));
}

TEST(Split, RejectsTwoIndexed) {
    const auto s = parse_spec("[SIGNALS]\nlocal_out: g\n[GUARANTEES]\nforall i,j: G !(g(i) && g(j))\n");
    EXPECT_THROW(split_zero_process(s), Error);
}

TEST(Localize, GlobalOutputs) {
    const auto s = localize_global_outputs(fixture("global_out.spec"));
    EXPECT_TRUE(s.signals.global_outputs.empty());
    EXPECT_TRUE(s.signals.is_local("owner"));
    EXPECT_EQ(s.guarantees[0].body, parse_ltl("G(owner(i) -> TOK(i))"));
    EXPECT_EQ(s.guarantees[1].body, parse_ltl("G(req(i) -> F owner(i))"));
    EXPECT_THROW(localize_global_outputs(fixture("global_out.spec"), {"nope"}), Error);
}

TEST(Localize, TrGuaranteesIdempotent) {
    const auto s = builtin_corpus("amba_non0");
    const auto once = add_tr_guarantees(s);
    EXPECT_EQ(once.guarantees.size(), s.guarantees.size() + 4);
    EXPECT_EQ(add_tr_guarantees(once), once);
    EXPECT_NO_THROW(validate(once));
}

TEST(Localize, ObligationShape) {
    const auto l = prepare_localized(builtin_corpus("amba_non0"));
    ASSERT_EQ(l.obligations.size(), 2u);
    const auto& tr = obligation(l, "TR");
    const auto& gua = obligation(l, "GUA");
    EXPECT_FALSE(has_label(tr.premises, "A5"));
    EXPECT_TRUE(has_label(gua.premises, "A5"));
    EXPECT_EQ(tr.premises.size(), 4u);
    EXPECT_EQ(tr.conclusions.size(), 4u);
    EXPECT_EQ(gua.conclusions.size(), 13u);
    for (const auto& c : tr.conclusions) EXPECT_TRUE(c.is_tr());

    // GF TOK(i) and the grant guarantee are added when missing
    auto s = builtin_corpus("amba_non0");
    s.assumptions.pop_back();
    s.guarantees.pop_back();
    const auto m = prepare_localized(s);
    EXPECT_TRUE(has_label(obligation(m, "GUA").premises, "GF_TOK"));
    EXPECT_TRUE(has_label(obligation(m, "GUA").conclusions, "G12"));
    EXPECT_EQ(l.per_conclusion().size(), 17u);
}

TEST(Localize, ZeroProcess) {
    const auto l = prepare_localized(builtin_corpus("amba_zero"));
    EXPECT_EQ(l.quantifier, Quantifier::zero_only);
    const auto& tr = obligation(l, "TR");
    EXPECT_EQ(tr.conclusions[2].body, parse_ltl("G((!TOK(0) && !SEND(i-1)) -> X !TOK(0))"));
    EXPECT_THROW(prepare_localized(fixture("amba_combined.spec")), Error);
}

TEST(Hub, DropsIndices) {
    const auto h = prepare_hub(builtin_corpus("simple_arbiter"));
    EXPECT_EQ(h.inputs, (std::vector<std::string>{"r", "RCV"}));
    EXPECT_EQ(h.outputs, (std::vector<std::string>{"g", "TOK", "SEND"}));
    ASSERT_EQ(h.obligations.size(), 2u);
    const auto& tr = h.obligations[0];
    EXPECT_EQ(tr.conclusions[2].formula, parse_ltl("G((!TOK && !RCV) -> X !TOK)"));
    bool hub1 = false, hub2 = false;
    for (const auto& p : tr.premises) {
        hub1 = hub1 || (p.label == "HUB1" && p.formula == parse_ltl("G F (TOK || RCV)"));
        hub2 = hub2 || (p.label == "HUB2" && p.formula == parse_ltl("G (TOK -> !RCV)"));
    }
    EXPECT_TRUE(hub1 && hub2);
    const auto z = prepare_hub(builtin_corpus("amba_zero"));
    EXPECT_NE(std::find(z.inputs.begin(), z.inputs.end(), "NO_REQ"), z.inputs.end());
}

TEST(Hub, RejectsCrossProcessAtoms) {
    const auto s = parse_spec("[SIGNALS]\nlocal_in: r\nlocal_out: g\n[GUARANTEES]\nforall i: G(r(i) -> F g(i))\n"
                              "forall i: G(r(i-1) -> g(i))\n");
    EXPECT_THROW(prepare_hub(s), Error);
    const auto t = parse_spec("[SIGNALS]\nlocal_out: g\n[GUARANTEES]\nzero: G(g(0))\nforall i: G g(i)\n");
    EXPECT_THROW(prepare_hub(t), Error);
}

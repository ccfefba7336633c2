#include <gtest/gtest.h>

#include <map>

#include "ringsynth/spec.hpp"

using namespace ringsynth;

TEST(Spec, BuiltinsRoundTrip) {
    for (const auto& name : builtin_corpus_names()) {
        const auto s = builtin_corpus(name);
        EXPECT_NO_THROW(validate(s)) << name;
        const auto again = parse_spec(format_spec(s));
        EXPECT_EQ(again, s) << name;
    }
}

TEST(Spec, BuiltinSizes) {
    const auto non0 = builtin_corpus("amba_non0");
    EXPECT_EQ(non0.assumptions.size(), 5u);
    EXPECT_EQ(non0.guarantees.size(), 13u);
    const auto zero = builtin_corpus("amba_zero");
    EXPECT_EQ(zero.assumptions.size(), 6u);
    EXPECT_EQ(zero.guarantees.size(), 13u);
    EXPECT_TRUE(zero.signals.is_global("NO_REQ"));
}

TEST(Spec, ValidationErrors) {
    const char* bad[] = {
        "[SIGNALS]\nlocal_in: r\n[GUARANTEES]\nforall i: G q(i)\n",                      // undeclared
        "[SIGNALS]\nlocal_in: r\n[GUARANTEES]\nforall i: G r\n",                          // missing index
        "[SIGNALS]\nglobal_in: h\n[GUARANTEES]\nforall i: G h(i)\n",                      // indexed global
        "[SIGNALS]\nlocal_in: r\n[GUARANTEES]\nforall i: G r(j)\n",                       // j out of scope
        "[SIGNALS]\nlocal_in: r\nlocal_out: r\n[GUARANTEES]\nforall i: G r(i)\n",         // declared twice
        "[SIGNALS]\nlocal_in: r\n[GUARANTEES]\nforall i: G (r(i)\n",                      // parse error
        "[SIGNALS]\nlocal_in: r\n[SOMETHING]\n",                                          // unknown section
    };
    for (const char* t : bad) EXPECT_THROW(parse_spec(t), Error) << t;
}

TEST(Spec, QuantifierSyntax) {
    const auto s = parse_spec(
        "[SIGNALS]\nlocal_in: r\nlocal_out: g\nglobal_in: h\n[GUARANTEES]\n"
        "forall i [a]: G(r(i) -> F g(i))\nforall i!=0 [b]: !g(i)\nforall i,j [c]: G !(g(i) && g(j))\n"
        "zero [d]: g(0)\n[e]: !h\ninit [f]: !g(i)\n");
    ASSERT_EQ(s.guarantees.size(), 6u);
    EXPECT_EQ(s.guarantees[0].quantifier, Quantifier::forall_i);
    EXPECT_EQ(s.guarantees[1].quantifier, Quantifier::forall_i_ne0);
    EXPECT_EQ(s.guarantees[2].quantifier, Quantifier::forall_ij);
    EXPECT_EQ(s.guarantees[3].quantifier, Quantifier::zero_only);
    EXPECT_EQ(s.guarantees[4].quantifier, Quantifier::unquantified);
    EXPECT_EQ(s.guarantees[4].label, "e");
    EXPECT_EQ(s.guarantees[5].quantifier, Quantifier::forall_i);
}

TEST(Spec, DirectClassification) {
    std::map<std::string, DirectClass> cls;
    for (const char* name : {"amba_non0", "amba_zero"}) {
        const auto s = builtin_corpus(name);
        for (const auto* v : {&s.assumptions, &s.guarantees})
            for (const auto& p : *v) cls[p.label] = classify_direct(p, s.signals);
    }
    EXPECT_EQ(cls["A3"], DirectClass::alpha);
    EXPECT_EQ(cls["A6"], DirectClass::alpha);
    for (const char* b : {"G1", "G4", "G5", "G6", "G7", "G8", "G10.2", "G12"}) EXPECT_EQ(cls[b], DirectClass::beta) << b;
    for (const char* g : {"A1", "A2", "A4", "A5", "G2", "G3.1", "G3.2", "G9", "G10.1", "G11.1", "G11.2"})
        EXPECT_EQ(cls[g], DirectClass::general) << g;

    Signals sig;
    sig.local_inputs = {"r", "RCV"};
    sig.local_outputs = {"g", "TOK", "SEND"};
    auto c = [&](const char* t) { return classify_direct(QuantifiedProperty{Quantifier::forall_i, parse_ltl(t), ""}, sig); };
    EXPECT_EQ(c("G(SEND(i) -> TOK(i))"), DirectClass::beta);
    EXPECT_EQ(c("G((!TOK(i) && !SEND(i-1)) -> X !TOK(i))"), DirectClass::beta);
    EXPECT_EQ(c("G(TOK(i) -> F SEND(i))"), DirectClass::general);
    EXPECT_EQ(c("G(r(i) -> X r(i))"), DirectClass::general);
}

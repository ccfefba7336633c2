#include <gtest/gtest.h>

#include "ringsynth/smt.hpp"

using namespace ringsynth;

namespace {

SmtProblem small_problem() {
    SmtProblem p;
    p.functions.push_back({"delta", {{0, 2}, {0, 1}}, false, std::pair<std::int64_t, std::int64_t>{0, 2}});
    p.functions.push_back({"out_g", {{0, 2}}, true, std::nullopt});
    // delta(q, 1) = q + 1 mod 3, g exactly in state 2
    for (int q = 0; q < 3; ++q) {
        p.assertions.push_back(sx({"=", sx({"delta", sx_int(q), "1"}), sx_int((q + 1) % 3)}));
        p.assertions.push_back(q == 2 ? sx({"out_g", "2"}) : sx_not(sx({"out_g", sx_int(q)})));
    }
    return p;
}

}  // namespace

TEST(SExpr, ParsePrintRoundTrip) {
    const std::string text = "(define-fun f ((x!0 Int)) Int (ite (= x!0 1) (- 3) 0)) ; comment\n(|a b| \"s\")";
    const auto es = parse_sexprs(text);
    ASSERT_EQ(es.size(), 2u);
    EXPECT_EQ(parse_sexprs(es[0].to_string())[0], es[0]);
    EXPECT_EQ(es[1][0].atom, "|a b|");
    EXPECT_THROW(parse_sexprs("(a (b)"), Error);
    EXPECT_THROW(parse_sexprs("a)"), Error);
}

TEST(SExpr, EmissionIsDeterministic) {
    EXPECT_EQ(small_problem().to_smtlib(), small_problem().to_smtlib());
    EXPECT_NE(small_problem().to_smtlib().find("(check-sat)"), std::string::npos);
}

TEST(SmtModel, IteChainsAndElse) {
    SmtProblem p = small_problem();
    const std::string model = R"((
  (define-fun out_g ((x!0 Int)) Bool (= x!0 2))
  (define-fun delta ((x!0 Int) (x!1 Int)) Int
    (let ((a!1 (ite (and (= x!0 0) (= x!1 1)) 1 (ite (and (= x!0 1) (= x!1 1)) 2 (helper x!0)))))
      a!1))
  (define-fun helper ((y Int)) Int (ite (= y 2) 0 y))
))";
    const auto m = parse_model(model, p);
    EXPECT_EQ(m.value("delta", {0, 1}), 1);
    EXPECT_EQ(m.value("delta", {1, 1}), 2);
    EXPECT_EQ(m.value("delta", {2, 1}), 0);  // else branch through the helper
    EXPECT_EQ(m.value("delta", {1, 0}), 1);
    EXPECT_TRUE(m.truth("out_g", {2}));
    EXPECT_TRUE(failing_assertions(p, m).empty());

    EXPECT_THROW(parse_model("((define-fun delta ((x Int) (y Int)) Int 7))", p), Error);  // out of range
    EXPECT_THROW(parse_model("((define-fun out_g ((x!0 Int)) Bool (= x!0 2)))", p, {false, false}), Error);
    const auto d = parse_model("((define-fun delta ((x Int) (y Int)) Int 1))", p);
    EXPECT_FALSE(d.truth("out_g", {2}));  // missing Bool defaults to false
    EXPECT_FALSE(failing_assertions(p, d).empty());
}

TEST(Solver, SatModelSatisfiesAssertions) {
    const auto p = small_problem();
    const auto r = run_solver(p.to_smtlib());
    ASSERT_EQ(r.verdict, SolverVerdict::sat) << r.diagnostics;
    const auto m = parse_model(r.model_text, p);
    EXPECT_TRUE(failing_assertions(p, m).empty());
}

TEST(Solver, EmptyProblemIsSat) {
    SmtProblem p;
    EXPECT_EQ(run_solver(p.to_smtlib()).verdict, SolverVerdict::sat);
}

TEST(Solver, Unsat) {
    SmtProblem p;
    p.functions.push_back({"out_g", {{0, 1}}, true, std::nullopt});
    p.assertions.push_back(sx({"out_g", "0"}));
    p.assertions.push_back(sx_not(sx({"out_g", "0"})));
    EXPECT_EQ(run_solver(p.to_smtlib()).verdict, SolverVerdict::unsat);
}

TEST(Solver, ErrorsAreDistinct) {
    EXPECT_EQ(run_solver("(check-sat)\n", "/nonexistent/solver").verdict, SolverVerdict::error);
    EXPECT_EQ(run_solver("(assert (foo))\n(check-sat)\n").verdict, SolverVerdict::error);
    // a process that never answers
    const auto t = run_solver("", "sleep 5", std::chrono::milliseconds(300));
    EXPECT_EQ(t.verdict, SolverVerdict::timeout);
    EXPECT_LT(t.seconds, 3.0);
    // killed mid-run
    EXPECT_EQ(run_solver("", "sh -c kill${IFS}-9${IFS}$$").verdict, SolverVerdict::error);
}

TEST(Solver, FormulaToTerm) {
    const Formula f = parse_ltl("(a -> b) && !(a <-> c)");
    const SExpr e = to_sexpr(f, [](const SignalRef& r) { return sx({"out_" + r.name, "0"}); });
    SmtProblem p;
    for (const char* n : {"out_a", "out_b", "out_c"}) p.functions.push_back({n, {{0, 0}}, true, std::nullopt});
    SmtModel m;
    for (int v = 0; v < 8; ++v) {
        m.set("out_a", {0}, v & 1);
        m.set("out_b", {0}, (v >> 1) & 1);
        m.set("out_c", {0}, (v >> 2) & 1);
        const bool a = v & 1, b = (v >> 1) & 1, c = (v >> 2) & 1;
        EXPECT_EQ(eval_term(e, m, p) != 0, (!a || b) && (a != c));
    }
}

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringsynth/ltl.hpp"

namespace ringsynth {

/// SMT-LIB term or command. Atoms keep their source text.
struct SExpr {
    std::string atom;
    std::vector<SExpr> items;
    bool is_list = false;

    SExpr() = default;
    SExpr(std::string a) : atom(std::move(a)) {}  // NOLINT
    SExpr(const char* a) : atom(a) {}             // NOLINT
    static SExpr list(std::vector<SExpr> items);

    bool is_atom() const { return !is_list; }
    const SExpr& operator[](std::size_t k) const { return items.at(k); }
    std::size_t size() const { return items.size(); }
    bool operator==(const SExpr&) const = default;
    std::string to_string() const;
};

SExpr sx(std::initializer_list<SExpr> items);
SExpr sx_int(std::int64_t v);
SExpr sx_and(std::vector<SExpr> xs);
SExpr sx_or(std::vector<SExpr> xs);
SExpr sx_not(SExpr x);

/// All top-level expressions of a text. Comments (`;`) and `|quoted|`
/// symbols are understood.
std::vector<SExpr> parse_sexprs(const std::string& text);

/// Function with a finite integer domain. Arguments are Int with an
/// inclusive range each; the result is Bool or Int (optionally ranged).
struct FunDecl {
    std::string name;
    std::vector<std::pair<std::int64_t, std::int64_t>> domain;
    bool is_bool = false;
    std::optional<std::pair<std::int64_t, std::int64_t>> range;

    std::size_t domain_size() const;
};

struct SmtProblem {
    std::string logic = "QF_UFLIA";
    std::vector<std::string> header_comments;
    std::vector<FunDecl> functions;
    std::vector<SExpr> assertions;

    const FunDecl* find(const std::string& name) const;
    /// Range assertions for every Int-valued function on its domain.
    std::vector<SExpr> range_assertions() const;
    /// Deterministic script: set-logic, declarations, ranges, assertions,
    /// check-sat, get-model.
    std::string to_smtlib() const;
};

/// Total tables over the declared domains. Bool values are 0/1.
class SmtModel {
public:
    std::int64_t value(const std::string& fn, const std::vector<std::int64_t>& args) const;
    bool truth(const std::string& fn, const std::vector<std::int64_t>& args) const { return value(fn, args) != 0; }
    bool has(const std::string& fn) const { return tables_.count(fn) > 0; }
    void set(const std::string& fn, const std::vector<std::int64_t>& args, std::int64_t v) { tables_[fn][args] = v; }

private:
    std::map<std::string, std::map<std::vector<std::int64_t>, std::int64_t>> tables_;
};

struct ModelOptions {
    /// Bool functions absent from the model are taken as constantly false
    /// (solvers omit functions no assertion constrains).
    bool default_missing_bool = true;
    bool default_missing_int = true;
};

/// Tabulates the declared functions from a get-model answer.
SmtModel parse_model(const std::string& text, const SmtProblem& problem, const ModelOptions& opt = {});

/// Value of a closed term under the model (declared functions are looked
/// up in the tables). Integer results; booleans are 0/1.
std::int64_t eval_term(const SExpr& e, const SmtModel& model, const SmtProblem& problem);
/// Indices of assertions (ranges included, listed first) that evaluate to false.
std::vector<std::size_t> failing_assertions(const SmtProblem& problem, const SmtModel& model);

enum class SolverVerdict { sat, unsat, unknown, timeout, error };
const char* to_string(SolverVerdict v);

struct SolverResult {
    SolverVerdict verdict = SolverVerdict::error;
    std::string model_text;
    std::string diagnostics;
    double seconds = 0;
};

/// `RINGSYNTH_SOLVER` if set, otherwise "z3 -in -smt2".
std::string default_solver_command();

/// Runs the command (whitespace-separated argv), pipes the script to its
/// standard input and waits at most `timeout` (zero: unlimited).
SolverResult run_solver(const std::string& script, const std::string& command = default_solver_command(),
                        std::chrono::milliseconds timeout = std::chrono::milliseconds{0});

/// Converts a propositional formula to a term; atoms via the callback.
SExpr to_sexpr(const Formula& f, const std::function<SExpr(const SignalRef&)>& atom);

}  // namespace ringsynth

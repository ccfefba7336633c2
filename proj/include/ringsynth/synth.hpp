#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ringsynth/automata.hpp"
#include "ringsynth/smt.hpp"
#include "ringsynth/template.hpp"
#include "ringsynth/transforms.hpp"

namespace ringsynth {

/// A previous model and the input constraint it was synthesized under.
struct PinnedPrefix {
    ProcessTemplate model;
    Formula a_prev = Formula::tt();  // boolean over hub input names
};

/// Split of a hub specification into the automaton part and the parts
/// encoded directly.
struct EncodingPlan {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    /// Negation of the residual specification; the automaton recognizes it.
    Formula negated_general = Formula::ff();
    /// Boolean premises over current atoms shared by every obligation.
    std::vector<HubProperty> invariants;
    /// Guarantees G beta encoded as one constraint per state and letter.
    std::vector<HubProperty> betas;
    std::vector<std::string> automaton_labels;
};

EncodingPlan plan_encoding(const HubSpec& spec, bool direct);

/// Automaton for plan.negated_general; edges contradicting the invariants
/// are removed and the result trimmed.
Nba plan_automaton(const EncodingPlan& plan);

struct SynthesisInstance {
    std::vector<std::string> inputs;   // RCV included
    std::vector<std::string> outputs;  // TOK and SEND included
    Nba nba;
    int bound = 2;
    bool hardcode_token = true;
    Formula invariant = Formula::tt();
    std::vector<HubProperty> betas;
    std::optional<PinnedPrefix> pinned;
    bool rho_range = true;
    /// Template states past the fixed ones are numbered in BFS order.
    bool symmetry_breaking = true;

    Letter num_letters() const { return Letter{1} << inputs.size(); }
    int rcv_bit() const;
};

SynthesisInstance make_instance(const EncodingPlan& plan, const Nba& nba, int bound, bool hardcode_token,
                                std::optional<PinnedPrefix> pinned = std::nullopt);

/// Declarations plus the ranking, template and initial constraints.
SmtProblem build_core_constraints(const SynthesisInstance& inst);
std::vector<SExpr> build_direct_guarantees(const SynthesisInstance& inst);
std::vector<SExpr> build_pin_constraints(const SynthesisInstance& inst);
/// All of the above in one problem.
SmtProblem encode(const SynthesisInstance& inst);

/// Reads the template off a model of encode(inst). RCV letters are dropped
/// from token states.
ProcessTemplate extract_template(const SmtModel& model, const SynthesisInstance& inst);

struct RecheckReport {
    bool ok = true;
    std::vector<std::string> problems;
};

/// Independent checks of an extracted template: well-formedness with (a),
/// emptiness of the instance automaton against the template, the direct
/// guarantees on every state and letter, and (optionally) emptiness of the
/// negated full hub specification.
RecheckReport recheck(const ProcessTemplate& t, const SynthesisInstance& inst, const HubSpec* full_spec);

struct SynthOptions {
    bool direct_encoding = true;
    bool hardcode_token = true;
    int min_bound = 2;
    int max_bound = 8;
    std::string solver_cmd = default_solver_command();
    std::chrono::milliseconds timeout{0};
    bool full_recheck = true;
    int parallel_bounds = 1;
    bool symmetry_breaking = true;
    std::optional<PinnedPrefix> pinned;
    /// Called after every bound with a one-line summary.
    std::function<void(const std::string&)> log;
};

struct BoundAttempt {
    int bound = 0;
    SolverVerdict verdict = SolverVerdict::error;
    double seconds = 0;
    std::size_t assertions = 0;
};

struct SynthesisResult {
    enum class Status { ok, no_model, solver_failure };
    Status status = Status::no_model;
    std::optional<ProcessTemplate> model;
    std::vector<BoundAttempt> attempts;
    int nba_states = 0;
    std::string diagnostics;
};

/// Bound iteration min_bound..max_bound. A returned model has passed recheck;
/// a failed recheck is an internal error (thrown).
SynthesisResult synthesize(const HubSpec& spec, const SynthOptions& opt);

/// Drops G and process indices: `G(HLOCK(i) && HBURST==BURST4)` becomes
/// the hub input constraint `HLOCK && HBURST0 && !HBURST1`.
Formula hub_input_constraint(const Formula& indexed);

struct Phase {
    std::string name;
    std::optional<Formula> assumption;  // indexed, e.g. G(HLOCK(i) && ...)
};

/// The three decompositional steps for the AMBA arbiter.
std::vector<Phase> amba_phases();

struct PhaseOutcome {
    Phase phase;
    SynthesisResult result;
    double seconds = 0;
};

/// Runs the phases in order; every phase after the first pins the previous
/// model under the previous phase assumption. Stops at the first failure.
std::vector<PhaseOutcome> run_phases(const IndexedSpec& spec, const std::vector<Phase>& phases, SynthOptions opt,
                                     const std::function<void(const PhaseOutcome&)>& on_phase = {});

}  // namespace ringsynth

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ringsynth/spec.hpp"
#include "ringsynth/template.hpp"

namespace ringsynth {

enum class Timing { synchronous, interleaving, fully_asynchronous };

const char* to_string(Timing t);
Timing parse_timing(const std::string& s);

using GlobalState = std::vector<int>;

/// One global step: scheduled set M (bit p = process p), the environment
/// valuation and the process receiving the token (-1 if none).
struct RingStep {
    GlobalState target;
    std::uint64_t env = 0;
    std::uint32_t scheduled = 0;
    int receiver = -1;
};

/// Where a ground atom takes its value from.
struct AtomSource {
    enum class Kind { output, token, env, rcv, sch };
    Kind kind = Kind::env;
    int process = 0;
    int index = 0;
};

/// Position of a ring run: the state and the step leaving it.
struct RunPosition {
    GlobalState state;
    std::uint64_t env = 0;
    std::uint32_t scheduled = 0;
    int receiver = -1;
};

/// Ultimately periodic run: positions[loop_start..] repeat forever.
struct RingLasso {
    std::vector<RunPosition> positions;
    std::size_t loop_start = 0;
};

/// Ring of n processes with process 0 optionally running its own template.
/// Process k sends the token to k+1 mod n.
class Ring {
public:
    Ring(const ProcessTemplate& uniform, int size, Timing timing, std::set<std::string> global_inputs = {});
    Ring(const ProcessTemplate& zero, const ProcessTemplate& others, int size, Timing timing,
         std::set<std::string> global_inputs = {});

    int size() const { return size_; }
    Timing timing() const { return timing_; }
    const ProcessTemplate& process(int p) const { return p == 0 ? zero_ : others_; }

    /// Environment atoms (ground local inputs such as r_2, then globals).
    const std::vector<std::string>& env_atoms() const { return env_atoms_; }
    std::uint64_t num_env_letters() const { return std::uint64_t{1} << env_atoms_.size(); }

    /// Global states with exactly one token holder.
    std::vector<GlobalState> initial_states() const;
    int token_holder(const GlobalState& s) const;

    /// All (s', M) reachable in one step under the environment letter.
    std::vector<RingStep> successors(const GlobalState& s, std::uint64_t env) const;

    /// Letter read by process p when the environment is env.
    Letter local_letter(int p, std::uint64_t env, bool rcv) const;

    AtomSource resolve(const std::string& ground_atom) const;
    bool value(const AtomSource& src, const RunPosition& pos) const;
    bool value(const std::string& ground_atom, const RunPosition& pos) const { return value(resolve(ground_atom), pos); }

private:
    void init(std::set<std::string> global_inputs);
    bool internal_move(const GlobalState& s, std::uint64_t env, std::uint32_t m, GlobalState& out) const;

    ProcessTemplate zero_;
    ProcessTemplate others_;
    int size_;
    Timing timing_;
    std::vector<std::string> env_atoms_;
    // [process][template input] -> env bit, -1 for RCV
    std::vector<std::vector<int>> input_map_;
};

enum class Semantics { one_indexed, two_indexed, global };
Semantics semantics_of(Quantifier q);

/// Local run of process j: the positions where j is scheduled.
std::vector<RunPosition> project_local_run(const RingLasso& run, int j, std::size_t* loop_start = nullptr);

/// Truth of property(assignment) on the run under the semantics implied by the
/// quantifier. One-indexed properties are read on the local run of the
/// assigned process; throws if that projection is finite.
bool eval_indexed(const Ring& ring, const RingLasso& run, const Formula& body, Quantifier q, IndexAssignment assignment);

/// Process indices a quantifier ranges over in a ring of size n.
std::vector<IndexAssignment> instances(Quantifier q, int n);

/// The ring run is FairSched: every process is scheduled infinitely often.
bool is_fair(const RingLasso& run, int n);

/// Checks that consecutive positions follow the ring transition relation.
bool is_valid_run(const Ring& ring, const RingLasso& run);

}  // namespace ringsynth

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ringsynth/automata.hpp"
#include "ringsynth/ring.hpp"

namespace ringsynth {

/// Edge of an explicit system; `atoms` holds the truth of the requested
/// atoms at the position this edge leaves.
struct SysEdge {
    int target = 0;
    std::uint64_t atoms = 0;
    std::uint32_t scheduled = 1;
    std::uint64_t env = 0;
    int receiver = -1;
};

class TransitionSystem {
public:
    virtual ~TransitionSystem() = default;
    virtual std::vector<int> initial_states() = 0;
    virtual const std::vector<SysEdge>& edges(int state) = 0;
    virtual int num_processes() const = 0;
    virtual const std::vector<std::string>& atoms() const = 0;
};

/// Ring as an explicit system over the requested ground atoms.
class RingSystem : public TransitionSystem {
public:
    RingSystem(const Ring& ring, std::vector<std::string> atoms);
    std::vector<int> initial_states() override;
    const std::vector<SysEdge>& edges(int state) override;
    int num_processes() const override { return ring_.size(); }
    const std::vector<std::string>& atoms() const override { return atoms_; }
    const GlobalState& state(int id) const { return states_[static_cast<std::size_t>(id)]; }
    std::size_t num_states() const { return states_.size(); }

private:
    int intern(const GlobalState& s);
    const Ring& ring_;
    std::vector<std::string> atoms_;
    std::vector<AtomSource> sources_;
    std::vector<GlobalState> states_;
    std::map<GlobalState, int> ids_;
    std::vector<std::optional<std::vector<SysEdge>>> edges_;
};

/// Single template against an unconstrained environment (the hub view).
/// Atoms are unindexed signal names; letters rejected by the filter are
/// never offered.
class HubSystem : public TransitionSystem {
public:
    using LetterFilter = std::function<bool(int state, Letter in)>;
    HubSystem(const ProcessTemplate& t, std::vector<std::string> atoms, LetterFilter filter = {});
    std::vector<int> initial_states() override { return t_.initial; }
    const std::vector<SysEdge>& edges(int state) override { return edges_[static_cast<std::size_t>(state)]; }
    int num_processes() const override { return 1; }
    const std::vector<std::string>& atoms() const override { return atoms_; }

private:
    const ProcessTemplate& t_;
    std::vector<std::string> atoms_;
    std::vector<std::vector<SysEdge>> edges_;
};

/// Letters of a hub template excluding RCV while holding the token.
HubSystem::LetterFilter ring_environment_filter(const ProcessTemplate& t);

struct Component {
    Nba nba;
    int process = -1;  // -1: reads every step
};

enum class Algorithm { ndfs, scc };

struct ProductLasso {
    std::vector<std::pair<int, SysEdge>> steps;  // (system state, edge taken)
    std::size_t loop_start = 0;
};

struct EmptinessResult {
    bool empty = true;
    std::optional<ProductLasso> lasso;
    std::size_t product_states = 0;
};

/// Searches for a system run accepted by every component (and scheduling
/// each process infinitely often when `fairness` is set).
EmptinessResult find_accepting_run(TransitionSystem& sys, const std::vector<Component>& components, bool fairness,
                                   Algorithm algorithm = Algorithm::ndfs);

std::vector<std::string> component_atoms(const std::vector<Component>& components);

struct CheckOptions {
    bool fair_sched = true;
    Algorithm algorithm = Algorithm::ndfs;
};

struct RingCheckResult {
    bool holds = true;
    IndexAssignment failing_instance;
    std::optional<RingLasso> counterexample;
    std::size_t product_states = 0;
};

/// A_{forall i ass(i)} property in the ring. Assumptions are read per
/// process (1-indexed) or on the global run. A counterexample is re-checked
/// with eval_indexed before it is returned.
RingCheckResult verify_ring(const Ring& ring, const QuantifiedProperty& property,
                            const std::vector<QuantifiedProperty>& assumptions, const CheckOptions& opt = {});

/// Restricts the property's quantifier to processes accepted by the filter.
RingCheckResult verify_ring_filtered(const Ring& ring, const QuantifiedProperty& property,
                                     const std::vector<QuantifiedProperty>& assumptions,
                                     const std::function<bool(const IndexAssignment&)>& filter,
                                     const CheckOptions& opt = {});

struct TokenReleaseResult {
    bool holds = true;
    std::optional<ProductLasso> counterexample;
};

/// Every reachable token state eventually sends under the local assumption
/// (a hub-level formula over unindexed signals).
TokenReleaseResult check_token_release(const ProcessTemplate& t, const Formula& local_assumption);

struct CutoffInfo {
    std::optional<int> cutoff;
    bool condition_a = false;
    bool condition_b = false;
    std::string reason;
};

CutoffInfo cutoff_for(const QuantifiedProperty& property, const std::vector<QuantifiedProperty>& assumptions,
                      bool template_satisfies_a);

struct CutoffSample {
    int size = 0;
    bool holds = false;
};

/// Verifies at every size in [cutoff, cutoff + extra] and reports whether
/// all verdicts agree.
std::vector<CutoffSample> cutoff_sample_check(const ProcessTemplate& t, const QuantifiedProperty& property,
                                              const std::vector<QuantifiedProperty>& assumptions, Timing timing,
                                              int from, int to, const std::set<std::string>& global_inputs = {});

}  // namespace ringsynth

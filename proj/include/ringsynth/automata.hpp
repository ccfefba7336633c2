#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ringsynth/ltl.hpp"

namespace ringsynth {

/// Generalized Büchi automaton with transition-based acceptance marks.
struct Gba {
    struct Edge {
        int src = 0;
        Formula label;
        int dst = 0;
        std::uint64_t marks = 0;
    };
    int num_states = 0;
    int num_sets = 0;
    int initial = 0;
    /// Marks credited on entering the initial state.
    std::uint64_t initial_marks = 0;
    std::vector<Edge> edges;

    /// State-based sets: entering state q credits set u iff q is in sets[u].
    static Gba from_state_sets(int num_states, int initial, const std::vector<Edge>& edges,
                               const std::vector<std::vector<int>>& sets);
};

/// Büchi automaton with state-based acceptance. Labels are boolean formulas
/// over unindexed atom names.
struct Nba {
    struct Edge {
        int src = 0;
        Formula label;
        int dst = 0;
    };
    int num_states = 0;
    std::vector<int> initial;
    std::vector<bool> accepting;
    std::vector<Edge> edges;

    std::vector<std::vector<int>> out_edges() const;  // edge indices per state
    std::set<std::string> atoms() const;
    int num_accepting() const;
};

/// Marks every edge that lies on no cycle, then drops acceptance sets that
/// are full or duplicate. Language is preserved.
Gba reduce_acceptance(Gba g);

/// Level-counter degeneralization with level skipping. States are
/// (q, level) pairs with level in 0..k; accepting iff level == k.
Nba degeneralize(const Gba& g);

/// Tableau translation of an LTL formula (any syntax; it is expanded,
/// put in NNF and simplified first).
Gba ltl_to_gba(const Formula& f);
Nba ltl_to_nba(const Formula& f);

/// Drops states not reachable from an initial state and states that cannot
/// reach an accepting cycle. Language is preserved.
Nba trim(const Nba& a);

/// Lasso membership through a product with the lasso graph.
bool accepts_lasso(const Nba& a, const std::vector<NamedLetter>& prefix, const std::vector<NamedLetter>& loop);

/// Textual exchange format:
///   states N / initial q... / accepting q... / edge src dst <label>
std::string write_automaton(const Nba& a);
Nba read_automaton(const std::string& text);

/// Truth of a boolean label under a named valuation (unknown atoms false).
bool eval_label(const Formula& label, const NamedLetter& letter);

/// Strongly connected component id of every state.
std::vector<int> state_sccs(const Nba& a);

/// Compiled boolean label: a lookup table over the label's atoms, indexed by
/// positions in an external atom vector.
class CompiledLabel {
public:
    CompiledLabel() = default;
    CompiledLabel(const Formula& label, const std::map<std::string, int>& atom_index);
    bool eval(std::uint64_t valuation) const;

private:
    std::vector<int> positions_;
    std::vector<bool> table_;
};

}  // namespace ringsynth

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ringsynth/ltl.hpp"

namespace ringsynth {

/// Input letter: bit k set iff inputs[k] holds.
using Letter = std::uint32_t;

/// Finite Moore machine with a token partition. TOK is not stored among the
/// outputs; it is the partition flag `token[q]`.
struct ProcessTemplate {
    std::vector<std::string> inputs;   // contains RCV
    std::vector<std::string> outputs;  // contains SEND
    std::vector<std::string> state_names;
    std::vector<bool> token;
    std::vector<std::vector<bool>> label;  // [state][output]
    std::vector<int> initial;
    /// successors[q][letter]; empty when undefined.
    std::vector<std::vector<std::vector<int>>> successors;

    static ProcessTemplate make(std::vector<std::string> inputs, std::vector<std::string> outputs, int num_states);

    int num_states() const { return static_cast<int>(token.size()); }
    Letter num_letters() const { return Letter{1} << inputs.size(); }
    int input_index(const std::string& name) const;   // -1 if absent
    int output_index(const std::string& name) const;  // -1 if absent
    int rcv_bit() const;
    bool sends(int q) const;
    bool output(int q, const std::string& name) const;  // TOK handled
    void add_transition(int q, Letter in, int q2);
    /// Unique successor or -1.
    int next(int q, Letter in) const;
    bool is_deterministic() const;
    std::vector<int> reachable() const;
    int token_initial() const;     // t_i
    int no_token_initial() const;  // t_n
};

struct Violation {
    std::string condition;  // "i" ... "vii", "a"
    std::string message;
};

/// Conditions (i)-(vii) of a ring template; with_a adds condition (a).
/// Condition (a) quantifies over the letters a sending state can read,
/// i.e. letters without RCV.
std::vector<Violation> check_wellformed(const ProcessTemplate& t, bool with_a = false);

std::string to_json(const ProcessTemplate& t);
ProcessTemplate template_from_json(const std::string& text);
void save_template(const ProcessTemplate& t, const std::filesystem::path& file);
ProcessTemplate load_template(const std::filesystem::path& file);
std::string to_dot(const ProcessTemplate& t);

/// Sum over q, letter of the number of successors.
std::size_t num_transitions(const ProcessTemplate& t);

}  // namespace ringsynth

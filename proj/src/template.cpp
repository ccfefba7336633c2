#include "ringsynth/template.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace ringsynth {

ProcessTemplate ProcessTemplate::make(std::vector<std::string> inputs, std::vector<std::string> outputs, int num_states) {
    if (inputs.size() > 24) throw Error("too many template inputs");
    ProcessTemplate t;
    t.inputs = std::move(inputs);
    t.outputs = std::move(outputs);
    if (t.input_index(kRcv) < 0) t.inputs.push_back(kRcv);
    if (t.output_index(kSend) < 0) t.outputs.push_back(kSend);
    const auto n = static_cast<std::size_t>(num_states);
    t.token.assign(n, false);
    t.label.assign(n, std::vector<bool>(t.outputs.size(), false));
    t.successors.assign(n, std::vector<std::vector<int>>(t.num_letters()));
    for (int q = 0; q < num_states; ++q) t.state_names.push_back("q" + std::to_string(q));
    return t;
}

int ProcessTemplate::input_index(const std::string& name) const {
    auto it = std::find(inputs.begin(), inputs.end(), name);
    return it == inputs.end() ? -1 : static_cast<int>(it - inputs.begin());
}

int ProcessTemplate::output_index(const std::string& name) const {
    auto it = std::find(outputs.begin(), outputs.end(), name);
    return it == outputs.end() ? -1 : static_cast<int>(it - outputs.begin());
}

int ProcessTemplate::rcv_bit() const { return input_index(kRcv); }

bool ProcessTemplate::sends(int q) const { return output(q, kSend); }

bool ProcessTemplate::output(int q, const std::string& name) const {
    if (name == kTok) return token[static_cast<std::size_t>(q)];
    const int k = output_index(name);
    if (k < 0) throw Error("template has no output '" + name + "'");
    return label[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)];
}

void ProcessTemplate::add_transition(int q, Letter in, int q2) {
    if (q < 0 || q >= num_states() || q2 < 0 || q2 >= num_states()) throw Error("transition state out of range");
    if (in >= num_letters()) throw Error("transition letter out of range");
    auto& v = successors[static_cast<std::size_t>(q)][in];
    if (std::find(v.begin(), v.end(), q2) == v.end()) v.push_back(q2);
}

int ProcessTemplate::next(int q, Letter in) const {
    const auto& v = successors[static_cast<std::size_t>(q)][in];
    if (v.size() != 1) return -1;
    return v[0];
}

bool ProcessTemplate::is_deterministic() const {
    for (const auto& row : successors)
        for (const auto& v : row)
            if (v.size() > 1) return false;
    return true;
}

std::vector<int> ProcessTemplate::reachable() const {
    std::vector<bool> seen(static_cast<std::size_t>(num_states()), false);
    std::deque<int> q;
    for (int s : initial)
        if (!seen[static_cast<std::size_t>(s)]) {
            seen[static_cast<std::size_t>(s)] = true;
            q.push_back(s);
        }
    std::vector<int> out;
    while (!q.empty()) {
        const int s = q.front();
        q.pop_front();
        out.push_back(s);
        for (const auto& v : successors[static_cast<std::size_t>(s)])
            for (int t : v)
                if (!seen[static_cast<std::size_t>(t)]) {
                    seen[static_cast<std::size_t>(t)] = true;
                    q.push_back(t);
                }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int ProcessTemplate::token_initial() const {
    for (int s : initial)
        if (token[static_cast<std::size_t>(s)]) return s;
    throw Error("template has no initial token state");
}

int ProcessTemplate::no_token_initial() const {
    for (int s : initial)
        if (!token[static_cast<std::size_t>(s)]) return s;
    throw Error("template has no initial non-token state");
}

std::size_t num_transitions(const ProcessTemplate& t) {
    std::size_t n = 0;
    for (const auto& row : t.successors)
        for (const auto& v : row) n += v.size();
    return n;
}

std::vector<Violation> check_wellformed(const ProcessTemplate& t, bool with_a) {
    std::vector<Violation> out;
    auto report = [&](const char* c, std::string m) { out.push_back({c, std::move(m)}); };
    const int n = t.num_states();
    const int rcv = t.rcv_bit();
    if (rcv < 0) report("i", "template has no RCV input");
    if (t.output_index(kSend) < 0) report("i", "template has no SEND output");
    if (!out.empty()) return out;
    const Letter rcv_mask = Letter{1} << rcv;

    const auto n_tok = std::count(t.token.begin(), t.token.end(), true);
    if (n_tok == 0 || n_tok == n) report("i", "T and NT must both be nonempty");

    int init_t = 0, init_nt = 0;
    for (int s : t.initial) (t.token[static_cast<std::size_t>(s)] ? init_t : init_nt)++;
    // an empty side already breaks (i); (ii) is not reported on top
    const bool partition_ok = n_tok != 0 && n_tok != n;
    if (partition_ok && (t.initial.size() != 2 || init_t != 1 || init_nt != 1))
        report("ii", "initial states must be exactly one T state and one NT state");

    for (int q = 0; q < n; ++q) {
        const bool tq = t.token[static_cast<std::size_t>(q)];
        const std::string qs = t.state_names[static_cast<std::size_t>(q)];
        if (!tq && t.sends(q)) report("iii", qs + " sends without the token");
        int a_target = -1;
        for (Letter in = 0; in < t.num_letters(); ++in) {
            const auto& succ = t.successors[static_cast<std::size_t>(q)][in];
            const bool has_rcv = (in & rcv_mask) != 0;
            for (int q2 : succ) {
                const bool tq2 = t.token[static_cast<std::size_t>(q2)];
                const std::string tr = qs + " -" + std::to_string(in) + "-> " + t.state_names[static_cast<std::size_t>(q2)];
                // a sender without the token is reported under (iii) only
                if (t.sends(q) && tq && tq2) report("iv", tr + ": sending transition must go from T to NT");
                if (has_rcv && !(!tq && tq2)) report("v", tr + ": receiving transition must go from NT to T");
                if (!t.sends(q) && !has_rcv && tq != tq2) report("vi", tr + ": internal transition changes the token");
            }
            if (succ.empty() && (!tq || !has_rcv))
                report("vii", qs + " has no successor for letter " + std::to_string(in));
            if (with_a && t.sends(q) && !has_rcv) {
                if (succ.size() != 1 || (a_target >= 0 && succ[0] != a_target))
                    report("a", qs + " sends but its successor depends on the input");
                else a_target = succ[0];
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON / DOT

std::string to_json(const ProcessTemplate& t) {
    nlohmann::json j;
    j["inputs"] = t.inputs;
    j["outputs"] = t.outputs;
    j["initial"] = t.initial;
    auto states = nlohmann::json::array();
    for (int q = 0; q < t.num_states(); ++q) {
        std::vector<std::string> on;
        for (std::size_t k = 0; k < t.outputs.size(); ++k)
            if (t.label[static_cast<std::size_t>(q)][k]) on.push_back(t.outputs[k]);
        states.push_back({{"name", t.state_names[static_cast<std::size_t>(q)]},
                          {"token", static_cast<bool>(t.token[static_cast<std::size_t>(q)])},
                          {"outputs", on}});
    }
    j["states"] = states;
    auto tr = nlohmann::json::array();
    for (int q = 0; q < t.num_states(); ++q)
        for (Letter in = 0; in < t.num_letters(); ++in)
            for (int q2 : t.successors[static_cast<std::size_t>(q)][in]) {
                std::string bits;
                for (std::size_t k = 0; k < t.inputs.size(); ++k) bits += ((in >> k) & 1) ? '1' : '0';
                tr.push_back({{"from", q}, {"input", bits}, {"to", q2}});
            }
    j["transitions"] = tr;
    return j.dump(1);
}

ProcessTemplate template_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        const auto& states = j.at("states");
        ProcessTemplate t = ProcessTemplate::make(j.at("inputs").get<std::vector<std::string>>(),
                                                  j.at("outputs").get<std::vector<std::string>>(),
                                                  static_cast<int>(states.size()));
        for (std::size_t q = 0; q < states.size(); ++q) {
            t.state_names[q] = states[q].value("name", t.state_names[q]);
            t.token[q] = states[q].at("token").get<bool>();
            for (const auto& o : states[q].at("outputs")) {
                const int k = t.output_index(o.get<std::string>());
                if (k < 0) throw Error("state output '" + o.get<std::string>() + "' not declared");
                t.label[q][static_cast<std::size_t>(k)] = true;
            }
        }
        t.initial = j.at("initial").get<std::vector<int>>();
        for (const auto& tr : j.at("transitions")) {
            const std::string bits = tr.at("input").get<std::string>();
            if (bits.size() != t.inputs.size()) throw Error("input bit string has wrong length");
            Letter in = 0;
            for (std::size_t k = 0; k < bits.size(); ++k)
                if (bits[k] == '1') in |= Letter{1} << k;
                else if (bits[k] != '0') throw Error("input bit string must use 0/1");
            t.add_transition(tr.at("from").get<int>(), in, tr.at("to").get<int>());
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid template JSON: ") + e.what());
    }
}

void save_template(const ProcessTemplate& t, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw Error("cannot write " + file.string());
    out << to_json(t) << '\n';
}

ProcessTemplate load_template(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return template_from_json(ss.str());
}

namespace {

struct Cube {
    Letter mask;   // cared bits
    Letter value;  // values on cared bits
    bool operator<(const Cube& o) const { return std::tie(mask, value) < std::tie(o.mask, o.value); }
    bool operator==(const Cube& o) const { return mask == o.mask && value == o.value; }
};

std::vector<Cube> merge_cubes(const std::vector<Letter>& letters, Letter full) {
    std::set<Cube> cur;
    for (Letter l : letters) cur.insert({full, l});
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<Cube> next;
        std::set<Cube> used;
        for (auto a = cur.begin(); a != cur.end(); ++a)
            for (auto b = std::next(a); b != cur.end(); ++b) {
                if (a->mask != b->mask) continue;
                const Letter diff = a->value ^ b->value;
                if (diff && (diff & (diff - 1)) == 0) {
                    next.insert({a->mask & ~diff, a->value & ~diff});
                    used.insert(*a);
                    used.insert(*b);
                    changed = true;
                }
            }
        for (const auto& c : cur)
            if (!used.count(c)) next.insert(c);
        cur = std::move(next);
    }
    // drop cubes covered by another cube
    std::vector<Cube> out;
    for (const auto& c : cur) {
        bool covered = false;
        for (const auto& d : cur)
            if (!(c == d) && (d.mask & c.mask) == d.mask && (c.value & d.mask) == d.value) covered = true;
        if (!covered) out.push_back(c);
    }
    return out;
}

}  // namespace

std::string to_dot(const ProcessTemplate& t) {
    std::ostringstream os;
    os << "digraph template {\n  rankdir=LR;\n  node [shape=ellipse];\n";
    for (int q = 0; q < t.num_states(); ++q) {
        os << "  q" << q << " [label=\"" << t.state_names[static_cast<std::size_t>(q)];
        std::vector<std::string> on;
        if (t.token[static_cast<std::size_t>(q)]) on.push_back(kTok);
        for (std::size_t k = 0; k < t.outputs.size(); ++k)
            if (t.label[static_cast<std::size_t>(q)][k]) on.push_back(t.outputs[k]);
        if (!on.empty()) {
            os << "\\n";
            for (std::size_t k = 0; k < on.size(); ++k) os << (k ? " " : "") << on[k];
        }
        os << "\"";
        if (t.token[static_cast<std::size_t>(q)]) os << ", style=bold";
        os << "];\n";
    }
    for (std::size_t k = 0; k < t.initial.size(); ++k)
        os << "  init" << k << " [shape=point];\n  init" << k << " -> q" << t.initial[k] << ";\n";
    const Letter full = t.num_letters() - 1;
    for (int q = 0; q < t.num_states(); ++q) {
        std::map<int, std::vector<Letter>> by_target;
        for (Letter in = 0; in < t.num_letters(); ++in)
            for (int q2 : t.successors[static_cast<std::size_t>(q)][in]) by_target[q2].push_back(in);
        for (const auto& [q2, letters] : by_target) {
            std::string label;
            for (const auto& c : merge_cubes(letters, full)) {
                std::string cube;
                for (std::size_t k = 0; k < t.inputs.size(); ++k) {
                    if (!((c.mask >> k) & 1)) continue;
                    if (!cube.empty()) cube += "&";
                    cube += (((c.value >> k) & 1) ? "" : "!") + t.inputs[k];
                }
                if (cube.empty()) cube = "true";
                label += (label.empty() ? "" : " | ") + cube;
            }
            os << "  q" << q << " -> q" << q2 << " [label=\"" << label << "\"];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace ringsynth

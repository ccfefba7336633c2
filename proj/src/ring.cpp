#include "ringsynth/ring.hpp"

#include <algorithm>
#include <map>

namespace ringsynth {

const char* to_string(Timing t) {
    switch (t) {
    case Timing::synchronous: return "sync";
    case Timing::interleaving: return "interleaving";
    case Timing::fully_asynchronous: return "async";
    }
    return "";
}

Timing parse_timing(const std::string& s) {
    if (s == "sync" || s == "synchronous") return Timing::synchronous;
    if (s == "interleaving") return Timing::interleaving;
    if (s == "async" || s == "asynchronous" || s == "fully_asynchronous") return Timing::fully_asynchronous;
    throw Error("unknown timing '" + s + "' (sync, interleaving, async)");
}

Semantics semantics_of(Quantifier q) {
    switch (q) {
    case Quantifier::forall_ij: return Semantics::two_indexed;
    case Quantifier::unquantified: return Semantics::global;
    default: return Semantics::one_indexed;
    }
}

Ring::Ring(const ProcessTemplate& uniform, int size, Timing timing, std::set<std::string> global_inputs)
    : zero_(uniform), others_(uniform), size_(size), timing_(timing) {
    init(std::move(global_inputs));
}

Ring::Ring(const ProcessTemplate& zero, const ProcessTemplate& others, int size, Timing timing,
           std::set<std::string> global_inputs)
    : zero_(zero), others_(others), size_(size), timing_(timing) {
    init(std::move(global_inputs));
}

void Ring::init(std::set<std::string> global_inputs) {
    if (size_ < 1 || size_ > 16) throw Error("ring size must be between 1 and 16");
    for (const auto* t : {&zero_, &others_}) {
        if (t->rcv_bit() < 0 || t->output_index(kSend) < 0) throw Error("template lacks RCV or SEND");
        if (!t->is_deterministic()) throw Error("ring composition needs deterministic templates");
    }
    std::vector<std::string> globals;
    for (int p = 0; p < size_; ++p)
        for (const auto& in : process(p).inputs) {
            if (in == kRcv) continue;
            if (global_inputs.count(in)) {
                if (std::find(globals.begin(), globals.end(), in) == globals.end()) globals.push_back(in);
            } else {
                env_atoms_.push_back(ground_name(in, p));
            }
        }
    env_atoms_.insert(env_atoms_.end(), globals.begin(), globals.end());
    if (env_atoms_.size() > 30) throw Error("ring has too many environment atoms");
    input_map_.resize(static_cast<std::size_t>(size_));
    for (int p = 0; p < size_; ++p)
        for (const auto& in : process(p).inputs) {
            if (in == kRcv) {
                input_map_[static_cast<std::size_t>(p)].push_back(-1);
                continue;
            }
            const std::string key = global_inputs.count(in) ? in : ground_name(in, p);
            const auto it = std::find(env_atoms_.begin(), env_atoms_.end(), key);
            input_map_[static_cast<std::size_t>(p)].push_back(static_cast<int>(it - env_atoms_.begin()));
        }
}

std::vector<GlobalState> Ring::initial_states() const {
    std::vector<GlobalState> out;
    for (int h = 0; h < size_; ++h) {
        GlobalState s(static_cast<std::size_t>(size_));
        for (int p = 0; p < size_; ++p)
            s[static_cast<std::size_t>(p)] = p == h ? process(p).token_initial() : process(p).no_token_initial();
        out.push_back(std::move(s));
    }
    return out;
}

int Ring::token_holder(const GlobalState& s) const {
    int holder = -1;
    for (int p = 0; p < size_; ++p)
        if (process(p).token[static_cast<std::size_t>(s[static_cast<std::size_t>(p)])]) {
            if (holder >= 0) throw Error("global state with more than one token");
            holder = p;
        }
    if (holder < 0) throw Error("global state without a token");
    return holder;
}

Letter Ring::local_letter(int p, std::uint64_t env, bool rcv) const {
    Letter l = 0;
    const auto& map = input_map_[static_cast<std::size_t>(p)];
    for (std::size_t k = 0; k < map.size(); ++k) {
        const bool v = map[k] < 0 ? rcv : ((env >> map[k]) & 1) != 0;
        if (v) l |= Letter{1} << k;
    }
    return l;
}

bool Ring::internal_move(const GlobalState& s, std::uint64_t env, std::uint32_t m, GlobalState& out) const {
    out = s;
    for (int u = 0; u < size_; ++u) {
        if (!((m >> u) & 1)) continue;
        const int q = s[static_cast<std::size_t>(u)];
        if (process(u).sends(q)) return false;
        const int q2 = process(u).next(q, local_letter(u, env, false));
        if (q2 < 0) return false;
        out[static_cast<std::size_t>(u)] = q2;
    }
    return true;
}

std::vector<RingStep> Ring::successors(const GlobalState& s, std::uint64_t env) const {
    const int v = token_holder(s);
    const bool sending = process(v).sends(s[static_cast<std::size_t>(v)]);
    const int w = (v + 1) % size_;
    const std::uint32_t all = (std::uint32_t{1} << size_) - 1;

    std::vector<std::uint32_t> sets;
    switch (timing_) {
    case Timing::synchronous: sets.push_back(all); break;
    case Timing::interleaving:
        for (int u = 0; u < size_; ++u)
            sets.push_back(u == v && sending ? ((std::uint32_t{1} << v) | (std::uint32_t{1} << w)) : (std::uint32_t{1} << u));
        break;
    case Timing::fully_asynchronous:
        for (std::uint32_t m = 0; m <= all; ++m) sets.push_back(m);
        break;
    }

    std::vector<RingStep> out;
    for (std::uint32_t m : sets) {
        RingStep step;
        step.env = env;
        step.scheduled = m;
        const bool v_in = (m >> v) & 1;
        if (sending && v_in) {
            if (!((m >> w) & 1)) continue;
            step.target = s;
            step.receiver = w;
            bool ok = true;
            for (int u = 0; u < size_ && ok; ++u) {
                if (!((m >> u) & 1)) continue;
                const auto& t = process(u);
                const int q = s[static_cast<std::size_t>(u)];
                int q2;
                if (size_ == 1) {
                    // self pass: send move, then receive move
                    const int mid = t.next(q, local_letter(u, env, false));
                    q2 = mid < 0 ? -1 : t.next(mid, local_letter(u, env, true));
                } else {
                    q2 = t.next(q, local_letter(u, env, u == w));
                }
                if (q2 < 0) ok = false;
                else step.target[static_cast<std::size_t>(u)] = q2;
            }
            if (ok) out.push_back(std::move(step));
        } else {
            if (internal_move(s, env, m, step.target)) out.push_back(std::move(step));
        }
    }
    return out;
}

AtomSource Ring::resolve(const std::string& atom) const {
    const auto it = std::find(env_atoms_.begin(), env_atoms_.end(), atom);
    if (it != env_atoms_.end()) return {AtomSource::Kind::env, 0, static_cast<int>(it - env_atoms_.begin())};
    const auto us = atom.rfind('_');
    if (us == std::string::npos || us + 1 == atom.size()) throw Error("unknown atom '" + atom + "' in ring");
    const std::string name = atom.substr(0, us);
    int p = 0;
    try {
        std::size_t used = 0;
        p = std::stoi(atom.substr(us + 1), &used);
        if (used != atom.size() - us - 1) throw Error("");
    } catch (...) {
        throw Error("unknown atom '" + atom + "' in ring");
    }
    if (p < 0 || p >= size_) throw Error("atom '" + atom + "' refers to a process outside the ring");
    if (name == kTok) return {AtomSource::Kind::token, p, 0};
    if (name == kRcv) return {AtomSource::Kind::rcv, p, 0};
    if (name == kSch) return {AtomSource::Kind::sch, p, 0};
    const int k = process(p).output_index(name);
    if (k < 0) throw Error("unknown atom '" + atom + "' in ring");
    return {AtomSource::Kind::output, p, k};
}

bool Ring::value(const AtomSource& src, const RunPosition& pos) const {
    switch (src.kind) {
    case AtomSource::Kind::output:
        return process(src.process).label[static_cast<std::size_t>(pos.state[static_cast<std::size_t>(src.process)])]
                                         [static_cast<std::size_t>(src.index)];
    case AtomSource::Kind::token:
        return process(src.process).token[static_cast<std::size_t>(pos.state[static_cast<std::size_t>(src.process)])];
    case AtomSource::Kind::env: return ((pos.env >> src.index) & 1) != 0;
    case AtomSource::Kind::rcv: return pos.receiver == src.process;
    case AtomSource::Kind::sch: return ((pos.scheduled >> src.process) & 1) != 0;
    }
    return false;
}

std::vector<RunPosition> project_local_run(const RingLasso& run, int j, std::size_t* loop_start) {
    std::vector<RunPosition> out;
    std::size_t start = 0;
    bool loop_hit = false;
    for (std::size_t k = 0; k < run.positions.size(); ++k) {
        if (k == run.loop_start) start = out.size();
        if ((run.positions[k].scheduled >> j) & 1) {
            out.push_back(run.positions[k]);
            if (k >= run.loop_start) loop_hit = true;
        }
    }
    if (!loop_hit) throw Error("local run of process " + std::to_string(j) + " is finite");
    if (loop_start) *loop_start = start;
    return out;
}

std::vector<IndexAssignment> instances(Quantifier q, int n) {
    std::vector<IndexAssignment> out;
    switch (q) {
    case Quantifier::forall_i:
        for (int i = 0; i < n; ++i) out.push_back({i, std::nullopt});
        break;
    case Quantifier::forall_i_ne0:
        for (int i = 1; i < n; ++i) out.push_back({i, std::nullopt});
        break;
    case Quantifier::zero_only: out.push_back({0, std::nullopt}); break;
    case Quantifier::forall_ij:
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) out.push_back({i, j});
        break;
    case Quantifier::unquantified: out.push_back({}); break;
    }
    return out;
}

bool eval_indexed(const Ring& ring, const RingLasso& run, const Formula& body, Quantifier q, IndexAssignment assignment) {
    const Formula ground = substitute_index(body, assignment, ring.size());
    const Semantics sem = semantics_of(q);
    if (sem == Semantics::two_indexed) {
        for (const auto& a : atoms_of(ground)) {
            const auto src = ring.resolve(atom_key(a));
            if (src.kind == AtomSource::Kind::env || src.kind == AtomSource::Kind::rcv || src.kind == AtomSource::Kind::sch)
                throw Error("2-indexed property mentions input '" + atom_key(a) + "'");
        }
        if (contains_op(ground, Op::next)) throw Error("2-indexed property must not use X");
    }
    std::vector<RunPosition> positions;
    std::size_t loop_start = run.loop_start;
    if (sem == Semantics::one_indexed) {
        if (!assignment.i) throw Error("one-indexed evaluation needs a process index");
        positions = project_local_run(run, *assignment.i, &loop_start);
    } else {
        positions = run.positions;
    }
    std::map<std::string, AtomSource> cache;
    const LassoShape shape{loop_start, positions.size() - loop_start};
    return evaluate_lasso(ground, shape, [&](std::size_t pos, const SignalRef& ref) {
        const std::string key = atom_key(ref);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, ring.resolve(key)).first;
        return ring.value(it->second, positions[pos]);
    });
}

bool is_fair(const RingLasso& run, int n) {
    std::uint32_t seen = 0;
    for (std::size_t k = run.loop_start; k < run.positions.size(); ++k) seen |= run.positions[k].scheduled;
    return seen == (std::uint32_t{1} << n) - 1;
}

bool is_valid_run(const Ring& ring, const RingLasso& run) {
    if (run.positions.empty() || run.loop_start >= run.positions.size()) return false;
    const auto init = ring.initial_states();
    if (std::find(init.begin(), init.end(), run.positions[0].state) == init.end()) return false;
    for (std::size_t k = 0; k < run.positions.size(); ++k) {
        const auto& p = run.positions[k];
        const auto& nxt = run.positions[k + 1 < run.positions.size() ? k + 1 : run.loop_start].state;
        bool found = false;
        for (const auto& st : ring.successors(p.state, p.env))
            if (st.scheduled == p.scheduled && st.receiver == p.receiver && st.target == nxt) found = true;
        if (!found) return false;
    }
    return true;
}

}  // namespace ringsynth

#include "ringsynth/checker.hpp"

#include <algorithm>
#include <deque>

namespace ringsynth {

// ---------------------------------------------------------------------------
// Systems

RingSystem::RingSystem(const Ring& ring, std::vector<std::string> atoms) : ring_(ring), atoms_(std::move(atoms)) {
    if (atoms_.size() > 64) throw Error("more than 64 atoms requested from the ring");
    for (const auto& a : atoms_) sources_.push_back(ring_.resolve(a));
}

int RingSystem::intern(const GlobalState& s) {
    auto it = ids_.find(s);
    if (it != ids_.end()) return it->second;
    const int id = static_cast<int>(states_.size());
    ids_.emplace(s, id);
    states_.push_back(s);
    edges_.emplace_back();
    return id;
}

std::vector<int> RingSystem::initial_states() {
    std::vector<int> out;
    for (const auto& s : ring_.initial_states()) out.push_back(intern(s));
    return out;
}

const std::vector<SysEdge>& RingSystem::edges(int state) {
    if (!edges_[static_cast<std::size_t>(state)]) {
        std::vector<SysEdge> out;
        const GlobalState s = states_[static_cast<std::size_t>(state)];
        for (std::uint64_t env = 0; env < ring_.num_env_letters(); ++env)
            for (auto& step : ring_.successors(s, env)) {
                SysEdge e;
                e.env = env;
                e.scheduled = step.scheduled;
                e.receiver = step.receiver;
                RunPosition pos{s, env, step.scheduled, step.receiver};
                for (std::size_t k = 0; k < sources_.size(); ++k)
                    if (ring_.value(sources_[k], pos)) e.atoms |= std::uint64_t{1} << k;
                e.target = intern(step.target);
                out.push_back(e);
            }
        edges_[static_cast<std::size_t>(state)] = std::move(out);
    }
    return *edges_[static_cast<std::size_t>(state)];
}

HubSystem::HubSystem(const ProcessTemplate& t, std::vector<std::string> atoms, LetterFilter filter)
    : t_(t), atoms_(std::move(atoms)) {
    if (atoms_.size() > 64) throw Error("more than 64 atoms requested from the template");
    struct Src {
        int kind;  // 0 token, 1 output, 2 input
        int index;
    };
    std::vector<Src> src;
    for (const auto& a : atoms_) {
        if (a == kTok) src.push_back({0, 0});
        else if (t.output_index(a) >= 0) src.push_back({1, t.output_index(a)});
        else if (t.input_index(a) >= 0) src.push_back({2, t.input_index(a)});
        else throw Error("template has no signal '" + a + "'");
    }
    edges_.resize(static_cast<std::size_t>(t.num_states()));
    for (int q = 0; q < t.num_states(); ++q)
        for (Letter in = 0; in < t.num_letters(); ++in) {
            if (filter && !filter(q, in)) continue;
            for (int q2 : t.successors[static_cast<std::size_t>(q)][in]) {
                SysEdge e;
                e.target = q2;
                e.env = in;
                for (std::size_t k = 0; k < src.size(); ++k) {
                    bool v = false;
                    switch (src[k].kind) {
                    case 0: v = t.token[static_cast<std::size_t>(q)]; break;
                    case 1: v = t.label[static_cast<std::size_t>(q)][static_cast<std::size_t>(src[k].index)]; break;
                    default: v = ((in >> src[k].index) & 1) != 0;
                    }
                    if (v) e.atoms |= std::uint64_t{1} << k;
                }
                edges_[static_cast<std::size_t>(q)].push_back(e);
            }
        }
}

HubSystem::LetterFilter ring_environment_filter(const ProcessTemplate& t) {
    const Letter rcv = Letter{1} << t.rcv_bit();
    return [&t, rcv](int q, Letter in) { return !(t.token[static_cast<std::size_t>(q)] && (in & rcv)); };
}

std::vector<std::string> component_atoms(const std::vector<Component>& components) {
    std::set<std::string> s;
    for (const auto& c : components) {
        const auto a = c.nba.atoms();
        s.insert(a.begin(), a.end());
    }
    return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// Product

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
        return h;
    }
};

struct PEdge {
    int target;
    int sys_edge;
};

class Product {
public:
    Product(TransitionSystem& sys, const std::vector<Component>& comps, bool fairness)
        : sys_(sys), comps_(comps), fairness_(fairness) {
        std::map<std::string, int> index;
        for (std::size_t k = 0; k < sys.atoms().size(); ++k) index[sys.atoms()[k]] = static_cast<int>(k);
        for (const auto& c : comps_) {
            std::vector<CompiledLabel> labels;
            for (const auto& e : c.nba.edges) labels.emplace_back(e.label, index);
            labels_.push_back(std::move(labels));
            out_.push_back(c.nba.out_edges());
        }
        sets_ = static_cast<int>(comps_.size()) + (fairness ? sys.num_processes() : 0);
    }

    std::vector<int> initial() {
        std::vector<int> out;
        for (int s : sys_.initial_states()) {
            std::vector<std::vector<int>> choices;
            for (const auto& c : comps_) choices.push_back(c.nba.initial);
            enumerate(choices, [&](const std::vector<int>& qs) {
                std::vector<int> key{s};
                key.insert(key.end(), qs.begin(), qs.end());
                key.push_back(0);
                out.push_back(intern(std::move(key)));
            });
        }
        return out;
    }

    const std::vector<PEdge>& succ(int id) {
        auto& slot = succ_[static_cast<std::size_t>(id)];
        if (slot) return *slot;
        std::vector<PEdge> out;
        const std::vector<int> key = keys_[static_cast<std::size_t>(id)];
        const int s = key[0];
        const int level = key.back();
        const auto& edges = sys_.edges(s);
        for (std::size_t ei = 0; ei < edges.size(); ++ei) {
            const SysEdge& e = edges[ei];
            std::vector<std::vector<int>> choices(comps_.size());
            bool dead = false;
            for (std::size_t c = 0; c < comps_.size() && !dead; ++c) {
                const int q = key[1 + c];
                if (!steps(c, e)) {
                    choices[c].push_back(q);
                    continue;
                }
                for (int ce : out_[c][static_cast<std::size_t>(q)])
                    if (labels_[c][static_cast<std::size_t>(ce)].eval(e.atoms))
                        choices[c].push_back(comps_[c].nba.edges[static_cast<std::size_t>(ce)].dst);
                dead = choices[c].empty();
            }
            if (dead) continue;
            enumerate(choices, [&](const std::vector<int>& qs) {
                int l = level == sets_ ? 0 : level;
                while (l < sets_ && satisfied(l, e, qs)) ++l;
                std::vector<int> next{e.target};
                next.insert(next.end(), qs.begin(), qs.end());
                next.push_back(l);
                out.push_back({intern(std::move(next)), static_cast<int>(ei)});
            });
        }
        slot = std::move(out);
        return *succ_[static_cast<std::size_t>(id)];
    }

    bool accepting(int id) const { return keys_[static_cast<std::size_t>(id)].back() == sets_; }
    int sys_state(int id) const { return keys_[static_cast<std::size_t>(id)][0]; }
    std::size_t size() const { return keys_.size(); }

private:
    bool steps(std::size_t c, const SysEdge& e) const {
        return comps_[c].process < 0 || ((e.scheduled >> comps_[c].process) & 1);
    }

    bool satisfied(int set, const SysEdge& e, const std::vector<int>& qs) const {
        const auto nc = static_cast<int>(comps_.size());
        if (set < nc) {
            const auto c = static_cast<std::size_t>(set);
            return steps(c, e) && comps_[c].nba.accepting[static_cast<std::size_t>(qs[c])];
        }
        return ((e.scheduled >> (set - nc)) & 1) != 0;
    }

    template <class Fn>
    static void enumerate(const std::vector<std::vector<int>>& choices, Fn&& fn) {
        std::vector<int> cur(choices.size());
        std::function<void(std::size_t)> rec = [&](std::size_t k) {
            if (k == choices.size()) {
                fn(cur);
                return;
            }
            for (int v : choices[k]) {
                cur[k] = v;
                rec(k + 1);
            }
        };
        for (const auto& c : choices)
            if (c.empty()) return;
        rec(0);
    }

    int intern(std::vector<int> key) {
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        const int id = static_cast<int>(keys_.size());
        ids_.emplace(key, id);
        keys_.push_back(std::move(key));
        succ_.emplace_back();
        return id;
    }

    TransitionSystem& sys_;
    const std::vector<Component>& comps_;
    bool fairness_;
    int sets_ = 0;
    std::vector<std::vector<CompiledLabel>> labels_;
    std::vector<std::vector<std::vector<int>>> out_;
    std::unordered_map<std::vector<int>, int, VecHash> ids_;
    std::deque<std::vector<int>> keys_;
    std::deque<std::optional<std::vector<PEdge>>> succ_;
};

ProductLasso to_system_lasso(Product& p, TransitionSystem& sys, const std::vector<std::pair<int, int>>& steps,
                             std::size_t loop_start) {
    ProductLasso out;
    out.loop_start = loop_start;
    for (const auto& [id, k] : steps) {
        const PEdge pe = p.succ(id)[static_cast<std::size_t>(k)];
        const int s = p.sys_state(id);
        out.steps.emplace_back(s, sys.edges(s)[static_cast<std::size_t>(pe.sys_edge)]);
    }
    return out;
}

EmptinessResult ndfs(Product& p, TransitionSystem& sys) {
    enum : std::uint8_t { white = 0, cyan = 1, blue = 2 };
    std::vector<std::uint8_t> color;
    std::vector<bool> red;
    auto grow = [&] {
        if (color.size() < p.size()) {
            color.resize(p.size(), white);
            red.resize(p.size(), false);
        }
    };
    struct Frame {
        int id;
        std::size_t next;
    };
    EmptinessResult result;
    for (int init : p.initial()) {
        grow();
        if (color[static_cast<std::size_t>(init)] != white) continue;
        std::vector<Frame> stack{{init, 0}};
        color[static_cast<std::size_t>(init)] = cyan;
        while (!stack.empty()) {
            Frame& top = stack.back();
            const auto& succ = p.succ(top.id);
            grow();
            if (top.next < succ.size()) {
                const int t = succ[top.next++].target;
                if (color[static_cast<std::size_t>(t)] == white) {
                    color[static_cast<std::size_t>(t)] = cyan;
                    stack.push_back({t, 0});
                }
                continue;
            }
            if (p.accepting(top.id)) {
                // red search from the seed for any state on the blue stack
                std::vector<Frame> rstack{{top.id, 0}};
                while (!rstack.empty()) {
                    Frame& r = rstack.back();
                    const auto& rs = p.succ(r.id);
                    grow();
                    if (r.next >= rs.size()) {
                        rstack.pop_back();
                        continue;
                    }
                    const std::size_t k = r.next++;
                    const int t = rs[k].target;
                    if (color[static_cast<std::size_t>(t)] == cyan) {
                        std::vector<std::pair<int, int>> steps;
                        std::size_t loop_start = 0;
                        for (std::size_t b = 0; b + 1 < stack.size(); ++b) {
                            if (stack[b].id == t) loop_start = b;
                            steps.emplace_back(stack[b].id, static_cast<int>(stack[b].next - 1));
                        }
                        if (stack.back().id == t) loop_start = stack.size() - 1;
                        for (const auto& f : rstack) steps.emplace_back(f.id, static_cast<int>(f.next - 1));
                        result.empty = false;
                        result.lasso = to_system_lasso(p, sys, steps, loop_start);
                        result.product_states = p.size();
                        return result;
                    }
                    if (!red[static_cast<std::size_t>(t)]) {
                        red[static_cast<std::size_t>(t)] = true;
                        rstack.push_back({t, 0});
                    }
                }
            }
            color[static_cast<std::size_t>(top.id)] = blue;
            stack.pop_back();
        }
    }
    result.product_states = p.size();
    return result;
}

EmptinessResult scc_search(Product& p, TransitionSystem& sys) {
    EmptinessResult result;
    std::vector<int> init = p.initial();
    // explore
    for (std::size_t k = 0; k < p.size(); ++k) p.succ(static_cast<int>(k));
    const std::size_t n = p.size();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<int> stack;
    std::vector<bool> on(n, false);
    int counter = 0, ncomp = 0;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<std::pair<int, std::size_t>> call{{static_cast<int>(root), 0}};
        index[root] = low[root] = counter++;
        stack.push_back(static_cast<int>(root));
        on[root] = true;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            const auto& sv = p.succ(v);
            if (pos < sv.size()) {
                const int w = sv[pos++].target;
                if (index[static_cast<std::size_t>(w)] < 0) {
                    index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = counter++;
                    stack.push_back(w);
                    on[static_cast<std::size_t>(w)] = true;
                    call.emplace_back(w, 0);
                } else if (on[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(v)] = std::min(low[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
                }
                continue;
            }
            const int done = v;
            call.pop_back();
            if (!call.empty()) {
                const int parent = call.back().first;
                low[static_cast<std::size_t>(parent)] = std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(done)]);
            }
            if (low[static_cast<std::size_t>(done)] == index[static_cast<std::size_t>(done)]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on[static_cast<std::size_t>(w)] = false;
                    comp[static_cast<std::size_t>(w)] = ncomp;
                } while (w != done);
                ++ncomp;
            }
        }
    }
    result.product_states = n;
    int seed = -1;
    for (std::size_t v = 0; v < n && seed < 0; ++v) {
        if (!p.accepting(static_cast<int>(v))) continue;
        for (const auto& e : p.succ(static_cast<int>(v)))
            if (comp[static_cast<std::size_t>(e.target)] == comp[v]) {
                seed = static_cast<int>(v);
                break;
            }
    }
    if (seed < 0) return result;
    // BFS paths: initial -> seed, then seed -> seed inside its component
    auto bfs = [&](std::vector<int> sources, int goal, bool same_comp, bool skip_zero) {
        std::vector<std::pair<int, int>> parent(n, {-2, -1});
        std::deque<int> q;
        for (int s : sources) {
            parent[static_cast<std::size_t>(s)] = {-1, -1};
            q.push_back(s);
        }
        int hit = -1, hit_from = -1, hit_edge = -1;
        while (!q.empty() && hit < 0) {
            const int v = q.front();
            q.pop_front();
            if (!skip_zero && v == goal) {
                hit = v;
                break;
            }
            const auto& sv = p.succ(v);
            for (std::size_t k = 0; k < sv.size(); ++k) {
                const int w = sv[k].target;
                if (same_comp && comp[static_cast<std::size_t>(w)] != comp[static_cast<std::size_t>(goal)]) continue;
                if (skip_zero && w == goal) {
                    hit = w;
                    hit_from = v;
                    hit_edge = static_cast<int>(k);
                    break;
                }
                if (parent[static_cast<std::size_t>(w)].first == -2) {
                    parent[static_cast<std::size_t>(w)] = {v, static_cast<int>(k)};
                    q.push_back(w);
                }
            }
        }
        std::vector<std::pair<int, int>> path;  // (state, edge index)
        int cur = hit;
        if (skip_zero) {
            path.emplace_back(hit_from, hit_edge);
            cur = hit_from;
        }
        while (parent[static_cast<std::size_t>(cur)].first >= 0) {
            const auto [pv, pk] = parent[static_cast<std::size_t>(cur)];
            path.emplace_back(pv, pk);
            cur = pv;
        }
        std::reverse(path.begin(), path.end());
        return path;
    };
    auto prefix = bfs(init, seed, false, false);
    auto loop = bfs({seed}, seed, true, true);
    std::vector<std::pair<int, int>> steps = prefix;
    const std::size_t loop_start = steps.size();
    steps.insert(steps.end(), loop.begin(), loop.end());
    result.empty = false;
    result.lasso = to_system_lasso(p, sys, steps, loop_start);
    return result;
}

}  // namespace

EmptinessResult find_accepting_run(TransitionSystem& sys, const std::vector<Component>& components, bool fairness,
                                   Algorithm algorithm) {
    Product p(sys, components, fairness);
    return algorithm == Algorithm::ndfs ? ndfs(p, sys) : scc_search(p, sys);
}

// ---------------------------------------------------------------------------
// Ring verification

namespace {

bool applies_at(Quantifier q, int p) {
    switch (q) {
    case Quantifier::forall_i: return true;
    case Quantifier::forall_i_ne0: return p != 0;
    case Quantifier::zero_only: return p == 0;
    default: return false;
    }
}

RingLasso to_ring_lasso(const RingSystem& sys, const ProductLasso& l) {
    RingLasso out;
    out.loop_start = l.loop_start;
    for (const auto& [s, e] : l.steps) out.positions.push_back({sys.state(s), e.env, e.scheduled, e.receiver});
    return out;
}

}  // namespace

RingCheckResult verify_ring_filtered(const Ring& ring, const QuantifiedProperty& property,
                                     const std::vector<QuantifiedProperty>& assumptions,
                                     const std::function<bool(const IndexAssignment&)>& filter, const CheckOptions& opt) {
    const int n = ring.size();
    std::vector<Component> base;
    for (int p = 0; p < n; ++p) {
        std::vector<Formula> parts;
        for (const auto& a : assumptions)
            if (semantics_of(a.quantifier) == Semantics::one_indexed && applies_at(a.quantifier, p))
                parts.push_back(substitute_index(a.body, {p, std::nullopt}, n));
        if (!parts.empty()) base.push_back({ltl_to_nba(Formula::conj_all(parts)), p});
    }
    {
        std::vector<Formula> parts;
        for (const auto& a : assumptions)
            if (semantics_of(a.quantifier) != Semantics::one_indexed)
                for (const auto& inst : instances(a.quantifier, n)) parts.push_back(substitute_index(a.body, inst, n));
        if (!parts.empty()) base.push_back({ltl_to_nba(Formula::conj_all(parts)), -1});
    }

    RingCheckResult result;
    const Semantics sem = semantics_of(property.quantifier);
    for (const auto& inst : instances(property.quantifier, n)) {
        if (filter && !filter(inst)) continue;
        std::vector<Component> comps = base;
        const Formula neg = Formula::neg(substitute_index(property.body, inst, n));
        comps.push_back({ltl_to_nba(neg), sem == Semantics::one_indexed ? *inst.i : -1});
        RingSystem sys(ring, component_atoms(comps));
        const auto r = find_accepting_run(sys, comps, opt.fair_sched, opt.algorithm);
        result.product_states += r.product_states;
        if (r.empty) continue;
        RingLasso run = to_ring_lasso(sys, *r.lasso);
        // independent re-check of the witness
        bool ok = is_valid_run(ring, run) && (!opt.fair_sched || is_fair(run, n)) &&
                  !eval_indexed(ring, run, property.body, property.quantifier, inst);
        for (const auto& a : assumptions)
            for (const auto& ai : instances(a.quantifier, n)) ok = ok && eval_indexed(ring, run, a.body, a.quantifier, ai);
        if (!ok) throw Error("internal error: counterexample failed the independent re-check");
        result.holds = false;
        result.failing_instance = inst;
        result.counterexample = std::move(run);
        return result;
    }
    return result;
}

RingCheckResult verify_ring(const Ring& ring, const QuantifiedProperty& property,
                            const std::vector<QuantifiedProperty>& assumptions, const CheckOptions& opt) {
    return verify_ring_filtered(ring, property, assumptions, {}, opt);
}

TokenReleaseResult check_token_release(const ProcessTemplate& t, const Formula& local_assumption) {
    const Formula bad = Formula::conj(local_assumption,
                                      Formula::F(Formula::conj(Formula::atom(kTok), Formula::G(Formula::neg(Formula::atom(kSend))))));
    std::vector<Component> comps{{ltl_to_nba(bad), -1}};
    HubSystem sys(t, component_atoms(comps), ring_environment_filter(t));
    const auto r = find_accepting_run(sys, comps, false);
    TokenReleaseResult out;
    out.holds = r.empty;
    out.counterexample = r.lasso;
    return out;
}

CutoffInfo cutoff_for(const QuantifiedProperty& property, const std::vector<QuantifiedProperty>& assumptions,
                      bool template_satisfies_a) {
    CutoffInfo info;
    info.condition_a = template_satisfies_a;
    info.condition_b = std::all_of(assumptions.begin(), assumptions.end(),
                                   [](const QuantifiedProperty& a) { return a.quantifier == Quantifier::forall_i; });
    if (!info.condition_a) {
        info.reason = "template violates condition (a)";
        return info;
    }
    if (!info.condition_b) {
        info.reason = "assumptions are not all of the form forall i ass(i)";
        return info;
    }
    switch (property.quantifier) {
    case Quantifier::forall_i:
        info.cutoff = 2;
        info.reason = "1-indexed property";
        break;
    case Quantifier::forall_ij:
        info.cutoff = 4;
        info.reason = "2-indexed property";
        break;
    default: info.reason = std::string("no cutoff for quantifier '") + to_string(property.quantifier) + "'";
    }
    return info;
}

std::vector<CutoffSample> cutoff_sample_check(const ProcessTemplate& t, const QuantifiedProperty& property,
                                              const std::vector<QuantifiedProperty>& assumptions, Timing timing,
                                              int from, int to, const std::set<std::string>& global_inputs) {
    std::vector<CutoffSample> out;
    for (int n = from; n <= to; ++n) {
        Ring ring(t, n, timing, global_inputs);
        out.push_back({n, verify_ring(ring, property, assumptions).holds});
    }
    return out;
}

}  // namespace ringsynth

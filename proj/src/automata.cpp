#include "ringsynth/automata.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <tuple>

namespace ringsynth {

std::vector<std::vector<int>> Nba::out_edges() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(num_states));
    for (std::size_t e = 0; e < edges.size(); ++e) out[static_cast<std::size_t>(edges[e].src)].push_back(static_cast<int>(e));
    return out;
}

std::set<std::string> Nba::atoms() const {
    std::set<std::string> out;
    for (const auto& e : edges)
        for (const auto& k : atom_keys_of(e.label)) out.insert(k);
    return out;
}

int Nba::num_accepting() const { return static_cast<int>(std::count(accepting.begin(), accepting.end(), true)); }

Gba Gba::from_state_sets(int num_states, int initial, const std::vector<Edge>& edges,
                         const std::vector<std::vector<int>>& sets) {
    if (sets.size() > 64) throw Error("at most 64 acceptance sets are supported");
    Gba g;
    g.num_states = num_states;
    g.num_sets = static_cast<int>(sets.size());
    g.initial = initial;
    std::vector<std::uint64_t> member(static_cast<std::size_t>(num_states), 0);
    for (std::size_t u = 0; u < sets.size(); ++u)
        for (int q : sets[u]) member[static_cast<std::size_t>(q)] |= std::uint64_t{1} << u;
    g.initial_marks = member[static_cast<std::size_t>(initial)];
    for (auto e : edges) {
        e.marks = member[static_cast<std::size_t>(e.dst)];
        g.edges.push_back(e);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Boolean helpers

namespace {

// 0 false, 1 true, 2 unknown
int eval3(const Formula& f, const std::map<std::string, bool>& val) {
    switch (f.op()) {
    case Op::true_: return 1;
    case Op::false_: return 0;
    case Op::atom: {
        auto it = val.find(atom_key(f.signal()));
        return it == val.end() ? 2 : (it->second ? 1 : 0);
    }
    case Op::not_: {
        const int a = eval3(f.lhs(), val);
        return a == 2 ? 2 : 1 - a;
    }
    case Op::and_: {
        const int a = eval3(f.lhs(), val);
        if (a == 0) return 0;
        const int b = eval3(f.rhs(), val);
        if (b == 0) return 0;
        return (a == 1 && b == 1) ? 1 : 2;
    }
    case Op::or_: {
        const int a = eval3(f.lhs(), val);
        if (a == 1) return 1;
        const int b = eval3(f.rhs(), val);
        if (b == 1) return 1;
        return (a == 0 && b == 0) ? 0 : 2;
    }
    case Op::implies: {
        const int a = eval3(f.lhs(), val);
        if (a == 0) return 1;
        const int b = eval3(f.rhs(), val);
        if (b == 1) return 1;
        return (a == 1 && b == 0) ? 0 : 2;
    }
    case Op::iff: {
        const int a = eval3(f.lhs(), val), b = eval3(f.rhs(), val);
        if (a == 2 || b == 2) return 2;
        return a == b ? 1 : 0;
    }
    default: throw Error("boolean label expected, got " + f.to_string());
    }
}

bool sat_rec(const Formula& f, const std::vector<std::string>& atoms, std::size_t k, std::map<std::string, bool>& val) {
    const int v = eval3(f, val);
    if (v != 2) return v == 1;
    if (k == atoms.size()) return false;
    for (bool b : {true, false}) {
        val[atoms[k]] = b;
        if (sat_rec(f, atoms, k + 1, val)) return true;
    }
    val.erase(atoms[k]);
    return false;
}

bool satisfiable(const Formula& f) {
    const auto keys = atom_keys_of(f);
    std::vector<std::string> atoms(keys.begin(), keys.end());
    std::map<std::string, bool> val;
    return sat_rec(f, atoms, 0, val);
}

}  // namespace

bool eval_label(const Formula& label, const NamedLetter& letter) {
    switch (label.op()) {
    case Op::true_: return true;
    case Op::false_: return false;
    case Op::atom: return letter.count(atom_key(label.signal())) > 0;
    case Op::not_: return !eval_label(label.lhs(), letter);
    case Op::and_: return eval_label(label.lhs(), letter) && eval_label(label.rhs(), letter);
    case Op::or_: return eval_label(label.lhs(), letter) || eval_label(label.rhs(), letter);
    case Op::implies: return !eval_label(label.lhs(), letter) || eval_label(label.rhs(), letter);
    case Op::iff: return eval_label(label.lhs(), letter) == eval_label(label.rhs(), letter);
    default: throw Error("boolean label expected, got " + label.to_string());
    }
}

CompiledLabel::CompiledLabel(const Formula& label, const std::map<std::string, int>& atom_index) {
    const auto keys = atom_keys_of(label);
    if (keys.size() > 20) throw Error("label has too many atoms: " + label.to_string());
    std::vector<std::string> names(keys.begin(), keys.end());
    for (const auto& k : names) {
        auto it = atom_index.find(k);
        if (it == atom_index.end()) throw Error("atom '" + k + "' is not provided by the system");
        positions_.push_back(it->second);
    }
    table_.resize(std::size_t{1} << names.size());
    for (std::size_t m = 0; m < table_.size(); ++m) {
        NamedLetter l;
        for (std::size_t b = 0; b < names.size(); ++b)
            if ((m >> b) & 1) l.insert(names[b]);
        table_[m] = eval_label(label, l);
    }
}

bool CompiledLabel::eval(std::uint64_t valuation) const {
    std::size_t m = 0;
    for (std::size_t b = 0; b < positions_.size(); ++b)
        if ((valuation >> positions_[b]) & 1) m |= std::size_t{1} << b;
    return table_[m];
}

// ---------------------------------------------------------------------------
// Tableau

namespace {

class Closure {
public:
    struct Node {
        Op op;
        int a = -1;
        int b = -1;
        bool prop = false;
        Formula formula;
    };

    int intern(const Formula& f) {
        int a = -1, b = -1;
        if (f.is_unary() || f.is_binary()) a = intern(f.lhs());
        if (f.is_binary()) b = intern(f.rhs());
        const std::string key = f.is_atom() ? atom_key(f.signal()) : std::string();
        auto k = std::make_tuple(static_cast<int>(f.op()), key, a, b);
        auto it = ids_.find(k);
        if (it != ids_.end()) return it->second;
        Node n{f.op(), a, b, is_propositional(f), f};
        nodes_.push_back(n);
        const int id = static_cast<int>(nodes_.size()) - 1;
        ids_.emplace(k, id);
        return id;
    }

    const Node& operator[](int id) const { return nodes_[static_cast<std::size_t>(id)]; }

    int eventuality_bit(int id) {
        auto it = bits_.find(id);
        if (it != bits_.end()) return it->second;
        const int bit = static_cast<int>(bits_.size());
        if (bit >= 64) throw Error("formula has more than 64 eventualities");
        bits_.emplace(id, bit);
        return bit;
    }
    int num_bits() const { return static_cast<int>(bits_.size()); }

private:
    std::deque<Node> nodes_;
    std::map<std::tuple<int, std::string, int, int>, int> ids_;
    std::map<int, int> bits_;
};

struct Cover {
    std::set<int> props;
    std::set<int> next;
    std::uint64_t postponed = 0;
};

struct Branch {
    std::vector<int> todo;
    std::set<int> done;
    Cover cover;
};

bool subsumes(const Cover& a, const Cover& b) {
    return std::includes(b.props.begin(), b.props.end(), a.props.begin(), a.props.end()) &&
           std::includes(b.next.begin(), b.next.end(), a.next.begin(), a.next.end()) &&
           (a.postponed & ~b.postponed) == 0;
}

class Tableau {
public:
    explicit Tableau(Closure& c) : c_(c) {}

    std::vector<Cover> covers(const std::vector<int>& obligations) {
        out_.clear();
        Branch b;
        b.todo = obligations;
        expand(std::move(b));
        // Subsumption: drop covers that demand more than another one.
        std::vector<Cover> kept;
        for (std::size_t x = 0; x < out_.size(); ++x) {
            bool drop = false;
            for (std::size_t y = 0; y < out_.size() && !drop; ++y) {
                if (x == y || !subsumes(out_[y], out_[x])) continue;
                drop = !subsumes(out_[x], out_[y]) || y < x;
            }
            if (!drop) kept.push_back(out_[x]);
        }
        return kept;
    }

private:
    void flatten_or(int id, std::vector<int>& out) const {
        const auto& n = c_[id];
        if (n.op == Op::or_ && !n.prop) {
            flatten_or(n.a, out);
            flatten_or(n.b, out);
        } else {
            out.push_back(id);
        }
    }

    void expand(Branch b) {
        while (!b.todo.empty()) {
            const int id = b.todo.back();
            b.todo.pop_back();
            if (!b.done.insert(id).second) continue;
            const auto& n = c_[id];
            if (n.prop) {
                if (n.op == Op::false_) return;
                if (n.op != Op::true_) b.cover.props.insert(id);
                continue;
            }
            switch (n.op) {
            case Op::and_:
                b.todo.push_back(n.a);
                b.todo.push_back(n.b);
                break;
            case Op::or_: {
                std::vector<int> ds;
                flatten_or(id, ds);
                if (std::any_of(ds.begin(), ds.end(), [&](int d) { return b.done.count(d) > 0; })) break;
                std::vector<Formula> props;
                std::vector<int> rest;
                for (int d : ds) {
                    if (c_[d].prop) props.push_back(c_[d].formula);
                    else rest.push_back(d);
                }
                if (!props.empty()) rest.insert(rest.begin(), c_.intern(Formula::disj_all(props)));
                for (std::size_t k = 0; k + 1 < rest.size(); ++k) {
                    Branch copy = b;
                    copy.todo.push_back(rest[k]);
                    expand(std::move(copy));
                }
                b.todo.push_back(rest.back());
                break;
            }
            case Op::next: b.cover.next.insert(n.a); break;
            case Op::globally:
                b.todo.push_back(n.a);
                b.cover.next.insert(id);
                break;
            case Op::finally:
            case Op::until: {
                const int goal = n.op == Op::finally ? n.a : n.b;
                const int bit = c_.eventuality_bit(id);
                if (b.done.count(goal)) break;
                Branch later = b;
                if (n.op == Op::until) later.todo.push_back(n.a);
                later.cover.next.insert(id);
                later.cover.postponed |= std::uint64_t{1} << bit;
                expand(std::move(later));
                b.todo.push_back(goal);
                break;
            }
            case Op::weak_until: {
                if (b.done.count(n.b)) break;
                Branch later = b;
                later.todo.push_back(n.a);
                later.cover.next.insert(id);
                expand(std::move(later));
                b.todo.push_back(n.b);
                break;
            }
            default: throw Error("tableau: unexpected operator in " + n.formula.to_string());
            }
        }
        finish(std::move(b));
    }

    void finish(Branch b) {
        std::vector<Formula> parts;
        for (int p : b.cover.props) parts.push_back(c_[p].formula);
        if (!parts.empty() && !satisfiable(Formula::conj_all(parts))) return;
        out_.push_back(std::move(b.cover));
    }

    Closure& c_;
    std::vector<Cover> out_;
};

}  // namespace

namespace {

// Iterative Tarjan; returns component id per vertex.
std::vector<int> scc_ids(int n, const std::vector<std::vector<int>>& succ, int& count) {
    std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0), comp(static_cast<std::size_t>(n), -1);
    std::vector<int> stack;
    std::vector<bool> on(static_cast<std::size_t>(n), false);
    int next = 0;
    count = 0;
    for (int root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] >= 0) continue;
        std::vector<std::pair<int, std::size_t>> call{{root, 0}};
        index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = next++;
        stack.push_back(root);
        on[static_cast<std::size_t>(root)] = true;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            const auto& sv = succ[static_cast<std::size_t>(v)];
            if (pos < sv.size()) {
                const int w = sv[pos++];
                if (index[static_cast<std::size_t>(w)] < 0) {
                    index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = next++;
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
                    comp[static_cast<std::size_t>(w)] = count;
                } while (w != done);
                ++count;
            }
        }
    }
    return comp;
}

std::vector<int> scc_ids(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& [x, y] : edges) adj[static_cast<std::size_t>(x)].push_back(y);
    int count = 0;
    return scc_ids(n, adj, count);
}

}  // namespace

Gba reduce_acceptance(Gba g) {
    if (g.num_sets == 0) return g;
    const std::uint64_t all = g.num_sets == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << g.num_sets) - 1);
    std::vector<std::pair<int, int>> pairs;
    for (const auto& e : g.edges) pairs.emplace_back(e.src, e.dst);
    const auto comp = scc_ids(g.num_states, pairs);
    // edges leaving their SCC lie on no cycle
    for (auto& e : g.edges)
        if (comp[static_cast<std::size_t>(e.src)] != comp[static_cast<std::size_t>(e.dst)]) e.marks = all;
    std::vector<std::vector<bool>> columns;
    std::vector<int> keep;
    for (int s = 0; s < g.num_sets; ++s) {
        std::vector<bool> col;
        bool full = true;
        for (const auto& e : g.edges) {
            col.push_back((e.marks >> s) & 1);
            full = full && col.back();
        }
        if (full || std::find(columns.begin(), columns.end(), col) != columns.end()) continue;
        columns.push_back(col);
        keep.push_back(s);
    }
    for (auto& e : g.edges) {
        std::uint64_t m = 0;
        for (std::size_t k = 0; k < keep.size(); ++k)
            if ((e.marks >> keep[k]) & 1) m |= std::uint64_t{1} << k;
        e.marks = m;
    }
    std::uint64_t im = 0;
    for (std::size_t k = 0; k < keep.size(); ++k)
        if ((g.initial_marks >> keep[k]) & 1) im |= std::uint64_t{1} << k;
    g.initial_marks = im;
    g.num_sets = static_cast<int>(keep.size());
    return g;
}

Gba ltl_to_gba(const Formula& input) {
    const Formula f = simplify(to_nnf(expand_counted_until(input)));
    Closure c;
    Tableau t(c);
    const int root = c.intern(f);

    std::map<std::vector<int>, int> state_ids;
    std::vector<std::vector<int>> states;
    auto state_of = [&](std::vector<int> key) {
        key.erase(std::remove_if(key.begin(), key.end(), [&](int id) { return c[id].op == Op::true_; }), key.end());
        // chi is redundant next to G chi: the expansion of G chi yields it again
        std::set<int> under_g;
        for (int id : key)
            if (c[id].op == Op::globally) under_g.insert(c[id].a);
        key.erase(std::remove_if(key.begin(), key.end(), [&](int id) { return under_g.count(id) > 0; }), key.end());
        std::sort(key.begin(), key.end());
        auto it = state_ids.find(key);
        if (it != state_ids.end()) return it->second;
        const int id = static_cast<int>(states.size());
        state_ids.emplace(key, id);
        states.push_back(std::move(key));
        return id;
    };

    struct RawEdge {
        int src;
        Formula label;
        int dst;
        std::uint64_t postponed;
    };
    std::vector<RawEdge> raw;
    Gba g;
    g.initial = state_of({root});
    for (std::size_t s = 0; s < states.size(); ++s) {
        const auto obligations = states[s];
        for (const auto& cover : t.covers(obligations)) {
            std::vector<Formula> parts;
            for (int p : cover.props) parts.push_back(c[p].formula);
            const int dst = state_of(std::vector<int>(cover.next.begin(), cover.next.end()));
            raw.push_back({static_cast<int>(s), simplify(Formula::conj_all(parts)), dst, cover.postponed});
        }
    }
    g.num_states = static_cast<int>(states.size());
    g.num_sets = c.num_bits();
    const std::uint64_t all = g.num_sets == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << g.num_sets) - 1);
    // Merge parallel edges with equal marks.
    std::map<std::tuple<int, int, std::uint64_t>, std::size_t> merged;
    for (const auto& e : raw) {
        const std::uint64_t marks = all & ~e.postponed;
        auto key = std::make_tuple(e.src, e.dst, marks);
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(key, g.edges.size());
            g.edges.push_back({e.src, e.label, e.dst, marks});
        } else {
            auto& ex = g.edges[it->second];
            ex.label = simplify(Formula::disj(ex.label, e.label));
        }
    }
    g.initial_marks = 0;
    return reduce_acceptance(std::move(g));
}

Nba degeneralize(const Gba& g) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& e : g.edges) pairs.emplace_back(e.src, e.dst);
    const auto comp = scc_ids(g.num_states, pairs);
    const int ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    // per SCC: the sets some internal edge misses, and whether it has a cycle
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(ncomp));
    std::vector<bool> cyclic(static_cast<std::size_t>(ncomp), false);
    {
        const std::uint64_t all = g.num_sets == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << g.num_sets) - 1);
        std::vector<std::uint64_t> missing(static_cast<std::size_t>(ncomp), 0), present(static_cast<std::size_t>(ncomp), 0);
        for (const auto& e : g.edges) {
            const auto c = static_cast<std::size_t>(comp[static_cast<std::size_t>(e.src)]);
            if (comp[static_cast<std::size_t>(e.dst)] != static_cast<int>(c)) continue;
            cyclic[c] = true;
            missing[c] |= ~e.marks;
            present[c] |= e.marks;
        }
        for (std::size_t c = 0; c < sets.size(); ++c) {
            // a set no internal edge carries: no accepting cycle here, no levels needed
            if ((all & ~present[c]) != 0) {
                cyclic[c] = false;
                continue;
            }
            for (int u = 0; u < g.num_sets; ++u)
                if ((missing[c] >> u) & 1) sets[c].push_back(u);
        }
    }
    auto scc_of = [&](int q) { return static_cast<std::size_t>(comp[static_cast<std::size_t>(q)]); };
    auto jump = [&](int q, int level, std::uint64_t marks) {
        const auto& order = sets[scc_of(q)];
        const int k = static_cast<int>(order.size());
        if (level == k) level = 0;
        while (level < k && ((marks >> order[static_cast<std::size_t>(level)]) & 1)) ++level;
        return level;
    };
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(g.num_states));
    for (std::size_t e = 0; e < g.edges.size(); ++e) out[static_cast<std::size_t>(g.edges[e].src)].push_back(e);

    Nba n;
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> todo;
    auto id_of = [&](int q, int level) {
        auto key = std::make_pair(q, level);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        const int id = static_cast<int>(todo.size());
        ids.emplace(key, id);
        todo.push_back(key);
        const auto c = scc_of(q);
        n.accepting.push_back(cyclic[c] && level == static_cast<int>(sets[c].size()));
        return id;
    };
    if (g.num_states == 0) return n;
    n.initial.push_back(id_of(g.initial, jump(g.initial, 0, g.initial_marks)));
    for (std::size_t s = 0; s < todo.size(); ++s) {
        const auto [q, level] = todo[s];
        for (std::size_t e : out[static_cast<std::size_t>(q)]) {
            const auto& edge = g.edges[e];
            const int next = scc_of(edge.dst) == scc_of(q) ? jump(q, level, edge.marks) : jump(edge.dst, 0, edge.marks);
            n.edges.push_back({static_cast<int>(s), edge.label, id_of(edge.dst, next)});
        }
    }
    n.num_states = static_cast<int>(todo.size());
    return n;
}



Nba trim(const Nba& a) {
    const auto n = static_cast<std::size_t>(a.num_states);
    std::vector<std::vector<int>> succ(n), pred(n);
    for (const auto& e : a.edges) {
        if (e.label.op() == Op::false_) continue;
        succ[static_cast<std::size_t>(e.src)].push_back(e.dst);
        pred[static_cast<std::size_t>(e.dst)].push_back(e.src);
    }
    std::vector<bool> reach(n, false);
    std::deque<int> q(a.initial.begin(), a.initial.end());
    for (int s : a.initial) reach[static_cast<std::size_t>(s)] = true;
    while (!q.empty()) {
        const int s = q.front();
        q.pop_front();
        for (int t : succ[static_cast<std::size_t>(s)])
            if (!reach[static_cast<std::size_t>(t)]) {
                reach[static_cast<std::size_t>(t)] = true;
                q.push_back(t);
            }
    }
    int count = 0;
    const auto comp = scc_ids(a.num_states, succ, count);
    // Accepting state on a cycle.
    std::vector<bool> good_comp(static_cast<std::size_t>(count), false);
    std::vector<int> comp_size(static_cast<std::size_t>(count), 0);
    for (std::size_t s = 0; s < n; ++s) ++comp_size[static_cast<std::size_t>(comp[s])];
    for (std::size_t s = 0; s < n; ++s) {
        if (!a.accepting[s]) continue;
        bool cyclic = comp_size[static_cast<std::size_t>(comp[s])] > 1;
        for (int t : succ[s]) cyclic = cyclic || static_cast<std::size_t>(t) == s;
        if (cyclic) good_comp[static_cast<std::size_t>(comp[s])] = true;
    }
    std::vector<bool> live(n, false);
    for (std::size_t s = 0; s < n; ++s)
        if (good_comp[static_cast<std::size_t>(comp[s])]) {
            live[s] = true;
            q.push_back(static_cast<int>(s));
        }
    while (!q.empty()) {
        const int s = q.front();
        q.pop_front();
        for (int t : pred[static_cast<std::size_t>(s)])
            if (!live[static_cast<std::size_t>(t)]) {
                live[static_cast<std::size_t>(t)] = true;
                q.push_back(t);
            }
    }
    std::vector<int> rename(n, -1);
    Nba out;
    for (std::size_t s = 0; s < n; ++s)
        if (reach[s] && live[s]) {
            rename[s] = out.num_states++;
            out.accepting.push_back(a.accepting[s]);
        }
    for (int s : a.initial)
        if (rename[static_cast<std::size_t>(s)] >= 0) out.initial.push_back(rename[static_cast<std::size_t>(s)]);
    for (const auto& e : a.edges) {
        const int s = rename[static_cast<std::size_t>(e.src)], t = rename[static_cast<std::size_t>(e.dst)];
        if (s >= 0 && t >= 0 && e.label.op() != Op::false_) out.edges.push_back({s, e.label, t});
    }
    return out;
}

Nba ltl_to_nba(const Formula& f) { return trim(degeneralize(ltl_to_gba(f))); }

bool accepts_lasso(const Nba& a, const std::vector<NamedLetter>& prefix, const std::vector<NamedLetter>& loop) {
    if (loop.empty()) throw Error("accepts_lasso: loop must be nonempty");
    const LassoShape shape{prefix.size(), loop.size()};
    const std::size_t len = shape.size();
    auto letter = [&](std::size_t pos) -> const NamedLetter& {
        return pos < prefix.size() ? prefix[pos] : loop[pos - prefix.size()];
    };
    const auto out = a.out_edges();
    const int nodes = a.num_states * static_cast<int>(len);
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(nodes));
    for (int q = 0; q < a.num_states; ++q)
        for (std::size_t p = 0; p < len; ++p)
            for (int e : out[static_cast<std::size_t>(q)]) {
                const auto& edge = a.edges[static_cast<std::size_t>(e)];
                if (eval_label(edge.label, letter(p)))
                    succ[static_cast<std::size_t>(q) * len + p].push_back(edge.dst * static_cast<int>(len) + static_cast<int>(shape.succ(p)));
            }
    std::vector<bool> reach(static_cast<std::size_t>(nodes), false);
    std::deque<int> q;
    for (int s : a.initial) {
        reach[static_cast<std::size_t>(s) * len] = true;
        q.push_back(s * static_cast<int>(len));
    }
    while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        for (int w : succ[static_cast<std::size_t>(v)])
            if (!reach[static_cast<std::size_t>(w)]) {
                reach[static_cast<std::size_t>(w)] = true;
                q.push_back(w);
            }
    }
    int count = 0;
    const auto comp = scc_ids(nodes, succ, count);
    std::vector<int> size(static_cast<std::size_t>(count), 0);
    for (int v = 0; v < nodes; ++v) ++size[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])];
    for (int v = 0; v < nodes; ++v) {
        if (!reach[static_cast<std::size_t>(v)] || !a.accepting[static_cast<std::size_t>(v) / len]) continue;
        if (size[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] > 1) return true;
        for (int w : succ[static_cast<std::size_t>(v)])
            if (w == v) return true;
    }
    return false;
}

std::string write_automaton(const Nba& a) {
    std::ostringstream os;
    os << "states " << a.num_states << "\ninitial";
    for (int s : a.initial) os << ' ' << s;
    os << "\naccepting";
    for (int s = 0; s < a.num_states; ++s)
        if (a.accepting[static_cast<std::size_t>(s)]) os << ' ' << s;
    os << '\n';
    for (const auto& e : a.edges) os << "edge " << e.src << ' ' << e.dst << ' ' << e.label.to_string() << '\n';
    return os.str();
}

Nba read_automaton(const std::string& text) {
    Nba a;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_states = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "states") {
            if (!(ls >> a.num_states) || a.num_states < 0) throw ParseError("bad state count", line_no, 1);
            a.accepting.assign(static_cast<std::size_t>(a.num_states), false);
            have_states = true;
            continue;
        }
        if (!have_states) throw ParseError("'states' must come first", line_no, 1);
        auto check = [&](int s) {
            if (s < 0 || s >= a.num_states) throw ParseError("state out of range", line_no, 1);
            return s;
        };
        if (kw == "initial") {
            for (int s; ls >> s;) a.initial.push_back(check(s));
        } else if (kw == "accepting") {
            for (int s; ls >> s;) a.accepting[static_cast<std::size_t>(check(s))] = true;
        } else if (kw == "edge") {
            int s = 0, t = 0;
            if (!(ls >> s >> t)) throw ParseError("edge needs source and target", line_no, 1);
            std::string rest;
            std::getline(ls, rest);
            ParseContext ctx;
            ctx.line = line_no;
            a.edges.push_back({check(s), parse_ltl(rest, ctx), check(t)});
        } else {
            throw ParseError("unknown keyword '" + kw + "'", line_no, 1);
        }
    }
    return a;
}

std::vector<int> state_sccs(const Nba& a) {
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(a.num_states));
    for (const auto& e : a.edges) succ[static_cast<std::size_t>(e.src)].push_back(e.dst);
    int count = 0;
    return scc_ids(a.num_states, succ, count);
}

}  // namespace ringsynth

#include "ringsynth/smt.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <unordered_map>

namespace ringsynth {

SExpr SExpr::list(std::vector<SExpr> items) {
    SExpr e;
    e.is_list = true;
    e.items = std::move(items);
    return e;
}

namespace {

void print(const SExpr& e, std::string& out) {
    if (e.is_atom()) {
        out += e.atom;
        return;
    }
    out += '(';
    for (std::size_t k = 0; k < e.items.size(); ++k) {
        if (k) out += ' ';
        print(e.items[k], out);
    }
    out += ')';
}

}  // namespace

std::string SExpr::to_string() const {
    std::string out;
    print(*this, out);
    return out;
}

SExpr sx(std::initializer_list<SExpr> items) { return SExpr::list(std::vector<SExpr>(items)); }

SExpr sx_int(std::int64_t v) {
    if (v < 0) return sx({"-", std::to_string(-v)});
    return SExpr(std::to_string(v));
}

SExpr sx_and(std::vector<SExpr> xs) {
    std::vector<SExpr> keep;
    for (auto& x : xs) {
        if (x.is_atom() && x.atom == "false") return SExpr("false");
        if (x.is_atom() && x.atom == "true") continue;
        keep.push_back(std::move(x));
    }
    if (keep.empty()) return SExpr("true");
    if (keep.size() == 1) return keep.front();
    keep.insert(keep.begin(), SExpr("and"));
    return SExpr::list(std::move(keep));
}

SExpr sx_or(std::vector<SExpr> xs) {
    std::vector<SExpr> keep;
    for (auto& x : xs) {
        if (x.is_atom() && x.atom == "true") return SExpr("true");
        if (x.is_atom() && x.atom == "false") continue;
        keep.push_back(std::move(x));
    }
    if (keep.empty()) return SExpr("false");
    if (keep.size() == 1) return keep.front();
    keep.insert(keep.begin(), SExpr("or"));
    return SExpr::list(std::move(keep));
}

SExpr sx_not(SExpr x) {
    if (x.is_atom() && x.atom == "true") return SExpr("false");
    if (x.is_atom() && x.atom == "false") return SExpr("true");
    if (x.is_list && x.size() == 2 && x[0].atom == "not") return x[1];
    return sx({"not", std::move(x)});
}

std::vector<SExpr> parse_sexprs(const std::string& text) {
    std::vector<SExpr> top;
    std::vector<SExpr> stack;
    std::size_t k = 0;
    auto push = [&](SExpr e) {
        if (stack.empty()) top.push_back(std::move(e));
        else stack.back().items.push_back(std::move(e));
    };
    while (k < text.size()) {
        const char c = text[k];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++k;
        } else if (c == ';') {
            while (k < text.size() && text[k] != '\n') ++k;
        } else if (c == '(') {
            stack.push_back(SExpr::list({}));
            ++k;
        } else if (c == ')') {
            if (stack.empty()) throw Error("s-expression: unbalanced ')' at offset " + std::to_string(k));
            SExpr done = std::move(stack.back());
            stack.pop_back();
            push(std::move(done));
            ++k;
        } else if (c == '|' || c == '"') {
            const auto end = text.find(c, k + 1);
            if (end == std::string::npos) throw Error("s-expression: unterminated quote");
            push(SExpr(text.substr(k, end - k + 1)));
            k = end + 1;
        } else {
            std::size_t e = k;
            while (e < text.size() && !std::isspace(static_cast<unsigned char>(text[e])) && text[e] != '(' &&
                   text[e] != ')' && text[e] != ';')
                ++e;
            push(SExpr(text.substr(k, e - k)));
            k = e;
        }
    }
    if (!stack.empty()) throw Error("s-expression: missing ')'");
    return top;
}

std::size_t FunDecl::domain_size() const {
    std::size_t n = 1;
    for (const auto& [lo, hi] : domain) n *= static_cast<std::size_t>(hi - lo + 1);
    return n;
}

namespace {

template <class Fn>
void for_each_point(const FunDecl& f, Fn&& fn) {
    std::vector<std::int64_t> args;
    for (const auto& d : f.domain) {
        if (d.second < d.first) return;
        args.push_back(d.first);
    }
    while (true) {
        fn(args);
        std::size_t k = args.size();
        while (k > 0) {
            --k;
            if (++args[k] <= f.domain[k].second) break;
            args[k] = f.domain[k].first;
            if (k == 0) return;
        }
        if (args.empty()) return;
    }
}

SExpr call(const std::string& name, const std::vector<std::int64_t>& args) {
    if (args.empty()) return SExpr(name);
    std::vector<SExpr> items{SExpr(name)};
    for (auto a : args) items.push_back(sx_int(a));
    return SExpr::list(std::move(items));
}

}  // namespace

const FunDecl* SmtProblem::find(const std::string& name) const {
    for (const auto& f : functions)
        if (f.name == name) return &f;
    return nullptr;
}

std::vector<SExpr> SmtProblem::range_assertions() const {
    std::vector<SExpr> out;
    for (const auto& f : functions) {
        if (f.is_bool || !f.range) continue;
        for_each_point(f, [&](const std::vector<std::int64_t>& args) {
            const SExpr c = call(f.name, args);
            out.push_back(sx({"and", sx({"<=", sx_int(f.range->first), c}), sx({"<=", c, sx_int(f.range->second)})}));
        });
    }
    return out;
}

std::string SmtProblem::to_smtlib() const {
    std::string out;
    for (const auto& c : header_comments) out += "; " + c + "\n";
    out += "(set-option :produce-models true)\n";
    out += "(set-logic " + logic + ")\n";
    for (const auto& f : functions) {
        out += "(declare-fun " + f.name + " (";
        for (std::size_t k = 0; k < f.domain.size(); ++k) out += k ? " Int" : "Int";
        out += std::string(") ") + (f.is_bool ? "Bool" : "Int") + ")\n";
    }
    for (const auto& a : range_assertions()) out += "(assert " + a.to_string() + ")\n";
    for (const auto& a : assertions) out += "(assert " + a.to_string() + ")\n";
    out += "(check-sat)\n(get-model)\n(exit)\n";
    return out;
}

std::int64_t SmtModel::value(const std::string& fn, const std::vector<std::int64_t>& args) const {
    const auto t = tables_.find(fn);
    if (t == tables_.end()) throw Error("model has no function '" + fn + "'");
    const auto v = t->second.find(args);
    if (v == t->second.end()) throw Error("model function '" + fn + "' undefined at a domain point");
    return v->second;
}

namespace {

struct Definition {
    std::vector<std::string> params;
    SExpr body;
};

class Evaluator {
public:
    Evaluator(const std::map<std::string, Definition>* defs, const SmtModel* model, const SmtProblem* problem)
        : defs_(defs), model_(model), problem_(problem) {}

    std::int64_t eval(const SExpr& e, const std::unordered_map<std::string, std::int64_t>& env, int depth = 0) {
        if (depth > 10000) throw Error("model evaluation: recursion too deep");
        if (e.is_atom()) return atom(e.atom, env, depth);
        if (e.items.empty()) throw Error("model evaluation: empty list");
        if (e[0].is_list) {
            // ((as const ...) ...) and similar are not needed for our sorts
            throw Error("model evaluation: unsupported term " + e.to_string());
        }
        const std::string& h = e[0].atom;
        const std::size_t n = e.size();
        auto arg = [&](std::size_t k) { return eval(e[k], env, depth + 1); };
        if (h == "let") {
            auto inner = env;
            for (const auto& b : e[1].items) inner[b[0].atom] = eval(b[1], env, depth + 1);
            return eval(e[2], inner, depth + 1);
        }
        if (h == "ite") return arg(1) ? arg(2) : arg(3);
        if (h == "and") {
            for (std::size_t k = 1; k < n; ++k)
                if (!arg(k)) return 0;
            return 1;
        }
        if (h == "or") {
            for (std::size_t k = 1; k < n; ++k)
                if (arg(k)) return 1;
            return 0;
        }
        if (h == "not") return !arg(1);
        if (h == "=>") {
            // right associative
            for (std::size_t k = 1; k + 1 < n; ++k)
                if (!arg(k)) return 1;
            return arg(n - 1) != 0;
        }
        if (h == "xor") {
            std::int64_t v = 0;
            for (std::size_t k = 1; k < n; ++k) v ^= arg(k) != 0;
            return v;
        }
        if (h == "=" || h == "<" || h == "<=" || h == ">" || h == ">=") {
            std::int64_t prev = arg(1);
            for (std::size_t k = 2; k < n; ++k) {
                const std::int64_t cur = arg(k);
                bool ok = h == "=" ? prev == cur : h == "<" ? prev < cur : h == "<=" ? prev <= cur : h == ">" ? prev > cur : prev >= cur;
                if (!ok) return 0;
                prev = cur;
            }
            return 1;
        }
        if (h == "distinct") {
            std::vector<std::int64_t> vs;
            for (std::size_t k = 1; k < n; ++k) vs.push_back(arg(k));
            for (std::size_t a = 0; a < vs.size(); ++a)
                for (std::size_t b = a + 1; b < vs.size(); ++b)
                    if (vs[a] == vs[b]) return 0;
            return 1;
        }
        if (h == "+") {
            std::int64_t v = 0;
            for (std::size_t k = 1; k < n; ++k) v += arg(k);
            return v;
        }
        if (h == "-") {
            if (n == 2) return -arg(1);
            std::int64_t v = arg(1);
            for (std::size_t k = 2; k < n; ++k) v -= arg(k);
            return v;
        }
        if (h == "*") {
            std::int64_t v = 1;
            for (std::size_t k = 1; k < n; ++k) v *= arg(k);
            return v;
        }
        if (h == "abs") return std::llabs(arg(1));
        if (h == "!") return arg(1);  // annotations
        std::vector<std::int64_t> args;
        for (std::size_t k = 1; k < n; ++k) args.push_back(arg(k));
        return apply(h, args, depth);
    }

private:
    std::int64_t atom(const std::string& a, const std::unordered_map<std::string, std::int64_t>& env, int depth) {
        if (a == "true") return 1;
        if (a == "false") return 0;
        if (!a.empty() && std::isdigit(static_cast<unsigned char>(a[0]))) return std::stoll(a);
        if (auto it = env.find(a); it != env.end()) return it->second;
        return apply(a, {}, depth);
    }

    std::int64_t apply(const std::string& name, const std::vector<std::int64_t>& args, int depth) {
        if (defs_) {
            if (auto d = defs_->find(name); d != defs_->end()) {
                if (d->second.params.size() != args.size()) throw Error("model evaluation: arity mismatch for " + name);
                std::unordered_map<std::string, std::int64_t> env;
                for (std::size_t k = 0; k < args.size(); ++k) env[d->second.params[k]] = args[k];
                return eval(d->second.body, env, depth + 1);
            }
        }
        if (model_ && model_->has(name)) {
            const FunDecl* f = problem_ ? problem_->find(name) : nullptr;
            if (f)
                for (std::size_t k = 0; k < args.size() && k < f->domain.size(); ++k)
                    if (args[k] < f->domain[k].first || args[k] > f->domain[k].second)
                        throw Error("model evaluation: " + name + " applied outside its domain");
            return model_->value(name, args);
        }
        throw Error("model evaluation: unknown symbol '" + name + "'");
    }

    const std::map<std::string, Definition>* defs_;
    const SmtModel* model_;
    const SmtProblem* problem_;
};

std::int64_t default_value(const FunDecl& f) {
    if (f.is_bool) return 0;
    if (f.range) return f.range->first;
    return 0;
}

}  // namespace

SmtModel parse_model(const std::string& text, const SmtProblem& problem, const ModelOptions& opt) {
    auto exprs = parse_sexprs(text);
    std::vector<SExpr> defs_raw;
    auto take = [&](const SExpr& e) {
        if (e.is_list && !e.items.empty() && e[0].is_atom() && e[0].atom == "define-fun") defs_raw.push_back(e);
    };
    for (const auto& e : exprs) {
        if (!e.is_list) {
            if (e.atom == "sat") continue;
            throw Error("model: unexpected token '" + e.atom + "'");
        }
        if (!e.items.empty() && e[0].is_atom() && e[0].atom == "error") throw Error("model: solver error " + e.to_string());
        take(e);
        for (const auto& x : e.items) take(x);
    }
    std::map<std::string, Definition> defs;
    for (const auto& d : defs_raw) {
        if (d.size() != 5) throw Error("model: malformed define-fun " + d.to_string());
        Definition def;
        for (const auto& p : d[2].items) def.params.push_back(p[0].atom);
        def.body = d[4];
        defs[d[1].atom] = std::move(def);
    }
    SmtModel model;
    Evaluator ev(&defs, nullptr, nullptr);
    for (const auto& f : problem.functions) {
        const auto d = defs.find(f.name);
        if (d == defs.end()) {
            if ((f.is_bool && !opt.default_missing_bool) || (!f.is_bool && !opt.default_missing_int))
                throw Error("model: missing function '" + f.name + "'");
            for_each_point(f, [&](const std::vector<std::int64_t>& args) { model.set(f.name, args, default_value(f)); });
            continue;
        }
        if (d->second.params.size() != f.domain.size()) throw Error("model: arity mismatch for '" + f.name + "'");
        for_each_point(f, [&](const std::vector<std::int64_t>& args) {
            std::int64_t v = ev.eval(SExpr::list([&] {
                                         std::vector<SExpr> items{SExpr(f.name)};
                                         for (auto a : args) items.push_back(sx_int(a));
                                         return items;
                                     }()),
                                     {});
            if (f.is_bool) v = v != 0;
            else if (f.range && (v < f.range->first || v > f.range->second))
                throw Error("model: " + f.name + " out of range (" + std::to_string(v) + ")");
            model.set(f.name, args, v);
        });
    }
    return model;
}

std::int64_t eval_term(const SExpr& e, const SmtModel& model, const SmtProblem& problem) {
    Evaluator ev(nullptr, &model, &problem);
    return ev.eval(e, {});
}

std::vector<std::size_t> failing_assertions(const SmtProblem& problem, const SmtModel& model) {
    std::vector<std::size_t> bad;
    Evaluator ev(nullptr, &model, &problem);
    std::size_t k = 0;
    for (const auto& a : problem.range_assertions()) {
        if (!ev.eval(a, {})) bad.push_back(k);
        ++k;
    }
    for (const auto& a : problem.assertions) {
        if (!ev.eval(a, {})) bad.push_back(k);
        ++k;
    }
    return bad;
}

const char* to_string(SolverVerdict v) {
    switch (v) {
    case SolverVerdict::sat: return "sat";
    case SolverVerdict::unsat: return "unsat";
    case SolverVerdict::unknown: return "unknown";
    case SolverVerdict::timeout: return "timeout";
    case SolverVerdict::error: return "error";
    }
    return "?";
}

std::string default_solver_command() {
    if (const char* s = std::getenv("RINGSYNTH_SOLVER"); s && *s) return s;
    return "z3 -in -smt2";
}

SolverResult run_solver(const std::string& script, const std::string& command, std::chrono::milliseconds timeout) {
    SolverResult res;
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    std::vector<std::string> argv_s;
    {
        std::istringstream in(command);
        std::string w;
        while (in >> w) argv_s.push_back(w);
    }
    if (argv_s.empty()) {
        res.diagnostics = "empty solver command";
        return res;
    }
    std::signal(SIGPIPE, SIG_IGN);
    int in_pipe[2], out_pipe[2], err_pipe[2];
    if (pipe(in_pipe) || pipe(out_pipe) || pipe(err_pipe)) {
        res.diagnostics = std::string("pipe: ") + std::strerror(errno);
        return res;
    }
    const pid_t pid = fork();
    if (pid < 0) {
        res.diagnostics = std::string("fork: ") + std::strerror(errno);
        return res;
    }
    if (pid == 0) {
        dup2(in_pipe[0], 0);
        dup2(out_pipe[1], 1);
        dup2(err_pipe[1], 2);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) close(fd);
        std::vector<char*> argv;
        for (auto& s : argv_s) argv.push_back(s.data());
        argv.push_back(nullptr);
        execvp(argv[0], argv.data());
        std::fprintf(stderr, "cannot execute %s: %s\n", argv[0], std::strerror(errno));
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[1]);
    for (int fd : {in_pipe[1], out_pipe[0], err_pipe[0]}) fcntl(fd, F_SETFL, fcntl(fd, F_GETFL) | O_NONBLOCK);

    std::string out, err;
    std::size_t written = 0;
    int in_fd = in_pipe[1];
    bool out_open = true, err_open = true, timed_out = false;
    if (script.empty()) {
        close(in_fd);
        in_fd = -1;
    }
    char buf[1 << 16];
    while (out_open || err_open) {
        int wait_ms = -1;
        if (timeout.count() > 0) {
            const double left = static_cast<double>(timeout.count()) - elapsed() * 1000.0;
            if (left <= 0) {
                timed_out = true;
                break;
            }
            wait_ms = static_cast<int>(left) + 1;
        }
        pollfd fds[3];
        int nfds = 0;
        int idx_in = -1, idx_out = -1, idx_err = -1;
        if (in_fd >= 0) {
            idx_in = nfds;
            fds[nfds++] = {in_fd, POLLOUT, 0};
        }
        if (out_open) {
            idx_out = nfds;
            fds[nfds++] = {out_pipe[0], POLLIN, 0};
        }
        if (err_open) {
            idx_err = nfds;
            fds[nfds++] = {err_pipe[0], POLLIN, 0};
        }
        const int r = poll(fds, static_cast<nfds_t>(nfds), wait_ms);
        if (r < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (r == 0) continue;
        if (idx_in >= 0 && fds[idx_in].revents) {
            if (fds[idx_in].revents & (POLLERR | POLLHUP)) {
                close(in_fd);
                in_fd = -1;
            } else {
                const ssize_t w = write(in_fd, script.data() + written, script.size() - written);
                if (w > 0) written += static_cast<std::size_t>(w);
                else if (w < 0 && errno != EAGAIN) {
                    close(in_fd);
                    in_fd = -1;
                }
                if (in_fd >= 0 && written == script.size()) {
                    close(in_fd);
                    in_fd = -1;
                }
            }
        }
        auto drain = [&](int idx, int fd, std::string& dst, bool& open) {
            if (idx < 0 || !fds[idx].revents) return;
            const ssize_t k = read(fd, buf, sizeof buf);
            if (k > 0) dst.append(buf, static_cast<std::size_t>(k));
            else if (k == 0 || errno != EAGAIN) open = false;
        };
        drain(idx_out, out_pipe[0], out, out_open);
        drain(idx_err, err_pipe[0], err, err_open);
    }
    if (in_fd >= 0) close(in_fd);
    close(out_pipe[0]);
    close(err_pipe[0]);
    if (timed_out) kill(pid, SIGKILL);
    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    res.seconds = elapsed();
    res.diagnostics = err;
    if (timed_out) {
        res.verdict = SolverVerdict::timeout;
        return res;
    }
    if (WIFSIGNALED(status)) {
        res.verdict = SolverVerdict::error;
        res.diagnostics += "solver killed by signal " + std::to_string(WTERMSIG(status));
        return res;
    }
    // first token is the verdict
    std::size_t p = out.find_first_not_of(" \t\r\n");
    std::size_t e = p == std::string::npos ? p : out.find_first_of(" \t\r\n(", p);
    const std::string head = p == std::string::npos ? "" : out.substr(p, e == std::string::npos ? std::string::npos : e - p);
    const std::string rest = e == std::string::npos ? "" : out.substr(e);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (head == "unsat") {
        // get-model after unsat is an error by design
        res.verdict = SolverVerdict::unsat;
    } else if (head == "sat" && out.find("(error") == std::string::npos && code == 0) {
        res.verdict = SolverVerdict::sat;
        res.model_text = rest;
    } else if (head == "unknown") {
        res.verdict = SolverVerdict::unknown;
        res.diagnostics += rest;
    } else {
        res.verdict = SolverVerdict::error;
        res.diagnostics += "exit status " + std::to_string(code) + "; output: " + out.substr(0, 2000);
    }
    return res;
}

SExpr to_sexpr(const Formula& f, const std::function<SExpr(const SignalRef&)>& atom) {
    switch (f.op()) {
    case Op::true_: return SExpr("true");
    case Op::false_: return SExpr("false");
    case Op::atom: return atom(f.signal());
    case Op::not_: return sx_not(to_sexpr(f.lhs(), atom));
    case Op::and_: return sx_and({to_sexpr(f.lhs(), atom), to_sexpr(f.rhs(), atom)});
    case Op::or_: return sx_or({to_sexpr(f.lhs(), atom), to_sexpr(f.rhs(), atom)});
    case Op::implies: return sx_or({sx_not(to_sexpr(f.lhs(), atom)), to_sexpr(f.rhs(), atom)});
    case Op::iff: return sx({"=", to_sexpr(f.lhs(), atom), to_sexpr(f.rhs(), atom)});
    default: throw Error("to_sexpr: temporal operator in " + f.to_string());
    }
}

}  // namespace ringsynth

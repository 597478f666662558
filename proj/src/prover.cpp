#include "lnif/prover.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <future>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "lnif/serialize.hpp"
#include "lnif/transform.hpp"

namespace lnif {

const char* failure_name(Failure f) { return f == Failure::DepthExceeded ? "DepthExceeded" : "Saturated"; }

namespace {

bool on_off(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw InputError("config key '" + key + "' expects on or off, got '" + v + "'");
}

std::string strip(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::size_t natural(const std::string& key, const std::string& v) {
    if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw InputError("config key '" + key + "' expects a natural number, got '" + v + "'");
    return std::stoul(v);
}

}  // namespace

ProverConfig parse_config(std::string_view text) {
    ProverConfig cfg;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(start, end - start));
        start = end + 1;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = strip(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("config line '" + line + "' is not key=value");
        std::string key = strip(line.substr(0, eq)), value = strip(line.substr(eq + 1));
        if (key == "depth") cfg.depth = natural(key, value);
        else if (key == "witness_cap") cfg.witness_cap = natural(key, value);
        else if (key == "memo") cfg.memo = on_off(key, value);
        else if (key == "parallel") cfg.parallel = on_off(key, value);
        else throw InputError("unknown config key '" + key + "'");
    }
    return cfg;
}

namespace {

std::string side_key(const Multiset& m) {
    std::string s;
    const Formula* prev = nullptr;
    for (const auto& f : m) {
        if (prev && *prev == f) continue;
        s += f.str() + ",";
        prev = &f;
    }
    return s;
}

// Loop-check key: components read as sets, adjacent equal components collapsed
// (G // C // C // H is equivalent to G // C // H over linear frames), and
// parameters renamed in order of first appearance.
std::string canonical_key(const Sequent& g) {
    std::vector<std::string> comps;
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::string c = side_key(g[i].ante) + "|-" + side_key(g[i].cons);
        if (comps.empty() || comps.back() != c) comps.push_back(c);
    }
    std::string s;
    for (const auto& c : comps) s += c + "//";
    std::string out;
    std::map<std::string, std::string> names;
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] != '#') {
            out += s[i++];
            continue;
        }
        std::size_t j = i + 1;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        std::string name = s.substr(i, j - i);
        auto it = names.find(name);
        if (it == names.end()) it = names.emplace(name, "#" + std::to_string(names.size())).first;
        out += it->second;
        i = j;
    }
    return out;
}

struct Outcome {
    Derivation proof;
    Failure failure = Failure::Saturated;
    std::string reason;
};

class Search {
public:
    explicit Search(const ProverConfig& cfg) : cfg_(cfg) {}

    Outcome run(const Sequent& g, std::size_t left, std::unordered_set<std::string>& path, bool parallel) {
        ++explored_;
        if (auto ax = find_axiom(g)) return {make_derivation(g, *ax, {}), {}, {}};
        if (left == 0) return {nullptr, Failure::DepthExceeded, "depth bound reached at " + g.str()};
        std::string key = canonical_key(g);
        if (path.count(key)) return {nullptr, Failure::Saturated, "search revisits " + g.str()};
        std::string exact = g.str();
        if (cfg_.memo) {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(exact);
            if (it != memo_.end()) {
                const Entry& e = it->second;
                if (e.proof && e.proof->height <= left + 1) return {e.proof, {}, {}};
                if (!e.proof && e.failure == Failure::Saturated) return {nullptr, Failure::Saturated, e.reason};
                if (!e.proof && e.failure == Failure::DepthExceeded && e.left >= left)
                    return {nullptr, Failure::DepthExceeded, e.reason};
            }
        }
        auto rule = choose(g);
        if (!rule) return remember(exact, left, {nullptr, Failure::Saturated, "no rule applies to " + g.str()});
        RuleInstance r = *rule;
        std::vector<Sequent> ps = apply_backward(g, r);
        path.insert(key);
        std::vector<Outcome> outs(ps.size());
        if (parallel && ps.size() == 2) {
            auto other = path;
            auto fut = std::async(std::launch::async, [&, other]() mutable { return run(ps[1], left - 1, other, false); });
            outs[0] = run(ps[0], left - 1, path, false);
            outs[1] = fut.get();
        } else {
            for (std::size_t i = 0; i < ps.size(); ++i) {
                outs[i] = run(ps[i], left - 1, path, parallel);
                if (!outs[i].proof) break;
            }
        }
        path.erase(key);
        std::vector<Derivation> subs;
        for (auto& o : outs) {
            if (!o.proof) return remember(exact, left, o);
            subs.push_back(o.proof);
        }
        return remember(exact, left, {make_derivation(g, r, subs), {}, {}});
    }

    std::size_t explored() const { return explored_; }

private:
    struct Entry {
        Derivation proof;
        Failure failure = Failure::Saturated;
        std::size_t left = 0;
        std::string reason;
    };

    const ProverConfig& cfg_;
    std::mutex mu_;
    std::unordered_map<std::string, Entry> memo_;
    std::atomic<std::size_t> explored_{0};

    Outcome remember(const std::string& key, std::size_t left, Outcome o) {
        if (!cfg_.memo) return o;
        std::lock_guard<std::mutex> lock(mu_);
        Entry& e = memo_[key];
        if (o.proof) {
            if (!e.proof || e.proof->height > o.proof->height) e = {o.proof, {}, 0, {}};
        } else if (!e.proof) {
            if (o.failure == Failure::Saturated || e.reason.empty() || e.left < left) e = {nullptr, o.failure, left, o.reason};
        }
        return o;
    }

    static RuleInstance at(RuleTag t, std::size_t i, Side s, const Formula& f) { return rule_at(t, i, s, f); }

    // f follows from the antecedent, so lifting it changes nothing.
    static bool implied(const Formula& f, const Multiset& ante) {
        if (ms_contains(ante, f)) return true;
        switch (f.op()) {
            case Op::And: return implied(f.lhs(), ante) && implied(f.rhs(), ante);
            case Op::Or: return implied(f.lhs(), ante) || implied(f.rhs(), ante);
            case Op::Imp: return implied(f.rhs(), ante);
            case Op::Exists:
                for (const auto& p : params(ante))
                    if (implied(instantiate(f, Term::param(p)), ante)) return true;
                return false;
            default: return false;
        }
    }

    static std::set<std::string> params(const Multiset& m) {
        std::set<std::string> out;
        for (const auto& f : m) collect_params(f, out);
        return out;
    }

    // Every countermodel of g already falsifies f at component i.
    static bool refuted(const Sequent& g, std::size_t i, const Formula& f) {
        switch (f.op()) {
            case Op::Bot: return true;
            case Op::And: return refuted(g, i, f.lhs()) || refuted(g, i, f.rhs());
            case Op::Or: return refuted(g, i, f.lhs()) && refuted(g, i, f.rhs());
            default: break;
        }
        for (std::size_t k = i; k < g.size(); ++k) {
            if (ms_contains(g[k].cons, f)) return true;
            if (f.op() == Op::Imp && refuted(g, k, f.rhs()))
                for (std::size_t j = 0; j <= k; ++j)
                    if (implied(f.lhs(), g[j].ante)) return true;
            if (f.op() == Op::Forall)
                for (const auto& p : params(g[k].cons))
                    if (refuted(g, k, instantiate(f, Term::param(p)))) return true;
        }
        return false;
    }

    static bool refuted_without(const Sequent& g, std::size_t i, const Formula& f) {
        Sequent h = g;
        while (ms_erase(h[i].cons, f)) {
        }
        return refuted(h, i, f);
    }

    // An instance counts as present on the left once the antecedent implies it.
    static bool present(const Multiset& side, const Formula& inst, bool left) {
        return left ? implied(inst, side) : ms_contains(side, inst);
    }

    // Instances of a quantified formula already present next to it.
    std::size_t instances_present(const Multiset& side, const Formula& f, const std::set<std::string>& ps, bool left) const {
        std::size_t n = 0;
        for (const auto& p : ps)
            if (present(side, instantiate(f, Term::param(p)), left)) ++n;
        return n;
    }

    std::optional<RuleInstance> choose(const Sequent& g) const {
        std::size_t n = g.size();
        std::vector<std::vector<Formula>> ante(n), cons(n);
        for (std::size_t i = 0; i < n; ++i) {
            ante[i] = ms_canonical(g[i].ante);
            cons[i] = ms_canonical(g[i].cons);
        }
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& f : ante[i]) {
                if (f.op() == Op::And) return at(RuleTag::AndL, i, Side::L, f);
                if (f.op() == Op::Exists) return at(RuleTag::ExistsL, i, Side::L, f);
            }
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& f : cons[i])
                if (f.op() == Op::Or) return at(RuleTag::OrR, i, Side::R, f);
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (const auto& f : ante[i])
                if (!implied(f, g[i + 1].ante)) return at(RuleTag::Lift, i, Side::L, f);
        std::set<std::string> ps = lnif::params(g);
        auto witness = [&](RuleTag t, std::size_t i, const Formula& f, const Multiset& side, bool fresh) -> std::optional<RuleInstance> {
            bool left = t == RuleTag::ForallL;
            std::size_t have = instances_present(side, f, ps, left);
            if (have >= cfg_.witness_cap) return std::nullopt;
            RuleInstance r = at(t, i, left ? Side::L : Side::R, f);
            if (fresh) {
                if (!ps.empty() && have < ps.size()) return std::nullopt;
                r.witness = fresh_param(ps);
                return r;
            }
            for (const auto& p : ps)
                if (!present(side, instantiate(f, Term::param(p)), left)) {
                    r.witness = p;
                    return r;
                }
            return std::nullopt;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& f : ante[i])
                if (f.op() == Op::Forall)
                    if (auto r = witness(RuleTag::ForallL, i, f, g[i].ante, false)) return r;
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& f : cons[i])
                if (f.op() == Op::Exists)
                    if (auto r = witness(RuleTag::ExistsR, i, f, g[i].cons, false)) return r;
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& f : cons[i])
                if (f.op() == Op::And) return at(RuleTag::AndR, i, Side::R, f);
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& f : ante[i])
                if (f.op() == Op::Or) return at(RuleTag::OrL, i, Side::L, f);
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& f : ante[i])
                if (f.op() == Op::Imp && !implied(f.rhs(), g[i].ante) && !refuted(g, i, f.lhs())) return at(RuleTag::ImpL, i, Side::L, f);
        for (std::size_t i = n; i-- > 0;)
            for (const auto& f : cons[i]) {
                if (!f.is_binary() && !f.is_quant()) continue;
                if (refuted_without(g, i, f)) continue;
                bool last = i + 1 == n;
                if (f.op() == Op::Imp) return at(last ? RuleTag::ImpR1 : RuleTag::ImpR2, i, Side::R, f);
                if (f.op() == Op::Forall) return at(last ? RuleTag::ForallR1 : RuleTag::ForallR2, i, Side::R, f);
            }
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& f : ante[i])
                if (f.op() == Op::Forall)
                    if (auto r = witness(RuleTag::ForallL, i, f, g[i].ante, true)) return r;
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& f : cons[i])
                if (f.op() == Op::Exists)
                    if (auto r = witness(RuleTag::ExistsR, i, f, g[i].cons, true)) return r;
        return std::nullopt;
    }
};

}  // namespace

ProveResult prove(const Sequent& g, const ProverConfig& cfg) {
    Search s(cfg);
    std::unordered_set<std::string> path;
    Outcome o = s.run(g, cfg.depth, path, cfg.parallel);
    ProveResult res;
    res.explored = s.explored();
    if (o.proof) {
        CheckResult c = check_derivation(o.proof, Mode::Official);
        if (!c.ok) throw InternalError("prover built an invalid derivation: " + c.message);
        res.proof = o.proof;
    } else {
        res.failure = o.failure;
        res.reason = o.reason;
    }
    return res;
}

ProveResult prove(const Formula& f, const ProverConfig& cfg) { return prove(Sequent::single({}, {f}), cfg); }

}  // namespace lnif

#include "lnif/semantics.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace lnif {

WorldSet KripkeModel::holds(const AtomKey& k) const {
    auto it = valuation.find(k);
    return it == valuation.end() ? 0 : it->second;
}

void KripkeModel::set(const AtomKey& k, std::size_t world) { valuation[k] |= WorldSet{1} << world; }

bool KripkeModel::monotone() const {
    for (const auto& [k, s] : valuation) {
        if (s == 0) continue;
        WorldSet from = all() & ~((WorldSet{1} << std::countr_zero(s)) - 1);
        if ((s & all()) != from) return false;
    }
    return true;
}

bool KripkeModel::in_domain(const std::string& p) const {
    return std::find(domain.begin(), domain.end(), p) != domain.end();
}

namespace {

// Worlds all of whose successors (including themselves) lie in s.
WorldSet interior(WorldSet s, WorldSet all) {
    WorldSet bad = all & ~s;
    if (bad == 0) return all;
    int hb = 63 - std::countl_zero(bad);
    WorldSet below = hb == 63 ? ~WorldSet{0} : (WorldSet{2} << hb) - 1;
    return all & ~below;
}

}  // namespace

WorldSet satisfying_worlds(const KripkeModel& m, const Formula& f) {
    switch (f.op()) {
        case Op::Bot: return 0;
        case Op::Atom: {
            AtomKey k{f.name(), {}};
            for (const auto& t : f.args()) {
                if (t.is_var()) throw ModelError("free variable " + t.name + " in " + f.str());
                if (!m.in_domain(t.name)) throw UnknownParameter(t.name);
                k.args.push_back(t.name);
            }
            return m.holds(k) & m.all();
        }
        case Op::And: return satisfying_worlds(m, f.lhs()) & satisfying_worlds(m, f.rhs());
        case Op::Or: return satisfying_worlds(m, f.lhs()) | satisfying_worlds(m, f.rhs());
        case Op::Imp: {
            WorldSet a = satisfying_worlds(m, f.lhs());
            WorldSet b = satisfying_worlds(m, f.rhs());
            WorldSet out = 0;
            for (std::size_t w = 0; w < m.worlds; ++w) {
                WorldSet up = m.all() & ~((WorldSet{1} << w) - 1);
                if ((a & up & ~b) == 0) out |= WorldSet{1} << w;
            }
            return out;
        }
        case Op::Forall: {
            WorldSet s = m.all();
            for (const auto& d : m.domain) s &= satisfying_worlds(m, instantiate(f, Term::param(d)));
            return interior(s, m.all());
        }
        case Op::Exists: {
            WorldSet s = 0;
            for (const auto& d : m.domain) s |= satisfying_worlds(m, instantiate(f, Term::param(d)));
            return s;
        }
    }
    return 0;
}

bool eval(const KripkeModel& m, std::size_t w, const Formula& f) {
    if (w >= m.worlds) throw ModelError("world " + std::to_string(w + 1) + " out of range");
    return (satisfying_worlds(m, f) >> w) & 1;
}

bool globally_true(const KripkeModel& m, const Formula& f) {
    return satisfying_worlds(m, universal_closure(f)) == m.all();
}

bool check_persistence(const KripkeModel& m, const Formula& f) {
    WorldSet s = satisfying_worlds(m, f);
    if (s == 0) return true;
    WorldSet from = m.all() & ~((WorldSet{1} << std::countr_zero(s)) - 1);
    return s == from;
}

namespace {

void collect_preds(const Formula& f, std::map<std::string, std::size_t>& out) {
    switch (f.op()) {
        case Op::Bot: return;
        case Op::Atom: out[f.name()] = f.args().size(); return;
        case Op::Forall:
        case Op::Exists: collect_preds(f.body(), out); return;
        default:
            collect_preds(f.lhs(), out);
            collect_preds(f.rhs(), out);
    }
}

bool has_quantifier(const Formula& f) {
    switch (f.op()) {
        case Op::Bot:
        case Op::Atom: return false;
        case Op::Forall:
        case Op::Exists: return true;
        default: return has_quantifier(f.lhs()) || has_quantifier(f.rhs());
    }
}

std::vector<AtomKey> instances(const std::map<std::string, std::size_t>& preds, const std::vector<std::string>& domain) {
    std::vector<AtomKey> out;
    for (const auto& [p, arity] : preds) {
        std::vector<std::size_t> idx(arity, 0);
        for (;;) {
            AtomKey k{p, {}};
            for (auto i : idx) k.args.push_back(domain[i]);
            out.push_back(std::move(k));
            std::size_t j = arity;
            while (j > 0 && ++idx[j - 1] == domain.size()) idx[--j] = 0;
            if (j == 0) break;
        }
    }
    return out;
}

std::vector<std::string> make_domain(std::size_t d) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < d; ++i) out.push_back("a" + std::to_string(i));
    return out;
}

}  // namespace

std::uint64_t valuation_count(const Formula& f, std::size_t worlds, std::size_t domain) {
    std::map<std::string, std::size_t> preds;
    collect_preds(f, preds);
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < instances(preds, make_domain(domain)).size(); ++i) n *= worlds + 1;
    return n;
}

std::optional<Countermodel> find_countermodel(const Formula& f, std::size_t max_worlds, std::size_t max_domain) {
    if (max_worlds > kMaxWorlds) throw ModelError("at most 64 worlds are supported");
    Formula g = universal_closure(f);
    std::map<std::string, std::size_t> preds;
    collect_preds(g, preds);
    bool needs_domain = has_quantifier(g);
    for (std::size_t m = 1; m <= max_worlds; ++m) {
        for (std::size_t d = 1; d <= max_domain; ++d) {
            KripkeModel model;
            model.worlds = m;
            model.domain = make_domain(d);
            auto keys = instances(preds, model.domain);
            std::vector<std::size_t> code(keys.size(), 0);
            for (;;) {
                model.valuation.clear();
                for (std::size_t i = 0; i < keys.size(); ++i)
                    if (code[i]) model.valuation[keys[i]] = model.all() & ~((WorldSet{1} << (m - code[i])) - 1);
                WorldSet s = satisfying_worlds(model, g);
                if (s != model.all()) return Countermodel{model, static_cast<std::size_t>(std::countr_zero(~s & model.all()))};
                std::size_t j = keys.size();
                while (j > 0 && ++code[j - 1] > m) code[--j] = 0;
                if (j == 0) break;
            }
            if (!needs_domain) break;
        }
    }
    return std::nullopt;
}

std::size_t goedel_value(const Formula& f, const std::map<std::string, std::size_t>& val, std::size_t k) {
    switch (f.op()) {
        case Op::Bot: return 0;
        case Op::Atom: return val.at(f.name());
        case Op::And: return std::min(goedel_value(f.lhs(), val, k), goedel_value(f.rhs(), val, k));
        case Op::Or: return std::max(goedel_value(f.lhs(), val, k), goedel_value(f.rhs(), val, k));
        case Op::Imp: {
            std::size_t a = goedel_value(f.lhs(), val, k), b = goedel_value(f.rhs(), val, k);
            return a <= b ? k : b;
        }
        default: throw NotPropositional(f.str());
    }
}

namespace {
void propositional_vars(const Formula& f, const Formula& whole, std::set<std::string>& out) {
    switch (f.op()) {
        case Op::Bot: return;
        case Op::Atom:
            if (!f.args().empty()) throw NotPropositional(whole.str());
            out.insert(f.name());
            return;
        case Op::Forall:
        case Op::Exists: throw NotPropositional(whole.str());
        default:
            propositional_vars(f.lhs(), whole, out);
            propositional_vars(f.rhs(), whole, out);
    }
}
}  // namespace

GoedelResult goedel_valid(const Formula& f) {
    std::set<std::string> vs;
    propositional_vars(f, f, vs);
    std::vector<std::string> vars(vs.begin(), vs.end());
    std::size_t k = vars.size() + 1;
    GoedelResult res;
    res.chain = k + 1;
    std::vector<std::size_t> code(vars.size(), 0);
    std::map<std::string, std::size_t> val;
    for (;;) {
        for (std::size_t i = 0; i < vars.size(); ++i) val[vars[i]] = code[i];
        if (goedel_value(f, val, k) != k) {
            res.valid = false;
            for (std::size_t i = 0; i < vars.size(); ++i)
                res.witness[vars[i]] = std::to_string(code[i]) + "/" + std::to_string(k);
            return res;
        }
        std::size_t j = vars.size();
        while (j > 0 && ++code[j - 1] > k) code[--j] = 0;
        if (j == 0) break;
    }
    return res;
}

std::string print_model(const KripkeModel& m) {
    std::ostringstream out;
    out << "worlds: " << m.worlds << "; domain: ";
    for (std::size_t i = 0; i < m.domain.size(); ++i) out << (i ? "," : "") << "#" << m.domain[i];
    std::map<std::string, std::vector<const AtomKey*>> by_pred;
    for (const auto& [k, s] : m.valuation)
        if (s & m.all()) by_pred[k.pred].push_back(&k);
    for (const auto& [p, keys] : by_pred) {
        for (std::size_t w = 0; w < m.worlds; ++w) {
            std::string entries;
            for (const AtomKey* k : keys) {
                if (!((m.valuation.at(*k) >> w) & 1)) continue;
                if (k->args.empty()) {
                    entries = "true";
                    continue;
                }
                if (!entries.empty()) entries += ",";
                entries += "(";
                for (std::size_t i = 0; i < k->args.size(); ++i) entries += (i ? ",#" : "#") + k->args[i];
                entries += ")";
            }
            if (!entries.empty()) out << "; " << p << "@" << (w + 1) << ": " << entries;
        }
    }
    return out.str();
}

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

std::string param_name(const std::string& s) {
    if (s.size() < 2 || s[0] != '#') throw ModelError("expected a parameter like #a, got '" + s + "'");
    return s.substr(1);
}

std::size_t to_size(const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ModelError("expected a number, got '" + s + "'");
    return std::stoul(s);
}

}  // namespace

KripkeModel parse_model(std::string_view text) {
    KripkeModel m;
    bool have_worlds = false;
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& part : split(text, ';')) {
        if (part.empty()) continue;
        auto colon = part.find(':');
        if (colon == std::string::npos) throw ModelError("expected 'key: value' in '" + part + "'");
        std::string key = trim(std::string_view(part).substr(0, colon));
        std::string value = trim(std::string_view(part).substr(colon + 1));
        if (key == "worlds") {
            m.worlds = to_size(value);
            if (m.worlds == 0 || m.worlds > kMaxWorlds) throw ModelError("worlds must be between 1 and 64");
            have_worlds = true;
        } else if (key == "domain") {
            m.domain.clear();
            for (const auto& p : split(value, ',')) m.domain.push_back(param_name(p));
        } else {
            entries.emplace_back(key, value);
        }
    }
    if (!have_worlds) throw ModelError("missing 'worlds'");
    if (m.domain.empty()) throw ModelError("the domain must not be empty");
    for (const auto& [key, value] : entries) {
        auto at = key.find('@');
        if (at == std::string::npos) throw ModelError("expected 'pred@world' in '" + key + "'");
        std::string pred = trim(std::string_view(key).substr(0, at));
        std::size_t w = to_size(trim(std::string_view(key).substr(at + 1)));
        if (pred.empty() || w == 0 || w > m.worlds) throw ModelError("bad atom entry '" + key + "'");
        if (value == "true") {
            m.set({pred, {}}, w - 1);
            continue;
        }
        std::size_t i = 0;
        while (i < value.size()) {
            if (value[i] == ',' || std::isspace(static_cast<unsigned char>(value[i]))) {
                ++i;
                continue;
            }
            if (value[i] != '(') throw ModelError("expected '(' in '" + value + "'");
            auto close = value.find(')', i);
            if (close == std::string::npos) throw ModelError("unclosed tuple in '" + value + "'");
            AtomKey k{pred, {}};
            std::string inner = value.substr(i + 1, close - i - 1);
            if (!trim(inner).empty())
                for (const auto& p : split(inner, ',')) {
                    k.args.push_back(param_name(p));
                    if (!m.in_domain(k.args.back())) throw UnknownParameter(k.args.back());
                }
            m.set(k, w - 1);
            i = close + 1;
        }
    }
    if (!m.monotone()) throw ModelError("valuation is not monotone along the worlds");
    return m;
}

}  // namespace lnif

#include "lnif/sequent.hpp"

#include <algorithm>

namespace lnif {

void ms_insert(Multiset& m, const Formula& f) { m.insert(std::upper_bound(m.begin(), m.end(), f), f); }

bool ms_erase(Multiset& m, const Formula& f) {
    auto it = std::lower_bound(m.begin(), m.end(), f);
    if (it == m.end() || *it != f) return false;
    m.erase(it);
    return true;
}

std::size_t ms_count(const Multiset& m, const Formula& f) {
    auto [lo, hi] = std::equal_range(m.begin(), m.end(), f);
    return static_cast<std::size_t>(hi - lo);
}

bool ms_contains(const Multiset& m, const Formula& f) { return std::binary_search(m.begin(), m.end(), f); }

Multiset ms_union(const Multiset& a, const Multiset& b) {
    Multiset out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::optional<Multiset> ms_difference(const Multiset& a, const Multiset& b) {
    Multiset out = a;
    for (const auto& f : b)
        if (!ms_erase(out, f)) return std::nullopt;
    return out;
}

Multiset ms_from(std::vector<Formula> fs) {
    std::sort(fs.begin(), fs.end());
    return fs;
}

std::vector<Formula> ms_canonical(const Multiset& m) {
    std::vector<Formula> out = m;
    std::sort(out.begin(), out.end(), printed_less);
    return out;
}

namespace {
std::string join(const Multiset& m) {
    std::string s;
    for (const auto& f : ms_canonical(m)) {
        if (!s.empty()) s += ", ";
        s += f.str();
    }
    return s;
}
}  // namespace

std::string print_component(const Component& c) {
    std::string l = join(c.ante), r = join(c.cons);
    std::string s = l.empty() ? "|-" : l + " |-";
    if (!r.empty()) s += " " + r;
    return s;
}

std::string print_sequent(const Sequent& g) {
    std::string s;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) s += " // ";
        s += print_component(g[i]);
    }
    return s;
}

std::string Sequent::str() const { return print_sequent(*this); }

std::uint64_t Sequent::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mixin = [&](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (const auto& c : comps) {
        mixin(0xC0);
        for (const auto& f : c.ante) mixin(f.hash());
        mixin(0x5E);
        for (const auto& f : c.cons) mixin(f.hash());
    }
    return h;
}

namespace {
Multiset parse_list(Lexer& lx, Signature& sig, Lexer::Tok stop1, Lexer::Tok stop2) {
    Multiset m;
    if (lx.peek().kind == stop1 || lx.peek().kind == stop2) return m;
    for (;;) {
        ms_insert(m, parse_formula_tokens(lx, sig));
        if (!lx.accept(Lexer::Tok::Comma)) break;
    }
    return m;
}
}  // namespace

Sequent parse_sequent(std::string_view text, Signature& sig) {
    using T = Lexer::Tok;
    Lexer lx(text);
    Sequent g;
    for (;;) {
        Component c;
        c.ante = parse_list(lx, sig, T::Turnstile, T::Turnstile);
        lx.expect(T::Turnstile, "'|-'");
        c.cons = parse_list(lx, sig, T::Slashes, T::End);
        g.comps.push_back(std::move(c));
        if (lx.accept(T::Slashes)) continue;
        if (lx.peek().kind != T::End)
            throw SyntaxError(lx.peek().pos, "unexpected '" + lx.peek().text + "' in sequent");
        break;
    }
    return g;
}

Sequent parse_sequent(std::string_view text) {
    Signature sig;
    return parse_sequent(text, sig);
}

Formula big_and(const Multiset& m) {
    auto fs = ms_canonical(m);
    if (fs.empty()) return Formula::imp(Formula::bot(), Formula::bot());
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::conj(acc, fs[i]);
    return acc;
}

Formula big_or(const Multiset& m) {
    auto fs = ms_canonical(m);
    if (fs.empty()) return Formula::bot();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::disj(acc, fs[i]);
    return acc;
}

Formula interpret(const Sequent& g) {
    Formula acc;
    for (std::size_t i = g.size(); i-- > 0;) {
        Formula rhs = big_or(g[i].cons);
        if (acc.valid()) rhs = Formula::disj(rhs, acc);
        acc = Formula::imp(big_and(g[i].ante), rhs);
    }
    return acc;
}

Sequent splice(const Sequent& g, const Sequent& h) {
    Sequent out;
    std::size_t n = std::max(g.size(), h.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (i < g.size() && i < h.size()) {
            out.comps.push_back({ms_union(g[i].ante, h[i].ante), ms_union(g[i].cons, h[i].cons)});
        } else {
            out.comps.push_back(i < g.size() ? g[i] : h[i]);
        }
    }
    return out;
}

Formula is_valid_interp(const Sequent& g) { return universal_closure(interpret(g)); }

std::set<std::string> params(const Sequent& g) {
    std::set<std::string> out;
    for (const auto& c : g.comps) {
        for (const auto& f : c.ante) collect_params(f, out);
        for (const auto& f : c.cons) collect_params(f, out);
    }
    return out;
}

bool has_param(const Sequent& g, const std::string& a) {
    for (const auto& c : g.comps) {
        for (const auto& f : c.ante)
            if (has_param(f, a)) return true;
        for (const auto& f : c.cons)
            if (has_param(f, a)) return true;
    }
    return false;
}

Sequent rename_param_sequent(const Sequent& g, const std::string& a, const std::string& b) {
    Sequent out;
    for (const auto& c : g.comps) {
        Component d;
        for (const auto& f : c.ante) d.ante.push_back(rename_param_formula(f, a, b));
        for (const auto& f : c.cons) d.cons.push_back(rename_param_formula(f, a, b));
        std::sort(d.ante.begin(), d.ante.end());
        std::sort(d.cons.begin(), d.cons.end());
        out.comps.push_back(std::move(d));
    }
    return out;
}

Sequent empty_sequent(std::size_t n) { return Sequent(std::vector<Component>(n)); }

}  // namespace lnif

#include "lnif/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace lnif {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t mix_str(std::uint64_t h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    return mix(h, s.size());
}

std::shared_ptr<FormulaNode> make_node(Op op) {
    auto n = std::make_shared<FormulaNode>();
    n->op = op;
    return n;
}

void seal(FormulaNode& n) {
    std::uint64_t h = mix(kFnvOffset, static_cast<std::uint64_t>(n.op));
    h = mix_str(h, n.name);
    for (const auto& t : n.args) {
        h = mix(h, static_cast<std::uint64_t>(t.kind));
        h = mix_str(h, t.name);
    }
    if (n.lhs.valid()) h = mix(h, n.lhs.hash());
    if (n.rhs.valid()) h = mix(h, n.rhs.hash());
    n.hash = h;
}

int prec(Op op) {
    switch (op) {
        case Op::Imp: return 1;
        case Op::Or: return 2;
        case Op::And: return 3;
        default: return 4;
    }
}

bool needs_parens(Op parent, const Formula& child, bool left) {
    Op c = child.op();
    if (c == Op::Forall || c == Op::Exists) return true;
    if (c == Op::Atom || c == Op::Bot) return false;
    int pp = prec(parent), pc = prec(c);
    if (parent == Op::Imp) return left ? pc <= pp : pc < pp;
    return left ? pc < pp : pc <= pp;
}

std::string render(const FormulaNode& n) {
    switch (n.op) {
        case Op::Bot: return "bot";
        case Op::Atom: {
            if (n.args.empty()) return n.name;
            std::string s = n.name + "(";
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i) s += ", ";
                s += n.args[i].str();
            }
            return s + ")";
        }
        case Op::Forall:
        case Op::Exists:
            return std::string(n.op == Op::Forall ? "forall " : "exists ") + n.name + ". " + n.lhs.str();
        default: {
            const char* sym = n.op == Op::And ? " & " : n.op == Op::Or ? " | " : " -> ";
            auto side = [&](const Formula& c, bool left) {
                return needs_parens(n.op, c, left) ? "(" + c.str() + ")" : c.str();
            };
            return side(n.lhs, true) + sym + side(n.rhs, false);
        }
    }
}

bool structurally_equal(const Formula& a, const Formula& b) {
    if (a.raw() == b.raw()) return true;
    if (a.hash() != b.hash() || a.op() != b.op()) return false;
    const FormulaNode& x = *a.raw();
    const FormulaNode& y = *b.raw();
    if (x.name != y.name || x.args != y.args) return false;
    if (x.lhs.valid() && !structurally_equal(x.lhs, y.lhs)) return false;
    if (x.rhs.valid() && !structurally_equal(x.rhs, y.rhs)) return false;
    return true;
}

int structural_compare(const Formula& a, const Formula& b) {
    if (a.raw() == b.raw()) return 0;
    if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
    const FormulaNode& x = *a.raw();
    const FormulaNode& y = *b.raw();
    if (x.op != y.op) return x.op < y.op ? -1 : 1;
    if (int c = x.name.compare(y.name)) return c < 0 ? -1 : 1;
    if (x.args != y.args) return x.args < y.args ? -1 : 1;
    if (x.lhs.valid()) {
        if (int c = structural_compare(x.lhs, y.lhs)) return c;
    }
    if (x.rhs.valid()) {
        if (int c = structural_compare(x.rhs, y.rhs)) return c;
    }
    return 0;
}

// Rebuilds f with every term mapped; bound tracks variables bound above.
Formula map_terms(const Formula& f, const std::function<std::optional<Term>(const Term&, const std::vector<std::string>&)>& fn,
                  std::vector<std::string>& bound) {
    switch (f.op()) {
        case Op::Bot: return f;
        case Op::Atom: {
            bool changed = false;
            std::vector<Term> args = f.args();
            for (auto& t : args) {
                if (auto r = fn(t, bound)) {
                    if (*r != t) {
                        t = *r;
                        changed = true;
                    }
                }
            }
            return changed ? Formula::atom(f.name(), std::move(args)) : f;
        }
        case Op::Forall:
        case Op::Exists: {
            bound.push_back(f.name());
            Formula b = map_terms(f.body(), fn, bound);
            bound.pop_back();
            return b.raw() == f.body().raw() ? f : Formula::quant(f.op(), f.name(), b);
        }
        default: {
            Formula l = map_terms(f.lhs(), fn, bound);
            Formula r = map_terms(f.rhs(), fn, bound);
            if (l.raw() == f.lhs().raw() && r.raw() == f.rhs().raw()) return f;
            return Formula::binary(f.op(), l, r);
        }
    }
}

void collect_bound_names(const Formula& f, std::set<std::string>& out) {
    if (f.is_quant()) {
        out.insert(f.name());
        collect_bound_names(f.body(), out);
    } else if (f.is_binary()) {
        collect_bound_names(f.lhs(), out);
        collect_bound_names(f.rhs(), out);
    }
}

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

}  // namespace

Formula Formula::atom(std::string pred, std::vector<Term> args) {
    auto n = make_node(Op::Atom);
    n->name = std::move(pred);
    n->args = std::move(args);
    seal(*n);
    return Formula(std::move(n));
}

Formula Formula::bot() {
    static const Formula b = [] {
        auto n = make_node(Op::Bot);
        seal(*n);
        return Formula(std::move(n));
    }();
    return b;
}

Formula Formula::binary(Op op, Formula a, Formula b) {
    auto n = make_node(op);
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    seal(*n);
    return Formula(std::move(n));
}

Formula Formula::quant(Op op, std::string var, Formula body) {
    auto n = make_node(op);
    n->name = std::move(var);
    n->lhs = std::move(body);
    seal(*n);
    return Formula(std::move(n));
}

Formula Formula::conj(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }
Formula Formula::imp(Formula a, Formula b) { return binary(Op::Imp, std::move(a), std::move(b)); }
Formula Formula::forall(std::string v, Formula b) { return quant(Op::Forall, std::move(v), std::move(b)); }
Formula Formula::exists(std::string v, Formula b) { return quant(Op::Exists, std::move(v), std::move(b)); }

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
const std::vector<Term>& Formula::args() const { return node_->args; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }
std::uint64_t Formula::hash() const { return node_->hash; }

const std::string& Formula::str() const {
    const FormulaNode& n = *node_;
    std::call_once(n.printed_once, [&] { n.printed = render(n); });
    return n.printed;
}

bool operator==(const Formula& a, const Formula& b) { return structurally_equal(a, b); }
bool operator<(const Formula& a, const Formula& b) { return structural_compare(a, b) < 0; }

bool printed_less(const Formula& a, const Formula& b) {
    int c = a.str().compare(b.str());
    if (c != 0) return c < 0;
    return a < b;
}

void Signature::declare(const std::string& pred, int arity) {
    auto [it, inserted] = arities_.emplace(pred, arity);
    if (!inserted && it->second != arity) throw ArityError(pred);
}

void Signature::check(const std::string& pred, int arity) const {
    auto it = arities_.find(pred);
    if (it == arities_.end() || it->second != arity) throw ArityError(pred);
}

std::optional<int> Signature::arity(const std::string& pred) const {
    auto it = arities_.find(pred);
    if (it == arities_.end()) return std::nullopt;
    return it->second;
}

void Signature::absorb(const Formula& f) {
    if (f.is_atom()) {
        declare(f.name(), static_cast<int>(f.args().size()));
    } else if (f.is_quant()) {
        absorb(f.body());
    } else if (f.is_binary()) {
        absorb(f.lhs());
        absorb(f.rhs());
    }
}

// Lexer

Lexer::Lexer(std::string_view s) {
    static const std::vector<std::pair<std::string_view, Tok>> symbols = {
        {"|-", Tok::Turnstile}, {"//", Tok::Slashes}, {"->", Tok::Imp},
        {"\xE2\x8A\xA2", Tok::Turnstile}, {"\xE2\xAB\xBD", Tok::Slashes},
        {"\xE2\x8A\x83", Tok::Imp}, {"\xE2\x86\x92", Tok::Imp},
        {"\xE2\x88\xA7", Tok::And}, {"\xE2\x88\xA8", Tok::Or},
        {"\xC2\xAC", Tok::Not}, {"\xE2\x8A\xA5", Tok::Bot},
        {"\xE2\x88\x80", Tok::Forall}, {"\xE2\x88\x83", Tok::Exists},
        {"&", Tok::And}, {"|", Tok::Or}, {"~", Tok::Not}, {"(", Tok::LParen},
        {")", Tok::RParen}, {",", Tok::Comma}, {".", Tok::Dot},
    };
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (is_ident_start(c) || (c == '#' && i + 1 < s.size() && is_ident_start(static_cast<unsigned char>(s[i + 1])))) {
            std::size_t start = i;
            bool param = c == '#';
            if (param) ++i;
            std::size_t name_start = i;
            while (i < s.size() && is_ident_char(static_cast<unsigned char>(s[i]))) ++i;
            std::string word(s.substr(name_start, i - name_start));
            Tok k = Tok::Ident;
            if (param) {
                k = Tok::ParamId;
            } else if (word == "bot") {
                k = Tok::Bot;
            } else if (word == "forall") {
                k = Tok::Forall;
            } else if (word == "exists") {
                k = Tok::Exists;
            }
            toks_.push_back({k, word, start});
            continue;
        }
        bool matched = false;
        for (const auto& [sym, kind] : symbols) {
            if (s.substr(i, sym.size()) == sym) {
                toks_.push_back({kind, std::string(sym), i});
                i += sym.size();
                matched = true;
                break;
            }
        }
        if (!matched) throw SyntaxError(i, std::string("unexpected character '") + s[i] + "'");
    }
    toks_.push_back({Tok::End, "", s.size()});
}

bool Lexer::accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
}

Lexer::Token Lexer::expect(Tok k, const char* what) {
    if (peek().kind != k) {
        const Token& t = peek();
        throw SyntaxError(t.pos, std::string("expected ") + what +
                                     (t.kind == Tok::End ? " but reached end of input" : " but found '" + t.text + "'"));
    }
    return next();
}

// Parser

namespace {

class Parser {
public:
    Parser(Lexer& lx, Signature& sig, bool declare) : lx_(lx), sig_(sig), declare_(declare) {}

    Formula imp() {
        Formula l = disj();
        if (lx_.accept(Lexer::Tok::Imp)) return Formula::imp(l, imp());
        return l;
    }

private:
    Formula disj() {
        Formula l = conj();
        while (lx_.accept(Lexer::Tok::Or)) l = Formula::disj(l, conj());
        return l;
    }

    Formula conj() {
        Formula l = unary();
        while (lx_.accept(Lexer::Tok::And)) l = Formula::conj(l, unary());
        return l;
    }

    Formula unary() {
        using T = Lexer::Tok;
        const auto& t = lx_.peek();
        switch (t.kind) {
            case T::Not: {
                lx_.next();
                return Formula::imp(unary(), Formula::bot());
            }
            case T::Forall:
            case T::Exists: {
                Op op = t.kind == T::Forall ? Op::Forall : Op::Exists;
                lx_.next();
                std::string v = lx_.expect(T::Ident, "bound variable").text;
                lx_.expect(T::Dot, "'.'");
                bound_.push_back(v);
                Formula b = imp();
                bound_.pop_back();
                return Formula::quant(op, v, b);
            }
            case T::Bot: lx_.next(); return Formula::bot();
            case T::LParen: {
                lx_.next();
                Formula f = imp();
                lx_.expect(T::RParen, "')'");
                return f;
            }
            case T::Ident: return atom();
            default:
                throw SyntaxError(t.pos, t.kind == T::End ? "unexpected end of input"
                                                          : "unexpected token '" + t.text + "'");
        }
    }

    Formula atom() {
        using T = Lexer::Tok;
        std::string pred = lx_.next().text;
        std::vector<Term> args;
        if (lx_.accept(T::LParen)) {
            do {
                const auto tok = lx_.next();
                if (tok.kind == T::ParamId) {
                    args.push_back(Term::param(tok.text));
                } else if (tok.kind == T::Ident) {
                    if (std::find(bound_.begin(), bound_.end(), tok.text) == bound_.end())
                        throw UnboundVariable(tok.text);
                    args.push_back(Term::var(tok.text));
                } else {
                    throw SyntaxError(tok.pos, "expected a term");
                }
            } while (lx_.accept(T::Comma));
            lx_.expect(T::RParen, "')'");
        }
        int ar = static_cast<int>(args.size());
        if (declare_) {
            sig_.declare(pred, ar);
        } else {
            sig_.check(pred, ar);
        }
        return Formula::atom(pred, std::move(args));
    }

    Lexer& lx_;
    Signature& sig_;
    bool declare_;
    std::vector<std::string> bound_;
};

Formula parse_whole(std::string_view text, Signature& sig, bool declare) {
    Lexer lx(text);
    Parser p(lx, sig, declare);
    Formula f = p.imp();
    if (lx.peek().kind != Lexer::Tok::End)
        throw SyntaxError(lx.peek().pos, "unexpected trailing '" + lx.peek().text + "'");
    return f;
}

}  // namespace

Formula parse_formula_tokens(Lexer& lx, Signature& sig) {
    Parser p(lx, sig, true);
    return p.imp();
}

Formula parse_formula(std::string_view text, const Signature& sig) {
    Signature copy = sig;
    return parse_whole(text, copy, false);
}

Formula parse_formula(std::string_view text, Signature& sig) { return parse_whole(text, sig, true); }

Formula parse_formula(std::string_view text) {
    Signature local;
    return parse_whole(text, local, true);
}

std::string print_formula(const Formula& f) { return f.str(); }

Formula subst_var(const Formula& f, const std::string& x, const Term& t) {
    switch (f.op()) {
        case Op::Bot: return f;
        case Op::Atom: {
            bool changed = false;
            std::vector<Term> args = f.args();
            for (auto& a : args) {
                if (a.is_var() && a.name == x) {
                    a = t;
                    changed = true;
                }
            }
            return changed ? Formula::atom(f.name(), std::move(args)) : f;
        }
        case Op::Forall:
        case Op::Exists: {
            if (f.name() == x) return f;
            Formula b = subst_var(f.body(), x, t);
            if (b.raw() == f.body().raw()) return f;
            if (t.is_var() && t.name == f.name()) throw CaptureError(t.name);
            return Formula::quant(f.op(), f.name(), b);
        }
        default: {
            Formula l = subst_var(f.lhs(), x, t);
            Formula r = subst_var(f.rhs(), x, t);
            if (l.raw() == f.lhs().raw() && r.raw() == f.rhs().raw()) return f;
            return Formula::binary(f.op(), l, r);
        }
    }
}

Formula instantiate(const Formula& q, const Term& t) { return subst_var(q.body(), q.name(), t); }

Formula rename_param_formula(const Formula& f, const std::string& a, const std::string& b) {
    if (a == b || !has_param(f, a)) return f;
    std::vector<std::string> bound;
    return map_terms(
        f,
        [&](const Term& t, const std::vector<std::string>&) -> std::optional<Term> {
            if (t.is_param() && t.name == a) return Term::param(b);
            return std::nullopt;
        },
        bound);
}

std::size_t complexity(const Formula& f) {
    switch (f.op()) {
        case Op::Atom:
        case Op::Bot: return 0;
        case Op::Forall:
        case Op::Exists: return 1 + complexity(f.body());
        default: return 1 + complexity(f.lhs()) + complexity(f.rhs());
    }
}

void collect_params(const Formula& f, std::set<std::string>& out) {
    switch (f.op()) {
        case Op::Bot: return;
        case Op::Atom:
            for (const auto& t : f.args())
                if (t.is_param()) out.insert(t.name);
            return;
        case Op::Forall:
        case Op::Exists: collect_params(f.body(), out); return;
        default:
            collect_params(f.lhs(), out);
            collect_params(f.rhs(), out);
    }
}

std::set<std::string> params(const Formula& f) {
    std::set<std::string> out;
    collect_params(f, out);
    return out;
}

namespace {
void collect_params_ordered(const Formula& f, std::vector<std::string>& out) {
    switch (f.op()) {
        case Op::Bot: return;
        case Op::Atom:
            for (const auto& t : f.args())
                if (t.is_param() && std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
            return;
        case Op::Forall:
        case Op::Exists: collect_params_ordered(f.body(), out); return;
        default:
            collect_params_ordered(f.lhs(), out);
            collect_params_ordered(f.rhs(), out);
    }
}

void collect_free_vars(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
    switch (f.op()) {
        case Op::Bot: return;
        case Op::Atom:
            for (const auto& t : f.args())
                if (t.is_var() && std::find(bound.begin(), bound.end(), t.name) == bound.end()) out.insert(t.name);
            return;
        case Op::Forall:
        case Op::Exists:
            bound.push_back(f.name());
            collect_free_vars(f.body(), bound, out);
            bound.pop_back();
            return;
        default:
            collect_free_vars(f.lhs(), bound, out);
            collect_free_vars(f.rhs(), bound, out);
    }
}
}  // namespace

std::vector<std::string> params_ordered(const Formula& f) {
    std::vector<std::string> out;
    collect_params_ordered(f, out);
    return out;
}

bool has_param(const Formula& f, const std::string& a) {
    switch (f.op()) {
        case Op::Bot: return false;
        case Op::Atom:
            for (const auto& t : f.args())
                if (t.is_param() && t.name == a) return true;
            return false;
        case Op::Forall:
        case Op::Exists: return has_param(f.body(), a);
        default: return has_param(f.lhs(), a) || has_param(f.rhs(), a);
    }
}

std::set<std::string> free_vars(const Formula& f) {
    std::vector<std::string> bound;
    std::set<std::string> out;
    collect_free_vars(f, bound, out);
    return out;
}

bool is_closed(const Formula& f) { return free_vars(f).empty(); }

bool is_propositional(const Formula& f) {
    switch (f.op()) {
        case Op::Bot: return true;
        case Op::Atom: return f.args().empty();
        case Op::Forall:
        case Op::Exists: return false;
        default: return is_propositional(f.lhs()) && is_propositional(f.rhs());
    }
}

Formula universal_closure(const Formula& f) {
    std::vector<std::string> ps = params_ordered(f);
    if (ps.empty()) return f;
    std::set<std::string> taken;
    collect_bound_names(f, taken);
    std::map<std::string, std::string> var_for;
    std::vector<std::string> vars;
    for (std::size_t i = 0; vars.size() < ps.size(); ++i) {
        std::string v = "x" + std::to_string(i);
        if (taken.count(v)) continue;
        var_for[ps[vars.size()]] = v;
        vars.push_back(v);
    }
    std::vector<std::string> bound;
    Formula body = map_terms(
        f,
        [&](const Term& t, const std::vector<std::string>&) -> std::optional<Term> {
            if (t.is_param()) return Term::var(var_for.at(t.name));
            return std::nullopt;
        },
        bound);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::forall(*it, body);
    return body;
}

std::string fresh_param(const std::set<std::string>& avoid) {
    for (std::size_t i = 0;; ++i) {
        std::string n = "a" + std::to_string(i);
        if (!avoid.count(n)) return n;
    }
}

}  // namespace lnif

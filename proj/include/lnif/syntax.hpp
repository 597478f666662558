// Terms, formulas, parsing, printing and substitution.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lnif {

// Base of every error raised by the library; kind() is a stable tag.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t pos, const std::string& msg)
        : Error("SyntaxError", "syntax error at " + std::to_string(pos) + ": " + msg), position(pos) {}
    std::size_t position;
};

struct ArityError : Error {
    explicit ArityError(const std::string& pred)
        : Error("ArityError", "inconsistent arity for predicate " + pred) {}
};

struct UnboundVariable : Error {
    explicit UnboundVariable(const std::string& name)
        : Error("UnboundVariable", "unbound variable " + name) {}
};

struct CaptureError : Error {
    explicit CaptureError(const std::string& name)
        : Error("CaptureError", "substitution of variable " + name + " would be captured") {}
};

struct Term {
    enum class Kind : std::uint8_t { Var, Param };
    Kind kind = Kind::Param;
    std::string name;

    static Term var(std::string n) { return Term{Kind::Var, std::move(n)}; }
    static Term param(std::string n) { return Term{Kind::Param, std::move(n)}; }
    bool is_var() const { return kind == Kind::Var; }
    bool is_param() const { return kind == Kind::Param; }
    std::string str() const { return is_param() ? "#" + name : name; }

    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;
};

enum class Op : std::uint8_t { Atom, Bot, And, Or, Imp, Forall, Exists };

class Formula;

struct FormulaNode;

class Formula {
public:
    Formula() = default;

    static Formula atom(std::string pred, std::vector<Term> args = {});
    static Formula bot();
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula imp(Formula a, Formula b);
    static Formula forall(std::string var, Formula body);
    static Formula exists(std::string var, Formula body);
    static Formula binary(Op op, Formula a, Formula b);
    static Formula quant(Op op, std::string var, Formula body);

    bool valid() const { return static_cast<bool>(node_); }
    Op op() const;
    // Predicate name for atoms, bound variable for quantifiers.
    const std::string& name() const;
    const std::vector<Term>& args() const;
    const Formula& lhs() const;
    const Formula& rhs() const;
    // Quantifier body.
    const Formula& body() const { return lhs(); }
    std::uint64_t hash() const;
    const std::string& str() const;

    bool is_atom() const { return op() == Op::Atom; }
    bool is_bot() const { return op() == Op::Bot; }
    bool is_binary() const { return op() == Op::And || op() == Op::Or || op() == Op::Imp; }
    bool is_quant() const { return op() == Op::Forall || op() == Op::Exists; }

    const FormulaNode* raw() const { return node_.get(); }

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
    // Structural total order: cheap hash comparison first.
    friend bool operator<(const Formula& a, const Formula& b);

private:
    explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
    Op op;
    std::string name;
    std::vector<Term> args;
    Formula lhs;
    Formula rhs;
    std::uint64_t hash = 0;
    mutable std::once_flag printed_once;
    mutable std::string printed;
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return static_cast<std::size_t>(f.hash()); }
};

// Order by printed text; used wherever output must read canonically.
bool printed_less(const Formula& a, const Formula& b);

class Signature {
public:
    // Records the arity, or throws ArityError if it conflicts.
    void declare(const std::string& pred, int arity);
    // Throws ArityError if pred is unknown or has another arity.
    void check(const std::string& pred, int arity) const;
    std::optional<int> arity(const std::string& pred) const;
    const std::map<std::string, int>& arities() const { return arities_; }
    // Declares every atom of f.
    void absorb(const Formula& f);

private:
    std::map<std::string, int> arities_;
};

// Parses against a fixed signature; unknown predicates are arity errors.
Formula parse_formula(std::string_view text, const Signature& sig);
// Parses and declares predicate arities into sig.
Formula parse_formula(std::string_view text, Signature& sig);
// Parses with a throwaway signature (arity consistency within the text only).
Formula parse_formula(std::string_view text);

std::string print_formula(const Formula& f);

Formula subst_var(const Formula& f, const std::string& x, const Term& t);
// Instantiates a quantified formula's body with t.
Formula instantiate(const Formula& quantified, const Term& t);
Formula rename_param_formula(const Formula& f, const std::string& a, const std::string& b);
std::size_t complexity(const Formula& f);
Formula universal_closure(const Formula& f);
std::string fresh_param(const std::set<std::string>& avoid);

void collect_params(const Formula& f, std::set<std::string>& out);
std::set<std::string> params(const Formula& f);
// Parameters in first-occurrence order.
std::vector<std::string> params_ordered(const Formula& f);
bool has_param(const Formula& f, const std::string& a);
std::set<std::string> free_vars(const Formula& f);
bool is_closed(const Formula& f);
bool is_propositional(const Formula& f);

// Shared tokenizer state used by the formula and sequent parsers.
class Lexer {
public:
    enum class Tok {
        End, Ident, ParamId, LParen, RParen, Comma, Dot, And, Or, Imp, Not,
        Bot, Forall, Exists, Turnstile, Slashes
    };
    struct Token {
        Tok kind;
        std::string text;
        std::size_t pos;
    };

    explicit Lexer(std::string_view text);
    const Token& peek() const { return toks_[idx_]; }
    Token next() { return toks_[idx_ < toks_.size() - 1 ? idx_++ : idx_]; }
    bool accept(Tok k);
    Token expect(Tok k, const char* what);
    std::size_t index() const { return idx_; }

private:
    std::vector<Token> toks_;
    std::size_t idx_ = 0;
};

// Formula parser over a lexer; stops at the first token that cannot extend a formula.
Formula parse_formula_tokens(Lexer& lx, Signature& sig);

}  // namespace lnif

// Hand-rolled generators for property tests: formulas, sequents, models and
// checker-valid derivations. Every generator is a pure function of its seed.
#pragma once

#include <random>

#include "lnif/prover.hpp"
#include "lnif/semantics.hpp"
#include "lnif/transform.hpp"

namespace lnif::testgen {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

    // Propositional formula with exactly n connectives over the given atoms.
    Formula prop(std::size_t n, const std::vector<std::string>& atoms = {"p", "q", "r"}, double bot = 0.1) {
        if (n == 0) return chance(bot) ? Formula::bot() : Formula::atom(pick(atoms));
        std::size_t l = below(n);
        static const Op ops[] = {Op::And, Op::Or, Op::Imp};
        Op op = ops[below(3)];
        return Formula::binary(op, prop(l, atoms, bot), prop(n - 1 - l, atoms, bot));
    }

    // Closed first-order formula over unary P, Q, nullary r and parameters #a, #b.
    Formula fo(std::size_t n, std::vector<std::string> vars = {}) {
        if (n == 0) {
            std::size_t k = below(4);
            if (k == 0) return Formula::atom("r");
            if (k == 1 && chance(0.3)) return Formula::bot();
            std::vector<Term> terms = {Term::param("a"), Term::param("b")};
            for (const auto& v : vars) terms.push_back(Term::var(v));
            return Formula::atom(chance(0.5) ? "P" : "Q", {pick(terms)});
        }
        std::size_t k = below(5);
        if (k >= 3) {
            std::string v = vars.size() % 2 ? "y" : "x";
            auto inner = vars;
            inner.push_back(v);
            return Formula::quant(k == 3 ? Op::Forall : Op::Exists, v, fo(n - 1, inner));
        }
        std::size_t l = below(n);
        static const Op ops[] = {Op::And, Op::Or, Op::Imp};
        return Formula::binary(ops[k], fo(l, vars), fo(n - 1 - l, vars));
    }

    Formula any(std::size_t n) { return chance(0.5) ? prop(n) : fo(n); }

    Multiset multiset(std::size_t max, std::size_t size) {
        Multiset m;
        std::size_t count = below(max + 1);
        for (std::size_t i = 0; i < count; ++i) ms_insert(m, any(below(size + 1)));
        return m;
    }

    Sequent sequent(std::size_t max_comps, std::size_t max_formulas = 2, std::size_t size = 2) {
        std::size_t n = 1 + below(max_comps);
        std::vector<Component> cs;
        for (std::size_t i = 0; i < n; ++i) cs.push_back({multiset(max_formulas, size), multiset(max_formulas, size)});
        return Sequent(cs);
    }

    // Monotone model over the given atoms with domain {#a, #b} (or fewer).
    KripkeModel model(std::size_t max_worlds, std::size_t max_domain,
                      const std::vector<std::pair<std::string, std::size_t>>& preds) {
        KripkeModel m;
        m.worlds = 1 + below(max_worlds);
        std::size_t d = 1 + below(max_domain);
        for (std::size_t i = 0; i < d; ++i) m.domain.push_back(std::string(1, static_cast<char>('a' + i)));
        for (const auto& [pred, arity] : preds) {
            std::vector<std::vector<std::string>> tuples = {{}};
            for (std::size_t k = 0; k < arity; ++k) {
                std::vector<std::vector<std::string>> next;
                for (const auto& t : tuples)
                    for (const auto& e : m.domain) {
                        auto u = t;
                        u.push_back(e);
                        next.push_back(u);
                    }
                tuples = next;
            }
            for (const auto& t : tuples) {
                std::size_t from = below(m.worlds + 1);
                for (std::size_t w = from; w < m.worlds; ++w) m.set({pred, t}, w);
            }
        }
        return m;
    }

    // A checker-valid official derivation of moderate size.
    Derivation derivation() {
        for (;;) {
            switch (below(4)) {
                case 0: {
                    auto s = static_cast<Schema>(below(kSchemaCount));
                    AxiomArgs args = default_axiom_args(s);
                    if (is_quantifier_schema(s)) {
                        args.b = prop(below(2), {"r", "s"});
                    } else {
                        args.a = any(below(3));
                        args.b = any(below(3));
                        args.c = any(below(2));
                    }
                    return prove_axiom(s, args);
                }
                case 1: {
                    Sequent ctx = sequent(3, 1, 1);
                    Formula a = any(below(4));
                    return derive_identity(a, ctx, below(ctx.size()));
                }
                case 2: {
                    Formula f = prop(1 + below(5));
                    if (!goedel_valid(f).valid) continue;
                    ProverConfig cfg;
                    cfg.depth = 24;
                    ProveResult r = prove(f, cfg);
                    if (r.ok()) return r.proof;
                    continue;
                }
                default: {
                    // A valid first-order sequent: a random sequent with one formula on both sides.
                    Sequent g = sequent(3, 1, 1);
                    Formula a = fo(below(3));
                    std::size_t i = below(g.size());
                    std::size_t j = i + below(g.size() - i);
                    ms_insert(g[i].ante, a);
                    ms_insert(g[j].cons, a);
                    ProverConfig cfg;
                    cfg.depth = 20;
                    ProveResult r = prove(g, cfg);
                    if (r.ok()) return r.proof;
                    continue;
                }
            }
        }
    }

private:
    std::mt19937_64 rng_;
};

// Every subderivation, root first, each once.
inline std::vector<Derivation> subderivations(const Derivation& d) {
    std::vector<Derivation> out;
    std::vector<Derivation> stack = {d};
    std::set<const DerivNode*> seen;
    while (!stack.empty()) {
        Derivation x = stack.back();
        stack.pop_back();
        if (!seen.insert(x.get()).second) continue;
        out.push_back(x);
        for (auto it = x->premises.rbegin(); it != x->premises.rend(); ++it) stack.push_back(*it);
    }
    return out;
}

}  // namespace lnif::testgen

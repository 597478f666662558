#include <unordered_map>

#include "lnif/transform.hpp"
#include "transform_util.hpp"

namespace lnif {

using namespace detail;

namespace {

// Lexicographic induction measure of a cut: formula size, then the height of the
// premise the reduction recurses on (right premise, or left premise for an
// existential cut formula).
struct Measure {
    std::size_t size = 0;
    std::size_t height = 0;
    friend auto operator<=>(const Measure&, const Measure&) = default;
};

class Reducer {
public:
    explicit Reducer(CutStats* stats) : stats_(stats) {}

    Derivation reduce(const Derivation& l, const Derivation& r, const Formula& a, std::size_t m,
                      const std::vector<std::size_t>& k, const std::optional<Measure>& parent) {
        Sequent target = cut_conclusion(l->conclusion, r->conclusion, a, m, k);
        std::size_t total = 0;
        for (auto v : k) total += v;
        if (total == 0) return weaken_to(r, target);
        Measure me{complexity(a), a.op() == Op::Exists ? l->height : r->height};
        if (parent) {
            ++stats_->measure_checks;
            if (!(me < *parent))
                throw InternalError("cut measure did not decrease at " + target.str());
        }
        ++stats_->cuts_reduced;
        return a.op() == Op::Exists ? left_phase(l, r, a, m, k, target, me) : right_phase(l, r, a, m, k, target, me);
    }

private:
    CutStats* stats_;

    static std::vector<std::size_t> with_zero(std::vector<std::size_t> k, std::size_t at) {
        k.insert(k.begin() + static_cast<std::ptrdiff_t>(at), 0);
        return k;
    }

    Derivation right_phase(const Derivation& l, const Derivation& r, const Formula& a, std::size_t m,
                           const std::vector<std::size_t>& k, const Sequent& target, const Measure& me) {
        const DerivNode& rn = *r;
        const RuleInstance& rule = rn.rule;
        if (is_axiom(rule.tag)) {
            ++stats_->principal_steps;
            if (auto ax = find_axiom(target)) return node(target, *ax, {});
            if (rule.tag == RuleTag::BotL) return weaken_to(admit_bot_r(l, m), target);
            std::size_t j = rule.principal[1].comp;
            Derivation x = l;
            for (std::size_t c = m; c < j; ++c) x = admit_lwr(x, c, a);
            return weaken_to(x, target);
        }
        const Occurrence& o = rule.principal[0];
        bool copy = o.side == Side::L && o.formula == a && o.comp >= m && k[o.comp - m] > 0;
        if (copy) return principal_right(l, rn, a, m, k, target, me);
        ++stats_->permutation_steps;
        Eigen fr = refresh_eigen(rn, params(l->conclusion));
        std::vector<Derivation> subs;
        for (std::size_t j = 0; j < fr.premises.size(); ++j) {
            auto q = inserted(rn, j);
            if (!q) {
                subs.push_back(reduce(l, fr.premises[j], a, m, k, me));
            } else if (*q <= m) {
                subs.push_back(reduce(admit_ew(l, *q), fr.premises[j], a, m + 1, k, me));
            } else {
                subs.push_back(reduce(admit_ew(l, *q), fr.premises[j], a, m, with_zero(k, *q - m), me));
            }
        }
        return node(target, fr.rule, subs);
    }

    Derivation principal_right(const Derivation& l, const DerivNode& rn, const Formula& a, std::size_t m,
                               const std::vector<std::size_t>& k, const Sequent& target, const Measure& me) {
        ++stats_->principal_steps;
        const RuleInstance& rule = rn.rule;
        const auto& ps = rn.premises;
        std::size_t c = rule.principal[0].comp;
        std::size_t i = c - m;
        auto fewer = k;
        --fewer[i];
        auto e = unit(k.size(), i);
        switch (rule.tag) {
            case RuleTag::Lift: {
                auto more = k;
                ++more[i + 1];
                return reduce(l, ps[0], a, m, more, me);
            }
            case RuleTag::AndL: {
                Derivation d1 = reduce(l, ps[0], a, m, fewer, me);
                auto inv = invert_right(l, RuleTag::AndR, m, a);
                Derivation x = reduce(inv[1], d1, a.rhs(), m, e, me);
                Derivation y = reduce(inv[0], x, a.lhs(), m, e, me);
                return contract_to(y, target);
            }
            case RuleTag::OrL: {
                Derivation d1 = reduce(l, ps[0], a, m, fewer, me);
                Derivation d2 = reduce(l, ps[1], a, m, fewer, me);
                Derivation inv = invert_right(l, RuleTag::OrR, m, a)[0];
                Derivation x = reduce(inv, d1, a.lhs(), m, e, me);
                Derivation y = reduce(x, d2, a.rhs(), m, e, me);
                return contract_to(y, target);
            }
            case RuleTag::ImpL: {
                Derivation d1 = reduce(l, ps[0], a, m, fewer, me);
                Derivation d2 = reduce(l, ps[1], a, m, k, me);
                Derivation low = l;
                for (std::size_t t = m; t < c; ++t) low = admit_lwr(low, t, a);
                bool last = c + 1 == low->conclusion.size();
                Derivation inv = invert_right(low, last ? RuleTag::ImpR1 : RuleTag::ImpR2, c, a)[0];
                Derivation lbc = admit_merge(inv, c);
                auto e0 = unit(k.size() - i, 0);
                Derivation x = reduce(lbc, d1, a.rhs(), c, e0, me);
                Derivation y = reduce(d2, x, a.lhs(), c, e0, me);
                return contract_to(y, target);
            }
            case RuleTag::ForallL: {
                const std::string& t = *rule.witness;
                Derivation d1 = reduce(l, ps[0], a, m, k, me);
                auto avoid = params(l->conclusion);
                for (const auto& p : params(target)) avoid.insert(p);
                avoid.insert(t);
                std::string fresh = fresh_param(avoid);
                bool last = m + 1 == l->conclusion.size();
                Derivation inv = invert_right(l, last ? RuleTag::ForallR1 : RuleTag::ForallR2, m, a, fresh)[0];
                Derivation linv = rename_param(admit_merge(inv, m), fresh, t);
                Derivation y = reduce(linv, d1, instantiate(a, Term::param(t)), m, e, me);
                return contract_to(y, target);
            }
            default: throw InternalError(std::string("unexpected principal rule in cut reduction: ") + rule_name(rule.tag));
        }
    }

    Derivation left_phase(const Derivation& l, const Derivation& r, const Formula& a, std::size_t m,
                          const std::vector<std::size_t>& k, const Sequent& target, const Measure& me) {
        const DerivNode& ln = *l;
        const RuleInstance& rule = ln.rule;
        if (is_axiom(rule.tag)) {
            ++stats_->principal_steps;
            auto ax = find_axiom(target);
            if (!ax) throw InternalError("left axiom lost its principal formulas");
            return node(target, *ax, {});
        }
        const Occurrence& o = rule.principal[0];
        if (rule.tag == RuleTag::ExistsR && o.comp == m && o.formula == a) {
            ++stats_->principal_steps;
            const std::string& t = *rule.witness;
            Derivation r0 = reduce(ln.premises[0], r, a, m, k, me);
            auto avoid = params(r->conclusion);
            for (const auto& p : params(l->conclusion)) avoid.insert(p);
            avoid.insert(t);
            std::string fresh = fresh_param(avoid);
            std::vector<std::size_t> full(m, 0);
            full.insert(full.end(), k.begin(), k.end());
            Derivation rinv = rename_param(invert_left(r, a, full, fresh)[0], fresh, t);
            Derivation y = reduce(r0, rinv, instantiate(a, Term::param(t)), m, k, me);
            return contract_to(y, target);
        }
        ++stats_->permutation_steps;
        Eigen fr = refresh_eigen(ln, params(r->conclusion));
        std::vector<Derivation> subs;
        for (std::size_t j = 0; j < fr.premises.size(); ++j) {
            auto q = inserted(ln, j);
            if (!q) {
                subs.push_back(reduce(fr.premises[j], r, a, m, k, me));
            } else if (*q <= m) {
                subs.push_back(reduce(fr.premises[j], admit_ew(r, *q), a, m + 1, k, me));
            } else {
                subs.push_back(reduce(fr.premises[j], admit_ew(r, *q), a, m, with_zero(k, *q - m), me));
            }
        }
        return node(target, fr.rule, subs);
    }
};

Derivation eliminate_rec(const Derivation& d, Reducer& red, std::unordered_map<const DerivNode*, Derivation>& memo) {
    if (auto it = memo.find(d.get()); it != memo.end()) return it->second;
    std::vector<Derivation> ps;
    bool same = true;
    for (const auto& p : d->premises) {
        ps.push_back(eliminate_rec(p, red, memo));
        same = same && ps.back() == p;
    }
    Derivation out;
    const RuleInstance& r = d->rule;
    if (r.tag == RuleTag::Cut) {
        const CutInstance& c = *r.cut;
        out = red.reduce(ps[0], ps[1], c.cut_formula, c.alignment[0], c.k, std::nullopt);
    } else if (is_structural(r.tag)) {
        out = apply_structural(*d, ps.at(0));
    } else {
        out = same ? d : node(d->conclusion, r, ps);
    }
    memo.emplace(d.get(), out);
    return out;
}

}  // namespace

Derivation eliminate_cut(const Derivation& d, CutStats* stats) {
    CheckResult res = check_derivation(d, Mode::WithCut);
    if (!res.ok) throw NotWithCutValid(res.kind + " at " + res.path_str() + ": " + res.message);
    CutStats local;
    Reducer red(stats ? stats : &local);
    std::unordered_map<const DerivNode*, Derivation> memo;
    Derivation out = eliminate_rec(d, red, memo);
    if (out->conclusion != d->conclusion || !uses_only_official(out))
        throw InternalError("cut elimination changed the end sequent or left non-official rules");
    return out;
}

}  // namespace lnif

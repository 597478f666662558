#include "lnif/transform.hpp"

#include <algorithm>
#include <unordered_map>

#include "transform_util.hpp"

namespace lnif {

Derivation node(Sequent conclusion, RuleInstance rule, std::vector<Derivation> premises) {
    std::vector<Sequent> ps;
    ps.reserve(premises.size());
    for (const auto& p : premises) ps.push_back(p->conclusion);
    try {
        check_node(conclusion, rule, ps, Mode::WithCut);
    } catch (const Error& e) {
        throw InternalError(std::string("rewrite produced an invalid ") + rule_name(rule.tag) + " node at " +
                            conclusion.str() + ": " + e.what());
    }
    return make_derivation(std::move(conclusion), std::move(rule), std::move(premises));
}

namespace detail {

Sequent added(Sequent g, std::size_t c, Side s, const Formula& f) {
    ms_insert(g[c].side(s), f);
    return g;
}

Sequent removed(Sequent g, std::size_t c, Side s, const Formula& f) {
    if (!ms_erase(g[c].side(s), f)) throw InternalError("missing " + f.str() + " in " + g.str());
    return g;
}

Sequent inserted_at(Sequent g, std::size_t pos, Component c) {
    g.comps.insert(g.comps.begin() + static_cast<std::ptrdiff_t>(pos), std::move(c));
    return g;
}

bool is_axiom(RuleTag t) { return t == RuleTag::Id1 || t == RuleTag::Id2 || t == RuleTag::BotL; }
bool is_r1(RuleTag t) { return t == RuleTag::ImpR1 || t == RuleTag::ForallR1; }
bool is_r2(RuleTag t) { return t == RuleTag::ImpR2 || t == RuleTag::ForallR2; }
RuleTag r2_of(RuleTag t) { return t == RuleTag::ImpR1 ? RuleTag::ImpR2 : RuleTag::ForallR2; }
RuleTag r1_of(RuleTag t) { return t == RuleTag::ImpR2 ? RuleTag::ImpR1 : RuleTag::ForallR1; }

std::optional<std::size_t> inserted(const DerivNode& n, std::size_t j) {
    if (is_r1(n.rule.tag)) return n.conclusion.size();
    if (is_r2(n.rule.tag) && j == 0) return n.rule.principal[0].comp + 1;
    return std::nullopt;
}

std::size_t map_pos(const DerivNode& n, std::size_t j, std::size_t pos) {
    auto q = inserted(n, j);
    return q && pos >= *q ? pos + 1 : pos;
}

RuleInstance remap(RuleInstance r, const std::function<std::size_t(std::size_t)>& f) {
    for (auto& o : r.principal) o.comp = f(o.comp);
    return r;
}

RuleInstance moved(const RuleInstance& r, std::size_t comp) {
    RuleInstance out = r;
    out.principal[0].comp = comp;
    return out;
}

Component new_comp(RuleTag t, const Formula& f, const std::optional<std::string>& eigen) {
    Component c;
    if (t == RuleTag::ImpR1 || t == RuleTag::ImpR2) {
        c.ante = {f.lhs()};
        c.cons = {f.rhs()};
    } else {
        c.cons = {instantiate(f, Term::param(*eigen))};
    }
    return c;
}

void need_official(const Derivation& d, const char* op) {
    if (!is_official(d->rule.tag))
        throw ShapeError(std::string(op) + " expects an official derivation, found " + rule_name(d->rule.tag));
}

std::set<std::string> params_of(const Multiset& m) {
    std::set<std::string> out;
    for (const auto& f : m) collect_params(f, out);
    return out;
}

Eigen refresh_eigen(const DerivNode& n, const std::set<std::string>& avoid) {
    Eigen out{n.rule, n.premises};
    if (!n.rule.eigen || !avoid.count(*n.rule.eigen)) return out;
    const std::string& e = *n.rule.eigen;
    std::set<std::string> all = avoid;
    all.insert(e);
    for (const auto& p : params(n.conclusion)) all.insert(p);
    for (const auto& p : n.premises)
        for (const auto& q : params(p->conclusion)) all.insert(q);
    std::string c = fresh_param(all);
    for (auto& p : out.premises) p = rename_param(p, e, c);
    out.rule.eigen = c;
    return out;
}

std::vector<std::size_t> unit(std::size_t n, std::size_t i) {
    std::vector<std::size_t> k(n, 0);
    k[i] = 1;
    return k;
}

}  // namespace detail

using namespace detail;

// ---------------------------------------------------------------- identity

Derivation derive_identity(const Formula& a, const Sequent& ctx, std::size_t pos) {
    if (pos >= ctx.size()) throw PositionError("identity position out of range");
    Sequent g = added(added(ctx, pos, Side::L, a), pos, Side::R, a);
    switch (a.op()) {
        case Op::Atom: {
            RuleInstance r;
            r.tag = RuleTag::Id1;
            r.principal = {{pos, Side::L, a}, {pos, Side::R, a}};
            return node(g, r, {});
        }
        case Op::Bot: return node(g, rule_at(RuleTag::BotL, pos, Side::L, a), {});
        case Op::And: {
            Derivation b = derive_identity(a.lhs(), added(ctx, pos, Side::L, a.rhs()), pos);
            Derivation c = derive_identity(a.rhs(), added(ctx, pos, Side::L, a.lhs()), pos);
            Sequent mid = added(added(added(ctx, pos, Side::L, a.lhs()), pos, Side::L, a.rhs()), pos, Side::R, a);
            Derivation r = node(mid, rule_at(RuleTag::AndR, pos, Side::R, a), {b, c});
            return node(g, rule_at(RuleTag::AndL, pos, Side::L, a), {r});
        }
        case Op::Or: {
            Derivation b = derive_identity(a.lhs(), added(ctx, pos, Side::R, a.rhs()), pos);
            Derivation c = derive_identity(a.rhs(), added(ctx, pos, Side::R, a.lhs()), pos);
            Sequent mid = added(added(added(ctx, pos, Side::R, a.lhs()), pos, Side::R, a.rhs()), pos, Side::L, a);
            Derivation l = node(mid, rule_at(RuleTag::OrL, pos, Side::L, a), {b, c});
            return node(g, rule_at(RuleTag::OrR, pos, Side::R, a), {l});
        }
        case Op::Imp:
        case Op::Forall: {
            bool imp = a.op() == Op::Imp;
            Sequent base = added(ctx, pos, Side::L, a);
            std::optional<std::string> eigen;
            if (!imp) eigen = fresh_param(params(g));
            RuleTag r1 = imp ? RuleTag::ImpR1 : RuleTag::ForallR1;
            Sequent s0 = inserted_at(base, pos + 1, new_comp(r1, a, eigen));
            Sequent s1 = added(s0, pos + 1, Side::L, a);
            Derivation top;
            if (imp) {
                Component cb{{a.lhs()}, {}};
                Component ca{{a}, {a.rhs()}};
                Derivation dc = derive_identity(a.rhs(), inserted_at(base, pos + 1, cb), pos + 1);
                Derivation db = derive_identity(a.lhs(), inserted_at(base, pos + 1, ca), pos + 1);
                top = node(s1, rule_at(RuleTag::ImpL, pos + 1, Side::L, a), {dc, db});
            } else {
                Formula inst = instantiate(a, Term::param(*eigen));
                Derivation di = derive_identity(inst, inserted_at(base, pos + 1, Component{{a}, {}}), pos + 1);
                RuleInstance fl = rule_at(RuleTag::ForallL, pos + 1, Side::L, a);
                fl.witness = eigen;
                top = node(s1, fl, {di});
            }
            Derivation lifted = node(s0, rule_at(RuleTag::Lift, pos, Side::L, a), {top});
            if (pos + 1 == ctx.size()) {
                RuleInstance r = rule_at(r1, pos, Side::R, a);
                r.eigen = eigen;
                return node(g, r, {lifted});
            }
            Derivation rest = derive_identity(a, base, pos + 1);
            Derivation p1 = node(added(base, pos + 1, Side::R, a), rule_at(RuleTag::Lift, pos, Side::L, a), {rest});
            RuleInstance r = rule_at(r2_of(r1), pos, Side::R, a);
            r.eigen = eigen;
            return node(g, r, {lifted, p1});
        }
        case Op::Exists: {
            std::string e = fresh_param(params(g));
            Formula inst = instantiate(a, Term::param(e));
            Derivation di = derive_identity(inst, added(ctx, pos, Side::R, a), pos);
            RuleInstance er = rule_at(RuleTag::ExistsR, pos, Side::R, a);
            er.witness = e;
            Derivation r = node(added(added(ctx, pos, Side::L, inst), pos, Side::R, a), er, {di});
            RuleInstance el = rule_at(RuleTag::ExistsL, pos, Side::L, a);
            el.eigen = e;
            return node(g, el, {r});
        }
    }
    throw InternalError("unreachable");
}

Derivation derive_identity(const Formula& a) { return derive_identity(a, empty_sequent(1), 0); }

// ---------------------------------------------------------------- rename

namespace {

Derivation rename_rec(const Derivation& d, const std::string& a, const std::string& b) {
    if (!has_param(d->conclusion, a)) return d;
    if (d->rule.tag == RuleTag::Sub) throw ShapeError("rename_param does not traverse Sub nodes; normalize first");
    Sequent g = rename_param_sequent(d->conclusion, a, b);
    Eigen fr = refresh_eigen(*d, {b});
    RuleInstance r = fr.rule;
    for (auto& o : r.principal)
        if (o.formula.valid()) o.formula = rename_param_formula(o.formula, a, b);
    if (r.witness && *r.witness == a) r.witness = b;
    if (r.cut) r.cut->cut_formula = rename_param_formula(r.cut->cut_formula, a, b);
    for (auto& p : fr.premises) p = rename_rec(p, a, b);
    return node(std::move(g), std::move(r), std::move(fr.premises));
}

}  // namespace

Derivation rename_param(const Derivation& d, const std::string& a, const std::string& b) {
    if (a == b) return d;
    return rename_rec(d, a, b);
}

// ---------------------------------------------------------------- weakening

Derivation admit_iw(const Derivation& d, std::size_t pos, const Multiset& add_l, const Multiset& add_r) {
    if (pos >= d->conclusion.size()) throw PositionError("weakening position out of range");
    if (add_l.empty() && add_r.empty()) return d;
    need_official(d, "admit_iw");
    Sequent g = d->conclusion;
    g[pos].ante = ms_union(g[pos].ante, add_l);
    g[pos].cons = ms_union(g[pos].cons, add_r);
    if (is_axiom(d->rule.tag)) return node(g, d->rule, {});
    auto avoid = params_of(add_l);
    for (const auto& p : params_of(add_r)) avoid.insert(p);
    Eigen fr = refresh_eigen(*d, avoid);
    for (std::size_t j = 0; j < fr.premises.size(); ++j)
        fr.premises[j] = admit_iw(fr.premises[j], map_pos(*d, j, pos), add_l, add_r);
    return node(g, fr.rule, fr.premises);
}

Derivation weaken_to(const Derivation& d, const Sequent& target) {
    const Sequent& g = d->conclusion;
    if (g.size() != target.size()) throw InternalError("weaken_to: length mismatch");
    Derivation out = d;
    for (std::size_t j = 0; j < g.size(); ++j) {
        auto l = ms_difference(target[j].ante, g[j].ante);
        auto r = ms_difference(target[j].cons, g[j].cons);
        if (!l || !r) throw InternalError("weaken_to: target does not contain " + g.str());
        out = admit_iw(out, j, *l, *r);
    }
    return out;
}

// ---------------------------------------------------------------- bot right

Derivation admit_bot_r(const Derivation& d, std::size_t pos) {
    const Formula bot = Formula::bot();
    if (pos >= d->conclusion.size() || !ms_contains(d->conclusion[pos].cons, bot))
        throw PositionError("no bot in the consequent of component " + std::to_string(pos));
    need_official(d, "admit_bot_r");
    Sequent g = removed(d->conclusion, pos, Side::R, bot);
    if (is_axiom(d->rule.tag)) return node(g, d->rule, {});
    std::vector<Derivation> ps;
    for (std::size_t j = 0; j < d->premises.size(); ++j) ps.push_back(admit_bot_r(d->premises[j], map_pos(*d, j, pos)));
    return node(g, d->rule, ps);
}

// ---------------------------------------------------------------- lowering

Derivation admit_lwr(const Derivation& d, std::size_t pos, const Formula& f) {
    const Sequent& g0 = d->conclusion;
    if (pos + 1 >= g0.size()) throw PositionError("lowering needs a following component");
    if (!ms_contains(g0[pos].cons, f)) throw PositionError(f.str() + " is not in the consequent of component " + std::to_string(pos));
    need_official(d, "admit_lwr");
    Sequent g = added(removed(g0, pos, Side::R, f), pos + 1, Side::R, f);
    const RuleInstance& r = d->rule;
    if (is_axiom(r.tag)) return node(g, *find_axiom(g), {});
    const Occurrence& o = r.principal[0];
    bool principal = o.side == Side::R && o.comp == pos && o.formula == f && ms_count(g0[pos].cons, f) == 1;
    if (principal) {
        const auto& ps = d->premises;
        switch (r.tag) {
            case RuleTag::AndR:
                return node(g, moved(r, pos + 1), {admit_lwr(ps[0], pos, f.lhs()), admit_lwr(ps[1], pos, f.rhs())});
            case RuleTag::OrR:
                return node(g, moved(r, pos + 1), {admit_lwr(admit_lwr(ps[0], pos, f.lhs()), pos, f.rhs())});
            case RuleTag::ExistsR: {
                Formula inst = instantiate(f, Term::param(*r.witness));
                return node(g, moved(r, pos + 1), {admit_lwr(admit_lwr(ps[0], pos, inst), pos, f)});
            }
            case RuleTag::ImpR2:
            case RuleTag::ForallR2: return ps[1];
            default: throw InternalError("unexpected principal rule under lowering");
        }
    }
    std::vector<Derivation> ps;
    for (std::size_t j = 0; j < d->premises.size(); ++j) {
        auto q = inserted(*d, j);
        if (q && *q == pos + 1) {
            ps.push_back(admit_lwr(admit_lwr(d->premises[j], pos, f), pos + 1, f));
        } else {
            ps.push_back(admit_lwr(d->premises[j], map_pos(*d, j, pos), f));
        }
    }
    return node(g, r, ps);
}

// ---------------------------------------------------------------- external weakening

Derivation admit_ew(const Derivation& d, std::size_t pos) {
    const Sequent& g0 = d->conclusion;
    std::size_t n = g0.size();
    if (pos > n) throw PositionError("empty component position out of range");
    need_official(d, "admit_ew");
    Sequent g = inserted_at(g0, pos, Component{});
    auto shift = [pos](std::size_t c) { return c >= pos ? c + 1 : c; };
    const RuleInstance& r = d->rule;
    if (is_axiom(r.tag)) return node(g, remap(r, shift), {});
    const Occurrence& o = r.principal[0];
    const auto& ps = d->premises;
    if (r.tag == RuleTag::Lift && pos == o.comp + 1) {
        std::size_t i = o.comp;
        Derivation x = admit_iw(admit_ew(ps[0], i + 1), i + 1, {o.formula}, {});
        Derivation y = node(added(g, i + 1, Side::L, o.formula), rule_at(RuleTag::Lift, i + 1, Side::L, o.formula), {x});
        return node(g, r, {y});
    }
    if (is_r1(r.tag) && pos == n) {
        Derivation left = admit_ew(ps[0], n + 1);
        Sequent mid = added(removed(g, n - 1, Side::R, o.formula), n, Side::R, o.formula);
        Derivation right = node(mid, moved(r, n), {admit_ew(ps[0], n)});
        RuleInstance r2 = r;
        r2.tag = r2_of(r.tag);
        return node(g, r2, {left, right});
    }
    if (is_r2(r.tag) && pos == o.comp + 1) {
        std::size_t i = o.comp;
        Derivation left = admit_ew(ps[0], i + 2);
        Sequent mid = added(removed(g, i, Side::R, o.formula), i + 1, Side::R, o.formula);
        Derivation right = node(mid, moved(r, i + 1), {admit_ew(ps[0], i + 1), admit_ew(ps[1], i + 1)});
        return node(g, r, {left, right});
    }
    std::vector<Derivation> out;
    for (std::size_t j = 0; j < ps.size(); ++j) out.push_back(admit_ew(ps[j], map_pos(*d, j, pos)));
    return node(g, remap(r, shift), out);
}

// ---------------------------------------------------------------- merge

Derivation admit_merge(const Derivation& d, std::size_t pos) {
    const Sequent& g0 = d->conclusion;
    if (pos + 1 >= g0.size()) throw PositionError("merge needs components " + std::to_string(pos) + " and " + std::to_string(pos + 1));
    need_official(d, "admit_merge");
    Sequent g = merge_components(g0, pos);
    const RuleInstance& r = d->rule;
    if (is_axiom(r.tag)) return node(g, *find_axiom(g), {});
    const Occurrence& o = r.principal[0];
    const auto& ps = d->premises;
    if (r.tag == RuleTag::Lift && o.comp == pos) return admit_contraction_left(admit_merge(ps[0], pos), pos, o.formula);
    if (is_r2(r.tag) && o.comp == pos) return admit_merge(ps[1], pos);
    std::vector<Derivation> out;
    for (std::size_t j = 0; j < ps.size(); ++j) out.push_back(admit_merge(ps[j], map_pos(*d, j, pos)));
    return node(g, remap(r, [pos](std::size_t c) { return c <= pos ? c : c - 1; }), out);
}

// ---------------------------------------------------------------- left inversion

namespace {

enum class LeftPart { Both, First, Second, Consequent, Instance };

Multiset replacement(const Formula& f, LeftPart part, const std::string& a) {
    switch (part) {
        case LeftPart::Both: return ms_from({f.lhs(), f.rhs()});
        case LeftPart::First: return {f.lhs()};
        case LeftPart::Second:
        case LeftPart::Consequent: return {f.rhs()};
        case LeftPart::Instance: return {instantiate(f, Term::param(a))};
    }
    return {};
}

bool matches(RuleTag t, LeftPart part) {
    switch (part) {
        case LeftPart::Both: return t == RuleTag::AndL;
        case LeftPart::First:
        case LeftPart::Second: return t == RuleTag::OrL;
        case LeftPart::Consequent: return t == RuleTag::ImpL;
        case LeftPart::Instance: return t == RuleTag::ExistsL;
    }
    return false;
}

Derivation invert_left_rec(const Derivation& d, const Formula& f, std::vector<std::size_t> k, LeftPart part,
                           const std::string& a) {
    std::size_t total = 0;
    for (auto v : k) total += v;
    if (total == 0) return d;
    need_official(d, "invert_left");
    Multiset rep = replacement(f, part, a);
    Sequent g = d->conclusion;
    for (std::size_t j = 0; j < k.size(); ++j)
        for (std::size_t t = 0; t < k[j]; ++t) {
            g = removed(g, j, Side::L, f);
            for (const auto& h : rep) ms_insert(g[j].ante, h);
        }
    const RuleInstance& r = d->rule;
    if (is_axiom(r.tag)) return node(g, r, {});
    const Occurrence& o = r.principal[0];
    if (o.side == Side::L && o.formula == f && k[o.comp] > 0) {
        std::size_t c = o.comp;
        if (r.tag == RuleTag::Lift) {
            auto k2 = k;
            ++k2[c + 1];
            Derivation cur = invert_left_rec(d->premises[0], f, k2, part, a);
            for (const auto& h : rep) {
                Sequent next = removed(cur->conclusion, c + 1, Side::L, h);
                cur = node(next, rule_at(RuleTag::Lift, c, Side::L, h), {cur});
            }
            return cur;
        }
        if (matches(r.tag, part)) {
            auto k2 = k;
            --k2[c];
            Derivation p = d->premises[part == LeftPart::Second ? 1 : 0];
            if (part == LeftPart::Instance) p = rename_param(p, *r.eigen, a);
            return invert_left_rec(p, f, k2, part, a);
        }
    }
    std::set<std::string> avoid;
    if (part == LeftPart::Instance) avoid.insert(a);
    Eigen fr = refresh_eigen(*d, avoid);
    for (std::size_t j = 0; j < fr.premises.size(); ++j) {
        auto kj = k;
        if (auto q = inserted(*d, j)) kj.insert(kj.begin() + static_cast<std::ptrdiff_t>(*q), 0);
        fr.premises[j] = invert_left_rec(fr.premises[j], f, kj, part, a);
    }
    return node(g, fr.rule, fr.premises);
}

}  // namespace

std::vector<Derivation> invert_left(const Derivation& d, const Formula& f, const std::vector<std::size_t>& k,
                                    const std::string& param) {
    const Sequent& g = d->conclusion;
    if (k.size() != g.size()) throw PositionError("multiplicity list must have one entry per component");
    std::size_t total = 0;
    for (std::size_t j = 0; j < k.size(); ++j) {
        if (ms_count(g[j].ante, f) < k[j])
            throw PositionError("component " + std::to_string(j) + " has fewer than " + std::to_string(k[j]) + " copies of " + f.str());
        total += k[j];
    }
    if (total == 0) throw PositionError("nothing to invert");
    std::string a = param.empty() ? fresh_param(params(g)) : param;
    switch (f.op()) {
        case Op::And: return {invert_left_rec(d, f, k, LeftPart::Both, a)};
        case Op::Or: return {invert_left_rec(d, f, k, LeftPart::First, a), invert_left_rec(d, f, k, LeftPart::Second, a)};
        case Op::Imp: {
            Derivation w = d;
            for (std::size_t j = 0; j < k.size(); ++j)
                if (k[j]) w = admit_iw(w, j, {}, Multiset(k[j], f.lhs()));
            return {invert_left_rec(d, f, k, LeftPart::Consequent, a), w};
        }
        case Op::Forall: {
            Derivation w = d;
            for (std::size_t j = 0; j < k.size(); ++j)
                if (k[j]) w = admit_iw(w, j, Multiset(k[j], instantiate(f, Term::param(a))), {});
            return {w};
        }
        case Op::Exists:
            if (has_param(g, a)) throw EigenvariableViolation(a);
            return {invert_left_rec(d, f, k, LeftPart::Instance, a)};
        default: throw ShapeError(f.str() + " has no left inversion");
    }
}

// ---------------------------------------------------------------- right inversion

namespace {

// Premises of AndR (two) or OrR (one) for f at pos.
std::vector<Derivation> invert_andor(const Derivation& d, std::size_t pos, const Formula& f) {
    need_official(d, "invert_right");
    bool conj = f.op() == Op::And;
    Sequent base = removed(d->conclusion, pos, Side::R, f);
    std::vector<Sequent> goals;
    if (conj) {
        goals = {added(base, pos, Side::R, f.lhs()), added(base, pos, Side::R, f.rhs())};
    } else {
        goals = {added(added(base, pos, Side::R, f.lhs()), pos, Side::R, f.rhs())};
    }
    const RuleInstance& r = d->rule;
    std::vector<Derivation> out;
    if (is_axiom(r.tag)) {
        for (auto& g : goals) out.push_back(node(g, r, {}));
        return out;
    }
    const Occurrence& o = r.principal[0];
    if (o.side == Side::R && o.comp == pos && o.formula == f && r.tag == (conj ? RuleTag::AndR : RuleTag::OrR))
        return d->premises;
    std::vector<std::vector<Derivation>> subs;
    for (std::size_t j = 0; j < d->premises.size(); ++j) subs.push_back(invert_andor(d->premises[j], map_pos(*d, j, pos), f));
    for (std::size_t t = 0; t < goals.size(); ++t) {
        std::vector<Derivation> ps;
        for (auto& s : subs) ps.push_back(s[t]);
        out.push_back(node(goals[t], r, ps));
    }
    return out;
}

Derivation invert_r2_left(const Derivation& d, std::size_t pos, const Formula& f, RuleTag tag, const std::string& a);

// Left premise of ImpR1/ForallR1 for f at the last component.
Derivation invert_r1(const Derivation& d, const Formula& f, RuleTag tag, const std::string& a) {
    need_official(d, "invert_right");
    std::size_t pos = d->conclusion.size() - 1;
    std::optional<std::string> ea;
    if (tag == RuleTag::ForallR1) ea = a;
    Sequent goal = removed(d->conclusion, pos, Side::R, f);
    goal.comps.push_back(new_comp(tag, f, ea));
    const RuleInstance& r = d->rule;
    if (is_axiom(r.tag)) return node(goal, r, {});
    const Occurrence& o = r.principal[0];
    if (o.side == Side::R && o.comp == pos && o.formula == f && r.tag == tag)
        return tag == RuleTag::ForallR1 ? rename_param(d->premises[0], *r.eigen, a) : d->premises[0];
    std::set<std::string> avoid;
    if (ea) avoid.insert(a);
    Eigen fr = refresh_eigen(*d, avoid);
    if (is_r1(r.tag)) {
        const Derivation& p = fr.premises[0];
        Derivation left = invert_r1(admit_lwr(p, pos, f), f, tag, a);
        Derivation swapped = invert_r2_left(p, pos, f, r2_of(tag), a);
        Sequent mid = added(removed(goal, pos, Side::R, o.formula), pos + 1, Side::R, o.formula);
        Derivation right = node(mid, moved(fr.rule, pos + 1), {swapped});
        RuleInstance r2 = fr.rule;
        r2.tag = r2_of(r.tag);
        return node(goal, r2, {left, right});
    }
    for (auto& p : fr.premises) p = invert_r1(p, f, tag, a);
    return node(goal, fr.rule, fr.premises);
}

// Left premise of ImpR2/ForallR2 for f at pos.
Derivation invert_r2_left(const Derivation& d, std::size_t pos, const Formula& f, RuleTag tag, const std::string& a) {
    need_official(d, "invert_right");
    std::optional<std::string> ea;
    if (tag == RuleTag::ForallR2) ea = a;
    Sequent goal = inserted_at(removed(d->conclusion, pos, Side::R, f), pos + 1, new_comp(tag, f, ea));
    auto shift = [pos](std::size_t c) { return c > pos ? c + 1 : c; };
    const RuleInstance& r = d->rule;
    if (is_axiom(r.tag)) return node(goal, remap(r, shift), {});
    const Occurrence& o = r.principal[0];
    if (o.side == Side::R && o.comp == pos && o.formula == f && r.tag == tag)
        return tag == RuleTag::ForallR2 ? rename_param(d->premises[0], *r.eigen, a) : d->premises[0];
    std::set<std::string> avoid;
    if (ea) avoid.insert(a);
    Eigen fr = refresh_eigen(*d, avoid);
    const auto& ps = fr.premises;
    if (is_r2(r.tag) && o.comp == pos) {
        Derivation first = invert_r2_left(admit_lwr(ps[0], pos, f), pos + 1, f, tag, a);
        Derivation a0 = invert_r2_left(ps[0], pos, f, tag, a);
        Derivation a1 = invert_r2_left(ps[1], pos, f, tag, a);
        Sequent mid = added(removed(goal, pos, Side::R, o.formula), pos + 1, Side::R, o.formula);
        Derivation second = node(mid, moved(fr.rule, pos + 1), {a0, a1});
        return node(goal, fr.rule, {first, second});
    }
    if (r.tag == RuleTag::Lift && o.comp == pos) {
        Derivation x = admit_iw(invert_r2_left(ps[0], pos, f, tag, a), pos + 1, {o.formula}, {});
        Derivation y = node(added(goal, pos + 1, Side::L, o.formula), rule_at(RuleTag::Lift, pos + 1, Side::L, o.formula), {x});
        return node(goal, fr.rule, {y});
    }
    std::vector<Derivation> out;
    for (std::size_t j = 0; j < ps.size(); ++j) out.push_back(invert_r2_left(ps[j], map_pos(*d, j, pos), f, tag, a));
    return node(goal, remap(fr.rule, shift), out);
}

}  // namespace

std::vector<Derivation> invert_right(const Derivation& d, RuleTag rule, std::size_t pos, const Formula& f,
                                     const std::string& param) {
    const Sequent& g = d->conclusion;
    if (pos >= g.size()) throw PositionError("component " + std::to_string(pos) + " out of range");
    if (!ms_contains(g[pos].cons, f)) throw PositionError(f.str() + " is not in the consequent of component " + std::to_string(pos));
    auto need = [&](Op op) {
        if (f.op() != op) throw ShapeError(f.str() + " is not introduced by " + rule_name(rule));
    };
    switch (rule) {
        case RuleTag::AndR: need(Op::And); return invert_andor(d, pos, f);
        case RuleTag::OrR: need(Op::Or); return invert_andor(d, pos, f);
        case RuleTag::ExistsR: {
            need(Op::Exists);
            std::string t = param.empty() ? fresh_param(params(g)) : param;
            return {admit_iw(d, pos, {}, {instantiate(f, Term::param(t))})};
        }
        case RuleTag::ImpR1:
        case RuleTag::ForallR1: {
            need(rule == RuleTag::ImpR1 ? Op::Imp : Op::Forall);
            if (pos + 1 != g.size()) throw PositionError(std::string(rule_name(rule)) + " applies only to the last component");
            std::string a = param.empty() ? fresh_param(params(g)) : param;
            if (rule == RuleTag::ForallR1 && has_param(g, a)) throw EigenvariableViolation(a);
            return {invert_r1(d, f, rule, a)};
        }
        case RuleTag::ImpR2:
        case RuleTag::ForallR2: {
            need(rule == RuleTag::ImpR2 ? Op::Imp : Op::Forall);
            if (pos + 1 >= g.size()) throw PositionError(std::string(rule_name(rule)) + " needs a following component");
            std::string a = param.empty() ? fresh_param(params(g)) : param;
            if (rule == RuleTag::ForallR2 && has_param(g, a)) throw EigenvariableViolation(a);
            return {invert_r2_left(d, pos, f, rule, a), admit_lwr(d, pos, f)};
        }
        default: throw ShapeError(std::string(rule_name(rule)) + " is not an invertible right rule");
    }
}

// ---------------------------------------------------------------- contraction

Derivation admit_contraction_left(const Derivation& d, std::size_t pos, const Formula& f) {
    const Sequent& g0 = d->conclusion;
    if (pos >= g0.size() || ms_count(g0[pos].ante, f) < 2)
        throw PositionError("contraction needs two copies of " + f.str() + " in the antecedent of component " + std::to_string(pos));
    need_official(d, "admit_contraction_left");
    Sequent g = removed(g0, pos, Side::L, f);
    const RuleInstance& r = d->rule;
    if (is_axiom(r.tag)) return node(g, *find_axiom(g), {});
    const Occurrence& o = r.principal[0];
    const auto& ps = d->premises;
    if (o.side == Side::L && o.comp == pos && o.formula == f) {
        auto k = unit(g0.size(), pos);
        switch (r.tag) {
            case RuleTag::AndL: {
                Derivation x = invert_left(ps[0], f, k)[0];
                x = admit_contraction_left(admit_contraction_left(x, pos, f.lhs()), pos, f.rhs());
                return node(g, r, {x});
            }
            case RuleTag::OrL: {
                Derivation x = admit_contraction_left(invert_left(ps[0], f, k)[0], pos, f.lhs());
                Derivation y = admit_contraction_left(invert_left(ps[1], f, k)[1], pos, f.rhs());
                return node(g, r, {x, y});
            }
            case RuleTag::ImpL: {
                Derivation x = admit_contraction_left(invert_left(ps[0], f, k)[0], pos, f.rhs());
                Derivation y = admit_contraction_left(ps[1], pos, f);
                return node(g, r, {x, y});
            }
            case RuleTag::ExistsL: {
                const std::string& e = *r.eigen;
                auto avoid = params(ps[0]->conclusion);
                avoid.insert(e);
                std::string c = fresh_param(avoid);
                Derivation x = rename_param(invert_left(ps[0], f, k, c)[0], c, e);
                x = admit_contraction_left(x, pos, instantiate(f, Term::param(e)));
                return node(g, r, {x});
            }
            case RuleTag::Lift:
            case RuleTag::ForallL: return node(g, r, {admit_contraction_left(ps[0], pos, f)});
            default: throw InternalError("unexpected principal rule under left contraction");
        }
    }
    std::vector<Derivation> out;
    for (std::size_t j = 0; j < ps.size(); ++j) out.push_back(admit_contraction_left(ps[j], map_pos(*d, j, pos), f));
    return node(g, r, out);
}

namespace {

// From the left premise of an R1/R2 instance whose other copy of f sits at pos, a
// derivation of that premise with the duplicated new component contracted.
Derivation contract_new_component(const Derivation& p, std::size_t pos, const Formula& f, const RuleInstance& r) {
    bool imp = f.op() == Op::Imp;
    RuleTag inv = imp ? RuleTag::ImpR2 : RuleTag::ForallR2;
    Derivation x;
    if (imp) {
        x = invert_right(p, inv, pos, f)[0];
    } else {
        const std::string& e = *r.eigen;
        auto avoid = params(p->conclusion);
        avoid.insert(e);
        std::string c = fresh_param(avoid);
        x = rename_param(invert_right(p, inv, pos, f, c)[0], c, e);
    }
    x = admit_merge(x, pos + 1);
    if (imp) {
        x = admit_contraction_left(x, pos + 1, f.lhs());
        return admit_contraction_right(x, pos + 1, f.rhs());
    }
    return admit_contraction_right(x, pos + 1, instantiate(f, Term::param(*r.eigen)));
}

}  // namespace

Derivation admit_contraction_right(const Derivation& d, std::size_t pos, const Formula& f) {
    const Sequent& g0 = d->conclusion;
    if (pos >= g0.size() || ms_count(g0[pos].cons, f) < 2)
        throw PositionError("contraction needs two copies of " + f.str() + " in the consequent of component " + std::to_string(pos));
    need_official(d, "admit_contraction_right");
    Sequent g = removed(g0, pos, Side::R, f);
    const RuleInstance& r = d->rule;
    if (is_axiom(r.tag)) return node(g, *find_axiom(g), {});
    const Occurrence& o = r.principal[0];
    const auto& ps = d->premises;
    if (o.side == Side::R && o.comp == pos && o.formula == f) {
        switch (r.tag) {
            case RuleTag::AndR: {
                Derivation x = admit_contraction_right(invert_right(ps[0], RuleTag::AndR, pos, f)[0], pos, f.lhs());
                Derivation y = admit_contraction_right(invert_right(ps[1], RuleTag::AndR, pos, f)[1], pos, f.rhs());
                return node(g, r, {x, y});
            }
            case RuleTag::OrR: {
                Derivation x = invert_right(ps[0], RuleTag::OrR, pos, f)[0];
                x = admit_contraction_right(admit_contraction_right(x, pos, f.lhs()), pos, f.rhs());
                return node(g, r, {x});
            }
            case RuleTag::ExistsR: return node(g, r, {admit_contraction_right(ps[0], pos, f)});
            case RuleTag::ImpR1:
            case RuleTag::ForallR1: return node(g, r, {contract_new_component(ps[0], pos, f, r)});
            case RuleTag::ImpR2:
            case RuleTag::ForallR2: {
                Derivation x = contract_new_component(ps[0], pos, f, r);
                Derivation y = admit_contraction_right(admit_lwr(ps[1], pos, f), pos + 1, f);
                return node(g, r, {x, y});
            }
            default: throw InternalError("unexpected principal rule under right contraction");
        }
    }
    std::vector<Derivation> out;
    for (std::size_t j = 0; j < ps.size(); ++j) out.push_back(admit_contraction_right(ps[j], map_pos(*d, j, pos), f));
    return node(g, r, out);
}

Derivation contract_to(const Derivation& d, const Sequent& target) {
    if (d->conclusion.size() != target.size()) throw InternalError("contract_to: length mismatch");
    Derivation out = d;
    for (std::size_t j = 0; j < target.size(); ++j) {
        for (Side s : {Side::L, Side::R}) {
            auto extra = ms_difference(d->conclusion[j].side(s), target[j].side(s));
            if (!extra) throw InternalError("contract_to: " + target.str() + " is not below " + d->conclusion.str());
            for (const auto& f : *extra)
                out = s == Side::L ? admit_contraction_left(out, j, f) : admit_contraction_right(out, j, f);
        }
    }
    return out;
}

// ---------------------------------------------------------------- structural rules

Derivation apply_structural(const DerivNode& n, const Derivation& p) {
    const RuleInstance& r = n.rule;
    const Occurrence& o = r.principal.at(0);
    switch (r.tag) {
        case RuleTag::Iw: {
            Multiset l, rr;
            for (const auto& x : r.principal) ms_insert(x.side == Side::L ? l : rr, x.formula);
            return admit_iw(p, o.comp, l, rr);
        }
        case RuleTag::IcL: return admit_contraction_left(p, o.comp, o.formula);
        case RuleTag::IcR: return admit_contraction_right(p, o.comp, o.formula);
        case RuleTag::Ew: return admit_ew(p, o.comp);
        case RuleTag::Sub: return rename_param(p, r.sub_map->first, r.sub_map->second);
        case RuleTag::Lwr: return admit_lwr(p, o.comp - 1, o.formula);
        case RuleTag::BotR: return admit_bot_r(p, o.comp);
        case RuleTag::Mrg: return admit_merge(p, o.comp);
        default: throw InternalError(std::string("not a structural rule: ") + rule_name(r.tag));
    }
}

namespace {

Derivation normalize_rec(const Derivation& d, std::unordered_map<const DerivNode*, Derivation>& memo) {
    if (auto it = memo.find(d.get()); it != memo.end()) return it->second;
    std::vector<Derivation> ps;
    bool same = true;
    for (const auto& p : d->premises) {
        ps.push_back(normalize_rec(p, memo));
        same = same && ps.back() == p;
    }
    Derivation out;
    if (is_structural(d->rule.tag)) {
        out = apply_structural(*d, ps.at(0));
    } else {
        out = same ? d : node(d->conclusion, d->rule, ps);
    }
    memo.emplace(d.get(), out);
    return out;
}

}  // namespace

Derivation normalize(const Derivation& d) {
    std::unordered_map<const DerivNode*, Derivation> memo;
    return normalize_rec(d, memo);
}

Derivation make_cut(const Derivation& left, const Derivation& right, const Formula& a, std::size_t m,
                    const std::vector<std::size_t>& k) {
    RuleInstance r;
    r.tag = RuleTag::Cut;
    r.cut = CutInstance{a, k, {m, k.empty() ? 0 : k.size() - 1}};
    return node(cut_conclusion(left->conclusion, right->conclusion, a, m, k), r, {left, right});
}

}  // namespace lnif

#include "lnif/calculus.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace lnif {

namespace {

struct TagName {
    RuleTag tag;
    const char* name;
};

constexpr std::array<TagName, 25> kTagNames = {{
    {RuleTag::Id1, "Id1"}, {RuleTag::Id2, "Id2"}, {RuleTag::BotL, "BotL"},
    {RuleTag::AndL, "AndL"}, {RuleTag::AndR, "AndR"}, {RuleTag::OrL, "OrL"},
    {RuleTag::OrR, "OrR"}, {RuleTag::ImpL, "ImpL"}, {RuleTag::ImpR1, "ImpR1"},
    {RuleTag::ImpR2, "ImpR2"}, {RuleTag::Lift, "Lift"}, {RuleTag::ForallL, "ForallL"},
    {RuleTag::ForallR1, "ForallR1"}, {RuleTag::ForallR2, "ForallR2"},
    {RuleTag::ExistsL, "ExistsL"}, {RuleTag::ExistsR, "ExistsR"}, {RuleTag::Iw, "Iw"},
    {RuleTag::IcL, "IcL"}, {RuleTag::IcR, "IcR"}, {RuleTag::Ew, "Ew"}, {RuleTag::Sub, "Sub"},
    {RuleTag::Lwr, "Lwr"}, {RuleTag::BotR, "BotR"}, {RuleTag::Mrg, "Mrg"}, {RuleTag::Cut, "Cut"},
}};

std::string occ_str(const Occurrence& o) {
    std::string s = "[" + std::to_string(o.comp) + (o.side == Side::L ? ", L" : ", R");
    if (o.formula.valid()) s += ", " + o.formula.str();
    return s + "]";
}

void need_count(const RuleInstance& r, std::size_t n) {
    if (r.principal.size() != n)
        throw SchemaMismatch(std::string(rule_name(r.tag)) + " expects " + std::to_string(n) + " principal occurrence(s)");
}

const Occurrence& need_occ(const Sequent& g, const RuleInstance& r, std::size_t idx, Side side) {
    const Occurrence& o = r.principal.at(idx);
    if (o.comp >= g.size())
        throw PositionError(std::string(rule_name(r.tag)) + ": component " + std::to_string(o.comp) + " out of range");
    if (o.side != side) throw SchemaMismatch(std::string(rule_name(r.tag)) + ": principal on the wrong side");
    if (!o.formula.valid()) throw SchemaMismatch(std::string(rule_name(r.tag)) + ": principal formula missing");
    if (!ms_contains(g[o.comp].side(side), o.formula))
        throw SchemaMismatch(std::string(rule_name(r.tag)) + ": " + occ_str(o) + " not present in conclusion");
    return o;
}

void need_op(const RuleInstance& r, const Formula& f, Op op) {
    if (f.op() != op) throw SchemaMismatch(std::string(rule_name(r.tag)) + ": principal " + f.str() + " has the wrong shape");
}

void need_last(const Sequent& g, const RuleInstance& r, std::size_t c) {
    if (c + 1 != g.size())
        throw PositionError(std::string(rule_name(r.tag)) + " applies only to the last component");
}

void need_successor(const Sequent& g, const RuleInstance& r, std::size_t c) {
    if (c + 1 >= g.size())
        throw PositionError(std::string(rule_name(r.tag)) + " needs a following component");
}

const std::string& need_eigen(const Sequent& g, const RuleInstance& r) {
    if (!r.eigen) throw SchemaMismatch(std::string(rule_name(r.tag)) + ": eigenvariable missing");
    if (has_param(g, *r.eigen)) throw EigenvariableViolation(*r.eigen);
    return *r.eigen;
}

const std::string& need_witness(const RuleInstance& r) {
    if (!r.witness) throw SchemaMismatch(std::string(rule_name(r.tag)) + ": witness missing");
    return *r.witness;
}

Sequent without(const Sequent& g, const Occurrence& o) {
    Sequent p = g;
    ms_erase(p[o.comp].side(o.side), o.formula);
    return p;
}

// Premises re-derived from the schema; excludes sub, mrg and cut.
std::vector<Sequent> schema_premises(const Sequent& g, const RuleInstance& r) {
    switch (r.tag) {
        case RuleTag::Id1: {
            need_count(r, 2);
            const auto& a = need_occ(g, r, 0, Side::L);
            const auto& b = need_occ(g, r, 1, Side::R);
            need_op(r, a.formula, Op::Atom);
            if (a.comp != b.comp || a.formula != b.formula)
                throw SchemaMismatch("Id1: atom occurrences must match within one component");
            return {};
        }
        case RuleTag::Id2: {
            need_count(r, 2);
            const auto& a = need_occ(g, r, 0, Side::L);
            const auto& b = need_occ(g, r, 1, Side::R);
            need_op(r, a.formula, Op::Atom);
            if (a.formula != b.formula) throw SchemaMismatch("Id2: atoms differ");
            if (a.comp >= b.comp) throw SchemaMismatch("Id2: consequent atom must lie in a strictly later component");
            return {};
        }
        case RuleTag::BotL: {
            need_count(r, 1);
            need_op(r, need_occ(g, r, 0, Side::L).formula, Op::Bot);
            return {};
        }
        case RuleTag::AndL:
        case RuleTag::OrL: {
            need_count(r, 1);
            const auto& o = need_occ(g, r, 0, Side::L);
            need_op(r, o.formula, r.tag == RuleTag::AndL ? Op::And : Op::Or);
            Sequent p = without(g, o);
            if (r.tag == RuleTag::AndL) {
                ms_insert(p[o.comp].ante, o.formula.lhs());
                ms_insert(p[o.comp].ante, o.formula.rhs());
                return {p};
            }
            Sequent q = p;
            ms_insert(p[o.comp].ante, o.formula.lhs());
            ms_insert(q[o.comp].ante, o.formula.rhs());
            return {p, q};
        }
        case RuleTag::AndR:
        case RuleTag::OrR: {
            need_count(r, 1);
            const auto& o = need_occ(g, r, 0, Side::R);
            need_op(r, o.formula, r.tag == RuleTag::AndR ? Op::And : Op::Or);
            Sequent p = without(g, o);
            if (r.tag == RuleTag::OrR) {
                ms_insert(p[o.comp].cons, o.formula.lhs());
                ms_insert(p[o.comp].cons, o.formula.rhs());
                return {p};
            }
            Sequent q = p;
            ms_insert(p[o.comp].cons, o.formula.lhs());
            ms_insert(q[o.comp].cons, o.formula.rhs());
            return {p, q};
        }
        case RuleTag::ImpL: {
            need_count(r, 1);
            const auto& o = need_occ(g, r, 0, Side::L);
            need_op(r, o.formula, Op::Imp);
            Sequent p = without(g, o);
            ms_insert(p[o.comp].ante, o.formula.rhs());
            Sequent q = g;
            ms_insert(q[o.comp].cons, o.formula.lhs());
            return {p, q};
        }
        case RuleTag::ImpR1:
        case RuleTag::ForallR1: {
            need_count(r, 1);
            const auto& o = need_occ(g, r, 0, Side::R);
            bool imp = r.tag == RuleTag::ImpR1;
            need_op(r, o.formula, imp ? Op::Imp : Op::Forall);
            need_last(g, r, o.comp);
            Sequent p = without(g, o);
            Component c;
            if (imp) {
                c.ante = {o.formula.lhs()};
                c.cons = {o.formula.rhs()};
            } else {
                c.cons = {instantiate(o.formula, Term::param(need_eigen(g, r)))};
            }
            p.comps.push_back(std::move(c));
            return {p};
        }
        case RuleTag::ImpR2:
        case RuleTag::ForallR2: {
            need_count(r, 1);
            const auto& o = need_occ(g, r, 0, Side::R);
            bool imp = r.tag == RuleTag::ImpR2;
            need_op(r, o.formula, imp ? Op::Imp : Op::Forall);
            need_successor(g, r, o.comp);
            Sequent base = without(g, o);
            Sequent p = base;
            Component c;
            if (imp) {
                c.ante = {o.formula.lhs()};
                c.cons = {o.formula.rhs()};
            } else {
                c.cons = {instantiate(o.formula, Term::param(need_eigen(g, r)))};
            }
            p.comps.insert(p.comps.begin() + static_cast<std::ptrdiff_t>(o.comp + 1), std::move(c));
            Sequent q = base;
            ms_insert(q[o.comp + 1].cons, o.formula);
            return {p, q};
        }
        case RuleTag::Lift: {
            need_count(r, 1);
            const auto& o = need_occ(g, r, 0, Side::L);
            need_successor(g, r, o.comp);
            Sequent p = g;
            ms_insert(p[o.comp + 1].ante, o.formula);
            return {p};
        }
        case RuleTag::ForallL: {
            need_count(r, 1);
            const auto& o = need_occ(g, r, 0, Side::L);
            need_op(r, o.formula, Op::Forall);
            Sequent p = g;
            ms_insert(p[o.comp].ante, instantiate(o.formula, Term::param(need_witness(r))));
            return {p};
        }
        case RuleTag::ExistsR: {
            need_count(r, 1);
            const auto& o = need_occ(g, r, 0, Side::R);
            need_op(r, o.formula, Op::Exists);
            Sequent p = g;
            ms_insert(p[o.comp].cons, instantiate(o.formula, Term::param(need_witness(r))));
            return {p};
        }
        case RuleTag::ExistsL: {
            need_count(r, 1);
            const auto& o = need_occ(g, r, 0, Side::L);
            need_op(r, o.formula, Op::Exists);
            Sequent p = without(g, o);
            ms_insert(p[o.comp].ante, instantiate(o.formula, Term::param(need_eigen(g, r))));
            return {p};
        }
        case RuleTag::Iw: {
            if (r.principal.empty()) throw SchemaMismatch("Iw: nothing weakened");
            Sequent p = g;
            std::size_t comp = r.principal[0].comp;
            for (std::size_t i = 0; i < r.principal.size(); ++i) {
                const auto& o = r.principal[i];
                if (o.comp != comp) throw SchemaMismatch("Iw: weakened formulas must share one component");
                if (o.comp >= g.size()) throw PositionError("Iw: component out of range");
                if (!o.formula.valid() || !ms_erase(p[o.comp].side(o.side), o.formula))
                    throw SchemaMismatch("Iw: " + occ_str(o) + " not present in conclusion");
            }
            return {p};
        }
        case RuleTag::IcL:
        case RuleTag::IcR: {
            need_count(r, 1);
            Side s = r.tag == RuleTag::IcL ? Side::L : Side::R;
            const auto& o = need_occ(g, r, 0, s);
            Sequent p = g;
            ms_insert(p[o.comp].side(s), o.formula);
            return {p};
        }
        case RuleTag::Ew: {
            need_count(r, 1);
            std::size_t i = r.principal[0].comp;
            if (i >= g.size() || g.size() < 2) throw PositionError("Ew: component out of range");
            if (!g[i].empty()) throw SchemaMismatch("Ew: inserted component is not empty");
            Sequent p = g;
            p.comps.erase(p.comps.begin() + static_cast<std::ptrdiff_t>(i));
            return {p};
        }
        case RuleTag::Lwr: {
            need_count(r, 1);
            const auto& o = need_occ(g, r, 0, Side::R);
            if (o.comp == 0) throw PositionError("Lwr: no earlier component");
            Sequent p = without(g, o);
            ms_insert(p[o.comp - 1].cons, o.formula);
            return {p};
        }
        case RuleTag::BotR: {
            need_count(r, 1);
            const auto& o = r.principal[0];
            if (o.comp >= g.size()) throw PositionError("BotR: component out of range");
            if (!o.formula.valid() || !o.formula.is_bot() || o.side != Side::R)
                throw SchemaMismatch("BotR: principal must be bot on the right");
            Sequent p = g;
            ms_insert(p[o.comp].cons, o.formula);
            return {p};
        }
        default: throw SchemaMismatch(std::string("no schema for ") + rule_name(r.tag));
    }
}

void check_metadata(const RuleInstance& r) {
    if (has_eigen(r.tag) != r.eigen.has_value())
        throw SchemaMismatch(std::string(rule_name(r.tag)) + (r.eigen ? ": unexpected eigenvariable" : ": eigenvariable missing"));
    if (has_witness(r.tag) != r.witness.has_value())
        throw SchemaMismatch(std::string(rule_name(r.tag)) + (r.witness ? ": unexpected witness" : ": witness missing"));
    if ((r.tag == RuleTag::Sub) != r.sub_map.has_value())
        throw SchemaMismatch(std::string(rule_name(r.tag)) + ": substitution map mismatch");
    if ((r.tag == RuleTag::Cut) != r.cut.has_value())
        throw SchemaMismatch(std::string(rule_name(r.tag)) + ": cut data mismatch");
}

void check_cut(const Sequent& g, const RuleInstance& r, const std::vector<Sequent>& ps) {
    if (ps.size() != 2) throw SchemaMismatch("Cut expects two premises");
    const CutInstance& c = *r.cut;
    if (!c.cut_formula.valid()) throw CutAlignmentError("cut formula missing");
    if (c.alignment.size() != 2) throw CutAlignmentError("alignment must have two entries");
    std::size_t m = c.alignment[0], n = c.alignment[1] + 1;
    const Sequent& left = ps[0];
    const Sequent& right = ps[1];
    if (c.k.size() != n) throw CutAlignmentError("multiplicity list does not match alignment");
    if (left.size() != m + n || right.size() != m + n)
        throw CutAlignmentError("premise lengths do not match alignment");
    std::size_t total = 0;
    for (auto v : c.k) total += v;
    if (total == 0) throw CutAlignmentError("cut with no right occurrence");
    if (!ms_contains(left[m].cons, c.cut_formula)) throw CutAlignmentError("cut formula absent from left premise");
    for (std::size_t i = 0; i < n; ++i)
        if (ms_count(right[m + i].ante, c.cut_formula) < c.k[i])
            throw CutAlignmentError("right premise lacks cut formula copies at component " + std::to_string(m + i));
    if (cut_conclusion(left, right, c.cut_formula, m, c.k) != g)
        throw SchemaMismatch("Cut: conclusion is not the splice of the premises");
}

}  // namespace

const char* rule_name(RuleTag t) {
    for (const auto& e : kTagNames)
        if (e.tag == t) return e.name;
    return "?";
}

std::optional<RuleTag> rule_from_name(std::string_view s) {
    for (const auto& e : kTagNames)
        if (s == e.name) return e.tag;
    return std::nullopt;
}

bool is_official(RuleTag t) { return static_cast<int>(t) <= static_cast<int>(RuleTag::ExistsR); }
bool is_structural(RuleTag t) { return !is_official(t) && t != RuleTag::Cut; }
bool has_eigen(RuleTag t) { return t == RuleTag::ForallR1 || t == RuleTag::ForallR2 || t == RuleTag::ExistsL; }
bool has_witness(RuleTag t) { return t == RuleTag::ForallL || t == RuleTag::ExistsR; }

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Official: return "official";
        case Mode::Extended: return "extended";
        default: return "with-cut";
    }
}

std::optional<Mode> mode_from_name(std::string_view s) {
    if (s == "official") return Mode::Official;
    if (s == "extended") return Mode::Extended;
    if (s == "with-cut") return Mode::WithCut;
    return std::nullopt;
}

RuleInstance rule_at(RuleTag tag, std::size_t comp, Side side, const Formula& f) {
    RuleInstance r;
    r.tag = tag;
    r.principal.push_back({comp, side, f});
    return r;
}

Derivation make_derivation(Sequent conclusion, RuleInstance rule, std::vector<Derivation> premises) {
    auto n = std::make_shared<DerivNode>();
    n->conclusion = std::move(conclusion);
    n->rule = std::move(rule);
    std::size_t h = 0;
    for (const auto& p : premises) h = std::max(h, p->height);
    n->height = h + 1;
    n->premises = std::move(premises);
    return n;
}

std::size_t height(const Derivation& d) { return d->height; }

std::size_t node_count(const Derivation& d) {
    std::size_t n = 1;
    for (const auto& p : d->premises) n += node_count(p);
    return n;
}

bool contains_tag(const Derivation& d, RuleTag t) {
    std::unordered_set<const DerivNode*> seen;
    std::vector<const DerivNode*> stack{d.get()};
    while (!stack.empty()) {
        const DerivNode* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n->rule.tag == t) return true;
        for (const auto& p : n->premises) stack.push_back(p.get());
    }
    return false;
}

bool is_cut_free(const Derivation& d) { return !contains_tag(d, RuleTag::Cut); }

bool uses_only_official(const Derivation& d) {
    std::unordered_set<const DerivNode*> seen;
    std::vector<const DerivNode*> stack{d.get()};
    while (!stack.empty()) {
        const DerivNode* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (!is_official(n->rule.tag)) return false;
        for (const auto& p : n->premises) stack.push_back(p.get());
    }
    return true;
}

void check_node(const Sequent& g, const RuleInstance& r, const std::vector<Sequent>& ps, Mode mode) {
    if (mode == Mode::Official && !is_official(r.tag))
        throw SchemaMismatch(std::string(rule_name(r.tag)) + " is not allowed in official mode");
    if (mode == Mode::Extended && r.tag == RuleTag::Cut) throw SchemaMismatch("Cut is not allowed in extended mode");
    if (g.size() == 0) throw SchemaMismatch("empty sequent");
    check_metadata(r);
    switch (r.tag) {
        case RuleTag::Cut: check_cut(g, r, ps); return;
        case RuleTag::Sub: {
            if (ps.size() != 1) throw SchemaMismatch("Sub expects one premise");
            if (rename_param_sequent(ps[0], r.sub_map->first, r.sub_map->second) != g)
                throw SchemaMismatch("Sub: conclusion is not the renamed premise");
            return;
        }
        case RuleTag::Mrg: {
            need_count(r, 1);
            if (ps.size() != 1) throw SchemaMismatch("Mrg expects one premise");
            std::size_t i = r.principal[0].comp;
            if (i + 1 >= ps[0].size()) throw PositionError("Mrg: component out of range");
            if (merge_components(ps[0], i) != g) throw SchemaMismatch("Mrg: conclusion is not the merged premise");
            return;
        }
        default: break;
    }
    std::vector<Sequent> expected = schema_premises(g, r);
    if (expected.size() != ps.size())
        throw SchemaMismatch(std::string(rule_name(r.tag)) + " expects " + std::to_string(expected.size()) + " premise(s)");
    for (std::size_t i = 0; i < ps.size(); ++i)
        if (expected[i] != ps[i])
            throw SchemaMismatch(std::string(rule_name(r.tag)) + ": premise " + std::to_string(i) + " should be " +
                                 expected[i].str() + " but is " + ps[i].str());
}

std::string CheckResult::path_str() const {
    std::string s = "root";
    for (auto i : path) s += "." + std::to_string(i);
    return s;
}

namespace {
bool check_rec(const DerivNode& n, Mode mode, CheckResult& res, std::unordered_set<const DerivNode*>& done) {
    if (done.count(&n)) return true;
    std::vector<Sequent> ps;
    ps.reserve(n.premises.size());
    for (const auto& p : n.premises) ps.push_back(p->conclusion);
    try {
        check_node(n.conclusion, n.rule, ps, mode);
    } catch (const Error& e) {
        res.ok = false;
        res.kind = e.kind();
        res.message = e.what();
        return false;
    }
    for (std::size_t i = 0; i < n.premises.size(); ++i) {
        res.path.push_back(i);
        if (!check_rec(*n.premises[i], mode, res, done)) return false;
        res.path.pop_back();
    }
    done.insert(&n);
    return true;
}
}  // namespace

CheckResult check_derivation(const Derivation& d, Mode mode) {
    CheckResult res;
    std::unordered_set<const DerivNode*> done;
    check_rec(*d, mode, res, done);
    return res;
}

std::vector<Sequent> apply_backward(const Sequent& g, RuleInstance& r) {
    if (r.tag == RuleTag::Sub || r.tag == RuleTag::Mrg || r.tag == RuleTag::Cut)
        throw NotApplicable(std::string(rule_name(r.tag)) + " has no unique backward reading");
    for (const auto& o : r.principal)
        if (o.comp >= g.size()) throw PositionError(std::string(rule_name(r.tag)) + ": component out of range");
    if (has_eigen(r.tag) && !r.eigen) r.eigen = fresh_param(params(g));
    if (has_witness(r.tag) && !r.witness) r.witness = fresh_param(params(g));
    try {
        return schema_premises(g, r);
    } catch (const SchemaMismatch& e) {
        throw NotApplicable(e.what());
    }
}

std::vector<Sequent> apply_backward(const Sequent& g, const RuleInstance& r) {
    RuleInstance copy = r;
    return apply_backward(g, copy);
}

Sequent cut_conclusion(const Sequent& left, const Sequent& right, const Formula& a, std::size_t m,
                       const std::vector<std::size_t>& k) {
    Sequent l = left;
    if (!ms_erase(l[m].cons, a)) throw CutAlignmentError("cut formula absent from left premise");
    Sequent r = right;
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = 0; j < k[i]; ++j)
            if (!ms_erase(r[m + i].ante, a)) throw CutAlignmentError("missing cut formula copy");
    return splice(l, r);
}

std::optional<RuleInstance> find_axiom(const Sequent& g) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (const auto& f : g[i].ante) {
            if (f.is_bot()) return rule_at(RuleTag::BotL, i, Side::L, f);
        }
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (const auto& f : g[i].ante) {
            if (!f.is_atom()) continue;
            for (std::size_t j = i; j < g.size(); ++j) {
                if (ms_contains(g[j].cons, f)) {
                    RuleInstance r;
                    r.tag = j == i ? RuleTag::Id1 : RuleTag::Id2;
                    r.principal = {{i, Side::L, f}, {j, Side::R, f}};
                    return r;
                }
            }
        }
    }
    return std::nullopt;
}

Sequent merge_components(const Sequent& g, std::size_t i) {
    Sequent out = g;
    out[i].ante = ms_union(g[i].ante, g[i + 1].ante);
    out[i].cons = ms_union(g[i].cons, g[i + 1].cons);
    out.comps.erase(out.comps.begin() + static_cast<std::ptrdiff_t>(i + 1));
    return out;
}

}  // namespace lnif

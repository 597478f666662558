// Acceptance harness: one PASS/FAIL line per criterion, thresholds pinned below.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "lnif/latex.hpp"
#include "lnif/serialize.hpp"
#include "support/random_gen.hpp"

using namespace lnif;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kAxiomBudgetSeconds = 60;
constexpr std::size_t kRediscoverDepth = 40;
constexpr std::size_t kMinCutCases = 50;
constexpr std::size_t kMinHeightDerivations = 200;
constexpr std::size_t kEnumConnectives = 7;
constexpr double kEnumBudgetSeconds = 300;
constexpr std::size_t kCountermodelWorlds = 3;
constexpr std::size_t kPersistenceModels = 1000;
constexpr std::size_t kFormulasPerModel = 20;
constexpr std::size_t kMinPerTransform = 100;
constexpr std::uint64_t kSeed = 20240601;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// Tallies applications and keeps the first failure.
struct Tally {
    std::size_t runs = 0;
    std::size_t bad = 0;
    std::string first;

    void fail(const std::string& why) {
        ++bad;
        if (first.empty()) first = why;
    }
    void expect(bool ok, const std::string& why) {
        ++runs;
        if (!ok) fail(why);
    }
    template <class F>
    void attempt(const std::string& what, F&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            ++runs;
            fail(what + ": " + e.what());
        }
    }
};

bool official(const Derivation& d) { return check_derivation(d, Mode::Official).ok; }

Formula P(const std::string& s) { return parse_formula(s); }

// ---------------------------------------------------------------- 1

struct Result {
    bool pass;
    std::string detail;
};

Result axiom_corpus() {
    auto t0 = Clock::now();
    std::size_t built = 0, found = 0;
    std::string missing;
    ProverConfig cfg;
    cfg.depth = kRediscoverDepth;
    for (std::size_t i = 0; i < kSchemaCount; ++i) {
        auto s = static_cast<Schema>(i);
        AxiomArgs args = default_axiom_args(s);
        Formula f = axiom_formula(s, args);
        Derivation d = prove_axiom(s, args);
        if (d->conclusion == Sequent::single({}, {f}) && official(d)) ++built;
        ProveResult r = prove(f, cfg);
        if (r.ok() && official(r.proof) && r.proof->conclusion == d->conclusion)
            ++found;
        else
            missing += std::string(missing.empty() ? "" : ",") + schema_name(s);
    }
    double secs = since(t0);
    std::ostringstream out;
    out << built << "/" << kSchemaCount << " constructed, " << found << "/" << kSchemaCount << " rediscovered at depth "
        << kRediscoverDepth << ", " << secs << " s";
    if (!missing.empty()) out << "; not rediscovered: " << missing;
    return {built == kSchemaCount && found == kSchemaCount && secs <= kAxiomBudgetSeconds, out.str()};
}

// ---------------------------------------------------------------- 2

AxiomArgs pair_args(const Formula& a, const Formula& b) {
    AxiomArgs args;
    args.a = a;
    args.b = b;
    return args;
}

Result cut_elimination() {
    std::vector<Derivation> theorems;
    for (std::size_t i = 0; i < kSchemaCount; ++i) {
        auto s = static_cast<Schema>(i);
        theorems.push_back(prove_axiom(s, default_axiom_args(s)));
    }
    for (const char* t : {"p -> p", "(p -> q) | (q -> p)", "p & q -> q & p", "~p | ~~p", "(forall x. P(x)) -> exists x. P(x)"})
        theorems.push_back(prove(P(t)).proof);
    Tally tally;
    std::size_t checks = 0;
    auto run = [&](const Derivation& da, const Derivation& dimp) {
        tally.attempt("mp", [&] {
            Derivation c = mp_cut(da, dimp);
            if (!check_derivation(c, Mode::WithCut).ok) throw std::runtime_error("mp composition is not with-cut valid");
            CutStats st;
            Derivation e = eliminate_cut(c, &st);
            checks += st.measure_checks;
            bool ok = is_cut_free(e) && official(e) && e->conclusion == c->conclusion && st.measure_checks > 0;
            Derivation b = admit_merge(e, 0);
            ok = ok && official(b) && b->conclusion == Sequent::single({}, {dimp->conclusion[0].cons[0].rhs()});
            tally.expect(ok, "mp on " + da->conclusion.str() + " and " + dimp->conclusion.str());
        });
    };
    // A with K: |- A and |- A -> (C -> A) give |- C -> A.
    for (std::size_t i = 0; i < theorems.size(); ++i)
        for (std::size_t j = 0; j < theorems.size(); j += 3) {
            Formula a = theorems[i]->conclusion[0].cons[0];
            Formula c = theorems[j]->conclusion[0].cons[0];
            run(theorems[i], prove_axiom(Schema::K, pair_args(a, c)));
        }
    // Conjunction introduction twice over: |- A, |- A -> B -> A & B, then |- B.
    for (std::size_t i = 0; i + 1 < theorems.size(); ++i) {
        Formula a = theorems[i]->conclusion[0].cons[0];
        Formula b = theorems[i + 1]->conclusion[0].cons[0];
        tally.attempt("chain", [&] {
            Derivation step = simulate_mp(theorems[i], prove_axiom(Schema::AndIntro, pair_args(a, b)));
            run(theorems[i + 1], step);
        });
    }
    std::ostringstream out;
    out << tally.runs - tally.bad << "/" << tally.runs << " cases cut-free and valid, " << checks << " measure checks";
    if (!tally.first.empty()) out << "; first failure: " << tally.first;
    return {tally.bad == 0 && tally.runs >= kMinCutCases, out.str()};
}

// ---------------------------------------------------------------- 3 and 7

Sequent add(Sequent g, std::size_t pos, Side s, const Formula& f, std::size_t n = 1) {
    for (std::size_t i = 0; i < n; ++i) ms_insert(g[pos].side(s), f);
    return g;
}
Sequent drop(Sequent g, std::size_t pos, Side s, const Formula& f, std::size_t n = 1) {
    for (std::size_t i = 0; i < n; ++i) ms_erase(g[pos].side(s), f);
    return g;
}

struct Harness {
    testgen::Gen gen{kSeed};
    std::map<std::string, Tally> ops;
    std::map<std::string, Tally> heights;

    void note(const std::string& op, const Derivation& out, const Sequent& want) {
        ops[op].expect(official(out) && out->conclusion == want, op + " on " + want.str());
    }
    void hp(const std::string& op, const Derivation& in, const Derivation& out) {
        heights[op].expect(height(out) <= height(in), op + " grew height at " + in->conclusion.str());
    }
    template <class F>
    void guard(const std::string& op, F&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            ops[op].runs++;
            ops[op].fail(op + ": " + e.what());
        }
    }

    std::optional<std::pair<std::size_t, Formula>> right_of(const Sequent& g, std::initializer_list<Op> shapes) {
        std::vector<std::pair<std::size_t, Formula>> c;
        for (std::size_t i = 0; i < g.size(); ++i)
            for (const auto& f : g[i].cons)
                for (Op o : shapes)
                    if (f.op() == o) c.emplace_back(i, f);
        if (c.empty()) return std::nullopt;
        return c[gen.below(c.size())];
    }

    void all_ops(const Derivation& d) {
        const Sequent& g = d->conclusion;
        std::size_t pos = gen.below(g.size());

        guard("derive_identity", [&] {
            Formula a = gen.any(gen.below(4));
            note("derive_identity", derive_identity(a, g, pos), add(add(g, pos, Side::L, a), pos, Side::R, a));
        });
        guard("admit_bot_r", [&] {
            Derivation w = admit_iw(d, pos, {}, {Formula::bot()});
            Derivation e = admit_bot_r(w, pos);
            note("admit_bot_r", e, g);
            hp("admit_bot_r", w, e);
        });
        guard("rename_param", [&] {
            std::set<std::string> ps = params(g);
            std::string a = ps.empty() ? "a" : *std::next(ps.begin(), static_cast<std::ptrdiff_t>(gen.below(ps.size())));
            std::string b = gen.chance(0.5) ? "b" : "a0";
            Derivation e = rename_param(d, a, b);
            note("rename_param", e, rename_param_sequent(g, a, b));
            hp("rename_param", d, e);
        });
        guard("admit_iw", [&] {
            Multiset l = gen.multiset(2, 2), r = gen.multiset(2, 2);
            if (l.empty() && r.empty()) l = {gen.any(1)};
            Sequent want = g;
            want[pos].ante = ms_union(want[pos].ante, l);
            want[pos].cons = ms_union(want[pos].cons, r);
            Derivation e = admit_iw(d, pos, l, r);
            note("admit_iw", e, want);
            hp("admit_iw", d, e);
        });
        guard("admit_ew", [&] {
            std::size_t at = gen.below(g.size() + 1);
            Sequent want = g;
            want.comps.insert(want.comps.begin() + static_cast<std::ptrdiff_t>(at), Component{});
            note("admit_ew", admit_ew(d, at), want);
        });
        guard("admit_lwr", [&] {
            Derivation base = d;
            if (g.size() < 2) base = admit_ew(d, 1);
            const Sequent& bg = base->conclusion;
            std::size_t i = gen.below(bg.size() - 1);
            Formula f;
            if (bg[i].cons.empty()) {
                f = gen.any(gen.below(3));
                base = admit_iw(base, i, {}, {f});
            } else {
                f = gen.pick(bg[i].cons);
            }
            Derivation e = admit_lwr(base, i, f);
            note("admit_lwr", e, add(drop(base->conclusion, i, Side::R, f), i + 1, Side::R, f));
            hp("admit_lwr", base, e);
        });
        guard("invert_left", [&] {
            std::vector<std::pair<std::size_t, Formula>> c;
            for (std::size_t i = 0; i < g.size(); ++i)
                for (const auto& f : g[i].ante)
                    if (!f.is_atom() && !f.is_bot()) c.emplace_back(i, f);
            Derivation base = d;
            Formula f;
            std::size_t i;
            if (c.empty()) {
                static const char* shapes[] = {"P(#a) & r", "P(#a) | r", "r -> P(#a)", "forall x. P(x)", "exists x. P(x)"};
                f = P(shapes[gen.below(5)]);
                i = pos;
                base = admit_iw(d, i, {f}, {});
            } else {
                std::tie(i, f) = c[gen.below(c.size())];
            }
            const Sequent& bg = base->conclusion;
            std::vector<std::size_t> k(bg.size(), 0);
            for (std::size_t j = 0; j < bg.size(); ++j) k[j] = gen.below(ms_count(bg[j].ante, f) + 1);
            if (k[i] == 0) k[i] = 1;
            std::string a = fresh_param(params(bg));
            auto outs = invert_left(base, f, k, a);
            std::vector<Sequent> want(f.op() == Op::Or || f.op() == Op::Imp ? 2 : 1, bg);
            for (std::size_t j = 0; j < bg.size(); ++j) {
                std::size_t n = k[j];
                if (!n) continue;
                switch (f.op()) {
                    case Op::And:
                        want[0] = add(add(drop(want[0], j, Side::L, f, n), j, Side::L, f.lhs(), n), j, Side::L, f.rhs(), n);
                        break;
                    case Op::Or:
                        want[0] = add(drop(want[0], j, Side::L, f, n), j, Side::L, f.lhs(), n);
                        want[1] = add(drop(want[1], j, Side::L, f, n), j, Side::L, f.rhs(), n);
                        break;
                    case Op::Imp:
                        want[0] = add(drop(want[0], j, Side::L, f, n), j, Side::L, f.rhs(), n);
                        want[1] = add(want[1], j, Side::R, f.lhs(), n);
                        break;
                    case Op::Forall: want[0] = add(want[0], j, Side::L, instantiate(f, Term::param(a)), n); break;
                    default: want[0] = add(drop(want[0], j, Side::L, f, n), j, Side::L, instantiate(f, Term::param(a)), n);
                }
            }
            bool ok = outs.size() == want.size();
            for (std::size_t t = 0; ok && t < outs.size(); ++t) ok = official(outs[t]) && outs[t]->conclusion == want[t];
            ops["invert_left"].expect(ok, "invert_left " + f.str() + " on " + bg.str());
        });
        guard("invert_right", [&] { invert_right_case(d); });
        guard("admit_contraction_left", [&] {
            Formula f = g[pos].ante.empty() ? gen.any(gen.below(3)) : gen.pick(g[pos].ante);
            Derivation w = admit_iw(d, pos, g[pos].ante.empty() ? Multiset{f, f} : Multiset{f}, {});
            Sequent want = drop(w->conclusion, pos, Side::L, f);
            note("admit_contraction_left", admit_contraction_left(w, pos, f), want);
        });
        guard("admit_contraction_right", [&] {
            Formula f = g[pos].cons.empty() ? gen.any(gen.below(3)) : gen.pick(g[pos].cons);
            Derivation w = admit_iw(d, pos, {}, g[pos].cons.empty() ? Multiset{f, f} : Multiset{f});
            Sequent want = drop(w->conclusion, pos, Side::R, f);
            note("admit_contraction_right", admit_contraction_right(w, pos, f), want);
        });
        guard("admit_merge", [&] {
            Derivation base = g.size() < 2 ? admit_ew(d, gen.below(2)) : d;
            std::size_t i = gen.below(base->conclusion.size() - 1);
            note("admit_merge", admit_merge(base, i), merge_components(base->conclusion, i));
        });
        guard("eliminate_cut", [&] {
            // Cut d's conclusion against an identity on one of its consequent formulas.
            auto at = right_of(g, {Op::Atom, Op::And, Op::Or, Op::Imp, Op::Forall, Op::Exists});
            if (!at) return;
            auto [i, f] = *at;
            Sequent ctx = empty_sequent(g.size() - i);
            Derivation right = derive_identity(f, ctx, 0);
            std::vector<std::size_t> k(g.size() - i, 0);
            k[0] = 1;
            Derivation r = right;
            for (std::size_t j = 0; j < i; ++j) r = admit_ew(r, 0);
            Derivation c = make_cut(d, r, f, i, k);
            note("eliminate_cut", eliminate_cut(c), c->conclusion);
        });
        guard("normalize", [&] {
            RuleInstance w;
            w.tag = RuleTag::Iw;
            Formula f = gen.any(2);
            w.principal = {{pos, Side::L, f}};
            Derivation s = make_derivation(add(g, pos, Side::L, f), w, {d});
            Derivation e = normalize(s);
            ops["normalize"].expect(uses_only_official(e) && official(e) && e->conclusion == s->conclusion,
                                    "normalize on " + s->conclusion.str());
        });
    }

    void invert_right_case(const Derivation& d) {
        static const RuleTag tags[] = {RuleTag::AndR, RuleTag::OrR, RuleTag::ExistsR, RuleTag::ImpR1,
                                       RuleTag::ImpR2, RuleTag::ForallR1, RuleTag::ForallR2};
        RuleTag tag = tags[gen.below(7)];
        Op shape = tag == RuleTag::AndR ? Op::And
                 : tag == RuleTag::OrR ? Op::Or
                 : tag == RuleTag::ExistsR ? Op::Exists
                 : (tag == RuleTag::ImpR1 || tag == RuleTag::ImpR2) ? Op::Imp
                                                                     : Op::Forall;
        bool last = tag == RuleTag::ImpR1 || tag == RuleTag::ForallR1;
        bool mid = tag == RuleTag::ImpR2 || tag == RuleTag::ForallR2;
        Derivation base = d;
        if (mid && base->conclusion.size() < 2) base = admit_ew(base, base->conclusion.size());
        const Sequent& g0 = base->conclusion;
        std::vector<std::pair<std::size_t, Formula>> c;
        for (std::size_t i = 0; i < g0.size(); ++i) {
            if (last && i + 1 != g0.size()) continue;
            if (mid && i + 1 == g0.size()) continue;
            for (const auto& f : g0[i].cons)
                if (f.op() == shape) c.emplace_back(i, f);
        }
        std::size_t pos;
        Formula f;
        if (c.empty()) {
            static const std::map<Op, const char*> shapes = {{Op::And, "P(#a) & r"},      {Op::Or, "P(#a) | r"},
                                                             {Op::Exists, "exists x. P(x)"}, {Op::Imp, "r -> P(#a)"},
                                                             {Op::Forall, "forall x. P(x)"}};
            f = P(shapes.at(shape));
            pos = last ? g0.size() - 1 : gen.below(mid ? g0.size() - 1 : g0.size());
            base = admit_iw(base, pos, {}, {f});
        } else {
            std::tie(pos, f) = c[gen.below(c.size())];
        }
        const Sequent& g = base->conclusion;
        std::string a = fresh_param(params(g));
        auto outs = invert_right(base, tag, pos, f, a);
        std::vector<Sequent> want;
        Sequent rm = drop(g, pos, Side::R, f);
        Component fresh;
        if (shape == Op::Imp) {
            fresh.ante = {f.lhs()};
            fresh.cons = {f.rhs()};
        } else if (shape == Op::Forall) {
            fresh.cons = {instantiate(f, Term::param(a))};
        }
        switch (tag) {
            case RuleTag::AndR: want = {add(rm, pos, Side::R, f.lhs()), add(rm, pos, Side::R, f.rhs())}; break;
            case RuleTag::OrR: want = {add(add(rm, pos, Side::R, f.lhs()), pos, Side::R, f.rhs())}; break;
            case RuleTag::ExistsR: want = {add(g, pos, Side::R, instantiate(f, Term::param(a)))}; break;
            case RuleTag::ImpR1:
            case RuleTag::ForallR1: {
                Sequent s = rm;
                s.comps.push_back(fresh);
                want = {s};
                break;
            }
            default: {
                Sequent s = rm;
                s.comps.insert(s.comps.begin() + static_cast<std::ptrdiff_t>(pos + 1), fresh);
                want = {s, add(rm, pos + 1, Side::R, f)};
            }
        }
        bool ok = outs.size() == want.size();
        for (std::size_t t = 0; ok && t < outs.size(); ++t) ok = official(outs[t]) && outs[t]->conclusion == want[t];
        ops["invert_right"].expect(ok, std::string("invert_right ") + rule_name(tag) + " " + f.str() + " on " + g.str());
        if (tag == RuleTag::AndR || tag == RuleTag::OrR || tag == RuleTag::ExistsR) {
            bool hp_ok = true;
            for (const auto& o : outs) hp_ok = hp_ok && height(o) <= height(base);
            heights["invert_right"].expect(hp_ok, std::string("invert_right ") + rule_name(tag) + " grew height");
        }
    }
};

std::string summary(const std::map<std::string, Tally>& m, std::size_t& failures, std::size_t& runs,
                    std::size_t min_each, bool& enough) {
    std::ostringstream out;
    failures = runs = 0;
    enough = true;
    std::string first;
    for (const auto& [name, t] : m) {
        out << (runs ? ", " : "") << name << " " << t.runs - t.bad << "/" << t.runs;
        failures += t.bad;
        runs += t.runs;
        if (t.runs < min_each) enough = false;
        if (first.empty()) first = t.first;
    }
    if (!first.empty()) out << "; first failure: " << first;
    return out.str();
}

// ---------------------------------------------------------------- 4

struct Enumerator {
    std::vector<std::vector<Formula>> stored;
    static constexpr std::size_t kStore = 5;

    Enumerator() {
        stored.resize(kStore + 1);
        stored[0] = {Formula::atom("p"), Formula::atom("q")};
        for (std::size_t n = 1; n <= kStore; ++n)
            each(n, [&](const Formula& f) {
                stored[n].push_back(f);
                return true;
            });
    }

    // Visits every formula with exactly n connectives; stops early when visit returns false.
    bool each(std::size_t n, const std::function<bool(const Formula&)>& visit) {
        if (n < stored.size() && !stored[n].empty()) {
            for (const auto& f : stored[n])
                if (!visit(f)) return false;
            return true;
        }
        for (std::size_t l = 0; l < n; ++l)
            for (Op op : {Op::And, Op::Or, Op::Imp}) {
                bool go = each(l, [&](const Formula& a) {
                    return each(n - 1 - l, [&](const Formula& b) { return visit(Formula::binary(op, a, b)); });
                });
                if (!go) return false;
            }
        return true;
    }
};

std::uint64_t formulas_with(std::size_t n) {
    // Catalan(n) shapes, 3 connectives per node, 2 atoms per leaf.
    std::uint64_t cat = 1;
    for (std::size_t i = 0; i < n; ++i) cat = cat * 2 * (2 * i + 1) / (i + 2);
    std::uint64_t v = cat;
    for (std::size_t i = 0; i < n; ++i) v *= 3;
    for (std::size_t i = 0; i <= n; ++i) v *= 2;
    return v;
}

Result prover_oracle() {
    auto t0 = Clock::now();
    Enumerator en;
    std::uint64_t total = 0, seen = 0, proved = 0, invalid = 0;
    std::uint64_t unsound = 0, no_model = 0;
    std::string first;
    for (std::size_t n = 0; n <= kEnumConnectives; ++n) total += formulas_with(n);
    std::size_t complete_upto = 0;
    bool timed_out = false;
    for (std::size_t n = 0; n <= kEnumConnectives && !timed_out; ++n) {
        en.each(n, [&](const Formula& f) {
            if ((seen & 63) == 0 && since(t0) > kEnumBudgetSeconds) {
                timed_out = true;
                return false;
            }
            ++seen;
            bool valid = goedel_valid(f).valid;
            if (prove(f).ok()) {
                ++proved;
                if (!valid) {
                    ++unsound;
                    if (first.empty()) first = "proved but oracle-invalid: " + f.str();
                }
            }
            if (!valid) {
                ++invalid;
                if (!find_countermodel(f, kCountermodelWorlds, 1)) {
                    ++no_model;
                    if (first.empty()) first = "no countermodel: " + f.str();
                }
            }
            return true;
        });
        if (!timed_out) complete_upto = n;
    }
    double secs = since(t0);
    std::ostringstream out;
    out << seen << "/" << total << " formulas in " << secs << " s (complete up to " << complete_upto
        << " connectives), " << proved << " proved, " << invalid << " oracle-invalid, " << unsound
        << " unsound, " << no_model << " without countermodel";
    if (timed_out) out << "; budget of " << kEnumBudgetSeconds << " s exhausted before " << kEnumConnectives << " connectives";
    if (!first.empty()) out << "; first: " << first;
    return {!timed_out && seen == total && unsound == 0 && no_model == 0, out.str()};
}

// ---------------------------------------------------------------- 5

Result non_theorems() {
    std::size_t ok = 0;
    std::string detail;
    for (const char* t : {"p | ~p", "~~p -> p", "((p -> q) -> p) -> p"}) {
        Formula f = P(t);
        ProveResult r = prove(f);
        bool goedel = !goedel_valid(f).valid;
        bool kripke = find_countermodel(f, kCountermodelWorlds, 1).has_value();
        bool good = !r.ok() && goedel && kripke;
        ok += good;
        detail += std::string(detail.empty() ? "" : ", ") + t + ": " +
                  (r.ok() ? "proved" : failure_name(*r.failure)) + (goedel ? "/chain-invalid" : "/chain-valid") +
                  (kripke ? "/countermodel" : "/no-countermodel");
    }
    return {ok == 3, detail};
}

// ---------------------------------------------------------------- 6

Result persistence() {
    testgen::Gen gen(kSeed + 6);
    const std::vector<std::pair<std::string, std::size_t>> preds = {{"P", 1}, {"Q", 1}, {"r", 0}};
    std::size_t checked = 0, violations = 0;
    for (std::size_t n = 0; n < kPersistenceModels; ++n) {
        KripkeModel m = gen.model(4, 2, preds);
        for (std::size_t k = 0; k < kFormulasPerModel; ++k) {
            Formula f = gen.fo(gen.below(7));
            if (m.domain.size() < 2 && has_param(f, "b")) f = rename_param_formula(f, "b", "a");
            ++checked;
            if (!check_persistence(m, f)) ++violations;
        }
    }
    KripkeModel broken;
    broken.worlds = 2;
    broken.domain = {"a"};
    broken.set({"p", {}}, 0);
    bool control = !check_persistence(broken, P("p"));
    std::ostringstream out;
    out << checked << " model/formula pairs, " << violations << " violations; negative control "
        << (control ? "violates" : "does not violate");
    return {violations == 0 && control, out.str()};
}

// ---------------------------------------------------------------- 8

// Structural soundness of bussproofs output: balanced braces, matched environments and a
// consistent inference stack ending in one tree per prooftree.
bool latex_well_formed(const std::string& t, std::size_t leaves, std::string& why) {
    long depth = 0;
    for (char c : t) {
        depth += c == '{' ? 1 : c == '}' ? -1 : 0;
        if (depth < 0) return why = "unbalanced braces", false;
    }
    if (depth != 0) return why = "unbalanced braces", false;
    std::vector<std::string> envs;
    std::size_t i = 0;
    long stack = 0;
    std::size_t axioms = 0;
    auto word = [&](const char* w) { return t.compare(i, std::strlen(w), w) == 0; };
    for (; i < t.size(); ++i) {
        if (t[i] != '\\') continue;
        if (word("\\begin{") || word("\\end{")) {
            bool begin = word("\\begin{");
            std::size_t s = t.find('{', i) + 1, e = t.find('}', s);
            std::string name = t.substr(s, e - s);
            if (begin) {
                envs.push_back(name);
                if (name == "prooftree") stack = 0;
            } else {
                if (envs.empty() || envs.back() != name) return why = "mismatched \\end{" + name + "}", false;
                envs.pop_back();
                if (name == "prooftree" && stack != 1) return why = "inference stack does not end in one tree", false;
            }
        } else if (word("\\AxiomC")) {
            ++stack;
            ++axioms;
        } else if (word("\\UnaryInfC")) {
            if (stack < 1) return why = "UnaryInfC underflow", false;
        } else if (word("\\BinaryInfC")) {
            if ((stack -= 1) < 1) return why = "BinaryInfC underflow", false;
        } else if (word("\\TrinaryInfC")) {
            if ((stack -= 2) < 1) return why = "TrinaryInfC underflow", false;
        }
    }
    if (!envs.empty()) return why = "unclosed environment " + envs.back(), false;
    if (axioms != leaves) return why = "leaf count mismatch", false;
    for (const char* need : {"\\documentclass", "\\begin{document}", "\\end{document}"})
        if (t.find(need) == std::string::npos) return why = std::string("missing ") + need, false;
    std::size_t pkg = t.find("\\usepackage");
    if (pkg == std::string::npos || t.find("bussproofs", pkg) > t.find('\n', pkg)) return why = "bussproofs not loaded", false;
    return true;
}

std::size_t leaf_count(const Derivation& d) {
    if (d->premises.empty()) return 1;
    std::size_t n = 0;
    for (const auto& p : d->premises) n += leaf_count(p);
    return n;
}

Result golden() {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(LNIF_GOLDEN_DIR))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::size_t ok = 0;
    std::string first;
    for (const auto& p : files) {
        std::string why;
        try {
            Derivation d = derivation_from_json(read_file(p.string()));
            CheckResult r = check_derivation(d, Mode::Official);
            if (!r.ok) why = r.kind + " " + r.message;
            else if (!latex_well_formed(derivation_to_latex(d), leaf_count(d), why)) why = "latex: " + why;
        } catch (const std::exception& e) {
            why = e.what();
        }
        if (why.empty()) ++ok;
        else if (first.empty()) first = p.filename().string() + ": " + why;
    }
    std::ostringstream out;
    out << ok << "/" << files.size() << " golden derivations check and render";
    if (!first.empty()) out << "; first failure: " << first;
    return {!files.empty() && ok == files.size(), out.str()};
}

}  // namespace

int main(int argc, char** argv) {
    // Optional criterion numbers restrict the run; no arguments runs all eight.
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    auto wanted = [&](int n) { return only.empty() || only.count(n); };
    std::size_t failed = 0;
    auto report = [&](int n, const char* name, const std::function<Result()>& f) {
        if (!wanted(n)) return;
        Result r;
        try {
            r = f();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d [%s] %s: %s\n", n, name, r.pass ? "PASS" : "FAIL", r.detail.c_str());
        std::fflush(stdout);
        failed += !r.pass;
    };

    report(1, "axiom corpus", axiom_corpus);
    report(2, "cut elimination", cut_elimination);

    // Criteria 3 and 7 share one pass over the random derivations.
    Harness h;
    std::size_t derivations = 0;
    std::string harness_error;
    if (wanted(3) || wanted(7)) {
        try {
            while (derivations < kMinHeightDerivations) {
                Derivation d = h.gen.derivation();
                if (!official(d)) throw std::runtime_error("generator produced an invalid derivation");
                ++derivations;
                h.all_ops(d);
            }
        } catch (const std::exception& e) {
            harness_error = e.what();
        }
    }
    report(3, "height preservation", [&] {
        if (!harness_error.empty()) return Result{false, harness_error};
        std::size_t fails, runs;
        bool enough;
        std::string s = summary(h.heights, fails, runs, 1, enough);
        return Result{fails == 0 && enough && h.heights.size() == 5,
                      std::to_string(derivations) + " derivations, " + std::to_string(runs) + " applications (" + s + ")"};
    });
    report(4, "prover-oracle agreement", prover_oracle);
    report(5, "non-theorems", non_theorems);
    report(6, "persistence", persistence);
    report(7, "transform closure", [&] {
        if (!harness_error.empty()) return Result{false, harness_error};
        std::size_t fails, runs;
        bool enough;
        std::string s = summary(h.ops, fails, runs, kMinPerTransform, enough);
        return Result{fails == 0 && enough && h.ops.size() == 13, s};
    });
    report(8, "golden corpus", golden);
    std::printf("%zu criteria failed\n", failed);
    return failed ? 1 : 0;
}

#include <array>
#include <functional>

#include "lnif/prover.hpp"
#include "lnif/transform.hpp"

namespace lnif {

namespace {

constexpr std::array<const char*, kSchemaCount> kNames = {
    "k", "s", "and-intro", "and-elim-l", "and-elim-r", "or-intro-l", "or-intro-r", "or-elim", "ex-falso",
    "linearity", "forall-inst", "exists-intro", "forall-imp-shift", "exists-imp-shift", "quant-shift"};

Side side_of(RuleTag t) {
    switch (t) {
        case RuleTag::AndL: case RuleTag::OrL: case RuleTag::ImpL: case RuleTag::Lift:
        case RuleTag::ForallL: case RuleTag::ExistsL: case RuleTag::BotL:
            return Side::L;
        default: return Side::R;
    }
}

RuleInstance rule(RuleTag t, std::size_t comp, const Formula& f, const std::string& param = "") {
    RuleInstance r = rule_at(t, comp, side_of(t), f);
    if (!param.empty()) {
        if (has_eigen(t)) r.eigen = param;
        if (has_witness(t)) r.witness = param;
    }
    return r;
}

using Kids = std::function<std::vector<Derivation>(const std::vector<Sequent>&)>;
using Kid = std::function<Derivation(const Sequent&)>;

Derivation by(const Sequent& g, RuleInstance r, const Kids& kids) {
    std::vector<Sequent> ps = apply_backward(g, r);
    return node(g, r, kids(ps));
}

Derivation by(const Sequent& g, RuleInstance r, const Kid& kid) {
    return by(g, std::move(r), [&](const std::vector<Sequent>& ps) { return std::vector<Derivation>{kid(ps.at(0))}; });
}

// Closes g on a formula occurring in an antecedent and in the consequent of the
// same or a later component: atoms and bottom by an initial sequent, others by
// lifting to the consequent's component and the identity construction.
Derivation close(const Sequent& g, const Formula& a) {
    if (a.is_atom() || a.is_bot()) {
        auto ax = find_axiom(g);
        if (!ax) throw InternalError("no initial sequent for " + g.str());
        return node(g, *ax, {});
    }
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!ms_contains(g[j].cons, a)) continue;
        for (std::size_t i = j + 1; i-- > 0;) {
            if (!ms_contains(g[i].ante, a)) continue;
            if (i < j) return by(g, rule(RuleTag::Lift, i, a), [&](const Sequent& p) { return close(p, a); });
            Sequent ctx = g;
            ms_erase(ctx[j].ante, a);
            ms_erase(ctx[j].cons, a);
            return derive_identity(a, ctx, j);
        }
    }
    throw InternalError("cannot close " + g.str() + " on " + a.str());
}

Kid closing(const Formula& a) {
    return [a](const Sequent& p) { return close(p, a); };
}

Formula abstract_param(const Formula& f, const std::string& a, const std::string& x, bool under_x) {
    switch (f.op()) {
        case Op::Bot: return f;
        case Op::Atom: {
            std::vector<Term> args = f.args();
            bool hit = false;
            for (auto& t : args)
                if (t.is_param() && t.name == a) {
                    t = Term::var(x);
                    hit = true;
                }
            if (hit && under_x) throw CaptureError(x);
            return hit ? Formula::atom(f.name(), args) : f;
        }
        case Op::Forall:
        case Op::Exists:
            return Formula::quant(f.op(), f.name(), abstract_param(f.body(), a, x, under_x || f.name() == x));
        default:
            return Formula::binary(f.op(), abstract_param(f.lhs(), a, x, under_x), abstract_param(f.rhs(), a, x, under_x));
    }
}

void need_closed(const Formula& f, const char* what) {
    if (!is_closed(f)) throw ShapeError(std::string(what) + " must be closed: " + f.str());
}

const Sequent& single_conclusion(const Derivation& d, const char* what) {
    const Sequent& g = d->conclusion;
    if (g.size() != 1 || !g[0].ante.empty() || g[0].cons.size() != 1)
        throw ShapeError(std::string(what) + " must conclude |- F, got " + g.str());
    return g;
}

}  // namespace

const char* schema_name(Schema s) { return kNames.at(static_cast<std::size_t>(s)); }

std::optional<Schema> schema_from_name(std::string_view s) {
    for (std::size_t i = 0; i < kSchemaCount; ++i)
        if (s == kNames[i]) return static_cast<Schema>(i);
    return std::nullopt;
}

bool is_quantifier_schema(Schema s) { return static_cast<int>(s) >= static_cast<int>(Schema::ForallInst); }

Formula axiom_formula(Schema s, const AxiomArgs& g) {
    using F = Formula;
    if (is_quantifier_schema(s)) {
        for (const auto& v : free_vars(g.body))
            if (v != g.var) throw ShapeError("schema body has a free variable other than " + g.var);
        F qa = F::forall(g.var, g.body);
        F inst = subst_var(g.body, g.var, Term::param(g.witness));
        switch (s) {
            case Schema::ForallInst: return F::imp(qa, inst);
            case Schema::ExistsIntro: return F::imp(inst, F::exists(g.var, g.body));
            default: break;
        }
        need_closed(g.b, "schema side formula");
        switch (s) {
            case Schema::ForallImpShift:
                return F::imp(F::forall(g.var, F::imp(g.b, g.body)), F::imp(g.b, qa));
            case Schema::ExistsImpShift:
                return F::imp(F::forall(g.var, F::imp(g.body, g.b)), F::imp(F::exists(g.var, g.body), g.b));
            default:
                return F::imp(F::forall(g.var, F::disj(g.body, g.b)), F::disj(qa, g.b));
        }
    }
    need_closed(g.a, "schema argument");
    if (s != Schema::ExFalso) need_closed(g.b, "schema argument");
    const F &a = g.a, &b = g.b, &c = g.c;
    switch (s) {
        case Schema::K: return F::imp(a, F::imp(b, a));
        case Schema::S: return F::imp(F::imp(a, F::imp(b, c)), F::imp(F::imp(a, b), F::imp(a, c)));
        case Schema::AndIntro: return F::imp(a, F::imp(b, F::conj(a, b)));
        case Schema::AndElimL: return F::imp(F::conj(a, b), a);
        case Schema::AndElimR: return F::imp(F::conj(a, b), b);
        case Schema::OrIntroL: return F::imp(a, F::disj(a, b));
        case Schema::OrIntroR: return F::imp(b, F::disj(a, b));
        case Schema::OrElim: return F::imp(F::imp(a, c), F::imp(F::imp(b, c), F::imp(F::disj(a, b), c)));
        case Schema::ExFalso: return F::imp(F::bot(), a);
        default: return F::disj(F::imp(a, b), F::imp(b, a));
    }
}

AxiomArgs default_axiom_args(Schema s) {
    AxiomArgs g;
    if (is_quantifier_schema(s)) {
        g.body = Formula::atom("p", {Term::var("x")});
        g.b = Formula::atom("q");
    } else {
        g.a = Formula::atom("p");
        g.b = Formula::atom("q");
        g.c = Formula::atom("r");
    }
    return g;
}

Derivation prove_axiom(Schema s, const AxiomArgs& args) {
    using T = RuleTag;
    Formula goal = axiom_formula(s, args);
    Sequent g0 = Sequent::single({}, {goal});
    const Formula &a = args.a, &b = args.b, &c = args.c;
    // The implication introduced first, shared by most constructions.
    auto r1 = [&](const Kid& k) { return by(g0, rule(T::ImpR1, 0, goal), k); };
    switch (s) {
        case Schema::K:
            return r1([&](const Sequent& p) { return by(p, rule(T::ImpR1, 1, goal.rhs()), closing(a)); });
        case Schema::S: {
            Formula x = goal.lhs(), y = goal.rhs().lhs(), bc = x.rhs();
            return r1([&](const Sequent& p1) {
                return by(p1, rule(T::ImpR1, 1, goal.rhs()), [&](const Sequent& p2) {
                    return by(p2, rule(T::ImpR1, 2, goal.rhs().rhs()), [&](const Sequent& p3) {
                        return by(p3, rule(T::Lift, 1, x), [&](const Sequent& p4) {
                            return by(p4, rule(T::Lift, 2, x), [&](const Sequent& p5) {
                                return by(p5, rule(T::Lift, 2, y), [&](const Sequent& p6) {
                                    return by(p6, rule(T::ImpL, 3, x), [&](const std::vector<Sequent>& q) {
                                        Derivation left = by(q[0], rule(T::ImpL, 3, y), [&](const std::vector<Sequent>& u) {
                                            Derivation inner = by(u[0], rule(T::ImpL, 3, bc), [&](const std::vector<Sequent>& v) {
                                                return std::vector<Derivation>{close(v[0], c), close(v[1], b)};
                                            });
                                            return std::vector<Derivation>{inner, close(u[1], a)};
                                        });
                                        return std::vector<Derivation>{left, close(q[1], a)};
                                    });
                                });
                            });
                        });
                    });
                });
            });
        }
        case Schema::AndIntro:
            return r1([&](const Sequent& p1) {
                return by(p1, rule(T::ImpR1, 1, goal.rhs()), [&](const Sequent& p2) {
                    return by(p2, rule(T::Lift, 1, a), [&](const Sequent& p3) {
                        return by(p3, rule(T::AndR, 2, goal.rhs().rhs()), [&](const std::vector<Sequent>& q) {
                            return std::vector<Derivation>{close(q[0], a), close(q[1], b)};
                        });
                    });
                });
            });
        case Schema::AndElimL:
        case Schema::AndElimR:
            return r1([&](const Sequent& p) {
                return by(p, rule(T::AndL, 1, goal.lhs()), closing(s == Schema::AndElimL ? a : b));
            });
        case Schema::OrIntroL:
        case Schema::OrIntroR:
            return r1([&](const Sequent& p) {
                return by(p, rule(T::OrR, 1, goal.rhs()), closing(s == Schema::OrIntroL ? a : b));
            });
        case Schema::OrElim: {
            Formula ac = goal.lhs(), bc = goal.rhs().lhs(), ab = goal.rhs().rhs().lhs();
            auto branch = [&](const Formula& imp, const Formula& from) {
                return [&, imp, from](const Sequent& p) {
                    return by(p, rule(T::ImpL, 3, imp), [&](const std::vector<Sequent>& q) {
                        return std::vector<Derivation>{close(q[0], c), close(q[1], from)};
                    });
                };
            };
            return r1([&](const Sequent& p1) {
                return by(p1, rule(T::ImpR1, 1, goal.rhs()), [&](const Sequent& p2) {
                    return by(p2, rule(T::ImpR1, 2, goal.rhs().rhs()), [&](const Sequent& p3) {
                        return by(p3, rule(T::Lift, 1, ac), [&](const Sequent& p4) {
                            return by(p4, rule(T::Lift, 2, ac), [&](const Sequent& p5) {
                                return by(p5, rule(T::Lift, 2, bc), [&](const Sequent& p6) {
                                    return by(p6, rule(T::OrL, 3, ab), [&](const std::vector<Sequent>& q) {
                                        return std::vector<Derivation>{branch(ac, a)(q[0]), branch(bc, b)(q[1])};
                                    });
                                });
                            });
                        });
                    });
                });
            });
        }
        case Schema::ExFalso:
            return r1(closing(Formula::bot()));
        case Schema::Linearity: {
            Formula ab = goal.lhs(), ba = goal.rhs();
            return by(g0, rule(T::OrR, 0, goal), [&](const Sequent& p1) {
                return by(p1, rule(T::ImpR1, 0, ba), [&](const Sequent& p2) {
                    return by(p2, rule(T::ImpR2, 0, ab), [&](const std::vector<Sequent>& q) {
                        Derivation left = by(q[0], rule(T::Lift, 1, a), closing(a));
                        Derivation right = by(q[1], rule(T::ImpR1, 1, ab), [&](const Sequent& p) {
                            return by(p, rule(T::Lift, 1, b), closing(b));
                        });
                        return std::vector<Derivation>{left, right};
                    });
                });
            });
        }
        default: break;
    }
    const std::string& w = args.witness;
    Formula inst = subst_var(args.body, args.var, Term::param(w));
    switch (s) {
        case Schema::ForallInst:
            return r1([&](const Sequent& p) { return by(p, rule(T::ForallL, 1, goal.lhs(), w), closing(inst)); });
        case Schema::ExistsIntro:
            return r1([&](const Sequent& p) { return by(p, rule(T::ExistsR, 1, goal.rhs(), w), closing(inst)); });
        case Schema::ForallImpShift: {
            Formula f = goal.lhs();
            std::string e = has_param(goal, w) ? fresh_param(params(goal)) : w;
            Formula ie = subst_var(args.body, args.var, Term::param(e));
            return r1([&](const Sequent& p1) {
                return by(p1, rule(T::ImpR1, 1, goal.rhs()), [&](const Sequent& p2) {
                    return by(p2, rule(T::ForallR1, 2, goal.rhs().rhs(), e), [&](const Sequent& p3) {
                        return by(p3, rule(T::Lift, 1, f), [&](const Sequent& p4) {
                            return by(p4, rule(T::Lift, 2, f), [&](const Sequent& p5) {
                                return by(p5, rule(T::ForallL, 3, f, e), [&](const Sequent& p6) {
                                    return by(p6, rule(T::ImpL, 3, Formula::imp(b, ie)), [&](const std::vector<Sequent>& q) {
                                        return std::vector<Derivation>{close(q[0], ie), close(q[1], b)};
                                    });
                                });
                            });
                        });
                    });
                });
            });
        }
        case Schema::ExistsImpShift: {
            Formula f = goal.lhs();
            std::string e = has_param(goal, w) ? fresh_param(params(goal)) : w;
            Formula ie = subst_var(args.body, args.var, Term::param(e));
            return r1([&](const Sequent& p1) {
                return by(p1, rule(T::ImpR1, 1, goal.rhs()), [&](const Sequent& p2) {
                    return by(p2, rule(T::ExistsL, 2, goal.rhs().lhs(), e), [&](const Sequent& p3) {
                        return by(p3, rule(T::Lift, 1, f), [&](const Sequent& p4) {
                            return by(p4, rule(T::ForallL, 2, f, e), [&](const Sequent& p5) {
                                return by(p5, rule(T::ImpL, 2, Formula::imp(ie, b)), [&](const std::vector<Sequent>& q) {
                                    return std::vector<Derivation>{close(q[0], b), close(q[1], ie)};
                                });
                            });
                        });
                    });
                });
            });
        }
        default: {
            Formula f = goal.lhs();
            std::string e = has_param(goal, w) ? fresh_param(params(goal)) : w;
            Formula ie = subst_var(args.body, args.var, Term::param(e));
            return r1([&](const Sequent& p1) {
                return by(p1, rule(T::OrR, 1, goal.rhs()), [&](const Sequent& p2) {
                    return by(p2, rule(T::ForallR1, 1, goal.rhs().lhs(), e), [&](const Sequent& p3) {
                        return by(p3, rule(T::ForallL, 1, f, e), [&](const Sequent& p4) {
                            return by(p4, rule(T::OrL, 1, Formula::disj(ie, b)), [&](const std::vector<Sequent>& q) {
                                return std::vector<Derivation>{close(q[0], ie), close(q[1], b)};
                            });
                        });
                    });
                });
            });
        }
    }
}

Derivation mp_cut(const Derivation& d_a, const Derivation& d_imp) {
    const Formula a = single_conclusion(d_a, "minor premise")[0].cons.front();
    const Formula imp = single_conclusion(d_imp, "major premise")[0].cons.front();
    if (imp.op() != Op::Imp || imp.lhs() != a)
        throw ShapeError("major premise " + imp.str() + " is not an implication from " + a.str());
    Derivation left = admit_ew(d_a, 0);
    Derivation right = invert_right(d_imp, RuleTag::ImpR1, 0, imp)[0];
    return make_cut(left, right, a, 1, {1});
}

Derivation simulate_mp(const Derivation& d_a, const Derivation& d_imp) {
    return admit_merge(eliminate_cut(mp_cut(d_a, d_imp)), 0);
}

Derivation simulate_gen(const Derivation& d, const Formula& f, const std::string& a, const std::string& x) {
    const Sequent& g = d->conclusion;
    if (g.size() != 1 || !ms_contains(g[0].cons, f))
        throw ShapeError("generalization needs a one-component conclusion containing " + f.str());
    Sequent base = g;
    ms_erase(base[0].cons, f);
    if (has_param(base, a)) throw EigenvariableViolation(a);
    Formula q = Formula::forall(x, abstract_param(f, a, x, false));
    Derivation lowered = admit_lwr(admit_ew(d, 1), 0, f);
    Sequent concl = base;
    ms_insert(concl[0].cons, q);
    RuleInstance r = rule(RuleTag::ForallR1, 0, q, a);
    return node(concl, r, {lowered});
}

}  // namespace lnif

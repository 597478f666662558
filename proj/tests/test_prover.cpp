#include <doctest.h>

#include "lnif/serialize.hpp"
#include "support/random_gen.hpp"

using namespace lnif;

namespace {
Formula P(const std::string& s) { return parse_formula(s); }

void proves(const std::string& text, std::size_t depth = 40) {
    ProverConfig cfg;
    cfg.depth = depth;
    ProveResult r = prove(P(text), cfg);
    CAPTURE(text);
    REQUIRE(r.ok());
    CHECK(check_derivation(r.proof, Mode::Official).ok);
}
}  // namespace

TEST_CASE("prover finds known theorems") {
    proves("(p -> q) | (q -> p)");
    proves("(forall x. (A(x) | B)) -> (forall x. A(x)) | B");
    proves("(forall x. (A(x) -> B)) -> (exists x. A(x)) -> B");
    proves("(forall x. (B -> A(x))) -> B -> forall x. A(x)");
    proves("(forall x. A(x)) -> A(#c)");
    proves("A(#c) -> exists x. A(x)");
    proves("~p | ~~p");
    proves("((p -> q) -> r) -> (((q -> p) -> r) -> r)");
    proves("(p -> q | r) -> (p -> q) | (p -> r)");
    proves("(p & q -> r) -> (p -> r) | (q -> r)");
}

TEST_CASE("prover rejects non-theorems") {
    for (const char* t : {"p | (p -> bot)", "~~p -> p", "((p -> q) -> p) -> p"}) {
        CAPTURE(t);
        ProveResult r = prove(P(t));
        CHECK_FALSE(r.ok());
        CHECK(r.failure.has_value());
        CHECK_FALSE(goedel_valid(P(t)).valid);
    }
    ProverConfig shallow;
    shallow.depth = 2;
    ProveResult r = prove(P("(p -> q) | (q -> p)"), shallow);
    CHECK_FALSE(r.ok());
    CHECK(r.failure == Failure::DepthExceeded);
}

TEST_CASE("prover is deterministic") {
    ProverConfig seq, par;
    par.parallel = true;
    for (const char* t : {"(p -> q) | (q -> p)", "(p & q -> r) -> (p -> r) | (q -> r)",
                          "(forall x. (A(x) | B)) -> (forall x. A(x)) | B"}) {
        std::string a = derivation_to_json(prove(P(t), seq).proof);
        CHECK(a == derivation_to_json(prove(P(t), seq).proof));
        CHECK(a == derivation_to_json(prove(P(t), par).proof));
    }
}

TEST_CASE("config parsing") {
    ProverConfig c = parse_config("# search\ndepth = 30\nwitness_cap=3\nmemo=off\nparallel=on\n");
    CHECK(c.depth == 30);
    CHECK(c.witness_cap == 3);
    CHECK_FALSE(c.memo);
    CHECK(c.parallel);
    CHECK_THROWS_AS(parse_config("depth=deep"), InputError);
    CHECK_THROWS_AS(parse_config("speed=3"), InputError);
}

TEST_CASE("axiom constructions") {
    for (std::size_t i = 0; i < kSchemaCount; ++i) {
        auto s = static_cast<Schema>(i);
        CAPTURE(schema_name(s));
        AxiomArgs args = default_axiom_args(s);
        Derivation d = prove_axiom(s, args);
        CHECK(d->conclusion == Sequent::single({}, {axiom_formula(s, args)}));
        CHECK(check_derivation(d, Mode::Official).ok);
        CHECK(schema_from_name(schema_name(s)) == s);
    }
    Derivation inst = prove_axiom(Schema::ForallInst, default_axiom_args(Schema::ForallInst));
    CHECK(height(inst) == 3);
    AxiomArgs ef = default_axiom_args(Schema::ExFalso);
    Derivation exf = prove_axiom(Schema::ExFalso, ef);
    CHECK(exf->rule.tag == RuleTag::ImpR1);
    CHECK(exf->premises[0]->rule.tag == RuleTag::BotL);
}

TEST_CASE("property: random axiom instances check") {
    testgen::Gen g(71);
    for (int n = 0; n < 200; ++n) {
        auto s = static_cast<Schema>(g.below(kSchemaCount));
        AxiomArgs args = default_axiom_args(s);
        if (is_quantifier_schema(s)) {
            args.body = Formula::binary(Op::Or, Formula::atom("P", {Term::var("x")}), g.prop(g.below(2), {"r"}));
            args.b = g.prop(g.below(3), {"r", "s"});
        } else {
            args.a = g.any(g.below(3));
            args.b = g.any(g.below(3));
            args.c = g.any(g.below(3));
        }
        Derivation d = prove_axiom(s, args);
        CHECK(check_derivation(d, Mode::Official).ok);
    }
}

TEST_CASE("Hilbert rule simulation") {
    AxiomArgs ka;
    ka.a = P("p -> p");
    ka.b = P("q -> q");
    Derivation k = prove_axiom(Schema::K, ka);
    Derivation pp = prove(P("p -> p")).proof;
    Derivation qq = prove(P("q -> q")).proof;
    Derivation step = simulate_mp(pp, k);
    CHECK(step->conclusion == Sequent::single({}, {P("(q -> q) -> p -> p")}));
    Derivation again = simulate_mp(pp, prove(P("(p -> p) -> p -> p")).proof);
    CHECK(again->conclusion == pp->conclusion);
    Derivation chained = simulate_mp(qq, simulate_mp(pp, prove(P("(p -> p) -> (q -> q) -> q -> q")).proof));
    CHECK(chained->conclusion == qq->conclusion);
    for (const auto& d : {step, again, chained}) {
        CHECK(is_cut_free(d));
        CHECK(check_derivation(d, Mode::Official).ok);
    }
    CHECK_THROWS_AS(simulate_mp(pp, pp), ShapeError);

    Derivation pa = prove(P("p(#a) -> p(#a)")).proof;
    Derivation gen = simulate_gen(pa, P("p(#a) -> p(#a)"), "a");
    CHECK(gen->conclusion == Sequent::single({}, {P("forall x. (p(x) -> p(x))")}));
    CHECK(check_derivation(gen, Mode::Official).ok);

    Derivation two = prove(P("q(#a, #b) -> q(#a, #b)")).proof;
    Derivation g1 = simulate_gen(two, P("q(#a, #b) -> q(#a, #b)"), "a");
    Derivation g2 = simulate_gen(g1, g1->conclusion[0].cons[0], "b", "y");
    CHECK(g2->conclusion == Sequent::single({}, {P("forall y. forall x. (q(x, y) -> q(x, y))")}));
    CHECK(check_derivation(g2, Mode::Official).ok);

    Derivation side = prove(parse_sequent("p(#a) |- p(#a) -> p(#a)")).proof;
    CHECK_THROWS_AS(simulate_gen(side, P("p(#a) -> p(#a)"), "a"), EigenvariableViolation);
}

TEST_CASE("property: prover soundness against the oracles") {
    testgen::Gen g(81);
    ProverConfig cfg;
    cfg.depth = 20;
    std::size_t found = 0;
    for (int n = 0; n < 300; ++n) {
        Formula f = g.prop(g.below(6), {"p", "q"});
        ProveResult r = prove(f, cfg);
        if (!r.ok()) continue;
        ++found;
        CHECK(goedel_valid(f).valid);
        CHECK(check_derivation(r.proof, Mode::Official).ok);
    }
    for (int n = 0; n < 60; ++n) {
        Sequent s = g.sequent(2, 2, 2);
        ProveResult r = prove(s, cfg);
        if (!r.ok()) continue;
        ++found;
        CAPTURE(s.str());
        CHECK_FALSE(find_countermodel(is_valid_interp(s), 3, 2).has_value());
    }
    CHECK(found > 20);
}

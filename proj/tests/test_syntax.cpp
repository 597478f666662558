#include <doctest.h>

#include "support/random_gen.hpp"

using namespace lnif;

namespace {
Formula P(const std::string& s) { return parse_formula(s); }
}  // namespace

TEST_CASE("parse builds the expected trees") {
    Formula lin = P("(p -> q) | (q -> p)");
    CHECK(lin == Formula::disj(Formula::imp(Formula::atom("p"), Formula::atom("q")),
                               Formula::imp(Formula::atom("q"), Formula::atom("p"))));
    CHECK(P("bot") == Formula::bot());
    Formula qs = P("forall x. (A(x) | B)");
    CHECK(qs == Formula::forall("x", Formula::disj(Formula::atom("A", {Term::var("x")}), Formula::atom("B"))));
}

TEST_CASE("precedence and associativity") {
    CHECK(P("p & q | r") == P("(p & q) | r"));
    CHECK(P("p | q -> r") == P("(p | q) -> r"));
    CHECK(P("p -> q -> r") == P("p -> (q -> r)"));
    CHECK(P("forall x. A(x) -> B") == P("forall x. (A(x) -> B)"));
    CHECK(P("~p") == P("p -> bot"));
    CHECK(P("~~p -> p") == P("((p -> bot) -> bot) -> p"));
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(P("((p ->"), SyntaxError);
    CHECK_THROWS_AS(P("p q"), SyntaxError);
    CHECK_THROWS_AS(P("p(#a) & p"), ArityError);
    CHECK_THROWS_AS(P("A(x)"), UnboundVariable);
    Signature sig;
    sig.declare("p", 1);
    CHECK_THROWS_AS(parse_formula("p", static_cast<const Signature&>(sig)), ArityError);
    try {
        P("p & & q");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.position == 4);
    }
}

TEST_CASE("parameters and variables are distinct sorts") {
    Formula f = P("forall x. A(x, #x)");
    const auto& args = f.body().args();
    CHECK(args[0].is_var());
    CHECK(args[1].is_param());
    CHECK(args[0].name == args[1].name);
    CHECK(args[0] != args[1]);
}

TEST_CASE("substitution") {
    Formula body = Formula::atom("p", {Term::var("x")});
    CHECK(subst_var(body, "x", Term::param("a")) == P("p(#a)"));
    Formula mixed = Formula::conj(body, P("forall x. q(x)"));
    CHECK(subst_var(mixed, "x", Term::param("a")) == P("p(#a) & forall x. q(x)"));
    Formula ex = Formula::exists("y", Formula::atom("r", {Term::var("x"), Term::var("y")}));
    CHECK(subst_var(ex, "x", Term::param("b")) == P("exists y. r(#b, y)"));
    CHECK_THROWS_AS(subst_var(ex, "x", Term::var("y")), CaptureError);
}

TEST_CASE("parameter renaming") {
    CHECK(rename_param_formula(P("p(#a) -> q(#a)"), "a", "b") == P("p(#b) -> q(#b)"));
    CHECK(rename_param_formula(P("p(#c)"), "a", "b") == P("p(#c)"));
    CHECK(rename_param_formula(P("forall x. p(x, #a)"), "a", "b") == P("forall x. p(x, #b)"));
}

TEST_CASE("complexity") {
    CHECK(complexity(P("p(#a)")) == 0);
    CHECK(complexity(P("(p -> q) | (q -> p)")) == 3);
    CHECK(complexity(P("forall x. (p(x) | q)")) == 2);
    CHECK(complexity(P("bot")) == 0);
    CHECK(complexity(P("~p")) == 1);
}

TEST_CASE("universal closure") {
    CHECK(universal_closure(P("p(#a)")) == P("forall x0. p(x0)"));
    CHECK(universal_closure(P("p")) == P("p"));
    CHECK(universal_closure(P("p(#a) -> q(#a, #b)")) == P("forall x0. forall x1. (p(x0) -> q(x0, x1))"));
}

TEST_CASE("fresh parameters") {
    CHECK(fresh_param({}) == "a0");
    CHECK(fresh_param({"a0", "a1"}) == "a2");
    CHECK(fresh_param({"a0", "a2"}) == "a1");
}

TEST_CASE("property: print then parse is the identity") {
    testgen::Gen g(11);
    for (int i = 0; i < 2000; ++i) {
        Formula f = g.any(g.below(8));
        CAPTURE(f.str());
        CHECK(parse_formula(print_formula(f)) == f);
    }
}

TEST_CASE("property: renaming there and back") {
    testgen::Gen g(12);
    for (int i = 0; i < 1000; ++i) {
        Formula f = g.fo(g.below(6));
        if (has_param(f, "c")) continue;
        CHECK(rename_param_formula(rename_param_formula(f, "a", "c"), "c", "a") == f);
    }
}

TEST_CASE("property: substitution keeps complexity and closure removes parameters") {
    testgen::Gen g(13);
    for (int i = 0; i < 1000; ++i) {
        Formula f = g.fo(1 + g.below(6));
        Formula c = universal_closure(f);
        CHECK(params(c).empty());
        CHECK(is_closed(c));
        if (f.is_quant()) CHECK(complexity(instantiate(f, Term::param("z"))) + 1 == complexity(f));
    }
}

// Admissibility and invertibility of rules as derivation rewrites, and cut elimination.
#pragma once

#include <functional>

#include "lnif/calculus.hpp"

namespace lnif {

// Raised when a rewrite would build an invalid node; indicates a bug, never bad input.
struct InternalError : Error {
    explicit InternalError(const std::string& d) : Error("InternalError", d) {}
};
struct NotWithCutValid : Error {
    explicit NotWithCutValid(const std::string& d) : Error("NotWithCutValid", d) {}
};

// Builds a node and checks it against its rule.
Derivation node(Sequent conclusion, RuleInstance rule, std::vector<Derivation> premises);

// G // Gamma, A |- A, Delta // H where ctx is G // Gamma |- Delta // H.
Derivation derive_identity(const Formula& a, const Sequent& ctx, std::size_t pos);
Derivation derive_identity(const Formula& a);

// Removes one bot from the consequent of component pos. Height never grows.
Derivation admit_bot_r(const Derivation& d, std::size_t pos);
// Replaces parameter a by b throughout. Height is preserved.
Derivation rename_param(const Derivation& d, const std::string& a, const std::string& b);
// Adds formulas to component pos. Height never grows.
Derivation admit_iw(const Derivation& d, std::size_t pos, const Multiset& add_l, const Multiset& add_r);
// Inserts an empty component so that it has index pos (0 <= pos <= length).
Derivation admit_ew(const Derivation& d, std::size_t pos);
// Moves f from the consequent of pos to the consequent of pos+1. Height never grows.
Derivation admit_lwr(const Derivation& d, std::size_t pos, const Formula& f);

// Inverts k[i] antecedent copies of f in component i.
//  And: one derivation with both conjuncts.
//  Or: two derivations, left and right disjunct.
//  Imp: two derivations, consequent replacing the copies, and the antecedent added on the right.
//  Forall: one derivation with the instance at param added and the copies kept.
//  Exists: one derivation with the instance at the fresh param replacing the copies.
std::vector<Derivation> invert_left(const Derivation& d, const Formula& f, const std::vector<std::size_t>& k,
                                    const std::string& param = "");
// Premises of the given right rule applied to f at pos. Eigen/witness taken from param or chosen fresh.
std::vector<Derivation> invert_right(const Derivation& d, RuleTag rule, std::size_t pos, const Formula& f,
                                     const std::string& param = "");

Derivation admit_contraction_left(const Derivation& d, std::size_t pos, const Formula& f);
Derivation admit_contraction_right(const Derivation& d, std::size_t pos, const Formula& f);
// Fuses components pos and pos+1.
Derivation admit_merge(const Derivation& d, std::size_t pos);

// Weakens d up to a componentwise larger sequent of the same length.
Derivation weaken_to(const Derivation& d, const Sequent& target);
// Contracts d down to target; every surplus formula must still occur in target.
Derivation contract_to(const Derivation& d, const Sequent& target);

// Replaces every structural rule by its admissibility rewrite; the result is official.
Derivation normalize(const Derivation& d);

struct CutStats {
    std::size_t cuts_reduced = 0;
    std::size_t principal_steps = 0;
    std::size_t permutation_steps = 0;
    std::size_t measure_checks = 0;
};

// Cut-free official derivation of the same end sequent.
Derivation eliminate_cut(const Derivation& d, CutStats* stats = nullptr);

// Cut of two official derivations as described by a cut instance, without reduction.
Derivation make_cut(const Derivation& left, const Derivation& right, const Formula& a, std::size_t m,
                    const std::vector<std::size_t>& k);

}  // namespace lnif

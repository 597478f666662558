// Bounded backward proof search, axiom constructions and Hilbert rule simulation.
#pragma once

#include "lnif/calculus.hpp"

namespace lnif {

struct ProverConfig {
    std::size_t depth = 64;
    // Instances per quantified formula and component drawn for (ForallL)/(ExistsR).
    std::size_t witness_cap = 2;
    bool memo = true;
    bool parallel = false;
};

// key=value lines: depth, witness_cap, memo (on/off), parallel (on/off); '#' starts a comment.
ProverConfig parse_config(std::string_view text);

enum class Failure : std::uint8_t { DepthExceeded, Saturated };
const char* failure_name(Failure f);

struct ProveResult {
    Derivation proof;
    std::optional<Failure> failure;
    std::string reason;
    std::size_t explored = 0;
    bool ok() const { return static_cast<bool>(proof); }
};

ProveResult prove(const Sequent& g, const ProverConfig& cfg = {});
ProveResult prove(const Formula& f, const ProverConfig& cfg = {});

enum class Schema : std::uint8_t {
    K, S, AndIntro, AndElimL, AndElimR, OrIntroL, OrIntroR, OrElim, ExFalso, Linearity,
    ForallInst, ExistsIntro, ForallImpShift, ExistsImpShift, QuantShift
};
inline constexpr std::size_t kSchemaCount = 15;
const char* schema_name(Schema s);
std::optional<Schema> schema_from_name(std::string_view s);
bool is_quantifier_schema(Schema s);

// a, b, c instantiate A, B, C. For quantifier schemas body is A(x) with x free,
// b is closed and witness names the parameter put for y.
struct AxiomArgs {
    Formula a, b, c;
    std::string var = "x";
    Formula body;
    std::string witness = "a";
};

Formula axiom_formula(Schema s, const AxiomArgs& args);
// Direct construction of a derivation of |- axiom_formula(s, args).
Derivation prove_axiom(Schema s, const AxiomArgs& args);
// Instance with distinct atoms: p, q, r; quantified schemas use p(x) and q.
AxiomArgs default_axiom_args(Schema s);

// The with-cut derivation of |- // |- B built from |- A and |- A -> B.
Derivation mp_cut(const Derivation& d_a, const Derivation& d_imp);
// Cut-free derivation of |- B.
Derivation simulate_mp(const Derivation& d_a, const Derivation& d_imp);
// From |- Delta, A[a/x] derives |- Delta, forall x A where A abstracts a in f.
Derivation simulate_gen(const Derivation& d, const Formula& f, const std::string& a, const std::string& x = "x");

}  // namespace lnif

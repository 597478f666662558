// Rule schemas, derivations, the forward checker and backward rule application.
#pragma once

#include <memory>
#include <utility>

#include "lnif/sequent.hpp"

namespace lnif {

enum class RuleTag : std::uint8_t {
    Id1, Id2, BotL, AndL, AndR, OrL, OrR, ImpL, ImpR1, ImpR2, Lift,
    ForallL, ForallR1, ForallR2, ExistsL, ExistsR,
    Iw, IcL, IcR, Ew, Sub, Lwr, BotR, Mrg, Cut
};

const char* rule_name(RuleTag t);
std::optional<RuleTag> rule_from_name(std::string_view s);
bool is_official(RuleTag t);
bool is_structural(RuleTag t);
bool has_eigen(RuleTag t);
bool has_witness(RuleTag t);

enum class Mode : std::uint8_t { Official, Extended, WithCut };
const char* mode_name(Mode m);
std::optional<Mode> mode_from_name(std::string_view s);

struct SchemaMismatch : Error {
    explicit SchemaMismatch(const std::string& d) : Error("SchemaMismatch", d) {}
};
struct EigenvariableViolation : Error {
    explicit EigenvariableViolation(const std::string& p)
        : Error("EigenvariableViolation", "eigenvariable #" + p + " occurs in the conclusion") {}
};
struct PositionError : Error {
    explicit PositionError(const std::string& d) : Error("PositionError", d) {}
};
struct CutAlignmentError : Error {
    explicit CutAlignmentError(const std::string& d) : Error("CutAlignmentError", d) {}
};
struct NotApplicable : Error {
    explicit NotApplicable(const std::string& d) : Error("NotApplicable", d) {}
};
struct ShapeError : Error {
    explicit ShapeError(const std::string& d) : Error("ShapeError", d) {}
};

// A principal position. formula is empty for index-only rules (ew, mrg).
struct Occurrence {
    std::size_t comp = 0;
    Side side = Side::L;
    Formula formula;
    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

struct CutInstance {
    Formula cut_formula;
    // Copies of the cut formula in the antecedents of the last n components.
    std::vector<std::size_t> k;
    // [components before the cut component, components after it].
    std::vector<std::size_t> alignment;
    friend bool operator==(const CutInstance&, const CutInstance&) = default;
};

struct RuleInstance {
    RuleTag tag = RuleTag::Id1;
    std::vector<Occurrence> principal;
    std::optional<std::string> eigen;
    std::optional<std::string> witness;
    std::optional<std::pair<std::string, std::string>> sub_map;
    std::optional<CutInstance> cut;
    friend bool operator==(const RuleInstance&, const RuleInstance&) = default;
};

RuleInstance rule_at(RuleTag tag, std::size_t comp, Side side, const Formula& f);

struct DerivNode;
using Derivation = std::shared_ptr<const DerivNode>;

struct DerivNode {
    Sequent conclusion;
    RuleInstance rule;
    std::vector<Derivation> premises;
    std::size_t height = 1;
};

// Builds a node without checking it.
Derivation make_derivation(Sequent conclusion, RuleInstance rule, std::vector<Derivation> premises);
std::size_t height(const Derivation& d);
std::size_t node_count(const Derivation& d);
bool contains_tag(const Derivation& d, RuleTag t);
bool is_cut_free(const Derivation& d);
bool uses_only_official(const Derivation& d);

// Throws a calculus error if the node does not instantiate its rule.
void check_node(const Sequent& conclusion, const RuleInstance& rule, const std::vector<Sequent>& premises,
                Mode mode = Mode::WithCut);

struct CheckResult {
    bool ok = true;
    std::string kind;
    std::string message;
    // Premise indices from the root to the failing node.
    std::vector<std::size_t> path;
    std::string path_str() const;
};

CheckResult check_derivation(const Derivation& d, Mode mode);

// Premises of the rule applied bottom-up. Fills in a fresh eigenvariable or
// witness when absent.
std::vector<Sequent> apply_backward(const Sequent& g, RuleInstance& rule);
std::vector<Sequent> apply_backward(const Sequent& g, const RuleInstance& rule);

// Conclusion of a cut between left (cut formula at comp m, right side) and
// right (k[i] copies in the antecedent of comp m+i).
Sequent cut_conclusion(const Sequent& left, const Sequent& right, const Formula& a, std::size_t m,
                       const std::vector<std::size_t>& k);

// An initial-sequent instance for g, if any.
std::optional<RuleInstance> find_axiom(const Sequent& g);

// Merges components i and i+1.
Sequent merge_components(const Sequent& g, std::size_t i);

}  // namespace lnif

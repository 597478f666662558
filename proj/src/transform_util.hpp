// Helpers shared by the rewrite sources.
#pragma once

#include <functional>
#include <set>

#include "lnif/transform.hpp"

namespace lnif::detail {

Sequent added(Sequent g, std::size_t c, Side s, const Formula& f);
Sequent removed(Sequent g, std::size_t c, Side s, const Formula& f);
Sequent inserted_at(Sequent g, std::size_t pos, Component c);

bool is_axiom(RuleTag t);
bool is_r1(RuleTag t);
bool is_r2(RuleTag t);
RuleTag r2_of(RuleTag t);
RuleTag r1_of(RuleTag t);

// Index of the component a premise gains over the conclusion, if any.
std::optional<std::size_t> inserted(const DerivNode& n, std::size_t j);
// Conclusion component pos as seen in premise j.
std::size_t map_pos(const DerivNode& n, std::size_t j, std::size_t pos);
RuleInstance remap(RuleInstance r, const std::function<std::size_t(std::size_t)>& f);
RuleInstance moved(const RuleInstance& r, std::size_t comp);
Component new_comp(RuleTag t, const Formula& f, const std::optional<std::string>& eigen);
void need_official(const Derivation& d, const char* op);
std::set<std::string> params_of(const Multiset& m);

struct Eigen {
    RuleInstance rule;
    std::vector<Derivation> premises;
};
// Renames the node's eigenvariable in its premises when it occurs in avoid.
Eigen refresh_eigen(const DerivNode& n, const std::set<std::string>& avoid);

std::vector<std::size_t> unit(std::size_t n, std::size_t i);

}  // namespace lnif::detail

namespace lnif {
// The admissibility rewrite for a structural node applied to its rewritten premise.
Derivation apply_structural(const DerivNode& n, const Derivation& p);
}  // namespace lnif

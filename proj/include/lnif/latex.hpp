// LaTeX rendering of derivations as bussproofs trees.
#pragma once

#include "lnif/calculus.hpp"

namespace lnif {

std::string formula_to_latex(const Formula& f);
std::string sequent_to_latex(const Sequent& g);
// The proof tree; with standalone set, wrapped in a complete document.
std::string derivation_to_latex(const Derivation& d, bool standalone = true);

}  // namespace lnif

// JSON encoding of derivations.
#pragma once

#include "lnif/calculus.hpp"

namespace lnif {

struct InputError : Error {
    explicit InputError(const std::string& d) : Error("InputError", d) {}
};

std::string derivation_to_json(const Derivation& d, int indent = 2);
// Throws InputError on malformed documents and syntax errors on bad formulas.
Derivation derivation_from_json(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace lnif

// Finite linear constant-domain Kripke models and the Goedel chain oracle.
#pragma once

#include "lnif/syntax.hpp"

namespace lnif {

struct UnknownParameter : Error {
    explicit UnknownParameter(const std::string& p) : Error("UnknownParameter", "parameter #" + p + " is not in the domain") {}
};
struct NotPropositional : Error {
    explicit NotPropositional(const std::string& f) : Error("NotPropositional", f + " is not propositional") {}
};
struct ModelError : Error {
    explicit ModelError(const std::string& d) : Error("ModelError", d) {}
};

// A set of worlds, bit i standing for world i (0-based).
using WorldSet = std::uint64_t;
constexpr std::size_t kMaxWorlds = 64;

struct AtomKey {
    std::string pred;
    std::vector<std::string> args;
    friend auto operator<=>(const AtomKey&, const AtomKey&) = default;
    friend bool operator==(const AtomKey&, const AtomKey&) = default;
};

// Worlds 0..worlds-1 ordered by index; one domain shared by every world.
struct KripkeModel {
    std::size_t worlds = 1;
    std::vector<std::string> domain;
    // Worlds at which each atom instance holds; absent instances hold nowhere.
    std::map<AtomKey, WorldSet> valuation;

    WorldSet all() const { return worlds == 64 ? ~WorldSet{0} : (WorldSet{1} << worlds) - 1; }
    WorldSet holds(const AtomKey& k) const;
    void set(const AtomKey& k, std::size_t world);
    bool monotone() const;
    bool in_domain(const std::string& p) const;
};

// Worlds at which a closed formula is satisfied.
WorldSet satisfying_worlds(const KripkeModel& m, const Formula& f);
// Satisfaction at world w (0-based).
bool eval(const KripkeModel& m, std::size_t w, const Formula& f);
bool globally_true(const KripkeModel& m, const Formula& f);
bool check_persistence(const KripkeModel& m, const Formula& f);

struct Countermodel {
    KripkeModel model;
    std::size_t world = 0;
};
std::optional<Countermodel> find_countermodel(const Formula& f, std::size_t max_worlds, std::size_t max_domain);
// Number of valuations find_countermodel visits for one (worlds, domain) size.
std::uint64_t valuation_count(const Formula& f, std::size_t worlds, std::size_t domain);

struct GoedelResult {
    bool valid = true;
    std::size_t chain = 0;
    // Falsifying assignment as "i/k" degrees, when invalid.
    std::map<std::string, std::string> witness;
};
// Evaluation over the chain {0, 1/k, ..., 1} with k = number of variables + 1.
GoedelResult goedel_valid(const Formula& f);
// Degree of f under an assignment of degrees 0..k.
std::size_t goedel_value(const Formula& f, const std::map<std::string, std::size_t>& val, std::size_t k);

std::string print_model(const KripkeModel& m);
// Format: worlds: 2; domain: #a,#b; p@1: (#a); q@2: true. Rejects non-monotone valuations.
KripkeModel parse_model(std::string_view text);

}  // namespace lnif

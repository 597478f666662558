// Components, linear nested sequents, interpretation and splice.
#pragma once

#include "lnif/syntax.hpp"

namespace lnif {

// A sorted vector used as a multiset of formulas.
using Multiset = std::vector<Formula>;

void ms_insert(Multiset& m, const Formula& f);
// Removes one occurrence; false if absent.
bool ms_erase(Multiset& m, const Formula& f);
std::size_t ms_count(const Multiset& m, const Formula& f);
bool ms_contains(const Multiset& m, const Formula& f);
Multiset ms_union(const Multiset& a, const Multiset& b);
// a minus b, or nullopt if b is not contained in a.
std::optional<Multiset> ms_difference(const Multiset& a, const Multiset& b);
Multiset ms_from(std::vector<Formula> fs);
// Elements in canonical printed order.
std::vector<Formula> ms_canonical(const Multiset& m);

enum class Side : std::uint8_t { L, R };

struct Component {
    Multiset ante;
    Multiset cons;

    Multiset& side(Side s) { return s == Side::L ? ante : cons; }
    const Multiset& side(Side s) const { return s == Side::L ? ante : cons; }
    bool empty() const { return ante.empty() && cons.empty(); }
    friend bool operator==(const Component&, const Component&) = default;
};

struct Sequent {
    std::vector<Component> comps;

    Sequent() = default;
    explicit Sequent(std::vector<Component> cs) : comps(std::move(cs)) {}
    static Sequent single(Multiset ante, Multiset cons) { return Sequent({Component{std::move(ante), std::move(cons)}}); }

    std::size_t size() const { return comps.size(); }
    Component& operator[](std::size_t i) { return comps[i]; }
    const Component& operator[](std::size_t i) const { return comps[i]; }
    std::string str() const;
    std::uint64_t hash() const;
    friend bool operator==(const Sequent&, const Sequent&) = default;
};

std::string print_component(const Component& c);
std::string print_sequent(const Sequent& g);
Sequent parse_sequent(std::string_view text, Signature& sig);
Sequent parse_sequent(std::string_view text);

Formula big_and(const Multiset& m);
Formula big_or(const Multiset& m);
Formula interpret(const Sequent& g);
Sequent splice(const Sequent& g, const Sequent& h);
Formula is_valid_interp(const Sequent& g);

std::set<std::string> params(const Sequent& g);
bool has_param(const Sequent& g, const std::string& a);
Sequent rename_param_sequent(const Sequent& g, const std::string& a, const std::string& b);
// The all-empty sequent of the given length.
Sequent empty_sequent(std::size_t n);

}  // namespace lnif

#include "lnif/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lnif {

namespace {

using Json = nlohmann::ordered_json;

std::string param_str(const std::string& p) { return "#" + p; }

std::string param_from(const Json& j, const char* key) {
    if (!j.is_string()) throw InputError(std::string("'") + key + "' must be a string");
    std::string s = j.get<std::string>();
    if (s.size() < 2 || s[0] != '#') throw InputError(std::string("'") + key + "' must be a parameter like #a");
    return s.substr(1);
}

Json encode(const DerivNode& n) {
    Json j;
    j["conclusion"] = n.conclusion.str();
    j["rule"] = rule_name(n.rule.tag);
    Json pr = Json::array();
    for (const auto& o : n.rule.principal) {
        Json e = Json::array();
        e.push_back(o.comp);
        if (o.formula.valid()) {
            e.push_back(o.side == Side::L ? "L" : "R");
            e.push_back(o.formula.str());
        }
        pr.push_back(std::move(e));
    }
    j["principal"] = std::move(pr);
    if (n.rule.eigen) j["eigen"] = param_str(*n.rule.eigen);
    if (n.rule.witness) j["witness"] = param_str(*n.rule.witness);
    if (n.rule.sub_map) j["sub"] = Json::array({param_str(n.rule.sub_map->first), param_str(n.rule.sub_map->second)});
    if (n.rule.cut) {
        j["cutFormula"] = n.rule.cut->cut_formula.str();
        j["k"] = n.rule.cut->k;
        j["alignment"] = n.rule.cut->alignment;
    }
    Json ps = Json::array();
    for (const auto& p : n.premises) ps.push_back(encode(*p));
    j["premises"] = std::move(ps);
    return j;
}

const Json& field(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("missing field '") + key + "'");
    return *it;
}

std::vector<std::size_t> size_list(const Json& j, const char* key) {
    if (!j.is_array()) throw InputError(std::string("'") + key + "' must be an array");
    std::vector<std::size_t> out;
    for (const auto& v : j) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw InputError(std::string("'") + key + "' must hold naturals");
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

Derivation decode(const Json& j, Signature& sig) {
    if (!j.is_object()) throw InputError("derivation node must be an object");
    const Json& concl = field(j, "conclusion");
    if (!concl.is_string()) throw InputError("'conclusion' must be a string");
    Sequent g = parse_sequent(concl.get<std::string>(), sig);
    const Json& rj = field(j, "rule");
    if (!rj.is_string()) throw InputError("'rule' must be a string");
    auto tag = rule_from_name(rj.get<std::string>());
    if (!tag) throw InputError("unknown rule '" + rj.get<std::string>() + "'");
    RuleInstance r;
    r.tag = *tag;
    const Json& pj = field(j, "principal");
    if (!pj.is_array()) throw InputError("'principal' must be an array");
    for (const auto& e : pj) {
        if (!e.is_array() || (e.size() != 1 && e.size() != 3) || !e[0].is_number_integer() || e[0].get<long long>() < 0)
            throw InputError("principal entries are [index] or [index, side, formula]");
        Occurrence o;
        o.comp = e[0].get<std::size_t>();
        if (e.size() == 3) {
            if (!e[1].is_string() || (e[1] != "L" && e[1] != "R")) throw InputError("principal side must be \"L\" or \"R\"");
            if (!e[2].is_string()) throw InputError("principal formula must be a string");
            o.side = e[1] == "L" ? Side::L : Side::R;
            o.formula = parse_formula(e[2].get<std::string>(), sig);
        }
        r.principal.push_back(std::move(o));
    }
    if (j.contains("eigen")) r.eigen = param_from(j["eigen"], "eigen");
    if (j.contains("witness")) r.witness = param_from(j["witness"], "witness");
    if (j.contains("sub")) {
        const Json& s = j["sub"];
        if (!s.is_array() || s.size() != 2) throw InputError("'sub' must be a pair of parameters");
        r.sub_map = std::make_pair(param_from(s[0], "sub"), param_from(s[1], "sub"));
    }
    if (j.contains("cutFormula") || j.contains("k") || j.contains("alignment")) {
        CutInstance c;
        const Json& cf = field(j, "cutFormula");
        if (!cf.is_string()) throw InputError("'cutFormula' must be a string");
        c.cut_formula = parse_formula(cf.get<std::string>(), sig);
        c.k = size_list(field(j, "k"), "k");
        c.alignment = size_list(field(j, "alignment"), "alignment");
        r.cut = std::move(c);
    }
    std::vector<Derivation> ps;
    const Json& pr = field(j, "premises");
    if (!pr.is_array()) throw InputError("'premises' must be an array");
    for (const auto& p : pr) ps.push_back(decode(p, sig));
    return make_derivation(std::move(g), std::move(r), std::move(ps));
}

}  // namespace

std::string derivation_to_json(const Derivation& d, int indent) { return encode(*d).dump(indent) + "\n"; }

Derivation derivation_from_json(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    Signature sig;
    return decode(j, sig);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << content;
}

}  // namespace lnif

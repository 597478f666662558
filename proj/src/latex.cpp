#include "lnif/latex.hpp"

#include <sstream>

namespace lnif {

namespace {

const char* rule_label(RuleTag t) {
    switch (t) {
        case RuleTag::Id1: return "id_{1}";
        case RuleTag::Id2: return "id_{2}";
        case RuleTag::BotL: return "\\bot_{l}";
        case RuleTag::AndL: return "\\land_{l}";
        case RuleTag::AndR: return "\\land_{r}";
        case RuleTag::OrL: return "\\lor_{l}";
        case RuleTag::OrR: return "\\lor_{r}";
        case RuleTag::ImpL: return "\\supset_{l}";
        case RuleTag::ImpR1: return "\\supset_{r1}";
        case RuleTag::ImpR2: return "\\supset_{r2}";
        case RuleTag::Lift: return "lift";
        case RuleTag::ForallL: return "\\forall_{l}";
        case RuleTag::ForallR1: return "\\forall_{r1}";
        case RuleTag::ForallR2: return "\\forall_{r2}";
        case RuleTag::ExistsL: return "\\exists_{l}";
        case RuleTag::ExistsR: return "\\exists_{r}";
        case RuleTag::Iw: return "iw";
        case RuleTag::IcL: return "ic_{l}";
        case RuleTag::IcR: return "ic_{r}";
        case RuleTag::Ew: return "ew";
        case RuleTag::Sub: return "sub";
        case RuleTag::Lwr: return "lwr";
        case RuleTag::BotR: return "\\bot_{r}";
        case RuleTag::Mrg: return "mrg";
        case RuleTag::Cut: return "cut";
    }
    return "?";
}

std::string term_tex(const Term& t) { return t.is_param() ? "\\hat{" + t.name + "}" : t.name; }

std::string tex(const Formula& f, bool top) {
    switch (f.op()) {
        case Op::Bot: return "\\bot";
        case Op::Atom: {
            std::string s = f.name();
            if (!f.args().empty()) {
                s += "(";
                for (std::size_t i = 0; i < f.args().size(); ++i) s += (i ? ", " : "") + term_tex(f.args()[i]);
                s += ")";
            }
            return s;
        }
        case Op::Forall:
        case Op::Exists:
            return std::string(f.op() == Op::Forall ? "\\forall " : "\\exists ") + f.name() + "\\, " + tex(f.body(), false);
        default: {
            const char* op = f.op() == Op::And ? " \\land " : f.op() == Op::Or ? " \\lor " : " \\supset ";
            std::string s = tex(f.lhs(), false) + op + tex(f.rhs(), false);
            return top ? s : "(" + s + ")";
        }
    }
}

std::string side_tex(const Multiset& m) {
    std::string s;
    for (const auto& f : ms_canonical(m)) s += (s.empty() ? "" : ", ") + formula_to_latex(f);
    return s;
}

void emit(const Derivation& d, std::ostringstream& out) {
    for (const auto& p : d->premises) emit(p, out);
    if (d->premises.empty()) out << "\\AxiomC{}\n";
    out << "\\RightLabel{\\scriptsize $(" << rule_label(d->rule.tag) << ")$}\n";
    static const char* infs[] = {"UnaryInfC", "UnaryInfC", "BinaryInfC", "TrinaryInfC"};
    out << "\\" << infs[std::min<std::size_t>(d->premises.size(), 3)] << "{$" << sequent_to_latex(d->conclusion) << "$}\n";
}

}  // namespace

std::string formula_to_latex(const Formula& f) { return tex(f, true); }

std::string sequent_to_latex(const Sequent& g) {
    std::string s;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) s += " \\sslash ";
        std::string l = side_tex(g[i].ante), r = side_tex(g[i].cons);
        s += l + (l.empty() ? "" : " ") + "\\vdash" + (r.empty() ? "" : " ") + r;
    }
    return s;
}

std::string derivation_to_latex(const Derivation& d, bool standalone) {
    std::ostringstream out;
    if (standalone)
        out << "\\documentclass{article}\n\\usepackage{amsmath,amssymb,bussproofs}\n"
               "\\newcommand{\\sslash}{\\mathbin{/\\mkern-5mu/}}\n\\begin{document}\n\\begin{prooftree}\n";
    emit(d, out);
    if (standalone) out << "\\end{prooftree}\n\\end{document}\n";
    return out.str();
}

}  // namespace lnif

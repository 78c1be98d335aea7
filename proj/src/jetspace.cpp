#include "cicurv/jetspace.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cicurv/poly.hpp"

namespace cicurv::jetspace {

void JetSpec::validate() const {
    if (!(1 <= d && d < n)) throw std::invalid_argument("JetSpec: need 1 <= d < n");
    if (l < 0) throw std::invalid_argument("JetSpec: need l >= 0");
}

std::string LocusId::name() const {
    switch (tag) {
        case LocusTag::Inflection: return "inflection";
        case LocusTag::RicciDegenerate: return "ricci-degenerate";
        case LocusTag::ScalarFlat: return "scalar-flat";
        case LocusTag::HolSecDegenerate: return "holsec-degenerate";
        case LocusTag::HolBisecDegenerate: return "holbisec-degenerate";
        case LocusTag::ExteriorCotangent: return "exterior-cotangent(" + std::to_string(l) + ")";
        case LocusTag::ExteriorNormal: return "exterior-normal(" + std::to_string(l) + ")";
        case LocusTag::LineTangency: return "line-tangency(" + std::to_string(l) + ")";
        case LocusTag::Transversality: return "transversality";
    }
    return "?";
}

LocusId LocusId::parse(const std::string& name) {
    auto base = name;
    int l = 1;
    auto paren = name.find('(');
    if (paren != std::string::npos) {
        base = name.substr(0, paren);
        l = std::stoi(name.substr(paren + 1));
    }
    if (base == "inflection") return {LocusTag::Inflection, 1};
    if (base == "ricci-degenerate" || base == "ricci") return {LocusTag::RicciDegenerate, 1};
    if (base == "scalar-flat" || base == "scalar") return {LocusTag::ScalarFlat, 1};
    if (base == "holsec-degenerate" || base == "holsec") return {LocusTag::HolSecDegenerate, 1};
    if (base == "holbisec-degenerate" || base == "holbisec")
        return {LocusTag::HolBisecDegenerate, 1};
    if (base == "exterior-cotangent") return {LocusTag::ExteriorCotangent, l};
    if (base == "exterior-normal") return {LocusTag::ExteriorNormal, l};
    if (base == "line-tangency") return {LocusTag::LineTangency, l};
    if (base == "transversality") return {LocusTag::Transversality, 1};
    throw std::invalid_argument("unknown locus name: " + name);
}

long long jet_space_dim(const JetSpec& spec) {
    spec.validate();
    long long mc = monomial_count(spec.d, spec.l);
    return spec.n * mc - spec.d * (mc - 1);
}

long long elimination_bound(long long codim_A, long long dim_fiber) {
    if (codim_A < 0 || dim_fiber < 0)
        throw std::invalid_argument("elimination_bound: negative input");
    return std::max(0LL, codim_A - dim_fiber);
}

CodimReport locus_codim(const LocusId& locus, const JetSpec& spec) {
    spec.validate();
    const long long d = spec.d, n = spec.n;
    CodimReport rep;
    rep.locus = locus;
    rep.spec = spec;
    switch (locus.tag) {
        case LocusTag::Inflection:
            if (d != 1) throw std::invalid_argument("inflection locus requires d = 1");
            rep.codim_lower_bound = n - 1;
            rep.hypothesis_name = "n >= 3";
            rep.hypothesis_holds = n >= 3;
            break;
        case LocusTag::RicciDegenerate:
            rep.codim_lower_bound = d * (n - d - 1) + 1;
            rep.hypothesis_name = "d <= n-2";
            rep.hypothesis_holds = d <= n - 2;
            break;
        case LocusTag::ScalarFlat:
            rep.codim_lower_bound = d * (d + 1) * (n - d) / 2;
            rep.hypothesis_name = "d <= n-1 and n >= 3";
            rep.hypothesis_holds = (d <= n - 1) && (n >= 3);
            break;
        case LocusTag::HolSecDegenerate:
            rep.codim_lower_bound = n - 2 * d + 1;
            rep.hypothesis_name = "n >= 3d";
            rep.hypothesis_holds = n >= 3 * d;
            break;
        case LocusTag::HolBisecDegenerate:
            rep.codim_lower_bound = n - 3 * d + 2;
            rep.hypothesis_name = "n >= 4d-1";
            rep.hypothesis_holds = n >= 4 * d - 1;
            break;
        case LocusTag::ExteriorCotangent: {
            const long long l = locus.l;
            if (l < 1) throw std::invalid_argument("exterior-cotangent requires l >= 1");
            rep.codim_lower_bound = 1 - d + l * (n + l) - 2 * d * l;
            rep.hypothesis_name = "2d(1+l) <= l(n+l)";
            rep.hypothesis_holds = 2 * d * (1 + l) <= l * (n + l);
            break;
        }
        case LocusTag::ExteriorNormal: {
            const long long l = locus.l;
            if (l < 1) throw std::invalid_argument("exterior-normal requires l >= 1");
            rep.codim_lower_bound = 1 - d + 2 * d * l - l * (n - l);
            rep.hypothesis_name = "l(n-l) <= 2d(l-1)";
            rep.hypothesis_holds = l * (n - l) <= 2 * d * (l - 1);
            rep.notes =
                "normal-bundle inequality appears with both signs in the source "
                "statements; this table uses l(n-l) <= 2d(l-1)";
            break;
        }
        case LocusTag::LineTangency: {
            const long long l = locus.l;
            if (l < 1) throw std::invalid_argument("line-tangency requires l >= 1");
            if (d != n - 1) throw std::invalid_argument("line-tangency locus requires d = n-1");
            rep.codim_lower_bound = l + 1 - n;
            rep.hypothesis_name = "l >= 2n-1";
            rep.hypothesis_holds = l >= 2 * n - 1;
            break;
        }
        case LocusTag::Transversality:
            rep.codim_lower_bound = n + 1;
            rep.hypothesis_name = "1 <= d < n";
            rep.hypothesis_holds = true;
            break;
    }
    rep.threshold_holds = rep.codim_lower_bound > d;
    return rep;
}

std::vector<CodimReport> threshold_table(int d, int n) {
    JetSpec two{d, n, 2};
    two.validate();
    std::vector<CodimReport> out;
    if (d == 1) out.push_back(locus_codim({LocusTag::Inflection, 1}, two));
    out.push_back(locus_codim({LocusTag::RicciDegenerate, 1}, two));
    out.push_back(locus_codim({LocusTag::ScalarFlat, 1}, two));
    out.push_back(locus_codim({LocusTag::HolSecDegenerate, 1}, two));
    out.push_back(locus_codim({LocusTag::HolBisecDegenerate, 1}, two));
    for (int l = 1; l <= d; ++l) {
        out.push_back(locus_codim({LocusTag::ExteriorCotangent, l}, two));
        out.push_back(locus_codim({LocusTag::ExteriorNormal, l}, two));
    }
    return out;
}

static nlohmann::json report_json(const CodimReport& r) {
    nlohmann::json j;
    j["locus"] = r.locus.name();
    j["d"] = r.spec.d;
    j["n"] = r.spec.n;
    j["l"] = r.spec.l;
    j["codim_lower_bound"] = r.codim_lower_bound;
    j["threshold_holds"] = r.threshold_holds;
    j["hypothesis"] = r.hypothesis_name;
    j["hypothesis_holds"] = r.hypothesis_holds;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

std::string CodimReport::to_json() const { return report_json(*this).dump(2); }

std::string reports_to_json(const std::vector<CodimReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    return arr.dump(2);
}

std::string reports_to_text(const std::vector<CodimReport>& reports) {
    std::ostringstream os;
    os << "locus                      codim>=   codim>d   hypothesis             holds\n";
    for (const auto& r : reports) {
        std::string name = r.locus.name();
        name.resize(26, ' ');
        std::string codim = std::to_string(r.codim_lower_bound);
        codim.resize(9, ' ');
        std::string hyp = r.hypothesis_name;
        hyp.resize(22, ' ');
        os << name << ' ' << codim << ' ' << (r.threshold_holds ? "yes" : "no ") << "       "
           << hyp << ' ' << (r.hypothesis_holds ? "yes" : "no") << '\n';
    }
    return os.str();
}

}  // namespace cicurv::jetspace

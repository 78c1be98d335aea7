#pragma once

#include <string>
#include <vector>

namespace cicurv::jetspace {

/// Indexing triple for the space of l-jets of d-dimensional submanifolds
/// of C^n.
struct JetSpec {
    int d = 1;
    int n = 2;
    int l = 0;

    void validate() const;
};

enum class LocusTag {
    Inflection,
    RicciDegenerate,
    ScalarFlat,
    HolSecDegenerate,
    HolBisecDegenerate,
    ExteriorCotangent,
    ExteriorNormal,
    LineTangency,
    Transversality,
};

struct LocusId {
    LocusTag tag;
    int l = 1;  // only meaningful for the parametrized tags

    std::string name() const;
    static LocusId parse(const std::string& name);
};

struct CodimReport {
    LocusId locus;
    JetSpec spec;
    long long codim_lower_bound = 0;
    bool threshold_holds = false;  // codim_lower_bound > d
    std::string hypothesis_name;
    bool hypothesis_holds = false;
    std::string notes;

    std::string to_json() const;
};

/// dim Jet^l_{d,n} via the quotient description: parametrization-jet
/// coefficients minus the reparametrization group dimension.
long long jet_space_dim(const JetSpec& spec);

/// Closed-form codimension lower bound for an affine-invariant locus.
/// Throws std::invalid_argument on incompatible locus/spec pairs.
CodimReport locus_codim(const LocusId& locus, const JetSpec& spec);

/// One report per theorem case for the pair (d, n); exterior cases are
/// emitted for every 1 <= l <= d.
std::vector<CodimReport> threshold_table(int d, int n);

/// codim of a projected locus: max(0, codim_A - dim_fiber).
long long elimination_bound(long long codim_A, long long dim_fiber);

std::string reports_to_json(const std::vector<CodimReport>& reports);
std::string reports_to_text(const std::vector<CodimReport>& reports);

}  // namespace cicurv::jetspace

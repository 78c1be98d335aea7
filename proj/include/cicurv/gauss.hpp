#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cicurv/germ.hpp"

namespace cicurv::gauss {

/// Kernel statistics of the second fundamental form: for each unit u in T,
/// K_u = { u' : II(u,u') = 0 }. Griffiths positivity of the l-th exterior
/// power of T*Y at the base point holds iff max over u of dim K_u is < l.
struct KernelProfile {
    int max_kernel_dim = 0;   // max over unit u of dim ker(II(u,.)) at rank_tol
    Eigen::VectorXcd witness_u;  // direction attaining the maximal kernel
    double margin = 0.0;         // l-th smallest singular value, minimized over u
    std::vector<double> per_k_min;  // per_k_min[k-1] = min over u of the k-th
                                    // smallest singular value of II(u,.)

    std::string to_json(const RunConfig& cfg) const;
};

/// Matrix of the map from the l-th wedge of T to N tensor the (l-1)-th
/// wedge of T induced by II(u,.): wedge basis in lexicographic subset
/// order, rows laid out as r * C(d,l-1) + wedge index.
struct IILambda {
    int d = 0;
    int m = 0;
    int l = 1;
    Eigen::MatrixXcd M;  // m*C(d,l-1) x C(d,l)
};

struct ImmersionReport {
    bool immersion = false;
    double sigma_min = 0.0;
    std::string warning;

    std::string to_json(const RunConfig& cfg) const;
};

/// Minimizes the k-th smallest singular value of the map II(u,.) : T -> N
/// (padded with zero rows when d > n-d, so the structural kernel counts)
/// over unit u, for k = 1..d; reports the largest kernel dimension found.
KernelProfile kernel_profile(const Germ& g, int l, int restarts);

/// II Lambda^l_u: sum over positions alpha of (-1)^(alpha+1)
/// II(u, u_alpha) tensor the wedge with u_alpha removed. u is given in
/// T-frame coordinates and need not be unit.
IILambda ii_lambda(const Germ& g, const Eigen::VectorXcd& u, int l);

/// Finite-difference immersivity of the Gauss map (p,[v]) -> [v] from the
/// projectivized l-th wedge of TY into the projective wedge space:
/// parametrizes the zero set as a graph over T, differentiates along base
/// and fiber directions at step h, and reports the smallest singular value
/// at the expected rank d + C(d,l) - 1, minimized over fiber samples.
/// With normal_bundle set, checks the dual map on the l-th wedge of the
/// conormal frame (the rows of dF along the chart) instead; then 1 <= l <=
/// n - d.
ImmersionReport gauss_immersion_check(const Germ& g, int l, double h,
                                      bool normal_bundle = false);

/// Lexicographically ordered k-element subsets of {0..d-1}.
std::vector<std::vector<int>> subsets(int d, int k);

}  // namespace cicurv::gauss

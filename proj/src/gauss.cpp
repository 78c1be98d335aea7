#include "cicurv/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <json.hpp>

#include "cicurv/sphere_opt.hpp"

namespace cicurv::gauss {

namespace {

nlohmann::json vec_to_json(const Eigen::VectorXcd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back({{"re", v(i).real()}, {"im", v(i).imag()}});
    return a;
}

/// k-th smallest singular value (1-based) of II(u,.) padded to a square
/// map, so kernel dimension >= k iff this value vanishes.
double kth_smallest_sv(const SFF& sff, const Eigen::VectorXcd& u, int k) {
    const int d = sff.d, m = sff.m;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(std::max(d, m), d);
    M.topRows(m) = sff.slice(u);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(d - k);
}

/// Wedge coordinates of v_1 ^ ... ^ v_l in C^n over lexicographic subsets.
Eigen::VectorXcd wedge(const std::vector<Eigen::VectorXcd>& v,
                       const std::vector<std::vector<int>>& rows) {
    const int l = static_cast<int>(v.size());
    Eigen::VectorXcd out(rows.size());
    Eigen::MatrixXcd sub(l, l);
    for (std::size_t s = 0; s < rows.size(); ++s) {
        for (int i = 0; i < l; ++i)
            for (int j = 0; j < l; ++j) sub(i, j) = v[j](rows[s][i]);
        out(s) = sub.determinant();
    }
    return out;
}

}  // namespace

std::vector<std::vector<int>> subsets(int d, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > d) return out;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == d - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

KernelProfile kernel_profile(const Germ& g, int l, int restarts) {
    const auto& sff = g.sff();
    const int d = sff.d;
    if (l < 1 || l > d) throw std::invalid_argument("kernel_profile: need 1 <= l <= d");

    KernelProfile prof;
    prof.per_k_min.assign(d, 0.0);
    prof.witness_u = Eigen::VectorXcd::Unit(d, 0);
    for (int k = 1; k <= d; ++k) {
        SphereObjective f = [&sff, k](const Eigen::VectorXcd& u) {
            return kth_smallest_sv(sff, u, k);
        };
        auto best = minimize_on_sphere(f, d, restarts, g.config().seed + k,
                                       g.config().threads);
        prof.per_k_min[k - 1] = best.value;
        if (best.value < g.config().rank_tol) {
            prof.max_kernel_dim = k;
            prof.witness_u = best.argmin;
        }
    }
    prof.margin = prof.per_k_min[l - 1];
    return prof;
}

std::string KernelProfile::to_json(const RunConfig& cfg) const {
    nlohmann::json j;
    j["version"] = kVersion;
    j["max_kernel_dim"] = max_kernel_dim;
    j["witness_u"] = vec_to_json(witness_u);
    j["margin"] = margin;
    j["per_k_min"] = per_k_min;
    j["config"] = nlohmann::json::parse(cfg.to_json());
    return j.dump(2);
}

IILambda ii_lambda(const Germ& g, const Eigen::VectorXcd& u, int l) {
    const auto& sff = g.sff();
    const int d = sff.d, m = sff.m;
    if (l < 1 || l > d) throw std::invalid_argument("ii_lambda: need 1 <= l <= d");
    if (u.size() != d || u.norm() == 0.0)
        throw std::invalid_argument("ii_lambda: u must be a nonzero vector in T");

    auto cols = subsets(d, l);
    auto rows_w = subsets(d, l - 1);
    std::map<std::vector<int>, int> widx;
    for (std::size_t i = 0; i < rows_w.size(); ++i) widx[rows_w[i]] = static_cast<int>(i);

    const auto wcount = static_cast<int>(rows_w.size());
    Eigen::MatrixXcd slice = sff.slice(u);  // m x d, column i = II(u, e_i)

    IILambda out;
    out.d = d;
    out.m = m;
    out.l = l;
    out.M = Eigen::MatrixXcd::Zero(m * wcount, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (int a = 0; a < l; ++a) {
            double sign = (a % 2 == 0) ? 1.0 : -1.0;  // (-1)^(alpha+1), alpha = a+1
            std::vector<int> rest;
            for (int b = 0; b < l; ++b)
                if (b != a) rest.push_back(cols[c][b]);
            int w = widx.at(rest);
            for (int r = 0; r < m; ++r)
                out.M(r * wcount + w, c) += sign * slice(r, cols[c][a]);
        }
    }
    return out;
}

ImmersionReport gauss_immersion_check(const Germ& g, int l, double h, bool normal_bundle) {
    const int n = g.n(), m = g.m(), d = g.d();
    const int bundle_rank = normal_bundle ? m : d;
    if (l < 1 || l > bundle_rank)
        throw std::invalid_argument("gauss_immersion_check: l out of range for the bundle");

    ImmersionReport rep;
    if (h < 1e-6 || h > 1e-2)
        rep.warning = "step size outside the well-conditioned range [1e-6, 1e-2]";

    const auto& fr = g.frames();
    const auto& F = g.F();
    const Eigen::VectorXcd& p = g.point();

    // Graph chart: phi(w) = p + T w + N psi(w), psi from Newton on F = 0.
    auto phi = [&](const Eigen::VectorXcd& w) {
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(m);
        for (int it = 0; it < 30; ++it) {
            Eigen::VectorXcd q = p + fr.T * w + fr.N * psi;
            Eigen::VectorXcd f = F.evaluate(q);
            if (f.norm() < 1e-14) break;
            Eigen::MatrixXcd A = F.jacobian(q) * fr.N;
            psi -= A.partialPivLu().solve(f);
        }
        return (p + fr.T * w + fr.N * psi).eval();
    };
    // Tangent frame along the chart from the implicit function theorem:
    // tau_i(w) = T e_i - N (dF N)^{-1} dF T e_i, smooth in w. For the
    // normal-bundle map the frame is the conormal one: the rows of dF.
    auto frame = [&](const Eigen::VectorXcd& w) {
        Eigen::VectorXcd q = phi(w);
        Eigen::MatrixXcd J = F.jacobian(q);
        std::vector<Eigen::VectorXcd> tau(bundle_rank);
        if (normal_bundle) {
            for (int r = 0; r < m; ++r) tau[r] = J.row(r).transpose();
        } else {
            Eigen::MatrixXcd A = (J * fr.N).partialPivLu().solve(J * fr.T);  // m x d
            for (int i = 0; i < d; ++i) tau[i] = fr.T.col(i) - fr.N * A.col(i);
        }
        return tau;
    };

    auto colsT = subsets(bundle_rank, l);  // wedge basis of the fiber
    auto rowsN = subsets(n, l);            // wedge coordinates in C^n
    const auto fdim = static_cast<int>(colsT.size());

    // V(w,c) = sum_S c_S tau_{s_1}(w) ^ ... ^ tau_{s_l}(w).
    auto V = [&](const Eigen::VectorXcd& w, const Eigen::VectorXcd& c) {
        auto tau = frame(w);
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rowsN.size());
        for (int s = 0; s < fdim; ++s) {
            if (c(s) == Complex(0.0)) continue;
            std::vector<Eigen::VectorXcd> sel;
            for (int idx : colsT[s]) sel.push_back(tau[idx]);
            out += c(s) * wedge(sel, rowsN);
        }
        return out;
    };

    const int expected_rank = d + fdim - 1;
    auto sigma_at = [&](const Eigen::VectorXcd& c) {
        Eigen::VectorXcd v0 = V(Eigen::VectorXcd::Zero(d), c);
        double nv = v0.norm();
        Eigen::MatrixXcd P =
            Eigen::MatrixXcd::Identity(v0.size(), v0.size()) - (v0 * v0.adjoint()) / (nv * nv);
        Eigen::MatrixXcd D(v0.size(), d + fdim);
        for (int i = 0; i < d; ++i) {
            Eigen::VectorXcd wp = Eigen::VectorXcd::Zero(d), wm = wp;
            wp(i) += h;
            wm(i) -= h;
            D.col(i) = P * (V(wp, c) - V(wm, c)) / (2.0 * h * nv);
        }
        for (int s = 0; s < fdim; ++s)
            D.col(d + s) = P * V(Eigen::VectorXcd::Zero(d), Eigen::VectorXcd::Unit(fdim, s)) / nv;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(D);
        return svd.singularValues()(expected_rank - 1);
    };

    // Minimize over the fiber: an immersion must hold at every [c].
    double best = std::numeric_limits<double>::infinity();
    if (fdim == 1) {
        best = sigma_at(Eigen::VectorXcd::Ones(1));
    } else {
        for (int s = 0; s < fdim; ++s)
            best = std::min(best, sigma_at(Eigen::VectorXcd::Unit(fdim, s)));
        SphereObjective f = [&](const Eigen::VectorXcd& c) { return sigma_at(c); };
        auto r = minimize_on_sphere(f, fdim, g.config().restarts / 4 + 1, g.config().seed,
                                    g.config().threads);
        best = std::min(best, r.value);
    }

    rep.sigma_min = best;
    rep.immersion = best > g.config().rank_tol;
    return rep;
}

std::string ImmersionReport::to_json(const RunConfig& cfg) const {
    nlohmann::json j;
    j["version"] = kVersion;
    j["immersion"] = immersion;
    j["sigma_min"] = sigma_min;
    j["warning"] = warning;
    j["config"] = nlohmann::json::parse(cfg.to_json());
    return j.dump(2);
}

}  // namespace cicurv::gauss

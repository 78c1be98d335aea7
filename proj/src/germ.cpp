#include "cicurv/germ.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "cicurv/sphere_opt.hpp"

namespace cicurv {

namespace {

void check_unit(const Eigen::VectorXcd& v, int d, const char* what) {
    if (v.size() != d) throw std::invalid_argument(std::string(what) + ": wrong dimension");
    if (std::abs(v.norm() - 1.0) > 1e-8)
        throw std::invalid_argument(std::string(what) + ": not a unit vector");
}

nlohmann::json vec_to_json(const Eigen::VectorXcd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back({{"re", v(i).real()}, {"im", v(i).imag()}});
    return a;
}

}  // namespace

Eigen::VectorXcd SFF::apply(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd out(m);
    for (int r = 0; r < m; ++r) out(r) = u.transpose() * S[r] * v;
    return out;
}

Eigen::MatrixXcd SFF::slice(const Eigen::VectorXcd& u) const {
    Eigen::MatrixXcd M(m, d);
    for (int r = 0; r < m; ++r) M.row(r) = (S[r] * u).transpose();
    return M;
}

double SFF::frobenius() const {
    double s = 0.0;
    for (const auto& Sr : S) s += Sr.squaredNorm();
    return std::sqrt(s);
}

Germ::Germ(PolynomialMap F, Eigen::VectorXcd p, RunConfig cfg)
    : F_(std::move(F)), p_(std::move(p)), cfg_(cfg) {
    const int n = F_.n(), m = F_.m();
    if (m < 1 || m >= n) throw std::invalid_argument("Germ: need 1 <= m < n");
    if (p_.size() != n) throw std::invalid_argument("Germ: point has wrong dimension");

    double res = F_.evaluate(p_).norm();
    if (res > cfg_.zero_tol)
        throw std::invalid_argument("Germ: base point is not on the zero set (residual " +
                                    std::to_string(res) + ")");

    // Newton-project the (possibly rounded) base point onto {F = 0}.
    for (int iter = 0; iter < 20 && res > 1e-15; ++iter) {
        Eigen::MatrixXcd J = F_.jacobian(p_);
        Eigen::VectorXcd f = F_.evaluate(p_);
        p_ -= J.completeOrthogonalDecomposition().solve(f);
        res = F_.evaluate(p_).norm();
    }

    Eigen::MatrixXcd J = F_.jacobian(p_);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J, Eigen::ComputeFullV | Eigen::ComputeFullU);
    if (svd.singularValues()(m - 1) < cfg_.rank_tol)
        throw DegenerateGermError("Germ: dF(p) is not surjective (sigma_min = " +
                                  std::to_string(svd.singularValues()(m - 1)) + ")");

    // Right singular vectors: first m span the orthogonal complement of the
    // kernel, the remaining d = n - m span ker dF(p).
    frames_.N = svd.matrixV().leftCols(m);
    frames_.T = svd.matrixV().rightCols(n - m);

    // dF(p)|_N x = -HessF(p)(t_i, t_j), the N-restricted square system.
    const int d = n - m;
    Eigen::MatrixXcd A = J * frames_.N;  // m x m, invertible
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    std::vector<Eigen::MatrixXcd> hess(m);
    for (int r = 0; r < m; ++r) hess[r] = F_.hessian(r, p_);

    sff_.d = d;
    sff_.m = m;
    sff_.S.assign(m, Eigen::MatrixXcd::Zero(d, d));
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            Eigen::VectorXcd h(m);
            for (int r = 0; r < m; ++r)
                h(r) = frames_.T.col(i).transpose() * hess[r] * frames_.T.col(j);
            Eigen::VectorXcd c = lu.solve(-h);
            for (int r = 0; r < m; ++r) {
                sff_.S[r](i, j) = c(r);
                sff_.S[r](j, i) = c(r);
            }
        }
    }
}

double ricci(const Germ& g, const Eigen::VectorXcd& v) {
    check_unit(v, g.d(), "ricci");
    double s = 0.0;
    for (const auto& Sr : g.sff().S) s += (Sr * v).squaredNorm();
    return -2.0 * s;
}

double scalar(const Germ& g) {
    double f = g.sff().frobenius();
    return -4.0 * f * f;
}

double holsec(const Germ& g, const Eigen::VectorXcd& v) {
    check_unit(v, g.d(), "holsec");
    return holbisec(g, v, v);
}

double holbisec(const Germ& g, const Eigen::VectorXcd& v, const Eigen::VectorXcd& vp) {
    check_unit(v, g.d(), "holbisec");
    check_unit(vp, g.d(), "holbisec");
    double s = 0.0;
    for (const auto& Sr : g.sff().S) s += std::norm(Complex(v.transpose() * Sr * vp));
    return -2.0 * s;
}

std::string certificate_name(Certificate c) {
    switch (c) {
        case Certificate::CertifiedNegative: return "certified_negative";
        case Certificate::CertifiedNotNegative: return "certified_not_negative";
        case Certificate::NumericallyNegativeWithMargin:
            return "numerically_negative_with_margin";
        case Certificate::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string CurvatureReport::to_json(const RunConfig& cfg) const {
    nlohmann::json j;
    j["version"] = kVersion;
    j["kind"] = kind;
    j["certificate"] = certificate_name(certificate);
    j["margin"] = margin;
    j["witness"] = vec_to_json(witness);
    j["detail"] = detail;
    j["config"] = nlohmann::json::parse(cfg.to_json());
    return j.dump(2);
}

CurvatureReport certify_ricci_negative(const Germ& g) {
    const auto& sff = g.sff();
    const int d = sff.d, m = sff.m;
    // Stack v -> II(v, .) as a (m d) x d matrix: row (r,i), column j.
    Eigen::MatrixXcd L(m * d, d);
    for (int r = 0; r < m; ++r) L.middleRows(r * d, d) = sff.S[r];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L, Eigen::ComputeFullV);
    double smin = svd.singularValues()(d - 1);

    CurvatureReport rep;
    rep.kind = "ricci";
    rep.margin = smin;
    rep.witness = svd.matrixV().col(d - 1);
    const double tol = g.config().rank_tol;
    if (smin >= tol)
        rep.certificate = Certificate::CertifiedNegative;
    else if (smin <= tol / 10)
        rep.certificate = Certificate::CertifiedNotNegative;
    else
        rep.certificate = Certificate::Inconclusive;
    rep.detail = "sigma_min of the stacked v -> II(v,.) matrix";
    return rep;
}

CurvatureReport certify_scalar_negative(const Germ& g) {
    double f = g.sff().frobenius();
    CurvatureReport rep;
    rep.kind = "scalar";
    rep.margin = f;
    rep.witness = Eigen::VectorXcd::Zero(g.d());
    rep.certificate = (f >= g.config().rank_tol) ? Certificate::CertifiedNegative
                                                 : Certificate::CertifiedNotNegative;
    rep.detail = "Frobenius norm of II";
    return rep;
}

CurvatureReport certify_holsec_negative(const Germ& g, int restarts) {
    const auto& sff = g.sff();
    SphereObjective f = [&sff](const Eigen::VectorXcd& v) {
        double s = 0.0;
        for (const auto& Sr : sff.S) s += std::norm(Complex(v.transpose() * Sr * v));
        return std::sqrt(s);
    };
    auto best = minimize_on_sphere(f, sff.d, restarts, g.config().seed, g.config().threads);

    CurvatureReport rep;
    rep.kind = "holsec";
    rep.margin = best.value;
    rep.witness = best.argmin;
    rep.certificate = (best.value < g.config().zero_tol)
                          ? Certificate::CertifiedNotNegative
                          : Certificate::NumericallyNegativeWithMargin;
    rep.detail = "min |II(v,v)| over the unit sphere, " + std::to_string(restarts) + " restarts";
    return rep;
}

CurvatureReport certify_holbisec_negative(const Germ& g, int restarts) {
    const auto& sff = g.sff();
    const int d = sff.d, m = sff.m;
    SphereObjective f = [&sff, d, m](const Eigen::VectorXcd& v) {
        // Smallest singular value of II(v, .) as a map C^d -> C^m; pad with
        // zero rows when d > m so the structural kernel is counted.
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(std::max(d, m), d);
        M.topRows(m) = sff.slice(v);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        return svd.singularValues()(d - 1);
    };
    auto best = minimize_on_sphere(f, d, restarts, g.config().seed, g.config().threads);

    CurvatureReport rep;
    rep.kind = "holbisec";
    rep.margin = best.value;
    rep.witness = best.argmin;
    rep.certificate = (best.value < g.config().zero_tol)
                          ? Certificate::CertifiedNotNegative
                          : Certificate::NumericallyNegativeWithMargin;
    rep.detail =
        "min sigma_min(II(v,.)) over the unit sphere, " + std::to_string(restarts) + " restarts";
    return rep;
}

}  // namespace cicurv

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cicurv/config.hpp"
#include "cicurv/poly.hpp"

namespace cicurv {

/// Thrown when dF(p) is not surjective at the requested tolerance.
struct DegenerateGermError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Orthonormal tangent/normal frames at the base point. Columns of T span
/// ker dF(p); columns of N span its orthogonal complement (Hermitian inner
/// product), on which dF(p) restricts to an invertible square map.
struct Frames {
    Eigen::MatrixXcd T;  // n x d
    Eigen::MatrixXcd N;  // n x (n-d)
};

/// Second fundamental form in the frames: II(u,v) = sum_r (u^T S_r v) f_r,
/// u, v in T-frame coordinates, f_r the normal frame vectors. Each S_r is a
/// complex symmetric d x d matrix.
struct SFF {
    int d = 0;
    int m = 0;
    std::vector<Eigen::MatrixXcd> S;

    /// II(u,v) in N-frame coordinates (length m).
    Eigen::VectorXcd apply(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const;
    /// Matrix of II(u, .) : T -> N in the frames (m x d).
    Eigen::MatrixXcd slice(const Eigen::VectorXcd& u) const;
    /// sqrt(sum_r |S_r|_F^2) = frame-invariant norm of II.
    double frobenius() const;
};

/// A complete-intersection germ {F = 0} at p with dF(p) surjective. Frames
/// and the second fundamental form are computed once at construction and
/// immutable afterwards. Base points with |F(p)| <= zero_tol are accepted
/// and Newton-projected onto the zero set.
class Germ {
public:
    Germ(PolynomialMap F, Eigen::VectorXcd p, RunConfig cfg = {});

    const PolynomialMap& F() const { return F_; }
    const Eigen::VectorXcd& point() const { return p_; }
    const RunConfig& config() const { return cfg_; }
    int n() const { return F_.n(); }
    int m() const { return F_.m(); }
    int d() const { return F_.n() - F_.m(); }

    const Frames& frames() const { return frames_; }
    const SFF& sff() const { return sff_; }

private:
    PolynomialMap F_;
    Eigen::VectorXcd p_;
    RunConfig cfg_;
    Frames frames_;
    SFF sff_;
};

/// Curvature quantities at the base point; v, v' are unit vectors in
/// T-frame coordinates (length d). Non-unit input -> std::invalid_argument.
double ricci(const Germ& g, const Eigen::VectorXcd& v);
double scalar(const Germ& g);
double holsec(const Germ& g, const Eigen::VectorXcd& v);
double holbisec(const Germ& g, const Eigen::VectorXcd& v, const Eigen::VectorXcd& vp);

enum class Certificate {
    CertifiedNegative,
    CertifiedNotNegative,
    NumericallyNegativeWithMargin,
    Inconclusive,
};

std::string certificate_name(Certificate c);

struct CurvatureReport {
    std::string kind;  // ricci | scalar | holsec | holbisec
    Certificate certificate = Certificate::Inconclusive;
    double margin = 0.0;            // nonnegative
    Eigen::VectorXcd witness;       // extremal direction in T-frame coords
    std::string detail;

    std::string to_json(const RunConfig& cfg) const;
};

/// Exact rank test on v -> II(v, .): smallest singular value of the
/// d(n-d) x d stacked matrix against rank_tol.
CurvatureReport certify_ricci_negative(const Germ& g);
/// Exact zero test on |II|.
CurvatureReport certify_scalar_negative(const Germ& g);
/// Multistart minimization of |II(v,v)| over the unit sphere; never claims
/// certified_negative.
CurvatureReport certify_holsec_negative(const Germ& g, int restarts);
/// Multistart minimization of min_{|w|=1} |II(v,w)| over unit v.
CurvatureReport certify_holbisec_negative(const Germ& g, int restarts);

}  // namespace cicurv

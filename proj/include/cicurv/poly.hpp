#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cicurv {

using Complex = std::complex<double>;

/// Exponent multi-index over the domain variables.
using MultiIndex = std::vector<int>;

/// A holomorphic polynomial map C^n -> C^m stored as sparse multi-index
/// coefficient data. Evaluation, differentiation, translation and
/// composition with affine maps are exact on coefficients.
class PolynomialMap {
public:
    PolynomialMap() : n_(0), m_(0) {}
    PolynomialMap(int n, int m);

    int n() const { return n_; }
    int m() const { return m_; }

    /// Adds c * z^alpha to component j (accumulates on duplicates).
    void add_term(int j, const MultiIndex& alpha, Complex c);
    Complex coeff(int j, const MultiIndex& alpha) const;

    /// Total degree, -1 for the zero map.
    int degree() const;

    /// Drops terms with |coeff| <= tol.
    PolynomialMap pruned(double tol = 0.0) const;

    Eigen::VectorXcd evaluate(const Eigen::VectorXcd& z) const;
    /// m x n Jacobian at z.
    Eigen::MatrixXcd jacobian(const Eigen::VectorXcd& z) const;
    /// Hessian of component j at z, as an n x n symmetric matrix.
    Eigen::MatrixXcd hessian(int j, const Eigen::VectorXcd& z) const;

    /// d/dz_i applied to every component.
    PolynomialMap derivative(int var) const;

    /// q(z) = p(z + t), exact binomial expansion.
    PolynomialMap translated(const Eigen::VectorXcd& t) const;
    /// q(z) = p(A z), exact expansion. A is n x n.
    PolynomialMap composed_linear(const Eigen::MatrixXcd& A) const;
    /// q(z) = p(A z + b).
    PolynomialMap composed_affine(const Eigen::MatrixXcd& A,
                                  const Eigen::VectorXcd& b) const;

    /// Degree-l truncation (drops every term of total degree > l).
    PolynomialMap truncated(int l) const;

    /// Componentwise product with a scalar polynomial (m = 1) in the same
    /// variables.
    PolynomialMap multiplied(const PolynomialMap& scalar) const;

    PolynomialMap operator+(const PolynomialMap& o) const;
    PolynomialMap operator-(const PolynomialMap& o) const;
    PolynomialMap operator*(Complex s) const;
    PolynomialMap& operator+=(const PolynomialMap& o);

    /// Coefficients of t -> component j of p(z + t*b), degree-indexed.
    std::vector<Complex> restrict_to_line(int j, const Eigen::VectorXcd& z,
                                          const Eigen::VectorXcd& b) const;

    /// Max modulus over all coefficients (the norm fixed on Pol_l).
    double coeff_norm() const;

    /// Number of stored terms.
    std::size_t term_count() const { return terms_.size(); }

    struct Term {
        int j;
        MultiIndex alpha;
        Complex c;
    };
    std::vector<Term> terms() const;

    std::string to_json() const;
    static PolynomialMap from_json(const std::string& text);

private:
    using Key = std::pair<int, MultiIndex>;
    int n_, m_;
    std::map<Key, Complex> terms_;

    friend class PolyBuilder;
};

/// Number of monomials of degree <= l in d variables: C(d+l, d).
long long monomial_count(int d, int l);
long long binomial(long long a, long long b);

}  // namespace cicurv

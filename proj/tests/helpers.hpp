#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cicurv/germ.hpp"
#include "cicurv/poly.hpp"

namespace cicurv::testing {

inline Complex random_unit_complex(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * 3.14159265358979323846);
    double t = u(rng);
    return {std::cos(t), std::sin(t)};
}

inline Eigen::VectorXcd random_cvec(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> nd;
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = scale * Complex(nd(rng), nd(rng));
    return v;
}

inline Eigen::VectorXcd random_unit_cvec(int n, std::mt19937_64& rng) {
    Eigen::VectorXcd v = random_cvec(n, rng);
    while (v.norm() < 1e-6) v = random_cvec(n, rng);
    return v / v.norm();
}

/// Haar-ish random unitary via QR of a complex Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = Complex(nd(rng), nd(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
    Eigen::MatrixXcd Q = qr.householderQ();
    Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        Complex r = R(j, j);
        Q.col(j) *= (std::abs(r) > 0 ? r / std::abs(r) : Complex(1.0));
    }
    return Q;
}

/// All exponent multi-indices with 1 <= |alpha| <= deg in n variables.
inline std::vector<MultiIndex> exponents_up_to(int n, int deg) {
    std::vector<MultiIndex> out;
    MultiIndex cur(n, 0);
    // Odometer over per-variable exponents bounded by deg, filtered by total.
    while (true) {
        int total = 0;
        for (int e : cur) total += e;
        if (total >= 1 && total <= deg) out.push_back(cur);
        int i = 0;
        while (i < n && cur[i] == deg) cur[i++] = 0;
        if (i == n) break;
        ++cur[i];
    }
    return out;
}

/// Random germ at the origin: F = L z + (higher-order terms), with L a row
/// slice of a random unitary so dF(0) is well conditioned.
inline Germ random_germ(int n, int m, int deg, std::mt19937_64& rng, RunConfig cfg = {}) {
    PolynomialMap F(n, m);
    Eigen::MatrixXcd U = random_unitary(n, rng);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) {
            MultiIndex e(n, 0);
            e[i] = 1;
            F.add_term(j, e, U(j, i));
        }
    std::normal_distribution<double> nd;
    for (int j = 0; j < m; ++j)
        for (const auto& a : exponents_up_to(n, deg)) {
            int total = 0;
            for (int e : a) total += e;
            if (total < 2) continue;
            F.add_term(j, a, 0.3 * Complex(nd(rng), nd(rng)));
        }
    return Germ(F, Eigen::VectorXcd::Zero(n), cfg);
}

/// Graph germ z_{d+1..n} = g(z_{1..d}) with g(0) = 0, dg(0) = 0, so the
/// tangent plane at the origin is the first coordinate d-plane and the
/// second fundamental form is the Hessian of g.
struct GraphGerm {
    PolynomialMap g;  // d -> m
    Germ germ;
};

inline GraphGerm random_graph_germ(int d, int m, int deg, std::mt19937_64& rng,
                                   RunConfig cfg = {}) {
    const int n = d + m;
    PolynomialMap g(d, m);
    std::normal_distribution<double> nd;
    for (int j = 0; j < m; ++j)
        for (const auto& a : exponents_up_to(d, deg)) {
            int total = 0;
            for (int e : a) total += e;
            if (total < 2) continue;
            g.add_term(j, a, 0.5 * Complex(nd(rng), nd(rng)));
        }
    PolynomialMap F(n, m);
    for (int j = 0; j < m; ++j) {
        MultiIndex e(n, 0);
        e[d + j] = 1;
        F.add_term(j, e, Complex(1.0));
        for (const auto& t : g.terms()) {
            if (t.j != j) continue;
            MultiIndex a(n, 0);
            for (int i = 0; i < d; ++i) a[i] = t.alpha[i];
            F.add_term(j, a, -t.c);
        }
    }
    return {g, Germ(F, Eigen::VectorXcd::Zero(n), cfg)};
}

/// Quadric surface z3 = z1^2 + z2^2 in C^3 at the origin.
inline Germ quadric_germ(RunConfig cfg = {}) {
    PolynomialMap F(3, 1);
    F.add_term(0, {0, 0, 1}, Complex(1.0));
    F.add_term(0, {2, 0, 0}, Complex(-1.0));
    F.add_term(0, {0, 2, 0}, Complex(-1.0));
    return Germ(F, Eigen::VectorXcd::Zero(3), cfg);
}

/// Cylinder z1^2 + z2^2 = 1 in C^3 at (1, 0, 0); flat along the axis.
inline Germ cylinder_germ(RunConfig cfg = {}) {
    PolynomialMap F(3, 1);
    F.add_term(0, {2, 0, 0}, Complex(1.0));
    F.add_term(0, {0, 2, 0}, Complex(1.0));
    F.add_term(0, {0, 0, 0}, Complex(-1.0));
    Eigen::VectorXcd p(3);
    p << 1.0, 0.0, 0.0;
    return Germ(F, p, cfg);
}

/// Ambient tangent vector expressed in the germ's T-frame coordinates
/// (requires w to lie in the tangent plane).
inline Eigen::VectorXcd to_frame(const Germ& g, const Eigen::VectorXcd& w) {
    Eigen::VectorXcd u = g.frames().T.adjoint() * w;
    return u / u.norm();
}

}  // namespace cicurv::testing

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cicurv/germ.hpp"
#include "helpers.hpp"

using namespace cicurv;
using namespace cicurv::testing;

namespace {

/// Gaussian curvature at 0 of the curve t -> (t v, g(t v)) inside the graph
/// of g, from the induced metric lambda(t) = |phi'(t)|^2: K = -2 dd-bar
/// log lambda evaluated by a Richardson-extrapolated 5-point Laplacian.
/// Because dg(0) = 0, the curve is normal-geodesic at 0 and K equals the
/// holomorphic sectional curvature of the graph in the direction v.
double fd_metric_curvature(const PolynomialMap& g, const Eigen::VectorXcd& v) {
    auto log_lambda = [&](Complex t) {
        Eigen::VectorXcd w = t * v;
        return std::log(1.0 + (g.jacobian(w) * v).squaredNorm());
    };
    auto laplacian = [&](double h) {
        return (log_lambda(Complex(h, 0)) + log_lambda(Complex(-h, 0)) +
                log_lambda(Complex(0, h)) + log_lambda(Complex(0, -h)) - 4.0 * log_lambda(0)) /
               (h * h);
    };
    double h = 2e-2;
    double dd_bar = (4.0 * laplacian(h / 2) - laplacian(h)) / 3.0 / 4.0;
    return -2.0 * dd_bar;
}

}  // namespace

TEST_CASE("quadric surface carries the closed-form curvature values") {
    Germ g = quadric_germ();
    REQUIRE(g.d() == 2);
    CHECK(scalar(g) == doctest::Approx(-32.0).epsilon(1e-10));

    // S = 2 Id up to the frame, so Ric(v) = -8 for every unit v.
    std::mt19937_64 rng(5);
    for (int t = 0; t < 5; ++t)
        CHECK(ricci(g, random_unit_cvec(2, rng)) == doctest::Approx(-8.0).epsilon(1e-10));

    // Along the ambient axis directions the sectional curvature is -8 and
    // the cross bisectional curvature vanishes.
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Unit(3, 0), e2 = Eigen::VectorXcd::Unit(3, 1);
    Eigen::VectorXcd u1 = to_frame(g, e1), u2 = to_frame(g, e2);
    CHECK(holsec(g, u1) == doctest::Approx(-8.0).epsilon(1e-10));
    CHECK(holsec(g, u2) == doctest::Approx(-8.0).epsilon(1e-10));
    CHECK(std::abs(holbisec(g, u1, u2)) < 1e-10);

    // Isotropic direction (e1 + i e2)/sqrt(2): v^T S v = 0, so the sectional
    // curvature degenerates even though Ricci stays pinched.
    Eigen::VectorXcd iso = (u1 + Complex(0, 1) * u2) / std::sqrt(2.0);
    CHECK(std::abs(holsec(g, iso)) < 1e-10);

    auto ric = certify_ricci_negative(g);
    CHECK(ric.certificate == Certificate::CertifiedNegative);
    CHECK(ric.margin == doctest::Approx(2.0).epsilon(1e-10));
    auto sc = certify_scalar_negative(g);
    CHECK(sc.certificate == Certificate::CertifiedNegative);
    auto hs = certify_holsec_negative(g, 32);
    CHECK(hs.certificate == Certificate::CertifiedNotNegative);  // isotropic zeros
}

TEST_CASE("cylinder separates the scalar certificate from the Ricci certificate") {
    Germ g = cylinder_germ();
    auto sc = certify_scalar_negative(g);
    CHECK(sc.certificate == Certificate::CertifiedNegative);
    auto ric = certify_ricci_negative(g);
    CHECK(ric.certificate == Certificate::CertifiedNotNegative);
    // The Ricci witness is the flat axis direction.
    CHECK((g.sff().slice(ric.witness)).norm() < 1e-10);
}

TEST_CASE("plane curves: sectional curvature is nonpositive, zero exactly at inflections") {
    std::mt19937_64 rng(17);
    Eigen::VectorXcd v1(1);
    v1 << 1.0;
    for (int t = 0; t < 10; ++t) {
        Germ g = random_germ(2, 1, 4, rng);
        double k = holsec(g, v1);
        CHECK(k <= 1e-12);
        double ii = g.sff().frobenius();
        if (ii <= g.config().zero_tol) CHECK(std::abs(k) <= 1e-12);
        if (std::abs(k) <= 1e-24) CHECK(ii <= 1e-9);
    }
    // An explicit inflection: z2 = z1^3 has vanishing II at the origin.
    PolynomialMap F(2, 1);
    F.add_term(0, {0, 1}, Complex(1.0));
    F.add_term(0, {3, 0}, Complex(-1.0));
    Germ flex(F, Eigen::VectorXcd::Zero(2));
    CHECK(flex.sff().frobenius() < 1e-12);
    CHECK(std::abs(holsec(flex, v1)) < 1e-12);
}

TEST_CASE("random germs: symmetry, sign, and trace identities") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 40; ++t) {
        int n = 2 + static_cast<int>(rng() % 5);  // 2..6
        int d = 1 + static_cast<int>(rng() % std::min(3, n - 1));
        Germ g = random_germ(n, n - d, 4, rng);
        const int dd = g.d();

        Eigen::VectorXcd u = random_unit_cvec(dd, rng), v = random_unit_cvec(dd, rng);
        CHECK((g.sff().apply(u, v) - g.sff().apply(v, u)).norm() < 1e-10);

        CHECK(ricci(g, u) <= 1e-12);
        CHECK(scalar(g) <= 1e-12);
        CHECK(holsec(g, u) <= 1e-12);
        CHECK(holbisec(g, u, v) <= 1e-12);

        double ric_sum = 0.0;
        for (int i = 0; i < dd; ++i) ric_sum += ricci(g, Eigen::VectorXcd::Unit(dd, i));
        CHECK(scalar(g) == doctest::Approx(2.0 * ric_sum).epsilon(1e-9));

        double bis_sum = 0.0;
        for (int i = 0; i < dd; ++i) bis_sum += holbisec(g, Eigen::VectorXcd::Unit(dd, i), v);
        CHECK(ricci(g, v) == doctest::Approx(bis_sum).epsilon(1e-9));
    }
}

TEST_CASE("ambient unitary changes preserve invariants and verdicts") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 8; ++t) {
        int n = 3 + static_cast<int>(rng() % 3);
        int d = 1 + static_cast<int>(rng() % (n - 1));
        Germ g = random_germ(n, n - d, 3, rng);
        Eigen::MatrixXcd U = random_unitary(n, rng);
        Germ h(g.F().composed_linear(U), Eigen::VectorXcd::Zero(n), g.config());

        CHECK(scalar(h) == doctest::Approx(scalar(g)).epsilon(1e-9));
        auto rg = certify_ricci_negative(g), rh = certify_ricci_negative(h);
        CHECK(rg.certificate == rh.certificate);
        CHECK(std::abs(rg.margin - rh.margin) < 1e-9 * (1.0 + rg.margin));
        auto sg = certify_scalar_negative(g), sh = certify_scalar_negative(h);
        CHECK(sg.certificate == sh.certificate);
        CHECK(std::abs(sg.margin - sh.margin) < 1e-9 * (1.0 + sg.margin));
        auto hg = certify_holsec_negative(g, 48), hh = certify_holsec_negative(h, 48);
        CHECK(hg.certificate == hh.certificate);
        CHECK(std::abs(hg.margin - hh.margin) < 1e-5 * (1.0 + hg.margin));
    }
}

TEST_CASE("finite-difference metric curvature matches the algebraic sectional value") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 20; ++t) {
        int d = 1 + static_cast<int>(rng() % 3);
        int m = 1 + static_cast<int>(rng() % 2);
        GraphGerm gg = random_graph_germ(d, m, 3, rng);
        Eigen::VectorXcd v = random_unit_cvec(d, rng);
        Eigen::VectorXcd ambient = Eigen::VectorXcd::Zero(d + m);
        ambient.head(d) = v;
        double k_alg = holsec(gg.germ, to_frame(gg.germ, ambient));
        double k_fd = fd_metric_curvature(gg.g, v);
        CHECK(std::abs(k_fd - k_alg) <= 1e-4 * std::max(1.0, std::abs(k_alg)));
    }
}

TEST_CASE("bisectional certificate implies the Ricci certificate when d <= codim") {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 10; ++t) {
        int d = 1 + static_cast<int>(rng() % 2);
        int m = d + static_cast<int>(rng() % 2);
        Germ g = random_germ(d + m, m, 3, rng);
        auto bis = certify_holbisec_negative(g, 48);
        if (bis.certificate == Certificate::NumericallyNegativeWithMargin &&
            bis.margin > 10 * g.config().rank_tol)
            CHECK(certify_ricci_negative(g).certificate == Certificate::CertifiedNegative);
    }
}

TEST_CASE("construction guards") {
    PolynomialMap F(2, 1);
    F.add_term(0, {2, 0}, Complex(1.0));  // dF(0) = 0
    CHECK_THROWS_AS(Germ(F, Eigen::VectorXcd::Zero(2)), DegenerateGermError);

    PolynomialMap G(2, 1);
    G.add_term(0, {1, 0}, Complex(1.0));
    G.add_term(0, {0, 0}, Complex(1.0));  // z1 + 1, origin not on the zero set
    CHECK_THROWS_AS(Germ(G, Eigen::VectorXcd::Zero(2)), std::invalid_argument);

    Germ q = quadric_germ();
    Eigen::VectorXcd bad(2);
    bad << 2.0, 0.0;
    CHECK_THROWS_AS(ricci(q, bad), std::invalid_argument);
    CHECK_THROWS_AS(holsec(q, Eigen::VectorXcd::Ones(3)), std::invalid_argument);
}

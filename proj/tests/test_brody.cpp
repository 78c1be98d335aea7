#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cicurv/brody.hpp"
#include "helpers.hpp"

using namespace cicurv;
using namespace cicurv::brody;
using namespace cicurv::testing;

namespace {

DiskMap random_disk_map(int m, int deg, std::mt19937_64& rng) {
    DiskMap f;
    f.m = m;
    std::normal_distribution<double> nd;
    for (int k = 0; k <= deg; ++k) {
        Eigen::VectorXcd c(m);
        // Decaying coefficients keep the series honest on the closed disk.
        for (int j = 0; j < m; ++j) c(j) = Complex(nd(rng), nd(rng)) / (1.0 + k * k);
        f.c.push_back(c);
    }
    return f;
}

}  // namespace

TEST_CASE("disk map evaluation, scaling and JSON round trip") {
    DiskMap f;
    f.m = 2;
    Eigen::VectorXcd c0(2), c1(2), c2(2);
    c0 << 1.0, Complex(0, 1);
    c1 << 2.0, 0.0;
    c2 << 0.0, -1.0;
    f.c = {c0, c1, c2};
    Complex z(0.3, -0.2);
    Eigen::VectorXcd v = f.evaluate(z);
    CHECK(std::abs(v(0) - (1.0 + 2.0 * z)) < 1e-14);
    CHECK(std::abs(v(1) - (Complex(0, 1) - z * z)) < 1e-14);
    Eigen::VectorXcd d = f.derivative(z);
    CHECK(std::abs(d(0) - 2.0) < 1e-14);
    CHECK(std::abs(d(1) + 2.0 * z) < 1e-14);

    DiskMap g = f.scaled(Complex(0, 0.5));
    CHECK((g.evaluate(z) - f.evaluate(Complex(0, 0.5) * z)).norm() < 1e-14);

    DiskMap h = DiskMap::from_json(f.to_json());
    CHECK(h.m == 2);
    CHECK((h.evaluate(z) - f.evaluate(z)).norm() < 1e-14);
    CHECK_FALSE(f.constant(1e-9));
    DiskMap k;
    k.m = 1;
    k.c = {Eigen::VectorXcd::Ones(1)};
    CHECK(k.constant(1e-9));
}

TEST_CASE("Poincare jacobian: identity map and Mobius invariance at the center") {
    DiskMap id;
    id.m = 1;
    id.c = {Eigen::VectorXcd::Zero(1), Eigen::VectorXcd::Ones(1)};
    CHECK(poincare_jacobian(id, Complex(0.5, 0)) == doctest::Approx(0.375));
    CHECK_THROWS_AS(poincare_jacobian(id, Complex(1.0, 0)), std::invalid_argument);

    std::mt19937_64 rng(139);
    for (int t = 0; t < 20; ++t) {
        DiskMap f = random_disk_map(1 + (t % 2), 8, rng);
        std::uniform_real_distribution<double> u(-0.55, 0.55);
        Complex p0(u(rng), u(rng));
        DiskMap g = f.mobius(p0);
        // Low-order composed coefficients are exact, so the jacobians at the
        // matched pair of points agree to round-off.
        CHECK(std::abs(poincare_jacobian(g, 0.0) - poincare_jacobian(f, p0)) < 1e-10);
        CHECK((g.evaluate(0.0) - f.evaluate(p0)).norm() < 1e-12);
    }
}

TEST_CASE("Brody reparametrization certificates on random series maps") {
    std::mt19937_64 rng(149);
    RunConfig cfg;
    for (int t = 0; t < 20; ++t) {
        DiskMap f = random_disk_map(1 + (t % 3 == 0), 6, rng);
        if (f.constant(1e-9)) continue;
        auto [g, cert] = brody_reparametrize(f, 0.05, cfg);
        double slack = 1.0 + cfg.grid_tol;
        CHECK(cert.ratio_sup <= (4.0 / 3.0) * slack);
        CHECK(cert.ratio_f0 <= 4.0 * slack);
        // g'(0) dominates f'(0)/4 by construction.
        CHECK(g.derivative(0.0).norm() * 4.0 * slack >= f.derivative(0.0).norm() / 2.0);
    }
    DiskMap c;
    c.m = 1;
    c.c = {Eigen::VectorXcd::Ones(1)};
    CHECK_THROWS_AS(brody_reparametrize(c, 0.05, cfg), std::invalid_argument);
}

TEST_CASE("line tangency orders on quadric and linear witnesses") {
    PolynomialMap quad(2, 1);  // z2 - z1^2
    quad.add_term(0, {0, 1}, Complex(1.0));
    quad.add_term(0, {2, 0}, Complex(-1.0));
    Eigen::VectorXcd z0 = Eigen::VectorXcd::Zero(2);
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Unit(2, 0);
    Eigen::VectorXcd mix = Eigen::VectorXcd::Ones(2) / std::sqrt(2.0);
    CHECK(line_tangency_order(quad, z0, e1) == 2);
    CHECK(line_tangency_order(quad, z0, mix) == 1);

    PolynomialMap lin(2, 1);  // z2: contains the line z2 = 0
    lin.add_term(0, {0, 1}, Complex(1.0));
    CHECK(line_tangency_order(lin, z0, e1) == lin.degree() + 1);  // sentinel

    CHECK_THROWS_AS(line_tangency_order(quad, z0, 2.0 * e1), std::invalid_argument);

    RunConfig cfg;
    auto best = max_line_tangency(quad, z0, 4, 64, cfg);
    CHECK(best.order == 2);
    CHECK(line_tangency_order(quad, z0, best.witness / best.witness.norm()) == 2);
    auto contained = max_line_tangency(lin, z0, 4, 64, cfg);
    CHECK(contained.order == lin.degree() + 1);
}

TEST_CASE("tangency order is invariant under exact affine-unitary changes") {
    PolynomialMap s(2, 1);  // z2 - z1^2 + 3 z1 z2, integer coefficients
    s.add_term(0, {0, 1}, Complex(1.0));
    s.add_term(0, {2, 0}, Complex(-1.0));
    s.add_term(0, {1, 1}, Complex(3.0));

    Eigen::MatrixXcd U(2, 2);  // exact unitary: swap with a quarter turn
    U << Complex(0, 0), Complex(0, 1), Complex(1, 0), Complex(0, 0);
    Eigen::VectorXcd b(2);
    b << Complex(1, 0), Complex(0, 2);

    PolynomialMap st = s.composed_affine(U, b);
    std::mt19937_64 rng(151);
    for (int t = 0; t < 8; ++t) {
        Eigen::VectorXcd w = random_cvec(2, rng);
        Eigen::VectorXcd dir = random_unit_cvec(2, rng);
        int o1 = line_tangency_order(st, w, dir);
        int o2 = line_tangency_order(s, U * w + b, U * dir);
        CHECK(o1 == o2);
    }
    // Orders at the quadric's exact tangency point transform exactly too.
    Eigen::VectorXcd z0 = Eigen::VectorXcd::Zero(2);
    Eigen::VectorXcd pre = U.adjoint() * (z0 - b);
    CHECK(line_tangency_order(st, pre, U.adjoint() * Eigen::VectorXcd::Unit(2, 0)) ==
          line_tangency_order(s, z0, Eigen::VectorXcd::Unit(2, 0)));
}

TEST_CASE("experiment rows carry normalized derivatives and CSV headers") {
    std::vector<ExperimentRow> rows(2);
    rows[0] = {1.0, 2.0, 2.0, 3, 1};
    rows[1] = {4.0, 3.0, 1.5, 5, 0};
    std::string csv = experiment_to_csv(rows);
    CHECK(csv.find("k,best_derivative,normalized,disks_tried,failures") != std::string::npos);
    CHECK(csv.find("4") != std::string::npos);
}

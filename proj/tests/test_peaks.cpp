#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cicurv/peaks.hpp"
#include "helpers.hpp"

using namespace cicurv;
using namespace cicurv::peaks;
using namespace cicurv::testing;

namespace {

constexpr double kPi = 3.14159265358979323846;

PolynomialMap constant_one(int n, int m) {
    PolynomialMap H(n, m);
    for (int j = 0; j < m; ++j) H.add_term(j, MultiIndex(n, 0), Complex(1.0));
    return H;
}

PolynomialMap random_H(int n, int m, int l, std::mt19937_64& rng, double scale = 1.0) {
    PolynomialMap H(n, m);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int j = 0; j < m; ++j) {
        H.add_term(j, MultiIndex(n, 0), scale * Complex(u(rng), u(rng)));
        for (const auto& a : exponents_up_to(n, l))
            H.add_term(j, a, scale * Complex(u(rng), u(rng)));
    }
    return H;
}

PeakFamily single_peak_family(const PolynomialMap& H, const Eigen::VectorXcd& p, int l) {
    PeakFamily fam;
    fam.n = H.n();
    fam.m = H.m();
    fam.l = l;
    fam.lattice.n = fam.n;
    fam.lattice.points = {p};
    fam.lattice.coords = {std::vector<int>(2 * fam.n, 0)};
    fam.lattice.separation = 1.0;
    fam.lattice.covering_radius = 1.0;
    fam.classes.class_of = {0};
    fam.classes.members = {{0}};
    fam.H = {H};
    fam.epsilons = {0.1};
    return fam;
}

}  // namespace

TEST_CASE("Gaussian norm of the constant peak is exact") {
    std::mt19937_64 rng(101);
    for (int n : {1, 2}) {
        for (int t = 0; t < 10; ++t) {
            Eigen::VectorXcd p = random_cvec(n, rng), z = random_cvec(n, rng);
            auto sec = peak_section(constant_one(n, 1), p, 1);
            double expect = std::exp(-kPi / 2.0 * (z - p).squaredNorm());
            CHECK(std::abs(sec.weighted_norm(z) - expect) <= 1e-12 * (1.0 + expect));
        }
    }
}

TEST_CASE("peak jet at its own center in its own frame is the prescribed polynomial") {
    std::mt19937_64 rng(103);
    for (int n : {1, 2}) {
        PolynomialMap H = random_H(n, 1, 2, rng);
        Eigen::VectorXcd p = random_cvec(n, rng);
        auto sec = peak_section(H, p, 2);
        PolynomialMap jet = peak_jet(sec, p, p, 2);
        for (const auto& t : H.terms()) CHECK(std::abs(jet.coeff(t.j, t.alpha) - t.c) < 1e-12);
        CHECK(jet.term_count() <= H.term_count());
    }
}

TEST_CASE("jet constant term reproduces the weighted section norm in any frame") {
    std::mt19937_64 rng(107);
    for (int t = 0; t < 10; ++t) {
        int n = 1 + (t % 2);
        PolynomialMap H = random_H(n, 1, 2, rng);
        Eigen::VectorXcd q = random_cvec(n, rng), pf = random_cvec(n, rng),
                         z = random_cvec(n, rng);
        auto sec = peak_section(H, q, 2);
        PolynomialMap jet = peak_jet(sec, pf, z, 2);
        double lhs = std::abs(jet.coeff(0, MultiIndex(n, 0))) *
                     std::exp(-kPi / 2.0 * (z - pf).squaredNorm());
        CHECK(std::abs(lhs - sec.weighted_norm(z)) <= 1e-10 * (1.0 + sec.weighted_norm(z)));
    }
}

TEST_CASE("lattice separation and covering, checked exhaustively") {
    std::mt19937_64 rng(109);
    for (int n : {1, 2}) {
        double R = (n == 1) ? 4.0 : 2.0;
        Lattice lat = discretize(n, R);
        REQUIRE(lat.points.size() > 4);
        for (std::size_t i = 0; i < lat.points.size(); ++i)
            for (std::size_t j = i + 1; j < lat.points.size(); ++j)
                CHECK((lat.points[i] - lat.points[j]).norm() >= lat.separation - 1e-9);
        std::uniform_real_distribution<double> u(-(R - 1.0), R - 1.0);
        for (int t = 0; t < 300; ++t) {
            Eigen::VectorXcd z(n);
            for (int i = 0; i < n; ++i) z(i) = Complex(u(rng), u(rng));
            double best = 1e9;
            for (const auto& q : lat.points) best = std::min(best, (z - q).norm());
            CHECK(best <= lat.covering_radius + 1e-9);
        }
    }
    CHECK_THROWS_AS(discretize(3, 1.0), std::invalid_argument);
}

TEST_CASE("color classes keep same-class points at distance D") {
    for (int n : {1, 2}) {
        Lattice lat = discretize(n, (n == 1) ? 4.0 : 2.0);
        for (double D : {2.0, 3.0, 4.0}) {
            ColorClasses cc = color_classes(lat, D);
            std::size_t covered = 0;
            for (const auto& mem : cc.members) {
                covered += mem.size();
                for (std::size_t i = 0; i < mem.size(); ++i)
                    for (std::size_t j = i + 1; j < mem.size(); ++j)
                        CHECK((lat.points[mem[i]] - lat.points[mem[j]]).norm() >= D - 1e-9);
            }
            CHECK(covered == lat.points.size());
        }
    }
}

TEST_CASE("grid sup of a random unit-coefficient family stays below the series bound") {
    std::mt19937_64 rng(113);
    RunConfig cfg;
    cfg.grid_step = 0.5;
    for (int t = 0; t < 16; ++t) {
        int n = (t < 12) ? 1 : 2;
        Lattice lat = discretize(n, (n == 1) ? 3.0 : 0.8);
        PeakFamily fam;
        fam.n = n;
        fam.m = 1;
        fam.l = 1;
        fam.lattice = lat;
        fam.classes = color_classes(lat, 2.0);
        for (std::size_t i = 0; i < lat.points.size(); ++i) {
            PolynomialMap H = random_H(n, 1, 1, rng);
            double c = H.coeff_norm();
            fam.H.push_back(H * Complex(1.0 / c));  // unit coefficient norm
        }
        fam.epsilons.assign(fam.classes.count(), 0.1);
        SumBound sb = sum_of_peaks_bound(fam, 1, cfg);
        CHECK(sb.grid_sup > 0.0);
        CHECK(sb.grid_sup <= sb.series_bound);
    }
}

TEST_CASE("schedule construction and validation") {
    RunConfig cfg;
    auto sched = make_schedule(9, 0.1, cfg.peak_C, cfg.avoid_N0);
    REQUIRE(sched.size() == 9);
    CHECK(validate_schedule(sched, 3.0, cfg.peak_C, cfg.avoid_N0).empty());
    CHECK(sched.back() > 1e-300);  // representable with room to spare

    auto bad = sched;
    bad[3] = bad[2];  // not strictly decreasing
    CHECK_FALSE(validate_schedule(bad, 3.0, cfg.peak_C, cfg.avoid_N0).empty());
    CHECK_FALSE(validate_schedule({0.3}, 3.0, cfg.peak_C, cfg.avoid_N0).empty());
    // Too-large constants make the Gaussian interaction inequality fail.
    CHECK_FALSE(validate_schedule(make_schedule(4, 0.1, 8.0, 1.0), 3.0, 8.0, 1.0).empty());
}

TEST_CASE("local avoidance is deterministic and honest about its target") {
    std::mt19937_64 rng(127);
    RunConfig cfg;
    cfg.grid_step = 0.5;
    Lattice lat = discretize(1, 2.0);
    PeakFamily fam;
    fam.n = 1;
    fam.m = 1;
    fam.l = 1;
    fam.lattice = lat;
    fam.classes = color_classes(lat, 3.0);
    fam.H.assign(lat.points.size(), PolynomialMap(1, 1));
    fam.epsilons = {};

    TransversalityOracle oracle;
    Eigen::VectorXcd p = lat.points[0];
    auto r1 = local_avoid(fam, p, 0.1, oracle, 64, 42, cfg);
    auto r2 = local_avoid(fam, p, 0.1, oracle, 64, 42, cfg);
    CHECK(r1.achieved == r2.achieved);
    CHECK(r1.samples_used == r2.samples_used);
    CHECK(r1.H.to_json() == r2.H.to_json());
    CHECK(r1.target == doctest::Approx(0.1 * std::pow(-std::log(0.1), -cfg.avoid_N0)));
    CHECK(r1.below_target == (r1.achieved < r1.target));
    CHECK(r1.H.coeff_norm() <= 0.1 + 1e-12);

    // The reported margin is reproducible directly from the returned peak.
    PeakFamily with = fam;
    with.H[0] = r1.H;
    double worst = 1e300;
    for (const auto& z : polydisk_grid(p, 1.0, cfg.grid_step))
        worst = std::min(worst, oracle.margin(z, jet_at(with, z, z, 1, cfg).poly));
    CHECK(worst == doctest::Approx(r1.achieved).epsilon(1e-12));

    CHECK_THROWS_AS(local_avoid(fam, p, 0.5, oracle, 8, 1, cfg), std::invalid_argument);
}

TEST_CASE("globalization sweep produces a positive measured margin") {
    RunConfig cfg;
    cfg.grid_step = 0.5;
    cfg.avoid_budget = 96;
    Lattice lat = discretize(1, 3.0);
    ColorClasses cc = color_classes(lat, 3.0);
    auto sched = make_schedule(cc.count(), 0.1, cfg.peak_C, cfg.avoid_N0);
    TransversalityOracle oracle;
    GlobalizeReport rep = globalize(lat, oracle, 3.0, sched, 1, 1, cfg);
    CHECK(rep.final_margin > 0.0);
    CHECK(rep.guaranteed > 0.0);
    CHECK(rep.achieved.size() == lat.points.size());
    CHECK(rep.family.epsilons.size() == static_cast<std::size_t>(cc.count()));

    // Family JSON round-trips and re-measures to the same margin.
    PeakFamily fam = PeakFamily::from_json(rep.family.to_json());
    CHECK(transversality_margin(fam, 0.0, cfg.grid_step, cfg) > 0.0);

    CHECK_THROWS_AS(globalize(lat, oracle, 3.0, {0.1, 0.01}, 1, 1, cfg),
                    std::invalid_argument);
}

TEST_CASE("zero-set sampling yields germs on the zero set") {
    std::mt19937_64 rng(131);
    RunConfig cfg;
    cfg.grid_step = 0.5;
    PolynomialMap H(2, 1);
    H.add_term(0, {1, 0}, Complex(1.0));  // vanishes along z1 = 0 near the peak
    H.add_term(0, {0, 0}, Complex(0.05));
    PeakFamily fam = single_peak_family(H, Eigen::VectorXcd::Zero(2), 2);
    ZeroSamples zs = zero_set_sample(fam, 1.5, cfg);
    CHECK(!zs.germs.empty());
    for (const auto& g : zs.germs) {
        CHECK(g.n() == 2);
        CHECK(g.m() == 1);
        CHECK(g.F().evaluate(g.point()).norm() < 1e-8);
    }
}

TEST_CASE("polydisk grid size and bounds") {
    Eigen::VectorXcd c(1);
    c << Complex(1.0, -1.0);
    auto grid = polydisk_grid(c, 1.0, 0.5);
    CHECK(grid.size() == 25);
    for (const auto& z : grid) {
        CHECK(std::abs(z(0).real() - 1.0) <= 1.0 + 1e-12);
        CHECK(std::abs(z(0).imag() + 1.0) <= 1.0 + 1e-12);
    }
}

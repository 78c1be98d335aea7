#include "cicurv/brody.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cicurv/parallel.hpp"
#include "cicurv/sphere_opt.hpp"

namespace cicurv::brody {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Eigen::VectorXcd> series_mul(const std::vector<Eigen::VectorXcd>& a,
                                         const std::vector<Complex>& b, int deg) {
    // a is vector-valued, b scalar; product truncated at degree deg.
    const int m = static_cast<int>(a.empty() ? 1 : a[0].size());
    std::vector<Eigen::VectorXcd> r(deg + 1, Eigen::VectorXcd::Zero(m));
    for (int i = 0; i < static_cast<int>(a.size()) && i <= deg; ++i)
        for (int j = 0; j < static_cast<int>(b.size()) && i + j <= deg; ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

}  // namespace

Eigen::VectorXcd DiskMap::evaluate(Complex z) const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(m);
    for (int k = deg(); k >= 0; --k) v = v * z + c[k];
    return v;
}

Eigen::VectorXcd DiskMap::derivative(Complex z) const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(m);
    for (int k = deg(); k >= 1; --k) v = v * z + c[k] * static_cast<double>(k);
    return v;
}

DiskMap DiskMap::scaled(Complex a) const {
    DiskMap r = *this;
    Complex pw = 1.0;
    for (int k = 0; k <= deg(); ++k) {
        r.c[k] = c[k] * pw;
        pw *= a;
    }
    return r;
}

DiskMap DiskMap::mobius(Complex p0) const {
    const int d = deg();
    // Series of h(z) = (z + p0)/(1 + conj(p0) z):
    //   p0 + (1 - |p0|^2) * sum_{k>=1} (-conj(p0))^(k-1) z^k.
    std::vector<Complex> h(d + 1, Complex(0.0));
    h[0] = p0;
    Complex f = 1.0 - std::norm(p0);
    for (int k = 1; k <= d; ++k) {
        h[k] = f;
        f *= -std::conj(p0);
    }
    // Horner: r = (((c_d) h + c_{d-1}) h + ...) truncated at degree d.
    std::vector<Eigen::VectorXcd> r(1, c[d]);
    for (int k = d - 1; k >= 0; --k) {
        r = series_mul(r, h, d);
        r[0] += c[k];
    }
    DiskMap out = *this;
    out.c = std::move(r);
    return out;
}

bool DiskMap::constant(double tol) const {
    for (int k = 1; k <= deg(); ++k)
        if (c[k].norm() > tol) return false;
    return true;
}

std::string DiskMap::to_json() const {
    nlohmann::json j;
    j["m"] = m;
    j["validity_radius"] = validity_radius;
    j["coeffs"] = nlohmann::json::array();
    for (const auto& v : c) {
        nlohmann::json row = nlohmann::json::array();
        for (int i = 0; i < v.size(); ++i) row.push_back({{"re", v(i).real()}, {"im", v(i).imag()}});
        j["coeffs"].push_back(row);
    }
    return j.dump();
}

DiskMap DiskMap::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    DiskMap f;
    f.m = j.at("m").get<int>();
    f.validity_radius = j.value("validity_radius", 1.0);
    for (const auto& row : j.at("coeffs")) {
        Eigen::VectorXcd v(row.size());
        for (std::size_t i = 0; i < row.size(); ++i)
            v(i) = Complex(row[i].at("re").get<double>(), row[i].at("im").get<double>());
        f.c.push_back(v);
    }
    if (f.c.empty()) f.c.push_back(Eigen::VectorXcd::Zero(f.m));
    return f;
}

double poincare_jacobian(const DiskMap& f, Complex p) {
    if (std::abs(p) >= 1.0) throw std::invalid_argument("poincare_jacobian: |p| >= 1");
    return f.derivative(p).norm() * (1.0 - std::norm(p)) / 2.0;
}

std::pair<DiskMap, BrodyCertificate> brody_reparametrize(const DiskMap& f, double grid_step,
                                                         const RunConfig& cfg) {
    if (f.constant(cfg.zero_tol))
        throw std::invalid_argument("brody_reparametrize: constant map");

    DiskMap f1 = f.scaled(0.5);

    // Grid search for the maximizer of the Poincare jacobian of f1; ties
    // break to the smallest |p| (then lexicographic), deterministically.
    auto better = [](double va, Complex pa, double vb, Complex pb) {
        if (va != vb) return va > vb;
        double ra = std::abs(pa), rb = std::abs(pb);
        if (ra != rb) return ra < rb;
        if (pa.real() != pb.real()) return pa.real() < pb.real();
        return pa.imag() < pb.imag();
    };

    const int half = static_cast<int>(std::floor(0.999 / grid_step));
    const int side = 2 * half + 1;
    std::vector<double> vals(static_cast<std::size_t>(side) * side,
                             -std::numeric_limits<double>::infinity());
    parallel_for(vals.size(), cfg.threads, [&](std::size_t idx) {
        int ix = static_cast<int>(idx) % side - half;
        int iy = static_cast<int>(idx) / side - half;
        Complex p(ix * grid_step, iy * grid_step);
        if (std::abs(p) < 0.9995) vals[idx] = poincare_jacobian(f1, p);
    });
    Complex p0(0.0);
    double best = poincare_jacobian(f1, p0);
    for (std::size_t idx = 0; idx < vals.size(); ++idx) {
        if (!std::isfinite(vals[idx])) continue;
        Complex p(static_cast<double>(static_cast<int>(idx) % side - half) * grid_step,
                  static_cast<double>(static_cast<int>(idx) / side - half) * grid_step);
        if (better(vals[idx], p, best, p0)) {
            best = vals[idx];
            p0 = p;
        }
    }
    // Local refinement by shrinking pattern search.
    double step = grid_step;
    for (int round = 0; round < 40; ++round) {
        step *= 0.5;
        bool moved = true;
        while (moved) {
            moved = false;
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy) {
                    if (dx == 0 && dy == 0) continue;
                    Complex p = p0 + Complex(dx * step, dy * step);
                    if (std::abs(p) >= 0.9995) continue;
                    double v = poincare_jacobian(f1, p);
                    if (better(v, p, best, p0)) {
                        best = v;
                        p0 = p;
                        moved = true;
                    }
                }
        }
    }

    DiskMap g = f1.mobius(p0).scaled(0.5);

    BrodyCertificate cert;
    cert.p0 = p0;
    double g0 = g.derivative(0.0).norm();
    double sup = 0.0;
    for (double x = -0.999; x <= 0.999; x += 0.02)
        for (double y = -0.999; y <= 0.999; y += 0.02) {
            Complex z(x, y);
            if (std::abs(z) > 0.999) continue;
            sup = std::max(sup, g.derivative(z).norm());
        }
    cert.ratio_sup = g0 > 0 ? sup / g0 : std::numeric_limits<double>::infinity();
    cert.ratio_f0 = g0 > 0 ? f.derivative(0.0).norm() / g0
                           : std::numeric_limits<double>::infinity();
    return {std::move(g), cert};
}

std::string BrodyCertificate::to_json(const RunConfig& cfg) const {
    nlohmann::json j;
    j["version"] = kVersion;
    j["p0"] = {{"re", p0.real()}, {"im", p0.imag()}};
    j["C1"] = c1;
    j["C2"] = c2;
    j["C3"] = c3;
    j["ratio_sup"] = ratio_sup;
    j["ratio_f0"] = ratio_f0;
    j["config"] = nlohmann::json::parse(cfg.to_json());
    return j.dump(2);
}

int line_tangency_order(const PolynomialMap& s, const Eigen::VectorXcd& z,
                        const Eigen::VectorXcd& b, double zero_tol) {
    if (s.m() != 1) throw std::invalid_argument("line_tangency_order: need m = 1");
    if (std::abs(b.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("line_tangency_order: direction must be unit");
    auto coeffs = s.restrict_to_line(0, z, b);
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        if (std::abs(coeffs[j]) > zero_tol) return static_cast<int>(j);
    return s.degree() + 1;  // the line lies in the hypersurface
}

TangencyResult max_line_tangency(const PolynomialMap& s, const Eigen::VectorXcd& z, int l,
                                 int restarts, const RunConfig& cfg) {
    (void)l;
    if (s.m() != 1) throw std::invalid_argument("max_line_tangency: need m = 1");
    const int n = s.n();
    const int deg = std::max(s.degree(), 0);

    TangencyResult res;
    res.witness = Eigen::VectorXcd::Unit(n, 0);
    res.order = 1;
    // Staged minimization: order > k is witnessed by a direction where the
    // first k restricted coefficients all vanish.
    for (int k = 1; k <= deg; ++k) {
        SphereObjective obj = [&, k](const Eigen::VectorXcd& b) {
            auto coeffs = s.restrict_to_line(0, z, b);
            double worst = 0.0;
            for (int j = 1; j <= k && j < static_cast<int>(coeffs.size()); ++j)
                worst = std::max(worst, std::abs(coeffs[j]));
            return worst;
        };
        auto r = minimize_on_sphere(obj, n, restarts, cfg.seed + k, cfg.threads);
        if (r.value < cfg.zero_tol * 10) {
            res.order = k + 1;
            res.witness = r.argmin;
        } else {
            break;
        }
    }
    if (res.order > deg) res.order = deg + 1;  // sentinel: line contained

    auto coeffs = s.restrict_to_line(0, z, res.witness);
    res.margin = res.order < static_cast<int>(coeffs.size())
                     ? std::abs(coeffs[res.order])
                     : 0.0;
    return res;
}

namespace {

/// A holomorphic disk of radius rho in the zero set of the family's section
/// through z0 with tangent v, as a boundary-interpolated truncated series.
/// Returns false if the Newton continuation fails on the sampling circle.
bool zero_set_disk(const peaks::PeakFamily& fam, const Eigen::VectorXcd& z0,
                   const Eigen::VectorXcd& v, const Eigen::VectorXcd& u, double rho,
                   const RunConfig& cfg, DiskMap* out) {
    const int M = 64;  // boundary samples / series length
    const int n = fam.n;
    std::vector<Eigen::VectorXcd> samples(M);
    Complex w = 0.0;  // normal correction carried along the continuation
    // March from t = 0 out to the circle, then around it; s = -8..-1 are
    // the radial warm-up steps.
    for (int s = -8; s < M; ++s) {
        double theta = s < 0 ? 0.0 : 2 * kPi * s / M;
        double r = s < 0 ? rho * (s + 9) / 9.0 : rho;
        Complex t = r * Complex(std::cos(theta), std::sin(theta));
        Eigen::VectorXcd q = z0 + t * v + w * u;
        bool converged = false;
        for (int it = 0; it < 50; ++it) {
            PolynomialMap jet = peaks::jet_at(fam, q, q, 1, cfg).poly;
            Complex val = jet.coeff(0, MultiIndex(n, 0));
            if (std::abs(val) <= 1e-12) {
                converged = true;
                break;
            }
            Complex du = 0.0;
            for (int i = 0; i < n; ++i) {
                MultiIndex e(n, 0);
                e[i] = 1;
                du += jet.coeff(0, e) * u(i);
            }
            if (std::abs(du) < 1e-10) break;
            w -= val / du;
            q = z0 + t * v + w * u;
            if (!q.allFinite() || std::abs(w) > rho) break;
        }
        if (!converged) return false;
        if (s >= 0) samples[s] = q;
    }
    // DFT: coefficients of f(rho * tau) on the unit disk in tau.
    out->m = n;
    out->c.assign(M, Eigen::VectorXcd::Zero(n));
    for (int k = 0; k < M; ++k) {
        Eigen::VectorXcd ck = Eigen::VectorXcd::Zero(n);
        for (int s = 0; s < M; ++s) {
            double th = -2 * kPi * k * s / M;
            ck += samples[s] * Complex(std::cos(th), std::sin(th));
        }
        out->c[k] = ck / static_cast<double>(M);
    }
    return true;
}

}  // namespace

std::vector<ExperimentRow> derivative_bound_experiment(
    const std::vector<std::pair<double, peaks::PeakFamily>>& families, int budget,
    const RunConfig& cfg) {
    std::vector<ExperimentRow> rows;
    for (const auto& [k, fam] : families) {
        ExperimentRow row;
        row.k = k;
        const double radius = std::sqrt(k);
        // Ambient zero points from coarse grid seeds, by scalar Newton.
        // Seeds are visited nearest the origin first so the budget is spent
        // where the peaks actually live rather than in the Gaussian tail.
        // The step must keep seeds within the Newton basin of the weighted
        // section, which ends roughly 0.8 away from the zero set (beyond
        // that the Gaussian decay dominates the linearization).
        auto seeds = peaks::polydisk_grid(Eigen::VectorXcd::Zero(fam.n), radius, 0.75);
        std::stable_sort(seeds.begin(), seeds.end(),
                         [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
                             return a.norm() < b.norm();
                         });
        std::vector<Eigen::VectorXcd> points;
        for (const auto& seed : seeds) {
            if (static_cast<int>(points.size()) >= budget) break;
            // Damped covariant Newton, abandoned once the iterate leaves the
            // neighborhood of its seed: outside the basin the step follows
            // the Gaussian decay instead of the zero set, so a far wanderer
            // only ever produces tail noise.
            Eigen::VectorXcd z = seed;
            for (int it = 0; it < 40; ++it) {
                PolynomialMap jet = peaks::jet_at(fam, z, z, 1, cfg).poly;
                Complex val = jet.coeff(0, MultiIndex(fam.n, 0));
                if (std::abs(val) <= cfg.zero_tol) break;
                Eigen::VectorXcd grad(fam.n);
                for (int i = 0; i < fam.n; ++i) {
                    MultiIndex e(fam.n, 0);
                    e[i] = 1;
                    grad(i) = jet.coeff(0, e);
                }
                double gn2 = grad.squaredNorm();
                if (gn2 < 1e-20) break;
                Eigen::VectorXcd step = grad.conjugate() * (val / gn2);
                if (step.norm() > 0.35) step *= 0.35 / step.norm();
                z -= step;
                if (!z.allFinite() || (z - seed).norm() > 1.0) break;
            }
            // Accept on the covariant evaluation, with a transversal gradient
            // floor well above the tail noise: deep in the Gaussian tail the
            // section and its gradient are both ~zero_tol, which would pass a
            // bare rank test.
            bool ok = false;
            if (z.allFinite()) {
                PolynomialMap jet = peaks::jet_at(fam, z, z, 1, cfg).poly;
                Eigen::VectorXcd grad(fam.n);
                for (int i = 0; i < fam.n; ++i) {
                    MultiIndex e(fam.n, 0);
                    e[i] = 1;
                    grad(i) = jet.coeff(0, e);
                }
                ok = std::abs(jet.coeff(0, MultiIndex(fam.n, 0))) <= cfg.zero_tol &&
                     grad.norm() >= std::sqrt(cfg.rank_tol);
            }
            if (!ok) continue;
            bool dup = false;
            for (const auto& a : points)
                if ((a - z).norm() < 0.5) dup = true;
            if (!dup) points.push_back(z);
        }

        for (const auto& z0 : points) {
            PolynomialMap jet = peaks::jet_at(fam, z0, z0, 1, cfg).poly;
            Eigen::VectorXcd grad(fam.n);
            for (int i = 0; i < fam.n; ++i) {
                MultiIndex e(fam.n, 0);
                e[i] = 1;
                grad(i) = jet.coeff(0, e);
            }
            if (fam.n != 2) break;
            Eigen::VectorXcd v(2), u(2);
            v(0) = -grad(1);
            v(1) = grad(0);
            v.normalize();
            u = grad.conjugate();
            u.normalize();
            // Largest disk the continuation supports, by doubling. Start
            // small: the correction needed over a disk of radius rho scales
            // like rho^2 times the curvature of the zero set, so a small
            // first disk always fits the tube and the doubling discovers the
            // true branch size.
            DiskMap f, bestf;
            bool have = false;
            for (double rho = 0.25; rho <= radius + 1.0; rho *= 2.0) {
                if (!zero_set_disk(fam, z0, v, u, rho, cfg, &f)) break;
                bestf = f;
                have = true;
            }
            ++row.disks_tried;
            if (!have) {
                ++row.failures;
                continue;
            }
            try {
                auto [g, cert] = brody_reparametrize(bestf, 0.02, cfg);
                row.best = std::max(row.best, g.derivative(0.0).norm());
            } catch (const std::invalid_argument&) {
                ++row.failures;
            }
        }
        row.normalized = k > 0 ? row.best / std::sqrt(k) : row.best;
        rows.push_back(row);
    }
    return rows;
}

std::string experiment_to_csv(const std::vector<ExperimentRow>& rows) {
    std::ostringstream os;
    os << "k,best_derivative,normalized,disks_tried,failures\n";
    for (const auto& r : rows)
        os << r.k << "," << r.best << "," << r.normalized << "," << r.disks_tried << ","
           << r.failures << "\n";
    return os.str();
}

}  // namespace cicurv::brody

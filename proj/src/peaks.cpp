#include "cicurv/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cicurv/parallel.hpp"

namespace cicurv::peaks {

namespace {

constexpr double kPi = 3.14159265358979323846;

Complex herm(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    // Hermitian pairing, conjugate-linear in the first argument.
    return (a.adjoint() * b)(0);
}

std::vector<MultiIndex> multi_indices_up_to(int n, int l) {
    std::vector<MultiIndex> out;
    MultiIndex cur(n, 0);
    // Odometer over exponents with total degree <= l, lexicographic.
    std::function<void(int, int)> rec = [&](int pos, int budget) {
        if (pos == n) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= budget; ++e) {
            cur[pos] = e;
            rec(pos + 1, budget - e);
        }
        cur[pos] = 0;
    };
    rec(0, l);
    return out;
}

nlohmann::json cvec_to_json(const Eigen::VectorXcd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back({{"re", v(i).real()}, {"im", v(i).imag()}});
    return a;
}

Eigen::VectorXcd cvec_from_json(const nlohmann::json& a) {
    Eigen::VectorXcd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        v(i) = Complex(a[i].at("re").get<double>(), a[i].at("im").get<double>());
    return v;
}

}  // namespace

Eigen::VectorXcd PeakSection::evaluate_hol(const Eigen::VectorXcd& z) const {
    Complex expo = kPi * herm(p, z) - kPi / 2.0 * p.squaredNorm();
    return H.evaluate(z - p) * std::exp(expo);
}

double PeakSection::weighted_norm(const Eigen::VectorXcd& z) const {
    return evaluate_hol(z).norm() * std::exp(-kPi / 2.0 * z.squaredNorm());
}

PeakSection peak_section(PolynomialMap H, Eigen::VectorXcd p, int l) {
    if (p.size() != H.n()) throw std::invalid_argument("peak_section: center size mismatch");
    if (H.degree() > l) throw std::invalid_argument("peak_section: deg H exceeds l");
    return PeakSection{std::move(H), std::move(p)};
}

Lattice discretize(int n, double R) {
    if (R < 0) throw std::invalid_argument("discretize: negative radius");
    Lattice lat;
    lat.n = n;
    if (n == 1) {
        // Hexagonal lattice: separation 1, covering radius 1/sqrt(3).
        lat.separation = 1.0;
        lat.covering_radius = 1.0 / std::sqrt(3.0);
        const double h = std::sqrt(3.0) / 2.0;
        int bmax = static_cast<int>(std::floor(R / h)) + 1;
        int amax = static_cast<int>(std::floor(2 * R)) + 2;
        for (int b = -bmax; b <= bmax; ++b) {
            for (int a = -amax; a <= amax; ++a) {
                double x = a + 0.5 * b, y = h * b;
                if (std::abs(x) > R || std::abs(y) > R) continue;
                Eigen::VectorXcd z(1);
                z(0) = Complex(x, y);
                lat.points.push_back(z);
                lat.coords.push_back({a, b});
            }
        }
    } else if (n == 2) {
        // Scaled D4 checkerboard: separation 0.75*sqrt(2), covering 0.75.
        const double s = 0.75;
        lat.separation = s * std::sqrt(2.0);
        lat.covering_radius = s;
        int cmax = static_cast<int>(std::floor(R / s)) + 1;
        for (int a = -cmax; a <= cmax; ++a)
            for (int b = -cmax; b <= cmax; ++b)
                for (int c = -cmax; c <= cmax; ++c)
                    for (int d = -cmax; d <= cmax; ++d) {
                        if ((a + b + c + d) % 2 != 0) continue;
                        double xs[4] = {s * a, s * b, s * c, s * d};
                        if (std::abs(xs[0]) > R || std::abs(xs[1]) > R ||
                            std::abs(xs[2]) > R || std::abs(xs[3]) > R)
                            continue;
                        Eigen::VectorXcd z(2);
                        z(0) = Complex(xs[0], xs[1]);
                        z(1) = Complex(xs[2], xs[3]);
                        lat.points.push_back(z);
                        lat.coords.push_back({a, b, c, d});
                    }
    } else {
        throw std::invalid_argument("discretize: only n = 1 and n = 2 are supported");
    }
    return lat;
}

ColorClasses color_classes(const Lattice& lat, double D) {
    if (D < 1.0) throw std::invalid_argument("color_classes: need D >= 1");
    // Same residues mod M => the difference is M times an integer coordinate
    // vector. For the checkerboard lattice that vector need not satisfy the
    // parity constraint (M * e_1 is a valid difference when M is even), so M
    // must be measured against the per-coordinate step, not the separation:
    // the shortest same-class difference has length M * step >= D.
    const double step = (lat.n == 2) ? lat.separation / std::sqrt(2.0) : lat.separation;
    const int M = std::max(1, static_cast<int>(std::ceil(D / step)));
    ColorClasses cc;
    cc.class_of.assign(lat.points.size(), -1);
    std::map<std::vector<int>, int> ids;
    for (std::size_t i = 0; i < lat.points.size(); ++i) {
        std::vector<int> key;
        for (int c : lat.coords[i]) key.push_back(((c % M) + M) % M);
        auto it = ids.find(key);
        if (it == ids.end()) {
            it = ids.emplace(key, static_cast<int>(cc.members.size())).first;
            cc.members.emplace_back();
        }
        cc.class_of[i] = it->second;
        cc.members[it->second].push_back(static_cast<int>(i));
    }
    return cc;
}

PolynomialMap peak_jet(const PeakSection& sec, const Eigen::VectorXcd& p_frame,
                       const Eigen::VectorXcd& z, int l) {
    const int n = sec.H.n();
    const Eigen::VectorXcd w = sec.p - p_frame;
    // Holomorphic part of the peak divided by the frame section centered at
    // p_frame, expanded exactly in v around z and truncated at degree l:
    //   c * H(z - q + v) * sum_j (pi <w,v>)^j / j!
    Complex expo = kPi * herm(w, z) - kPi / 2.0 * sec.p.squaredNorm() +
                   kPi / 2.0 * p_frame.squaredNorm();
    Complex c = std::exp(expo);

    PolynomialMap lin(n, 1);  // pi <w, v>
    for (int i = 0; i < n; ++i) {
        MultiIndex mi(n, 0);
        mi[i] = 1;
        lin.add_term(0, mi, kPi * std::conj(w(i)));
    }
    PolynomialMap E(n, 1);
    E.add_term(0, MultiIndex(n, 0), 1.0);
    PolynomialMap pw = E;  // lin^j / j!
    for (int j = 1; j <= l; ++j) {
        pw = pw.multiplied(lin).truncated(l) * (1.0 / j);
        E += pw;
    }

    PolynomialMap Ht = sec.H.translated(z - sec.p);
    return (Ht.multiplied(E).truncated(l) * c).pruned();
}

Jet jet_at(const PeakFamily& fam, const Eigen::VectorXcd& p_frame,
           const Eigen::VectorXcd& z, int l, const RunConfig& cfg) {
    Jet out;
    out.poly = PolynomialMap(fam.n, fam.m);
    for (std::size_t i = 0; i < fam.lattice.points.size(); ++i) {
        const PolynomialMap& H = fam.H[i];
        if (H.term_count() == 0) continue;
        double dist = (z - fam.lattice.points[i]).norm();
        if (dist > cfg.peak_cutoff) {
            out.tail += H.coeff_norm() * std::exp(-kPi / 4.0 * dist * dist);
            continue;
        }
        out.poly += peak_jet(PeakSection{H, fam.lattice.points[i]}, p_frame, z, l);
    }
    return out;
}

std::vector<Eigen::VectorXcd> polydisk_grid(const Eigen::VectorXcd& center, double radius,
                                            double step) {
    const int n = static_cast<int>(center.size());
    int per_axis = static_cast<int>(std::floor(2 * radius / step + 1e-9)) + 1;
    std::vector<Eigen::VectorXcd> out;
    std::vector<int> idx(2 * n, 0);
    while (true) {
        Eigen::VectorXcd z = center;
        for (int i = 0; i < n; ++i)
            z(i) += Complex(-radius + idx[2 * i] * step, -radius + idx[2 * i + 1] * step);
        out.push_back(z);
        int k = 0;
        while (k < 2 * n && ++idx[k] == per_axis) idx[k++] = 0;
        if (k == 2 * n) break;
    }
    return out;
}

SumBound sum_of_peaks_bound(const PeakFamily& fam, int l, const RunConfig& cfg) {
    SumBound sb;
    double maxH = 0.0;
    for (const auto& H : fam.H) maxH = std::max(maxH, H.coeff_norm());

    for (const auto& q : fam.lattice.points)
        for (const auto& z : polydisk_grid(q, 1.0, cfg.grid_step))
            sb.grid_sup = std::max(sb.grid_sup, jet_at(fam, z, z, l, cfg).poly.coeff_norm());

    const double C = cfg.peak_C;
    double series = 0.0;
    for (int a = 0; a <= 40; ++a)
        series += std::exp(-a * a / C) * std::pow(2.0 * a + 4.0, 2 * fam.n);
    sb.series_bound = maxH * C * series;
    return sb;
}

double TransversalityOracle::margin(const Eigen::VectorXcd& /*z*/,
                                    const PolynomialMap& jet) const {
    const int n = jet.n(), m = jet.m();
    Eigen::VectorXcd value(m);
    MultiIndex zero(n, 0);
    for (int j = 0; j < m; ++j) value(j) = jet.coeff(j, zero);
    Eigen::MatrixXcd deriv(m, n);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) {
            MultiIndex e(n, 0);
            e[i] = 1;
            deriv(j, i) = jet.coeff(j, e);
        }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(deriv);
    double smin = svd.singularValues()(std::min(m, n) - 1);
    return std::max(value.norm(), smin);
}

double LineTangencyOracle::margin(const Eigen::VectorXcd& /*z*/,
                                  const PolynomialMap& jet) const {
    if (jet.m() != 1)
        throw std::invalid_argument("LineTangencyOracle: hypersurface jets only (m = 1)");
    const int n = jet.n();
    double value = std::abs(jet.coeff(0, MultiIndex(n, 0)));

    const Eigen::VectorXcd origin = Eigen::VectorXcd::Zero(n);
    auto dir_margin = [&](const Eigen::VectorXcd& b) {
        auto coeffs = jet.restrict_to_line(0, origin, b);
        double best = 0.0;
        for (int j = 1; j <= l_ && j < static_cast<int>(coeffs.size()); ++j)
            best = std::max(best, std::abs(coeffs[j]));
        return best;
    };

    double worst;
    if (n == 1) {
        Eigen::VectorXcd b(1);
        b(0) = 1.0;
        worst = dir_margin(b);
    } else {
        worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            worst = std::min(worst, dir_margin(Eigen::VectorXcd::Unit(n, i)));
        std::mt19937_64 rng(seed_);
        std::normal_distribution<double> nd;
        for (int s = 0; s < samples_; ++s) {
            Eigen::VectorXcd b(n);
            for (int i = 0; i < n; ++i) b(i) = Complex(nd(rng), nd(rng));
            b.normalize();
            worst = std::min(worst, dir_margin(b));
        }
    }
    return std::max(value, worst);
}

AvoidResult local_avoid(const PeakFamily& fam, const Eigen::VectorXcd& p, double eps,
                        const LocusOracle& oracle, int budget, std::uint64_t seed,
                        const RunConfig& cfg) {
    if (!(eps > 0.0 && eps < 0.25))
        throw std::invalid_argument("local_avoid: need 0 < eps < 1/4");
    if (budget < 1) throw std::invalid_argument("local_avoid: need budget >= 1");

    const int l = fam.l;
    AvoidResult res;
    res.target = eps * std::pow(-std::log(eps), -cfg.avoid_N0);

    auto grid = polydisk_grid(p, 1.0, cfg.grid_step);
    std::vector<PolynomialMap> base;
    base.reserve(grid.size());
    for (const auto& z : grid) base.push_back(jet_at(fam, z, z, l, cfg).poly);

    // Returns the grid minimum; "complete" is false when the scan stopped
    // early because the sample already fell below the best candidate found
    // so far (the value is then only an upper bound and cannot win anyway).
    auto margin_of = [&](const PolynomialMap& H, bool* complete) {
        double worst = std::numeric_limits<double>::infinity();
        PeakSection sec{H, p};
        bool zero = H.term_count() == 0;
        *complete = true;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            PolynomialMap total = base[g];
            if (!zero) total += peak_jet(sec, grid[g], grid[g], l);
            worst = std::min(worst, oracle.margin(grid[g], total));
            if (worst <= res.achieved && !zero) {
                *complete = false;
                break;
            }
        }
        return worst;
    };

    auto monos = multi_indices_up_to(fam.n, l);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    bool complete = true;
    res.H = PolynomialMap(fam.n, fam.m);
    res.achieved = margin_of(res.H, &complete);  // the zero candidate first
    res.samples_used = 1;
    // The whole budget is spent even after the target is reached: the best
    // candidate is kept, which only strengthens the guaranteed margin.
    for (int s = 1; s < budget; ++s) {
        PolynomialMap cand(fam.n, fam.m);
        // Uniform in the coefficient max-norm ball of radius eps.
        for (int j = 0; j < fam.m; ++j)
            for (const auto& alpha : monos) {
                double r = eps * std::sqrt(unif(rng));
                double th = 2 * kPi * unif(rng);
                cand.add_term(j, alpha, Complex(r * std::cos(th), r * std::sin(th)));
            }
        double m = margin_of(cand, &complete);
        ++res.samples_used;
        if (complete && m > res.achieved) {
            res.achieved = m;
            res.H = cand;
        }
    }
    res.below_target = res.achieved < res.target;
    return res;
}

std::vector<double> make_schedule(int count, double eps1, double C, double N0) {
    std::vector<double> eps(count);
    if (count == 0) return eps;
    eps[0] = eps1;
    for (int i = 1; i < count; ++i)
        eps[i] = eps[i - 1] * std::pow(-std::log(eps[i - 1]), -N0) / (4.0 * C);
    return eps;
}

std::string validate_schedule(const std::vector<double>& eps, double D, double C, double N0) {
    std::ostringstream err;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0 && eps[i] < 0.25)) {
            err << "eps_" << i + 1 << " = " << eps[i] << " violates 0 < eps < 1/4";
            return err.str();
        }
        if (i > 0 && eps[i] >= eps[i - 1]) {
            err << "schedule not strictly decreasing at i = " << i + 1;
            return err.str();
        }
        double eta = eps[i] * std::pow(-std::log(eps[i]), -N0);
        if (i + 1 < eps.size() && C * eps[i + 1] > 0.25 * eta * (1 + 1e-12)) {
            err << "C*eps_" << i + 2 << " = " << C * eps[i + 1]
                << " exceeds (1/4)*eps_" << i + 1 << "*(-log eps)^-N0 = " << 0.25 * eta;
            return err.str();
        }
        double lhs = C * std::exp(-D * D / C);
        double rhs = 0.25 * std::pow(-std::log(eps[i]), -N0);
        if (lhs > rhs * (1 + 1e-12)) {
            err << "C*exp(-D^2/C) = " << lhs << " exceeds (1/4)*(-log eps_" << i + 1
                << ")^-N0 = " << rhs;
            return err.str();
        }
    }
    return {};
}

GlobalizeReport globalize(const Lattice& lat, const LocusOracle& oracle, double D,
                          const std::vector<double>& schedule, int m, int l,
                          const RunConfig& cfg, bool parallel) {
    GlobalizeReport rep;
    rep.family.n = lat.n;
    rep.family.m = m;
    rep.family.l = l;
    rep.family.lattice = lat;
    rep.family.classes = color_classes(lat, D);
    rep.family.H.assign(lat.points.size(), PolynomialMap(lat.n, m));
    rep.achieved.assign(lat.points.size(), 0.0);
    rep.below_target.assign(lat.points.size(), 0);

    const int classes = rep.family.classes.count();
    if (static_cast<int>(schedule.size()) < classes)
        throw std::invalid_argument("globalize: schedule shorter than the class count (" +
                                    std::to_string(classes) + ")");
    std::vector<double> eps(schedule.begin(), schedule.begin() + classes);
    if (auto msg = validate_schedule(eps, D, cfg.peak_C, cfg.avoid_N0); !msg.empty())
        throw std::invalid_argument("globalize: invalid schedule: " + msg);
    rep.family.epsilons = eps;

    for (int ci = 0; ci < classes; ++ci) {
        const auto& members = rep.family.classes.members[ci];
        std::vector<AvoidResult> results(members.size());
        auto body = [&](std::size_t k) {
            int pt = members[k];
            std::uint64_t s = cfg.seed;
            s = (s ^ (static_cast<std::uint64_t>(ci) + 1)) * 0x9e3779b97f4a7c15ULL;
            s = (s ^ (static_cast<std::uint64_t>(pt) + 1)) * 0xbf58476d1ce4e5b9ULL;
            results[k] = local_avoid(rep.family, lat.points[pt], eps[ci], oracle,
                                     cfg.avoid_budget, s, cfg);
        };
        if (parallel)
            parallel_for(members.size(), cfg.threads, body);
        else
            serial_for(members.size(), body);
        for (std::size_t k = 0; k < members.size(); ++k) {
            rep.family.H[members[k]] = results[k].H;
            rep.achieved[members[k]] = results[k].achieved;
            rep.below_target[members[k]] = results[k].below_target ? 1 : 0;
        }
    }

    // Measured uniform margin of the final section over every point's
    // evaluation region; the lemma guarantees half the weakest class target.
    double fin = std::numeric_limits<double>::infinity();
    std::vector<double> finals(lat.points.size());
    auto measure = [&](std::size_t i) {
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& z : polydisk_grid(lat.points[i], 1.0, cfg.grid_step))
            worst = std::min(worst, oracle.margin(z, jet_at(rep.family, z, z, l, cfg).poly));
        finals[i] = worst;
    };
    if (parallel)
        parallel_for(lat.points.size(), cfg.threads, measure);
    else
        serial_for(lat.points.size(), measure);
    for (double v : finals) fin = std::min(fin, v);
    rep.final_margin = lat.points.empty() ? 0.0 : fin;

    double g = std::numeric_limits<double>::infinity();
    for (double e : eps) g = std::min(g, e * std::pow(-std::log(e), -cfg.avoid_N0));
    rep.guaranteed = eps.empty() ? 0.0 : 0.5 * g;
    return rep;
}

double transversality_margin(const PeakFamily& fam, double radius, double grid_step,
                             const RunConfig& cfg) {
    TransversalityOracle oracle;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& z : polydisk_grid(Eigen::VectorXcd::Zero(fam.n), radius, grid_step))
        worst = std::min(worst, oracle.margin(z, jet_at(fam, z, z, 1, cfg).poly));
    return std::isfinite(worst) ? worst : 0.0;
}

ZeroSamples zero_set_sample(const PeakFamily& fam, double radius, const RunConfig& cfg) {
    ZeroSamples out;
    if (fam.m >= fam.n)
        throw std::invalid_argument("zero_set_sample: need m < n for a positive-dimensional zero set");
    bool empty = true;
    for (const auto& H : fam.H)
        if (H.term_count() > 0) empty = false;
    if (empty) return out;

    std::vector<Eigen::VectorXcd> accepted;
    for (const auto& seed : polydisk_grid(Eigen::VectorXcd::Zero(fam.n), radius, 0.5)) {
        Eigen::VectorXcd z = seed;
        bool ok = false;
        for (int it = 0; it < 40; ++it) {
            PolynomialMap jet = jet_at(fam, z, z, 1, cfg).poly;
            Eigen::VectorXcd value(fam.m);
            for (int j = 0; j < fam.m; ++j) value(j) = jet.coeff(j, MultiIndex(fam.n, 0));
            Eigen::MatrixXcd deriv(fam.m, fam.n);
            for (int j = 0; j < fam.m; ++j)
                for (int i = 0; i < fam.n; ++i) {
                    MultiIndex e(fam.n, 0);
                    e[i] = 1;
                    deriv(j, i) = jet.coeff(j, e);
                }
            if (value.norm() <= cfg.zero_tol) {
                // Demand headroom above the germ constructor's own rank
                // threshold; far-out zeros are Gaussian-damped to the brink.
                Eigen::JacobiSVD<Eigen::MatrixXcd> svd(deriv);
                ok = svd.singularValues()(fam.m - 1) >= 100 * cfg.rank_tol;
                break;
            }
            // Minimum-norm Newton step for the underdetermined system.
            z += deriv.completeOrthogonalDecomposition().solve(-value);
            if (!z.allFinite() || z.norm() > 4 * radius + 10) break;
        }
        if (!ok) {
            ++out.dropped;
            continue;
        }
        bool dup = false;
        for (const auto& a : accepted)
            if ((a - z).norm() < 1e-4) dup = true;
        if (dup) continue;
        accepted.push_back(z);
        // Degree-2 Taylor truncation of the section in the frame at z.
        PolynomialMap P = jet_at(fam, z, z, 2, cfg).poly;
        try {
            out.germs.emplace_back(P, Eigen::VectorXcd::Zero(fam.n), cfg);
        } catch (const std::exception&) {
            accepted.pop_back();
            ++out.dropped;
        }
    }
    return out;
}

std::string PeakFamily::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["m"] = m;
    j["l"] = l;
    j["lattice"] = {{"n", lattice.n},
                    {"separation", lattice.separation},
                    {"covering_radius", lattice.covering_radius},
                    {"coords", lattice.coords}};
    j["lattice"]["points"] = nlohmann::json::array();
    for (const auto& p : lattice.points) j["lattice"]["points"].push_back(cvec_to_json(p));
    j["classes"] = classes.members;
    j["epsilons"] = epsilons;
    j["H"] = nlohmann::json::array();
    for (const auto& h : H) j["H"].push_back(nlohmann::json::parse(h.to_json()));
    return j.dump();
}

PeakFamily PeakFamily::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PeakFamily f;
    f.n = j.at("n").get<int>();
    f.m = j.at("m").get<int>();
    f.l = j.at("l").get<int>();
    f.lattice.n = j["lattice"].at("n").get<int>();
    f.lattice.separation = j["lattice"].at("separation").get<double>();
    f.lattice.covering_radius = j["lattice"].at("covering_radius").get<double>();
    f.lattice.coords = j["lattice"].at("coords").get<std::vector<std::vector<int>>>();
    for (const auto& p : j["lattice"].at("points")) f.lattice.points.push_back(cvec_from_json(p));
    f.classes.members = j.at("classes").get<std::vector<std::vector<int>>>();
    f.classes.class_of.assign(f.lattice.points.size(), -1);
    for (std::size_t c = 0; c < f.classes.members.size(); ++c)
        for (int i : f.classes.members[c]) f.classes.class_of[i] = static_cast<int>(c);
    f.epsilons = j.at("epsilons").get<std::vector<double>>();
    for (const auto& h : j.at("H")) f.H.push_back(PolynomialMap::from_json(h.dump()));
    return f;
}

std::string GlobalizeReport::to_json(const RunConfig& cfg) const {
    nlohmann::json j;
    j["version"] = kVersion;
    j["epsilons"] = family.epsilons;
    j["achieved"] = achieved;
    std::vector<int> below(below_target.begin(), below_target.end());
    j["below_target"] = below;
    j["final_margin"] = final_margin;
    j["guaranteed"] = guaranteed;
    j["points"] = family.lattice.points.size();
    j["classes"] = family.classes.count();
    j["family"] = nlohmann::json::parse(family.to_json());
    j["config"] = nlohmann::json::parse(cfg.to_json());
    return j.dump(2);
}

}  // namespace cicurv::peaks

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cicurv/config.hpp"
#include "cicurv/germ.hpp"
#include "cicurv/poly.hpp"

namespace cicurv::peaks {

/// A peak section in the flat Bargmann-Fock model: the holomorphic part is
/// H(z-p) * exp(pi<p,z> - pi/2 |p|^2) componentwise, <p,z> the Hermitian
/// pairing (conjugate-linear in p, holomorphic in z). The pointwise norm
/// carries the weight exp(-pi/2 |z|^2), so the norm of the constant section
/// 1 centered at p is exactly exp(-pi/2 |z-p|^2).
struct PeakSection {
    PolynomialMap H;     // n vars, m components, degree <= l
    Eigen::VectorXcd p;  // center

    Eigen::VectorXcd evaluate_hol(const Eigen::VectorXcd& z) const;
    double weighted_norm(const Eigen::VectorXcd& z) const;
};

PeakSection peak_section(PolynomialMap H, Eigen::VectorXcd p, int l);

/// Discretization of a box of radius R: hexagonal lattice for n = 1, the
/// scaled D4 checkerboard lattice for n = 2 (separation >= 1, covering
/// radius < 1 in both cases). Integer lattice coordinates are kept so that
/// color classes can be formed as sublattice cosets.
struct Lattice {
    int n = 1;
    std::vector<Eigen::VectorXcd> points;
    std::vector<std::vector<int>> coords;
    double separation = 0.0;
    double covering_radius = 0.0;
};

Lattice discretize(int n, double R);

/// Partition into cosets of a coarse sublattice: points sharing a class are
/// at distance >= D from each other. Classes are non-empty and ordered.
struct ColorClasses {
    std::vector<int> class_of;              // per lattice point
    std::vector<std::vector<int>> members;  // class -> point indices
    int count() const { return static_cast<int>(members.size()); }
};

ColorClasses color_classes(const Lattice& lat, double D);

/// The running sum section s = sum_p sigma(H_p, p) with its schedule.
struct PeakFamily {
    int n = 1;
    int m = 1;
    int l = 1;
    Lattice lattice;
    ColorClasses classes;
    std::vector<PolynomialMap> H;    // per lattice point (zero map = unset)
    std::vector<double> epsilons;    // per class

    std::string to_json() const;
    static PeakFamily from_json(const std::string& text);
};

/// l-jet of the family at z in the peak frame centered at p_frame, by exact
/// coefficient arithmetic per peak; peaks farther than peak_cutoff from z
/// are dropped and the Gaussian tail of what was dropped is reported.
struct Jet {
    PolynomialMap poly;  // n vars, m components, degree <= l
    double tail = 0.0;
};

Jet jet_at(const PeakFamily& fam, const Eigen::VectorXcd& p_frame,
           const Eigen::VectorXcd& z, int l, const RunConfig& cfg);

/// Jet of a single peak in the frame centered at p_frame.
PolynomialMap peak_jet(const PeakSection& sec, const Eigen::VectorXcd& p_frame,
                       const Eigen::VectorXcd& z, int l);

/// Grid sup of jet coefficient norms over unit polydisks around the lattice
/// points, next to the closed-form Gaussian series bound
/// max|H| * C * sum_a exp(-a^2/C) (2a+4)^(2n) with C = cfg.peak_C.
struct SumBound {
    double grid_sup = 0.0;
    double series_bound = 0.0;
};

SumBound sum_of_peaks_bound(const PeakFamily& fam, int l, const RunConfig& cfg);

/// Fibered distance to a bad locus: margin(z, jet) >= 0, vanishing exactly
/// on the locus, continuous in the jet coefficients.
class LocusOracle {
public:
    virtual ~LocusOracle() = default;
    virtual std::string name() const = 0;
    virtual double margin(const Eigen::VectorXcd& z, const PolynomialMap& jet) const = 0;
};

/// Margin of the transversality locus (value small and derivative
/// degenerate): max(|jet(0)|, sigma_min of the jet's linear part).
class TransversalityOracle : public LocusOracle {
public:
    std::string name() const override { return "transversality"; }
    double margin(const Eigen::VectorXcd& z, const PolynomialMap& jet) const override;
};

/// Margin of the order-l line-tangency locus for hypersurface jets (m = 1):
/// away from zeros the value itself; at approximate zeros, the minimum over
/// sampled directions of the largest of the first l restricted derivatives.
class LineTangencyOracle : public LocusOracle {
public:
    LineTangencyOracle(int l, int direction_samples = 64, std::uint64_t seed = 1)
        : l_(l), samples_(direction_samples), seed_(seed) {}
    std::string name() const override { return "linetangency"; }
    double margin(const Eigen::VectorXcd& z, const PolynomialMap& jet) const override;

private:
    int l_;
    int samples_;
    std::uint64_t seed_;
};

/// Seeded rejection sampling in the coefficient max-norm eps-ball: find H
/// with |H| <= eps so that the oracle margin of family + sigma(H,p) is
/// >= eps * (-log eps)^(-avoid_N0) over the evaluation grid around p.
struct AvoidResult {
    PolynomialMap H;
    double achieved = 0.0;
    double target = 0.0;
    bool below_target = false;
    int samples_used = 0;
};

AvoidResult local_avoid(const PeakFamily& fam, const Eigen::VectorXcd& p, double eps,
                        const LocusOracle& oracle, int budget, std::uint64_t seed,
                        const RunConfig& cfg);

/// Schedule built by the recursion eps_{i+1} = eps_i (-log eps_i)^(-N0) / (4C).
std::vector<double> make_schedule(int count, double eps1, double C, double N0);

/// Empty string if the schedule satisfies the two globalization
/// inequalities for (C, N0, D); otherwise a description of the violation.
std::string validate_schedule(const std::vector<double>& eps, double D, double C, double N0);

struct GlobalizeReport {
    PeakFamily family;
    std::vector<double> achieved;   // per point
    std::vector<char> below_target;  // per point
    double final_margin = 0.0;      // measured uniform transversality margin
    double guaranteed = 0.0;        // 1/2 min_i eps_i (-log eps_i)^(-N0)

    std::string to_json(const RunConfig& cfg) const;
};

/// Class-sequential sweep: points of one color class run local_avoid
/// concurrently against the peaks of strictly earlier classes, with a
/// deterministic per-point seed; classes are committed in order.
GlobalizeReport globalize(const Lattice& lat, const LocusOracle& oracle, double D,
                          const std::vector<double>& schedule, int m, int l,
                          const RunConfig& cfg, bool parallel = true);

/// Largest eta such that on the evaluation grid, wherever the weighted
/// section norm is below eta the weighted derivative's smallest singular
/// value exceeds eta; computed in closed form as
/// min over grid of max(|value|, sigma_min(derivative)).
double transversality_margin(const PeakFamily& fam, double radius, double grid_step,
                             const RunConfig& cfg);

/// Newton iteration from grid seeds onto {s = 0}; converged points are
/// packaged as germs of the degree-2 Taylor truncation of the section.
struct ZeroSamples {
    std::vector<Germ> germs;
    int dropped = 0;
};

ZeroSamples zero_set_sample(const PeakFamily& fam, double radius, const RunConfig& cfg);

/// Real-coordinate grid over the polydisk of the given radius around
/// center (step cfg.grid_step).
std::vector<Eigen::VectorXcd> polydisk_grid(const Eigen::VectorXcd& center, double radius,
                                            double step);

}  // namespace cicurv::peaks

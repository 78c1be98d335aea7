#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cicurv/config.hpp"
#include "cicurv/peaks.hpp"
#include "cicurv/poly.hpp"

namespace cicurv::brody {

/// Holomorphic map from the unit disk to C^m as a truncated power series.
struct DiskMap {
    int m = 1;
    std::vector<Eigen::VectorXcd> c;  // c[k] = degree-k coefficient vector
    double validity_radius = 1.0;

    int deg() const { return static_cast<int>(c.size()) - 1; }
    Eigen::VectorXcd evaluate(Complex z) const;
    Eigen::VectorXcd derivative(Complex z) const;
    /// z -> f(a z); exact on coefficients.
    DiskMap scaled(Complex a) const;
    /// z -> f((z + p0)/(1 + conj(p0) z)), series truncated at the current
    /// degree. The reparametrization only evaluates the result on |z| <= 1/2,
    /// where the truncation tail is negligible.
    DiskMap mobius(Complex p0) const;
    bool constant(double tol) const;

    std::string to_json() const;
    static DiskMap from_json(const std::string& text);
};

/// Scale factor of f from the Poincare disk to the Euclidean target:
/// |f'(p)| (1 - |p|^2) / 2. Throws std::invalid_argument when |p| >= 1.
double poincare_jacobian(const DiskMap& f, Complex p);

struct BrodyCertificate {
    Complex p0;                // maximizer of the Poincare jacobian of f(z/2)
    double c1 = 4.0;           // |f'(0)|      <= c1 |g'(0)|
    double c2 = 4.0 / 3.0;     // sup_D |g'|   <= c2 |g'(0)|
    double c3 = 1.0;           // g(D) is contained in f(D)
    double ratio_sup = 0.0;    // measured sup |g'| / |g'(0)| over a dense grid
    double ratio_f0 = 0.0;     // measured |f'(0)| / |g'(0)|

    std::string to_json(const RunConfig& cfg) const;
};

/// Brody reparametrization: maximize the Poincare jacobian of f1(p) = f(p/2)
/// over a grid with local refinement (ties to the smallest |p0|), compose
/// with the disk automorphism centered there, halve again.
std::pair<DiskMap, BrodyCertificate> brody_reparametrize(const DiskMap& f, double grid_step,
                                                         const RunConfig& cfg);

/// Vanishing order at t = 0 of t -> s(z + t b) from exact univariate
/// restriction coefficients; deg(s) + 1 is the contained-line sentinel.
int line_tangency_order(const PolynomialMap& s, const Eigen::VectorXcd& z,
                        const Eigen::VectorXcd& b, double zero_tol = 1e-9);

struct TangencyResult {
    int order = 0;
    Eigen::VectorXcd witness;
    double margin = 0.0;  // first nonvanishing restricted coefficient at the witness
};

/// Maximal line-tangency order over unit directions at an approximate zero
/// of s, by staged sphere minimization of max |c_1..c_k|.
TangencyResult max_line_tangency(const PolynomialMap& s, const Eigen::VectorXcd& z, int l,
                                 int restarts, const RunConfig& cfg);

struct ExperimentRow {
    double k = 0.0;        // scale parameter
    double best = 0.0;     // largest |g'(0)| found among zero-set disks
    double normalized = 0.0;  // best / sqrt(k)
    int disks_tried = 0;
    int failures = 0;
};

/// For each (k, family): sample the zero set, push holomorphic graph disks
/// through the sampled points (boundary interpolation + Brody
/// reparametrization), and record the largest central derivative. A
/// lower-bound search; emits data, makes no claims.
std::vector<ExperimentRow> derivative_bound_experiment(
    const std::vector<std::pair<double, peaks::PeakFamily>>& families, int budget,
    const RunConfig& cfg);

std::string experiment_to_csv(const std::vector<ExperimentRow>& rows);

}  // namespace cicurv::brody

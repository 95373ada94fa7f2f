#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "singlab/fit.hpp"

namespace singlab {

/*
 * Dyadic cube [k_i 2^{-j}, (k_i+1) 2^{-j}) per axis, half-open so that
 * all cubes of one level are pairwise disjoint.
 */
struct DyadicCube {
    int level = 0;
    std::vector<std::int64_t> index;

    double side() const;
    std::vector<double> center() const;
    int dim() const { return static_cast<int>(index.size()); }

    bool contains(std::span<const double> x) const;          // half-open
    bool dilate_contains(std::span<const double> x) const;   // closed (3/2)Q
};

// All level-j cubes (2^{-j} = eps) meeting the point set K.  eps must be
// a non-positive power of two.  Output is sorted by index.
std::vector<DyadicCube> dyadic_cover(
    const std::vector<std::vector<double>>& K, double eps);

// Cover of the eps/4-fattened sample by side-eps/2 cubes: every point
// within sup-distance eps/4 of K then lands in a covered cube, which
// makes the "identically 1 near K" property exact at sampled points.
std::vector<DyadicCube> dyadic_cover_fattened(
    const std::vector<std::vector<double>>& K, double eps);

// 1D bump profile b: b == 1 on [0,1], == 0 on [3/2,inf), smooth bridge
// B(3-2t) with B(s) = e(s)/(e(s)+e(1-s)), e(s) = exp(-1/s), in between.
// out[k] receives the k-th derivative, k <= order <= 3.
void bump_profile(double t, int order, double* out);

// D^alpha of the cube bump psi (product of 1D profiles scaled to the
// cube), |alpha| <= 3.  Pass alpha = {} for the plain value.
double base_bump(const DyadicCube& cube, std::span<const double> x,
                 std::span<const int> alpha = {});

// Value + gradient + Hessian bundle, for derivatives of products of bumps.
struct Jet {
    double value = 0.0;
    std::vector<double> grad;
    std::vector<double> hess;  // row-major n x n

    explicit Jet(int n = 0)
        : grad(n, 0.0), hess(static_cast<size_t>(n) * n, 0.0) {}
    static Jet constant(int n, double c) {
        Jet j(n);
        j.value = c;
        return j;
    }
    Jet operator*(const Jet& other) const;
    Jet one_minus() const;
    double deriv(std::span<const int> alpha) const;  // |alpha| <= 2
};

/*
 * Partition of unity over a disjoint cube family, sorted by side
 * descending: phi_{k+1} = psi_{k+1} prod_{j<=k} (1 - psi_j), with the
 * aggregate chi = sum phi_k = 1 - prod (1 - psi_k).
 */
class CutoffPartition {
public:
    explicit CutoffPartition(std::vector<DyadicCube> cubes);

    const std::vector<DyadicCube>& cubes() const { return cubes_; }
    int dim() const { return cubes_.empty() ? 0 : cubes_.front().dim(); }

    double psi(size_t i, std::span<const double> x) const;
    double phi(size_t i, std::span<const double> x) const;
    double chi(std::span<const double> x) const;

    Jet psi_jet(size_t i, std::span<const double> x) const;
    Jet phi_jet(size_t i, std::span<const double> x) const;
    Jet chi_jet(std::span<const double> x) const;

    // Indices whose (3/2)-dilate contains x; every other bump vanishes there.
    std::vector<size_t> active(std::span<const double> x) const;

private:
    std::vector<DyadicCube> cubes_;
};

CutoffPartition build_partition(std::vector<DyadicCube> cubes);

struct DerivativeBoundReport {
    std::vector<double> normalized_sup;  // sup |D^alpha phi_i| * s_i^{|alpha|}
    double max_over_min = 0.0;           // cross-level uniformity ratio
};

// Monte Carlo sup of |D^alpha phi_i| s_i^{|alpha|} over (3/2)Q_i, |alpha| <= 2.
DerivativeBoundReport verify_derivative_bound(const CutoffPartition& partition,
                                              std::span<const int> alpha,
                                              int samples_per_cube,
                                              std::uint64_t seed);

struct FlestResult {
    ExponentFit fit;          // log2 ||grad chi_eps||_{p'} against log2 eps
    double bound_slope = 0.0; // l - |alpha| (Lambda > 0) or + 1/p' (Lambda = 0)
    std::vector<std::pair<double, double>> norms;  // (eps, norm)
};

// Gradient L^{p'} norms of chi_eps across a dyadic eps range, fitted in
// log-log form and compared against the l, p', Lambda bound slope.
FlestResult verify_flest(const std::vector<std::vector<double>>& K,
                         const std::vector<double>& eps_range, double l,
                         double p_prime, double lambda_input,
                         std::int64_t samples, std::uint64_t seed);

}  // namespace singlab

#pragma once

#include <string>
#include <vector>

#include "kfree_sets.hpp"

namespace kfree::diffr {

using lat::Point;
using lat::Radius;
using sets::Config;

// Rational point of Q * dual-lattice; coords are with respect to the dual
// basis, q is the least positive integer with q * point in the dual lattice.
struct DualPoint {
    std::vector<Rational> coords;
    i64 q = 1;
};

i64 denominator(const std::vector<Rational>& coords);

// closed autocorrelation weight
//   w(a) = xi(nk) prod_{p | c_k(a)} (1 + 1/(p^{nk}-2)) / det
// with w(0) = 1/(zeta(nk) det) via the factor identity
// (1-2/p^s)(1+1/(p^s-2)) = 1-1/p^s taken over all primes.
long double autocorr_weight(const Config& cfg, const Point& a);

// #{x : x and x-a both in V cap B_R(0)} * det / (R^n v_n)
long double autocorr_weight_empirical(const Config& cfg, const Point& a, double R);

// Bragg intensity at denominator q: 0 unless q is (k+1)-free, else
//   (1/zeta^2(nk)) prod_{p|q} (p^{nk}-1)^{-2} / det^2
long double diffraction_intensity(const Config& cfg, i64 q);

struct Peak {
    DualPoint location;
    long double intensity = 0.0L;
    long double series_value = 0.0L;     // partial Dirac-comb series sum
    long double series_residual = 0.0L;  // |closed - series|
    long double series_bound = 0.0L;     // crude tail bound for the truncation
};

// all dual points within the open dual ball expressible with a
// (k+1)-free denominator q <= q_max, sorted by norm then lexicographic;
// every peak carries the closed intensity and the d <= d_max partial sum
// of the comb series as a cross-check
std::vector<Peak> peak_list(const Config& cfg, const Radius& dual_radius, i64 q_max,
                            i64 d_max = 100);

struct VVWitness {
    Point a;
    bool found = false;
    Point x;  // x and x - a both k-free, smallest-norm witness
};

struct VVReport {
    std::vector<VVWitness> rows;
    bool all_found = false;
    double search_radius = 0;
};

// difference-set scan: a witness pair for every a in the ball certifies
// that ball of Lambda inside V - V; a missed witness only means the
// search budget ran out
VVReport difference_set_check(const Config& cfg, const Radius& radius,
                              double search_radius = 100);

std::string render_peaks_table(const Config& cfg, const std::vector<Peak>& peaks);
std::string render_peaks_json(const Config& cfg, const std::vector<Peak>& peaks);

}  // namespace kfree::diffr

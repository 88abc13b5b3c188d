#pragma once

#include <string>
#include <vector>

#include "kfree_sets.hpp"

namespace kfree::patch {

using lat::Point;
using lat::Radius;
using sets::Config;

// Feasibility caps.  The exact census evaluates a closed form for every
// admissible subset of the ball, which costs 3^|ball| Euler products; the
// plain admissible-subset count costs 2^|ball| bitmask checks.
inline constexpr int kMaxBallForCensus = 14;
inline constexpr int kMaxBallForCount = 30;
inline constexpr int kMaxForbidden = 25;  // inclusion-exclusion is 2^|Q|

// Closed-form frequency with the accumulated Euler-product tail bounds.
struct FrequencyValue {
    long double value = 0.0L;
    long double error_bound = 0.0L;
};

struct Patch {
    Radius rho;
    std::vector<Point> occupied;   // sorted lexicographically
    std::vector<Point> forbidden;  // ball minus occupied
};

// the rho-patch of V at t: (V - t) within the open ball
Patch patch_at(const Config& cfg, const Point& t, const Radius& rho);

// density of translations placing P inside V and Q outside V:
//   (1/det) sum_{F subset Q} (-1)^|F| prod_p (1 - |(P u F)/p^k|/p^{nk})
FrequencyValue patch_frequency(const Config& cfg, const std::vector<Point>& P,
                               const std::vector<Point>& Q);

// number of admissible subsets of the ball == N(rho), the number of
// distinct rho-patches of V
i64 n_rho_exact(const Config& cfg, const Radius& rho);

struct CensusRow {
    std::vector<Point> occupied;
    FrequencyValue closed;
    i64 count = 0;               // empirical occurrences among scanned t
    long double empirical = 0.0L;
    bool observed = false;
};

struct Census {
    Radius rho;
    double R = 0;
    std::vector<Point> ball;      // canonical (lex) order
    std::vector<CensusRow> rows;  // canonical patch order: |P| desc, then lex
    i64 n_rho = 0;
    i64 scanned = 0;              // lattice points t examined
};

Census patch_census(const Config& cfg, const Radius& rho, double R);

struct CensusChecks {
    long double sum_nu = 0.0L;          // sum of closed frequencies
    long double sum_target = 0.0L;      // 1/det
    long double sum_residual = 0.0L;
    long double sum_bound = 0.0L;
    long double mean_size = 0.0L;       // sum nu * |P|
    long double mean_target = 0.0L;     // |ball| / (zeta(nk) det)
    long double mean_residual = 0.0L;
    long double mean_bound = 0.0L;
    bool pass = false;
};

CensusChecks census_checks(const Config& cfg, const Census& census);

// log2 N(rho) / (rho^n v_n det): finite-rho estimate of the patch-counting
// entropy (the rho -> infinity limit is 1/zeta(nk))
long double entropy_patch_counting(const Config& cfg, const Radius& rho);

// (1 / (rho^n v_n det)) sum over admissible patches of -nu log2 nu with
// closed-form nu: finite-rho estimate of the measure entropy (limit 0)
long double entropy_measure(const Config& cfg, const Radius& rho);

// reporting layer: censuses grouped under the lattice point group
struct SymmetryClass {
    std::vector<Point> representative;  // canonical: first row in class order
    int multiplicity = 0;
    FrequencyValue closed;
    i64 count = 0;  // total empirical count over the class
};

std::vector<SymmetryClass> symmetry_classes(const Config& cfg, const Census& census);

std::string render_census_table(const Config& cfg, const Census& census);
std::string render_census_json(const Config& cfg, const Census& census);

std::string format_points(const std::vector<Point>& pts);

}  // namespace kfree::patch

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <vector>

#include "lattice.hpp"

namespace kfree::sets {

using lat::Point;
using lat::Pt;
using lat::Radius;
using BigInt = boost::multiprecision::cpp_int;

// The k-free universe V(Lambda, k): nonzero points whose k-content is 1.
struct Config {
    lat::Lattice lattice;
    i64 k = 1;
    i64 max_points = lat::kDefaultMaxPoints;
    int threads = 1;

    int n() const { return lattice.n; }
    i64 nk() const { return lattice.n * k; }
};

Config make_config(lat::Lattice lattice, i64 k);

// k-content: largest c with the point in c^k * Lambda; infinite at the
// origin (encoded as nullopt).
std::optional<i64> k_content(const Config& cfg, const Point& x);
std::optional<i64> k_content_of_gcd(i64 g, i64 k);  // nullopt for g == 0

bool is_k_free(const Config& cfg, const Point& x);
bool is_k_free_pt(const Config& cfg, const Pt& x);

// membership in V_P: nonzero and (c_k, P) = 1
bool vp_member(const Config& cfg, const Point& x, i64 P);

std::vector<Point> kfree_points_in_ball(const Config& cfg, const Radius& rho);

// |V cap B_R(0)| * det / (R^n v_n); converges to 1/(zeta(nk) det)
long double density_empirical(const Config& cfg, double R);
i64 kfree_count_in_ball(const Config& cfg, const Radius& R);
long double density_limit(const Config& cfg);

// Theorem criterion: |P / p^k Lambda| < p^{nk} for every prime p.  Primes
// with p^{nk} > |P| cannot fail: the coset count is at most |P| < p^{nk}.
bool admissible(const Config& cfg, const std::vector<Point>& pts);
// smallest violating prime, when inadmissible
std::optional<i64> admissible_witness(const Config& cfg, const std::vector<Point>& pts);

// |{t in B_R(0) : P+t inside V, Q+t outside V}| by direct scan
i64 locator_count(const Config& cfg, const std::vector<Point>& P,
                  const std::vector<Point>& Q, const Radius& R);

// sieve main term (R^n v_n / (m^n det)) prod_{p | Pprod} (1 - |P/p^k|/p^{nk})
long double main_term_vp_count(const Config& cfg, const std::vector<Point>& P, i64 m,
                               i64 Pprod, double R);

// CRT hole: offset a and modulus M = (m_1...m_s)^k such that every
// translate C + x with x == a (mod M Lambda) avoids V entirely.
struct Hole {
    std::vector<BigInt> offset;   // a, reduced into [0, M)
    BigInt modulus;               // M
    std::vector<i64> primes;      // the moduli m_1..m_s (first s primes)
    bool verified = false;        // exact divisibility witnesses checked
    long double center_density = 0.0L;  // 1/(M^n det)
};

Hole find_hole(const Config& cfg, const std::vector<Point>& C);

// Precomputed k-free flags over the integer box covering B_outer(0);
// shared by census scans and pair-correlation counts.
struct KfreeWindow {
    KfreeWindow(const Config& cfg, double outer_radius);

    bool in_box(const Pt& p) const {
        for (int i = 0; i < n; ++i)
            if (p[i] < lo[static_cast<size_t>(i)] || p[i] > hi[static_cast<size_t>(i)])
                return false;
        return true;
    }
    i64 index_of(const Pt& p) const {
        i64 idx = 0;
        for (int i = 0; i < n; ++i)
            idx = idx * dims[static_cast<size_t>(i)] + (p[i] - lo[static_cast<size_t>(i)]);
        return idx;
    }
    bool kfree_at(const Pt& p) const {  // requires in_box(p)
        return flags[static_cast<size_t>(index_of(p))] != 0;
    }

    int n = 0;
    std::array<i64, lat::kMaxDim> lo{}, hi{}, dims{};
    std::vector<uint8_t> flags;
};

}  // namespace kfree::sets

#pragma once

#include <array>
#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "rational.hpp"

namespace kfree::lat {

inline constexpr int kMaxDim = 4;
inline constexpr i64 kDefaultMaxPoints = 1'000'000'000;

// Point of the lattice, coordinates with respect to the lattice basis.
using Point = std::vector<i64>;

// Streamed point for hot scans (no allocation); only the first n entries
// are meaningful.
struct Pt {
    std::array<i64, kMaxDim> c{};
    i64 operator[](int i) const { return c[static_cast<size_t>(i)]; }
    i64& operator[](int i) { return c[static_cast<size_t>(i)]; }
};

// Radius carrying an exact squared value so open-ball membership at
// boundary points like sqrt(2) is decided without rounding.
struct Radius {
    long double value = 0.0L;
    Rational sq;          // exact squared radius when `exact`
    bool exact = false;

    static Radius parse(const std::string& spec);  // "2", "1.5", "3/2", "sqrt2"
    static Radius from_real(double r);             // inexact scan window
    static Radius from_sq(const Rational& rsq);
};

struct Lattice {
    int n = 0;
    std::string name;
    std::vector<long double> basis;   // n*n row-major, rows are basis vectors
    std::vector<long double> gram;    // numeric Gram, gram[i*n+j] = b_i . b_j
    std::vector<Rational> gram_q;     // exact Gram (empty when !gram_exact)
    bool gram_exact = false;
    long double det = 0.0L;           // |det basis|
    long double lambda = 0.0L;        // length of the shortest nonzero vector
    Rational lambda_sq;               // exact when gram_exact

    // integer Gram scaling: gram_q[i][j] == gram_int[i*n+j] / gram_den
    std::vector<i64> gram_int;
    i64 gram_den = 1;

    long double qform(const Pt& x, int dim) const;
    long double norm(const Point& x) const;
};

// Presets: "Z1".."Z4" and "A2" (basis rows (1,0),(1/2,sqrt3/2)).
Lattice make_preset(const std::string& name);
Lattice make_lattice_rational(int n, const std::vector<Rational>& basis_rows,
                              const std::string& name = "");
Lattice make_lattice_real(int n, const std::vector<double>& basis_rows,
                          const std::string& name = "");
// Structured description: {"n":2,"basis":[[1,0],["1/2","0.866..."]],"name":...}
Lattice lattice_from_json(const std::string& text);

// Per-(lattice, center, radius) membership decision.  Exact integer
// comparisons whenever the Gram matrix, the center and the squared radius
// are all rational; otherwise long double with a 1e-9 relative boundary
// band that raises `boundary_warning`.
class BallTester {
public:
    BallTester(const Lattice& lattice, const std::vector<Rational>& center,
               const Radius& radius, bool open = true);

    bool contains(const Pt& x) const;
    // integer bounding box [lo[i], hi[i]] covering the ball
    const std::array<i64, kMaxDim>& lo() const { return lo_; }
    const std::array<i64, kMaxDim>& hi() const { return hi_; }
    i64 box_points() const;
    bool boundary_warning() const { return warning_.load(std::memory_order_relaxed); }
    int dim() const { return n_; }

private:
    const Lattice& lattice_;
    int n_;
    bool open_;
    bool exact_ = false;
    mutable std::atomic<bool> warning_{false};
    // exact path: compare q(dc*x - ci) * rsq_den  <  thr_num  (all integers)
    std::array<i64, kMaxDim> ci_{};
    i64 dc_ = 1;
    i128 thr_num_ = 0;
    i64 rsq_den_ = 1;
    // float path
    std::array<long double, kMaxDim> cf_{};
    long double rsq_f_ = 0.0L;
    std::array<i64, kMaxDim> lo_{};
    std::array<i64, kMaxDim> hi_{};
};

// All lattice points of the open (or closed) ball, canonically ordered
// (lexicographic by coordinates).
std::vector<Point> points_in_ball(const Lattice& lattice,
                                  const std::vector<Rational>& center,
                                  const Radius& radius,
                                  i64 max_points = kDefaultMaxPoints,
                                  bool open = true);

// Streaming scan over the ball; `fn(const Pt&)` is invoked for members.
// With threads > 1 the leading coordinate range is split into contiguous
// chunks handled independently; callers must make their accumulation
// order-independent (integer sums, per-chunk merges).
void scan_ball(const Lattice& lattice, const std::vector<Rational>& center,
               const Radius& radius, i64 max_points, int threads,
               const std::function<void(int chunk, const Pt&)>& fn,
               int* chunks_out = nullptr, bool open = true);

std::vector<Rational> origin(int n);

long double ball_volume_coeff(int n);  // v_n
long double qform_ld(const Lattice& lattice, const Point& x);
long double norm(const Lattice& lattice, const Point& x);

// max pairwise squared distance, exact when the Gram matrix is
Rational diameter_sq(const Lattice& lattice, const std::vector<Point>& pts);
long double diameter(const Lattice& lattice, const std::vector<Point>& pts);

// number of cosets of m*Lambda represented among `pts`
i64 coset_count(const std::vector<Point>& pts, i64 m, int n);

// gcd of coordinates; nullopt encodes the infinite content of the origin
std::optional<i64> content_1(const Point& x);

struct Congruence {
    i64 modulus = 1;  // m_i >= 1
    Point offset;     // p_i:  t + p_i in m_i*Lambda
};
using CongruenceSystem = std::vector<Congruence>;

// Lemma-style solubility: (m_i, m_j) | c(p_i - p_j) for all i < j.
bool congruence_solvable(const Lattice& lattice, const CongruenceSystem& sys);

// The single residue class (t0 mod L*Lambda) solving the system, when it
// exists; L = lcm of the moduli.
std::optional<std::pair<Point, i64>> congruence_solution(const Lattice& lattice,
                                                         const CongruenceSystem& sys);

i64 count_congruence_solutions(const Lattice& lattice, const CongruenceSystem& sys,
                               const std::vector<Rational>& center, const Radius& R,
                               i64 max_points = kDefaultMaxPoints, int threads = 1);

// CRT for pairwise coprime moduli: x == r_i (mod m_i*Lambda) for all i
// iff x == t (mod M*Lambda), M = prod m_i.
std::pair<Point, i64> crt_combine(const std::vector<std::pair<Point, i64>>& residues,
                                  int n);

// dual (reciprocal) lattice: basis = inverse transpose, Gram = inverse Gram
Lattice dual_lattice(const Lattice& lattice);

// The finite group of integer matrices U with U^T G U = G (lattice point
// symmetries), found by backtracking over short vectors; row-major images.
std::vector<std::vector<i64>> point_symmetries(const Lattice& lattice);

}  // namespace kfree::lat

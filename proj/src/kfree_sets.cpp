#include "kfree_sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "numtheory.hpp"

namespace kfree::sets {

namespace {

// p^e saturated at cap+1, no overflow
i64 ipow_capped(i64 p, i64 e, i64 cap) {
    i128 r = 1;
    for (i64 i = 0; i < e; ++i) {
        r *= p;
        if (r > cap) return cap + 1;
    }
    return static_cast<i64>(r);
}

i64 gcd_coords(const Point& x) {
    i64 g = 0;
    for (i64 v : x) g = std::gcd(g, v < 0 ? -v : v);
    return g;
}

i64 gcd_coords_pt(const Pt& x, int n) {
    i64 g = 0;
    for (int i = 0; i < n; ++i) {
        i64 v = x[i];
        g = std::gcd(g, v < 0 ? -v : v);
    }
    return g;
}

// is g free of k-th prime powers?  cheap early-exit variant of the content
bool gcd_is_k_free(i64 g, i64 k) {
    if (g == 0) return false;  // infinite content
    if (k == 1) return g == 1;
    const auto& primes = nt::prime_table(3163);
    i64 rest = g;
    for (i64 p : primes) {
        if (ipow_capped(p, k, rest) > rest) break;
        if (rest % p != 0) continue;
        i64 e = 0;
        while (rest % p == 0) { rest /= p; ++e; }
        if (e >= k) return false;
    }
    if (rest > nt::kFactorizeLimit && ipow_capped(3163, k, rest) <= rest)
        throw resource_error("k-content: coordinate gcd too large for trial division");
    return true;
}

}  // namespace

Config make_config(lat::Lattice lattice, i64 k) {
    if (k < 1) throw domain_error("k must be a positive integer");
    if (lattice.n == 1 && k == 1)
        throw domain_error("n = 1 with k = 1 is excluded (V would be the two unit points)");
    if (k > 60) throw domain_error("k larger than 60 is not supported");
    Config cfg;
    cfg.lattice = std::move(lattice);
    cfg.k = k;
    return cfg;
}

std::optional<i64> k_content_of_gcd(i64 g, i64 k) {
    if (g < 0) g = -g;
    if (g == 0) return std::nullopt;
    if (k == 1) return g;
    i64 content = 1;
    i64 rest = g;
    const auto& primes = nt::prime_table(3163);
    for (i64 p : primes) {
        if (ipow_capped(p, k, rest) > rest) break;
        if (rest % p != 0) continue;
        i64 e = 0;
        while (rest % p == 0) { rest /= p; ++e; }
        content *= ipow_capped(p, e / k, INT64_MAX - 1);
    }
    // any prime left in `rest` beyond the table would need p^k <= rest
    if (rest > nt::kFactorizeLimit && ipow_capped(3163, k, rest) <= rest)
        throw resource_error("k-content: coordinate gcd too large for trial division");
    return content;
}

std::optional<i64> k_content(const Config& cfg, const Point& x) {
    if (static_cast<int>(x.size()) != cfg.n()) throw domain_error("point dimension mismatch");
    return k_content_of_gcd(gcd_coords(x), cfg.k);
}

bool is_k_free(const Config& cfg, const Point& x) {
    if (static_cast<int>(x.size()) != cfg.n()) throw domain_error("point dimension mismatch");
    return gcd_is_k_free(gcd_coords(x), cfg.k);
}

bool is_k_free_pt(const Config& cfg, const Pt& x) {
    return gcd_is_k_free(gcd_coords_pt(x, cfg.n()), cfg.k);
}

bool vp_member(const Config& cfg, const Point& x, i64 P) {
    if (P < 1) throw domain_error("V_P needs P >= 1");
    auto c = k_content(cfg, x);
    if (!c) return false;  // the origin is outside every V_P
    return std::gcd(*c, P) == 1;
}

std::vector<Point> kfree_points_in_ball(const Config& cfg, const Radius& rho) {
    auto pts = lat::points_in_ball(cfg.lattice, lat::origin(cfg.n()), rho, cfg.max_points);
    std::vector<Point> out;
    for (auto& p : pts)
        if (is_k_free(cfg, p)) out.push_back(std::move(p));
    return out;
}

i64 kfree_count_in_ball(const Config& cfg, const Radius& R) {
    std::vector<i64> per(64, 0);
    int chunks = 0;
    lat::scan_ball(cfg.lattice, lat::origin(cfg.n()), R, cfg.max_points, cfg.threads,
                   [&](int c, const Pt& p) {
                       if (is_k_free_pt(cfg, p)) ++per[static_cast<size_t>(c)];
                   },
                   &chunks);
    i64 total = 0;
    for (i64 v : per) total += v;
    return total;
}

long double density_empirical(const Config& cfg, double R) {
    if (!(R > 0)) throw domain_error("window radius must be positive");
    i64 count = kfree_count_in_ball(cfg, Radius::from_real(R));
    long double vol = powl(static_cast<long double>(R), cfg.n()) *
                      lat::ball_volume_coeff(cfg.n());
    return count * cfg.lattice.det / vol;
}

long double density_limit(const Config& cfg) {
    return 1.0L / (nt::zeta(static_cast<long double>(cfg.nk())) * cfg.lattice.det);
}

std::optional<i64> admissible_witness(const Config& cfg, const std::vector<Point>& pts) {
    i64 size = static_cast<i64>(pts.size());
    if (size == 0) return std::nullopt;
    for (i64 p : nt::prime_table(64)) {
        if (ipow_capped(p, cfg.nk(), size) > size) break;
        i64 pk = ipow_capped(p, cfg.k, INT64_MAX - 1);
        i64 pnk = ipow_capped(p, cfg.nk(), INT64_MAX - 1);
        if (lat::coset_count(pts, pk, cfg.n()) >= pnk) return p;
    }
    return std::nullopt;
}

bool admissible(const Config& cfg, const std::vector<Point>& pts) {
    return !admissible_witness(cfg, pts).has_value();
}

i64 locator_count(const Config& cfg, const std::vector<Point>& P,
                  const std::vector<Point>& Q, const Radius& R) {
    for (const auto& p : P)
        for (const auto& q : Q)
            if (p == q) throw domain_error("locator sets P and Q must be disjoint");
    int n = cfg.n();
    std::vector<i64> per(64, 0);
    lat::scan_ball(cfg.lattice, lat::origin(n), R, cfg.max_points, cfg.threads,
                   [&](int c, const Pt& t) {
                       Pt shifted;
                       for (const auto& p : P) {
                           for (int i = 0; i < n; ++i)
                               shifted[i] = t[i] + p[static_cast<size_t>(i)];
                           if (!is_k_free_pt(cfg, shifted)) return;
                       }
                       for (const auto& q : Q) {
                           for (int i = 0; i < n; ++i)
                               shifted[i] = t[i] + q[static_cast<size_t>(i)];
                           if (is_k_free_pt(cfg, shifted)) return;
                       }
                       ++per[static_cast<size_t>(c)];
                   });
    i64 total = 0;
    for (i64 v : per) total += v;
    return total;
}

long double main_term_vp_count(const Config& cfg, const std::vector<Point>& P, i64 m,
                               i64 Pprod, double R) {
    if (m < 1 || Pprod < 1) throw domain_error("moduli must be positive");
    if (std::gcd(m, Pprod) != 1) throw domain_error("m must be coprime to the sieve product");
    if (!(R > 0)) throw domain_error("window radius must be positive");
    long double term = powl(static_cast<long double>(R), cfg.n()) *
                       lat::ball_volume_coeff(cfg.n()) /
                       (powl(static_cast<long double>(m), cfg.n()) * cfg.lattice.det);
    for (auto [p, e] : nt::factorize(Pprod)) {
        i64 pk = ipow_capped(p, cfg.k, INT64_MAX - 1);
        i64 cosets = P.empty() ? 0 : lat::coset_count(P, pk, cfg.n());
        term *= 1.0L - cosets / powl(static_cast<long double>(p),
                                     static_cast<long double>(cfg.nk()));
    }
    return term;
}

namespace {

BigInt big_pow(i64 base, i64 exp) {
    BigInt r = 1;
    for (i64 i = 0; i < exp; ++i) r *= base;
    return r;
}

// CRT over pairwise coprime big moduli: x == r_i (mod m_i), incremental
void big_crt_merge(BigInt& rep, BigInt& mod, const BigInt& want, const BigInt& m) {
    // rep + mod * t == want (mod m)  =>  t == (want - rep) * mod^{-1} (mod m)
    BigInt a = mod % m, b = m;
    // extended gcd for the modular inverse of `mod`
    BigInt x0 = 1, x1 = 0, r0 = a, r1 = b;
    while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        r0 = r1; r1 = r2;
        BigInt x2 = x0 - q * x1;
        x0 = x1; x1 = x2;
    }
    if (r0 != 1) throw internal_error("hole CRT moduli not coprime");
    BigInt inv = x0 % m;
    if (inv < 0) inv += m;
    BigInt diff = (want - rep) % m;
    if (diff < 0) diff += m;
    BigInt t = diff * inv % m;
    rep += mod * t;
    mod *= m;
    rep %= mod;
    if (rep < 0) rep += mod;
}

}  // namespace

KfreeWindow::KfreeWindow(const Config& cfg, double outer_radius) : n(cfg.n()) {
    lat::BallTester box(cfg.lattice, lat::origin(n), Radius::from_real(outer_radius));
    lo = box.lo();
    hi = box.hi();
    i64 cells = 1;
    for (int i = 0; i < n; ++i) {
        dims[static_cast<size_t>(i)] = hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)] + 1;
        cells *= dims[static_cast<size_t>(i)];
        if (cells > cfg.max_points)
            throw resource_error("window needs " + std::to_string(cells) +
                                 " cells; cap is " + std::to_string(cfg.max_points));
    }
    flags.assign(static_cast<size_t>(cells), 0);
    std::function<void(int, Pt&)> fill = [&](int d, Pt& p) {
        if (d == n) {
            flags[static_cast<size_t>(index_of(p))] = is_k_free_pt(cfg, p) ? 1 : 0;
            return;
        }
        for (i64 v = lo[static_cast<size_t>(d)]; v <= hi[static_cast<size_t>(d)]; ++v) {
            p[d] = v;
            fill(d + 1, p);
        }
    };
    Pt p;
    fill(0, p);
}

Hole find_hole(const Config& cfg, const std::vector<Point>& C) {
    if (C.empty()) throw domain_error("hole construction needs a non-empty configuration");
    int n = cfg.n();
    size_t s = C.size();
    // deterministic choice: the first s primes
    std::vector<i64> primes;
    for (i64 bound = 64;; bound *= 2) {
        const auto& tab = nt::prime_table(bound);
        if (tab.size() >= s) {
            primes.assign(tab.begin(), tab.begin() + static_cast<long>(s));
            break;
        }
    }

    Hole hole;
    hole.primes = primes;
    std::vector<BigInt> rep(static_cast<size_t>(n), 0);
    BigInt mod = 1;
    for (size_t i = 0; i < s; ++i) {
        BigInt mk = big_pow(primes[i], cfg.k);
        // coordinatewise merge; all coordinates share the modulus mk
        BigInt new_mod = mod;
        for (int c = 0; c < n; ++c) {
            BigInt want = (-BigInt(C[i][static_cast<size_t>(c)])) % mk;
            if (want < 0) want += mk;
            BigInt r = rep[static_cast<size_t>(c)];
            BigInt m = mod;
            big_crt_merge(r, m, want, mk);
            rep[static_cast<size_t>(c)] = r;
            new_mod = m;
        }
        mod = new_mod;
    }
    hole.offset = rep;
    hole.modulus = mod;

    // exact witness check: every translated point sits in m_i^k Lambda,
    // so its k-content is divisible by m_i (or the point is the origin);
    // either way it is not k-free
    hole.verified = true;
    for (size_t i = 0; i < s; ++i) {
        BigInt mk = big_pow(primes[i], cfg.k);
        for (int c = 0; c < n; ++c) {
            BigInt coord = rep[static_cast<size_t>(c)] + C[i][static_cast<size_t>(c)];
            if (coord % mk != 0) hole.verified = false;
        }
    }

    long double mn = powl(mod.convert_to<long double>(), static_cast<long double>(n));
    hole.center_density = 1.0L / (mn * cfg.lattice.det);
    return hole;
}

}  // namespace kfree::sets

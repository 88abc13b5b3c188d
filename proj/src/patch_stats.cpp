#include "patch_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "numtheory.hpp"

namespace kfree::patch {

namespace {

i64 ipow_capped(i64 p, i64 e, i64 cap) {
    i128 r = 1;
    for (i64 i = 0; i < e; ++i) {
        r *= p;
        if (r > cap) return cap + 1;
    }
    return static_cast<i64>(r);
}

// memoized Euler products keyed by (s, generic_r, overrides); the census
// machinery asks for the same handful of signatures over and over
nt::EulerProductValue cached_product(i64 s, i64 generic_r,
                                     const std::vector<std::pair<i64, i64>>& overrides) {
    using Key = std::tuple<i64, i64, std::vector<std::pair<i64, i64>>>;
    static std::map<Key, nt::EulerProductValue> memo;
    static std::mutex mu;
    Key key{s, generic_r, overrides};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    std::map<i64, i64> ov(overrides.begin(), overrides.end());
    auto value = nt::euler_product(static_cast<long double>(s), generic_r, ov);
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(std::move(key), value);
    return value;
}

// product over all primes of (1 - |S/p^k|/p^{nk}) for a finite S
nt::EulerProductValue set_product(const Config& cfg, const std::vector<Point>& S) {
    i64 r = static_cast<i64>(S.size());
    if (r == 0) return {1.0L, 0.0L};
    i64 nk = cfg.nk();
    std::vector<std::pair<i64, i64>> overrides;
    // exceptional primes: exact coset counts wherever the generic count
    // |S| is not yet forced, i.e. p^{nk} <= |S| or p^k lambda <= D(S).
    // The scale test carries a relative margin; admitting an extra prime
    // only swaps a forced count for the same exact count.
    long double dsq = 0.0L;
    if (S.size() > 1) {
        long double d = lat::diameter(cfg.lattice, S);
        dsq = d * d;
    }
    long double lsq = cfg.lattice.lambda * cfg.lattice.lambda;
    for (i64 p : nt::prime_table(4096)) {
        bool small_power = ipow_capped(p, nk, r) <= r;
        bool small_scale =
            S.size() > 1 &&
            powl(static_cast<long double>(p), 2.0L * static_cast<long double>(cfg.k)) * lsq <=
                dsq * (1.0L + 1e-9L);
        if (!small_power && !small_scale) break;  // primes are ascending
        i64 pk = ipow_capped(p, cfg.k, INT64_MAX / 2 - 1);
        overrides.emplace_back(p, lat::coset_count(S, pk, cfg.n()));
    }
    return cached_product(nk, r, overrides);
}

struct BallAdmissibility {
    int B = 0;
    std::vector<i64> primes;              // p with p^{nk} <= B
    std::vector<i64> totals;              // p^{nk}
    std::vector<std::vector<int>> coset;  // [prime][ball point] -> coset id

    BallAdmissibility(const Config& cfg, const std::vector<Point>& ball) {
        B = static_cast<int>(ball.size());
        for (i64 p : nt::prime_table(64)) {
            if (ipow_capped(p, cfg.nk(), B) > B) break;
            i64 pk = ipow_capped(p, cfg.k, INT64_MAX / 2 - 1);
            i64 pnk = ipow_capped(p, cfg.nk(), INT64_MAX / 2 - 1);
            primes.push_back(p);
            totals.push_back(pnk);
            std::vector<int> ids(ball.size());
            std::map<std::vector<i64>, int> seen;
            for (size_t i = 0; i < ball.size(); ++i) {
                std::vector<i64> residue(static_cast<size_t>(cfg.n()));
                for (int c = 0; c < cfg.n(); ++c) {
                    i64 v = ball[i][static_cast<size_t>(c)] % pk;
                    if (v < 0) v += pk;
                    residue[static_cast<size_t>(c)] = v;
                }
                auto [it, fresh] = seen.emplace(residue, static_cast<int>(seen.size()));
                ids[i] = it->second;
            }
            coset.push_back(std::move(ids));
        }
    }

    bool admissible(u64 mask) const {
        for (size_t pi = 0; pi < primes.size(); ++pi) {
            if (static_cast<i64>(__builtin_popcountll(mask)) < totals[pi]) continue;
            u64 seen = 0;
            u64 m = mask;
            while (m) {
                int bit = __builtin_ctzll(m);
                m &= m - 1;
                seen |= u64{1} << coset[pi][static_cast<size_t>(bit)];
            }
            if (static_cast<i64>(__builtin_popcountll(seen)) >= totals[pi]) return false;
        }
        return true;
    }
};

std::vector<Point> ball_of(const Config& cfg, const Radius& rho) {
    return lat::points_in_ball(cfg.lattice, lat::origin(cfg.n()), rho, cfg.max_points);
}

std::vector<Point> subset_of(const std::vector<Point>& ball, u64 mask) {
    std::vector<Point> out;
    u64 m = mask;
    while (m) {
        int bit = __builtin_ctzll(m);
        m &= m - 1;
        out.push_back(ball[static_cast<size_t>(bit)]);
    }
    return out;
}

// canonical row order: |P| descending, then lexicographic point list
bool row_order(const std::vector<Point>& a, const std::vector<Point>& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
}

long double scale_volume(const Config& cfg, const Radius& rho) {
    return powl(rho.value, static_cast<long double>(cfg.n())) *
           lat::ball_volume_coeff(cfg.n()) * cfg.lattice.det;
}

}  // namespace

Patch patch_at(const Config& cfg, const Point& t, const Radius& rho) {
    Patch out;
    out.rho = rho;
    auto ball = ball_of(cfg, rho);
    for (const auto& o : ball) {
        Point x(static_cast<size_t>(cfg.n()));
        for (int i = 0; i < cfg.n(); ++i)
            x[static_cast<size_t>(i)] = t[static_cast<size_t>(i)] + o[static_cast<size_t>(i)];
        if (sets::is_k_free(cfg, x))
            out.occupied.push_back(o);
        else
            out.forbidden.push_back(o);
    }
    return out;
}

FrequencyValue patch_frequency(const Config& cfg, const std::vector<Point>& P,
                               const std::vector<Point>& Q) {
    for (const auto& p : P)
        for (const auto& q : Q)
            if (p == q) throw domain_error("patch sets P and Q must be disjoint");
    if (static_cast<int>(Q.size()) > kMaxForbidden)
        throw resource_error("inclusion-exclusion over " + std::to_string(Q.size()) +
                             " forbidden points exceeds the 2^" +
                             std::to_string(kMaxForbidden) + " cap");
    long double total = 0.0L;
    long double err = 0.0L;
    u64 qn = Q.size();
    for (u64 fmask = 0; fmask < (u64{1} << qn); ++fmask) {
        std::vector<Point> S = P;
        u64 m = fmask;
        while (m) {
            int bit = __builtin_ctzll(m);
            m &= m - 1;
            S.push_back(Q[static_cast<size_t>(bit)]);
        }
        auto prod = set_product(cfg, S);
        int sign = __builtin_popcountll(fmask) % 2 == 0 ? 1 : -1;
        total += sign * prod.value;
        err += prod.tail_bound;
    }
    total /= cfg.lattice.det;
    err /= cfg.lattice.det;
    err += 1e-17L * static_cast<long double>(u64{1} << qn);
    FrequencyValue out;
    if (total < 0.0L) {  // cancellation noise around an exact zero
        err += -total;
        total = 0.0L;
    }
    out.value = total;
    out.error_bound = err;
    return out;
}

i64 n_rho_exact(const Config& cfg, const Radius& rho) {
    auto ball = ball_of(cfg, rho);
    int B = static_cast<int>(ball.size());
    if (B > kMaxBallForCount)
        throw resource_error("ball has " + std::to_string(B) +
                             " points; the subset census is capped at " +
                             std::to_string(kMaxBallForCount));
    BallAdmissibility adm(cfg, ball);
    i64 count = 0;
    for (u64 mask = 0; mask < (u64{1} << B); ++mask)
        if (adm.admissible(mask)) ++count;
    return count;
}

Census patch_census(const Config& cfg, const Radius& rho, double R) {
    if (!(R > rho.value)) throw domain_error("census needs R > rho");
    auto ball = ball_of(cfg, rho);
    int B = static_cast<int>(ball.size());
    if (B > kMaxBallForCensus)
        throw resource_error("ball has " + std::to_string(B) +
                             " points; the closed-form census is capped at " +
                             std::to_string(kMaxBallForCensus) +
                             " (cost grows as 3^|ball|)");
    if (B >= 63) throw resource_error("ball too large for mask arithmetic");

    // k-free flags over the box of B_{R+rho}; membership in V is
    // window-independent, so the whole box is filled
    sets::KfreeWindow win(cfg, R + static_cast<double>(rho.value) + 1.0);

    // scan t over B_R, accumulate patch masks per chunk
    int max_chunks = std::max(1, cfg.threads);
    std::vector<std::vector<i64>> per(static_cast<size_t>(max_chunks),
                                      std::vector<i64>(u64{1} << B, 0));
    std::vector<i64> scanned_per(static_cast<size_t>(max_chunks), 0);
    lat::scan_ball(cfg.lattice, lat::origin(cfg.n()), Radius::from_real(R), cfg.max_points,
                   cfg.threads, [&](int chunk, const lat::Pt& t) {
                       u64 mask = 0;
                       for (int b = 0; b < B; ++b) {
                           lat::Pt x;
                           for (int i = 0; i < cfg.n(); ++i)
                               x[i] = t[i] + ball[static_cast<size_t>(b)][static_cast<size_t>(i)];
                           if (win.kfree_at(x)) mask |= u64{1} << b;
                       }
                       ++per[static_cast<size_t>(chunk)][mask];
                       ++scanned_per[static_cast<size_t>(chunk)];
                   });
    std::vector<i64> counts(u64{1} << B, 0);
    i64 scanned = 0;
    for (int c = 0; c < max_chunks; ++c) {
        for (u64 m = 0; m < (u64{1} << B); ++m) counts[m] += per[static_cast<size_t>(c)][m];
        scanned += scanned_per[static_cast<size_t>(c)];
    }

    BallAdmissibility adm(cfg, ball);
    long double window_vol = powl(static_cast<long double>(R),
                                  static_cast<long double>(cfg.n())) *
                             lat::ball_volume_coeff(cfg.n());
    Census census;
    census.rho = rho;
    census.R = R;
    census.ball = ball;
    census.scanned = scanned;
    for (u64 mask = 0; mask < (u64{1} << B); ++mask) {
        bool ok = adm.admissible(mask);
        if (!ok) {
            if (counts[mask] != 0)
                throw internal_error("observed patch fails the admissibility criterion");
            continue;
        }
        ++census.n_rho;
        CensusRow row;
        row.occupied = subset_of(ball, mask);
        std::vector<Point> forbidden;
        for (int b = 0; b < B; ++b)
            if (!(mask >> b & 1)) forbidden.push_back(ball[static_cast<size_t>(b)]);
        row.closed = patch_frequency(cfg, row.occupied, forbidden);
        row.count = counts[mask];
        row.observed = row.count > 0;
        row.empirical = row.count * cfg.lattice.det / window_vol;
        census.rows.push_back(std::move(row));
    }
    std::sort(census.rows.begin(), census.rows.end(),
              [](const CensusRow& a, const CensusRow& b) {
                  return row_order(a.occupied, b.occupied);
              });
    return census;
}

CensusChecks census_checks(const Config& cfg, const Census& census) {
    CensusChecks out;
    for (const auto& row : census.rows) {
        out.sum_nu += row.closed.value;
        out.sum_bound += row.closed.error_bound;
        out.mean_size += row.closed.value * static_cast<long double>(row.occupied.size());
        out.mean_bound += row.closed.error_bound * static_cast<long double>(census.ball.size());
    }
    out.sum_target = 1.0L / cfg.lattice.det;
    out.mean_target = static_cast<long double>(census.ball.size()) /
                      (nt::zeta(static_cast<long double>(cfg.nk())) * cfg.lattice.det);
    out.sum_residual = fabsl(out.sum_nu - out.sum_target);
    out.mean_residual = fabsl(out.mean_size - out.mean_target);
    out.sum_bound += 1e-14L;
    out.mean_bound += 1e-14L;
    out.pass = out.sum_residual <= out.sum_bound && out.mean_residual <= out.mean_bound;
    return out;
}

long double entropy_patch_counting(const Config& cfg, const Radius& rho) {
    i64 n = n_rho_exact(cfg, rho);
    return log2l(static_cast<long double>(n)) / scale_volume(cfg, rho);
}

long double entropy_measure(const Config& cfg, const Radius& rho) {
    auto ball = ball_of(cfg, rho);
    int B = static_cast<int>(ball.size());
    if (B > kMaxBallForCensus)
        throw resource_error("measure-entropy estimate capped at ball size " +
                             std::to_string(kMaxBallForCensus));
    BallAdmissibility adm(cfg, ball);
    long double sum = 0.0L;
    for (u64 mask = 0; mask < (u64{1} << B); ++mask) {
        if (!adm.admissible(mask)) continue;
        auto P = subset_of(ball, mask);
        std::vector<Point> Q;
        for (int b = 0; b < B; ++b)
            if (!(mask >> b & 1)) Q.push_back(ball[static_cast<size_t>(b)]);
        auto nu = patch_frequency(cfg, P, Q).value;
        if (nu > 0.0L) sum += -nu * log2l(nu);
    }
    return sum / scale_volume(cfg, rho);
}

std::vector<SymmetryClass> symmetry_classes(const Config& cfg, const Census& census) {
    auto syms = lat::point_symmetries(cfg.lattice);
    int n = cfg.n();
    auto apply = [&](const std::vector<i64>& m, const std::vector<Point>& pts) {
        std::vector<Point> out;
        for (const auto& x : pts) {
            Point y(static_cast<size_t>(n), 0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    y[static_cast<size_t>(i)] +=
                        m[static_cast<size_t>(i * n + j)] * x[static_cast<size_t>(j)];
            out.push_back(std::move(y));
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    std::map<std::vector<Point>, size_t> row_of;
    for (size_t i = 0; i < census.rows.size(); ++i)
        row_of[census.rows[i].occupied] = i;
    std::vector<bool> used(census.rows.size(), false);
    std::vector<SymmetryClass> classes;
    for (size_t i = 0; i < census.rows.size(); ++i) {
        if (used[i]) continue;
        SymmetryClass cls;
        cls.representative = census.rows[i].occupied;
        cls.closed = census.rows[i].closed;
        for (const auto& sym : syms) {
            auto image = apply(sym, census.rows[i].occupied);
            auto it = row_of.find(image);
            if (it == row_of.end())
                throw internal_error("symmetry image of a patch is not in the census");
            if (!used[it->second]) {
                used[it->second] = true;
                ++cls.multiplicity;
                cls.count += census.rows[it->second].count;
            }
        }
        classes.push_back(std::move(cls));
    }
    return classes;
}

std::string format_points(const std::vector<Point>& pts) {
    std::string out = "{";
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i) out += ",";
        out += "(";
        for (size_t c = 0; c < pts[i].size(); ++c) {
            if (c) out += ",";
            out += std::to_string(pts[i][c]);
        }
        out += ")";
    }
    out += "}";
    return out;
}

namespace {

std::string fixed(long double v, int digits) { return format_real(v, digits); }

std::string sci(long double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3Le", v);
    return buf;
}

}  // namespace

std::string render_census_table(const Config& cfg, const Census& census) {
    std::ostringstream os;
    os << "# kfree census schema=1\n";
    os << "# lattice=" << (cfg.lattice.name.empty() ? "custom" : cfg.lattice.name)
       << " k=" << cfg.k << " rho=" << fixed(census.rho.value, 6) << " R=" << census.R
       << " ball=" << census.ball.size() << " N_rho=" << census.n_rho
       << " scanned=" << census.scanned << "\n";
    os << "# columns: patch |P| nu_closed err_bound count nu_empirical flag\n";
    for (const auto& row : census.rows) {
        os << format_points(row.occupied) << "\t" << row.occupied.size() << "\t"
           << fixed(row.closed.value, 12) << "\t" << sci(row.closed.error_bound) << "\t"
           << row.count << "\t" << fixed(row.empirical, 12) << "\t"
           << (row.observed ? "ok" : "unobserved") << "\n";
    }
    auto checks = census_checks(cfg, census);
    os << "# checks: sum_nu=" << fixed(checks.sum_nu, 12)
       << " target=" << fixed(checks.sum_target, 12)
       << " residual=" << sci(checks.sum_residual) << " bound=" << sci(checks.sum_bound)
       << "\n";
    os << "# checks: mean_size=" << fixed(checks.mean_size, 12)
       << " target=" << fixed(checks.mean_target, 12)
       << " residual=" << sci(checks.mean_residual) << " bound=" << sci(checks.mean_bound)
       << "\n";
    os << "# checks: pass=" << (checks.pass ? "yes" : "no") << "\n";
    return os.str();
}

std::string render_census_json(const Config& cfg, const Census& census) {
    nlohmann::json j;
    j["schema"] = "kfree.census/1";
    j["lattice"] = cfg.lattice.name.empty() ? "custom" : cfg.lattice.name;
    j["k"] = cfg.k;
    j["rho"] = static_cast<double>(census.rho.value);
    j["R"] = census.R;
    j["n_rho"] = census.n_rho;
    j["scanned"] = census.scanned;
    j["ball"] = nlohmann::json::array();
    for (const auto& p : census.ball) j["ball"].push_back(p);
    j["rows"] = nlohmann::json::array();
    for (const auto& row : census.rows) {
        nlohmann::json r;
        r["points"] = row.occupied;
        r["size"] = row.occupied.size();
        r["nu_closed"] = static_cast<double>(row.closed.value);
        r["error_bound"] = static_cast<double>(row.closed.error_bound);
        r["count"] = row.count;
        r["nu_empirical"] = static_cast<double>(row.empirical);
        r["observed"] = row.observed;
        j["rows"].push_back(std::move(r));
    }
    auto checks = census_checks(cfg, census);
    j["checks"] = {{"sum_nu", static_cast<double>(checks.sum_nu)},
                   {"sum_target", static_cast<double>(checks.sum_target)},
                   {"sum_residual", static_cast<double>(checks.sum_residual)},
                   {"sum_bound", static_cast<double>(checks.sum_bound)},
                   {"mean_size", static_cast<double>(checks.mean_size)},
                   {"mean_target", static_cast<double>(checks.mean_target)},
                   {"mean_residual", static_cast<double>(checks.mean_residual)},
                   {"mean_bound", static_cast<double>(checks.mean_bound)},
                   {"pass", checks.pass}};
    return j.dump(2) + "\n";
}

}  // namespace kfree::patch

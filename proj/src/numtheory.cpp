#include "numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>

namespace kfree {

std::string format_real(long double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*Lf", digits, x);
    return buf;
}

}  // namespace kfree

namespace kfree::nt {

std::vector<i64> primes_up_to(i64 n) {
    std::vector<i64> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<size_t>(n) + 1, false);
    for (i64 p = 2; p <= n; ++p) {
        if (composite[static_cast<size_t>(p)]) continue;
        out.push_back(p);
        for (i64 q = p * p; q <= n; q += p) composite[static_cast<size_t>(q)] = true;
    }
    return out;
}

const std::vector<i64>& prime_table(i64 n) {
    static std::vector<i64> table = primes_up_to(4096);
    static i64 limit = 4096;
    static std::mutex mu;
    if (n <= limit) return table;
    std::lock_guard<std::mutex> lock(mu);
    if (n > limit) {
        i64 next = std::max<i64>(n, limit * 2);
        table = primes_up_to(next);
        limit = next;
    }
    return table;
}

Factorization factorize(i64 m) {
    if (m < 1) throw domain_error("factorize: input must be >= 1");
    if (m > kFactorizeLimit)
        throw resource_error("factorize: input exceeds the 10^7 trial-division limit");
    Factorization out;
    i64 rest = m;
    const auto& primes = prime_table(3163);  // covers sqrt(10^7)
    for (i64 p : primes) {
        if (p * p > rest) break;
        if (rest % p != 0) continue;
        int e = 0;
        while (rest % p == 0) { rest /= p; ++e; }
        out.emplace_back(p, e);
    }
    if (rest > 1) out.emplace_back(rest, 1);
    return out;
}

int moebius(i64 m) {
    auto f = factorize(m);
    for (const auto& [p, e] : f)
        if (e > 1) return 0;
    return f.size() % 2 == 0 ? 1 : -1;
}

bool is_squarefree(i64 m) { return moebius(m) != 0; }

bool is_r_free(i64 m, int r) {
    for (const auto& [p, e] : factorize(m))
        if (e >= r) return false;
    return true;
}

i64 squarefree_kernel(i64 m) {
    i64 k = 1;
    for (const auto& [p, e] : factorize(m)) k *= p;
    return k;
}

namespace {

i64 binomial(i64 n, i64 k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    i64 r = 1;
    for (i64 i = 1; i <= k; ++i) {
        r = checked_mul(r, n - k + i);
        r /= i;
    }
    return r;
}

}  // namespace

i64 tau_r(i64 m, int r) {
    if (r < 2) throw domain_error("tau_r: r must be >= 2");
    i64 out = 1;
    for (const auto& [p, e] : factorize(m))
        out = checked_mul(out, binomial(e + r - 1, r - 1));
    return out;
}

i64 tau(i64 m) { return tau_r(m, 2); }

long double zeta(long double s) {
    if (!(s > 1.0L)) throw domain_error("zeta: defined here for real s > 1 only");
    // Euler-Maclaurin: partial sum to N, integral + half term, then
    // B_2..B_12 corrections.  N = 32 keeps every correction term tiny for
    // all s > 1 at long double precision.
    constexpr int N = 32;
    static const long double bern[6] = {
        1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66, -691.0L / 2730};
    long double sum = 0.0L;
    for (int m = 1; m < N; ++m) sum += powl(static_cast<long double>(m), -s);
    long double nps = powl(static_cast<long double>(N), -s);
    sum += nps * N / (s - 1.0L);  // N^{1-s}/(s-1)
    sum += nps / 2.0L;
    // correction term k: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-(s+2k-1)}
    long double rising = s;
    long double factorial = 2.0L;  // (2k)!
    long double np = nps / N;      // N^{-(s+2k-1)}
    for (int k = 1; k <= 6; ++k) {
        sum += bern[k - 1] / factorial * rising * np;
        rising *= (s + 2 * k - 1) * (s + 2 * k);
        factorial *= (2 * k + 1) * (2 * k + 2);
        np /= static_cast<long double>(N) * N;
    }
    return sum;
}

long double prime_zeta(long double s) {
    if (!(s > 1.0L)) throw domain_error("prime_zeta: defined for real s > 1 only");
    long double sum = 0.0L;
    for (int j = 1;; ++j) {
        long double js = j * s;
        if (js > 11400.0L) break;  // zeta(js) == 1 at long double precision
        int mu = moebius(j);
        if (mu == 0) continue;
        long double term = mu / static_cast<long double>(j) * logl(zeta(js));
        sum += term;
        if (j > 1 && fabsl(term) < 1e-16L * fabsl(sum)) break;
        if (fabsl(term) < 1e-300L) break;
    }
    return sum;
}

namespace {

// sum_{p > cutoff} p^-t  ==  P(t) minus the small primes, plus a crude upper
// bound used for remainder certificates.  Memoized: the patch machinery
// evaluates the same (t, cutoff) pairs thousands of times.
long double prime_zeta_above(long double t, i64 cutoff, const std::vector<i64>& primes) {
    static std::map<std::pair<long double, i64>, long double> memo;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find({t, cutoff});
        if (it != memo.end()) return it->second;
    }
    long double v = prime_zeta(t);
    for (i64 p : primes) {
        if (p > cutoff) break;
        v -= powl(static_cast<long double>(p), -t);
    }
    v = std::max(v, 0.0L);
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(std::make_pair(t, cutoff), v);
    return v;
}

long double prime_zeta_above_bound(long double t, i64 cutoff) {
    // sum_{m > cutoff} m^-t < cutoff^{1-t}/(t-1)
    return powl(static_cast<long double>(cutoff), 1.0L - t) / (t - 1.0L);
}

}  // namespace

EulerProductValue euler_product(long double s, i64 generic_r,
                                const std::map<i64, i64>& overrides, i64 cutoff) {
    if (!(s > 1.0L)) throw domain_error("euler_product: requires s > 1");
    if (generic_r < 0) throw domain_error("euler_product: negative factor count");
    for (const auto& [p, rp] : overrides)
        cutoff = std::max(cutoff, p);
    // every non-override prime must satisfy p^s > generic_r; push the cutoff
    // past generic_r^(1/s) so the tail expansion converges with room
    while (powl(static_cast<long double>(cutoff), s) < 4.0L * generic_r) cutoff *= 2;
    const auto& primes = prime_table(cutoff);

    long double value = 1.0L;
    bool zero = false;
    long ops = 0;
    for (i64 p : primes) {
        if (p > cutoff) break;
        auto it = overrides.find(p);
        i64 rp = it != overrides.end() ? it->second : generic_r;
        if (rp == 0) continue;
        // integer s: decide the boundary cases r_p >= p^s exactly
        if (s == floorl(s) && s <= 62.0L) {
            i128 ipow = 1;
            bool overflow = false;
            for (int e = 0; e < static_cast<int>(s); ++e) {
                ipow *= p;
                if (ipow > static_cast<i128>(4e18)) { overflow = true; break; }
            }
            if (!overflow) {
                if (rp == static_cast<i64>(ipow)) { zero = true; continue; }
                if (rp > static_cast<i64>(ipow))
                    throw domain_error("euler_product: coset count exceeds p^s at p=" +
                                       std::to_string(p));
            }
        }
        long double factor = 1.0L - rp / powl(static_cast<long double>(p), s);
        if (factor == 0.0L) { zero = true; continue; }
        if (factor < 0.0L)
            throw domain_error("euler_product: factor (1 - r/p^s) negative at p=" +
                               std::to_string(p));
        value *= factor;
        ++ops;
    }
    if (zero) return {0.0L, 0.0L};

    // tail over p > cutoff with the generic count
    long double log_tail = 0.0L;
    long double trunc = 0.0L;
    if (generic_r > 0) {
        long double ratio = generic_r * powl(static_cast<long double>(cutoff), -s);
        long double g = 1.0L;  // generic_r^j
        int j = 1;
        for (;; ++j) {
            g *= generic_r;
            long double term_bound = g / j * prime_zeta_above_bound(j * s, cutoff);
            if (term_bound < 1e-24L || j > 400) {
                // geometric remainder for everything past j
                trunc = term_bound / (1.0L - ratio);
                break;
            }
            log_tail -= g / j * prime_zeta_above(j * s, cutoff, primes);
            ++ops;
        }
    }
    value *= expl(log_tail);

    EulerProductValue out;
    out.value = value;
    // truncation certificate plus a conservative rounding allowance
    out.tail_bound = fabsl(value) * (expm1l(trunc) + 1e-16L * (ops + 16));
    return out;
}

EulerProductValue pi_r(i64 r, long double s) {
    if (!(s > 1.0L)) throw domain_error("pi_r: requires s > 1");
    if (r < 0) throw domain_error("pi_r: requires r >= 0");
    if (r == 0) return {1.0L, 0.0L};
    // primes with p^s <= r fall below the product's cutoff and contribute
    // factor 1; drop them via zero overrides
    std::map<i64, i64> skip;
    for (i64 p : prime_table(64)) {
        if (powl(static_cast<long double>(p), s) <= static_cast<long double>(r))
            skip[p] = 0;
        else
            break;
    }
    return euler_product(s, r, skip);
}

EulerProductValue xi(long double s) {
    if (!(s > 1.0L)) throw domain_error("xi: requires s > 1");
    return euler_product(s, 2);
}

}  // namespace kfree::nt

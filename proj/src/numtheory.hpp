#pragma once

#include <map>
#include <utility>
#include <vector>

#include "common.hpp"

namespace kfree::nt {

// Largest input accepted by factorize(); contents of lattice points inside
// any ball this library can scan stay far below it.
inline constexpr i64 kFactorizeLimit = 10'000'000;

// Prime/exponent pairs, primes strictly increasing, exponents >= 1.
using Factorization = std::vector<std::pair<i64, int>>;

std::vector<i64> primes_up_to(i64 n);

// Shared ascending prime table covering at least [2, n]; grown on demand,
// immutable between growths, safe for concurrent readers.
const std::vector<i64>& prime_table(i64 n);

Factorization factorize(i64 m);
int moebius(i64 m);
bool is_squarefree(i64 m);
bool is_r_free(i64 m, int r);       // no prime power p^r divides m
i64 squarefree_kernel(i64 m);       // product of the distinct primes of m

// Number of ordered r-tuples of positive integers with product m,
// multiplicative with tau_r(p^e) = C(e+r-1, r-1).
i64 tau_r(i64 m, int r);
i64 tau(i64 m);

// Riemann zeta for real s > 1, Euler-Maclaurin, ~18 significant digits.
long double zeta(long double s);

// Prime zeta P(s) = sum_p p^-s for real s > 1, via
// P(s) = sum_{j>=1} mu(j)/j log zeta(js).
long double prime_zeta(long double s);

// Value of a truncated-and-certified Euler product: the absolute error of
// `value` against the untruncated product is at most `tail_bound`.
struct EulerProductValue {
    long double value = 1.0L;
    long double tail_bound = 0.0L;
};

// prod over ALL primes of (1 - r_p/p^s), where r_p = generic_r except for
// the finitely many primes listed in `overrides`.  Factors for p <= cutoff
// are evaluated directly; the rest are folded in through
//   log prod_{p>cutoff} (1 - g/p^s) = -sum_{j>=1} (g^j/j) P_{>cutoff}(j s),
// truncated with an explicit geometric remainder that lands in tail_bound.
// Returns exact 0 when some factor vanishes; throws domain_error when a
// factor is negative (some r_p > p^s).
EulerProductValue euler_product(long double s, i64 generic_r,
                                const std::map<i64, i64>& overrides = {},
                                i64 cutoff = 1000);

// Pi_r(s) = prod_{p > r^(1/s)} (1 - r/p^s); Pi_0 = 1, Pi_1 = 1/zeta.
EulerProductValue pi_r(i64 r, long double s);

// xi(s) = prod_p (1 - 2/p^s) = sum_m mu(m) tau(m) / m^s.
EulerProductValue xi(long double s);

}  // namespace kfree::nt

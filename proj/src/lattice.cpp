#include "lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <thread>

#include <json.hpp>

#include "numtheory.hpp"

namespace kfree {

Rational Rational::parse(const std::string& text) {
    std::string s = text;
    if (s.empty()) throw domain_error("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        i64 num = std::stoll(s.substr(0, slash));
        i64 den = std::stoll(s.substr(slash + 1));
        return Rational(num, den);
    }
    bool neg = false;
    size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    i64 num = 0, den = 1;
    bool saw_digit = false, saw_dot = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '.') {
            if (saw_dot) throw domain_error("bad rational literal: " + text);
            saw_dot = true;
            continue;
        }
        if (s[i] < '0' || s[i] > '9')
            throw domain_error("bad rational literal: " + text);
        num = checked_mul(num, 10) + (s[i] - '0');
        if (saw_dot) den = checked_mul(den, 10);
        saw_digit = true;
    }
    if (!saw_digit) throw domain_error("bad rational literal: " + text);
    return Rational(neg ? -num : num, den);
}

}  // namespace kfree

namespace kfree::lat {

namespace {

constexpr long double kPi = 3.14159265358979323846264338328L;

long double det_ld(const std::vector<long double>& m, int n) {
    long double a[kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = m[static_cast<size_t>(i * n + j)];
    long double det = 1.0L;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (fabsl(a[r][col]) > fabsl(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0L) return 0.0L;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a[piv][j], a[col][j]);
            det = -det;
        }
        det *= a[col][col];
        for (int r = col + 1; r < n; ++r) {
            long double f = a[r][col] / a[col][col];
            for (int j = col; j < n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    return det;
}

std::vector<long double> inverse_ld(const std::vector<long double>& m, int n) {
    long double a[kMaxDim][2 * kMaxDim];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = m[static_cast<size_t>(i * n + j)];
        for (int j = 0; j < n; ++j) a[i][n + j] = i == j ? 1.0L : 0.0L;
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (fabsl(a[r][col]) > fabsl(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0L) throw domain_error("singular matrix");
        if (piv != col)
            for (int j = 0; j < 2 * n; ++j) std::swap(a[piv][j], a[col][j]);
        long double d = a[col][col];
        for (int j = 0; j < 2 * n; ++j) a[col][j] /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            long double f = a[r][col];
            for (int j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    std::vector<long double> out(static_cast<size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[static_cast<size_t>(i * n + j)] = a[i][n + j];
    return out;
}

Rational det_q(const std::vector<Rational>& m, int n) {
    if (n == 1) return m[0];
    Rational det(0);
    // cofactor expansion along the first row; n <= 4 keeps this cheap
    for (int j = 0; j < n; ++j) {
        std::vector<Rational> minor;
        minor.reserve(static_cast<size_t>((n - 1) * (n - 1)));
        for (int r = 1; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (c != j) minor.push_back(m[static_cast<size_t>(r * n + c)]);
        Rational term = m[static_cast<size_t>(j)] * det_q(minor, n - 1);
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

Rational qform_q(const Lattice& L, const std::array<i64, kMaxDim>& u, int n) {
    i128 acc = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            acc += static_cast<i128>(u[static_cast<size_t>(i)]) *
                   u[static_cast<size_t>(j)] * L.gram_int[static_cast<size_t>(i * n + j)];
    if (acc > static_cast<i128>(INT64_MAX) || acc < static_cast<i128>(INT64_MIN))
        throw resource_error("exact quadratic form exceeds 64-bit range");
    return Rational(static_cast<i64>(acc), L.gram_den);
}

// try to read a double as a compact exact rational (finite decimals, halves,
// thirds...); irrational-looking inputs are refused
std::optional<Rational> rationalize(double d) {
    if (d == std::floor(d) && std::abs(d) < 1e15)
        return Rational(static_cast<i64>(d));
    double x = d;
    i64 p0 = 1, q0 = 0, p1 = static_cast<i64>(std::floor(x)), q1 = 1;
    x -= std::floor(x);
    for (int iter = 0; iter < 40 && x > 1e-18; ++iter) {
        x = 1.0 / x;
        double fl = std::floor(x);
        if (fl > 1e15) break;
        i64 a = static_cast<i64>(fl);
        i64 p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > 1'000'000) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        x -= fl;
        double approx = static_cast<double>(p1) / static_cast<double>(q1);
        if (std::abs(approx - d) <= 1e-15 * std::max(1.0, std::abs(d)))
            return Rational(p1, q1);
    }
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (q1 > 0 && std::abs(approx - d) <= 1e-15 * std::max(1.0, std::abs(d)))
        return Rational(p1, q1);
    return std::nullopt;
}

void validate_spd(const Lattice& L) {
    // Sylvester: every leading principal minor positive
    for (int k = 1; k <= L.n; ++k) {
        if (L.gram_exact) {
            std::vector<Rational> sub;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    sub.push_back(L.gram_q[static_cast<size_t>(i * L.n + j)]);
            if (!(Rational(0) < det_q(sub, k)))
                throw domain_error("Gram matrix is not positive definite");
        } else {
            std::vector<long double> sub;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    sub.push_back(L.gram[static_cast<size_t>(i * L.n + j)]);
            if (!(det_ld(sub, k) > 0.0L))
                throw domain_error("Gram matrix is not positive definite");
        }
    }
}

void compute_lambda(Lattice& L) {
    // exhaustive search in the ball of radius max ||b_i||; the minimum over
    // that ball is global because each basis vector already lies inside it
    long double maxnorm_sq = 0.0L;
    for (int i = 0; i < L.n; ++i)
        maxnorm_sq = std::max(maxnorm_sq, L.gram[static_cast<size_t>(i * L.n + i)]);
    auto inv = inverse_ld(L.gram, L.n);
    std::array<i64, kMaxDim> bound{};
    for (int i = 0; i < L.n; ++i)
        bound[static_cast<size_t>(i)] =
            static_cast<i64>(floorl(sqrtl(maxnorm_sq * inv[static_cast<size_t>(i * L.n + i)]) + 1.0L)) + 1;

    bool have = false;
    Rational best_q;
    long double best_f = 0.0L;
    std::array<i64, kMaxDim> x{};
    std::function<void(int)> rec = [&](int d) {
        if (d == L.n) {
            bool zero = true;
            for (int i = 0; i < L.n; ++i) zero = zero && x[static_cast<size_t>(i)] == 0;
            if (zero) return;
            if (L.gram_exact) {
                Rational q = qform_q(L, x, L.n);
                if (!have || q < best_q) { best_q = q; have = true; }
            } else {
                Pt p;
                for (int i = 0; i < L.n; ++i) p[i] = x[static_cast<size_t>(i)];
                long double q = L.qform(p, L.n);
                if (!have || q < best_f) { best_f = q; have = true; }
            }
            return;
        }
        for (i64 v = -bound[static_cast<size_t>(d)]; v <= bound[static_cast<size_t>(d)]; ++v) {
            x[static_cast<size_t>(d)] = v;
            rec(d + 1);
        }
    };
    rec(0);
    if (!have) throw internal_error("shortest-vector search found nothing");
    if (L.gram_exact) {
        L.lambda_sq = best_q;
        L.lambda = sqrtl(best_q.to_ld());
    } else {
        L.lambda_sq = Rational(0);
        L.lambda = sqrtl(best_f);
    }
}

void finalize(Lattice& L) {
    if (L.n < 1 || L.n > kMaxDim)
        throw domain_error("lattice dimension must be between 1 and 4");
    if (L.gram_exact) {
        L.gram.assign(static_cast<size_t>(L.n * L.n), 0.0L);
        i64 den = 1;
        for (const auto& g : L.gram_q)
            den = std::lcm(den, g.den);
        if (den > 1'000'000'000)
            throw resource_error("Gram denominators too large for the exact path");
        L.gram_den = den;
        L.gram_int.assign(static_cast<size_t>(L.n * L.n), 0);
        for (size_t i = 0; i < L.gram_q.size(); ++i) {
            L.gram[i] = L.gram_q[i].to_ld();
            L.gram_int[i] = checked_mul(L.gram_q[i].num, den / L.gram_q[i].den);
        }
    }
    validate_spd(L);
    if (L.gram_exact) {
        Rational g = det_q(L.gram_q, L.n);
        L.det = sqrtl(g.to_ld());  // det(B)^2 == det(G)
    } else {
        long double g = det_ld(L.gram, L.n);
        L.det = sqrtl(g);
    }
    if (!(L.det > 0.0L)) throw domain_error("lattice basis is singular");
    compute_lambda(L);
}

}  // namespace

long double Lattice::qform(const Pt& x, int dim) const {
    long double acc = 0.0L;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            acc += static_cast<long double>(x[i]) * x[j] * gram[static_cast<size_t>(i * dim + j)];
    return acc;
}

long double Lattice::norm(const Point& x) const {
    Pt p;
    for (int i = 0; i < n; ++i) p[i] = x[static_cast<size_t>(i)];
    return sqrtl(std::max(qform(p, n), 0.0L));
}

Lattice make_preset(const std::string& name) {
    if (name == "Z1" || name == "Z2" || name == "Z3" || name == "Z4") {
        int n = name[1] - '0';
        std::vector<Rational> basis(static_cast<size_t>(n * n), Rational(0));
        for (int i = 0; i < n; ++i) basis[static_cast<size_t>(i * n + i)] = Rational(1);
        Lattice L = make_lattice_rational(n, basis, name);
        return L;
    }
    if (name == "A2") {
        Lattice L;
        L.n = 2;
        L.name = "A2";
        long double s3 = sqrtl(3.0L);
        L.basis = {1.0L, 0.0L, 0.5L, s3 / 2.0L};
        L.gram_q = {Rational(1), Rational(1, 2), Rational(1, 2), Rational(1)};
        L.gram_exact = true;
        finalize(L);
        return L;
    }
    throw domain_error("unknown lattice preset: " + name +
                       " (known: Z1, Z2, Z3, Z4, A2)");
}

Lattice make_lattice_rational(int n, const std::vector<Rational>& basis_rows,
                              const std::string& name) {
    if (static_cast<int>(basis_rows.size()) != n * n)
        throw domain_error("basis must have n*n entries");
    Lattice L;
    L.n = n;
    L.name = name;
    L.basis.resize(static_cast<size_t>(n * n));
    for (size_t i = 0; i < basis_rows.size(); ++i) L.basis[i] = basis_rows[i].to_ld();
    L.gram_q.assign(static_cast<size_t>(n * n), Rational(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational acc(0);
            for (int k = 0; k < n; ++k)
                acc = acc + basis_rows[static_cast<size_t>(i * n + k)] *
                                basis_rows[static_cast<size_t>(j * n + k)];
            L.gram_q[static_cast<size_t>(i * n + j)] = acc;
        }
    L.gram_exact = true;
    finalize(L);
    return L;
}

Lattice make_lattice_real(int n, const std::vector<double>& basis_rows,
                          const std::string& name) {
    if (static_cast<int>(basis_rows.size()) != n * n)
        throw domain_error("basis must have n*n entries");
    Lattice L;
    L.n = n;
    L.name = name;
    L.basis.assign(basis_rows.begin(), basis_rows.end());
    L.gram.assign(static_cast<size_t>(n * n), 0.0L);
    std::vector<Rational> gq(static_cast<size_t>(n * n));
    bool exact = true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            long double acc = 0.0L;
            for (int k = 0; k < n; ++k)
                acc += L.basis[static_cast<size_t>(i * n + k)] *
                       L.basis[static_cast<size_t>(j * n + k)];
            L.gram[static_cast<size_t>(i * n + j)] = acc;
            auto r = rationalize(static_cast<double>(acc));
            if (r)
                gq[static_cast<size_t>(i * n + j)] = *r;
            else
                exact = false;
        }
    if (exact) {
        L.gram_q = gq;
        L.gram_exact = true;
    }
    finalize(L);
    return L;
}

Lattice lattice_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw domain_error(std::string("lattice description is not valid JSON: ") + e.what());
    }
    if (!j.contains("n") || !j.contains("basis"))
        throw domain_error("lattice description needs fields: n, basis");
    int n = j.at("n").get<int>();
    if (n < 1 || n > kMaxDim) throw domain_error("lattice dimension must be 1..4");
    auto rows = j.at("basis");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        throw domain_error("basis must be an array of n rows");
    std::vector<Rational> entries;
    bool all_rational = true;
    std::vector<double> reals;
    for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw domain_error("each basis row must have n entries");
        for (const auto& e : row) {
            if (e.is_string()) {
                Rational r = Rational::parse(e.get<std::string>());
                entries.push_back(r);
                reals.push_back(r.to_double());
            } else if (e.is_number()) {
                double d = e.get<double>();
                reals.push_back(d);
                auto r = rationalize(d);
                if (r)
                    entries.push_back(*r);
                else
                    all_rational = false;
            } else {
                throw domain_error("basis entries must be numbers or 'p/q' strings");
            }
        }
    }
    std::string name = j.value("name", "");
    if (all_rational) return make_lattice_rational(n, entries, name);
    return make_lattice_real(n, reals, name);
}

Radius Radius::parse(const std::string& spec) {
    Radius r;
    if (spec.rfind("sqrt", 0) == 0) {
        i64 m = std::stoll(spec.substr(4));
        if (m <= 0) throw domain_error("sqrtN radius needs N >= 1");
        r.sq = Rational(m);
        r.value = sqrtl(static_cast<long double>(m));
        r.exact = true;
        return r;
    }
    Rational v = Rational::parse(spec);
    if (!(Rational(0) < v)) throw domain_error("radius must be positive");
    r.sq = v * v;
    r.value = v.to_ld();
    r.exact = true;
    return r;
}

Radius Radius::from_real(double x) {
    if (!(x > 0)) throw domain_error("radius must be positive");
    Radius r;
    r.value = x;
    auto q = rationalize(x);
    if (q) {
        r.sq = *q * *q;
        r.exact = true;
    }
    return r;
}

Radius Radius::from_sq(const Rational& rsq) {
    if (!(Rational(0) < rsq)) throw domain_error("radius must be positive");
    Radius r;
    r.sq = rsq;
    r.value = sqrtl(rsq.to_ld());
    r.exact = true;
    return r;
}

BallTester::BallTester(const Lattice& lattice, const std::vector<Rational>& center,
                       const Radius& radius, bool open)
    : lattice_(lattice), n_(lattice.n), open_(open) {
    if (static_cast<int>(center.size()) != n_)
        throw domain_error("center dimension mismatch");
    exact_ = lattice.gram_exact && radius.exact;
    long double rsq_f = radius.value * radius.value;
    if (radius.exact) rsq_f = radius.sq.to_ld();
    rsq_f_ = rsq_f;
    for (int i = 0; i < n_; ++i) cf_[static_cast<size_t>(i)] = center[static_cast<size_t>(i)].to_ld();

    // bounding box from the diagonal of the inverse Gram matrix
    auto inv = inverse_ld(lattice.gram, n_);
    for (int i = 0; i < n_; ++i) {
        long double w = radius.value * sqrtl(std::max(inv[static_cast<size_t>(i * n_ + i)], 0.0L));
        w *= 1.0L + 1e-12L;
        lo_[static_cast<size_t>(i)] = static_cast<i64>(floorl(cf_[static_cast<size_t>(i)] - w)) - 1;
        hi_[static_cast<size_t>(i)] = static_cast<i64>(ceill(cf_[static_cast<size_t>(i)] + w)) + 1;
    }

    if (exact_) {
        i64 dc = 1;
        for (const auto& c : center) dc = std::lcm(dc, c.den);
        if (dc > 100'000) throw resource_error("center denominators too large for the exact path");
        dc_ = dc;
        for (int i = 0; i < n_; ++i)
            ci_[static_cast<size_t>(i)] = checked_mul(center[static_cast<size_t>(i)].num,
                                                      dc / center[static_cast<size_t>(i)].den);
        rsq_den_ = radius.sq.den;
        // threshold: q_int(u) * rsq_den < rsq_num * dc^2 * gram_den
        i128 t = static_cast<i128>(radius.sq.num) * dc * dc;
        const i128 lim = static_cast<i128>(1) << 120;
        if (t > lim / lattice.gram_den)
            throw resource_error("exact ball threshold exceeds 128-bit range");
        thr_num_ = t * lattice.gram_den;
        // worst-case |q_int(u)| * rsq_den must stay in range
        long double worst = 0.0L;
        long double umax = 0.0L;
        for (int i = 0; i < n_; ++i)
            umax = std::max(umax,
                            static_cast<long double>(dc) *
                                    std::max(std::llabs(lo_[static_cast<size_t>(i)]),
                                             std::llabs(hi_[static_cast<size_t>(i)])) +
                                static_cast<long double>(std::llabs(ci_[static_cast<size_t>(i)])));
        long double gmax = 0.0L;
        for (i64 g : lattice.gram_int) gmax = std::max(gmax, fabsl(static_cast<long double>(g)));
        worst = umax * umax * gmax * n_ * n_ * static_cast<long double>(rsq_den_);
        if (worst > powl(2.0L, 120.0L))
            throw resource_error("exact ball arithmetic exceeds 128-bit range; reduce radius or denominators");
    }
}

bool BallTester::contains(const Pt& x) const {
    if (exact_) {
        i128 acc = 0;
        for (int i = 0; i < n_; ++i) {
            i64 ui = dc_ * x[i] - ci_[static_cast<size_t>(i)];
            for (int j = 0; j < n_; ++j) {
                i64 uj = dc_ * x[j] - ci_[static_cast<size_t>(j)];
                acc += static_cast<i128>(ui) * uj *
                       lattice_.gram_int[static_cast<size_t>(i * n_ + j)];
            }
        }
        acc *= rsq_den_;
        return open_ ? acc < thr_num_ : acc <= thr_num_;
    }
    long double acc = 0.0L;
    for (int i = 0; i < n_; ++i) {
        long double ui = x[i] - cf_[static_cast<size_t>(i)];
        for (int j = 0; j < n_; ++j)
            acc += ui * (x[j] - cf_[static_cast<size_t>(j)]) *
                   lattice_.gram[static_cast<size_t>(i * n_ + j)];
    }
    if (fabsl(acc - rsq_f_) <= 1e-9L * std::max(1.0L, rsq_f_))
        warning_.store(true, std::memory_order_relaxed);
    return open_ ? acc < rsq_f_ : acc <= rsq_f_;
}

i64 BallTester::box_points() const {
    i128 total = 1;
    for (int i = 0; i < n_; ++i) {
        total *= hi_[static_cast<size_t>(i)] - lo_[static_cast<size_t>(i)] + 1;
        if (total > static_cast<i128>(INT64_MAX)) return INT64_MAX;
    }
    return static_cast<i64>(total);
}

std::vector<Rational> origin(int n) { return std::vector<Rational>(static_cast<size_t>(n), Rational(0)); }

long double ball_volume_coeff(int n) {
    switch (n) {
        case 1: return 2.0L;
        case 2: return kPi;
        case 3: return 4.0L * kPi / 3.0L;
        case 4: return kPi * kPi / 2.0L;
        default: throw domain_error("dimension must be 1..4");
    }
}

long double qform_ld(const Lattice& lattice, const Point& x) {
    Pt p;
    for (int i = 0; i < lattice.n; ++i) p[i] = x[static_cast<size_t>(i)];
    return lattice.qform(p, lattice.n);
}

long double norm(const Lattice& lattice, const Point& x) {
    return sqrtl(std::max(qform_ld(lattice, x), 0.0L));
}

namespace {

void check_cap(i64 needed, i64 cap) {
    if (needed > cap)
        throw resource_error("scan requires " + std::to_string(needed) +
                             " candidate points but the cap is " + std::to_string(cap) +
                             " (adjust --max-points)");
}

template <typename Fn>
void walk_box(const Lattice& lattice, const BallTester& tester, int dim_from,
              std::array<i64, kMaxDim>& x, const Fn& fn) {
    int n = lattice.n;
    if (dim_from == n) {
        Pt p;
        for (int i = 0; i < n; ++i) p[i] = x[static_cast<size_t>(i)];
        if (tester.contains(p)) fn(p);
        return;
    }
    for (i64 v = tester.lo()[static_cast<size_t>(dim_from)];
         v <= tester.hi()[static_cast<size_t>(dim_from)]; ++v) {
        x[static_cast<size_t>(dim_from)] = v;
        walk_box(lattice, tester, dim_from + 1, x, fn);
    }
}

}  // namespace

std::vector<Point> points_in_ball(const Lattice& lattice,
                                  const std::vector<Rational>& center,
                                  const Radius& radius, i64 max_points, bool open) {
    BallTester tester(lattice, center, radius, open);
    check_cap(tester.box_points(), max_points);
    std::vector<Point> out;
    std::array<i64, kMaxDim> x{};
    walk_box(lattice, tester, 0, x, [&](const Pt& p) {
        Point q(static_cast<size_t>(lattice.n));
        for (int i = 0; i < lattice.n; ++i) q[static_cast<size_t>(i)] = p[i];
        out.push_back(std::move(q));
    });
    std::sort(out.begin(), out.end());
    return out;
}

void scan_ball(const Lattice& lattice, const std::vector<Rational>& center,
               const Radius& radius, i64 max_points, int threads,
               const std::function<void(int chunk, const Pt&)>& fn,
               int* chunks_out, bool open) {
    BallTester tester(lattice, center, radius, open);
    check_cap(tester.box_points(), max_points);
    i64 lo0 = tester.lo()[0], hi0 = tester.hi()[0];
    i64 span = hi0 - lo0 + 1;
    int nchunks = static_cast<int>(std::max<i64>(1, std::min<i64>(threads, span)));
    if (chunks_out) *chunks_out = nchunks;

    auto run_chunk = [&](int ci, i64 a, i64 b) {
        std::array<i64, kMaxDim> x{};
        for (i64 v = a; v < b; ++v) {
            x[0] = v;
            walk_box(lattice, tester, 1, x, [&](const Pt& p) { fn(ci, p); });
        }
    };

    if (nchunks == 1) {
        run_chunk(0, lo0, hi0 + 1);
        return;
    }
    std::vector<std::thread> workers;
    i64 per = span / nchunks, extra = span % nchunks;
    i64 start = lo0;
    for (int c = 0; c < nchunks; ++c) {
        i64 len = per + (c < extra ? 1 : 0);
        workers.emplace_back(run_chunk, c, start, start + len);
        start += len;
    }
    for (auto& w : workers) w.join();
}

Rational diameter_sq(const Lattice& lattice, const std::vector<Point>& pts) {
    if (pts.empty()) throw domain_error("diameter of an empty set");
    if (!lattice.gram_exact)
        throw internal_error("exact diameter requires a rational Gram matrix");
    Rational best(0);
    for (size_t a = 0; a < pts.size(); ++a)
        for (size_t b = a + 1; b < pts.size(); ++b) {
            std::array<i64, kMaxDim> d{};
            for (int i = 0; i < lattice.n; ++i)
                d[static_cast<size_t>(i)] =
                    pts[a][static_cast<size_t>(i)] - pts[b][static_cast<size_t>(i)];
            Rational q = qform_q(lattice, d, lattice.n);
            if (best < q) best = q;
        }
    return best;
}

long double diameter(const Lattice& lattice, const std::vector<Point>& pts) {
    if (pts.empty()) throw domain_error("diameter of an empty set");
    long double best = 0.0L;
    for (size_t a = 0; a < pts.size(); ++a)
        for (size_t b = a + 1; b < pts.size(); ++b) {
            Point d(static_cast<size_t>(lattice.n));
            for (int i = 0; i < lattice.n; ++i)
                d[static_cast<size_t>(i)] =
                    pts[a][static_cast<size_t>(i)] - pts[b][static_cast<size_t>(i)];
            best = std::max(best, qform_ld(lattice, d));
        }
    return sqrtl(best);
}

i64 coset_count(const std::vector<Point>& pts, i64 m, int n) {
    if (pts.empty()) throw domain_error("coset count of an empty set");
    if (m < 1) throw domain_error("modulus must be >= 1");
    if (m == 1) return 1;
    std::vector<std::array<i64, kMaxDim>> reduced;
    reduced.reserve(pts.size());
    for (const auto& p : pts) {
        std::array<i64, kMaxDim> r{};
        for (int i = 0; i < n; ++i) {
            i64 v = p[static_cast<size_t>(i)] % m;
            if (v < 0) v += m;
            r[static_cast<size_t>(i)] = v;
        }
        reduced.push_back(r);
    }
    std::sort(reduced.begin(), reduced.end());
    reduced.erase(std::unique(reduced.begin(), reduced.end()), reduced.end());
    return static_cast<i64>(reduced.size());
}

std::optional<i64> content_1(const Point& x) {
    i64 g = 0;
    for (i64 v : x) g = std::gcd(g, v < 0 ? -v : v);
    if (g == 0) return std::nullopt;
    return g;
}

bool congruence_solvable(const Lattice& lattice, const CongruenceSystem& sys) {
    (void)lattice;
    if (sys.empty()) throw domain_error("empty congruence system");
    for (size_t i = 0; i < sys.size(); ++i)
        for (size_t j = i + 1; j < sys.size(); ++j) {
            i64 g = std::gcd(sys[i].modulus, sys[j].modulus);
            if (g == 1) continue;
            Point diff(sys[i].offset.size());
            for (size_t c = 0; c < diff.size(); ++c)
                diff[c] = sys[i].offset[c] - sys[j].offset[c];
            auto cont = content_1(diff);
            if (!cont) continue;  // infinite content divisible by everything
            if (*cont % g != 0) return false;
        }
    return true;
}

namespace {

i64 egcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) { x = 1; y = 0; return a; }
    i64 x1, y1;
    i64 g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// merge x == a (mod m) with x == b (mod k); nullopt when incompatible
std::optional<std::pair<i64, i64>> merge_scalar(i64 a, i64 m, i64 b, i64 k) {
    i64 x, y;
    i64 g = egcd(m, k, x, y);
    if ((b - a) % g != 0) return std::nullopt;
    i128 lcm128 = static_cast<i128>(m) / g * k;
    if (lcm128 > static_cast<i128>(4e18)) throw resource_error("congruence lcm exceeds 64-bit range");
    i64 l = static_cast<i64>(lcm128);
    i128 diff = (static_cast<i128>(b) - a) / g % (k / g);
    i128 t = diff * x % (k / g);
    i128 r = (static_cast<i128>(a) + static_cast<i128>(m) * static_cast<i64>(t)) % l;
    if (r < 0) r += l;
    return std::make_pair(static_cast<i64>(r), l);
}

}  // namespace

std::optional<std::pair<Point, i64>> congruence_solution(const Lattice& lattice,
                                                         const CongruenceSystem& sys) {
    if (sys.empty()) throw domain_error("empty congruence system");
    int n = lattice.n;
    Point rep(static_cast<size_t>(n), 0);
    i64 mod = 1;
    for (const auto& cg : sys) {
        if (cg.modulus < 1) throw domain_error("congruence modulus must be >= 1");
        if (static_cast<int>(cg.offset.size()) != n)
            throw domain_error("congruence offset dimension mismatch");
        i64 new_mod = 0;
        Point new_rep(static_cast<size_t>(n));
        for (int c = 0; c < n; ++c) {
            i64 want = -cg.offset[static_cast<size_t>(c)] % cg.modulus;
            if (want < 0) want += cg.modulus;
            auto merged = merge_scalar(rep[static_cast<size_t>(c)], mod, want, cg.modulus);
            if (!merged) return std::nullopt;
            new_rep[static_cast<size_t>(c)] = merged->first;
            new_mod = merged->second;  // same lcm in every coordinate
        }
        rep = new_rep;
        mod = new_mod;
    }
    return std::make_pair(rep, mod);
}

i64 count_congruence_solutions(const Lattice& lattice, const CongruenceSystem& sys,
                               const std::vector<Rational>& center, const Radius& R,
                               i64 max_points, int threads) {
    auto sol = congruence_solution(lattice, sys);
    if (!sol) return 0;
    const auto& [rep, L] = *sol;
    BallTester tester(lattice, center, R, true);
    // walk x = rep + L*y over the sub-grid meeting the bounding box
    std::array<i64, kMaxDim> ylo{}, yhi{};
    i128 total = 1;
    for (int i = 0; i < lattice.n; ++i) {
        i64 lo = tester.lo()[static_cast<size_t>(i)], hi = tester.hi()[static_cast<size_t>(i)];
        i64 r = rep[static_cast<size_t>(i)];
        ylo[static_cast<size_t>(i)] = static_cast<i64>(floorl((lo - r) / static_cast<long double>(L)));
        yhi[static_cast<size_t>(i)] = static_cast<i64>(ceill((hi - r) / static_cast<long double>(L)));
        total *= yhi[static_cast<size_t>(i)] - ylo[static_cast<size_t>(i)] + 1;
    }
    check_cap(total > static_cast<i128>(INT64_MAX) ? INT64_MAX : static_cast<i64>(total),
              max_points);
    (void)threads;
    i64 count = 0;
    std::array<i64, kMaxDim> y{};
    std::function<void(int)> rec = [&](int d) {
        if (d == lattice.n) {
            Pt p;
            for (int i = 0; i < lattice.n; ++i)
                p[i] = rep[static_cast<size_t>(i)] + L * y[static_cast<size_t>(i)];
            if (tester.contains(p)) ++count;
            return;
        }
        for (i64 v = ylo[static_cast<size_t>(d)]; v <= yhi[static_cast<size_t>(d)]; ++v) {
            y[static_cast<size_t>(d)] = v;
            rec(d + 1);
        }
    };
    rec(0);
    return count;
}

std::pair<Point, i64> crt_combine(const std::vector<std::pair<Point, i64>>& residues,
                                  int n) {
    if (residues.empty()) throw domain_error("empty residue list");
    for (size_t i = 0; i < residues.size(); ++i)
        for (size_t j = i + 1; j < residues.size(); ++j)
            if (std::gcd(residues[i].second, residues[j].second) != 1)
                throw domain_error("CRT moduli must be pairwise coprime");
    Point rep(static_cast<size_t>(n), 0);
    i64 mod = 1;
    for (const auto& [pt, m] : residues) {
        if (static_cast<int>(pt.size()) != n) throw domain_error("residue dimension mismatch");
        for (int c = 0; c < n; ++c) {
            i64 want = pt[static_cast<size_t>(c)] % m;
            if (want < 0) want += m;
            auto merged = merge_scalar(rep[static_cast<size_t>(c)], mod, want, m);
            if (!merged) throw internal_error("coprime CRT merge failed");
            rep[static_cast<size_t>(c)] = merged->first;
        }
        i128 nm = static_cast<i128>(mod) * m;
        if (nm > static_cast<i128>(4e18))
            throw resource_error("combined CRT modulus exceeds 64-bit range");
        mod = static_cast<i64>(nm);
    }
    return {rep, mod};
}

Lattice dual_lattice(const Lattice& lattice) {
    int n = lattice.n;
    Lattice D;
    D.n = n;
    D.name = lattice.name.empty() ? "dual" : lattice.name + "*";
    // dual basis rows: (B^T)^{-1}; dual Gram: G^{-1}
    std::vector<long double> bt(static_cast<size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            bt[static_cast<size_t>(i * n + j)] = lattice.basis[static_cast<size_t>(j * n + i)];
    D.basis = inverse_ld(bt, n);
    if (lattice.gram_exact) {
        // rational inverse via adjugate / determinant
        Rational det = det_q(lattice.gram_q, n);
        std::vector<Rational> inv(static_cast<size_t>(n * n), Rational(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::vector<Rational> minor;
                for (int r = 0; r < n; ++r) {
                    if (r == j) continue;
                    for (int c = 0; c < n; ++c) {
                        if (c == i) continue;
                        minor.push_back(lattice.gram_q[static_cast<size_t>(r * n + c)]);
                    }
                }
                Rational cof = n == 1 ? Rational(1) : det_q(minor, n - 1);
                if ((i + j) % 2 == 1) cof = Rational(0) - cof;
                inv[static_cast<size_t>(i * n + j)] = cof / det;
            }
        D.gram_q = inv;
        D.gram_exact = true;
    } else {
        D.gram = inverse_ld(lattice.gram, n);
    }
    finalize(D);
    return D;
}

std::vector<std::vector<i64>> point_symmetries(const Lattice& lattice) {
    int n = lattice.n;
    // candidate images per basis vector: lattice vectors with matching norm
    std::vector<std::vector<Point>> candidates(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        long double norm_i = sqrtl(lattice.gram[static_cast<size_t>(i * n + i)]);
        Radius rad = Radius::from_real(static_cast<double>(norm_i) * 1.0000001 + 1e-9);
        auto ball = points_in_ball(lattice, origin(n), rad, 1'000'000, false);
        for (const auto& v : ball) {
            bool match;
            if (lattice.gram_exact) {
                std::array<i64, kMaxDim> a{};
                for (int c = 0; c < n; ++c) a[static_cast<size_t>(c)] = v[static_cast<size_t>(c)];
                match = qform_q(lattice, a, n) == lattice.gram_q[static_cast<size_t>(i * n + i)];
            } else {
                match = fabsl(qform_ld(lattice, v) - lattice.gram[static_cast<size_t>(i * n + i)]) <
                        1e-9L;
            }
            if (match) candidates[static_cast<size_t>(i)].push_back(v);
        }
    }
    auto inner = [&](const Point& a, const Point& b) -> long double {
        long double acc = 0.0L;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                acc += static_cast<long double>(a[static_cast<size_t>(i)]) *
                       b[static_cast<size_t>(j)] * lattice.gram[static_cast<size_t>(i * n + j)];
        return acc;
    };
    std::vector<std::vector<i64>> out;
    std::vector<Point> chosen(static_cast<size_t>(n));
    std::function<void(int)> rec = [&](int d) {
        if (d == n) {
            // columns are the images of the basis vectors
            std::vector<i64> mat(static_cast<size_t>(n * n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    mat[static_cast<size_t>(i * n + j)] = chosen[static_cast<size_t>(j)][static_cast<size_t>(i)];
            out.push_back(std::move(mat));
            return;
        }
        for (const auto& v : candidates[static_cast<size_t>(d)]) {
            bool ok = true;
            for (int e = 0; e < d && ok; ++e)
                ok = fabsl(inner(v, chosen[static_cast<size_t>(e)]) -
                           lattice.gram[static_cast<size_t>(d * n + e)]) < 1e-9L;
            if (!ok) continue;
            chosen[static_cast<size_t>(d)] = v;
            rec(d + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace kfree::lat

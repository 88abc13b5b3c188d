#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "diffraction.hpp"
#include "numtheory.hpp"

using namespace kfree;
using namespace kfree::diffr;
using lat::Point;
using lat::Radius;

namespace {

Point pt(std::initializer_list<i64> v) { return Point(v); }

sets::Config zk2() { return sets::make_config(lat::make_preset("Z1"), 2); }
sets::Config vis2() { return sets::make_config(lat::make_preset("Z2"), 1); }

bool close(long double a, long double b, long double tol) {
    return fabsl(a - b) < tol;
}

}  // namespace

TEST_CASE("denominators of rational dual points") {
    CHECK(denominator({Rational(1, 2), Rational(0)}) == 2);
    CHECK(denominator({Rational(3), Rational(-2)}) == 1);
    CHECK(denominator({Rational(1, 4), Rational(1, 6)}) == 12);
}

TEST_CASE("closed autocorrelation weights") {
    auto cfg = zk2();
    // w(0) equals the density 1/zeta(nk), to 1e-12
    CHECK(close(autocorr_weight(cfg, pt({0})), 0.6079271018540266287L, 1e-13L));
    // k-free a: the empty product leaves xi(nk)
    CHECK(close(autocorr_weight(cfg, pt({1})), 0.3226340989392446706L, 1e-13L));
    CHECK(close(autocorr_weight(cfg, pt({2})), 0.3226340989392446706L, 1e-13L));
    // content 2: xi(2) * (1 + 1/(4-2)) = 1.5 xi(2)
    CHECK(close(autocorr_weight(cfg, pt({4})), 0.483951148408867006L, 1e-13L));
    // weights depend on a only through the content
    CHECK(close(autocorr_weight(cfg, pt({36})), autocorr_weight(cfg, pt({-144})), 1e-18L));

    auto v = vis2();
    CHECK(close(autocorr_weight(v, pt({0, 0})), 0.6079271018540266287L, 1e-13L));
    CHECK(close(autocorr_weight(v, pt({1, 0})), 0.3226340989392446706L, 1e-13L));
    CHECK(close(autocorr_weight(v, pt({2, 4})),
                0.3226340989392446706L * 1.5L, 1e-13L));

    // weights are constant on GL(2,Z) orbits: the matrices fix the content
    std::vector<std::array<i64, 4>> gl{{0, -1, 1, 0}, {1, 1, 0, 1}, {2, 1, 1, 1}};
    for (const auto& m : gl)
        for (const Point& a : {pt({2, 4}), pt({3, 0}), pt({6, 9})}) {
            Point image{m[0] * a[0] + m[1] * a[1], m[2] * a[0] + m[3] * a[1]};
            CHECK(close(autocorr_weight(v, a), autocorr_weight(v, image), 1e-18L));
        }
}

TEST_CASE("empirical autocorrelation approaches the closed weights") {
    auto cfg = zk2();
    // a = 0 degenerates to the density
    long double w0 = autocorr_weight_empirical(cfg, pt({0}), 50000);
    CHECK(close(w0, sets::density_empirical(cfg, 50000), 1e-15L));
    long double w4 = autocorr_weight_empirical(cfg, pt({4}), 200000);
    CHECK(close(w4, autocorr_weight(cfg, pt({4})), 5e-3L));

    auto v = vis2();
    long double w10 = autocorr_weight_empirical(v, pt({1, 0}), 400);
    CHECK(close(w10, autocorr_weight(v, pt({1, 0})), 1e-2L));
    // empirical error shrinks as the window doubles
    Point a{3, 3};
    long double e1 = fabsl(autocorr_weight_empirical(v, a, 100) - autocorr_weight(v, a));
    long double e2 = fabsl(autocorr_weight_empirical(v, a, 400) - autocorr_weight(v, a));
    CHECK(e2 < e1 + 1e-4L);
}

TEST_CASE("diffraction intensities") {
    auto cfg = zk2();
    CHECK(close(diffraction_intensity(cfg, 1), 0.369575361168636067L, 1e-12L));
    CHECK(close(diffraction_intensity(cfg, 2), 0.0410639290187373408L, 1e-12L));
    // 8 = 2^3 is not cube-free: dark for k = 2
    CHECK(diffraction_intensity(cfg, 8) == 0.0L);
    CHECK(diffraction_intensity(cfg, 4) > 0.0L);  // 4 = 2^2 is cube-free
    auto v = vis2();
    CHECK(diffraction_intensity(v, 4) == 0.0L);  // k = 1: squarefree only
    // positivity iff (k+1)-free
    for (i64 q = 1; q <= 100; ++q) {
        bool positive = diffraction_intensity(cfg, q) > 0.0L;
        CHECK(positive == nt::is_r_free(q, 3));
    }
    // multiplicativity on coprime (k+1)-free parts
    for (auto [q1, q2] : std::vector<std::pair<i64, i64>>{{2, 3}, {4, 9}, {3, 50}, {12, 25}}) {
        long double lhs = diffraction_intensity(cfg, q1 * q2) * diffraction_intensity(cfg, 1);
        long double rhs = diffraction_intensity(cfg, q1) * diffraction_intensity(cfg, q2);
        CHECK(close(lhs, rhs, 1e-15L));
    }
    CHECK_THROWS_AS(diffraction_intensity(cfg, 0), domain_error);
}

TEST_CASE("peak list for the squarefree numbers") {
    auto cfg = zk2();
    auto peaks = peak_list(cfg, Radius::parse("1.05"), 4);
    // 0, +-1 (q=1), +-1/2, +-1/3, +-2/3, +-1/4, +-3/4
    REQUIRE(peaks.size() == 13);
    std::multiset<std::pair<std::string, i64>> got;
    for (const auto& p : peaks)
        got.insert({p.location.coords[0].str(), p.location.q});
    std::multiset<std::pair<std::string, i64>> want{
        {"0", 1}, {"1", 1}, {"-1", 1}, {"1/2", 2}, {"-1/2", 2},
        {"1/3", 3}, {"-1/3", 3}, {"2/3", 3}, {"-2/3", 3},
        {"1/4", 4}, {"-1/4", 4}, {"3/4", 4}, {"-3/4", 4}};
    CHECK(got == want);
    // sorted by norm: origin first
    CHECK(peaks.front().location.coords[0] == Rational(0));
    for (const auto& p : peaks) {
        if (p.location.q == 1) CHECK(close(p.intensity, 0.3695753611686361L, 1e-12L));
        if (p.location.q == 2 || p.location.q == 4)
            CHECK(close(p.intensity, 0.0410639290187373L, 1e-12L));
        if (p.location.q == 3)
            CHECK(close(p.intensity, 0.3695753611686361L / 64, 1e-12L));
        // series cross-check validates the closed form within the bound
        CHECK(p.series_residual <= p.series_bound);
    }
}

TEST_CASE("peak series agreement on a 2d sample") {
    auto v = vis2();
    auto peaks = peak_list(v, Radius::parse("sqrt2"), 6);
    CHECK(peaks.size() >= 50);
    for (const auto& p : peaks) CHECK(p.series_residual <= p.series_bound);
    // q_max = 1 keeps exactly the dual lattice comb
    auto bragg = peak_list(v, Radius::parse("2.5"), 1);
    for (const auto& p : bragg) {
        CHECK(p.location.q == 1);
        CHECK(close(p.intensity, 0.3695753611686361L, 1e-12L));
    }
}

TEST_CASE("difference set covers the lattice") {
    auto cfg = zk2();
    auto report = difference_set_check(cfg, Radius::parse("10"), 60);
    CHECK(report.all_found);
    for (const auto& row : report.rows) {
        if (!row.found) continue;
        CHECK(sets::is_k_free(cfg, row.x));
        Point y{row.x[0] - row.a[0]};
        CHECK(sets::is_k_free(cfg, y));
    }
    // a = 4: x = 5 gives the pair (5, 1); the outward search hits the
    // equally valid (-1, -5) first
    CHECK(sets::is_k_free(cfg, pt({5})));
    CHECK(sets::is_k_free(cfg, pt({1})));
    for (const auto& row : report.rows)
        if (row.a == pt({4})) CHECK(row.x == pt({-1}));

    auto v = vis2();
    auto r2 = difference_set_check(v, Radius::parse("5"), 40);
    CHECK(r2.all_found);
}

TEST_CASE("peak exports") {
    auto cfg = zk2();
    auto peaks = peak_list(cfg, Radius::parse("1.05"), 4);
    auto table = render_peaks_table(cfg, peaks);
    CHECK(table.find("kfree diffraction schema=1") != std::string::npos);
    CHECK(table.find("(3/4)") != std::string::npos);
    auto js = render_peaks_json(cfg, peaks);
    CHECK(js.find("\"schema\": \"kfree.peaks/1\"") != std::string::npos);
}

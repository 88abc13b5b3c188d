#include "diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "numtheory.hpp"

namespace kfree::diffr {

i64 denominator(const std::vector<Rational>& coords) {
    i64 q = 1;
    for (const auto& c : coords) q = std::lcm(q, c.den);
    return q;
}

long double autocorr_weight(const Config& cfg, const Point& a) {
    auto content = sets::k_content(cfg, a);
    long double nk = static_cast<long double>(cfg.nk());
    if (!content)  // a = 0: the weight is the density of V
        return 1.0L / (nt::zeta(nk) * cfg.lattice.det);
    long double w = nt::xi(nk).value;
    for (auto [p, e] : nt::factorize(*content))
        w *= 1.0L + 1.0L / (powl(static_cast<long double>(p), nk) - 2.0L);
    return w / cfg.lattice.det;
}

long double autocorr_weight_empirical(const Config& cfg, const Point& a, double R) {
    if (!(R > 0)) throw domain_error("window radius must be positive");
    int n = cfg.n();
    if (static_cast<int>(a.size()) != n) throw domain_error("point dimension mismatch");
    sets::KfreeWindow win(cfg, R + 1.0);
    Radius rad = Radius::from_real(R);
    lat::BallTester in_ball(cfg.lattice, lat::origin(n), rad);
    std::vector<i64> per(64, 0);
    lat::scan_ball(cfg.lattice, lat::origin(n), rad, cfg.max_points, cfg.threads,
                   [&](int chunk, const lat::Pt& x) {
                       if (!win.kfree_at(x)) return;
                       lat::Pt y;
                       for (int i = 0; i < n; ++i) y[i] = x[i] - a[static_cast<size_t>(i)];
                       if (!win.in_box(y) || !in_ball.contains(y)) return;
                       if (win.kfree_at(y)) ++per[static_cast<size_t>(chunk)];
                   });
    i64 pairs = 0;
    for (i64 v : per) pairs += v;
    long double vol = powl(static_cast<long double>(R), n) * lat::ball_volume_coeff(n);
    return pairs * cfg.lattice.det / vol;
}

long double diffraction_intensity(const Config& cfg, i64 q) {
    if (q < 1) throw domain_error("denominator must be >= 1");
    if (!nt::is_r_free(q, static_cast<int>(cfg.k) + 1)) return 0.0L;
    long double nk = static_cast<long double>(cfg.nk());
    long double z = nt::zeta(nk);
    long double val = 1.0L / (z * z);
    for (auto [p, e] : nt::factorize(q)) {
        long double f = powl(static_cast<long double>(p), nk) - 1.0L;
        val /= f * f;
    }
    return val / (cfg.lattice.det * cfg.lattice.det);
}

namespace {

// coefficient of the comb over Lambda*/d^k (squarefree d), without xi
long double comb_coeff(const Config& cfg, i64 d) {
    long double c = 1.0L;
    long double nk = static_cast<long double>(cfg.nk());
    for (auto [p, e] : nt::factorize(d)) {
        long double pnk = powl(static_cast<long double>(p), nk);
        c /= pnk * pnk - 2.0L * pnk;
    }
    return c;
}

}  // namespace

std::vector<Peak> peak_list(const Config& cfg, const Radius& dual_radius, i64 q_max,
                            i64 d_max) {
    if (q_max < 1) throw domain_error("q_max must be >= 1");
    int n = cfg.n();
    auto dual = lat::dual_lattice(cfg.lattice);
    long double nk = static_cast<long double>(cfg.nk());
    long double xi_nk = nt::xi(nk).value;
    long double det2 = cfg.lattice.det * cfg.lattice.det;
    // crude series tail: xi sum_{d > d_max} d^{1-2nk} < xi d_max^{2-2nk}/(2nk-2)
    long double tail = xi_nk *
                       powl(static_cast<long double>(d_max), 2.0L - 2.0L * nk) /
                       (2.0L * nk - 2.0L) / det2;

    std::vector<i64> sq_free_d;
    for (i64 d = 1; d <= d_max; ++d)
        if (nt::is_squarefree(d)) sq_free_d.push_back(d);

    std::vector<Peak> peaks;
    for (i64 q = 1; q <= q_max; ++q) {
        if (!nt::is_r_free(q, static_cast<int>(cfg.k) + 1)) continue;
        i64 qstar = nt::squarefree_kernel(q);
        long double closed = diffraction_intensity(cfg, q);
        long double series = 0.0L;
        for (i64 d : sq_free_d)
            if (d % qstar == 0) series += xi_nk * comb_coeff(cfg, d);
        series /= det2;

        // points v/q with denominator exactly q: gcd(content(v), q) = 1
        Radius scaled =
            dual_radius.exact
                ? Radius::from_sq(dual_radius.sq * Rational(q) * Rational(q))
                : Radius::from_real(static_cast<double>(dual_radius.value) * q);
        auto pts = lat::points_in_ball(dual, lat::origin(n), scaled, cfg.max_points);
        for (const auto& v : pts) {
            auto g = lat::content_1(v);
            i64 content = g ? *g : 0;  // origin: denominator 1
            bool exact_den = g ? std::gcd(content, q) == 1 : q == 1;
            if (!exact_den) continue;
            Peak peak;
            peak.location.q = q;
            for (i64 c : v) peak.location.coords.push_back(Rational(c, q));
            peak.intensity = closed;
            peak.series_value = series;
            peak.series_residual = fabsl(closed - series);
            peak.series_bound = tail;
            peaks.push_back(std::move(peak));
        }
    }
    // sort by dual norm, then lexicographic on coordinates
    auto key_norm = [&](const Peak& p) {
        long double acc = 0.0L;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                acc += p.location.coords[static_cast<size_t>(i)].to_ld() *
                       p.location.coords[static_cast<size_t>(j)].to_ld() *
                       dual.gram[static_cast<size_t>(i * n + j)];
        return acc;
    };
    std::sort(peaks.begin(), peaks.end(), [&](const Peak& a, const Peak& b) {
        long double na = key_norm(a), nb = key_norm(b);
        if (fabsl(na - nb) > 1e-12L * std::max(1.0L, std::max(na, nb)))
            return na < nb;
        for (size_t i = 0; i < a.location.coords.size(); ++i) {
            if (a.location.coords[i] == b.location.coords[i]) continue;
            return a.location.coords[i] < b.location.coords[i];
        }
        return false;
    });
    return peaks;
}

VVReport difference_set_check(const Config& cfg, const Radius& radius,
                              double search_radius) {
    int n = cfg.n();
    VVReport report;
    report.search_radius = search_radius;
    auto candidates = lat::points_in_ball(cfg.lattice, lat::origin(n),
                                          Radius::from_real(search_radius), cfg.max_points);
    // outward search order: by norm, ties lexicographic
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const Point& a, const Point& b) {
                         long double na = lat::qform_ld(cfg.lattice, a);
                         long double nb = lat::qform_ld(cfg.lattice, b);
                         if (fabsl(na - nb) > 1e-9L) return na < nb;
                         return a < b;
                     });
    std::vector<char> cand_free(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i)
        cand_free[i] = sets::is_k_free(cfg, candidates[i]) ? 1 : 0;

    report.all_found = true;
    for (const auto& a : lat::points_in_ball(cfg.lattice, lat::origin(n), radius,
                                             cfg.max_points)) {
        VVWitness row;
        row.a = a;
        for (size_t i = 0; i < candidates.size(); ++i) {
            if (!cand_free[i]) continue;
            Point y(static_cast<size_t>(n));
            for (int c = 0; c < n; ++c)
                y[static_cast<size_t>(c)] =
                    candidates[i][static_cast<size_t>(c)] - a[static_cast<size_t>(c)];
            if (sets::is_k_free(cfg, y)) {
                row.found = true;
                row.x = candidates[i];
                break;
            }
        }
        report.all_found = report.all_found && row.found;
        report.rows.push_back(std::move(row));
    }
    return report;
}

namespace {

std::string sci(long double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3Le", v);
    return buf;
}

std::string coords_str(const DualPoint& p) {
    std::string out;
    for (size_t i = 0; i < p.coords.size(); ++i) {
        if (i) out += ",";
        out += p.coords[i].str();
    }
    return out;
}

}  // namespace

std::string render_peaks_table(const Config& cfg, const std::vector<Peak>& peaks) {
    std::ostringstream os;
    os << "# kfree diffraction schema=1\n";
    os << "# lattice=" << (cfg.lattice.name.empty() ? "custom" : cfg.lattice.name)
       << " k=" << cfg.k << " peaks=" << peaks.size() << "\n";
    os << "# columns: location q intensity series_residual series_bound\n";
    for (const auto& p : peaks) {
        os << "(" << coords_str(p.location) << ")\t" << p.location.q << "\t"
           << format_real(p.intensity, 12) << "\t" << sci(p.series_residual) << "\t"
           << sci(p.series_bound) << "\n";
    }
    return os.str();
}

std::string render_peaks_json(const Config& cfg, const std::vector<Peak>& peaks) {
    nlohmann::json j;
    j["schema"] = "kfree.peaks/1";
    j["lattice"] = cfg.lattice.name.empty() ? "custom" : cfg.lattice.name;
    j["k"] = cfg.k;
    j["peaks"] = nlohmann::json::array();
    for (const auto& p : peaks) {
        nlohmann::json row;
        row["coords"] = nlohmann::json::array();
        for (const auto& c : p.location.coords) row["coords"].push_back(c.str());
        row["q"] = p.location.q;
        row["intensity"] = static_cast<double>(p.intensity);
        row["series_residual"] = static_cast<double>(p.series_residual);
        row["series_bound"] = static_cast<double>(p.series_bound);
        j["peaks"].push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

}  // namespace kfree::diffr

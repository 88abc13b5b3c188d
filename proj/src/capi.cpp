#include "kfree/kfree.h"

#include <cstring>
#include <string>
#include <vector>

#include "diffraction.hpp"
#include "kfree_sets.hpp"
#include "lattice.hpp"
#include "numtheory.hpp"
#include "patch_stats.hpp"

using kfree::i64;

struct kfree_lattice {
    kfree::lat::Lattice impl;
};

struct kfree_config {
    kfree::sets::Config impl;
};

struct kfree_census {
    kfree::sets::Config cfg;
    kfree::patch::Census impl;
    std::string rendered;
};

struct kfree_peaks {
    kfree::sets::Config cfg;
    std::vector<kfree::diffr::Peak> impl;
    std::string rendered;
};

struct kfree_hole {
    kfree::sets::Hole impl;
    std::string modulus_str;
    std::vector<std::string> offset_str;
};

struct kfree_vv_report {
    kfree::diffr::VVReport impl;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
kfree_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        return KFREE_OK;
    } catch (const kfree::domain_error& e) {
        g_last_error = e.what();
        return KFREE_ERR_DOMAIN;
    } catch (const kfree::resource_error& e) {
        g_last_error = e.what();
        return KFREE_ERR_RESOURCE;
    } catch (const kfree::internal_error& e) {
        g_last_error = e.what();
        return KFREE_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return KFREE_ERR_INTERNAL;
    }
}

void require(bool cond, const char* what) {
    if (!cond) throw kfree::domain_error(what);
}

kfree::lat::Point read_point(const kfree_config* config, const long long* point) {
    require(point != nullptr, "null point");
    int n = config->impl.n();
    return kfree::lat::Point(point, point + n);
}

std::vector<kfree::lat::Point> read_points(const kfree_config* config,
                                           const long long* points, int count) {
    require(count >= 0, "negative point count");
    require(points != nullptr || count == 0, "null point array");
    int n = config->impl.n();
    std::vector<kfree::lat::Point> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        out.emplace_back(points + static_cast<long>(i) * n,
                         points + static_cast<long>(i + 1) * n);
    return out;
}

kfree::lat::Radius read_radius(const char* spec) {
    require(spec != nullptr, "null radius");
    return kfree::lat::Radius::parse(spec);
}

}  // namespace

extern "C" {

const char* kfree_last_error(void) { return g_last_error.c_str(); }

/* ---- lattices ---- */

kfree_status kfree_lattice_preset(const char* name, kfree_lattice** out) {
    return guarded([&] {
        require(name && out, "null argument");
        *out = new kfree_lattice{kfree::lat::make_preset(name)};
    });
}

kfree_status kfree_lattice_from_json(const char* text, kfree_lattice** out) {
    return guarded([&] {
        require(text && out, "null argument");
        *out = new kfree_lattice{kfree::lat::lattice_from_json(text)};
    });
}

void kfree_lattice_free(kfree_lattice* lattice) { delete lattice; }

int kfree_lattice_dim(const kfree_lattice* lattice) {
    return lattice ? lattice->impl.n : 0;
}

double kfree_lattice_det(const kfree_lattice* lattice) {
    return lattice ? static_cast<double>(lattice->impl.det) : 0.0;
}

double kfree_lattice_min_length(const kfree_lattice* lattice) {
    return lattice ? static_cast<double>(lattice->impl.lambda) : 0.0;
}

const char* kfree_lattice_name(const kfree_lattice* lattice) {
    return lattice ? lattice->impl.name.c_str() : "";
}

kfree_status kfree_lattice_basis(const kfree_lattice* lattice, double* out) {
    return guarded([&] {
        require(lattice && out, "null argument");
        int n = lattice->impl.n;
        for (int i = 0; i < n * n; ++i)
            out[i] = static_cast<double>(lattice->impl.basis[static_cast<size_t>(i)]);
    });
}

kfree_status kfree_lattice_dual(const kfree_lattice* lattice, kfree_lattice** out) {
    return guarded([&] {
        require(lattice && out, "null argument");
        *out = new kfree_lattice{kfree::lat::dual_lattice(lattice->impl)};
    });
}

/* ---- configurations ---- */

kfree_status kfree_config_new(const kfree_lattice* lattice, long long k,
                              kfree_config** out) {
    return guarded([&] {
        require(lattice && out, "null argument");
        *out = new kfree_config{kfree::sets::make_config(lattice->impl, k)};
    });
}

void kfree_config_free(kfree_config* config) { delete config; }

kfree_status kfree_config_set_threads(kfree_config* config, int threads) {
    return guarded([&] {
        require(config != nullptr, "null config");
        require(threads >= 1 && threads <= 64, "threads must be in [1, 64]");
        config->impl.threads = threads;
    });
}

kfree_status kfree_config_set_max_points(kfree_config* config, long long cap) {
    return guarded([&] {
        require(config != nullptr, "null config");
        require(cap >= 1, "cap must be positive");
        config->impl.max_points = cap;
    });
}

/* ---- number theory ---- */

kfree_status kfree_moebius(long long m, int* out) {
    return guarded([&] {
        require(out != nullptr, "null output");
        *out = kfree::nt::moebius(m);
    });
}

kfree_status kfree_tau_r(long long m, int r, long long* out) {
    return guarded([&] {
        require(out != nullptr, "null output");
        *out = kfree::nt::tau_r(m, r);
    });
}

kfree_status kfree_factorize(long long m, long long* primes, long long* exponents,
                             int cap, int* count) {
    return guarded([&] {
        require(count != nullptr, "null output");
        auto f = kfree::nt::factorize(m);
        *count = static_cast<int>(f.size());
        require(primes != nullptr && exponents != nullptr, "null output arrays");
        for (int i = 0; i < *count && i < cap; ++i) {
            primes[i] = f[static_cast<size_t>(i)].first;
            exponents[i] = f[static_cast<size_t>(i)].second;
        }
    });
}

kfree_status kfree_zeta(double s, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output");
        *out = static_cast<double>(kfree::nt::zeta(s));
    });
}

kfree_status kfree_prime_zeta(double s, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output");
        *out = static_cast<double>(kfree::nt::prime_zeta(s));
    });
}

kfree_status kfree_pi_r(long long r, double s, double* value, double* tail_bound) {
    return guarded([&] {
        require(value != nullptr, "null output");
        auto v = kfree::nt::pi_r(r, s);
        *value = static_cast<double>(v.value);
        if (tail_bound) *tail_bound = static_cast<double>(v.tail_bound);
    });
}

kfree_status kfree_xi(double s, double* value, double* tail_bound) {
    return guarded([&] {
        require(value != nullptr, "null output");
        auto v = kfree::nt::xi(s);
        *value = static_cast<double>(v.value);
        if (tail_bound) *tail_bound = static_cast<double>(v.tail_bound);
    });
}

/* ---- k-free sets ---- */

kfree_status kfree_k_content(const kfree_config* config, const long long* point,
                             int* is_infinite, long long* content) {
    return guarded([&] {
        require(config && is_infinite && content, "null argument");
        auto c = kfree::sets::k_content(config->impl, read_point(config, point));
        *is_infinite = c ? 0 : 1;
        *content = c ? *c : 0;
    });
}

kfree_status kfree_is_k_free(const kfree_config* config, const long long* point,
                             int* out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = kfree::sets::is_k_free(config->impl, read_point(config, point)) ? 1 : 0;
    });
}

kfree_status kfree_vp_member(const kfree_config* config, const long long* point,
                             long long P, int* out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = kfree::sets::vp_member(config->impl, read_point(config, point), P) ? 1 : 0;
    });
}

kfree_status kfree_density_empirical(const kfree_config* config, double R, double* out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = static_cast<double>(kfree::sets::density_empirical(config->impl, R));
    });
}

kfree_status kfree_density_limit(const kfree_config* config, double* out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = static_cast<double>(kfree::sets::density_limit(config->impl));
    });
}

kfree_status kfree_admissible(const kfree_config* config, const long long* points,
                              int count, int* out, long long* witness_prime) {
    return guarded([&] {
        require(config && out, "null argument");
        auto pts = read_points(config, points, count);
        auto witness = kfree::sets::admissible_witness(config->impl, pts);
        *out = witness ? 0 : 1;
        if (witness_prime) *witness_prime = witness ? *witness : 0;
    });
}

kfree_status kfree_locator_count(const kfree_config* config, const long long* inside,
                                 int n_inside, const long long* outside, int n_outside,
                                 const char* radius, long long* out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = kfree::sets::locator_count(config->impl, read_points(config, inside, n_inside),
                                          read_points(config, outside, n_outside),
                                          read_radius(radius));
    });
}

/* ---- patches ---- */

kfree_status kfree_patch_frequency(const kfree_config* config, const long long* occupied,
                                   int n_occupied, const long long* forbidden,
                                   int n_forbidden, double* value, double* error_bound) {
    return guarded([&] {
        require(config && value, "null argument");
        auto f = kfree::patch::patch_frequency(config->impl,
                                               read_points(config, occupied, n_occupied),
                                               read_points(config, forbidden, n_forbidden));
        *value = static_cast<double>(f.value);
        if (error_bound) *error_bound = static_cast<double>(f.error_bound);
    });
}

kfree_status kfree_n_rho_exact(const kfree_config* config, const char* radius,
                               long long* out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = kfree::patch::n_rho_exact(config->impl, read_radius(radius));
    });
}

kfree_status kfree_entropy_patch_counting(const kfree_config* config, const char* radius,
                                          double* out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = static_cast<double>(
            kfree::patch::entropy_patch_counting(config->impl, read_radius(radius)));
    });
}

kfree_status kfree_entropy_measure(const kfree_config* config, const char* radius,
                                   double* out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = static_cast<double>(
            kfree::patch::entropy_measure(config->impl, read_radius(radius)));
    });
}

kfree_status kfree_census_run(const kfree_config* config, const char* radius, double R,
                              kfree_census** out) {
    return guarded([&] {
        require(config && out, "null argument");
        auto census = kfree::patch::patch_census(config->impl, read_radius(radius), R);
        *out = new kfree_census{config->impl, std::move(census), {}};
    });
}

void kfree_census_free(kfree_census* census) { delete census; }

long long kfree_census_rows(const kfree_census* census) {
    return census ? static_cast<long long>(census->impl.rows.size()) : 0;
}

long long kfree_census_n_rho(const kfree_census* census) {
    return census ? census->impl.n_rho : 0;
}

kfree_status kfree_census_row(const kfree_census* census, long long row,
                              long long* coords, int coords_cap, int* size,
                              double* nu_closed, double* error_bound, long long* count,
                              double* nu_empirical, int* observed) {
    return guarded([&] {
        require(census != nullptr, "null census");
        require(row >= 0 && row < static_cast<long long>(census->impl.rows.size()),
                "census row out of range");
        const auto& r = census->impl.rows[static_cast<size_t>(row)];
        int n = census->cfg.n();
        int needed = static_cast<int>(r.occupied.size()) * n;
        if (size) *size = static_cast<int>(r.occupied.size());
        if (coords) {
            require(coords_cap >= needed, "coords buffer too small");
            int idx = 0;
            for (const auto& p : r.occupied)
                for (int c = 0; c < n; ++c) coords[idx++] = p[static_cast<size_t>(c)];
        }
        if (nu_closed) *nu_closed = static_cast<double>(r.closed.value);
        if (error_bound) *error_bound = static_cast<double>(r.closed.error_bound);
        if (count) *count = r.count;
        if (nu_empirical) *nu_empirical = static_cast<double>(r.empirical);
        if (observed) *observed = r.observed ? 1 : 0;
    });
}

kfree_status kfree_census_checks(const kfree_census* census, double* sum_nu,
                                 double* sum_residual, double* sum_bound,
                                 double* mean_size, double* mean_residual,
                                 double* mean_bound, int* pass) {
    return guarded([&] {
        require(census != nullptr, "null census");
        auto checks = kfree::patch::census_checks(census->cfg, census->impl);
        if (sum_nu) *sum_nu = static_cast<double>(checks.sum_nu);
        if (sum_residual) *sum_residual = static_cast<double>(checks.sum_residual);
        if (sum_bound) *sum_bound = static_cast<double>(checks.sum_bound);
        if (mean_size) *mean_size = static_cast<double>(checks.mean_size);
        if (mean_residual) *mean_residual = static_cast<double>(checks.mean_residual);
        if (mean_bound) *mean_bound = static_cast<double>(checks.mean_bound);
        if (pass) *pass = checks.pass ? 1 : 0;
    });
}

const char* kfree_census_render(kfree_census* census, int machine) {
    if (!census) return "";
    auto status = guarded([&] {
        census->rendered = machine
                               ? kfree::patch::render_census_json(census->cfg, census->impl)
                               : kfree::patch::render_census_table(census->cfg, census->impl);
    });
    return status == KFREE_OK ? census->rendered.c_str() : "";
}

/* ---- diffraction ---- */

kfree_status kfree_autocorr_weight(const kfree_config* config, const long long* point,
                                   double* out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = static_cast<double>(
            kfree::diffr::autocorr_weight(config->impl, read_point(config, point)));
    });
}

kfree_status kfree_autocorr_weight_empirical(const kfree_config* config,
                                             const long long* point, double R,
                                             double* out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = static_cast<double>(kfree::diffr::autocorr_weight_empirical(
            config->impl, read_point(config, point), R));
    });
}

kfree_status kfree_diffraction_intensity(const kfree_config* config, long long q,
                                         double* out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = static_cast<double>(kfree::diffr::diffraction_intensity(config->impl, q));
    });
}

kfree_status kfree_peaks_run(const kfree_config* config, const char* dual_radius,
                             long long q_max, kfree_peaks** out) {
    return guarded([&] {
        require(config && out, "null argument");
        auto peaks =
            kfree::diffr::peak_list(config->impl, read_radius(dual_radius), q_max);
        *out = new kfree_peaks{config->impl, std::move(peaks), {}};
    });
}

void kfree_peaks_free(kfree_peaks* peaks) { delete peaks; }

long long kfree_peaks_count(const kfree_peaks* peaks) {
    return peaks ? static_cast<long long>(peaks->impl.size()) : 0;
}

kfree_status kfree_peaks_row(const kfree_peaks* peaks, long long row, long long* nums,
                             long long* dens, int coords_cap, long long* q,
                             double* intensity, double* series_residual,
                             double* series_bound) {
    return guarded([&] {
        require(peaks != nullptr, "null peaks");
        require(row >= 0 && row < static_cast<long long>(peaks->impl.size()),
                "peak row out of range");
        const auto& p = peaks->impl[static_cast<size_t>(row)];
        int n = static_cast<int>(p.location.coords.size());
        if (nums || dens) {
            require(nums && dens, "both coordinate arrays are needed");
            require(coords_cap >= n, "coords buffer too small");
            for (int i = 0; i < n; ++i) {
                nums[i] = p.location.coords[static_cast<size_t>(i)].num;
                dens[i] = p.location.coords[static_cast<size_t>(i)].den;
            }
        }
        if (q) *q = p.location.q;
        if (intensity) *intensity = static_cast<double>(p.intensity);
        if (series_residual) *series_residual = static_cast<double>(p.series_residual);
        if (series_bound) *series_bound = static_cast<double>(p.series_bound);
    });
}

const char* kfree_peaks_render(kfree_peaks* peaks, int machine) {
    if (!peaks) return "";
    auto status = guarded([&] {
        peaks->rendered = machine
                              ? kfree::diffr::render_peaks_json(peaks->cfg, peaks->impl)
                              : kfree::diffr::render_peaks_table(peaks->cfg, peaks->impl);
    });
    return status == KFREE_OK ? peaks->rendered.c_str() : "";
}

/* ---- holes ---- */

namespace {

kfree_hole* wrap_hole(kfree::sets::Hole hole) {
    auto* out = new kfree_hole;
    out->modulus_str = hole.modulus.str();
    for (const auto& c : hole.offset) out->offset_str.push_back(c.str());
    out->impl = std::move(hole);
    return out;
}

}  // namespace

kfree_status kfree_find_hole(const kfree_config* config, const long long* points,
                             int count, kfree_hole** out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = wrap_hole(
            kfree::sets::find_hole(config->impl, read_points(config, points, count)));
    });
}

kfree_status kfree_hole_for_inradius(const kfree_config* config, const char* radius,
                                     kfree_hole** out) {
    return guarded([&] {
        require(config && out, "null argument");
        auto C = kfree::lat::points_in_ball(config->impl.lattice,
                                            kfree::lat::origin(config->impl.n()),
                                            read_radius(radius), config->impl.max_points,
                                            /*open=*/false);
        *out = wrap_hole(kfree::sets::find_hole(config->impl, C));
    });
}

void kfree_hole_free(kfree_hole* hole) { delete hole; }

int kfree_hole_verified(const kfree_hole* hole) {
    return hole && hole->impl.verified ? 1 : 0;
}

const char* kfree_hole_modulus(const kfree_hole* hole) {
    return hole ? hole->modulus_str.c_str() : "";
}

const char* kfree_hole_offset_coord(const kfree_hole* hole, int i) {
    if (!hole || i < 0 || i >= static_cast<int>(hole->offset_str.size())) return "";
    return hole->offset_str[static_cast<size_t>(i)].c_str();
}

double kfree_hole_center_density(const kfree_hole* hole) {
    return hole ? static_cast<double>(hole->impl.center_density) : 0.0;
}

int kfree_hole_prime_count(const kfree_hole* hole) {
    return hole ? static_cast<int>(hole->impl.primes.size()) : 0;
}

long long kfree_hole_prime(const kfree_hole* hole, int i) {
    if (!hole || i < 0 || i >= static_cast<int>(hole->impl.primes.size())) return 0;
    return hole->impl.primes[static_cast<size_t>(i)];
}

/* ---- difference set ---- */

kfree_status kfree_vv_check(const kfree_config* config, const char* radius,
                            double search_radius, kfree_vv_report** out) {
    return guarded([&] {
        require(config && out, "null argument");
        *out = new kfree_vv_report{kfree::diffr::difference_set_check(
            config->impl, read_radius(radius), search_radius)};
    });
}

void kfree_vv_free(kfree_vv_report* report) { delete report; }

int kfree_vv_all_found(const kfree_vv_report* report) {
    return report && report->impl.all_found ? 1 : 0;
}

long long kfree_vv_rows(const kfree_vv_report* report) {
    return report ? static_cast<long long>(report->impl.rows.size()) : 0;
}

kfree_status kfree_vv_row(const kfree_vv_report* report, long long row, long long* a,
                          long long* x, int* found) {
    return guarded([&] {
        require(report != nullptr, "null report");
        require(row >= 0 && row < static_cast<long long>(report->impl.rows.size()),
                "row out of range");
        const auto& r = report->impl.rows[static_cast<size_t>(row)];
        int n = static_cast<int>(r.a.size());
        if (a)
            for (int i = 0; i < n; ++i) a[i] = r.a[static_cast<size_t>(i)];
        if (x)
            for (int i = 0; i < n; ++i) x[i] = r.found ? r.x[static_cast<size_t>(i)] : 0;
        if (found) *found = r.found ? 1 : 0;
    });
}

}  // extern "C"

/*
 * kfree: exact and empirical statistics of the k-free points of a lattice.
 *
 * C interface over the core library: opaque handles, status-code returns,
 * thread-local error messages.  Points are arrays of n coordinates with
 * respect to the lattice basis.  Radius arguments are strings so that exact
 * values survive the boundary of an open ball: "2", "1.5", "3/2", "sqrt2".
 */

#ifndef KFREE_H
#define KFREE_H

#ifdef __cplusplus
extern "C" {
#endif

#define KFREE_API_VERSION 1

typedef enum kfree_status {
    KFREE_OK = 0,
    KFREE_ERR_DOMAIN = 1,   /* invalid argument or precondition violation */
    KFREE_ERR_RESOURCE = 2, /* configured enumeration/blowup cap exceeded */
    KFREE_ERR_INTERNAL = 3  /* internal verification failure */
} kfree_status;

/* message describing the most recent failure on this thread */
const char* kfree_last_error(void);

typedef struct kfree_lattice kfree_lattice;
typedef struct kfree_config kfree_config;
typedef struct kfree_census kfree_census;
typedef struct kfree_peaks kfree_peaks;
typedef struct kfree_hole kfree_hole;
typedef struct kfree_vv_report kfree_vv_report;

/* ---- lattices ------------------------------------------------------- */

/* presets: "Z1".."Z4", "A2" */
kfree_status kfree_lattice_preset(const char* name, kfree_lattice** out);
/* {"n":2,"basis":[[1,0],["1/2","0.5"]],"name":"..."}; entries are numbers
 * or "p/q" strings */
kfree_status kfree_lattice_from_json(const char* text, kfree_lattice** out);
void kfree_lattice_free(kfree_lattice* lattice);

int kfree_lattice_dim(const kfree_lattice* lattice);
double kfree_lattice_det(const kfree_lattice* lattice);
double kfree_lattice_min_length(const kfree_lattice* lattice);
const char* kfree_lattice_name(const kfree_lattice* lattice);
/* writes n*n row-major basis entries */
kfree_status kfree_lattice_basis(const kfree_lattice* lattice, double* out);
kfree_status kfree_lattice_dual(const kfree_lattice* lattice, kfree_lattice** out);

/* ---- configurations -------------------------------------------------- */

kfree_status kfree_config_new(const kfree_lattice* lattice, long long k,
                              kfree_config** out);
void kfree_config_free(kfree_config* config);
kfree_status kfree_config_set_threads(kfree_config* config, int threads);
kfree_status kfree_config_set_max_points(kfree_config* config, long long cap);

/* ---- elementary number theory ---------------------------------------- */

kfree_status kfree_moebius(long long m, int* out);
kfree_status kfree_tau_r(long long m, int r, long long* out);
/* fills up to cap prime/exponent pairs; count receives the total needed */
kfree_status kfree_factorize(long long m, long long* primes, long long* exponents,
                             int cap, int* count);
kfree_status kfree_zeta(double s, double* out);
kfree_status kfree_prime_zeta(double s, double* out);
kfree_status kfree_pi_r(long long r, double s, double* value, double* tail_bound);
kfree_status kfree_xi(double s, double* value, double* tail_bound);

/* ---- the k-free set --------------------------------------------------- */

kfree_status kfree_k_content(const kfree_config* config, const long long* point,
                             int* is_infinite, long long* content);
kfree_status kfree_is_k_free(const kfree_config* config, const long long* point,
                             int* out);
kfree_status kfree_vp_member(const kfree_config* config, const long long* point,
                             long long P, int* out);
kfree_status kfree_density_empirical(const kfree_config* config, double R, double* out);
kfree_status kfree_density_limit(const kfree_config* config, double* out);
/* points: count * n coordinates, row-major; witness_prime (optional) gets
 * the smallest violating prime when inadmissible */
kfree_status kfree_admissible(const kfree_config* config, const long long* points,
                              int count, int* out, long long* witness_prime);
kfree_status kfree_locator_count(const kfree_config* config, const long long* inside,
                                 int n_inside, const long long* outside, int n_outside,
                                 const char* radius, long long* out);

/* ---- patch statistics -------------------------------------------------- */

kfree_status kfree_patch_frequency(const kfree_config* config, const long long* occupied,
                                   int n_occupied, const long long* forbidden,
                                   int n_forbidden, double* value, double* error_bound);
kfree_status kfree_n_rho_exact(const kfree_config* config, const char* radius,
                               long long* out);
kfree_status kfree_entropy_patch_counting(const kfree_config* config, const char* radius,
                                          double* out);
kfree_status kfree_entropy_measure(const kfree_config* config, const char* radius,
                                   double* out);

kfree_status kfree_census_run(const kfree_config* config, const char* radius, double R,
                              kfree_census** out);
void kfree_census_free(kfree_census* census);
long long kfree_census_rows(const kfree_census* census);
long long kfree_census_n_rho(const kfree_census* census);
/* coords receives size*n entries; coords_cap is its capacity in entries */
kfree_status kfree_census_row(const kfree_census* census, long long row,
                              long long* coords, int coords_cap, int* size,
                              double* nu_closed, double* error_bound, long long* count,
                              double* nu_empirical, int* observed);
kfree_status kfree_census_checks(const kfree_census* census, double* sum_nu,
                                 double* sum_residual, double* sum_bound,
                                 double* mean_size, double* mean_residual,
                                 double* mean_bound, int* pass);
/* rendered export; machine != 0 selects the structured format.  The
 * returned pointer stays valid until the census handle is freed. */
const char* kfree_census_render(kfree_census* census, int machine);

/* ---- diffraction -------------------------------------------------------- */

kfree_status kfree_autocorr_weight(const kfree_config* config, const long long* point,
                                   double* out);
kfree_status kfree_autocorr_weight_empirical(const kfree_config* config,
                                             const long long* point, double R,
                                             double* out);
kfree_status kfree_diffraction_intensity(const kfree_config* config, long long q,
                                         double* out);

kfree_status kfree_peaks_run(const kfree_config* config, const char* dual_radius,
                             long long q_max, kfree_peaks** out);
void kfree_peaks_free(kfree_peaks* peaks);
long long kfree_peaks_count(const kfree_peaks* peaks);
/* nums/dens receive n reduced coordinate fractions */
kfree_status kfree_peaks_row(const kfree_peaks* peaks, long long row, long long* nums,
                             long long* dens, int coords_cap, long long* q,
                             double* intensity, double* series_residual,
                             double* series_bound);
const char* kfree_peaks_render(kfree_peaks* peaks, int machine);

/* ---- holes -------------------------------------------------------------- */

kfree_status kfree_find_hole(const kfree_config* config, const long long* points,
                             int count, kfree_hole** out);
/* covers every lattice point with norm <= radius */
kfree_status kfree_hole_for_inradius(const kfree_config* config, const char* radius,
                                     kfree_hole** out);
void kfree_hole_free(kfree_hole* hole);
int kfree_hole_verified(const kfree_hole* hole);
const char* kfree_hole_modulus(const kfree_hole* hole); /* decimal string */
const char* kfree_hole_offset_coord(const kfree_hole* hole, int i);
double kfree_hole_center_density(const kfree_hole* hole);
int kfree_hole_prime_count(const kfree_hole* hole);
long long kfree_hole_prime(const kfree_hole* hole, int i);

/* ---- difference set ------------------------------------------------------ */

kfree_status kfree_vv_check(const kfree_config* config, const char* radius,
                            double search_radius, kfree_vv_report** out);
void kfree_vv_free(kfree_vv_report* report);
int kfree_vv_all_found(const kfree_vv_report* report);
long long kfree_vv_rows(const kfree_vv_report* report);
kfree_status kfree_vv_row(const kfree_vv_report* report, long long row, long long* a,
                          long long* x, int* found);

#ifdef __cplusplus
}
#endif

#endif /* KFREE_H */

// Command-line front end over the kfree C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kfree/kfree.h"

namespace {

using nlohmann::json;

[[noreturn]] void die(kfree_status status) {
    std::fprintf(stderr, "error: %s\n", kfree_last_error());
    std::exit(static_cast<int>(status));
}

void check(kfree_status status) {
    if (status != KFREE_OK) die(status);
}

struct CommonOpts {
    std::string lattice = "Z1";
    long long k = 2;
    int threads = 1;
    long long max_points = 1'000'000'000;
    std::string format = "table";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--lattice", opts.lattice, "preset (Z1..Z4, A2) or JSON file path");
    cmd->add_option("--k", opts.k, "power k of the k-free condition");
    cmd->add_option("--threads", opts.threads, "worker threads for scans")
        ->check(CLI::Range(1, 64));
    cmd->add_option("--max-points", opts.max_points, "enumeration cap");
    cmd->add_option("--format", opts.format, "table | machine")
        ->check(CLI::IsMember({"table", "machine"}));
}

kfree_lattice* load_lattice(const std::string& spec) {
    kfree_lattice* lattice = nullptr;
    std::ifstream file(spec);
    if (file.good()) {
        std::stringstream buf;
        buf << file.rdbuf();
        check(kfree_lattice_from_json(buf.str().c_str(), &lattice));
    } else {
        check(kfree_lattice_preset(spec.c_str(), &lattice));
    }
    return lattice;
}

kfree_config* make_config(kfree_lattice* lattice, const CommonOpts& opts) {
    kfree_config* config = nullptr;
    check(kfree_config_new(lattice, opts.k, &config));
    check(kfree_config_set_threads(config, opts.threads));
    check(kfree_config_set_max_points(config, opts.max_points));
    return config;
}

std::vector<long long> parse_point(const std::string& text, int n) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    if (static_cast<int>(out.size()) != n) {
        std::fprintf(stderr, "error: point '%s' needs %d coordinates\n", text.c_str(), n);
        std::exit(1);
    }
    return out;
}

std::vector<long long> parse_point_list(const std::string& text, int n, int* count) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string item;
    *count = 0;
    while (std::getline(ss, item, ';')) {
        auto p = parse_point(item, n);
        out.insert(out.end(), p.begin(), p.end());
        ++*count;
    }
    return out;
}

int run_constants(double s, long long rmax, const std::string& format) {
    double zeta = 0;
    check(kfree_zeta(s, &zeta));
    double xiv = 0, xit = 0;
    check(kfree_xi(s, &xiv, &xit));
    std::vector<std::array<double, 2>> pis;
    for (long long r = 0; r <= rmax; ++r) {
        double v = 0, t = 0;
        check(kfree_pi_r(r, s, &v, &t));
        pis.push_back({v, t});
    }
    if (format == "machine") {
        json j;
        j["schema"] = "kfree.constants/1";
        j["s"] = s;
        j["zeta"] = zeta;
        j["xi"] = {{"value", xiv}, {"tail_bound", xit}};
        j["pi"] = json::array();
        for (long long r = 0; r <= rmax; ++r)
            j["pi"].push_back({{"r", r},
                               {"value", pis[static_cast<size_t>(r)][0]},
                               {"tail_bound", pis[static_cast<size_t>(r)][1]}});
        std::printf("%s\n", j.dump(2).c_str());
        return 0;
    }
    std::printf("# kfree constants schema=1\n");
    std::printf("# s=%.6f\n", s);
    std::printf("zeta\t%.13f\t-\n", zeta);
    std::printf("xi\t%.13f\t%.3e\n", xiv, xit);
    for (long long r = 0; r <= rmax; ++r)
        std::printf("Pi_%lld\t%.13f\t%.3e\n", r, pis[static_cast<size_t>(r)][0],
                    pis[static_cast<size_t>(r)][1]);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact and empirical statistics of k-free lattice points"};
    app.require_subcommand(1);

    // constants
    auto* c_const = app.add_subcommand("constants", "zeta, xi and Pi_r values with tail bounds");
    double const_s = 2.0;
    long long const_rmax = 5;
    std::string const_format = "table";
    c_const->add_option("--s", const_s, "argument s > 1");
    c_const->add_option("--rmax", const_rmax, "largest r for Pi_r")->check(CLI::Range(0, 40));
    c_const->add_option("--format", const_format)->check(CLI::IsMember({"table", "machine"}));

    // patches
    auto* c_patches = app.add_subcommand("patches", "patch census with closed-form frequencies");
    CommonOpts o_patches;
    add_common(c_patches, o_patches);
    std::string patches_rho = "2";
    double patches_R = 100000;
    c_patches->add_option("--rho", patches_rho, "patch radius (real, p/q or sqrtN)");
    c_patches->add_option("--R", patches_R, "scan window radius");

    // entropy
    auto* c_entropy = app.add_subcommand("entropy", "N(rho) and entropy estimates");
    CommonOpts o_entropy;
    add_common(c_entropy, o_entropy);
    std::vector<std::string> entropy_rhos;
    c_entropy->add_option("--rho", entropy_rhos, "radii (repeatable)")->required();

    // density
    auto* c_density = app.add_subcommand("density", "empirical density against 1/zeta(nk)");
    CommonOpts o_density;
    add_common(c_density, o_density);
    double density_R = 1000;
    c_density->add_option("--R", density_R, "window radius");

    // autocorr
    auto* c_auto = app.add_subcommand("autocorr", "autocorrelation weights, closed and empirical");
    CommonOpts o_auto;
    add_common(c_auto, o_auto);
    std::vector<std::string> auto_points;
    double auto_R = 0;
    c_auto->add_option("--point", auto_points, "lattice point 'x,y' (repeatable)")->required();
    c_auto->add_option("--R", auto_R, "window for the empirical weight (0 = closed only)");

    // diffraction
    auto* c_diffr = app.add_subcommand("diffraction", "Bragg peaks on the rational dual lattice");
    CommonOpts o_diffr;
    add_common(c_diffr, o_diffr);
    std::string diffr_radius = "1.05";
    long long diffr_qmax = 4;
    c_diffr->add_option("--dual-radius", diffr_radius, "dual-space radius");
    c_diffr->add_option("--qmax", diffr_qmax, "largest peak denominator");

    // holes
    auto* c_holes = app.add_subcommand("holes", "CRT hole covering a ball");
    CommonOpts o_holes;
    add_common(c_holes, o_holes);
    std::string holes_inradius = "3";
    c_holes->add_option("--inradius", holes_inradius, "ball radius the hole must cover");

    // admissible
    auto* c_adm = app.add_subcommand("admissible", "admissibility of a finite point set");
    CommonOpts o_adm;
    add_common(c_adm, o_adm);
    std::string adm_points;
    c_adm->add_option("--points", adm_points, "point list 'x,y;x,y;...'")->required();

    CLI11_PARSE(app, argc, argv);

    if (c_const->parsed()) return run_constants(const_s, const_rmax, const_format);

    auto with_config = [&](const CommonOpts& opts, auto&& fn) {
        kfree_lattice* lattice = load_lattice(opts.lattice);
        kfree_config* config = make_config(lattice, opts);
        int rc = fn(lattice, config);
        kfree_config_free(config);
        kfree_lattice_free(lattice);
        return rc;
    };

    if (c_patches->parsed())
        return with_config(o_patches, [&](kfree_lattice*, kfree_config* config) {
            kfree_census* census = nullptr;
            check(kfree_census_run(config, patches_rho.c_str(), patches_R, &census));
            std::printf("%s", kfree_census_render(census, o_patches.format == "machine"));
            int pass = 0;
            check(kfree_census_checks(census, nullptr, nullptr, nullptr, nullptr, nullptr,
                                      nullptr, &pass));
            kfree_census_free(census);
            return pass ? 0 : 3;
        });

    if (c_entropy->parsed())
        return with_config(o_entropy, [&](kfree_lattice*, kfree_config* config) {
            double target = 0;
            check(kfree_density_limit(config, &target));
            if (o_entropy.format == "machine") {
                json j;
                j["schema"] = "kfree.entropy/1";
                j["lattice"] = o_entropy.lattice;
                j["k"] = o_entropy.k;
                j["target"] = target;
                j["rows"] = json::array();
                for (const auto& rho : entropy_rhos) {
                    long long n = 0;
                    double ht = 0, hm = 0;
                    check(kfree_n_rho_exact(config, rho.c_str(), &n));
                    check(kfree_entropy_patch_counting(config, rho.c_str(), &ht));
                    check(kfree_entropy_measure(config, rho.c_str(), &hm));
                    j["rows"].push_back({{"rho", rho}, {"N", n}, {"h_T", ht}, {"h_M", hm}});
                }
                std::printf("%s\n", j.dump(2).c_str());
                return 0;
            }
            std::printf("# kfree entropy schema=1\n");
            std::printf("# lattice=%s k=%lld target=%.12f\n", o_entropy.lattice.c_str(),
                        o_entropy.k, target);
            std::printf("# columns: rho N h_T h_M\n");
            for (const auto& rho : entropy_rhos) {
                long long n = 0;
                double ht = 0, hm = 0;
                check(kfree_n_rho_exact(config, rho.c_str(), &n));
                check(kfree_entropy_patch_counting(config, rho.c_str(), &ht));
                check(kfree_entropy_measure(config, rho.c_str(), &hm));
                std::printf("%s\t%lld\t%.12f\t%.12f\n", rho.c_str(), n, ht, hm);
            }
            return 0;
        });

    if (c_density->parsed())
        return with_config(o_density, [&](kfree_lattice*, kfree_config* config) {
            double emp = 0, target = 0;
            check(kfree_density_empirical(config, density_R, &emp));
            check(kfree_density_limit(config, &target));
            if (o_density.format == "machine") {
                json j;
                j["schema"] = "kfree.density/1";
                j["lattice"] = o_density.lattice;
                j["k"] = o_density.k;
                j["R"] = density_R;
                j["empirical"] = emp;
                j["target"] = target;
                std::printf("%s\n", j.dump(2).c_str());
                return 0;
            }
            std::printf("# kfree density schema=1\n");
            std::printf("# lattice=%s k=%lld R=%g\n", o_density.lattice.c_str(), o_density.k,
                        density_R);
            std::printf("empirical\t%.12f\n", emp);
            std::printf("target\t%.12f\n", target);
            std::printf("abs_diff\t%.3e\n", std::abs(emp - target));
            return 0;
        });

    if (c_auto->parsed())
        return with_config(o_auto, [&](kfree_lattice* lattice, kfree_config* config) {
            int n = kfree_lattice_dim(lattice);
            json rows = json::array();
            if (o_auto.format == "table") {
                std::printf("# kfree autocorr schema=1\n");
                std::printf("# lattice=%s k=%lld R=%g\n", o_auto.lattice.c_str(), o_auto.k,
                            auto_R);
                std::printf("# columns: point w_closed w_empirical\n");
            }
            for (const auto& spec : auto_points) {
                auto p = parse_point(spec, n);
                double closed = 0;
                check(kfree_autocorr_weight(config, p.data(), &closed));
                double emp = 0;
                bool have_emp = auto_R > 0;
                if (have_emp)
                    check(kfree_autocorr_weight_empirical(config, p.data(), auto_R, &emp));
                if (o_auto.format == "machine") {
                    json row;
                    row["point"] = p;
                    row["closed"] = closed;
                    if (have_emp) row["empirical"] = emp;
                    rows.push_back(std::move(row));
                } else if (have_emp) {
                    std::printf("(%s)\t%.12f\t%.12f\n", spec.c_str(), closed, emp);
                } else {
                    std::printf("(%s)\t%.12f\t-\n", spec.c_str(), closed);
                }
            }
            if (o_auto.format == "machine") {
                json j;
                j["schema"] = "kfree.autocorr/1";
                j["lattice"] = o_auto.lattice;
                j["k"] = o_auto.k;
                j["R"] = auto_R;
                j["rows"] = std::move(rows);
                std::printf("%s\n", j.dump(2).c_str());
            }
            return 0;
        });

    if (c_diffr->parsed())
        return with_config(o_diffr, [&](kfree_lattice*, kfree_config* config) {
            kfree_peaks* peaks = nullptr;
            check(kfree_peaks_run(config, diffr_radius.c_str(), diffr_qmax, &peaks));
            std::printf("%s", kfree_peaks_render(peaks, o_diffr.format == "machine"));
            kfree_peaks_free(peaks);
            return 0;
        });

    if (c_holes->parsed())
        return with_config(o_holes, [&](kfree_lattice* lattice, kfree_config* config) {
            kfree_hole* hole = nullptr;
            check(kfree_hole_for_inradius(config, holes_inradius.c_str(), &hole));
            int n = kfree_lattice_dim(lattice);
            bool verified = kfree_hole_verified(hole) != 0;
            if (o_holes.format == "machine") {
                json j;
                j["schema"] = "kfree.hole/1";
                j["lattice"] = o_holes.lattice;
                j["k"] = o_holes.k;
                j["inradius"] = holes_inradius;
                j["offset"] = json::array();
                for (int i = 0; i < n; ++i) j["offset"].push_back(kfree_hole_offset_coord(hole, i));
                j["modulus"] = kfree_hole_modulus(hole);
                j["primes"] = json::array();
                for (int i = 0; i < kfree_hole_prime_count(hole); ++i)
                    j["primes"].push_back(kfree_hole_prime(hole, i));
                j["verified"] = verified;
                j["center_density"] = kfree_hole_center_density(hole);
                std::printf("%s\n", j.dump(2).c_str());
            } else {
                std::printf("# kfree hole schema=1\n");
                std::printf("# lattice=%s k=%lld inradius=%s\n", o_holes.lattice.c_str(),
                            o_holes.k, holes_inradius.c_str());
                std::printf("offset\t(");
                for (int i = 0; i < n; ++i)
                    std::printf("%s%s", i ? "," : "", kfree_hole_offset_coord(hole, i));
                std::printf(")\n");
                std::printf("modulus\t%s\n", kfree_hole_modulus(hole));
                std::printf("moduli_primes\t");
                for (int i = 0; i < kfree_hole_prime_count(hole); ++i)
                    std::printf("%s%lld", i ? "," : "", kfree_hole_prime(hole, i));
                std::printf("\n");
                std::printf("verified\t%s\n", verified ? "yes" : "no");
                std::printf("center_density\t%.6e\n", kfree_hole_center_density(hole));
            }
            kfree_hole_free(hole);
            // a failed verification would mean a construction bug
            return verified ? 0 : 3;
        });

    if (c_adm->parsed())
        return with_config(o_adm, [&](kfree_lattice* lattice, kfree_config* config) {
            int n = kfree_lattice_dim(lattice);
            int count = 0;
            auto pts = parse_point_list(adm_points, n, &count);
            int ok = 0;
            long long witness = 0;
            check(kfree_admissible(config, pts.data(), count, &ok, &witness));
            if (o_adm.format == "machine") {
                json j;
                j["schema"] = "kfree.admissible/1";
                j["lattice"] = o_adm.lattice;
                j["k"] = o_adm.k;
                j["points"] = adm_points;
                j["admissible"] = ok != 0;
                if (!ok) j["witness_prime"] = witness;
                std::printf("%s\n", j.dump(2).c_str());
            } else {
                std::printf("# kfree admissible schema=1\n");
                std::printf("admissible\t%s\n", ok ? "yes" : "no");
                if (!ok) std::printf("witness_prime\t%lld\n", witness);
            }
            return 0;
        });

    return 0;
}

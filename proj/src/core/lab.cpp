#include "gammalab/lab.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "gammalab/anneal.hpp"
#include "gammalab/constants.hpp"
#include "gammalab/correlation.hpp"
#include "gammalab/energy.hpp"
#include "gammalab/io.hpp"
#include "gammalab/kernels.hpp"
#include "gammalab/verify.hpp"

namespace gammalab {

namespace {

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::kernel_inadmissible ? 2 : 1;
}

std::string out_path(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  return (std::filesystem::path(out_dir) / name).string();
}

std::vector<std::string> manifest_comments(const Config& cfg) {
  std::vector<std::string> out;
  for (const auto& [k, v] : cfg.items()) out.push_back(k + "=" + v);
  return out;
}

}  // namespace

int run_gamma_crit(const std::string& kernel_spec, int dim) {
  try {
    Kernel k = make_kernel(kernel_spec, dim);
    IntegratedKernelTable t = integrated_kernel(k);
    double a = t.gamma_crit(), b = t.gamma_crit_phi_route();
    std::printf("kernel          %s\n", kernel_spec.c_str());
    std::printf("n               %d\n", dim);
    std::printf("first_moment    %.12f\n", t.first_moment());
    std::printf("phi_l1_norm     %.12f\n", t.l1_norm());
    std::printf("gamma_crit      %.12f\n", a);
    std::printf("gamma_crit_phi  %.12f\n", b);
    std::printf("relative_gap    %.3e\n", std::abs(a - b) / a);
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "gamma-crit: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "gamma-crit: %s\n", e.what());
    return 1;
  }
}

int run_sweep(const std::string& config_path, const std::string& out_dir) {
  try {
    Config cfg = parse_config_file(config_path);
    cfg.require_known({"kernel", "n", "gamma", "shape", "grid", "epsilons"});
    int dim = static_cast<int>(cfg.number_or("n", 2));
    Kernel k = make_kernel(cfg.get("kernel"), dim);
    IntegratedKernelTable table = integrated_kernel(k);
    double gamma = parse_gamma(cfg.get("gamma"), table.gamma_crit());
    ShapeSpec shape = parse_shape(cfg.get("shape"), dim);
    int grid_n = static_cast<int>(cfg.number_or("grid", 1024));
    std::vector<double> epsilons = cfg.number_list("epsilons");

    SweepResult sweep = epsilon_sweep(shape, k, gamma, epsilons, grid_n);
    double limit =
        gamma_limit_energy(shape_perimeter(shape), gamma, table.gamma_crit());

    std::vector<std::vector<std::string>> rows;
    PlotSeries series;
    series.label = "E_total";
    for (const auto& row : sweep.rows) {
      rows.push_back({format_number(row.energy.epsilon),
                      format_number(row.energy.total),
                      format_number(row.energy.perimeter_term),
                      format_number(row.energy.nonlocal_term),
                      format_number(row.i1), format_number(row.i2),
                      format_number(row.i3)});
      series.x.push_back(row.energy.epsilon);
      series.y.push_back(row.energy.total);
    }
    auto comments = manifest_comments(cfg);
    comments.push_back("gamma_value=" + format_number(gamma));
    comments.push_back("gamma_crit=" + format_number(table.gamma_crit()));
    comments.push_back("extrapolated_limit=" +
                       format_number(sweep.extrapolated_limit));
    comments.push_back("limit_energy=" + format_number(limit));
    comments.push_back(std::string("extrapolation_model=") +
                       sweep.extrapolation_model);
    write_csv(out_path(out_dir, "sweep.csv"), comments,
              {"epsilon", "total", "perimeter_term", "nonlocal_term", "i1",
               "i2", "i3"},
              rows);
    write_svg_plot(out_path(out_dir, "sweep.svg"),
                   "Energy vs epsilon (reference: limit energy)", "epsilon",
                   "E_total", {series}, limit);
    std::printf("sweep: %zu epsilons, extrapolated limit %.6f (target %.6f)\n",
                sweep.rows.size(), sweep.extrapolated_limit, limit);
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "sweep: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sweep: %s\n", e.what());
    return 1;
  }
}

int run_anneal(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override) {
  try {
    Config cfg = parse_config_file(config_path);
    cfg.require_known({"kernel", "n", "gamma", "shape", "grid", "eps", "steps",
                       "t0", "decay", "swap_distance", "seed", "record_every",
                       "init"});
    int dim = static_cast<int>(cfg.number_or("n", 2));
    Kernel k = make_kernel(cfg.get("kernel"), dim);
    IntegratedKernelTable table = integrated_kernel(k);
    double gamma = parse_gamma(cfg.get("gamma"), table.gamma_crit());
    ShapeSpec shape = parse_shape(cfg.get("shape"), dim);
    TorusGrid grid = make_grid(dim, static_cast<int>(cfg.number_or("grid", 128)));
    double eps = cfg.number_or("eps", 8.0 * grid.cell());

    AnnealConfig acfg;
    acfg.steps = static_cast<std::int64_t>(cfg.number_or("steps", 200000));
    acfg.t0 = cfg.number_or("t0", 0.02);
    acfg.decay =
        cfg.number_or("decay", std::pow(1e-3, 1.0 / std::max<double>(acfg.steps, 1)));
    acfg.swap_distance = static_cast<int>(cfg.number_or("swap_distance", 0));
    acfg.seed = static_cast<std::uint64_t>(cfg.number_or("seed", 1));
    if (seed_override) acfg.seed = *seed_override;
    acfg.record_every =
        static_cast<std::int64_t>(cfg.number_or("record_every", 20000));

    BinaryField f0 = rasterize(shape, grid);
    std::string init = cfg.get_or("init", "shape");
    if (init == "random") {
      f0 = random_field(grid, shape_volume(shape), acfg.seed * 31 + 5);
    } else if (init.rfind("scatter:", 0) == 0) {
      f0 = scatter_fraction(f0, std::stod(init.substr(8)), acfg.seed * 31 + 5);
    } else {
      require(init == "shape", ErrorCode::invalid_argument,
              "anneal: init must be shape, random or scatter:<fraction>");
    }

    Trajectory traj = anneal(f0, k, gamma, eps, acfg);

    std::vector<std::vector<std::string>> rows;
    for (const auto& s : traj.snapshots)
      rows.push_back({std::to_string(s.step), format_number(s.energy.total),
                      format_number(s.energy.perimeter_term),
                      format_number(s.energy.nonlocal_term)});
    auto comments = manifest_comments(cfg);
    comments.push_back("gamma_value=" + format_number(gamma));
    comments.push_back("seed=" + std::to_string(acfg.seed));
    comments.push_back("accepted=" + std::to_string(traj.accepted));
    write_csv(out_path(out_dir, "trajectory.csv"), comments,
              {"step", "total", "perimeter_term", "nonlocal_term"}, rows);
    write_pgm(traj.final_field, out_path(out_dir, "final.pgm"));

    // plain-text manifest next to the field
    {
      std::FILE* fp =
          std::fopen(out_path(out_dir, "final.manifest").c_str(), "wb");
      require(fp != nullptr, ErrorCode::io_error, "anneal: manifest open failed");
      std::fprintf(fp, "shape=%s\n", format_shape(shape).c_str());
      std::fprintf(fp, "grid=%d\n", grid.samples);
      std::fprintf(fp, "n=%d\n", dim);
      std::fprintf(fp, "volume_fraction=%s\n",
                   format_number(traj.final_field.volume_fraction()).c_str());
      std::fprintf(fp, "checksum=%llx\n",
                   static_cast<unsigned long long>(
                       field_checksum(traj.final_field)));
      std::fclose(fp);
    }

    MinimizerClass cls = classify_minimizer(traj.final_field);
    std::printf("classification: %s\n", minimizer_class_name(cls));
    std::printf("final energy: %.6f after %lld steps (%lld accepted)\n",
                traj.snapshots.back().energy.total,
                static_cast<long long>(acfg.steps),
                static_cast<long long>(traj.accepted));
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "anneal: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "anneal: %s\n", e.what());
    return 1;
  }
}

int run_autocorr(const std::string& config_path, const std::string& out_dir) {
  try {
    Config cfg = parse_config_file(config_path);
    cfg.require_known(
        {"shape", "n", "grid", "bins", "fit_degree", "fit_lo", "fit_hi"});
    int dim = static_cast<int>(cfg.number_or("n", 2));
    ShapeSpec shape = parse_shape(cfg.get("shape"), dim);
    TorusGrid grid = make_grid(dim, static_cast<int>(cfg.number_or("grid", 512)));
    int bins = static_cast<int>(cfg.number_or("bins", 4.0 * grid.samples));

    BinaryField f = rasterize(shape, grid);
    CorrelationMap map = correlation_map(f);
    RadialCorrelation rc = radial_average(map, bins);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < rc.radii.size(); ++i)
      rows.push_back({format_number(rc.radii[i]), format_number(rc.c[i]),
                      std::to_string(rc.counts[i])});
    write_csv(out_path(out_dir, "radial.csv"), manifest_comments(cfg),
              {"r", "c", "count"}, rows);

    PerimeterEstimate slope = perimeter_from_slope(rc);
    std::printf("volume_fraction  %.9f\n", f.volume_fraction());
    std::printf("perimeter_slope  %.6f +/- %.6f\n", slope.value,
                slope.uncertainty);
    std::printf("perimeter_l1     %.6f\n", l1_interface_perimeter(f).value);

    int degree = static_cast<int>(cfg.number_or("fit_degree", dim));
    double lo = cfg.number_or("fit_lo", 0.01);
    double hi = cfg.number_or("fit_hi", 0.2);
    SmallRFit fit = fit_small_r_polynomial(rc, degree, lo, hi);
    std::vector<std::vector<std::string>> frows;
    for (std::size_t j = 0; j < fit.a.size(); ++j)
      frows.push_back({std::to_string(j + 1), format_number(fit.a[j])});
    write_csv(out_path(out_dir, "fit.csv"),
              {"window=[" + format_number(lo) + "," + format_number(hi) + "]",
               "residual=" + format_number(fit.residual)},
              {"j", "a_j"}, frows);
    std::printf("fit a1           %.6f\n", fit.a[0]);
    if (fit.a.size() > 1) std::printf("fit a2           %.6f\n", fit.a[1]);
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "autocorr: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "autocorr: %s\n", e.what());
    return 1;
  }
}

int run_verify(const std::string& level, const std::string& out_dir) {
  try {
    require(level == "fast" || level == "full", ErrorCode::invalid_argument,
            "verify: level must be fast or full");
    auto results = run_verification(level == "full" ? VerifyLevel::full
                                                    : VerifyLevel::fast);
    std::vector<std::vector<std::string>> rows;
    int failures = 0;
    for (const auto& r : results) {
      rows.push_back({r.name, r.pass ? "pass" : "fail",
                      format_number(r.seconds), r.detail});
      std::printf("[%s] %-28s %7.2fs  %s\n", r.pass ? "pass" : "FAIL",
                  r.name.c_str(), r.seconds, r.pass ? "" : r.detail.c_str());
      if (!r.pass) ++failures;
    }
    write_csv(out_path(out_dir, "verify.csv"), {"level=" + level},
              {"check", "status", "seconds", "detail"}, rows);
    if (failures > 0) {
      std::fprintf(stderr, "verify: %d check(s) failed\n", failures);
      return 3;
    }
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "verify: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "verify: %s\n", e.what());
    return 1;
  }
}

}  // namespace gammalab

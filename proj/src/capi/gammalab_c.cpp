#include "gammalab.h"

#include <cstring>
#include <string>

#include "gammalab/anneal.hpp"
#include "gammalab/bessel.hpp"
#include "gammalab/correlation.hpp"
#include "gammalab/energy.hpp"
#include "gammalab/io.hpp"
#include "gammalab/kernels.hpp"
#include "gammalab/lab.hpp"
#include "gammalab/shapes.hpp"

using namespace gammalab;

namespace {

thread_local std::string g_last_error;

gl_status status_of(const Error& e) {
  g_last_error = e.what();
  switch (e.code()) {
    case ErrorCode::invalid_argument: return GL_ERR_INVALID_ARGUMENT;
    case ErrorCode::non_power_of_two: return GL_ERR_NON_POWER_OF_TWO;
    case ErrorCode::dimension_mismatch: return GL_ERR_DIMENSION_MISMATCH;
    case ErrorCode::kernel_inadmissible: return GL_ERR_KERNEL_INADMISSIBLE;
    case ErrorCode::degenerate_moment: return GL_ERR_DEGENERATE_MOMENT;
    case ErrorCode::under_resolved: return GL_ERR_UNDER_RESOLVED;
    case ErrorCode::insufficient_resolution: return GL_ERR_INSUFFICIENT_RESOLUTION;
    case ErrorCode::out_of_analytic_range: return GL_ERR_OUT_OF_ANALYTIC_RANGE;
    case ErrorCode::ill_conditioned_fit: return GL_ERR_ILL_CONDITIONED;
    case ErrorCode::truncation_failure: return GL_ERR_TRUNCATION;
    case ErrorCode::io_error: return GL_ERR_IO;
    default: return GL_ERR_INTERNAL;
  }
}

template <typename Fn>
gl_status guarded(Fn&& fn) {
  try {
    fn();
    return GL_OK;
  } catch (const Error& e) {
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GL_ERR_INTERNAL;
  }
}

gl_status check_args(bool ok) {
  if (!ok) {
    g_last_error = "null argument";
    return GL_ERR_INVALID_ARGUMENT;
  }
  return GL_OK;
}

}  // namespace

struct gl_kernel {
  Kernel kernel;
};
struct gl_shape {
  ShapeSpec shape;
};
struct gl_field {
  BinaryField field;
};
struct gl_radial {
  RadialCorrelation rc;
};
struct gl_trajectory {
  Trajectory traj;
};

extern "C" {

const char* gl_last_error(void) { return g_last_error.c_str(); }

gl_status gl_kernel_create(const char* spec, int dim, gl_kernel** out) {
  if (auto s = check_args(spec && out)) return s;
  return guarded([&] { *out = new gl_kernel{make_kernel(spec, dim)}; });
}

void gl_kernel_free(gl_kernel* k) { delete k; }

gl_status gl_kernel_query(const gl_kernel* k, gl_kernel_info* out) {
  if (auto s = check_args(k && out)) return s;
  return guarded([&] {
    HypothesesReport rep = verify_hypotheses(k->kernel);
    out->h1 = rep.h1;
    out->h2 = rep.h2;
    out->h3 = rep.h3;
    out->total_mass = k->kernel.total_mass;
    IntegratedKernelTable t = integrated_kernel(k->kernel);
    out->first_moment = t.first_moment();
    out->phi_l1 = t.l1_norm();
    out->gamma_crit = t.gamma_crit();
    out->gamma_crit_phi = t.gamma_crit_phi_route();
  });
}

gl_status gl_kernel_phi(const gl_kernel* k, double r, double* out) {
  if (auto s = check_args(k && out)) return s;
  return guarded([&] { *out = integrated_kernel(k->kernel).phi(r); });
}

gl_status gl_kernel_profile(const gl_kernel* k, double r, double* out) {
  if (auto s = check_args(k && out)) return s;
  return guarded([&] {
    require(r > 0.0, ErrorCode::invalid_argument, "profile: r must be positive");
    *out = k->kernel.profile(r);
  });
}

gl_status gl_kernel_write_phi_csv(const gl_kernel* k, const char* path) {
  if (auto s = check_args(k && path)) return s;
  return guarded([&] {
    IntegratedKernelTable t = integrated_kernel(k->kernel);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < t.radii().size(); ++i)
      rows.push_back({format_number(t.radii()[i]), format_number(t.values()[i])});
    write_csv(path, {"kernel=" + k->kernel.name}, {"r", "phi"}, rows);
  });
}

gl_status gl_bessel_k(double nu, double r, double* out) {
  if (auto s = check_args(out != nullptr)) return s;
  return guarded([&] { *out = bessel_k(nu, r); });
}

gl_status gl_q_crit(double gamma_crit, double sqrt_w_integral, double* out) {
  if (auto s = check_args(out != nullptr)) return s;
  return guarded([&] { *out = q_crit(gamma_crit, sqrt_w_integral); });
}

gl_status gl_ball_laminate_threshold(int dim, double* out) {
  if (auto s = check_args(out != nullptr)) return s;
  return guarded([&] { *out = ball_laminate_threshold(dim); });
}

gl_status gl_shape_parse(const char* line, int dim, gl_shape** out) {
  if (auto s = check_args(line && out)) return s;
  return guarded([&] { *out = new gl_shape{parse_shape(line, dim)}; });
}

void gl_shape_free(gl_shape* s) { delete s; }

gl_status gl_shape_volume(const gl_shape* s, double* out) {
  if (auto st = check_args(s && out)) return st;
  return guarded([&] { *out = shape_volume(s->shape); });
}

gl_status gl_shape_perimeter(const gl_shape* s, double* out) {
  if (auto st = check_args(s && out)) return st;
  return guarded([&] { *out = shape_perimeter(s->shape).value; });
}

gl_status gl_shape_format(const gl_shape* s, char* buf, size_t buf_len) {
  if (auto st = check_args(s && buf && buf_len > 0)) return st;
  return guarded([&] {
    std::string text = format_shape(s->shape);
    require(text.size() + 1 <= buf_len, ErrorCode::invalid_argument,
            "shape_format: buffer too small");
    std::memcpy(buf, text.c_str(), text.size() + 1);
  });
}

gl_status gl_field_rasterize(const gl_shape* s, int samples, gl_field** out) {
  if (auto st = check_args(s && out)) return st;
  return guarded([&] {
    TorusGrid grid = make_grid(s->shape.dim, samples);
    *out = new gl_field{rasterize(s->shape, grid)};
  });
}

void gl_field_free(gl_field* f) { delete f; }

gl_status gl_field_volume_fraction(const gl_field* f, double* out) {
  if (auto st = check_args(f && out)) return st;
  *out = f->field.volume_fraction();
  return GL_OK;
}

gl_status gl_field_l1_perimeter(const gl_field* f, double* out) {
  if (auto st = check_args(f && out)) return st;
  return guarded([&] { *out = l1_interface_perimeter(f->field).value; });
}

gl_status gl_field_checksum(const gl_field* f, uint64_t* out) {
  if (auto st = check_args(f && out)) return st;
  *out = field_checksum(f->field);
  return GL_OK;
}

gl_status gl_field_write_pgm(const gl_field* f, const char* path) {
  if (auto st = check_args(f && path)) return st;
  return guarded([&] { write_pgm(f->field, path); });
}

gl_status gl_field_radial(const gl_field* f, int bins, gl_radial** out) {
  if (auto st = check_args(f && out)) return st;
  return guarded([&] {
    *out = new gl_radial{radial_average(correlation_map(f->field), bins)};
  });
}

void gl_radial_free(gl_radial* rc) { delete rc; }

gl_status gl_radial_write_csv(const gl_radial* rc, const char* path) {
  if (auto st = check_args(rc && path)) return st;
  return guarded([&] {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < rc->rc.radii.size(); ++i)
      rows.push_back({format_number(rc->rc.radii[i]), format_number(rc->rc.c[i]),
                      std::to_string(rc->rc.counts[i])});
    write_csv(path, {}, {"r", "c", "count"}, rows);
  });
}

gl_status gl_radial_perimeter(const gl_radial* rc, double* value,
                              double* uncertainty) {
  if (auto st = check_args(rc && value)) return st;
  return guarded([&] {
    PerimeterEstimate p = perimeter_from_slope(rc->rc);
    *value = p.value;
    if (uncertainty) *uncertainty = p.uncertainty;
  });
}

gl_status gl_radial_fit(const gl_radial* rc, int degree, double r_lo,
                        double r_hi, double* coeffs, double* residual) {
  if (auto st = check_args(rc && coeffs)) return st;
  return guarded([&] {
    SmallRFit fit = fit_small_r_polynomial(rc->rc, degree, r_lo, r_hi);
    for (int j = 0; j < degree; ++j) coeffs[j] = fit.a[j];
    if (residual) *residual = fit.residual;
  });
}

namespace {

void fill_energy(const EnergyBreakdown& e, gl_energy* out) {
  out->perimeter_term = e.perimeter_term;
  out->nonlocal_term = e.nonlocal_term;
  out->total = e.total;
  out->epsilon = e.epsilon;
  out->gamma = e.gamma;
  out->uncertainty = e.uncertainty;
}

}  // namespace

gl_status gl_energy_direct(const gl_field* f, const gl_kernel* k, double gamma,
                           double eps, const double* analytic_perimeter,
                           gl_energy* out) {
  if (auto st = check_args(f && k && out)) return st;
  return guarded([&] {
    PerimeterEstimate p;
    const PerimeterEstimate* pp = nullptr;
    if (analytic_perimeter) {
      p = PerimeterEstimate{*analytic_perimeter, PerimeterMethod::analytic, 0.0};
      pp = &p;
    }
    fill_energy(energy_direct(f->field, k->kernel, gamma, eps, pp), out);
  });
}

gl_status gl_energy_autocorr(const gl_radial* rc, const gl_kernel* k,
                             double gamma, double eps, double perimeter,
                             gl_energy* out) {
  if (auto st = check_args(rc && k && out)) return st;
  return guarded([&] {
    PerimeterEstimate p{perimeter, PerimeterMethod::analytic, 0.0};
    fill_energy(energy_autocorr(rc->rc, k->kernel, gamma, eps, p), out);
  });
}

gl_status gl_gamma_limit_energy(double perimeter, double gamma,
                                double gamma_crit, double* out) {
  if (auto st = check_args(out != nullptr)) return st;
  return guarded([&] {
    PerimeterEstimate p{perimeter, PerimeterMethod::analytic, 0.0};
    *out = gamma_limit_energy(p, gamma, gamma_crit);
  });
}

gl_status gl_anneal(const gl_field* f0, const gl_kernel* k, double gamma,
                    double eps, const gl_anneal_params* params,
                    gl_trajectory** out) {
  if (auto st = check_args(f0 && k && params && out)) return st;
  return guarded([&] {
    AnnealConfig cfg;
    cfg.steps = params->steps;
    cfg.t0 = params->t0;
    cfg.decay = params->decay;
    cfg.swap_distance = params->swap_distance;
    cfg.seed = params->seed;
    cfg.record_every = params->record_every;
    *out = new gl_trajectory{anneal(f0->field, k->kernel, gamma, eps, cfg)};
  });
}

void gl_trajectory_free(gl_trajectory* t) { delete t; }

gl_status gl_trajectory_size(const gl_trajectory* t, size_t* out) {
  if (auto st = check_args(t && out)) return st;
  *out = t->traj.snapshots.size();
  return GL_OK;
}

gl_status gl_trajectory_row(const gl_trajectory* t, size_t i, int64_t* step,
                            double* total, double* perimeter_term,
                            double* nonlocal_term) {
  if (auto st = check_args(t != nullptr)) return st;
  if (i >= t->traj.snapshots.size()) {
    g_last_error = "trajectory row out of range";
    return GL_ERR_INVALID_ARGUMENT;
  }
  const auto& s = t->traj.snapshots[i];
  if (step) *step = s.step;
  if (total) *total = s.energy.total;
  if (perimeter_term) *perimeter_term = s.energy.perimeter_term;
  if (nonlocal_term) *nonlocal_term = s.energy.nonlocal_term;
  return GL_OK;
}

gl_status gl_trajectory_final(const gl_trajectory* t, gl_field** out) {
  if (auto st = check_args(t && out)) return st;
  *out = new gl_field{t->traj.final_field};
  return GL_OK;
}

gl_status gl_classify(const gl_field* f, int* out) {
  if (auto st = check_args(f && out)) return st;
  return guarded([&] {
    *out = static_cast<int>(classify_minimizer(f->field));
  });
}

gl_status gl_isoperimetric_quotient(const gl_field* f, double* out) {
  if (auto st = check_args(f && out)) return st;
  return guarded([&] { *out = isoperimetric_quotient(f->field); });
}

int gl_cmd_gamma_crit(const char* kernel_spec, int dim) {
  if (!kernel_spec) return 1;
  return run_gamma_crit(kernel_spec, dim);
}

int gl_cmd_sweep(const char* config_path, const char* out_dir) {
  if (!config_path || !out_dir) return 1;
  return run_sweep(config_path, out_dir);
}

int gl_cmd_anneal(const char* config_path, const char* out_dir,
                  const uint64_t* seed_override) {
  if (!config_path || !out_dir) return 1;
  std::optional<std::uint64_t> seed;
  if (seed_override) seed = *seed_override;
  return run_anneal(config_path, out_dir, seed);
}

int gl_cmd_autocorr(const char* config_path, const char* out_dir) {
  if (!config_path || !out_dir) return 1;
  return run_autocorr(config_path, out_dir);
}

int gl_cmd_verify(const char* level, const char* out_dir) {
  if (!level || !out_dir) return 1;
  return run_verify(level, out_dir);
}

}  // extern "C"

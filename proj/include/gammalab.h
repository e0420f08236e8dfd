/* gammalab.h - C API for the gammalab shared library.
 *
 * Every function returns a gl_status (GL_OK on success); on failure a
 * thread-local message is available via gl_last_error(). Objects returned
 * through out-parameters are owned by the caller and released with the
 * matching *_free function. All handles are opaque.
 */
#ifndef GAMMALAB_H
#define GAMMALAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gl_status {
  GL_OK = 0,
  GL_ERR_USAGE = 1,
  GL_ERR_KERNEL_INADMISSIBLE = 2,
  GL_ERR_VERIFY_FAILED = 3,
  GL_ERR_INVALID_ARGUMENT = 10,
  GL_ERR_NON_POWER_OF_TWO = 11,
  GL_ERR_DIMENSION_MISMATCH = 12,
  GL_ERR_DEGENERATE_MOMENT = 14,
  GL_ERR_UNDER_RESOLVED = 15,
  GL_ERR_INSUFFICIENT_RESOLUTION = 16,
  GL_ERR_OUT_OF_ANALYTIC_RANGE = 17,
  GL_ERR_ILL_CONDITIONED = 18,
  GL_ERR_TRUNCATION = 19,
  GL_ERR_IO = 20,
  GL_ERR_INTERNAL = 21
} gl_status;

const char* gl_last_error(void);

typedef struct gl_kernel gl_kernel;
typedef struct gl_shape gl_shape;
typedef struct gl_field gl_field;
typedef struct gl_radial gl_radial;
typedef struct gl_trajectory gl_trajectory;

/* ---- kernels ---- */

typedef struct gl_kernel_info {
  double first_moment;   /* int |z| K(z) dz */
  double phi_l1;         /* ||Phi||_{L1(0,inf)} */
  double gamma_crit;     /* via the first moment (defining formula) */
  double gamma_crit_phi; /* via ||Phi||_1 (consistency route) */
  double total_mass;     /* int K(z) dz */
  int h1, h2, h3;        /* admissibility hypotheses (numerical evidence) */
} gl_kernel_info;

gl_status gl_kernel_create(const char* spec, int dim, gl_kernel** out);
void gl_kernel_free(gl_kernel* k);
gl_status gl_kernel_query(const gl_kernel* k, gl_kernel_info* out);
gl_status gl_kernel_phi(const gl_kernel* k, double r, double* out);
gl_status gl_kernel_profile(const gl_kernel* k, double r, double* out);
gl_status gl_kernel_write_phi_csv(const gl_kernel* k, const char* path);

gl_status gl_bessel_k(double nu, double r, double* out);
gl_status gl_q_crit(double gamma_crit, double sqrt_w_integral, double* out);
gl_status gl_ball_laminate_threshold(int dim, double* out);

/* ---- shapes and fields ---- */

gl_status gl_shape_parse(const char* line, int dim, gl_shape** out);
void gl_shape_free(gl_shape* s);
gl_status gl_shape_volume(const gl_shape* s, double* out);
gl_status gl_shape_perimeter(const gl_shape* s, double* out);
gl_status gl_shape_format(const gl_shape* s, char* buf, size_t buf_len);

gl_status gl_field_rasterize(const gl_shape* s, int samples, gl_field** out);
void gl_field_free(gl_field* f);
gl_status gl_field_volume_fraction(const gl_field* f, double* out);
gl_status gl_field_l1_perimeter(const gl_field* f, double* out);
gl_status gl_field_checksum(const gl_field* f, uint64_t* out);
gl_status gl_field_write_pgm(const gl_field* f, const char* path);

/* ---- autocorrelation ---- */

gl_status gl_field_radial(const gl_field* f, int bins, gl_radial** out);
void gl_radial_free(gl_radial* rc);
gl_status gl_radial_write_csv(const gl_radial* rc, const char* path);
gl_status gl_radial_perimeter(const gl_radial* rc, double* value,
                              double* uncertainty);
/* coeffs must hold `degree` doubles; the fit pins c(0) to the measured c0 */
gl_status gl_radial_fit(const gl_radial* rc, int degree, double r_lo,
                        double r_hi, double* coeffs, double* residual);

/* ---- energy ---- */

typedef struct gl_energy {
  double perimeter_term;
  double nonlocal_term; /* gamma-free; total = perimeter - gamma * nonlocal */
  double total;
  double epsilon;
  double gamma;
  double uncertainty;
} gl_energy;

/* analytic_perimeter may be NULL: the perimeter is then slope-fitted. */
gl_status gl_energy_direct(const gl_field* f, const gl_kernel* k, double gamma,
                           double eps, const double* analytic_perimeter,
                           gl_energy* out);
gl_status gl_energy_autocorr(const gl_radial* rc, const gl_kernel* k,
                             double gamma, double eps, double perimeter,
                             gl_energy* out);
gl_status gl_gamma_limit_energy(double perimeter, double gamma,
                                double gamma_crit, double* out);

/* ---- annealing ---- */

typedef struct gl_anneal_params {
  int64_t steps;
  double t0;
  double decay;
  int swap_distance; /* cells; 0 = unrestricted */
  uint64_t seed;
  int64_t record_every;
} gl_anneal_params;

gl_status gl_anneal(const gl_field* f0, const gl_kernel* k, double gamma,
                    double eps, const gl_anneal_params* params,
                    gl_trajectory** out);
void gl_trajectory_free(gl_trajectory* t);
gl_status gl_trajectory_size(const gl_trajectory* t, size_t* out);
gl_status gl_trajectory_row(const gl_trajectory* t, size_t i, int64_t* step,
                            double* total, double* perimeter_term,
                            double* nonlocal_term);
gl_status gl_trajectory_final(const gl_trajectory* t, gl_field** out);

/* 0 = ball, 1 = laminate, 2 = other */
gl_status gl_classify(const gl_field* f, int* out);
gl_status gl_isoperimetric_quotient(const gl_field* f, double* out);

/* ---- command drivers (print to stdout, write artifacts to out_dir) ---- */

int gl_cmd_gamma_crit(const char* kernel_spec, int dim);
int gl_cmd_sweep(const char* config_path, const char* out_dir);
int gl_cmd_anneal(const char* config_path, const char* out_dir,
                  const uint64_t* seed_override);
int gl_cmd_autocorr(const char* config_path, const char* out_dir);
int gl_cmd_verify(const char* level, const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GAMMALAB_H */

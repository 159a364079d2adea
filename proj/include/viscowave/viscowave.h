#ifndef VISCOWAVE_VISCOWAVE_H
#define VISCOWAVE_VISCOWAVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define VW_API __declspec(dllexport)
#else
#  define VW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vw_status {
    VW_OK = 0,
    VW_ERR_VALIDATION = 1, /* bad config, argument or parameter */
    VW_ERR_NUMERICAL = 2,  /* NaN, failed factorization, weight residue */
    VW_ERR_IO = 3,
    VW_ERR_INTERNAL = 4
} vw_status;

typedef struct vw_config vw_config;
typedef struct vw_trajectory vw_trajectory;

/* Message of the last failure on the calling thread ("" if none). */
VW_API const char* vw_last_error(void);
VW_API const char* vw_version(void);
VW_API void vw_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

VW_API vw_status vw_config_load(const char* path, vw_config** out);
VW_API vw_status vw_config_parse(const char* json_text, vw_config** out);
VW_API void vw_config_free(vw_config* config);
/* Canonical JSON; free with vw_string_free. */
VW_API vw_status vw_config_serialize(const vw_config* config, char** out);
/* "cq" or "semigroup". */
VW_API vw_status vw_config_set_integrator(vw_config* config, const char* integrator);
/* "<region>.<c0|c1|a|nu>". */
VW_API vw_status vw_config_set_parameter(vw_config* config, const char* parameter, double value);
VW_API vw_status vw_config_time(const vw_config* config, double* T, size_t* steps);

/* ---- runs ------------------------------------------------------------- */

/* Runs the scenario and writes its configured CSVs below out_dir.
   final_probe / metric may be NULL. */
VW_API vw_status vw_run_scenario(const vw_config* config, const char* out_dir, double* final_probe,
                                 double* metric);

/* One run per value; writes run_<i>.csv and summary.csv below out_dir.
   final_probe and metric, when not NULL, receive `count` values each.
   workers = 0 uses every hardware thread. */
VW_API vw_status vw_sweep(const vw_config* config, const char* parameter, const double* values, size_t count,
                          const char* out_dir, size_t workers, double* final_probe, double* metric);

VW_API vw_status vw_simulate(const vw_config* config, vw_trajectory** out);
VW_API void vw_trajectory_free(vw_trajectory* trajectory);
VW_API size_t vw_trajectory_steps(const vw_trajectory* trajectory);
VW_API double vw_trajectory_step_size(const vw_trajectory* trajectory);
/* u(x, t_n) for n = 0..steps; `out` holds steps + 1 values. */
VW_API vw_status vw_trajectory_probe(const vw_trajectory* trajectory, double x, double* out, size_t len);
VW_API vw_status vw_trajectory_write_spacetime(const vw_trajectory* trajectory, const char* path, size_t nx,
                                               size_t nt);

/* ---- convolution quadrature ------------------------------------------ */

/* Trapezoidal CQ weights omega_0..omega_steps of a transfer function.
   symbol: "one", "s", "inv_s" or "power" (s^param). `out` holds steps + 1 values. */
VW_API vw_status vw_weights(const char* symbol, double param, double k, size_t steps, double* out, size_t len);
/* Weights of the named region's c(s). */
VW_API vw_status vw_region_weights(const vw_config* config, const char* region, double k, size_t steps,
                                   double* out, size_t len);
/* CSV with header "j,omega". */
VW_API vw_status vw_write_weights(const char* path, const double* omega, size_t len);

/* ---- frequency domain ------------------------------------------------- */

/* Solves the frequency problem with u(0) = 1 at every s and writes
   "re_s,im_s,energy_norm,coercivity_margin". worst_margin may be NULL. */
VW_API vw_status vw_laplace_probe(const vw_config* config, const double* s_re, const double* s_im, size_t count,
                                  const char* path, double* worst_margin);

/* Random (s, field) coercivity / boundedness test on the config's mesh. */
VW_API vw_status vw_coercivity_check(const vw_config* config, size_t trials, uint64_t seed,
                                     size_t* violations, double* worst_coercivity, double* worst_boundedness);

/* Hypothesis verification on every shipped parameter set plus the s^nu
   bound. `report` (may be NULL) receives one line per model region;
   free with vw_string_free. */
VW_API vw_status vw_check_hypotheses(size_t samples, uint64_t seed, size_t* violations, char** report);

#ifdef __cplusplus
}
#endif

#endif

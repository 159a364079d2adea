/* C client of the shared library: exercises every entry point from plain C. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "viscowave/viscowave.h"

static int failures = 0;

#define CHECK(cond)                                                                  \
    do {                                                                             \
        if (!(cond)) {                                                               \
            fprintf(stderr, "%s:%d: check failed: %s (%s)\n", __FILE__, __LINE__, #cond, \
                    vw_last_error());                                                \
            ++failures;                                                              \
        }                                                                            \
    } while (0)

static const char* kConfig =
    "{\"regions\": [{\"name\": \"rod\", \"kind\": \"zener\", \"x_lo\": 0, \"x_hi\": 1,"
    " \"c0\": 1.5, \"c1\": 2.75, \"a\": 0.5, \"rho\": 1}],"
    " \"mesh\": {\"elements_per_unit\": 8, \"degree\": 2},"
    " \"time\": {\"T\": 4, \"steps\": 80},"
    " \"signals\": {\"dirichlet\": {\"kind\": \"window\", \"knots\": [0.5, 1.5, 2, 3]},"
    " \"neumann\": {\"kind\": \"zero\"}},"
    " \"probes\": [1.0], \"output\": {\"timeseries\": \"timeseries.csv\"},"
    " \"metric_window\": [1, 4]}";

static void test_errors(void) {
    vw_config* cfg = NULL;
    CHECK(vw_config_parse("{\"regions\": 3}", &cfg) == VW_ERR_VALIDATION);
    CHECK(cfg == NULL);
    CHECK(strlen(vw_last_error()) > 0);
    CHECK(vw_config_parse(NULL, &cfg) == VW_ERR_VALIDATION);
    CHECK(vw_config_load("/nonexistent/x.cfg", &cfg) != VW_OK);

    double w[3];
    CHECK(vw_weights("cosh", 0.0, 0.1, 2, w, 3) == VW_ERR_VALIDATION);
    CHECK(vw_weights("s", 0.0, 0.1, 5, w, 3) == VW_ERR_VALIDATION);
    CHECK(vw_weights("s", 0.0, -1.0, 2, w, 3) == VW_ERR_VALIDATION);
    CHECK(vw_weights("s", 0.0, 0.1, 2, w, 3) == VW_OK);
    CHECK(strcmp(vw_last_error(), "") == 0);
}

static void test_config(void) {
    vw_config* cfg = NULL;
    CHECK(vw_config_parse(kConfig, &cfg) == VW_OK);
    char* text = NULL;
    CHECK(vw_config_serialize(cfg, &text) == VW_OK);
    vw_config* again = NULL;
    CHECK(vw_config_parse(text, &again) == VW_OK);
    char* text2 = NULL;
    CHECK(vw_config_serialize(again, &text2) == VW_OK);
    CHECK(strcmp(text, text2) == 0);
    vw_string_free(text);
    vw_string_free(text2);
    vw_config_free(again);

    double T = 0.0;
    size_t steps = 0;
    CHECK(vw_config_time(cfg, &T, &steps) == VW_OK);
    CHECK(T == 4.0 && steps == 80);
    CHECK(vw_config_set_integrator(cfg, "rk4") == VW_ERR_VALIDATION);
    CHECK(vw_config_set_parameter(cfg, "rod.c1", 0.1) == VW_ERR_VALIDATION);
    CHECK(vw_config_set_parameter(cfg, "rod.c1", 1.0) == VW_OK);
    CHECK(vw_config_set_parameter(cfg, "rod.nu", 0.5) == VW_OK);
    CHECK(vw_config_set_integrator(cfg, "semigroup") == VW_ERR_VALIDATION);
    CHECK(vw_config_set_parameter(cfg, "rod.nu", 1.0) == VW_OK);
    CHECK(vw_config_set_integrator(cfg, "semigroup") == VW_OK);
    vw_config_free(cfg);
}

static void test_runs(void) {
    vw_config* cfg = NULL;
    CHECK(vw_config_parse(kConfig, &cfg) == VW_OK);
    vw_trajectory* traj = NULL;
    CHECK(vw_simulate(cfg, &traj) == VW_OK);
    CHECK(vw_trajectory_steps(traj) == 80);
    CHECK(fabs(vw_trajectory_step_size(traj) - 0.05) < 1e-15);
    double u[81], v[81];
    CHECK(vw_trajectory_probe(traj, 1.0, u, 80) == VW_ERR_VALIDATION);
    CHECK(vw_trajectory_probe(traj, 2.0, u, 81) == VW_ERR_VALIDATION);
    CHECK(vw_trajectory_probe(traj, 1.0, u, 81) == VW_OK);
    CHECK(u[0] == 0.0);
    CHECK(fabs(u[80]) > 0.0);
    CHECK(vw_trajectory_write_spacetime(traj, "capi_spacetime.csv", 3, 3) == VW_OK);
    CHECK(vw_trajectory_write_spacetime(traj, "/nonexistent/dir/st.csv", 3, 3) == VW_ERR_IO);
    vw_trajectory_free(traj);

    double fp = 0.0, metric = 0.0;
    CHECK(vw_run_scenario(cfg, "capi_run", &fp, &metric) == VW_OK);
    CHECK(fp == u[80]);
    CHECK(metric > 0.0);

    const double values[2] = {2.75, 1.0};
    double fps[2], metrics[2];
    CHECK(vw_sweep(cfg, "rod.c1", values, 2, "capi_sweep", 2, fps, metrics) == VW_OK);
    CHECK(fps[0] == fp && metrics[0] == metric);
    CHECK(vw_sweep(cfg, "rod.c1", values, 0, "capi_sweep", 2, fps, metrics) == VW_ERR_VALIDATION);

    CHECK(vw_config_set_integrator(cfg, "semigroup") == VW_OK);
    CHECK(vw_simulate(cfg, &traj) == VW_OK);
    CHECK(vw_trajectory_probe(traj, 1.0, v, 81) == VW_OK);
    CHECK(fabs(v[80] - u[80]) < 1e-2 * fabs(u[80]));
    vw_trajectory_free(traj);
    vw_config_free(cfg);
}

static void test_weights(void) {
    double w[11];
    CHECK(vw_weights("inv_s", 0.0, 1.0, 10, w, 11) == VW_OK);
    CHECK(fabs(w[0] - 0.5) < 1e-10);
    for (int j = 1; j <= 10; ++j) CHECK(fabs(w[j] - 1.0) < 1e-10);
    CHECK(vw_weights("power", 1.0, 0.1, 10, w, 11) == VW_OK);
    CHECK(fabs(w[0] - 20.0) < 1e-9 && fabs(w[3] + 40.0) < 1e-9);

    vw_config* cfg = NULL;
    CHECK(vw_config_parse(kConfig, &cfg) == VW_OK);
    CHECK(vw_region_weights(cfg, "steel", 0.1, 10, w, 11) == VW_ERR_VALIDATION);
    CHECK(vw_region_weights(cfg, "rod", 0.1, 10, w, 11) == VW_OK);
    /* c(2/k) for the Zener law equals omega_0. */
    CHECK(fabs(w[0] - (1.5 + 20.0 * 2.75) / (1.0 + 10.0)) < 1e-10);
    CHECK(vw_write_weights("capi_weights.csv", w, 11) == VW_OK);
    FILE* f = fopen("capi_weights.csv", "r");
    char line[64] = {0};
    CHECK(f && fgets(line, sizeof line, f) && strcmp(line, "j,omega\n") == 0);
    if (f) fclose(f);
    vw_config_free(cfg);
}

static void test_frequency(void) {
    vw_config* cfg = NULL;
    CHECK(vw_config_parse(kConfig, &cfg) == VW_OK);
    const double re[2] = {0.5, 2.0}, im[2] = {0.0, -3.0};
    double worst = -1.0;
    CHECK(vw_laplace_probe(cfg, re, im, 2, "capi_laplace.csv", &worst) == VW_OK);
    CHECK(worst >= 0.0);
    const double bad_re[1] = {-1.0}, bad_im[1] = {0.0};
    CHECK(vw_laplace_probe(cfg, bad_re, bad_im, 1, "capi_laplace.csv", &worst) == VW_ERR_VALIDATION);
    size_t viol = 99;
    double wc = 0.0, wb = 0.0;
    CHECK(vw_coercivity_check(cfg, 50, 3, &viol, &wc, &wb) == VW_OK);
    CHECK(viol == 0 && wc >= 0.0 && wb >= 0.0);
    vw_config_free(cfg);

    char* report = NULL;
    CHECK(vw_check_hypotheses(200, 1, &viol, &report) == VW_OK);
    CHECK(viol == 0);
    CHECK(report && strstr(report, "power_bound") != NULL);
    vw_string_free(report);
    CHECK(vw_check_hypotheses(0, 1, &viol, NULL) == VW_ERR_VALIDATION);
}

int main(void) {
    CHECK(strcmp(vw_version(), "0.1.0") == 0);
    test_errors();
    test_config();
    test_runs();
    test_weights();
    test_frequency();
    if (failures) {
        fprintf(stderr, "%d check(s) failed\n", failures);
        return EXIT_FAILURE;
    }
    puts("all C API checks passed");
    return EXIT_SUCCESS;
}

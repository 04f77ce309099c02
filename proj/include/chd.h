/* chd — 2D Cahn–Hilliard–Darcy simulator with mass source.
 *
 * C API of the shared library. All functions return a chd_status; on
 * failure chd_last_error() describes the problem (thread-local storage).
 * Handles are opaque and must be released with the matching _free call.
 */
#ifndef CHD_H
#define CHD_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum chd_status {
  CHD_OK = 0,
  CHD_ERR_INVARIANT = 1, /* invariant violation or solver failure */
  CHD_ERR_CONFIG = 2,    /* malformed or inconsistent configuration */
  CHD_ERR_RUNTIME = 3,   /* I/O or other runtime failure */
  CHD_ERR_DOMAIN = 4     /* evaluation outside the admissible domain */
} chd_status;

typedef struct chd_config chd_config;
typedef struct chd_sim chd_sim;

const char* chd_version(void);
const char* chd_last_error(void);

/* --- configuration ----------------------------------------------------- */

chd_status chd_config_create(chd_config** out); /* built-in defaults */
chd_status chd_config_load(const char* path, chd_config** out);
chd_status chd_config_parse(const char* text, chd_config** out);
chd_status chd_config_set(chd_config* c, const char* key, const char* value);
chd_status chd_config_get(const chd_config* c, const char* key, char* buf,
                          size_t bufsz);
chd_status chd_config_save(const chd_config* c, const char* path);
chd_status chd_config_validate(const chd_config* c);
void chd_config_free(chd_config* c);

/* --- one-call drivers (the CLI subcommands) ----------------------------- */
/* Each prints a human-readable summary to stdout and returns the exit-code
 * contract: CHD_OK, CHD_ERR_INVARIANT, or CHD_ERR_CONFIG. `deterministic`
 * suppresses timestamp comments in CSV outputs. */

chd_status chd_run(const chd_config* c, int deterministic);
chd_status chd_verify(const chd_config* c, int deterministic);
chd_status chd_mms(const chd_config* c, int deterministic);
chd_status chd_sweep(const chd_config* c, int deterministic, int workers);
chd_status chd_perturb(const chd_config* c, int deterministic, double delta);
/* Dispatch on the config's `mode` key. delta < 0 keeps the config value;
 * workers <= 0 keeps the config value. */
chd_status chd_dispatch(const chd_config* c, int deterministic, int workers,
                        double delta);

/* --- stepping-level access ---------------------------------------------- */

chd_status chd_sim_create(const chd_config* c, chd_sim** out);
chd_status chd_sim_step(chd_sim* s); /* advance one dt */
chd_status chd_sim_time(const chd_sim* s, double* t);
chd_status chd_sim_grid(const chd_sim* s, int* nx, int* ny, double* lx,
                        double* ly);
/* field name: "phi" | "mu" | "q"; len must be nx*ny (row-major, j outer). */
chd_status chd_sim_field(const chd_sim* s, const char* name, double* buf,
                         size_t len);
/* Last step's diagnostics in CSV column order (16 values); fails before the
 * first step. */
chd_status chd_sim_diagnostics(const chd_sim* s, double* buf, size_t len);
void chd_sim_free(chd_sim* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CHD_H */

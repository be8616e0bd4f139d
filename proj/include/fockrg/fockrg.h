/* fockrg — operator renormalization engine on truncated Fock spaces.
 *
 * C surface: an opaque context holds a run configuration; run functions
 * execute a subcommand and write artifact files under an output directory.
 * All functions returning int use the status codes below, which are also
 * the CLI exit codes. Strings returned by the library are owned by the
 * context and remain valid until the next call on that context.
 */
#ifndef FOCKRG_H
#define FOCKRG_H

#ifdef __cplusplus
extern "C" {
#endif

#define FOCKRG_OK 0               /* success */
#define FOCKRG_PROPERTY_FAILED 1  /* a verification property failed */
#define FOCKRG_USAGE 2            /* bad usage or malformed config */
#define FOCKRG_NUMERIC 3          /* numerical breakdown (NotInvertible, FlowTruncated, ...) */

typedef struct fockrg_ctx fockrg_ctx;

/* Library version string ("fockrg X.Y.Z"). */
const char* fockrg_version(void);

/* Create a context with the built-in default configuration. */
int fockrg_ctx_new(fockrg_ctx** out);

/* Create a context from a JSON configuration document. */
int fockrg_ctx_new_from_json(const char* config_json, fockrg_ctx** out);

void fockrg_ctx_free(fockrg_ctx* ctx);

/* Override one field, e.g. fockrg_ctx_set(ctx, "model.g", "0.05"). */
int fockrg_ctx_set(fockrg_ctx* ctx, const char* dotted_key, const char* value);

/* Canonical JSON of the current configuration. */
const char* fockrg_ctx_config_json(fockrg_ctx* ctx);

/* Hash embedded in every output file produced from this configuration. */
const char* fockrg_ctx_config_hash(fockrg_ctx* ctx);

/* Message of the last failed call on this context ("" if none). */
const char* fockrg_ctx_last_error(const fockrg_ctx* ctx);

/* JSON report of the last run on this context ("" if none). On failure it
 * is the machine-readable error document. */
const char* fockrg_ctx_last_report(const fockrg_ctx* ctx);

/* Run the spectral-parameter flow; writes flow.csv, summary.json and
 * certificate.json under out_dir. */
int fockrg_run_flow(fockrg_ctx* ctx, const char* out_dir);

/* Run property suites: which in {feshbach, telescoping, norms, dilation,
 * all}; writes verify.json. */
int fockrg_run_verify(fockrg_ctx* ctx, const char* which, const char* out_dir);

/* Sweep one axis in {g, rho, J, max_total} over comma-separated values;
 * writes sweep.csv and sweep.json. */
int fockrg_run_sweep(fockrg_ctx* ctx, const char* axis,
                     const char* values_csv, const char* out_dir);

/* Dense-diagonalization oracle; writes oracle.json. */
int fockrg_run_oracle(fockrg_ctx* ctx, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* FOCKRG_H */

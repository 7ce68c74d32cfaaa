#ifndef SUBSTREET_SUBSTREET_H
#define SUBSTREET_SUBSTREET_H

/* C interface to the substreet library: substitutions on 2-colored binary
 * trees, their fixed points, preimage analysis, orbit graphs and figures.
 *
 * Every fallible call returns an sst_status. On failure the message is kept
 * per thread and read with sst_last_error(). Strings returned through char**
 * are owned by the caller and released with sst_string_free(). Handles are
 * opaque and released with their matching *_free function; passing NULL to
 * a free function is allowed. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SST_API __declspec(dllexport)
#else
#define SST_API __attribute__((visibility("default")))
#endif

typedef enum sst_status {
    SST_OK = 0,
    SST_ADDRESS_TOO_DEEP = 1,
    SST_DEPTH_MISMATCH = 2,
    SST_NOT_FIXABLE = 3,
    SST_ODD_LENGTH = 4,
    SST_NOT_IN_IMAGE = 5,
    SST_NOT_MARKED = 6,
    SST_NOT_POWER_OF_TWO = 7,
    SST_NON_POSITIVE = 8,
    SST_NON_INTEGER_RESULT = 9,
    SST_SHALLOW = 10,
    SST_INCONSISTENT = 11,
    SST_TYPE_UNDETERMINED = 12,
    SST_UNDETERMINED = 13,
    SST_MISMATCH = 14,
    SST_NON_CONSTANT_LEVEL = 15,
    SST_NOT_CLOSED = 16,
    SST_MALFORMED_GRAPH = 17,
    SST_TOO_DEEP = 18,
    SST_NOT_FOUND = 19,
    SST_PARSE_ERROR = 20,
    SST_INVALID_ARGUMENT = 21,
    SST_RESOURCE_LIMIT = 22,
    SST_INTERNAL = 100
} sst_status;

typedef struct sst_patch sst_patch;
typedef struct sst_sub sst_sub;
typedef struct sst_graph sst_graph;

SST_API const char* sst_version(void);
/* Message of the last failed call on this thread, or "" after a success. */
SST_API const char* sst_last_error(void);
/* Error name such as "Shallow" or "NotClosed"; "Ok" for SST_OK. */
SST_API const char* sst_status_name(sst_status status);
SST_API void sst_string_free(char* s);

/* Substreetutions: "builtin:bbab", "builtin:tm", "builtin:abba", a bare
 * builtin name, or the three-line text format. */
SST_API sst_status sst_sub_parse(const char* text, sst_sub** out);
SST_API sst_status sst_sub_format(const sst_sub* sub, char** out);
SST_API void sst_sub_free(sst_sub* sub);

/* Patches in the `depth <D>` text format. */
SST_API sst_status sst_patch_parse(const char* text, sst_patch** out);
SST_API sst_status sst_patch_format(const sst_patch* p, char** out);
SST_API sst_status sst_patch_depth(const sst_patch* p, int* out);
SST_API sst_status sst_patch_line(const sst_patch* p, int level, char** out);
SST_API void sst_patch_free(sst_patch* p);

SST_API sst_status sst_fixpoint(const sst_sub* sub, int root, int depth, sst_patch** out);

/* Word operations. sub may be NULL for the Jacaranda substreetution. */
SST_API sst_status sst_chi(const sst_sub* sub, const char* word, int times, char** out);
/* One address per line, "e" for the empty word; a warning, if any, follows
 * as a "# " comment line. */
SST_API sst_status sst_theta(const sst_sub* sub, const char* address, char** out);
SST_API sst_status sst_source(const sst_sub* sub, const char* address, char** out);
/* Ones in line 2^n of J over the line length, as p/q. */
SST_API sst_status sst_proportion(int n, char** out);

/* Checks the renormalization equation on the depth-D fixed point of sub,
 * for sites of even length up to maxlen. *passed is set to 0 or 1. */
SST_API sst_status sst_verify_renorm(const sst_sub* sub, int depth, int maxlen, char** report, int* passed);

/* Tree analysis. */
SST_API sst_status sst_type(const sst_patch* p, char** out);
SST_API sst_status sst_unsub(const sst_sub* sub, const sst_patch* p, int times, sst_patch** out);
/* site may be NULL; when given, the type is read from its length. */
SST_API sst_status sst_brother(const sst_patch* p, const char* site, sst_patch** out);
/* One `n <count>` line per n = 0..max_n. */
SST_API sst_status sst_complexity(const sst_patch* p, int max_n, char** out);

/* Parents of a inside the prefix jprefix (brute force), or from the case
 * analysis when classified is nonzero (site may then give its level). */
SST_API sst_status sst_preimages(const sst_patch* a, const sst_patch* jprefix, int classified, const char* site,
                                 char** out);
/* `p_n=<v> bound=<3^n> within_bound=<yes|no>` */
SST_API sst_status sst_p_n(const sst_patch* a, int n, const sst_patch* jprefix, char** out);

/* Orbit graphs. */
SST_API sst_status sst_graph_nomeasure(int depth, sst_graph** out);
SST_API sst_status sst_graph_from_patch(const sst_patch* seed, int depth, sst_graph** out);
SST_API sst_status sst_graph_parse(const char* text, sst_graph** out);
/* Text format, preceded by "# " comment lines for the identification depth
 * and any warnings. */
SST_API sst_status sst_graph_format(const sst_graph* g, char** out);
SST_API sst_status sst_graph_size(const sst_graph* g, int* out);
SST_API void sst_graph_free(sst_graph* g);

/* `feasible` and `mu` lines, or `infeasible`. With certificate nonzero the
 * balance rows and multipliers follow as "# " comment lines. */
SST_API sst_status sst_measure_check(const sst_graph* g, int certificate, char** out, int* feasible);

/* Figures as SVG 1.1 documents. */
SST_API sst_status sst_render_tree(const sst_patch* p, int resolution, char** out);
SST_API sst_status sst_render_tiling(const sst_patch* p, int depth_limit, int resolution, int threads, char** out);

/* Runs all acceptance checks. The table has one line per check; *all_passed
 * is 1 when nothing failed. *failed, when not NULL, receives the failing ids
 * separated by spaces. With fail_fast nonzero the run stops at the first
 * failing check. */
SST_API sst_status sst_run_acceptance(int threads, int fail_fast, char** table, int* all_passed, char** failed);

#ifdef __cplusplus
}
#endif

#endif

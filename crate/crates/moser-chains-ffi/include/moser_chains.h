#ifndef MOSER_CHAINS_H
#define MOSER_CHAINS_H

#include <stdbool.h>
#include <stdint.h>

/**
 * Result codes; the nonzero values mirror the command-line exit codes.
 */
typedef enum McStatus {
  MC_STATUS_OK = 0,
  MC_STATUS_PARSE = 2,
  MC_STATUS_PRECONDITION = 3,
  MC_STATUS_INTERNAL = 4,
  MC_STATUS_NULL_ARGUMENT = 5,
  MC_STATUS_PANIC = 6,
} McStatus;

/**
 * Opaque real-analytic hypersurface `v = F(z, z̄, u)` with exact coefficients.
 */
typedef struct McHypersurface McHypersurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a hypersurface from its JSON form and stores a new handle in `out`.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum McStatus mc_hypersurface_from_json(const char *json, struct McHypersurface **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must come from this library and not be freed twice.
 */
void mc_hypersurface_free(struct McHypersurface *h);

/**
 * Serializes a hypersurface to JSON. Free the string with [`mc_string_free`].
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum McStatus mc_hypersurface_to_json(const struct McHypersurface *h, char **out);

/**
 * Normalizes along the chain with slope 0 at truncation order `order`.
 * Writes the normal form to `out_result` and, if `out_report` is not null,
 * the full JSON report.
 *
 * # Safety
 * `h` must be a live handle; `out_result` must be writable.
 */
enum McStatus mc_normalize(const struct McHypersurface *h,
                           uint32_t order,
                           struct McHypersurface **out_result,
                           char **out_report);

/**
 * Rank of the isotropy orbit through the 2-jet `(x1, y1, x2, y2)` over the
 * origin of the sphere, and whether the jet lies on the chain locus.
 * Arguments are rationals written `p/q`.
 *
 * # Safety
 * All strings must be nul-terminated; the outputs must be writable.
 */
enum McStatus mc_orbit_rank(const char *x1,
                            const char *y1,
                            const char *x2,
                            const char *y2,
                            uint32_t *out_rank,
                            bool *out_on_sigma0);

/**
 * Second-order chain completion `x2 + i y2` of the 1-jet `x1 + i y1` at
 * the point `(x + iy, u)` of the hypersurface. Outputs are `p/q` strings.
 *
 * # Safety
 * `h` must be a live handle, all strings nul-terminated, outputs writable.
 */
enum McStatus mc_chain_2jet(const struct McHypersurface *h,
                            const char *x,
                            const char *y,
                            const char *u,
                            const char *x1,
                            const char *y1,
                            char **out_x2,
                            char **out_y2);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void mc_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * call into the library from the same thread; do not free.
 */
const char *mc_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOSER_CHAINS_H */

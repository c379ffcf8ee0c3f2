#ifndef BANZHAF_H
#define BANZHAF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Confidence interval construction.
 */
typedef enum BzMethod {
  BZ_METHOD_HOEFFDING = 0,
  BZ_METHOD_STUDENT = 1,
  BZ_METHOD_SELF_BOUNDING = 2,
} BzMethod;

/**
 * Result codes.
 */
typedef enum BzStatus {
  BZ_STATUS_OK = 0,
  BZ_STATUS_NULL_POINTER = 1,
  BZ_STATUS_INVALID_ARGUMENT = 2,
  BZ_STATUS_INVALID_GAME = 3,
  BZ_STATUS_INVALID_ASSOCIATION = 4,
  BZ_STATUS_TOO_MANY_PLAYERS = 5,
  BZ_STATUS_BUFFER_TOO_SMALL = 6,
  BZ_STATUS_PARSE_ERROR = 7,
  BZ_STATUS_UNSUPPORTED = 8,
  BZ_STATUS_PANIC = 99,
} BzStatus;

/**
 * Opaque weighted voting game.
 */
typedef struct BzGame BzGame;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *bz_last_error_message(void);

/**
 * Parses a JSON game description.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum BzStatus bz_game_from_json(const char *json, struct BzGame **out);

/**
 * Builds a single-quota game with players `p1..pn`.
 *
 * # Safety
 * `weights` must point to `n` doubles and `out` must be a valid pointer.
 */
enum BzStatus bz_game_single_quota(const double *weights,
                                   size_t n,
                                   double quota,
                                   struct BzGame **out);

/**
 * The embedded 18-member EU council game.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BzStatus bz_eu_game(struct BzGame **out);

/**
 * Releases a game. Null is ignored.
 *
 * # Safety
 * `game` must come from a `bz_game_*` constructor and not be used again.
 */
void bz_game_free(struct BzGame *game);

/**
 * # Safety
 * `game` and `out` must be valid pointers.
 */
enum BzStatus bz_game_player_count(const struct BzGame *game, size_t *out);

/**
 * Exact absolute and normalized indices. `normalized` may be null; both
 * buffers need at least as many entries as the game has players.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum BzStatus bz_exact_indices(const struct BzGame *game,
                               const double *phi,
                               size_t phi_len,
                               double *absolute,
                               double *normalized,
                               size_t len);

/**
 * Monte Carlo estimates with `samples` coalitions per player. `variance`
 * receives the sample variances (NaN when `samples < 2`) and may be null.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum BzStatus bz_estimate_indices(const struct BzGame *game,
                                  const double *phi,
                                  size_t phi_len,
                                  uint64_t samples,
                                  uint64_t seed,
                                  double *estimates,
                                  double *variance,
                                  size_t len);

/**
 * Sample size for half-width `epsilon` at confidence `1 - delta`. Pass NaN
 * for `s2` or `b` when the method does not use it.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BzStatus bz_required_samples(double epsilon,
                                  double delta,
                                  enum BzMethod method,
                                  double s2,
                                  double b,
                                  uint64_t *out);

/**
 * Interval half-width after `n` samples. Pass NaN for unused `s2` or `b`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BzStatus bz_confidence_halfwidth(enum BzMethod method,
                                      uint64_t n,
                                      double delta,
                                      double s2,
                                      double b,
                                      double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BANZHAF_H */

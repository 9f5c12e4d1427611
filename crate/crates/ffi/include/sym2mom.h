#ifndef SYM2MOM_H
#define SYM2MOM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Return code of every fallible call; `Ok` is zero.
typedef enum S2mStatus {
  S2M_STATUS_OK = 0,
  S2M_STATUS_NULL_ARGUMENT = 1,
  S2M_STATUS_DOMAIN = 2,
  S2M_STATUS_POLE = 3,
  S2M_STATUS_REGIME = 4,
  S2M_STATUS_PRECISION = 5,
  S2M_STATUS_BUDGET = 6,
  S2M_STATUS_COVERAGE = 7,
  S2M_STATUS_IO = 8,
  S2M_STATUS_PARSE = 9,
  S2M_STATUS_INDEX_OUT_OF_RANGE = 10,
  S2M_STATUS_PANIC = 11,
} S2mStatus;

// Opaque list of Maass forms sorted by `t_j`.
typedef struct S2mCatalog S2mCatalog;

// Opaque precision context.
typedef struct S2mContext S2mContext;

typedef struct S2mComplex {
  double re;
  double im;
} S2mComplex;

// Components of the first-moment identity.  `passed` is
// `residual_abs <= tolerance`.
typedef struct S2mMomentResult {
  struct S2mComplex spectral;
  struct S2mComplex main_term;
  struct S2mComplex continuous;
  struct S2mComplex extra;
  struct S2mComplex s1;
  struct S2mComplex s2;
  double residual_abs;
  double tolerance;
  size_t forms_used;
  bool passed;
} S2mMomentResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len - 1` bytes) and returns the full message length.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t s2m_last_error(char *buf, size_t len);

// # Safety
// `out` must be valid for writes.
enum S2mStatus s2m_context_new(uint32_t working_digits,
                               double target_rel_error,
                               struct S2mContext **out);

// # Safety
// `ctx` must be null or come from [`s2m_context_new`] and not be freed twice.
void s2m_context_free(struct S2mContext *ctx);

// The catalog bundled with the library.
//
// # Safety
// `out` must be valid for writes.
enum S2mStatus s2m_catalog_bundled(struct S2mCatalog **out);

// Loads a line-delimited catalog file.  Malformed records are skipped and
// counted; see [`s2m_catalog_rejected`].
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be valid for writes.
enum S2mStatus s2m_catalog_open(const char *path, struct S2mCatalog **out);

// # Safety
// `cat` must be null or come from a catalog constructor and not be freed twice.
void s2m_catalog_free(struct S2mCatalog *cat);

// Number of forms; 0 for a null handle.
//
// # Safety
// `cat` must be null or a live catalog handle.
size_t s2m_catalog_len(const struct S2mCatalog *cat);

// # Safety
// `cat` must be null or a live catalog handle.
size_t s2m_catalog_rejected(const struct S2mCatalog *cat);

// Spectral parameter and harmonic weight of form `index`.
//
// # Safety
// `cat` must be a live handle; `t_j` and `weight` must be valid for writes.
enum S2mStatus s2m_catalog_form(const struct S2mCatalog *cat,
                                size_t index,
                                double *t_j,
                                double *weight);

// Hecke eigenvalue `λ(n)`; coverage error past the stored range.
//
// # Safety
// `cat` must be a live handle; `out` must be valid for writes.
enum S2mStatus s2m_catalog_lambda(const struct S2mCatalog *cat,
                                  size_t index,
                                  uint64_t n,
                                  double *out);

// `L(sym² u_j, s)` for form `index`.
//
// # Safety
// Handles must be live; `out` must be valid for writes.
enum S2mStatus s2m_sym2_l(const struct S2mContext *ctx,
                          const struct S2mCatalog *cat,
                          size_t index,
                          struct S2mComplex s,
                          struct S2mComplex *out);

// Zagier L-series `L_n(s)`.
//
// # Safety
// `ctx` must be live; `out` must be valid for writes.
enum S2mStatus s2m_zagier_l(const struct S2mContext *ctx,
                            int64_t n,
                            struct S2mComplex s,
                            struct S2mComplex *out);

// Gauss hypergeometric `₂F₁(a, b; c; z)`.
//
// # Safety
// `ctx` must be live; `out` must be valid for writes.
enum S2mStatus s2m_gauss_2f1(const struct S2mContext *ctx,
                             struct S2mComplex a,
                             struct S2mComplex b,
                             struct S2mComplex c,
                             struct S2mComplex z,
                             struct S2mComplex *out);

// `K_{it}(z)` for real `t`, `z > 0`.
//
// # Safety
// `ctx` must be live; `out` must be valid for writes.
enum S2mStatus s2m_bessel_k_imag(const struct S2mContext *ctx, double t, double z, double *out);

// The real pair `F_{it}(z)`, `G_{it}(z)`.
//
// # Safety
// `ctx` must be live; `f` and `g` must be valid for writes.
enum S2mStatus s2m_bessel_fg(const struct S2mContext *ctx,
                             double t,
                             double z,
                             double *f,
                             double *g);

// # Safety
// `ctx` must be live; `out` must be valid for writes.
enum S2mStatus s2m_airy_ai(const struct S2mContext *ctx, double x, double *out);

// Theta multiplier for `c ≡ 0 (mod 4)` and `gcd(a, c) = 1`.
//
// # Safety
// `out` must be valid for writes.
enum S2mStatus s2m_theta_multiplier(uint64_t c, int64_t a, struct S2mComplex *out);

// Both sides of the first-moment identity with harmonic weights `α_j`.
//
// # Safety
// Handles must be live; `out` must be valid for writes.
enum S2mStatus s2m_first_moment(const struct S2mContext *ctx,
                                const struct S2mCatalog *cat,
                                uint64_t m,
                                double t,
                                double big_t,
                                double big_g,
                                uint32_t big_n,
                                struct S2mMomentResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYM2MOM_H */

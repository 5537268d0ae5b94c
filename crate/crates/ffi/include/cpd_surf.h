#ifndef CPD_SURF_H
#define CPD_SURF_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every entry point.
typedef enum CpdStatus {
  CPD_STATUS_OK = 0,
  CPD_STATUS_NULL_POINTER = 1,
  CPD_STATUS_INVALID_UTF8 = 2,
  // Expression syntax error or unknown identifier.
  CPD_STATUS_PARSE = 3,
  // Malformed JSON, unknown gallery name or otherwise invalid argument.
  CPD_STATUS_INVALID_INPUT = 4,
  // Function evaluated outside its domain, or point outside the chart.
  CPD_STATUS_DOMAIN = 5,
  // Quadrature, ODE or linear-algebra failure.
  CPD_STATUS_NUMERICAL = 6,
  // The immersion is singular at the requested point.
  CPD_STATUS_DEGENERATE = 7,
  CPD_STATUS_IO = 8,
  // A Rust panic was caught at the boundary.
  CPD_STATUS_PANIC = 9,
} CpdStatus;

// Opaque verification report.
typedef struct CpdReport CpdReport;

// Opaque parametrized surface.
typedef struct CpdSurface CpdSurface;

// Curvature data at one chart point.
typedef struct CpdCurvatures {
  double gaussian;
  double mean;
  double kappa1;
  double kappa2;
  // Angle between the normal and the fixed direction e3.
  double theta;
} CpdCurvatures;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null if none.
//
// The pointer stays valid until the next failing call on the same thread.
const char *cpd_last_error_message(void);

// Builds a surface from a JSON surface spec.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum CpdStatus cpd_surface_from_json(const char *json, struct CpdSurface **out);

// Builds a gallery surface on its default domain.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be writable.
enum CpdStatus cpd_surface_gallery(const char *name, struct CpdSurface **out);

// Releases a surface. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void cpd_surface_free(struct CpdSurface *s);

// Writes the surface point at chart coordinates `(x, y)` to `out[0..3]`.
//
// # Safety
// `s` must be a live surface; `out` must point to three writable doubles.
enum CpdStatus cpd_surface_eval(const struct CpdSurface *s, double x, double y, double *out);

// Curvatures and normal angle at chart coordinates `(x, y)`.
//
// # Safety
// `s` must be a live surface; `out` must be writable.
enum CpdStatus cpd_surface_curvatures(const struct CpdSurface *s,
                                      double x,
                                      double y,
                                      struct CpdCurvatures *out);

// Runs every applicable identity check on an `nx × ny` grid with default
// tolerances.
//
// The status reports whether verification ran; use [`cpd_report_passed`] for
// the outcome.
//
// # Safety
// `s` must be a live surface; `out` must be writable.
enum CpdStatus cpd_surface_verify(const struct CpdSurface *s,
                                  size_t nx,
                                  size_t ny,
                                  struct CpdReport **out);

// 1 if every check passed, 0 if any failed, -1 for a null report.
//
// # Safety
// `r` must be null or a live report.
int cpd_report_passed(const struct CpdReport *r);

// Serializes a report to JSON. Release the string with [`cpd_string_free`].
//
// # Safety
// `r` must be a live report; `out` must be writable.
enum CpdStatus cpd_report_to_json(const struct CpdReport *r, char **out);

// Releases a report. Null is ignored.
//
// # Safety
// `r` must come from this library and not be used afterwards.
void cpd_report_free(struct CpdReport *r);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void cpd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CPD_SURF_H */

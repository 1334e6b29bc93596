#pragma once

namespace varsel {

// Global tolerance for set comparisons and merging. Read once per process;
// override with the VARSEL_TOL environment variable (decimal literal).
double set_tol();

// Sets are clipped to [-kClipBound, kClipBound] before Hausdorff-type
// distances are taken, so unbounded components compare finitely.
inline constexpr double kClipBound = 1e6;

// Measure values at or below this magnitude count as null when classifying
// essential selections and when the measure-limit oracle tests full measure.
inline constexpr double kNullMeasureTol = 1e-12;

}  // namespace varsel

#pragma once

#include "xs/gather.hpp"

namespace xs {

/// Trapezoidal passband window with cosine ramps f1-f2 and f3-f4.
double trapezoid_taper(double f, double f1, double f2, double f3, double f4);

/// Zero-phase bandpass of every trace.
Gather bandpass_gather(const Gather& g, double f1, double f2, double f3, double f4);

/// Fourier-multiplier form of the pressure-to-source map in a homogeneous
/// medium: each plane-wave component (xi, omega) scaled by
/// sign * 2 * sqrt(1 - s) / sqrt(kappa rho), s = kappa xi^2 / (rho omega^2).
/// Evanescent components (s >= 1) are zeroed, with a cosine taper on the
/// last 10% of slowness below cutoff. Oracle utility; assumes the input is
/// band-limited away from grazing.
Gather lambda_symbol_apply(const Gather& g, double kappa, double rho, int sign);

/// Largest |xi/f| (slowness, s/m) carried by any 2D spectral component
/// within `threshold_db` of the gather's spectral peak. The edges are
/// tapered so aperture truncation does not register as grazing energy.
double max_slowness_above_db(const Gather& g, double threshold_db);

/// Fraction of 2D spectral energy at slowness |xi/f| beyond the limit.
double out_of_cone_energy_fraction(const Gather& g, double slowness_limit);

/// Mean output/input amplitude ratio of a narrowband probe, measured as
/// the ratio of RMS values over the central half of the traces.
double central_rms_ratio(const Gather& out, const Gather& in);

/// Fourier zero-padding upsample along time by an integer factor; exact
/// for band-limited traces that decay at the window ends.
Gather resample_time_refine(const Gather& g, int refine);

}  // namespace xs

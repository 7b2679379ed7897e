#pragma once

namespace sideknow {

/// Standard normal CDF.
double normal_cdf(double z);

/// Standard normal quantile for q in (0, 1): rational approximation polished
/// with one Halley step. Throws sideknow::Error outside (0, 1).
double inverse_normal_cdf(double q);

}  // namespace sideknow

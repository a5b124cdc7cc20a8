#pragma once

namespace ottoforge {

/// Principal-branch Lambert W via Halley iteration; valid for z >= -1/e.
/// Residual |W e^W - z| <= 1e-14 * max(1, |z|).
double lambert_w(double z);

/// Solve w + ln w = ln_z, the log-domain form of W(z) for huge z (needed for
/// d = 2^n with n up to 1e4). Requires ln_z >= 1.
double lambert_w_ln(double ln_z);

}  // namespace ottoforge

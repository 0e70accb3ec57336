#pragma once

#include "restore/degrade.hpp"
#include "restore/image.hpp"

namespace restore {

struct ClsConfig {
    double reg_param = 0.0;  // lambda >= 0
};

/// Frequency-domain Tikhonov deconvolution under the periodic blur model:
/// F_hat = conj(H) G / (|H|^2 + lambda |P|^2), with P a 3x3 Laplacian
/// (center 4, edge neighbors -1). Returns the real part of the inverse
/// transform.
ImageGrid cls_restore(const ImageGrid& degraded, const BlurKernel& blur,
                      const ClsConfig& cfg);

/// Regularization weight as the reciprocal of the BSNR's dB value
/// (20 dB -> 0.05, 10 dB -> 0.1).
double rp_from_bsnr(double bsnr_db);

}  // namespace restore

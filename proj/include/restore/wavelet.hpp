#pragma once

#include <vector>

#include "restore/image.hpp"

namespace restore {

/// Orthogonal families available for the separable 2-D transform.
/// "db4" is the 4-tap Daubechies filter (two vanishing moments).
enum class WaveletFamily { haar, db4 };

WaveletFamily wavelet_family_from_name(const std::string& name);
const char* wavelet_family_name(WaveletFamily family);

/// One decomposition level: approximation plus horizontal-, vertical- and
/// diagonal-detail coefficients, each (rows/2) x (cols/2) of the source.
/// chd responds to horizontal edges (high-pass across rows), cvd to vertical
/// edges, cdd is high-pass in both directions.
struct SubbandSet {
    ImageGrid ca;
    ImageGrid chd;
    ImageGrid cvd;
    ImageGrid cdd;
    WaveletFamily family = WaveletFamily::haar;
    int level = 0;
};

/// One analysis step: separable filtering (rows then columns) with periodic
/// extension and dyadic downsampling. Dimensions must be even and at least
/// the filter length.
SubbandSet dwt2(const ImageGrid& img, WaveletFamily family);

/// Inverse of dwt2; perfect reconstruction to ~1e-12 for both families.
ImageGrid idwt2(const SubbandSet& sb);

/// Cascade: level k decomposes level k-1's approximation. Dimensions must be
/// divisible by 2^levels. Result is ordered shallowest first.
std::vector<SubbandSet> dwt2_multi(const ImageGrid& img, WaveletFamily family, int levels);

/// Inverse cascade of dwt2_multi.
ImageGrid idwt2_multi(const std::vector<SubbandSet>& pyramid);

}  // namespace restore

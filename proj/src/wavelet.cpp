#include "restore/wavelet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace restore {

namespace {

struct FilterBank {
    std::vector<double> lo;  // scaling (low-pass) analysis filter
    std::vector<double> hi;  // wavelet (high-pass) analysis filter
};

FilterBank filters_for(WaveletFamily family) {
    FilterBank fb;
    switch (family) {
        case WaveletFamily::haar: {
            const double s = 1.0 / std::sqrt(2.0);
            fb.lo = {s, s};
            break;
        }
        case WaveletFamily::db4: {
            const double r3 = std::sqrt(3.0);
            const double n = 4.0 * std::sqrt(2.0);
            fb.lo = {(1.0 + r3) / n, (3.0 + r3) / n, (3.0 - r3) / n, (1.0 - r3) / n};
            break;
        }
    }
    // quadrature mirror: hi[m] = (-1)^m * lo[L-1-m]
    const size_t L = fb.lo.size();
    fb.hi.resize(L);
    for (size_t m = 0; m < L; ++m)
        fb.hi[m] = ((m % 2 == 0) ? 1.0 : -1.0) * fb.lo[L - 1 - m];
    return fb;
}

// Periodic analysis of one 1-D signal of even length n:
// approx[k] = sum_m lo[m] * x[(2k+m) mod n], detail likewise with hi.
void analyze_1d(const double* x, int n, const FilterBank& fb,
                double* approx, double* detail) {
    const int L = static_cast<int>(fb.lo.size());
    const int half = n / 2;
    for (int k = 0; k < half; ++k) {
        double a = 0.0, d = 0.0;
        for (int m = 0; m < L; ++m) {
            const double v = x[(2 * k + m) % n];
            a += fb.lo[m] * v;
            d += fb.hi[m] * v;
        }
        approx[k] = a;
        detail[k] = d;
    }
}

// Periodic synthesis, the transpose of analyze_1d:
// x[j] = sum_k approx[k]*lo[(j-2k) mod n] + detail[k]*hi[(j-2k) mod n].
// Implemented by scattering each coefficient's filter taps so the summation
// order per output sample is fixed.
void synthesize_1d(const double* approx, const double* detail, int n,
                   const FilterBank& fb, double* x) {
    const int L = static_cast<int>(fb.lo.size());
    const int half = n / 2;
    for (int j = 0; j < n; ++j) x[j] = 0.0;
    for (int k = 0; k < half; ++k)
        for (int m = 0; m < L; ++m) {
            const int j = (2 * k + m) % n;
            x[j] += approx[k] * fb.lo[m] + detail[k] * fb.hi[m];
        }
}

void check_dims(const ImageGrid& img, const FilterBank& fb) {
    const int L = static_cast<int>(fb.lo.size());
    if (img.rows % 2 != 0 || img.cols % 2 != 0)
        throw std::invalid_argument("dwt2: image dimensions must be even");
    if (img.rows < L || img.cols < L)
        throw std::invalid_argument("dwt2: image smaller than the filter length");
}

}  // namespace

WaveletFamily wavelet_family_from_name(const std::string& name) {
    if (name == "haar") return WaveletFamily::haar;
    if (name == "db4") return WaveletFamily::db4;
    throw std::invalid_argument("unknown wavelet family: " + name);
}

const char* wavelet_family_name(WaveletFamily family) {
    return family == WaveletFamily::haar ? "haar" : "db4";
}

SubbandSet dwt2(const ImageGrid& img, WaveletFamily family) {
    const FilterBank fb = filters_for(family);
    check_dims(img, fb);
    const int rows = img.rows, cols = img.cols;
    const int hr = rows / 2, hc = cols / 2;

    // pass 1: rows -> [low | high], each rows x cols/2
    ImageGrid row_lo(rows, hc), row_hi(rows, hc);
    for (int r = 0; r < rows; ++r)
        analyze_1d(&img.data[static_cast<size_t>(r) * cols], cols, fb,
                   &row_lo.data[static_cast<size_t>(r) * hc],
                   &row_hi.data[static_cast<size_t>(r) * hc]);

    // pass 2: columns of each half
    SubbandSet sb;
    sb.family = family;
    sb.ca = ImageGrid(hr, hc);
    sb.chd = ImageGrid(hr, hc);
    sb.cvd = ImageGrid(hr, hc);
    sb.cdd = ImageGrid(hr, hc);

    std::vector<double> col(rows), a(hr), d(hr);
    for (int c = 0; c < hc; ++c) {
        for (int r = 0; r < rows; ++r) col[r] = row_lo.at(r, c);
        analyze_1d(col.data(), rows, fb, a.data(), d.data());
        for (int r = 0; r < hr; ++r) {
            sb.ca.at(r, c) = a[r];
            sb.chd.at(r, c) = d[r];
        }
        for (int r = 0; r < rows; ++r) col[r] = row_hi.at(r, c);
        analyze_1d(col.data(), rows, fb, a.data(), d.data());
        for (int r = 0; r < hr; ++r) {
            sb.cvd.at(r, c) = a[r];
            sb.cdd.at(r, c) = d[r];
        }
    }
    return sb;
}

ImageGrid idwt2(const SubbandSet& sb) {
    if (!sb.ca.same_shape(sb.chd) || !sb.ca.same_shape(sb.cvd) || !sb.ca.same_shape(sb.cdd))
        throw std::invalid_argument("idwt2: subband dimensions mismatch");
    const FilterBank fb = filters_for(sb.family);
    const int hr = sb.ca.rows, hc = sb.ca.cols;
    const int rows = hr * 2, cols = hc * 2;

    // undo pass 2 (columns)
    ImageGrid row_lo(rows, hc), row_hi(rows, hc);
    std::vector<double> a(hr), d(hr), col(rows);
    for (int c = 0; c < hc; ++c) {
        for (int r = 0; r < hr; ++r) { a[r] = sb.ca.at(r, c); d[r] = sb.chd.at(r, c); }
        synthesize_1d(a.data(), d.data(), rows, fb, col.data());
        for (int r = 0; r < rows; ++r) row_lo.at(r, c) = col[r];
        for (int r = 0; r < hr; ++r) { a[r] = sb.cvd.at(r, c); d[r] = sb.cdd.at(r, c); }
        synthesize_1d(a.data(), d.data(), rows, fb, col.data());
        for (int r = 0; r < rows; ++r) row_hi.at(r, c) = col[r];
    }

    // undo pass 1 (rows)
    ImageGrid out(rows, cols);
    for (int r = 0; r < rows; ++r)
        synthesize_1d(&row_lo.data[static_cast<size_t>(r) * hc],
                      &row_hi.data[static_cast<size_t>(r) * hc], cols, fb,
                      &out.data[static_cast<size_t>(r) * cols]);
    return out;
}

std::vector<SubbandSet> dwt2_multi(const ImageGrid& img, WaveletFamily family, int levels) {
    if (levels < 1)
        throw std::invalid_argument("dwt2_multi: levels must be >= 1");
    const int div = 1 << levels;
    if (img.rows % div != 0 || img.cols % div != 0)
        throw std::invalid_argument("dwt2_multi: dimensions not divisible by 2^levels");
    std::vector<SubbandSet> pyramid;
    pyramid.reserve(levels);
    ImageGrid current = img;
    for (int k = 0; k < levels; ++k) {
        SubbandSet sb = dwt2(current, family);
        sb.level = k;
        current = sb.ca;
        pyramid.push_back(std::move(sb));
    }
    return pyramid;
}

ImageGrid idwt2_multi(const std::vector<SubbandSet>& pyramid) {
    if (pyramid.empty())
        throw std::invalid_argument("idwt2_multi: empty pyramid");
    ImageGrid current = idwt2(pyramid.back());
    for (int k = static_cast<int>(pyramid.size()) - 2; k >= 0; --k) {
        SubbandSet sb = pyramid[k];
        if (!sb.ca.same_shape(current))
            throw std::invalid_argument("idwt2_multi: level shape mismatch");
        sb.ca = current;  // reconstructed approximation replaces the stored one
        current = idwt2(sb);
    }
    return current;
}

}  // namespace restore

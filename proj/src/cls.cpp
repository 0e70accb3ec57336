#include "restore/cls.hpp"

#include <fftw3.h>

#include <complex>
#include <stdexcept>
#include <vector>

namespace restore {

namespace {

using cvec = std::vector<std::complex<double>>;

// std::complex<double> is bit-compatible with fftw_complex (fftw guarantees
// this), so the buffers can be handed over directly.
cvec fft_2d(cvec& in, int rows, int cols, int direction) {
    cvec out(in.size());
    fftw_plan plan = fftw_plan_dft_2d(rows, cols,
                                      reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()),
                                      direction, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("cls_restore: fftw plan creation failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
}

cvec forward_real(const std::vector<double>& values, int rows, int cols) {
    cvec in(values.size());
    for (size_t i = 0; i < values.size(); ++i) in[i] = values[i];
    return fft_2d(in, rows, cols, FFTW_FORWARD);
}

// Stencil placed at the origin with periodic wrap-around, so its transform
// is the exact transfer function of the circular convolution.
std::vector<double> embed_stencil(const BlurKernel& k, int rows, int cols) {
    std::vector<double> e(static_cast<size_t>(rows) * cols, 0.0);
    int h = k.size / 2;
    for (int i = -h; i <= h; ++i) {
        for (int j = -h; j <= h; ++j) {
            int r = ((i % rows) + rows) % rows;
            int c = ((j % cols) + cols) % cols;
            e[static_cast<size_t>(r) * cols + c] += k.at(i, j);
        }
    }
    return e;
}

}  // namespace

ImageGrid cls_restore(const ImageGrid& degraded, const BlurKernel& blur,
                      const ClsConfig& cfg) {
    degraded.validate();
    if (cfg.reg_param < 0.0)
        throw std::invalid_argument("cls_restore: negative regularization weight");
    if (blur.size < 1 || blur.size % 2 == 0 ||
        blur.weights.size() != static_cast<size_t>(blur.size) * blur.size)
        throw std::invalid_argument("cls_restore: malformed blur kernel");

    int rows = degraded.rows;
    int cols = degraded.cols;
    cvec g_hat = forward_real(degraded.data, rows, cols);
    cvec h_hat = forward_real(embed_stencil(blur, rows, cols), rows, cols);
    BlurKernel laplacian{3, {0, -1, 0, -1, 4, -1, 0, -1, 0}, 0.0};
    cvec p_hat = forward_real(embed_stencil(laplacian, rows, cols), rows, cols);

    cvec f_hat(g_hat.size());
    for (size_t i = 0; i < f_hat.size(); ++i) {
        double denom = std::norm(h_hat[i]) + cfg.reg_param * std::norm(p_hat[i]);
        // A dead bin (blur zero and unregularized) has no recoverable
        // content; the pseudo-inverse convention zeroes it.
        f_hat[i] = denom > 0.0 ? std::conj(h_hat[i]) * g_hat[i] / denom
                               : std::complex<double>(0.0, 0.0);
    }

    cvec spatial = fft_2d(f_hat, rows, cols, FFTW_BACKWARD);
    ImageGrid out{rows, cols, std::vector<double>(spatial.size())};
    double scale = 1.0 / (static_cast<double>(rows) * cols);
    for (size_t i = 0; i < spatial.size(); ++i) out.data[i] = spatial[i].real() * scale;
    return out;
}

double rp_from_bsnr(double bsnr_db) {
    if (bsnr_db <= 0.0)
        throw std::invalid_argument("rp_from_bsnr: BSNR must be positive dB");
    return 1.0 / bsnr_db;
}

}  // namespace restore

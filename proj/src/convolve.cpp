#include "umsli/convolve.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <mutex>
#include <vector>

namespace umsli {

namespace {

void check_mask(const Image& img, const Image& mask) {
    if (mask.empty() || img.empty()) throw InvalidParam("convolve: empty input");
    if (mask.width() > img.width() || mask.height() > img.height())
        throw MaskTooLarge("mask " + std::to_string(mask.width()) + "x" +
                           std::to_string(mask.height()) + " exceeds image " +
                           std::to_string(img.width()) + "x" + std::to_string(img.height()));
}

Image convolve_direct(const Image& img, const Image& mask) {
    const int w = img.width(), h = img.height();
    const int mw = mask.width(), mh = mask.height();
    const int cx = mw / 2, cy = mh / 2;
    Image out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int j = 0; j < mh; ++j) {
                const int sy = std::clamp(y + j - cy, 0, h - 1);
                for (int i = 0; i < mw; ++i) {
                    const int sx = std::clamp(x + i - cx, 0, w - 1);
                    acc += mask.at(i, j) * img.at(sx, sy);
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

struct FftwDeleter {
    void operator()(double* p) const { fftw_free(p); }
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

// FFTW planning is not thread-safe.
std::mutex g_fftw_mutex;

Image convolve_fft(const Image& img, const Image& mask) {
    const int w = img.width(), h = img.height();
    const int mw = mask.width(), mh = mask.height();
    const int cx = mw / 2, cy = mh / 2;
    const int pw = w + mw - 1, ph = h + mh - 1;
    const int pc = pw / 2 + 1;  // r2c output width

    std::unique_ptr<double, FftwDeleter> fbuf(fftw_alloc_real(static_cast<std::size_t>(pw) * ph));
    std::unique_ptr<double, FftwDeleter> mbuf(fftw_alloc_real(static_cast<std::size_t>(pw) * ph));
    std::unique_ptr<fftw_complex, FftwDeleter> fspec(
        fftw_alloc_complex(static_cast<std::size_t>(pc) * ph));
    std::unique_ptr<fftw_complex, FftwDeleter> mspec(
        fftw_alloc_complex(static_cast<std::size_t>(pc) * ph));

    // image extended by edge replication into the padded frame
    for (int y = 0; y < ph; ++y) {
        const int sy = std::clamp(y - cy, 0, h - 1);
        double* row = fbuf.get() + static_cast<std::size_t>(y) * pw;
        for (int x = 0; x < pw; ++x) row[x] = img.at(std::clamp(x - cx, 0, w - 1), sy);
    }
    // mask placed flipped around the origin with cyclic wrap, so the cyclic
    // convolution below evaluates sum_d mask(d) * f(p + d)
    std::memset(mbuf.get(), 0, sizeof(double) * static_cast<std::size_t>(pw) * ph);
    for (int j = 0; j < mh; ++j) {
        const int qy = ((cy - j) % ph + ph) % ph;
        for (int i = 0; i < mw; ++i) {
            const int qx = ((cx - i) % pw + pw) % pw;
            mbuf.get()[static_cast<std::size_t>(qy) * pw + qx] += mask.at(i, j);
        }
    }

    fftw_plan pf, pm, pb;
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        pf = fftw_plan_dft_r2c_2d(ph, pw, fbuf.get(), fspec.get(), FFTW_ESTIMATE);
        pm = fftw_plan_dft_r2c_2d(ph, pw, mbuf.get(), mspec.get(), FFTW_ESTIMATE);
        pb = fftw_plan_dft_c2r_2d(ph, pw, fspec.get(), fbuf.get(), FFTW_ESTIMATE);
    }
    fftw_execute(pf);
    fftw_execute(pm);
    const double norm = 1.0 / (static_cast<double>(pw) * ph);
    for (std::size_t i = 0; i < static_cast<std::size_t>(pc) * ph; ++i) {
        const double re = fspec.get()[i][0] * mspec.get()[i][0] - fspec.get()[i][1] * mspec.get()[i][1];
        const double im = fspec.get()[i][0] * mspec.get()[i][1] + fspec.get()[i][1] * mspec.get()[i][0];
        fspec.get()[i][0] = re * norm;
        fspec.get()[i][1] = im * norm;
    }
    fftw_execute(pb);
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(pf);
        fftw_destroy_plan(pm);
        fftw_destroy_plan(pb);
    }

    Image out(w, h);
    for (int y = 0; y < h; ++y) {
        const double* row = fbuf.get() + static_cast<std::size_t>(y + cy) * pw;
        for (int x = 0; x < w; ++x) out.at(x, y) = row[x + cx];
    }
    return out;
}

}  // namespace

Image convolve(const Image& img, const Image& mask, ConvolvePath path) {
    check_mask(img, mask);
    if (path == ConvolvePath::Direct) return convolve_direct(img, mask);
    if (path == ConvolvePath::Fft) return convolve_fft(img, mask);
    const double direct_cost = static_cast<double>(img.width()) * img.height() *
                               mask.width() * mask.height();
    return direct_cost > 4e6 ? convolve_fft(img, mask) : convolve_direct(img, mask);
}

}  // namespace umsli

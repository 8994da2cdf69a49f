#include "fedmap/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace fedmap {

double psnr(const GridMap& a, const GridMap& b, double max_val) {
    a.validate();
    b.validate();
    if (a.width != b.width || a.height != b.height || a.channels != b.channels)
        throw ShapeError("psnr: map dimensions differ");
    if (!(max_val > 0.0)) throw ValidationError("psnr: max_val must be > 0");
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = static_cast<double>(a.values[i]) - static_cast<double>(b.values[i]);
        sum_sq += d * d;
    }
    const double mse = sum_sq / static_cast<double>(a.values.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(max_val * max_val / mse);
}

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

std::array<double, kWindow> gaussian_kernel() {
    std::array<double, kWindow> k{};
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        const double d = i - (kWindow - 1) / 2.0;
        k[i] = std::exp(-(d * d) / (2.0 * kSigma * kSigma));
        sum += k[i];
    }
    for (auto& v : k) v /= sum;
    return k;
}

// Separable "valid" convolution with the 11-tap Gaussian.
// in: h x w row-major; out: (h-10) x (w-10).
std::vector<double> filter_valid(const std::vector<double>& in, int w, int h,
                                 const std::array<double, kWindow>& k) {
    const int out_w = w - kWindow + 1;
    const int out_h = h - kWindow + 1;
    std::vector<double> horiz(static_cast<std::size_t>(h) * out_w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < out_w; ++x) {
            double acc = 0.0;
            for (int t = 0; t < kWindow; ++t) acc += k[t] * in[static_cast<std::size_t>(y) * w + x + t];
            horiz[static_cast<std::size_t>(y) * out_w + x] = acc;
        }
    std::vector<double> out(static_cast<std::size_t>(out_h) * out_w);
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x) {
            double acc = 0.0;
            for (int t = 0; t < kWindow; ++t)
                acc += k[t] * horiz[static_cast<std::size_t>(y + t) * out_w + x];
            out[static_cast<std::size_t>(y) * out_w + x] = acc;
        }
    return out;
}

}  // namespace

double ssim(const GridMap& a_in, const GridMap& b_in) {
    const GridMap a = to_single_channel(a_in);
    const GridMap b = to_single_channel(b_in);
    if (a.width != b.width || a.height != b.height)
        throw ShapeError("ssim: map dimensions differ");
    if (a.width < kWindow || a.height < kWindow)
        throw ShapeError("ssim: maps smaller than the 11x11 window");

    const int w = a.width;
    const int h = a.height;
    const std::size_t n = a.cell_count();
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = a.values[i];
        y[i] = b.values[i];
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }

    const auto k = gaussian_kernel();
    const auto mu_x = filter_valid(x, w, h, k);
    const auto mu_y = filter_valid(y, w, h, k);
    const auto m_xx = filter_valid(xx, w, h, k);
    const auto m_yy = filter_valid(yy, w, h, k);
    const auto m_xy = filter_valid(xy, w, h, k);

    constexpr double L = 1.0;
    constexpr double C1 = (0.01 * L) * (0.01 * L);
    constexpr double C2 = (0.03 * L) * (0.03 * L);
    double total = 0.0;
    for (std::size_t i = 0; i < mu_x.size(); ++i) {
        const double var_x = m_xx[i] - mu_x[i] * mu_x[i];
        const double var_y = m_yy[i] - mu_y[i] * mu_y[i];
        const double cov = m_xy[i] - mu_x[i] * mu_y[i];
        const double num = (2.0 * mu_x[i] * mu_y[i] + C1) * (2.0 * cov + C2);
        const double den = (mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + C1) * (var_x + var_y + C2);
        total += num / den;
    }
    return total / static_cast<double>(mu_x.size());
}

}  // namespace fedmap

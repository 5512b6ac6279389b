#include "qml/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace qml {

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double mse_loss(std::span<const double> residuals) {
    if (residuals.empty()) throw std::invalid_argument("mse_loss: empty residual vector");
    double s = 0.0;
    for (double r : residuals) s += r * r;
    return s / (2.0 * static_cast<double>(residuals.size()));
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) throw std::invalid_argument("sample_sd: need at least 2 values");
    double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double jackknife_se(std::size_t n, const std::function<double(long)>& stat) {
    if (n < 2) throw std::invalid_argument("jackknife_se: need at least 2 samples");
    std::vector<double> loo(n);
    double msum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        loo[i] = stat(static_cast<long>(i));
        msum += loo[i];
    }
    double m = msum / static_cast<double>(n);
    double s = 0.0;
    for (double x : loo) s += (x - m) * (x - m);
    return std::sqrt(s * static_cast<double>(n - 1) / static_cast<double>(n));
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: bad input sizes");
    double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

}  // namespace qml

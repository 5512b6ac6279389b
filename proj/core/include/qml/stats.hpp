#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qml {

double mean(std::span<const double> v);
double sample_sd(std::span<const double> v);  // unbiased

// ||r||^2 / (2 |r|), the mean-squared-error loss of a residual vector.
double mse_loss(std::span<const double> residuals);

// Jackknife standard error of stat(leave-one-out). stat receives the index
// to drop, or -1 for the full-sample value.
double jackknife_se(std::size_t n, const std::function<double(long)>& stat);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace qml

#include "qml/observable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qml {

LocalZObservable::LocalZObservable(std::vector<double> coeffs) : o_(std::move(coeffs)) {
    if (o_.empty()) throw std::invalid_argument("LocalZObservable: empty coefficient vector");
}

double LocalZObservable::spectral_norm() const {
    double s = 0.0;
    for (double v : o_) s += std::abs(v);
    return s;
}

double LocalZObservable::frob_norm_sq() const {
    double s = 0.0;
    for (double v : o_) s += v * v;
    return std::ldexp(s, static_cast<int>(o_.size()));  // 2^N sum o^2
}

LocalZObservable sample_coeffs(uint32_t n, double variance, Rng& rng) {
    if (variance <= 0.0) throw std::invalid_argument("sample_coeffs: variance must be positive");
    double sd = std::sqrt(variance);
    std::vector<double> o(n);
    for (auto& v : o) v = normal(rng, 0.0, sd);
    return LocalZObservable(std::move(o));
}

double delta_s(const LocalZObservable& obs, int s) {
    const int n = static_cast<int>(obs.n_qubits());
    if (s < 1 || s > n) throw std::invalid_argument("delta_s: s out of range");

    double patterns = 0.0;
    {
        double binom = 1.0;
        for (int w = 1; w <= s; ++w) {
            binom = binom * (n - w + 1) / w;
            patterns += binom * std::ldexp(1.0, w);
        }
    }
    if (patterns > 3.5e5) throw std::invalid_argument("delta_s: enumeration too large for this (N, S)");

    double best = -1.0;
    std::vector<int> support(s);
    for (int w = 1; w <= s; ++w) {
        for (int i = 0; i < w; ++i) support[i] = i;
        for (;;) {
            // All 2^w sign patterns on this support.
            for (uint64_t signs = 0; signs < (uint64_t{1} << w); ++signs) {
                double dot = 0.0;
                for (int i = 0; i < w; ++i) {
                    double v = obs.coeff(static_cast<uint32_t>(support[i]));
                    dot += (signs >> i) & 1 ? -v : v;
                }
                double sq = dot * dot;
                if (sq == 0.0) return 0.0;
                if (best < 0.0 || sq < best) best = sq;
            }
            // Next lexicographic combination.
            int i = w - 1;
            while (i >= 0 && support[i] == n - w + i) --i;
            if (i < 0) break;
            ++support[i];
            for (int j = i + 1; j < w; ++j) support[j] = support[j - 1] + 1;
        }
    }
    return best;
}

}  // namespace qml

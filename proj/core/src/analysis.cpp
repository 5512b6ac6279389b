#include "qml/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <stdexcept>

#include "qml/cmat.hpp"
#include "qml/parallel.hpp"
#include "qml/stats.hpp"

namespace qml {

namespace {

CoeffStats build_stats(std::span<const StateVector> states, std::vector<PauliString> strings,
                       std::vector<int> multiplicities, int window_size) {
    if (states.empty()) throw std::invalid_argument("coeff_matrix: empty dataset");
    if (strings.empty()) throw std::invalid_argument("coeff_matrix: empty index set");
    const int n_rows = static_cast<int>(strings.size());
    const int n_samples = static_cast<int>(states.size());

    CoeffStats stats;
    stats.n_samples = n_samples;
    stats.window_size = window_size;
    stats.haar_ref = 1.0 / (std::ldexp(1.0, states[0].n_qubits()) + 1.0);
    stats.a.assign(static_cast<std::size_t>(n_rows) * n_samples, 0.0);
    stats.rows.reserve(n_rows);
    for (int r = 0; r < n_rows; ++r) {
        stats.rows.push_back(CoeffRow{strings[r], multiplicities[r],
                                      static_cast<int>(strings[r].weight()), 0.0, 0.0, 0.0, false});
    }

    parallel_for(static_cast<std::size_t>(n_rows), [&](std::size_t r) {
        double* row = stats.a.data() + r * n_samples;
        for (int c = 0; c < n_samples; ++c) row[c] = pauli_coefficient(states[c], strings[r]);
        double m = 0.0;
        for (int c = 0; c < n_samples; ++c) m += row[c];
        m /= n_samples;
        double var = 0.0;
        for (int c = 0; c < n_samples; ++c) var += (row[c] - m) * (row[c] - m);
        var = n_samples > 1 ? var / (n_samples - 1) : 0.0;
        CoeffRow& cr = stats.rows[r];
        cr.mean = m;
        cr.sd = std::sqrt(var);
        cr.alpha_hat = var;
        cr.constant = (var == 0.0);
    });

    stats.multiplicity_total = 0;
    double amin = std::numeric_limits<double>::infinity(), amax = 0.0;
    int live_mult = 0;
    for (const CoeffRow& cr : stats.rows) {
        stats.multiplicity_total += cr.multiplicity;
        if (!cr.constant) {
            amin = std::min(amin, cr.alpha_hat);
            amax = std::max(amax, cr.alpha_hat);
            live_mult += cr.multiplicity;
        }
    }
    stats.alpha_min = std::isfinite(amin) ? amin : 0.0;
    stats.alpha_max = amax;

    if (live_mult > 0) {
        double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
        for (int c = 0; c < n_samples; ++c) {
            double norm_sq = 0.0;
            for (int r = 0; r < n_rows; ++r) {
                const CoeffRow& cr = stats.rows[r];
                if (cr.constant) continue;
                double v = stats.a[static_cast<std::size_t>(r) * n_samples + c];
                norm_sq += cr.multiplicity * v * v / cr.alpha_hat;
            }
            double scaled = std::sqrt(norm_sq / live_mult);
            cmin = std::min(cmin, scaled);
            cmax = std::max(cmax, scaled);
        }
        stats.aq_min = cmin;
        stats.aq_max = cmax;
    }
    return stats;
}

}  // namespace

CoeffStats coeff_matrix(std::span<const StateVector> states, const WindowAssignment& windows,
                        HamiltonianFamily family) {
    if (windows.windows.empty()) throw std::invalid_argument("coeff_matrix: empty window assignment");
    const uint32_t n = windows.n_qubits;
    const int s = windows.window_size;
    const int letters = family == HamiltonianFamily::XYZ ? 3 : 2;

    std::map<uint64_t, std::size_t> seen;
    std::vector<PauliString> strings;
    std::vector<int> mult;
    uint64_t combos = 1;
    for (int i = 0; i < s; ++i) combos *= static_cast<uint64_t>(letters);
    for (const std::vector<int>& win : windows.windows) {
        for (uint64_t c = 0; c < combos; ++c) {
            PauliString p = PauliString::identity(n);
            uint64_t rem = c;
            bool all_z = true;
            for (int i = 0; i < s; ++i) {
                int code = 1 + static_cast<int>(rem % letters);
                rem /= letters;
                p = p.with(static_cast<uint32_t>(win[i]), code);
                if (code != 3) all_z = false;
            }
            // [Z^S, O] = 0: the all-Z word contributes nothing to the kernel.
            if (family == HamiltonianFamily::XYZ && all_z) continue;
            auto [it, inserted] = seen.emplace(p.index(), strings.size());
            if (inserted) {
                strings.push_back(p);
                mult.push_back(1);
            } else {
                ++mult[it->second];
            }
        }
    }
    return build_stats(states, std::move(strings), std::move(mult), s);
}

CoeffStats coeff_matrix_for_strings(std::span<const StateVector> states,
                                    std::vector<PauliString> strings, int window_size) {
    std::vector<int> mult(strings.size(), 1);
    return build_stats(states, std::move(strings), std::move(mult), window_size);
}

MeanStat mean_statistic(const CoeffStats& stats) {
    MeanStat out;
    out.per_row.assign(stats.rows.size(), 0.0);
    double acc = 0.0;
    int count = 0;
    for (std::size_t r = 0; r < stats.rows.size(); ++r) {
        const CoeffRow& cr = stats.rows[r];
        if (cr.constant) {
            ++out.excluded_constant;
            continue;
        }
        out.per_row[r] = std::abs(cr.mean / cr.sd);
        if (cr.weight == stats.window_size) {
            acc += out.per_row[r];
            ++count;
        }
    }
    if (count > 0) out.weight_s_mean = acc / count;
    return out;
}

BoundReport spectrum_bound_haar(const SymMatrix& k, const LocalZObservable& obs, uint32_t n,
                                    int size_train, double delta) {
    BoundReport rep;
    rep.quantity = "lambda_max[K] vs ||O||_F^2/4^N";
    rep.delta = delta;
    std::vector<double> evals = sym_eigvals_dense(k.to_dense(), k.order());
    rep.empirical_min = evals.front();
    rep.empirical_max = evals.back();
    rep.leading = obs.frob_norm_sq() / std::pow(4.0, n);
    rep.lower = 0.0;
    rep.upper = 2.0 * rep.leading;
    double excess = rep.empirical_max / rep.leading - 1.0;
    double scale = size_train > 1
                       ? static_cast<double>(size_train) * std::sqrt(std::log(size_train)) /
                             (std::ldexp(1.0, n) * delta)
                       : 0.0;
    rep.fitted_slack = scale > 0.0 ? std::max(0.0, excess) / scale : 0.0;
    rep.pass = rep.empirical_max <= rep.upper;
    return rep;
}

BoundReport spectrum_bracket(const SymMatrix& k0, const CoeffStats& stats,
                                 const LocalZObservable& obs, HamiltonianFamily family, double k,
                                 double delta) {
    BoundReport rep;
    rep.delta = delta;
    rep.k = k;
    std::vector<double> evals = sym_eigvals_dense(k0.to_dense(), k0.order());
    rep.empirical_min = evals.front();
    rep.empirical_max = evals.back();

    const int s = stats.window_size;
    const double ds = delta_s(obs, s);
    const double norm2_sq = obs.spectral_norm() * obs.spectral_norm();
    if (family == HamiltonianFamily::XYZ) {
        rep.quantity = "lambda[K(0)] vs coefficient-matrix bracket";
        rep.lower = (1.0 - k) * ds * stats.alpha_min * stats.aq_min * stats.aq_min;
        rep.upper = (1.0 + k) * norm2_sq * stats.alpha_max * stats.aq_max * stats.aq_max;
    } else {
        rep.quantity = "lambda[K(0)] vs 2^{-S} bracket";
        rep.lower = (1.0 - k) * ds / std::ldexp(1.0, s);
        rep.upper = (1.0 + k) * norm2_sq / std::ldexp(1.0, s);
    }
    rep.vacuous = (ds == 0.0);
    rep.pass = (rep.empirical_min >= rep.lower - 1e-12) && (rep.empirical_max <= rep.upper);
    return rep;
}

double smoothness_coefficient(std::span<const double> j_now, std::span<const double> j_init, int depth,
                              int n_samples, std::span<const double> theta_now,
                              std::span<const double> theta_init) {
    if (j_now.size() != j_init.size() ||
        j_now.size() != static_cast<std::size_t>(depth) * n_samples) {
        throw std::invalid_argument("smoothness_coefficient: Jacobian shape mismatch");
    }
    double dist_sq = 0.0;
    for (std::size_t d = 0; d < theta_now.size(); ++d) {
        double dd = theta_now[d] - theta_init[d];
        dist_sq += dd * dd;
    }
    if (dist_sq == 0.0) {
        throw std::invalid_argument("smoothness_coefficient: zero parameter displacement");
    }

    std::vector<double> diff(j_now.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = j_now[i] - j_init[i];

    // Power iteration for the top singular value of the D x M difference.
    std::vector<double> v(n_samples);
    double v0_norm = 0.0;
    for (int a = 0; a < n_samples; ++a) {
        v[a] = 1.0 + static_cast<double>(a) / (n_samples + 1.0);
        v0_norm += v[a] * v[a];
    }
    v0_norm = std::sqrt(v0_norm);
    for (int a = 0; a < n_samples; ++a) v[a] /= v0_norm;
    std::vector<double> w(depth);
    double sigma_sq = 0.0;
    for (int it = 0; it < 200; ++it) {
        for (int d = 0; d < depth; ++d) w[d] = 0.0;
        for (int a = 0; a < n_samples; ++a) {
            const double* col = diff.data() + static_cast<std::size_t>(a) * depth;
            for (int d = 0; d < depth; ++d) w[d] += col[d] * v[a];
        }
        double new_sigma_sq = 0.0;
        for (int d = 0; d < depth; ++d) new_sigma_sq += w[d] * w[d];
        if (new_sigma_sq == 0.0) {
            sigma_sq = 0.0;
            break;
        }
        for (int a = 0; a < n_samples; ++a) {
            const double* col = diff.data() + static_cast<std::size_t>(a) * depth;
            double s = 0.0;
            for (int d = 0; d < depth; ++d) s += col[d] * w[d];
            v[a] = s;
        }
        double vn = 0.0;
        for (int a = 0; a < n_samples; ++a) vn += v[a] * v[a];
        vn = std::sqrt(vn);
        for (int a = 0; a < n_samples; ++a) v[a] /= vn;
        if (it > 0 && std::abs(new_sigma_sq - sigma_sq) <= 1e-8 * new_sigma_sq) {
            sigma_sq = new_sigma_sq;
            break;
        }
        sigma_sq = new_sigma_sq;
    }
    // sigma_sq tracks ||diff v||^2 for unit v, i.e. the top singular value
    // squared at convergence.
    return sigma_sq / (static_cast<double>(depth) * dist_sq);
}

MomentCheckReport tdesign_moment_check(uint32_t n, int trials, uint64_t seed) {
    if (n > 6) throw std::invalid_argument("tdesign_moment_check: n must be <= 6");
    if (trials < 2) throw std::invalid_argument("tdesign_moment_check: need at least 2 trials");
    const int d = 1 << n;

    Rng mat_rng = substream(seed, {1});
    auto random_matrix = [&](CMat& m) {
        m = CMat(d, d);
        for (auto& v : m.a) v = {normal(mat_rng), normal(mat_rng)};
    };
    CMat a, b, c, dd;
    random_matrix(a);
    random_matrix(b);
    random_matrix(c);
    random_matrix(dd);

    const std::complex<double> tr_a = trace(a), tr_b = trace(b), tr_c = trace(c), tr_d = trace(dd);
    const std::complex<double> tr_ac = trace(matmul(a, c)), tr_bd = trace(matmul(b, dd));
    const std::complex<double> exact1 = tr_a * tr_b / static_cast<double>(d);
    const double dim = d;
    const std::complex<double> exact2 =
        (tr_ac * tr_bd + tr_a * tr_b * tr_c * tr_d) / (dim * dim - 1.0) -
        (tr_a * tr_c * tr_bd + tr_ac * tr_b * tr_d) / (dim * (dim * dim - 1.0));

    std::vector<std::complex<double>> v1(trials), v2(trials);
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        Rng wrng = substream(seed, {2, t});
        CMat w = haar_unitary(d, wrng);
        CMat wdag = adjoint(w);
        CMat waw = matmul(matmul(w, a), wdag);
        std::complex<double> t1 = trace(matmul(waw, b));
        CMat wcw = matmul(matmul(w, c), wdag);
        std::complex<double> t2 = t1 * trace(matmul(wcw, dd));
        v1[t] = t1;
        v2[t] = t2;
    });

    auto dev_sigma = [trials](const std::vector<std::complex<double>>& vals,
                              std::complex<double> exact) {
        double worst = 0.0;
        for (int part = 0; part < 2; ++part) {
            std::vector<double> comp(vals.size());
            for (std::size_t i = 0; i < vals.size(); ++i) {
                comp[i] = part == 0 ? vals[i].real() : vals[i].imag();
            }
            double m = mean(comp);
            double se = sample_sd(comp) / std::sqrt(static_cast<double>(trials));
            double exact_part = part == 0 ? exact.real() : exact.imag();
            double diff = std::abs(m - exact_part);
            if (se == 0.0) {
                if (diff > 1e-9) return std::numeric_limits<double>::infinity();
                continue;
            }
            worst = std::max(worst, diff / se);
        }
        return worst;
    };

    MomentCheckReport rep;
    rep.trials = trials;
    rep.first_dev_sigma = dev_sigma(v1, exact1);
    rep.second_dev_sigma = dev_sigma(v2, exact2);
    rep.first_exact = exact1.real();
    rep.second_exact = exact2.real();
    std::complex<double> m1 = 0.0, m2 = 0.0;
    for (int t = 0; t < trials; ++t) {
        m1 += v1[t];
        m2 += v2[t];
    }
    rep.first_mc = (m1 / static_cast<double>(trials)).real();
    rep.second_mc = (m2 / static_cast<double>(trials)).real();
    rep.pass = rep.first_dev_sigma <= 5.0 && rep.second_dev_sigma <= 5.0;
    return rep;
}

}  // namespace qml

#include <doctest.h>

#include <cmath>

#include "qml/analysis.hpp"
#include "qml/qnn.hpp"
#include "qml/stats.hpp"
#include "test_util.hpp"

using namespace qml;
using namespace qml::testutil;

namespace {

std::vector<StateVector> fldc_list(uint32_t n, int blocks, int count, uint64_t seed) {
    std::vector<StateVector> s;
    for (int i = 0; i < count; ++i) {
        Rng rng = substream(seed, {static_cast<uint64_t>(i)});
        s.push_back(fldc_state(n, blocks, rng));
    }
    return s;
}

}  // namespace

TEST_CASE("coeff matrix row construction") {
    Rng rng = substream(91, {0});
    WindowAssignment wins = make_windows(5, 2, Connectivity::OneDCyclic, rng);
    auto states = fldc_list(5, 1, 20, 9100);

    CoeffStats xyz = coeff_matrix(states, wins, HamiltonianFamily::XYZ);
    // (3^2 - 1) per window, 5 windows, no overlap-duplicates for full-support
    // strings on distinct windows.
    CHECK(xyz.rows.size() == 8 * 5);
    CHECK(xyz.multiplicity_total == 8 * 5);
    for (const CoeffRow& r : xyz.rows) {
        CHECK(r.weight == 2);
        bool all_z = true;
        for (uint32_t q = 0; q < 5; ++q) {
            if (r.str.code(q) != 0 && r.str.code(q) != 3) all_z = false;
        }
        CHECK(!all_z);
    }

    CoeffStats xy = coeff_matrix(states, wins, HamiltonianFamily::XY);
    CHECK(xy.rows.size() == 4 * 5);
    for (const CoeffRow& r : xy.rows) {
        for (uint32_t q = 0; q < 5; ++q) CHECK(r.str.code(q) != 3);
    }

    // Full-register windows coincide as sets: multiplicity folds them.
    WindowAssignment full = make_windows(3, 3, Connectivity::OneDCyclic, rng);
    auto small_states = fldc_list(3, 0, 5, 9101);
    CoeffStats folded = coeff_matrix(small_states, full, HamiltonianFamily::XYZ);
    CHECK(folded.multiplicity_total == 26 * 3);
    CHECK(folded.rows.size() == 26);
    for (const CoeffRow& r : folded.rows) CHECK(r.multiplicity == 3);
}

TEST_CASE("coeff stats on degenerate and Haar data") {
    // Copies of |0...0>: single-Z rows are constant 1.
    std::vector<StateVector> zeros(10, StateVector::zero_state(4));
    std::vector<PauliString> zrows;
    for (uint32_t q = 0; q < 4; ++q) zrows.push_back(PauliString::single(4, q, 3));
    CoeffStats st = coeff_matrix_for_strings(zeros, zrows, 1);
    for (const CoeffRow& r : st.rows) {
        CHECK(r.mean == doctest::Approx(1.0));
        CHECK(r.sd == 0.0);
        CHECK(r.constant);
    }

    // Qubit-embedded x = 0: single-X rows are constant 1.
    std::vector<StateVector> plus(8, qubit_embed(std::vector<double>(4, 0.0)));
    std::vector<PauliString> xrows;
    for (uint32_t q = 0; q < 4; ++q) xrows.push_back(PauliString::single(4, q, 1));
    CoeffStats stx = coeff_matrix_for_strings(plus, xrows, 1);
    for (const CoeffRow& r : stx.rows) {
        CHECK(r.mean == doctest::Approx(1.0));
        CHECK(r.constant);
    }

    // Haar data: alpha_hat near 1/(2^N + 1) for weight-1 rows.
    const uint32_t n = 6;
    std::vector<StateVector> haar;
    for (int i = 0; i < 2000; ++i) {
        Rng rng = substream(92, {static_cast<uint64_t>(i)});
        haar.push_back(haar_state(n, rng));
    }
    std::vector<PauliString> rows;
    for (uint32_t q = 0; q < n; ++q) rows.push_back(PauliString::single(n, q, 3));
    CoeffStats sth = coeff_matrix_for_strings(haar, rows, 1);
    for (const CoeffRow& r : sth.rows) {
        CHECK(r.alpha_hat == doctest::Approx(1.0 / 65.0).epsilon(0.08));
    }
    CHECK(sth.haar_ref == doctest::Approx(1.0 / 65.0));
}

TEST_CASE("mean statistic decays like the square root of the sample count") {
    const uint32_t n = 8;
    Rng rng = substream(93, {0});
    WindowAssignment wins = make_windows(n, 2, Connectivity::OneDCyclic, rng);
    auto states = fldc_list(n, 1, 1000, 9300);

    std::vector<double> log_sizes, log_stats;
    for (int size : {10, 50, 200, 1000}) {
        CoeffStats st = coeff_matrix(std::span(states.data(), size), wins, HamiltonianFamily::XYZ);
        MeanStat ms = mean_statistic(st);
        CHECK(ms.weight_s_mean > 0.0);
        log_sizes.push_back(std::log(static_cast<double>(size)));
        log_stats.push_back(std::log(ms.weight_s_mean));
    }
    LineFit fit = fit_line(log_sizes, log_stats);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.3));

    // Synthetic zero-mean rows sit at the CLT scale |g|/sqrt(M).
    const int m_samples = 400;
    std::vector<StateVector> dummy(m_samples, StateVector::zero_state(1));
    CoeffStats synth;
    synth.n_samples = m_samples;
    synth.window_size = 1;
    synth.rows.clear();
    Rng srng = substream(93, {1});
    const int n_rows = 200;
    std::vector<double> per_row;
    for (int r = 0; r < n_rows; ++r) {
        std::vector<double> vals(m_samples);
        for (auto& v : vals) v = normal(srng);
        double m = mean(vals);
        double sd = sample_sd(vals);
        per_row.push_back(std::abs(m / sd));
    }
    double avg = mean(per_row);
    double expected = std::sqrt(2.0 / M_PI) / std::sqrt(static_cast<double>(m_samples));
    CHECK(avg > 0.5 * expected);
    CHECK(avg < 1.5 * expected);

    // Constant rows are excluded, not divided.
    std::vector<StateVector> zeros(5, StateVector::zero_state(2));
    std::vector<PauliString> zrows = {PauliString::from_text("ZI"), PauliString::from_text("IZ")};
    CoeffStats stz = coeff_matrix_for_strings(zeros, zrows, 1);
    MeanStat msz = mean_statistic(stz);
    CHECK(msz.excluded_constant == 2);
    CHECK(msz.weight_s_mean == 0.0);
}

TEST_CASE("haar-data spectrum report") {
    const int size_a = 10;
    const int depth = 150;
    std::vector<double> lmax_by_n;
    for (uint32_t n : {4u, 6u}) {
        std::vector<double> lmaxes;
        for (uint64_t t = 0; t < 6; ++t) {
            Rng rng = substream(94, {n, t});
            LocalZObservable obs = sample_coeffs(n, 1.0, rng);
            Provenance prov{.generator = "haar", .seed = mix(94, n * 100 + t), .n_qubits = n,
                            .count = size_a, .split = "train"};
            Dataset data = generate_dataset(prov);
            WindowAssignment wins = make_windows(n, 2, Connectivity::OneDCyclic, rng);
            Ansatz ansatz = sample_ansatz(n, 2, depth, wins, HamiltonianFamily::XYZ, rng);
            std::vector<double> theta0(depth, 0.0);
            BoundReport rep = spectrum_bound_haar(qntk(jacobian(ansatz, theta0, data.states, obs)),
                                                      obs, n, size_a, 0.2);
            CHECK(rep.empirical_max >= 0.0);
            CHECK(rep.leading > 0.0);
            lmaxes.push_back(rep.empirical_max);
        }
        lmax_by_n.push_back(mean(lmaxes));
    }
    // One added qubit pair shrinks lambda_max by roughly the leading term's
    // factor of 4 (the coefficient sum grows linearly with N, so the band is
    // wide).
    double ratio = lmax_by_n[0] / lmax_by_n[1];
    CHECK(ratio > 1.5);
    CHECK(ratio < 8.0);

    // Zero observable: zero kernel.
    Rng rng = substream(94, {0, 0});
    LocalZObservable zero_obs(std::vector<double>(4, 0.0));
    Dataset data = generate_dataset(Provenance{.generator = "haar", .seed = 9400, .n_qubits = 4,
                                               .count = 4, .split = "train"});
    WindowAssignment wins = make_windows(4, 2, Connectivity::OneDCyclic, rng);
    Ansatz ansatz = sample_ansatz(4, 2, 20, wins, HamiltonianFamily::XYZ, rng);
    std::vector<double> theta0(20, 0.0);
    BoundReport rep = spectrum_bound_haar(qntk(jacobian(ansatz, theta0, data.states, zero_obs)),
                                              zero_obs, 4, 4, 0.2);
    CHECK(rep.empirical_max == 0.0);
}

TEST_CASE("spectrum bracket for the qubit-embedding family") {
    const uint32_t n = 6;
    const int s = 2;
    const int depth = 600;
    const int size_a = 8;
    Rng rng = substream(95, {0});
    LocalZObservable obs = sample_coeffs(n, 1.0, rng);
    Provenance prov{.generator = "embed-uniform", .seed = 9500, .n_qubits = n, .count = size_a,
                    .split = "train"};
    Dataset data = generate_dataset(prov);
    WindowAssignment wins = make_windows(n, s, Connectivity::OneDCyclic, rng);
    Ansatz ansatz = sample_ansatz(n, s, depth, wins, HamiltonianFamily::XY, rng);
    std::vector<double> theta0(depth, 0.0);
    SymMatrix k0 = qntk(jacobian(ansatz, theta0, data.states, obs));
    CoeffStats stats = coeff_matrix(data.states, wins, HamiltonianFamily::XY);
    BoundReport rep = spectrum_bracket(k0, stats, obs, HamiltonianFamily::XY, 0.5, 0.2);
    CHECK(!rep.vacuous);
    CHECK(rep.lower == doctest::Approx(0.5 * delta_s(obs, s) / 4.0));
    double norm_sq = obs.spectral_norm() * obs.spectral_norm();
    CHECK(rep.upper == doctest::Approx(1.5 * norm_sq / 4.0));
    CHECK(rep.empirical_max <= rep.upper);

    // All-ones coefficients at S >= 2 cancel: vacuous report.
    LocalZObservable ones(std::vector<double>(n, 1.0));
    BoundReport vac = spectrum_bracket(k0, stats, ones, HamiltonianFamily::XY, 0.5, 0.2);
    CHECK(vac.vacuous);
}

TEST_CASE("smoothness coefficient") {
    const int depth = 6, m = 4;
    std::vector<double> j0(depth * m), theta0(depth, 0.0), theta1(depth, 0.0);
    Rng rng = substream(96, {0});
    for (auto& v : j0) v = normal(rng);
    theta1[2] = 0.5;

    CHECK(smoothness_coefficient(j0, j0, depth, m, theta1, theta0) == 0.0);
    CHECK_THROWS(smoothness_coefficient(j0, j0, depth, m, theta0, theta0));

    // Rank-one difference: top singular value is known in closed form.
    std::vector<double> j1 = j0;
    std::vector<double> u(depth), v(m);
    double un = 0.0, vn = 0.0;
    for (auto& x : u) {
        x = normal(rng);
        un += x * x;
    }
    for (auto& x : v) {
        x = normal(rng);
        vn += x * x;
    }
    for (int a = 0; a < m; ++a) {
        for (int d = 0; d < depth; ++d) j1[a * depth + d] += v[a] * u[d];
    }
    double sigma_sq = un * vn;
    double got = smoothness_coefficient(j1, j0, depth, m, theta1, theta0);
    double expected = sigma_sq / (depth * 0.25);
    CHECK(got == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("t-design moment identities") {
    MomentCheckReport rep = tdesign_moment_check(4, 3000, 97);
    CHECK(rep.pass);
    CHECK(rep.first_dev_sigma <= 5.0);
    CHECK(rep.second_dev_sigma <= 5.0);

    MomentCheckReport again = tdesign_moment_check(4, 3000, 97);
    CHECK(rep.first_mc == again.first_mc);
    CHECK(rep.second_mc == again.second_mc);

    // A = B = I: the first identity gives d exactly on every draw.
    const int d = 8;
    Rng rng = substream(97, {5});
    for (int t = 0; t < 5; ++t) {
        CMat w = haar_unitary(d, rng);
        CMat prod = matmul(w, adjoint(w));
        std::complex<double> tr = trace(prod);
        CHECK(std::abs(tr - static_cast<double>(d)) <= 1e-10);
    }

    CHECK_THROWS(tdesign_moment_check(8, 100, 1));
}

TEST_CASE("held-out whitening normalizes column norms on average") {
    const uint32_t n = 6;
    const int half = 250;
    auto states = fldc_list(n, 1, 2 * half, 9800);
    Rng rng = substream(98, {0});
    WindowAssignment wins = make_windows(n, 2, Connectivity::OneDCyclic, rng);

    CoeffStats ref = coeff_matrix(std::span(states.data(), half), wins, HamiltonianFamily::XYZ);
    CoeffStats held = coeff_matrix(std::span(states.data() + half, half), wins,
                                   HamiltonianFamily::XYZ);
    REQUIRE(ref.rows.size() == held.rows.size());

    double mean_norm_sq = 0.0;
    int live_mult = 0;
    for (const CoeffRow& r : ref.rows) {
        if (!r.constant) live_mult += r.multiplicity;
    }
    for (int c = 0; c < held.n_samples; ++c) {
        double norm_sq = 0.0;
        for (std::size_t r = 0; r < held.rows.size(); ++r) {
            if (ref.rows[r].constant) continue;
            double v = held.a[r * held.n_samples + c];
            norm_sq += ref.rows[r].multiplicity * v * v / ref.rows[r].alpha_hat;
        }
        mean_norm_sq += norm_sq / live_mult;
    }
    mean_norm_sq /= held.n_samples;
    CHECK(mean_norm_sq == doctest::Approx(1.0).epsilon(0.15));
}

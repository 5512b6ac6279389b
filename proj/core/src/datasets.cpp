#include "qml/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qml/linalg.hpp"

namespace qml {

StateVector haar_state(uint32_t n, Rng& rng) {
    StateVector s(n);
    for (std::size_t i = 0; i < s.size(); ++i) s.amp(i) = {normal(rng), normal(rng)};
    s.normalize();
    return s;
}

StateVector fldc_state(uint32_t n, int blocks, Rng& rng) {
    return fldc_state(n, blocks, [&rng] { return uniform(rng, 0.0, 2.0 * M_PI); });
}

StateVector fldc_state(uint32_t n, int blocks, const std::function<double()>& next_angle) {
    if (blocks < 0) throw std::invalid_argument("fldc_state: negative block count");
    if (blocks >= 1 && n < 2) throw std::invalid_argument("fldc_state: blocks need at least 2 qubits");
    StateVector s = StateVector::zero_state(n);
    for (uint32_t q = 0; q < n; ++q) {
        apply_rx(s, q, next_angle());
        apply_ry(s, q, next_angle());
    }
    for (int b = 0; b < blocks; ++b) {
        for (uint32_t q = 0; q < n; ++q) {
            uint32_t q2 = (q + 1) % n;
            apply_cz(s, q, q2);
            apply_rx(s, q, next_angle());
            apply_ry(s, q, next_angle());
            apply_rx(s, q2, next_angle());
            apply_ry(s, q2, next_angle());
        }
    }
    return s;
}

StateVector qubit_embed(std::span<const double> x) {
    const uint32_t n = static_cast<uint32_t>(x.size());
    for (double v : x) {
        if (std::abs(v) > 1.0) throw std::invalid_argument("qubit_embed: entry outside [-1, 1]");
    }
    // Product state: amplitude of |b> is prod_n exp(-+ i pi x_n / 2)/sqrt(2).
    StateVector s(n);
    const double scale = std::pow(2.0, -0.5 * n);
    std::vector<std::complex<double>> ph0(n), ph1(n);
    for (uint32_t q = 0; q < n; ++q) {
        ph0[q] = std::polar(1.0, -M_PI * x[q] / 2.0);
        ph1[q] = std::polar(1.0, M_PI * x[q] / 2.0);
    }
    const uint64_t dim = s.size();
    for (uint64_t b = 0; b < dim; ++b) {
        std::complex<double> a = scale;
        for (uint32_t q = 0; q < n; ++q) {
            a *= (b >> (n - 1 - q)) & 1 ? ph1[q] : ph0[q];
        }
        s.amp(b) = a;
    }
    return s;
}

CMat heisenberg_unitary(uint32_t n, double t) {
    if (n < 2) throw std::invalid_argument("heisenberg_unitary: need at least 2 qubits");
    if (n > 12) throw std::invalid_argument("heisenberg_unitary: dimension above 4096");
    const uint64_t dim = uint64_t{1} << n;
    HermMatrix h(static_cast<int>(dim));
    // Each two-qubit Pauli term is a signed permutation: accumulate
    // H[b', b] += phase with sigma_p |b> = phase |b'>.
    for (uint32_t q = 0; q + 1 < n; ++q) {
        for (int code : {1, 2, 3}) {
            PauliString p = PauliString::identity(n).with(q, code).with(q + 1, code);
            for (uint64_t b = 0; b < dim; ++b) {
                auto [b2, phase] = pauli_basis_action(p, b);
                h.at(static_cast<int>(b2), static_cast<int>(b)) += phase;
            }
        }
    }
    auto u = herm_expm(h, t);
    CMat out(static_cast<int>(dim), static_cast<int>(dim));
    out.a = std::move(u);
    return out;
}

std::vector<double> label_with_target(std::span<const StateVector> states, const CMat& target,
                                      const LocalZObservable& obs) {
    std::vector<double> y(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        StateVector evolved = states[i];
        apply_dense(target, evolved);
        y[i] = expectation(evolved, obs);
    }
    return y;
}

WindowAssignment make_windows(uint32_t n, int s, Connectivity conn, Rng& rng, int count) {
    if (s < 1 || s > static_cast<int>(n)) throw std::invalid_argument("make_windows: window size out of range");
    WindowAssignment w;
    w.n_qubits = n;
    w.window_size = s;
    w.connectivity = conn;
    if (conn == Connectivity::OneDCyclic) {
        for (uint32_t q = 0; q < n; ++q) {
            std::vector<int> win(s);
            for (int i = 0; i < s; ++i) win[i] = static_cast<int>((q + i) % n);
            w.windows.push_back(std::move(win));
        }
    } else {
        // Partial Fisher-Yates: uniform size-s subset, reported sorted.
        std::vector<int> pool(n);
        for (int c = 0; c < count; ++c) {
            std::iota(pool.begin(), pool.end(), 0);
            for (int i = 0; i < s; ++i) {
                uint64_t j = i + uniform_index(rng, n - i);
                std::swap(pool[i], pool[j]);
            }
            std::vector<int> win(pool.begin(), pool.begin() + s);
            std::sort(win.begin(), win.end());
            w.windows.push_back(std::move(win));
        }
    }
    return w;
}

WineTable parse_wine_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("wine: cannot open " + path);
    WineTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                double v = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
                vals.push_back(v);
            } catch (const std::exception&) {
                throw std::runtime_error("wine: malformed cell at line " + std::to_string(lineno));
            }
        }
        if (vals.size() != 14) {
            throw std::runtime_error("wine: expected 14 columns at line " + std::to_string(lineno));
        }
        int cls = static_cast<int>(vals[0]);
        if (cls < 1 || cls > 3 || vals[0] != cls) {
            throw std::runtime_error("wine: bad class label at line " + std::to_string(lineno));
        }
        t.cls.push_back(cls);
        t.rows.emplace_back(vals.begin() + 1, vals.end());
    }
    if (t.rows.empty()) throw std::runtime_error("wine: empty file " + path);
    return t;
}

WineSplits load_wine(const std::string& path, std::pair<int, int> class_pair, int per_split, Rng& rng) {
    if (per_split < 2 || per_split % 2 != 0) {
        throw std::invalid_argument("load_wine: per_split must be even and >= 2");
    }
    WineTable table = parse_wine_csv(path);

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < table.cls.size(); ++i) {
        if (table.cls[i] == class_pair.first || table.cls[i] == class_pair.second) kept.push_back(i);
    }
    const std::size_t n_feat = 13;
    std::vector<double> fmin(n_feat, std::numeric_limits<double>::infinity());
    std::vector<double> fmax(n_feat, -std::numeric_limits<double>::infinity());
    for (std::size_t i : kept) {
        for (std::size_t f = 0; f < n_feat; ++f) {
            fmin[f] = std::min(fmin[f], table.rows[i][f]);
            fmax[f] = std::max(fmax[f], table.rows[i][f]);
        }
    }

    auto scaled_row = [&](std::size_t i) {
        std::vector<double> x(n_feat);
        for (std::size_t f = 0; f < n_feat; ++f) {
            double span = fmax[f] - fmin[f];
            x[f] = span == 0.0 ? 0.0 : -1.0 + 2.0 * (table.rows[i][f] - fmin[f]) / span;
        }
        return x;
    };

    const int per_class = per_split / 2;
    std::vector<std::size_t> idx_pos, idx_neg;
    for (std::size_t i : kept) {
        (table.cls[i] == class_pair.first ? idx_pos : idx_neg).push_back(i);
    }
    if (static_cast<int>(idx_pos.size()) < 2 * per_class || static_cast<int>(idx_neg.size()) < 2 * per_class) {
        throw std::runtime_error("load_wine: not enough samples per class for the requested splits");
    }
    for (auto* idx : {&idx_pos, &idx_neg}) {
        for (std::size_t i = idx->size(); i > 1; --i) {
            uint64_t j = uniform_index(rng, i);
            std::swap((*idx)[i - 1], (*idx)[j]);
        }
    }

    WineSplits out;
    auto fill = [&](Dataset& ds, std::vector<std::vector<double>>& xs, int offset, const char* split) {
        for (int c = 0; c < per_class; ++c) {
            for (auto [idx, label] : {std::pair{&idx_pos, 1.0}, std::pair{&idx_neg, -1.0}}) {
                std::size_t i = (*idx)[offset + c];
                std::vector<double> x = scaled_row(i);
                ds.states.push_back(qubit_embed(x));
                ds.labels.push_back(label);
                xs.push_back(std::move(x));
            }
        }
        ds.prov.generator = "wine";
        ds.prov.n_qubits = static_cast<uint32_t>(n_feat);
        ds.prov.count = per_split;
        ds.prov.split = split;
        ds.prov.wine_path = path;
        ds.prov.class_pair = class_pair;
        ds.prov.per_split = per_split;
    };
    fill(out.train, out.x_train, 0, "train");
    fill(out.test, out.x_test, per_class, "test");
    return out;
}

Dataset generate_dataset(const Provenance& prov) {
    Dataset ds;
    ds.prov = prov;
    if (prov.generator == "haar") {
        for (int i = 0; i < prov.count; ++i) {
            Rng rng = substream(prov.seed, {static_cast<uint64_t>(i)});
            ds.states.push_back(haar_state(prov.n_qubits, rng));
        }
    } else if (prov.generator == "fldc") {
        for (int i = 0; i < prov.count; ++i) {
            Rng rng = substream(prov.seed, {static_cast<uint64_t>(i)});
            ds.states.push_back(fldc_state(prov.n_qubits, prov.fldc_blocks, rng));
        }
    } else if (prov.generator == "embed-uniform") {
        for (int i = 0; i < prov.count; ++i) {
            Rng rng = substream(prov.seed, {static_cast<uint64_t>(i)});
            std::vector<double> x(prov.n_qubits);
            for (auto& v : x) v = uniform(rng, -1.0, 1.0);
            ds.states.push_back(qubit_embed(x));
        }
    } else if (prov.generator == "wine") {
        Rng rng = substream(prov.seed, {0});
        WineSplits splits = load_wine(prov.wine_path, prov.class_pair, prov.per_split, rng);
        return prov.split == "test" ? std::move(splits.test) : std::move(splits.train);
    } else {
        throw std::invalid_argument("generate_dataset: unknown generator " + prov.generator);
    }
    ds.labels.assign(ds.states.size(), 0.0);
    return ds;
}

void export_dataset(const Dataset& ds, const std::string& dir, const std::string& basename) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::json manifest;
    manifest["generator"] = ds.prov.generator;
    manifest["seed"] = ds.prov.seed;
    manifest["n_qubits"] = ds.prov.n_qubits;
    manifest["count"] = ds.states.size();
    manifest["fldc_blocks"] = ds.prov.fldc_blocks;
    manifest["split"] = ds.prov.split;
    manifest["labels"] = ds.labels;
    std::vector<std::string> blobs;
    for (std::size_t i = 0; i < ds.states.size(); ++i) {
        std::string name = basename + "_" + std::to_string(i) + ".bin";
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        dump_state(ds.states[i], out);
        blobs.push_back(name);
    }
    manifest["blobs"] = blobs;
    std::ofstream mf(fs::path(dir) / (basename + ".json"));
    mf << manifest.dump(2) << "\n";
}

}  // namespace qml

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qml/cmat.hpp"
#include "qml/observable.hpp"
#include "qml/rng.hpp"
#include "qml/state.hpp"

namespace qml {

// Enough to rebuild the states bit-identically: generator kind, seed, and
// the generator's parameters. Sample i always draws from substream(seed, {i}).
struct Provenance {
    std::string generator;  // "haar" | "fldc" | "embed-uniform" | "wine"
    uint64_t seed = 0;
    uint32_t n_qubits = 0;
    int count = 0;
    int fldc_blocks = 0;
    std::string split;  // "train" | "test"
    // wine only
    std::string wine_path;
    std::pair<int, int> class_pair{0, 0};
    int per_split = 0;
};

struct Dataset {
    std::vector<StateVector> states;
    std::vector<double> labels;
    Provenance prov;

    std::size_t size() const { return states.size(); }
};

// Exactly Haar-distributed pure state: normalized i.i.d. complex Gaussian
// amplitudes (hence a 2-design sample).
StateVector haar_state(uint32_t n, Rng& rng);

// Finite local-depth circuit state from |0...0>: one RX,RY layer on every
// qubit, then `blocks` cyclic cascades of CZ(q, q+1 mod n) followed by RX,RY
// on both endpoints, all angles uniform in [0, 2pi).
StateVector fldc_state(uint32_t n, int blocks, Rng& rng);
// Angle-source variant (test hook: force angles).
StateVector fldc_state(uint32_t n, int blocks, const std::function<double()>& next_angle);

// x in [-1,1]^N -> tensor_n exp(-i Z pi x_n / 2) |+>.
StateVector qubit_embed(std::span<const double> x);

// Heisenberg chain with open boundary: sum_{n=0}^{N-2} X_n X_{n+1} +
// Y_n Y_{n+1} + Z_n Z_{n+1}, exponentiated to U = exp(-i t H).
CMat heisenberg_unitary(uint32_t n, double t);

// y_a = <psi_a| U^dag O U |psi_a>
std::vector<double> label_with_target(std::span<const StateVector> states, const CMat& target,
                                      const LocalZObservable& obs);

enum class Connectivity { OneDCyclic, AllToAll };

// Generator alphabet for variational gates: {X,Y,Z}^S or {X,Y}^S per window.
enum class HamiltonianFamily { XYZ, XY };

struct WindowAssignment {
    uint32_t n_qubits = 0;
    int window_size = 0;
    Connectivity connectivity = Connectivity::OneDCyclic;
    std::vector<std::vector<int>> windows;
};

// 1D-cyclic: the N contiguous windows {q, ..., q+s-1 mod n}. All-to-all:
// `count` windows drawn uniformly from all size-s subsets.
WindowAssignment make_windows(uint32_t n, int s, Connectivity conn, Rng& rng, int count = 0);

struct WineTable {
    std::vector<int> cls;                    // 1..3
    std::vector<std::vector<double>> rows;   // 13 features each
};
WineTable parse_wine_csv(const std::string& path);

struct WineSplits {
    Dataset train, test;
    std::vector<std::vector<double>> x_train, x_test;  // scaled features in [-1,1]
};

// Keeps the two requested classes (labels +1 for first, -1 for second),
// min-max rescales each feature to [-1,1] over the kept samples, then draws
// balanced class-stratified splits of per_split samples each.
WineSplits load_wine(const std::string& path, std::pair<int, int> class_pair, int per_split, Rng& rng);

// Rebuilds the states of a generated dataset bit-identically. Labels are the
// generator's own (wine classes); target-derived labels are reapplied by the
// caller.
Dataset generate_dataset(const Provenance& prov);

// JSON manifest + one binary statevector blob per state (state_sim dump
// format) under dir with the given basename.
void export_dataset(const Dataset& ds, const std::string& dir, const std::string& basename);

}  // namespace qml

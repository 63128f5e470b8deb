// Pauli-string Hamiltonians: the nearest-neighbor spin-model family, the three
// benchmark models, dense realization, and exact diagonalization.
#pragma once

#include <string>
#include <vector>

#include "dissim/states.hpp"

namespace dissim {

struct PauliTerm {
    double coeff = 0.0;
    std::string ops;  // one of I,X,Y,Z per qubit
};

struct PauliHamiltonian {
    int qubit_count = 0;
    std::vector<PauliTerm> terms;
};

// Open-boundary nearest-neighbor couplings plus local fields.
struct SpinModelSpec {
    int n = 2;
    double Jx = 0.0, Jy = 0.0, Jz = 0.0;
    double hx = 0.0, hy = 0.0, hz = 0.0;
};

struct BenchmarkModels {
    PauliHamiltonian h1;  // sum XX + 0.3 sum Z
    PauliHamiltonian h2;  // sum ZZ + 0.3 sum X
    PauliHamiltonian h3;  // sum XX + sum YY + 0.3 sum ZZ
};

struct GroundState {
    double energy = 0.0;
    PureState state;
};

PauliHamiltonian build_spin_model(const SpinModelSpec& spec);
BenchmarkModels benchmark_models(int n);
CMatrix to_dense(const PauliHamiltonian& h);
GroundState ground_energy(const PauliHamiltonian& h);

// Text form, one term per line: "<coefficient> <string>", e.g. "1.0 XXI".
PauliHamiltonian parse_pauli_text(const std::string& text);
std::string format_pauli_text(const PauliHamiltonian& h);

}  // namespace dissim

#include "dissim/hamiltonian.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace dissim {

namespace {

constexpr int kMaxQubits = 12;

void check_term(const PauliTerm& term, int n) {
    if (static_cast<int>(term.ops.size()) != n)
        throw ContractError("Pauli string length " + std::to_string(term.ops.size()) +
                            " does not match qubit count " + std::to_string(n));
    for (char c : term.ops)
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
            throw ContractError(std::string("invalid Pauli label '") + c + "'");
    if (!std::isfinite(term.coeff)) throw ContractError("non-finite coefficient");
}

std::string single_site(int n, int i, char op) {
    std::string s(n, 'I');
    s[i] = op;
    return s;
}

std::string two_site(int n, int i, char op) {
    std::string s(n, 'I');
    s[i] = op;
    s[i + 1] = op;
    return s;
}

}  // namespace

PauliHamiltonian build_spin_model(const SpinModelSpec& spec) {
    if (spec.n < 2) throw ContractError("spin model needs n >= 2");
    PauliHamiltonian h;
    h.qubit_count = spec.n;
    const struct {
        double c;
        char op;
    } bonds[] = {{spec.Jx, 'X'}, {spec.Jy, 'Y'}, {spec.Jz, 'Z'}};
    for (const auto& b : bonds)
        if (b.c != 0.0)
            for (int i = 0; i + 1 < spec.n; ++i)
                h.terms.push_back({b.c, two_site(spec.n, i, b.op)});
    const struct {
        double c;
        char op;
    } fields[] = {{spec.hx, 'X'}, {spec.hy, 'Y'}, {spec.hz, 'Z'}};
    for (const auto& f : fields)
        if (f.c != 0.0)
            for (int i = 0; i < spec.n; ++i) h.terms.push_back({f.c, single_site(spec.n, i, f.op)});
    return h;
}

BenchmarkModels benchmark_models(int n) {
    if (n < 2) throw ContractError("benchmark models need n >= 2");
    BenchmarkModels m;
    m.h1 = build_spin_model({n, 1.0, 0.0, 0.0, 0.0, 0.0, 0.3});
    m.h2 = build_spin_model({n, 0.0, 0.0, 1.0, 0.3, 0.0, 0.0});
    // H3's ZZ term runs over bonds, not sites, so it is not a field term.
    m.h3.qubit_count = n;
    for (int i = 0; i + 1 < n; ++i) m.h3.terms.push_back({1.0, two_site(n, i, 'X')});
    for (int i = 0; i + 1 < n; ++i) m.h3.terms.push_back({1.0, two_site(n, i, 'Y')});
    for (int i = 0; i + 1 < n; ++i) m.h3.terms.push_back({0.3, two_site(n, i, 'Z')});
    return m;
}

CMatrix to_dense(const PauliHamiltonian& h) {
    if (h.qubit_count < 1 || h.qubit_count > kMaxQubits)
        throw ContractError("to_dense: qubit count out of range");
    const int dim = 1 << h.qubit_count;
    CMatrix out(dim, dim);
    for (const PauliTerm& term : h.terms) {
        check_term(term, h.qubit_count);
        // Each Pauli string is a (phase, column-permutation) pair: for row r the
        // only nonzero column is r with X/Y bits flipped.
        for (int r = 0; r < dim; ++r) {
            int c = r;
            complexd phase = term.coeff;
            for (int q = 0; q < h.qubit_count; ++q) {
                const int bit = 1 << (h.qubit_count - 1 - q);
                const int rb = (r & bit) ? 1 : 0;
                switch (term.ops[q]) {
                    case 'I':
                        break;
                    case 'X':
                        c ^= bit;
                        break;
                    case 'Y':
                        c ^= bit;
                        // <r|Y|c>: Y|0> = i|1>, Y|1> = -i|0>; row bit rb selects.
                        phase *= rb ? complexd(0.0, 1.0) : complexd(0.0, -1.0);
                        break;
                    case 'Z':
                        if (rb) phase = -phase;
                        break;
                }
            }
            out.at(r, c) += phase;
        }
    }
    return out;
}

GroundState ground_energy(const PauliHamiltonian& h) {
    const CMatrix dense = to_dense(h);
    const EigResult e = herm_eig(dense);
    GroundState g;
    g.energy = e.eigenvalues.front();
    g.state.shape = RegisterShape::qubits(h.qubit_count);
    g.state.amplitudes.resize(dense.rows);
    for (int i = 0; i < dense.rows; ++i) g.state.amplitudes[i] = e.eigenvectors.at(i, 0);
    return g;
}

PauliHamiltonian parse_pauli_text(const std::string& text) {
    PauliHamiltonian h;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        double coeff;
        std::string ops;
        if (!(ls >> coeff)) {
            std::string leftover;
            if (ls.clear(), ls >> leftover)
                throw ContractError("pauli text line " + std::to_string(lineno) +
                                    ": expected '<coefficient> <string>'");
            continue;  // blank or comment-only line
        }
        if (!(ls >> ops))
            throw ContractError("pauli text line " + std::to_string(lineno) +
                                ": missing Pauli string");
        std::string extra;
        if (ls >> extra)
            throw ContractError("pauli text line " + std::to_string(lineno) +
                                ": trailing content '" + extra + "'");
        if (h.terms.empty())
            h.qubit_count = static_cast<int>(ops.size());
        PauliTerm term{coeff, ops};
        check_term(term, h.qubit_count);
        h.terms.push_back(std::move(term));
    }
    if (h.terms.empty()) throw ContractError("pauli text: no terms");
    return h;
}

std::string format_pauli_text(const PauliHamiltonian& h) {
    std::string out;
    char buf[64];
    for (const PauliTerm& t : h.terms) {
        std::snprintf(buf, sizeof(buf), "%.17g", t.coeff);
        out += buf;
        out += ' ';
        out += t.ops;
        out += '\n';
    }
    return out;
}

}  // namespace dissim

#include "dissim/kernels.hpp"

#include <cmath>
#include <vector>

namespace dissim::detail {

void validate_targets(std::span<const int> targets, int qubit_count) {
    for (size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0 || targets[i] >= qubit_count)
            throw ContractError("target qubit " + std::to_string(targets[i]) + " out of range");
        for (size_t j = i + 1; j < targets.size(); ++j)
            if (targets[i] == targets[j])
                throw ContractError("duplicate target qubit " + std::to_string(targets[i]));
    }
}

namespace {

struct Embedding {
    int sub = 0;                 // 2^arity
    int group_mask = 0;          // OR of target bit masks
    std::vector<int> offsets;    // sub-index -> index offset
};

Embedding make_embedding(std::span<const int> targets, int qubit_count) {
    Embedding e;
    const int k = static_cast<int>(targets.size());
    e.sub = 1 << k;
    e.offsets.assign(e.sub, 0);
    for (int t = 0; t < k; ++t) {
        const int mask = 1 << (qubit_count - 1 - targets[t]);
        e.group_mask |= mask;
        for (int a = 0; a < e.sub; ++a)
            if ((a >> (k - 1 - t)) & 1) e.offsets[a] |= mask;
    }
    return e;
}

// B <- (K embedded) B, in place. Row groups mix; each group is loaded into
// scratch before the write-back.
void left_apply(CMatrix& rho, const CMatrix& k, const Embedding& e) {
    const int dim = rho.rows;
    const int sub = e.sub;
    thread_local std::vector<complexd> scratch;
    scratch.resize(static_cast<size_t>(sub) * dim);
    for (int base = 0; base < dim; ++base) {
        if (base & e.group_mask) continue;
        for (int b = 0; b < sub; ++b) {
            const complexd* src = &rho.data[static_cast<size_t>(base + e.offsets[b]) * dim];
            std::copy(src, src + dim, &scratch[static_cast<size_t>(b) * dim]);
        }
        for (int a = 0; a < sub; ++a) {
            complexd* dst = &rho.data[static_cast<size_t>(base + e.offsets[a]) * dim];
            const complexd* krow = &k.data[static_cast<size_t>(a) * sub];
            for (int c = 0; c < dim; ++c) {
                complexd acc = 0.0;
                for (int b = 0; b < sub; ++b) acc += krow[b] * scratch[static_cast<size_t>(b) * dim + c];
                dst[c] = acc;
            }
        }
    }
}

// B <- B (K embedded)^dagger, in place. Column groups mix within each row.
void right_apply_dagger(CMatrix& rho, const CMatrix& k, const Embedding& e) {
    const int dim = rho.rows;
    const int sub = e.sub;
    std::vector<complexd> vals(sub);
    for (int r = 0; r < dim; ++r) {
        complexd* row = &rho.data[static_cast<size_t>(r) * dim];
        for (int base = 0; base < dim; ++base) {
            if (base & e.group_mask) continue;
            for (int b = 0; b < sub; ++b) vals[b] = row[base + e.offsets[b]];
            for (int a = 0; a < sub; ++a) {
                const complexd* krow = &k.data[static_cast<size_t>(a) * sub];
                complexd acc = 0.0;
                for (int b = 0; b < sub; ++b) acc += std::conj(krow[b]) * vals[b];
                row[base + e.offsets[a]] = acc;
            }
        }
    }
}

}  // namespace

void conjugate_gate(CMatrix& rho, const CMatrix& g, std::span<const int> targets,
                    int qubit_count) {
    validate_targets(targets, qubit_count);
    if (g.rows != (1 << targets.size()) || !g.square())
        throw ContractError("gate matrix size does not match target count");
    const Embedding e = make_embedding(targets, qubit_count);
    left_apply(rho, g, e);
    right_apply_dagger(rho, g, e);
}

void left_multiply_gate(CMatrix& m, const CMatrix& g, std::span<const int> targets,
                        int qubit_count) {
    validate_targets(targets, qubit_count);
    if (g.rows != (1 << targets.size()) || !g.square())
        throw ContractError("gate matrix size does not match target count");
    left_apply(m, g, make_embedding(targets, qubit_count));
}

CMatrix kraus_sum(const CMatrix& rho, std::span<const CMatrix> ops,
                  std::span<const int> targets, int qubit_count) {
    validate_targets(targets, qubit_count);
    const Embedding e = make_embedding(targets, qubit_count);
    CMatrix out(rho.rows, rho.cols);
    CMatrix tmp(rho.rows, rho.cols);
    for (const CMatrix& k : ops) {
        if (k.rows != e.sub || !k.square())
            throw ContractError("Kraus operator size does not match target count");
        tmp.data.assign(rho.data.begin(), rho.data.end());
        left_apply(tmp, k, e);
        right_apply_dagger(tmp, k, e);
        for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += tmp.data[i];
    }
    return out;
}

void conjugate_1q(CMatrix& rho, const CMatrix& g, int q, int qubit_count) {
    // One pass over 2x2 element quartets: B_sub = G A_sub G^dagger.
    const int dim = rho.rows;
    const int mask = 1 << (qubit_count - 1 - q);
    const complexd g00 = g.at(0, 0), g01 = g.at(0, 1), g10 = g.at(1, 0), g11 = g.at(1, 1);
    const complexd h00 = std::conj(g00), h01 = std::conj(g01);
    const complexd h10 = std::conj(g10), h11 = std::conj(g11);
    for (int r = 0; r < dim; ++r) {
        if (r & mask) continue;
        complexd* row0 = &rho.data[static_cast<size_t>(r) * dim];
        complexd* row1 = &rho.data[static_cast<size_t>(r | mask) * dim];
        for (int c = 0; c < dim; ++c) {
            if (c & mask) continue;
            const int c1 = c | mask;
            const complexd a00 = row0[c], a01 = row0[c1];
            const complexd a10 = row1[c], a11 = row1[c1];
            const complexd t00 = g00 * a00 + g01 * a10;
            const complexd t01 = g00 * a01 + g01 * a11;
            const complexd t10 = g10 * a00 + g11 * a10;
            const complexd t11 = g10 * a01 + g11 * a11;
            row0[c] = t00 * h00 + t01 * h01;
            row0[c1] = t00 * h10 + t01 * h11;
            row1[c] = t10 * h00 + t11 * h01;
            row1[c1] = t10 * h10 + t11 * h11;
        }
    }
}

void conjugate_diag1(CMatrix& rho, complexd g0, complexd g1, int q, int qubit_count) {
    const int dim = rho.rows;
    const int mask = 1 << (qubit_count - 1 - q);
    for (int r = 0; r < dim; ++r) {
        const complexd gr = (r & mask) ? g1 : g0;
        complexd* row = &rho.data[static_cast<size_t>(r) * dim];
        for (int c = 0; c < dim; ++c) row[c] *= gr * std::conj((c & mask) ? g1 : g0);
    }
}

void conjugate_cz(CMatrix& rho, int q1, int q2, int qubit_count) {
    const int dim = rho.rows;
    const int m1 = 1 << (qubit_count - 1 - q1);
    const int m2 = 1 << (qubit_count - 1 - q2);
    const int both = m1 | m2;
    for (int r = 0; r < dim; ++r) {
        const bool r11 = (r & both) == both;
        complexd* row = &rho.data[static_cast<size_t>(r) * dim];
        for (int c = 0; c < dim; ++c)
            if (r11 != ((c & both) == both)) row[c] = -row[c];
    }
}

void conjugate_iswap(CMatrix& rho, int q1, int q2, int qubit_count) {
    // iSWAP is a generalized permutation: |01> -> i|10>, |10> -> i|01|>, so
    // conjugation permutes indices and multiplies by phase(r) * conj(phase(c)).
    const int dim = rho.rows;
    const int m1 = 1 << (qubit_count - 1 - q1);
    const int m2 = 1 << (qubit_count - 1 - q2);
    auto mapped = [&](int idx) {
        const bool b1 = idx & m1;
        const bool b2 = idx & m2;
        return b1 == b2 ? idx : idx ^ (m1 | m2);
    };
    auto has_phase_i = [&](int idx) {
        const bool b1 = idx & m1;
        const bool b2 = idx & m2;
        return b1 != b2;
    };
    thread_local std::vector<complexd> out;
    out.assign(rho.data.size(), complexd(0.0, 0.0));
    for (int r = 0; r < dim; ++r) {
        const int rr = mapped(r);
        // phase(r') picked up when the source index r maps into r'.
        const complexd pr = has_phase_i(r) ? complexd(0.0, 1.0) : complexd(1.0, 0.0);
        const complexd* src = &rho.data[static_cast<size_t>(r) * dim];
        complexd* dst = &out[static_cast<size_t>(rr) * dim];
        for (int c = 0; c < dim; ++c) {
            const complexd pc = has_phase_i(c) ? complexd(0.0, -1.0) : complexd(1.0, 0.0);
            dst[mapped(c)] = pr * pc * src[c];
        }
    }
    rho.data.swap(out);
}

void apply_depolarizing(CMatrix& rho, int q, int qubit_count, double p) {
    const int dim = rho.rows;
    const int mask = 1 << (qubit_count - 1 - q);
    const double keep = 1.0 - 2.0 * p / 3.0;
    const double swap = 2.0 * p / 3.0;
    const double off = 1.0 - 4.0 * p / 3.0;
    for (int r = 0; r < dim; ++r) {
        complexd* row = &rho.data[static_cast<size_t>(r) * dim];
        if (r & mask) continue;  // handle bit-0 rows; partners handled jointly
        complexd* row1 = &rho.data[static_cast<size_t>(r | mask) * dim];
        for (int c = 0; c < dim; ++c) {
            if (c & mask) continue;
            const int c1 = c | mask;
            const complexd e00 = row[c];
            const complexd e11 = row1[c1];
            row[c] = keep * e00 + swap * e11;
            row1[c1] = keep * e11 + swap * e00;
            row[c1] *= off;
            row1[c] *= off;
        }
    }
}

void apply_bit_flip(CMatrix& rho, int q, int qubit_count, double p) {
    const int dim = rho.rows;
    const int mask = 1 << (qubit_count - 1 - q);
    const double keep = 1.0 - p;
    // Element (r,c) mixes with (r^mask, c^mask); visiting only bit-0 rows
    // touches each pair exactly once.
    for (int r = 0; r < dim; ++r) {
        if (r & mask) continue;
        complexd* row0 = &rho.data[static_cast<size_t>(r) * dim];
        complexd* row1 = &rho.data[static_cast<size_t>(r | mask) * dim];
        for (int c = 0; c < dim; ++c) {
            const int cf = c ^ mask;
            const complexd a = row0[c];
            const complexd b = row1[cf];
            row0[c] = keep * a + p * b;
            row1[cf] = keep * b + p * a;
        }
    }
}

void apply_amplitude_damping(CMatrix& rho, int q, int qubit_count, double p) {
    const int dim = rho.rows;
    const int mask = 1 << (qubit_count - 1 - q);
    const double damp = std::sqrt(1.0 - p);
    for (int r = 0; r < dim; ++r) {
        if (r & mask) continue;
        complexd* row0 = &rho.data[static_cast<size_t>(r) * dim];
        complexd* row1 = &rho.data[static_cast<size_t>(r | mask) * dim];
        for (int c = 0; c < dim; ++c) {
            if (c & mask) continue;
            const int c1 = c | mask;
            row0[c] += p * row1[c1];       // population gain from the damped level
            row0[c1] *= damp;
            row1[c] *= damp;
            row1[c1] *= 1.0 - p;
        }
    }
}

}  // namespace dissim::detail

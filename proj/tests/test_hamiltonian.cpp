#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dissim/hamiltonian.hpp"
#include "testutil.hpp"

using namespace dissim;
using testutil::Rng;

TEST_CASE("build_spin_model term bookkeeping") {
    CHECK(build_spin_model({3, 0, 0, 0, 0, 0, 0}).terms.empty());

    const PauliHamiltonian h = build_spin_model({3, 1.0, 0, 0, 0, 0, 0.3});
    REQUIRE(h.terms.size() == 5);
    CHECK(h.terms[0].ops == "XXI");
    CHECK(h.terms[1].ops == "IXX");
    CHECK(h.terms[2].ops == "ZII");
    CHECK(h.terms[3].ops == "IZI");
    CHECK(h.terms[4].ops == "IIZ");

    const PauliHamiltonian zz = build_spin_model({2, 0, 0, 1.0, 0, 0, 0});
    REQUIRE(zz.terms.size() == 1);
    CHECK(zz.terms[0].ops == "ZZ");
    CHECK(zz.terms[0].coeff == 1.0);
}

TEST_CASE("benchmark model term counts") {
    const BenchmarkModels m3 = benchmark_models(3);
    CHECK(m3.h1.terms.size() == 5);  // 2 XX + 3 Z
    CHECK(m3.h3.terms.size() == 6);  // 2 XX + 2 YY + 2 ZZ

    // H2(2) dense: diag(1,-1,-1,1) + 0.3 (X I + I X).
    const CMatrix d = to_dense(benchmark_models(2).h2);
    const double diag[4] = {1.0, -1.0, -1.0, 1.0};
    for (int i = 0; i < 4; ++i) CHECK(d.at(i, i).real() == doctest::Approx(diag[i]));
    CHECK(d.at(0, 1).real() == doctest::Approx(0.3));  // I X flips qubit 1
    CHECK(d.at(0, 2).real() == doctest::Approx(0.3));  // X I flips qubit 0
    CHECK(d.at(0, 3).real() == doctest::Approx(0.0));
}

TEST_CASE("to_dense basic matrices") {
    const CMatrix z = to_dense(PauliHamiltonian{1, {{1.0, "Z"}}});
    CHECK(z.at(0, 0) == complexd(1.0, 0.0));
    CHECK(z.at(1, 1) == complexd(-1.0, 0.0));

    const CMatrix xx = to_dense(PauliHamiltonian{2, {{0.5, "XX"}}});
    CMatrix px(2, 2);
    px.at(0, 1) = 1.0;
    px.at(1, 0) = 1.0;
    CHECK(max_abs_diff(xx, complexd(0.5, 0.0) * tensor(px, px)) < 1e-15);

    const CMatrix y = to_dense(PauliHamiltonian{1, {{1.0, "Y"}}});
    CHECK(y.at(0, 1) == complexd(0.0, -1.0));
    CHECK(y.at(1, 0) == complexd(0.0, 1.0));
}

TEST_CASE("to_dense H1(3) diagonal entry at |000>") {
    const CMatrix d = to_dense(benchmark_models(3).h1);
    CHECK(d.at(0, 0).real() == doctest::Approx(0.9));
    CHECK(is_hermitian(d, 1e-12));
}

TEST_CASE("to_dense output is Hermitian on random models") {
    Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        SpinModelSpec spec;
        spec.n = rng.integer(2, 4);
        spec.Jx = rng.uniform(-1, 1);
        spec.Jy = rng.uniform(-1, 1);
        spec.Jz = rng.uniform(-1, 1);
        spec.hx = rng.uniform(-1, 1);
        spec.hy = rng.uniform(-1, 1);
        spec.hz = rng.uniform(-1, 1);
        CHECK(is_hermitian(to_dense(build_spin_model(spec)), 1e-12));
    }
}

TEST_CASE("negating all couplings negates the dense matrix") {
    const SpinModelSpec spec{3, 0.7, -0.2, 0.1, 0.0, 0.4, -0.9};
    const SpinModelSpec neg{3, -0.7, 0.2, -0.1, 0.0, -0.4, 0.9};
    const CMatrix a = to_dense(build_spin_model(spec));
    const CMatrix b = to_dense(build_spin_model(neg));
    CHECK(max_abs_diff(a, complexd(-1.0, 0.0) * b) < 1e-15);
}

TEST_CASE("ground_energy of single-qubit Z") {
    const GroundState g = ground_energy(PauliHamiltonian{1, {{1.0, "Z"}}});
    CHECK(g.energy == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(g.state.amplitudes[1]) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ground_energy of H2(2) matches the symmetric-sector analytic root") {
    // In the symmetric sector {|00>, (|01>+|10>)/sqrt2, |11>} the characteristic
    // polynomial factors as (1-E)(E^2 - 1.36); the antisymmetric state sits at
    // -1, so the ground energy is -sqrt(1.36).
    const GroundState g = ground_energy(benchmark_models(2).h2);
    CHECK(g.energy == doctest::Approx(-std::sqrt(1.36)).epsilon(1e-10));
}

TEST_CASE("ground_energy of H1(5) matches the shifted power-iteration oracle") {
    const PauliHamiltonian h1 = benchmark_models(5).h1;
    const double oracle = testutil::power_iteration_ground_energy(to_dense(h1));
    CHECK(ground_energy(h1).energy == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("variational bound holds for random density matrices") {
    Rng rng(59);
    const PauliHamiltonian h1 = benchmark_models(3).h1;
    const CMatrix dense = to_dense(h1);
    const double e0 = ground_energy(h1).energy;
    for (int trial = 0; trial < 100; ++trial) {
        const DensityMatrix rho{RegisterShape::qubits(3), testutil::random_density(rng, 8)};
        CHECK(expectation_dense(dense, rho) >= e0 - 1e-9);
    }
}

TEST_CASE("pauli text round trip and errors") {
    const PauliHamiltonian h = benchmark_models(3).h1;
    const PauliHamiltonian back = parse_pauli_text(format_pauli_text(h));
    REQUIRE(back.terms.size() == h.terms.size());
    for (size_t i = 0; i < h.terms.size(); ++i) {
        CHECK(back.terms[i].ops == h.terms[i].ops);
        CHECK(back.terms[i].coeff == h.terms[i].coeff);
    }

    const PauliHamiltonian parsed = parse_pauli_text("1.0 XXI\n# comment\n\n-0.5 IZZ\n");
    CHECK(parsed.qubit_count == 3);
    CHECK(parsed.terms.size() == 2);

    CHECK_THROWS_AS(parse_pauli_text("1.0 XQ"), ContractError);
    CHECK_THROWS_AS(parse_pauli_text("1.0 XX\n2.0 XXX"), ContractError);
    CHECK_THROWS_AS(parse_pauli_text(""), ContractError);
    CHECK_THROWS_AS(parse_pauli_text("1.0 XX extra"), ContractError);
}

TEST_CASE("to_dense size cap") {
    PauliHamiltonian h{13, {{1.0, std::string(13, 'Z')}}};
    CHECK_THROWS_AS(to_dense(h), ContractError);
}

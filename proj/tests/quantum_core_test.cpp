#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "popper/quantum.hpp"
#include "popper/sampling.hpp"
#include "popper/spin1.hpp"
#include "support.hpp"

using namespace popper;
using testsupport::random_hermitian;
using testsupport::random_state;
using testsupport::random_unit_vector;
using testsupport::to_cmat;
using testsupport::to_cvec;

namespace {

PureState<double> basis3(Index which) {
    ComplexVector<double> v = ComplexVector<double>::Zero(3);
    v[which] = 1.0;
    return make_state<double>({3}, {spin1_labels<double>()}, std::move(v));
}

// Two-spin test state alpha |+1,-1> + beta |0,0> + alpha |-1,+1> in the
// z product basis (descending labels).
PureState<double> entangled_pair(double alpha, double beta) {
    ComplexVector<double> amps = ComplexVector<double>::Zero(9);
    amps[0 * 3 + 2] = alpha;
    amps[1 * 3 + 1] = beta;
    amps[2 * 3 + 0] = alpha;
    return make_state<double>({3, 3}, {spin1_labels<double>(), spin1_labels<double>()},
                              std::move(amps));
}

}  // namespace

TEST_CASE("make_state validates shape, finiteness and normalization") {
    ComplexVector<double> v = ComplexVector<double>::Zero(3);
    v[0] = 1.0;
    CHECK_NOTHROW(make_state<double>({3}, v));
    CHECK_THROWS_AS(make_state<double>({4}, v), std::invalid_argument);
    ComplexVector<double> unnormalized = v * 2.0;
    CHECK_THROWS_AS(make_state<double>({3}, unnormalized), std::invalid_argument);
    ComplexVector<double> bad = v;
    bad[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(make_state<double>({3}, bad), std::invalid_argument);
}

TEST_CASE("tensor product places basis kets at the row-major flat index") {
    const auto a = basis3(0);
    const auto b = basis3(2);
    const auto ab = tensor_product(a, b);
    REQUIRE(ab.dimension() == 9);
    CHECK(ab.dims == std::vector<Index>{3, 3});
    CHECK(std::abs(ab.amplitudes[2] - Complex<double>(1.0, 0.0)) < kAlgebraTol);
    CHECK(ab.amplitudes.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));

    const auto mid = tensor_product(basis3(1), basis3(1));
    CHECK(std::abs(mid.amplitudes[4] - Complex<double>(1.0, 0.0)) < kAlgebraTol);
}

TEST_CASE("tensor product of random unit states is a unit state") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_state({3}, rng);
        const auto b = random_state({2}, rng);
        const auto ab = tensor_product(a, b);
        const double direct = to_cvec(ab.amplitudes).size() ? oracle::norm2(to_cvec(ab.amplitudes)) : 0.0;
        CHECK(direct == doctest::Approx(1.0).epsilon(1e-12));
        // amplitude at (i, j) is a[i] * b[j]
        for (Index i = 0; i < 3; ++i)
            for (Index j = 0; j < 2; ++j)
                CHECK(std::abs(ab.amplitudes[i * 2 + j] - a.amplitudes[i] * b.amplitudes[j]) <
                      1e-12);
    }
}

TEST_CASE("eigenbasis of diag(1, 0, -1) is the standard basis, descending") {
    ComplexMatrix<double> m = ComplexMatrix<double>::Zero(3, 3);
    m(0, 0) = 1.0;
    m(2, 2) = -1.0;
    const auto basis = eigenbasis(make_observable<double>(std::move(m)));
    REQUIRE(basis.size() == 3);
    CHECK(basis[0].eigenvalue == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(basis[1].eigenvalue == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(basis[2].eigenvalue == doctest::Approx(-1.0).epsilon(1e-14));
    for (Index k = 0; k < 3; ++k) {
        for (Index i = 0; i < 3; ++i) {
            const double expected = (i == k) ? 1.0 : 0.0;
            CHECK(std::abs(basis[static_cast<std::size_t>(k)].eigenvector[i] - expected) < 1e-12);
        }
    }
}

TEST_CASE("eigenbasis matches the Jacobi oracle and reconstructs the matrix") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const Index dim = 2 + static_cast<Index>(rng() % 3);  // 2..4
        const auto obs = random_hermitian(dim, rng);
        const auto basis = eigenbasis(obs);

        const auto reference = oracle::diagonalize_hermitian(to_cmat(obs.matrix));
        REQUIRE(reference.values.size() == static_cast<std::size_t>(dim));
        for (Index k = 0; k < dim; ++k)
            CHECK(basis[static_cast<std::size_t>(k)].eigenvalue ==
                  doctest::Approx(reference.values[static_cast<std::size_t>(k)]).epsilon(1e-9));

        // Orthonormality within 1e-10 and the phase convention.
        for (Index a = 0; a < dim; ++a) {
            const auto& va = basis[static_cast<std::size_t>(a)].eigenvector;
            for (Index b = 0; b < dim; ++b) {
                const auto& vb = basis[static_cast<std::size_t>(b)].eigenvector;
                const double expected = (a == b) ? 1.0 : 0.0;
                CHECK(std::abs(std::abs(va.dot(vb)) - expected) < kOrthoTol);
            }
            Index pivot = 0;
            for (Index i = 1; i < dim; ++i)
                if (std::abs(va[i]) > std::abs(va[pivot])) pivot = i;
            CHECK(va[pivot].imag() == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(va[pivot].real() > 0.0);
        }

        // Reconstruction: sum of eigenvalue * |v><v| within 1e-10 entrywise.
        ComplexMatrix<double> rebuilt = ComplexMatrix<double>::Zero(dim, dim);
        for (const auto& pair : basis)
            rebuilt += pair.eigenvalue * (pair.eigenvector * pair.eigenvector.adjoint());
        CHECK((rebuilt - obs.matrix).cwiseAbs().maxCoeff() < kOrthoTol);
    }
}

TEST_CASE("subsystem probabilities reproduce the entangled-pair detector rates") {
    const auto psi = entangled_pair(std::sqrt(0.05), std::sqrt(0.9));
    const auto z_dist = subsystem_probabilities(psi, 1, spin1_observable<double>(SpinAxis::z));
    CHECK(z_dist.prob_of(1.0) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(z_dist.prob_of(0.0) == doctest::Approx(0.90).epsilon(1e-12));
    CHECK(z_dist.prob_of(-1.0) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(z_dist.labels == std::vector<std::string>{"+1", "0", "-1"});

    // x measurement on the first spin: branch weights 0.475 / 0.05 / 0.475.
    const auto x_dist = subsystem_probabilities(psi, 0, spin1_observable<double>(SpinAxis::x));
    CHECK(x_dist.prob_of(1.0) == doctest::Approx(0.475).epsilon(1e-12));
    CHECK(x_dist.prob_of(0.0) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(x_dist.prob_of(-1.0) == doctest::Approx(0.475).epsilon(1e-12));
}

TEST_CASE("measuring one factor of a product state ignores the other factor") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_state({3}, rng);
        const auto b = random_state({3}, rng);
        const auto obs = random_hermitian(3, rng);
        const auto joint = subsystem_probabilities(tensor_product(a, b), 1, obs);
        const auto alone = subsystem_probabilities(b, 0, obs);
        REQUIRE(joint.size() == alone.size());
        for (Index i = 0; i < joint.size(); ++i)
            CHECK(joint.probs[i] == doctest::Approx(alone.probs[i]).epsilon(1e-12));
    }
}

TEST_CASE("probabilities agree with brute-force product-basis enumeration") {
    std::mt19937_64 rng(31);
    const std::vector<std::vector<Index>> shapes = {{2, 2}, {2, 3}, {3, 3}, {2, 4}, {4, 2}, {9}};
    for (const auto& dims : shapes) {
        for (int trial = 0; trial < 8; ++trial) {
            const auto psi = random_state(dims, rng);
            const Index sub = static_cast<Index>(rng() % dims.size());
            const auto obs = random_hermitian(dims[static_cast<std::size_t>(sub)], rng);
            const auto dist = subsystem_probabilities(psi, sub, obs);
            CHECK(dist.probs.sum() == doctest::Approx(1.0).epsilon(1e-9));

            const auto brute =
                oracle::born_probabilities(to_cvec(psi.amplitudes), testsupport::to_size_dims(dims),
                                           static_cast<std::size_t>(sub), to_cmat(obs.matrix));
            // Distinct eigenvalues almost surely; match entries one by one.
            REQUIRE(brute.eigenvalues.size() == static_cast<std::size_t>(dist.size()));
            for (Index i = 0; i < dist.size(); ++i) {
                CHECK(dist.outcomes[i] ==
                      doctest::Approx(brute.eigenvalues[static_cast<std::size_t>(i)]).epsilon(1e-9));
                CHECK(dist.probs[i] ==
                      doctest::Approx(brute.probabilities[static_cast<std::size_t>(i)]).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("subsystem index out of range is rejected") {
    const auto psi = entangled_pair(std::sqrt(0.05), std::sqrt(0.9));
    CHECK_THROWS_AS(subsystem_probabilities(psi, 2, spin1_observable<double>(SpinAxis::z)),
                    std::invalid_argument);
    CHECK_THROWS_AS(subsystem_probabilities(psi, -1, spin1_observable<double>(SpinAxis::z)),
                    std::invalid_argument);
}

TEST_CASE("post-selecting the central x outcome leaves the antisymmetric partner state") {
    const auto psi = entangled_pair(std::sqrt(0.05), std::sqrt(0.9));
    const auto sel = post_select(psi, 0, spin1_observable<double>(SpinAxis::x), 0.0);
    CHECK(sel.probability == doctest::Approx(0.05).epsilon(1e-12));

    // Expected conditional: |x;0> on the first spin, (|+1> - |-1>)/sqrt 2 on
    // the second, compared up to a global phase.
    const auto x0 = eigenbasis(spin1_observable<double>(SpinAxis::x))[1].eigenvector;
    ComplexVector<double> partner(3);
    partner << 1.0 / std::sqrt(2.0), 0.0, -1.0 / std::sqrt(2.0);
    ComplexVector<double> expected(9);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j) expected[i * 3 + j] = x0[i] * partner[j];
    CHECK(approx_equal_up_to_phase(sel.conditional.amplitudes, expected, 1e-12));

    // Conditional norm is exactly 1 within 1e-12.
    CHECK(sel.conditional.amplitudes.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero-amplitude branch raises a null-selection error") {
    const auto psi = entangled_pair(0.0, 1.0);
    CHECK_THROWS_AS(post_select(psi, 0, spin1_observable<double>(SpinAxis::x), 0.0),
                    NullSelectionError);
}

TEST_CASE("eigenvalue outside the spectrum is rejected") {
    const auto psi = entangled_pair(std::sqrt(0.05), std::sqrt(0.9));
    CHECK_THROWS_AS(post_select(psi, 0, spin1_observable<double>(SpinAxis::x), 0.5),
                    std::invalid_argument);
}

TEST_CASE("post-selection is consistent, idempotent, and matches brute force") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 25; ++trial) {
        const auto psi = random_state({3, 3}, rng);
        const Index sub = static_cast<Index>(rng() % 2);
        const auto obs = random_hermitian(3, rng);
        const auto dist = subsystem_probabilities(psi, sub, obs);
        const Index pick = static_cast<Index>(rng() % 3);
        const double eigenvalue = dist.outcomes[pick];
        if (dist.probs[pick] < 1e-12) continue;

        const auto sel = post_select(psi, sub, obs, eigenvalue);
        // Probability consistency with the Born distribution within 1e-12.
        CHECK(sel.probability == doctest::Approx(dist.probs[pick]).epsilon(1e-12));

        // Re-measuring yields the selected eigenvalue with probability 1.
        const auto redo = subsystem_probabilities(sel.conditional, sub, obs);
        CHECK(redo.prob_of(eigenvalue) == doctest::Approx(1.0).epsilon(1e-12));

        const auto brute = oracle::project_outcome(to_cvec(psi.amplitudes), {3, 3},
                                                   static_cast<std::size_t>(sub),
                                                   to_cmat(obs.matrix), eigenvalue);
        CHECK(sel.probability == doctest::Approx(brute.probability).epsilon(1e-10));
        ComplexVector<double> brute_state(9);
        for (Index i = 0; i < 9; ++i) brute_state[i] = brute.state[static_cast<std::size_t>(i)];
        CHECK(approx_equal_up_to_phase(sel.conditional.amplitudes, brute_state, 1e-10));
    }
}

TEST_CASE("distribution factory clamps rounding noise and rejects real negatives") {
    RealVector<double> outcomes(2);
    outcomes << 1.0, -1.0;
    RealVector<double> probs(2);
    probs << 1.0, -5e-13;
    const auto dist = make_distribution<double>({"a", "b"}, outcomes, probs);
    CHECK(dist.probs[1] == 0.0);

    RealVector<double> negative(2);
    negative << 1.0, -1e-6;
    CHECK_THROWS_AS(make_distribution<double>({"a", "b"}, outcomes, negative),
                    std::invalid_argument);

    RealVector<double> short_sum(2);
    short_sum << 0.6, 0.3;
    CHECK_THROWS_AS(make_distribution<double>({"a", "b"}, outcomes, short_sum),
                    std::invalid_argument);
}

TEST_CASE("sample_counts: degenerate cases and determinism") {
    RealVector<double> outcomes(3);
    outcomes << 1.0, 0.0, -1.0;
    RealVector<double> point(3);
    point << 1.0, 0.0, 0.0;
    const auto dist = make_distribution<double>({"a", "b", "c"}, outcomes, point);

    const auto zero = sample_counts(dist, 0, 99);
    CHECK(zero.counts == std::vector<std::int64_t>{0, 0, 0});

    const auto all = sample_counts(dist, 1000, 99);
    CHECK(all.counts == std::vector<std::int64_t>{1000, 0, 0});

    RealVector<double> skewed(3);
    skewed << 0.9, 0.05, 0.05;
    const auto sk = make_distribution<double>({"a", "b", "c"}, outcomes, skewed);
    const auto first = sample_counts(sk, 5000, 1234);
    const auto again = sample_counts(sk, 5000, 1234);
    CHECK(first.counts == again.counts);
    CHECK(first.total() == 5000);
    CHECK(sample_counts(sk, 5000, 1235).counts != first.counts);

    CHECK_THROWS_AS(sample_counts(sk, -1, 0), std::invalid_argument);
}

TEST_CASE("sample_counts frequencies sit within three binomial sigmas") {
    RealVector<double> outcomes(3);
    outcomes << 1.0, 0.0, -1.0;
    RealVector<double> probs(3);
    probs << 0.9, 0.05, 0.05;
    const auto dist = make_distribution<double>({"a", "b", "c"}, outcomes, probs);
    const std::int64_t n = 100000;
    const auto table = sample_counts(dist, n, 2024);
    for (Index i = 0; i < 3; ++i) {
        const double freq = static_cast<double>(table.counts[static_cast<std::size_t>(i)]) /
                            static_cast<double>(n);
        const double sigma = oracle::binomial_sigma(probs[i], static_cast<double>(n));
        CHECK(std::abs(freq - probs[i]) <= 3.0 * sigma);
    }
}

#include "nlcorr/error.hpp"
#include "nlcorr/qstate.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

using namespace nlcorr;
using nlcorr::testing::m2;
using nlcorr::testing::matrices_near;

namespace {

constexpr cplx I{0.0, 1.0};
constexpr std::array<std::size_t, 2> kPair{2, 2};

// exp(A) by a truncated power series with scaling and squaring; independent
// of the spectral route.
ComplexMatrix series_exp(const ComplexMatrix &a) {
    int squarings = 0;
    double n = a.frobenius_norm();
    while (n > 0.5) {
        n /= 2.0;
        ++squarings;
    }
    const ComplexMatrix scaled = a * cplx(std::ldexp(1.0, -squarings));
    ComplexMatrix term = ComplexMatrix::identity(a.dim());
    ComplexMatrix sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * scaled * cplx(1.0 / k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) {
        sum = sum * sum;
    }
    return sum;
}

ComplexMatrix random_density(std::size_t dim, std::mt19937_64 &rng) {
    // Mixture of three random pure states.
    std::uniform_real_distribution<double> u(0.1, 1.0);
    ComplexMatrix rho(dim);
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double w = u(rng);
        const auto psi = random_state(dim, rng);
        rho += ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()) * cplx(w);
        total += w;
    }
    return rho * cplx(1.0 / total);
}

} // namespace

TEST(Kron, IdentityFactors) {
    EXPECT_TRUE(matrices_near(kron(pauli_z(), ComplexMatrix::identity(2)),
                              ComplexMatrix::diagonal(std::vector<double>{1, 1, -1, -1}), 0.0));
    EXPECT_TRUE(matrices_near(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                              ComplexMatrix::identity(4), 0.0));
}

TEST(Kron, SingletXXExpectation) {
    // Hand expansion: sx(x)sx swaps |01> and |10>, so <s|sx sx|s> = -1.
    const double v = expectation(singlet_state(), kron(pauli_x(), pauli_x()));
    EXPECT_NEAR(v, -1.0, 1e-15);
}

TEST(Kron, Associativity) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_hermitian(2, rng);
        const auto b = random_hermitian(3, rng);
        const auto c = random_hermitian(2, rng);
        EXPECT_TRUE(matrices_near(kron(kron(a, b), c), kron(a, kron(b, c)), 1e-12));
    }
}

TEST(Kron, VectorMatchesOuterProducts) {
    std::mt19937_64 rng(5);
    const auto a = random_state(2, rng);
    const auto b = random_state(3, rng);
    const auto ab = kron(a.amplitudes(), b.amplitudes());
    ASSERT_EQ(ab.size(), 6u);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_EQ(ab[i * 3 + j], a[i] * b[j]);
        }
    }
}

TEST(PartialTrace, SingletIsMaximallyMixed) {
    const auto rho = DensityMatrix::pure(singlet_state());
    EXPECT_TRUE(matrices_near(partial_trace(rho, {2, 2}, 1).matrix(),
                              ComplexMatrix::identity(2) * cplx(0.5), 1e-15));
    EXPECT_TRUE(matrices_near(partial_trace(rho, {2, 2}, 2).matrix(),
                              ComplexMatrix::identity(2) * cplx(0.5), 1e-15));
}

TEST(PartialTrace, KeepsFactorsOfProducts) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_density(2, rng);
        const auto b = random_density(3, rng);
        const DensityMatrix ab(kron(a, b));
        EXPECT_TRUE(matrices_near(partial_trace(ab, {2, 3}, 1).matrix(), a, 1e-12));
        EXPECT_TRUE(matrices_near(partial_trace(ab, {2, 3}, 2).matrix(), b, 1e-12));
    }
}

TEST(PartialTrace, ExampleStateByIndexContraction) {
    const auto psi = example_pair_state();
    const double c = std::cos(std::numbers::pi / 8);
    const double s = std::sin(std::numbers::pi / 8);
    const Amplitudes one{c, s};
    const Amplitudes two{-s, c};
    const ComplexMatrix expected = ComplexMatrix::outer(one, one) * cplx(1.0 / 9.0) +
                                   ComplexMatrix::outer(two, two) * cplx(8.0 / 9.0);

    // rho1(k,l) = sum_m psi(k,m) conj(psi(l,m)), written out by hand.
    ComplexMatrix contracted(2);
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t l = 0; l < 2; ++l) {
            for (std::size_t m = 0; m < 2; ++m) {
                contracted(k, l) += psi[2 * k + m] * std::conj(psi[2 * l + m]);
            }
        }
    }
    EXPECT_TRUE(matrices_near(contracted, expected, 1e-15));
    const auto rho1 = partial_trace(DensityMatrix::pure(psi), {2, 2}, 1);
    EXPECT_TRUE(matrices_near(rho1.matrix(), expected, 1e-12));
    EXPECT_TRUE(matrices_near(partial_trace(psi.amplitudes(), kPair, 0), expected, 1e-12));
}

TEST(PartialTrace, PreservesTrace) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix rho(random_density(6, rng));
        EXPECT_NEAR(partial_trace(rho, {2, 3}, 1).matrix().trace().real(), 1.0, 1e-12);
        EXPECT_NEAR(partial_trace(rho, {2, 3}, 2).matrix().trace().real(), 1.0, 1e-12);
    }
}

TEST(PartialTrace, DimensionMismatch) {
    const DensityMatrix rho(ComplexMatrix::identity(4) * cplx(0.25));
    EXPECT_THROW((void)partial_trace(rho, {2, 3}, 1), DimensionError);
    EXPECT_THROW((void)partial_trace(rho, {2, 2}, 3), DimensionError);
}

TEST(HermExp, ClosedForms) {
    EXPECT_TRUE(matrices_near(herm_exp(pauli_z(), -I * std::numbers::pi),
                              ComplexMatrix::identity(2) * cplx(-1.0), 1e-12));
    std::mt19937_64 rng(1);
    EXPECT_TRUE(matrices_near(herm_exp(random_hermitian(3, rng), 0.0), ComplexMatrix::identity(3), 1e-12));
    // cos(pi/2) I - i sin(pi/2) sx
    EXPECT_TRUE(matrices_near(herm_exp(pauli_x(), -I * (std::numbers::pi / 2)), pauli_x() * (-I), 1e-12));
}

TEST(HermExp, MatchesPowerSeries) {
    std::mt19937_64 rng(21);
    for (std::size_t dim : {2u, 3u, 4u, 8u}) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto h = random_hermitian(dim, rng);
            std::uniform_real_distribution<double> t(-3.0, 3.0);
            const double tau = t(rng);
            EXPECT_TRUE(matrices_near(herm_exp(h, -I * tau), series_exp(h * (-I * tau)), 1e-10));
            // Real scale: entries grow like exp(|tau| |h|), so the tolerance is relative.
            const auto growth = series_exp(h * cplx(tau));
            EXPECT_TRUE(matrices_near(herm_exp(h, tau), growth, 1e-12 * growth.frobenius_norm()));
        }
    }
}

TEST(HermExp, UnitaryAndGroupLaw) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = random_hermitian(4, rng);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        const double t = u(rng);
        const double s = u(rng);
        const auto ut = herm_exp(h, -I * t);
        EXPECT_TRUE(matrices_near(ut * ut.adjoint(), ComplexMatrix::identity(4), 1e-10));
        EXPECT_TRUE(matrices_near(ut * herm_exp(h, -I * s), herm_exp(h, -I * (t + s)), 1e-10));
    }
}

TEST(HermExp, RejectsNonHermitian) {
    EXPECT_THROW((void)herm_exp(m2(0, 1, 0, 0), -I), DomainError);
}

TEST(Eigh, ReconstructsAndOrthonormal) {
    std::mt19937_64 rng(4);
    for (std::size_t dim : {1u, 2u, 4u, 7u, 16u, 32u}) {
        const auto h = random_hermitian(dim, rng);
        const auto spec = eigh(h);
        ASSERT_EQ(spec.values.size(), dim);
        EXPECT_TRUE(std::is_sorted(spec.values.begin(), spec.values.end()));
        const auto &v = spec.vectors;
        EXPECT_TRUE(matrices_near(v.adjoint() * v, ComplexMatrix::identity(dim), 1e-12));
        const ComplexMatrix rebuilt = v * ComplexMatrix::diagonal(spec.values) * v.adjoint();
        EXPECT_TRUE(matrices_near(rebuilt, h, 1e-11)) << "dim " << dim;
    }
}

TEST(Eigh, DegenerateSpectrum) {
    const auto spec = eigh(kron(pauli_z(), ComplexMatrix::identity(2)));
    EXPECT_NEAR(spec.values[0], -1.0, 1e-15);
    EXPECT_NEAR(spec.values[1], -1.0, 1e-15);
    EXPECT_NEAR(spec.values[2], 1.0, 1e-15);
    EXPECT_NEAR(spec.values[3], 1.0, 1e-15);
}

TEST(Expectation, BasicValues) {
    const StateVector up{1.0, 0.0};
    EXPECT_DOUBLE_EQ(expectation(up, pauli_z()), 1.0);
    EXPECT_NEAR(expectation(singlet_state(), kron(pauli_z(), pauli_z())), -1.0, 1e-15);
}

TEST(Expectation, ExampleStateSpinZ) {
    const auto psi = example_pair_state();
    const auto id = ComplexMatrix::identity(2);
    // <1|sz|1> = cos(pi/4), <2|sz|2> = -cos(pi/4): (1/9 - 8/9)/sqrt2 = -7 sqrt2/18.
    const double expected = -7.0 * std::numbers::sqrt2 / 18.0;
    EXPECT_NEAR(expectation(psi, kron(pauli_z(), id)), expected, 1e-14);
    EXPECT_NEAR(expectation(psi, kron(id, pauli_z())), -expected, 1e-14);
    EXPECT_NEAR(expected, -0.54997, 1e-5);
}

TEST(Expectation, LinearInObservable) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto psi = random_state(4, rng);
        const auto a = random_hermitian(4, rng);
        const auto b = random_hermitian(4, rng);
        const double alpha = 0.7;
        const double beta = -1.9;
        EXPECT_NEAR(expectation(psi, a * cplx(alpha) + b * cplx(beta)),
                    alpha * expectation(psi, a) + beta * expectation(psi, b), 1e-12);
    }
}

TEST(Expectation, Errors) {
    const StateVector up{1.0, 0.0};
    EXPECT_THROW((void)expectation(up, ComplexMatrix::identity(4)), DimensionError);
    // diag(i, 0) has mean i in |up>.
    EXPECT_THROW((void)expectation(up, m2(I, 0, 0, 0)), NumericalError);
}

TEST(Projector, AxesAndIdentities) {
    const auto [zp, zm] = projector({0, 0, 1});
    EXPECT_TRUE(matrices_near(zp, m2(1, 0, 0, 0), 1e-15));
    EXPECT_TRUE(matrices_near(zm, m2(0, 0, 0, 1), 1e-15));
    const auto [xp, xm] = projector({1, 0, 0});
    EXPECT_TRUE(matrices_near(xp, m2(0.5, 0.5, 0.5, 0.5), 1e-15));
    EXPECT_TRUE(matrices_near(xm, m2(0.5, -0.5, -0.5, 0.5), 1e-15));

    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const auto [p, m] = projector(random_direction(rng));
        EXPECT_TRUE(matrices_near(p * p, p, 1e-12));
        EXPECT_TRUE(matrices_near(m * m, m, 1e-12));
        EXPECT_TRUE(matrices_near(p + m, ComplexMatrix::identity(2), 1e-12));
        EXPECT_TRUE(matrices_near(p * m, ComplexMatrix(2), 1e-12));
    }
}

TEST(Projector, RejectsNonUnit) {
    EXPECT_THROW((void)projector({1.0, 1.0, 0.0}), DomainError);
    EXPECT_THROW((void)projector({0.0, 0.0, 1.0 + 1e-8}), DomainError);
}

TEST(States, Validation) {
    EXPECT_THROW(StateVector({1.0, 1.0}), DomainError);
    EXPECT_NO_THROW(StateVector({1.0, 1e-5}));  // norm 1 + 5e-11
    EXPECT_THROW(StateVector::normalized({0.0, 0.0}), DomainError);
    EXPECT_NEAR(StateVector::normalized({3.0, 4.0}).norm(), 1.0, 1e-15);
    EXPECT_THROW(DensityMatrix(m2(0.5, 0.1, 0.2, 0.5)), DomainError);  // not Hermitian
    EXPECT_THROW(DensityMatrix(m2(0.6, 0, 0, 0.5)), DomainError);      // trace
    EXPECT_THROW(DensityMatrix(m2(1.5, 0, 0, -0.5)), DomainError);     // negative eigenvalue
    EXPECT_THROW(DensityMatrix::from_bloch({1.0, 1.0, 0.0}), DomainError);
}

TEST(States, BlochRoundTrip) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 d = random_direction(rng);
        const Vec3 r{0.8 * d[0], 0.8 * d[1], 0.8 * d[2]};
        const Vec3 back = bloch_vector(DensityMatrix::from_bloch(r).matrix());
        for (int k = 0; k < 3; ++k) {
            EXPECT_NEAR(back[k], r[k], 1e-15);
        }
    }
}

TEST(States, RandomStateNormalized) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        EXPECT_NEAR(random_state(5, rng).norm(), 1.0, 1e-14);
    }
}

TEST(Embed, PlacesFactor) {
    const std::array<std::size_t, 3> dims{2, 3, 2};
    const auto id2 = ComplexMatrix::identity(2);
    const auto id3 = ComplexMatrix::identity(3);
    EXPECT_TRUE(matrices_near(embed(pauli_x(), dims, 2), kron(kron(id2, id3), pauli_x()), 0.0));
    EXPECT_TRUE(matrices_near(embed(pauli_y(), dims, 0), kron(kron(pauli_y(), id3), id2), 0.0));
}

#include "nlcorr/beams.hpp"
#include "nlcorr/dynamics.hpp"
#include "nlcorr/error.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

using namespace nlcorr;
using nlcorr::testing::matrices_near;

namespace {

BeamSpec example_beam(const std::vector<double> &t0, double flight1, double flight2, double a = 8.0,
                      double b = 0.5, StateVector psi = example_pair_state()) {
    return BeamSpec::from_times_of_flight(t0, flight1, flight2, std::move(psi),
                                          HamiltonianFunction::quadratic_average(a, pauli_z()),
                                          HamiltonianFunction::quadratic_average(b, pauli_z()));
}

} // namespace

TEST(FrequencyOperator, MatchesExplicitThreePairOperator) {
    std::mt19937_64 rng(20);
    const std::array<std::size_t, 3> dims{4, 4, 4};
    for (int trial = 0; trial < 5; ++trial) {
        const auto obs = random_hermitian(4, rng);
        const std::vector<StateVector> pairs{random_state(4, rng), random_state(4, rng), random_state(4, rng)};
        ComplexMatrix f(64);
        for (std::size_t k = 0; k < 3; ++k) {
            f += embed(obs, dims, k);
        }
        f *= 1.0 / 3.0;
        const auto joint = kron(kron(pairs[0].amplitudes(), pairs[1].amplitudes()), pairs[2].amplitudes());
        EXPECT_NEAR(frequency_average(obs, pairs), expectation(std::span<const cplx>(joint), f), 1e-12);
    }
}

TEST(FrequencyOperator, IdenticalPairsGiveSingleAverage) {
    std::mt19937_64 rng(21);
    const auto obs = random_hermitian(4, rng);
    const auto psi = random_state(4, rng);
    for (std::size_t n : {1u, 7u, 100u}) {
        EXPECT_NEAR(frequency_average(obs, std::vector<StateVector>(n, psi)), expectation(psi, obs), 1e-12);
    }
    EXPECT_THROW((void)frequency_average(obs, {}), DomainError);
}

TEST(FrequencyOperator, SpinOutcomeFrequency) {
    // Pairs in sigma_z (x) I eigenstates: the frequency is the signed fraction.
    const StateVector up_up{1.0, 0.0, 0.0, 0.0};
    const StateVector down_up{0.0, 0.0, 1.0, 0.0};
    const auto obs = kron(pauli_z(), ComplexMatrix::identity(2));
    EXPECT_NEAR(frequency_average(obs, {up_up, up_up, up_up, down_up}), 0.5, 1e-15);
    EXPECT_NEAR(frequency_average(obs, {down_up, down_up}), -1.0, 1e-15);
}

TEST(FrequencyOperator, BernoulliVarianceShrinksAsOneOverN) {
    // <F_N^2> - <F_N>^2 = Var(obs) / N on identical pairs.
    std::mt19937_64 rng(22);
    const auto psi = random_state(4, rng);
    const auto obs = kron(spin_along(random_direction(rng)), ComplexMatrix::identity(2));
    const double mean = expectation(psi, obs);
    const double var = 1.0 - mean * mean;
    for (std::size_t n : {1u, 2u, 3u}) {
        std::vector<std::size_t> dims(n, 4);
        ComplexMatrix f(static_cast<std::size_t>(std::pow(4.0, static_cast<double>(n))));
        Amplitudes joint = psi.amplitudes();
        for (std::size_t k = 0; k < n; ++k) {
            f += embed(obs, dims, k);
            if (k > 0) {
                joint = kron(joint, psi.amplitudes());
            }
        }
        f *= 1.0 / static_cast<double>(n);
        const double m1 = expectation(std::span<const cplx>(joint), f);
        const double m2 = expectation(std::span<const cplx>(joint), f * f);
        EXPECT_NEAR(m1, mean, 1e-12);
        EXPECT_NEAR(m2 - m1 * m1, var / static_cast<double>(n), 1e-12);
    }
}

TEST(BeamSpec, FromTimesOfFlight) {
    const auto beam = example_beam({0.0, 1.0, 2.5}, 3.5, 8.0);
    ASSERT_EQ(beam.pairs.size(), 3u);
    EXPECT_DOUBLE_EQ(beam.pairs[2].t1, 6.0);
    EXPECT_DOUBLE_EQ(beam.pairs[2].t2, 10.5);
    EXPECT_NO_THROW(beam.validate());
    EXPECT_THROW((void)example_beam({0.0}, -1.0, 2.0), DomainError);
}

TEST(BeamSpec, Validation) {
    auto beam = example_beam({0.0}, 3.5, 8.0);
    beam.pairs[0].t1 = -1.0;
    EXPECT_THROW(beam.validate(), DomainError);
    beam.pairs[0] = {-0.5, 1.0, 1.0};
    EXPECT_THROW(beam.validate(), DomainError);
    beam.pairs[0] = {0.0, kNever, kNever};
    EXPECT_NO_THROW(beam.validate());
}

TEST(SubBeam, SingletGivesMaximallyMixedState) {
    const auto beam = example_beam({0.0, 0.5, 1.0}, 3.5, 8.0, 8.0, 0.5, singlet_state());
    for (double t : {0.0, 2.0, 5.0, 12.0}) {
        for (const auto &rho : sub_beam_state(beam, t)) {
            EXPECT_TRUE(matrices_near(rho.matrix(), ComplexMatrix::identity(2) * 0.5, 1e-12));
        }
    }
}

TEST(SubBeam, IndependentOfPartnerDetectionTime) {
    const std::vector<double> t0{0.0, 0.3, 1.1};
    for (double t : {2.0, 4.0, 9.0, 15.0}) {
        const auto reference = sub_beam_state(example_beam(t0, 3.5, 5.0), t);
        for (double flight2 : {8.0, 20.0}) {
            const auto other = sub_beam_state(example_beam(t0, 3.5, flight2), t);
            for (std::size_t k = 0; k < t0.size(); ++k) {
                EXPECT_TRUE(matrices_near(other[k].matrix(), reference[k].matrix(), 1e-12)) << "t=" << t;
            }
        }
    }
}

TEST(SubBeam, IndependentOfPartnerHamiltonian) {
    const std::vector<double> t0{0.0, 0.7};
    const auto reference = sub_beam_state(example_beam(t0, 3.5, 8.0, 8.0, 0.0), 6.0);
    for (double b : {0.5, 5.0}) {
        const auto other = sub_beam_state(example_beam(t0, 3.5, 8.0, 8.0, b), 6.0);
        for (std::size_t k = 0; k < t0.size(); ++k) {
            EXPECT_TRUE(matrices_near(other[k].matrix(), reference[k].matrix(), 1e-12));
        }
    }
}

TEST(SubBeam, StaggeredPreparationShiftsClock) {
    const auto beam = example_beam({0.0, 2.0}, 3.5, 8.0);
    const auto states = beam_pair_states(beam, 3.0);
    const auto expected_first = exact_example_propagator(example_pair_state(), 8.0, 0.5, SwitchingSchedule{{3.5, 8.0}, {2, 2}}, 3.0);
    const auto expected_second = exact_example_propagator(example_pair_state(), 8.0, 0.5, SwitchingSchedule{{3.5, 8.0}, {2, 2}}, 1.0);
    EXPECT_LE(nlcorr::testing::max_abs_diff(states[0].amplitudes(), expected_first.amplitudes()), 1e-12);
    EXPECT_LE(nlcorr::testing::max_abs_diff(states[1].amplitudes(), expected_second.amplitudes()), 1e-12);
    // A pair prepared later than t is still in its initial state.
    const auto early = beam_pair_states(example_beam({5.0}, 3.5, 8.0), 1.0);
    EXPECT_LE(nlcorr::testing::max_abs_diff(early[0].amplitudes(), example_pair_state().amplitudes()), 0.0);
}

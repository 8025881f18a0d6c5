#include "nlcorr/error.hpp"
#include "nlcorr/protocols.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nlcorr;
using nlcorr::testing::matrices_near;

namespace {

constexpr cplx I{0.0, 1.0};
const Vec3 kX{1.0, 0.0, 0.0};
const Vec3 kZ{0.0, 0.0, 1.0};

double table_distance(const MeasurementOutcomeTable &a, const MeasurementOutcomeTable &b) {
    double d = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            d = std::max(d, std::abs(a.joint[i][j] - b.joint[i][j]));
        }
    }
    return d;
}

PairSetup random_linear_setup(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> time(0.0, 5.0);
    double t1 = time(rng);
    double t2 = time(rng);
    if (t2 < t1) {
        std::swap(t1, t2);
    }
    return PairSetup{random_state(4, rng), HamiltonianFunction::linear(random_hermitian(2, rng)),
                     HamiltonianFunction::linear(random_hermitian(2, rng)), t1, t2};
}

std::vector<NamedObservable> figure_observables() {
    const auto id = ComplexMatrix::identity(2);
    return {{"xx", kron(pauli_x(), pauli_x())}, {"x1", kron(pauli_x(), id)}, {"1x", kron(id, pauli_x())}};
}

std::vector<double> grid(double t_end, double dt) {
    std::vector<double> g;
    for (int i = 0; i * dt <= t_end + 1e-12; ++i) {
        g.push_back(i * dt);
    }
    return g;
}

} // namespace

TEST(OutcomeTable, CompleteAndValidate) {
    MeasurementOutcomeTable t;
    t.joint = {{{0.1, 0.2}, {0.3, 0.4}}};
    t.complete();
    EXPECT_NEAR(t.marginal_a[0], 0.3, 1e-15);
    EXPECT_NEAR(t.marginal_b[1], 0.6, 1e-15);
    EXPECT_NEAR(t.correlator, 0.1 - 0.2 - 0.3 + 0.4, 1e-15);
    EXPECT_DOUBLE_EQ(t.p(+1, -1), 0.2);
    EXPECT_NO_THROW(t.validate());
    t.joint[0][0] = 0.3;
    t.complete();
    EXPECT_THROW(t.validate(), NumericalError);
}

TEST(Switching, SingletAnticorrelatedWithEqualLinearDynamics) {
    std::mt19937_64 rng(80);
    const auto h = HamiltonianFunction::linear(random_hermitian(2, rng));
    const PairSetup setup{singlet_state(), h, h, 1.5, 1.5};
    const auto t = switching_correlator(setup, kZ, kZ);
    EXPECT_NEAR(t.p(+1, -1), 0.5, 1e-12);
    EXPECT_NEAR(t.p(-1, +1), 0.5, 1e-12);
    EXPECT_NEAR(t.p(+1, +1), 0.0, 1e-12);
    EXPECT_NEAR(t.p(-1, -1), 0.0, 1e-12);
    EXPECT_NEAR(t.correlator, -1.0, 1e-12);
}

TEST(Switching, ObservableAverageRecorded) {
    const PairSetup setup = example_setup(singlet_state(), 0.0, 0.0, 1.0, 2.0);
    const auto t = switching_correlator(setup, pauli_z(), pauli_z(), kZ, kZ);
    ASSERT_TRUE(t.observable_average.has_value());
    EXPECT_NEAR(*t.observable_average, -1.0, 1e-14);
    EXPECT_NEAR(*t.observable_average, t.correlator, 1e-12);
    EXPECT_THROW((void)switching_correlator(setup, ComplexMatrix{{0, 1}, {0, 0}}, pauli_z(), kZ, kZ),
                 DomainError);
}

TEST(Switching, NeedsFiniteTimes) {
    const PairSetup setup = example_setup(singlet_state(), 1.0, 1.0, 1.0, kNever);
    EXPECT_THROW((void)switching_correlator(setup, kZ, kZ), DomainError);
    EXPECT_THROW((void)zeno_correlator(setup, kZ, kZ), DomainError);
}

TEST(Equivalence, LinearProtocolsAgree) {
    std::mt19937_64 rng(81);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        PairSetup setup = random_linear_setup(rng);
        if (trial % 10 == 0) {
            std::swap(setup.t1, setup.t2);  // particle #2 detected first
        }
        const Vec3 a = random_direction(rng);
        const Vec3 b = random_direction(rng);
        worst = std::max(worst, table_distance(switching_correlator(setup, a, b), zeno_correlator(setup, a, b)));
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(Equivalence, LinearMatchesOperatorFormula) {
    // p(s,s') = <psi| V1(t1)^+ E_s V1(t1) (x) V2(t2)^+ E_s' V2(t2) |psi>.
    std::mt19937_64 rng(82);
    for (int trial = 0; trial < 10; ++trial) {
        const auto psi = random_state(4, rng);
        const auto h1 = random_hermitian(2, rng);
        const auto h2 = random_hermitian(2, rng);
        const double t1 = 0.7;
        const double t2 = 2.3;
        const Vec3 a = random_direction(rng);
        const Vec3 b = random_direction(rng);
        const PairSetup setup{psi, HamiltonianFunction::linear(h1), HamiltonianFunction::linear(h2), t1, t2};
        const auto table = zeno_correlator(setup, a, b);
        const auto v1 = herm_exp(h1, -I * t1);
        const auto v2 = herm_exp(h2, -I * t2);
        const auto [ap, am] = projector(a);
        const auto [bp, bm] = projector(b);
        const std::array<ComplexMatrix, 2> ea{ap, am};
        const std::array<ComplexMatrix, 2> eb{bp, bm};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const auto op = kron(v1.adjoint() * ea[i] * v1, v2.adjoint() * eb[j] * v2);
                EXPECT_NEAR(table.joint[i][j], expectation(psi, op), 1e-12);
            }
        }
    }
}

TEST(Zeno, SingletStaticAnticorrelation) {
    for (double t1 : {0.0, 1.0, 4.0}) {
        const PairSetup setup = example_setup(singlet_state(), 0.0, 0.0, t1, 5.0);
        const auto t = zeno_correlator(setup, kZ, kZ);
        EXPECT_NEAR(t.p(+1, -1), 0.5, 1e-14);
        EXPECT_NEAR(t.p(-1, +1), 0.5, 1e-14);
    }
}

TEST(Zeno, AnnihilatedBranchFlagged) {
    const StateVector up_up{1.0, 0.0, 0.0, 0.0};
    const PairSetup setup = example_setup(up_up, 2.0, 1.0, 1.0, 2.0);
    const auto t = zeno_correlator(setup, kZ, kX);
    ASSERT_EQ(t.annihilated_branches.size(), 1u);
    EXPECT_EQ(t.annihilated_branches[0], -1);
    EXPECT_NEAR(t.marginal_a[0], 1.0, 1e-14);
}

TEST(Zeno, NonlinearExampleDiffersFromSwitching) {
    const PairSetup setup = example_setup(example_pair_state(), 8.0, 0.5, 3.5, 8.0);
    const auto sw = switching_correlator(setup, kX, kX);
    const auto ze = zeno_correlator(setup, kX, kX);
    EXPECT_GT(table_distance(sw, ze), 1e-3);
    // Particle #1 statistics agree: the measurement at t1 happens on the same state.
    EXPECT_NEAR(sw.marginal_a[0], ze.marginal_a[0], 1e-12);
}

TEST(Switching, MarginalOfFirstIndependentOfPartner) {
    std::mt19937_64 rng(83);
    const auto psi = random_state(4, rng);
    const Vec3 a = random_direction(rng);
    const auto h1 = HamiltonianFunction::quadratic_average(3.0, pauli_z());
    std::optional<std::array<double, 2>> reference;
    for (int trial = 0; trial < 12; ++trial) {
        std::uniform_real_distribution<double> u(0.0, 4.0);
        const HamiltonianFunction h2 = trial % 2 ? HamiltonianFunction::mean_field(u(rng))
                                                 : HamiltonianFunction::quadratic_average(u(rng), pauli_x());
        const PairSetup setup{psi, h1, h2, 2.0, 2.0 + u(rng)};
        const auto t = switching_correlator(setup, a, random_direction(rng));
        if (!reference) {
            reference = t.marginal_a;
        }
        EXPECT_NEAR(t.marginal_a[0], (*reference)[0], 1e-8);
        EXPECT_NEAR(t.marginal_a[1], (*reference)[1], 1e-8);
    }
}

TEST(Ensemble, SwitchingPartnerCurveIgnoresFirstDetection) {
    const auto g = grid(10.0, 0.01);
    const auto obs = figure_observables();
    const auto with = ensemble_average_trajectory(Protocol::switching,
                                                  example_setup(example_pair_state(), 8.0, 0.5, 3.5, 8.0),
                                                  kX, kX, obs, g);
    const auto without = ensemble_average_trajectory(Protocol::switching,
                                                     example_setup(example_pair_state(), 8.0, 0.5, kNever, 8.0),
                                                     kX, kX, obs, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(with.observables.at("1x")[i], without.observables.at("1x")[i], 1e-10);
    }
}

TEST(Ensemble, ProtocolsCoincideBeforeFirstDetection) {
    const auto g = grid(10.0, 0.01);
    const auto obs = figure_observables();
    const auto setup = example_setup(example_pair_state(), 8.0, 0.5, 3.5, 8.0);
    const auto sw = ensemble_average_trajectory(Protocol::switching, setup, kX, kX, obs, g);
    const auto ze = ensemble_average_trajectory(Protocol::zeno, setup, kX, kX, obs, g);
    const auto psi0 = example_pair_state();
    double gap = 0.0;
    for (const auto &o : obs) {
        EXPECT_NEAR(sw.observables.at(o.name)[0], expectation(psi0, o.op), 1e-14);
        EXPECT_NEAR(ze.observables.at(o.name)[0], expectation(psi0, o.op), 1e-14);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double d = std::abs(sw.observables.at(o.name)[i] - ze.observables.at(o.name)[i]);
            if (g[i] <= 3.5) {
                EXPECT_LE(d, 1e-10) << o.name << " at t=" << g[i];
            } else if (o.name == "1x" && g[i] <= 8.0) {
                gap = std::max(gap, d);
            }
        }
    }
    EXPECT_GT(gap, 1e-3);
}

TEST(Ensemble, BranchModesRecombineToMixture) {
    const auto g = grid(6.0, 0.1);
    const auto obs = figure_observables();
    const auto setup = example_setup(example_pair_state(), 8.0, 0.5, 3.5, 8.0);
    const auto mix = ensemble_average_trajectory(Protocol::zeno, setup, kX, kX, obs, g);
    const auto plus = ensemble_average_trajectory(Protocol::zeno, setup, kX, kX, obs, g, ZenoMode::branch_plus);
    const auto minus = ensemble_average_trajectory(Protocol::zeno, setup, kX, kX, obs, g, ZenoMode::branch_minus);
    const auto t = zeno_correlator(setup, kX, kX);
    const double p_plus = t.marginal_a[0];
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] <= 3.5) {
            continue;
        }
        EXPECT_NEAR(plus.observables.at("x1")[i], 1.0, 1e-12);
        EXPECT_NEAR(minus.observables.at("x1")[i], -1.0, 1e-12);
        for (const auto &o : obs) {
            EXPECT_NEAR(mix.observables.at(o.name)[i],
                        p_plus * plus.observables.at(o.name)[i] + (1.0 - p_plus) * minus.observables.at(o.name)[i],
                        1e-12);
        }
    }
}

TEST(Ensemble, RejectsBadGrid) {
    const auto setup = example_setup(example_pair_state(), 8.0, 0.5, 3.5, 8.0);
    EXPECT_THROW((void)ensemble_average_trajectory(Protocol::zeno, setup, kX, kX, figure_observables(), {1.0, 0.5}),
                 DomainError);
    EXPECT_THROW((void)ensemble_average_trajectory(Protocol::zeno, setup, kX, {1.0, 1.0, 0.0}, figure_observables(),
                                                   {0.0, 1.0}),
                 DomainError);
}

TEST(History, CertainAndImpossibleEvents) {
    std::mt19937_64 rng(90);
    const auto h = random_hermitian(2, rng);
    const DensityMatrix rho = DensityMatrix::pure(random_state(2, rng));
    HistorySpec certain{{{1.0, ComplexMatrix::identity(2)}}, h, 2.0};
    EXPECT_NEAR(history_probability_unitary(certain, rho), 1.0, 1e-14);
    EXPECT_NEAR(history_probability_projected(certain, rho), 1.0, 1e-14);

    // Project onto the evolved state's orthogonal complement.
    const auto psi = random_state(2, rng);
    const auto evolved = herm_exp(h, -I * 1.3).apply(psi.amplitudes());
    const Amplitudes orth{-std::conj(evolved[1]), std::conj(evolved[0])};
    HistorySpec impossible{{{1.3, ComplexMatrix::outer(orth, orth)}}, h, 1.3};
    EXPECT_NEAR(history_probability_unitary(impossible, DensityMatrix::pure(psi)), 0.0, 1e-14);
}

TEST(History, CommutingProjectorsWithoutDynamics) {
    const auto [zp, zm] = projector(kZ);
    const DensityMatrix rho = DensityMatrix::from_bloch({0.2, 0.1, 0.4});
    HistorySpec spec{{{0.5, zp}, {1.0, zp}}, ComplexMatrix(2), 1.0};
    EXPECT_NEAR(history_probability_projected(spec, rho), expectation(rho, zp), 1e-14);
    spec.events[1].projector = zm;
    EXPECT_NEAR(history_probability_projected(spec, rho), 0.0, 1e-14);
}

TEST(History, SingleProjectorIsBornRule) {
    std::mt19937_64 rng(91);
    const auto h = random_hermitian(2, rng);
    const auto [p, m] = projector(random_direction(rng));
    const DensityMatrix rho = DensityMatrix::from_bloch({0.3, -0.2, 0.5});
    const HistorySpec spec{{{0.8, p}}, h, 0.8};
    const auto u = herm_exp(h, -I * 0.8);
    EXPECT_NEAR(history_probability_projected(spec, rho), expectation(rho, u.adjoint() * p * u), 1e-14);
}

TEST(History, RoutesAgreeOnRandomHistories) {
    std::mt19937_64 rng(92);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto spec = random_history(rng);
        const DensityMatrix rho = DensityMatrix::pure(random_state(2, rng));
        worst = std::max(worst, std::abs(history_probability_unitary(spec, rho) -
                                         history_probability_projected(spec, rho)));
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(History, Validation) {
    const auto [p, m] = projector(kZ);
    EXPECT_THROW(history_probability_unitary(HistorySpec{{{1.0, p}, {1.0, m}}, pauli_x(), 2.0},
                                             DensityMatrix::from_bloch({0, 0, 0})),
                 DomainError);
    EXPECT_THROW(history_probability_unitary(HistorySpec{{{1.0, pauli_x()}}, pauli_x(), 2.0},
                                             DensityMatrix::from_bloch({0, 0, 0})),
                 DomainError);
    EXPECT_THROW(history_probability_unitary(HistorySpec{{{3.0, p}}, pauli_x(), 2.0},
                                             DensityMatrix::from_bloch({0, 0, 0})),
                 DomainError);
}

TEST(Teleportation, SingletFields) {
    const auto post = teleportation_demo(singlet_state(), 10000, Selection::post, kZ);
    const Vec3 &b = post.field();
    EXPECT_LE(std::hypot(b[0], b[1], b[2]), 1e-12);

    const auto pre = teleportation_demo(singlet_state(), 10000, Selection::pre, kZ, -1);
    EXPECT_NEAR(pre.field()[2], 1.0, 1e-12);
    EXPECT_NEAR(pre.field()[0], 0.0, 1e-12);
    EXPECT_NEAR(static_cast<double>(pre.n_retained) / 10000.0, 0.5, 3.0 / std::sqrt(10000.0));

    const auto scaled = teleportation_demo(singlet_state(), 100, Selection::pre, kZ, +1, 2.5);
    EXPECT_NEAR(scaled.field()[2], -2.5, 1e-12);
}

TEST(Teleportation, ProductStateSelectionIrrelevant) {
    const StateVector plus_plus{0.5, 0.5, 0.5, 0.5};
    const auto pre = teleportation_demo(plus_plus, 1000, Selection::pre, kZ, +1);
    const auto post = teleportation_demo(plus_plus, 1000, Selection::post, kZ, +1);
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(pre.field()[k], post.field()[k], 1e-12);
    }
    EXPECT_NEAR(post.field()[0], 1.0, 1e-12);
}

TEST(Teleportation, Errors) {
    const StateVector up_up{1.0, 0.0, 0.0, 0.0};
    EXPECT_THROW((void)teleportation_demo(up_up, 100, Selection::pre, kZ, -1), DomainError);
    EXPECT_THROW((void)teleportation_demo(singlet_state(), 0, Selection::pre, kZ), DomainError);
    EXPECT_THROW((void)teleportation_demo(StateVector{1.0, 0.0}, 10, Selection::pre, kZ), DimensionError);
}

TEST(Teleportation, Deterministic) {
    const auto a = teleportation_demo(example_pair_state(), 5000, Selection::pre, kX, 1, 1.0, 7);
    const auto b = teleportation_demo(example_pair_state(), 5000, Selection::pre, kX, 1, 1.0, 7);
    EXPECT_EQ(a.n_retained, b.n_retained);
    EXPECT_TRUE(matrices_near(a.retained_state, b.retained_state, 0.0));
}

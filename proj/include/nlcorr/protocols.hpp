#pragma once

/**
 * @file protocols.hpp
 * Two-time measurement protocols for a pair of subsystems.
 *
 * Switching protocol: each subsystem's Hamiltonian function is switched off
 * at its detection time and joint probabilities are read from the final
 * (frozen) pair state. Zeno protocol: at the first detection the pair state
 * is projected onto each outcome branch and renormalized; branches then
 * evolve on their own until the second detection.
 *
 * Also: multi-time histories computed segment by segment versus with
 * Heisenberg-rotated projectors, and the pre-/post-selection mean-field
 * comparison.
 */

#include "nlcorr/dynamics.hpp"
#include "nlcorr/hamfun.hpp"
#include "nlcorr/qstate.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlcorr {

/// Outcome index: 0 is the +1 outcome, 1 is -1.
constexpr int outcome_index(int sign) noexcept { return sign > 0 ? 0 : 1; }
constexpr int outcome_sign(int index) noexcept { return index == 0 ? 1 : -1; }

/// Joint and marginal outcome probabilities of a spin measurement on each of
/// two subsystems.
struct MeasurementOutcomeTable {
    /// joint[i][j]: outcome i on subsystem 1, outcome j on subsystem 2.
    std::array<std::array<double, 2>, 2> joint{};
    std::array<double, 2> marginal_a{};
    std::array<double, 2> marginal_b{};
    /// sum_{s,s'} s s' p(s,s').
    double correlator = 0.0;
    /// <X (x) Y> in the final state, when X and Y were supplied.
    std::optional<double> observable_average;
    /// Signs of Zeno branches that the projection annihilated.
    std::vector<int> annihilated_branches;

    [[nodiscard]] double p(int sign_a, int sign_b) const {
        return joint[outcome_index(sign_a)][outcome_index(sign_b)];
    }
    /// Throws NumericalError when the table is not a probability table.
    void validate() const;
    /// Fills marginals and correlator from `joint`.
    void complete();
};

/// A pair experiment: initial state, one Hamiltonian function per spin and
/// the two detection times.
struct PairSetup {
    StateVector psi0;
    HamiltonianFunction h1;
    HamiltonianFunction h2;
    double t1 = kNever;
    double t2 = kNever;
    EvolutionMethod method = EvolutionMethod::automatic;
    double dt = 1e-3;

    [[nodiscard]] SwitchedHamiltonian hamiltonian() const;
};

/// The two-spin example: H_k = strength_k <sigma_z>^2 / 2.
PairSetup example_setup(const StateVector &psi0, double a, double b, double t1, double t2);

MeasurementOutcomeTable switching_correlator(const PairSetup &setup, const Vec3 &direction_a,
                                             const Vec3 &direction_b);
/// As above, and records <X (x) Y> in the frozen state.
MeasurementOutcomeTable switching_correlator(const PairSetup &setup, const ComplexMatrix &x,
                                             const ComplexMatrix &y, const Vec3 &direction_a,
                                             const Vec3 &direction_b);

/// Projection at the earlier detection, branch-wise evolution afterwards.
/// Branches with weight below 1e-14 contribute zero and are flagged.
MeasurementOutcomeTable zeno_correlator(const PairSetup &setup, const Vec3 &direction_a,
                                        const Vec3 &direction_b);

enum class Protocol { switching, zeno };

/// How Zeno branches enter a sampled average.
enum class ZenoMode {
    mixture,      ///< probability-weighted over both outcomes
    branch_plus,  ///< conditioned on the +1 outcome
    branch_minus, ///< conditioned on the -1 outcome
};

/// Observable averages sampled on a time grid.
struct EnsembleAverages {
    std::vector<double> times;
    std::map<std::string, std::vector<double>> observables;
    TrajectoryMetadata metadata;
};

/// Averages of `observables` on `t_grid` (non-decreasing, >= 0). Under the
/// Zeno protocol samples at t <= min(t1, t2) use the unprojected state;
/// later samples use the branches of the first-detected subsystem, projected
/// along its direction.
EnsembleAverages ensemble_average_trajectory(Protocol protocol, const PairSetup &setup,
                                             const Vec3 &direction_a, const Vec3 &direction_b,
                                             const std::vector<NamedObservable> &observables,
                                             const std::vector<double> &t_grid,
                                             ZenoMode mode = ZenoMode::mixture);

/// Reduced state of one subsystem on a time grid under either protocol; for
/// the Zeno protocol, the branch mixture after the first detection.
std::vector<ComplexMatrix> reduced_state_trajectory(Protocol protocol, const PairSetup &setup,
                                                    const Vec3 &direction_a,
                                                    const Vec3 &direction_b,
                                                    const std::vector<double> &t_grid,
                                                    std::size_t subsystem);

// ---------------------------------------------------------------------------
// Histories

struct HistoryEvent {
    double time;
    ComplexMatrix projector;
};

struct HistorySpec {
    std::vector<HistoryEvent> events;
    ComplexMatrix free_generator;
    double final_time = 0.0;

    /// Throws DomainError for non-increasing times, non-projectors or a final
    /// time before the last event; DimensionError for size mismatches.
    void validate() const;
};

/// Segment-by-segment Schroedinger-picture evaluation:
/// Tr(U(T-t_n) E_n ... E_1 U(t_1) rho U(t_1)^dagger E_1 ... E_n U(T-t_n)^dagger).
double history_probability_unitary(const HistorySpec &spec, const DensityMatrix &rho0);

/// Tr(E_n(t_n) ... E_1(t_1) rho E_1(t_1) ... E_n(t_n)) with
/// E_k(t) = U(t)^dagger E_k U(t).
double history_probability_projected(const HistorySpec &spec, const DensityMatrix &rho0);

/// Random two-projector history on a qubit (rank-one projectors along random
/// directions, random free generator and times).
HistorySpec random_history(std::mt19937_64 &rng, std::size_t n_projectors = 2);

// ---------------------------------------------------------------------------
// Pre-/post-selection

enum class Selection { pre, post };

/// Mean field B(rho) = coupling * Tr(rho sigma) of a spin-1/2 state.
Vec3 mean_field_vector(const ComplexMatrix &rho, double coupling = 1.0);

struct TeleportationReport {
    Selection selection = Selection::post;
    /// Field of the beam Bob keeps after discarding on Alice's instruction.
    Vec3 field_pre{};
    /// Field of Bob's entire beam; data relabelled only afterwards.
    Vec3 field_post{};
    /// Bob's beam state used for the selected mode.
    ComplexMatrix retained_state;
    std::size_t n_pairs = 0;
    std::size_t n_retained = 0;

    [[nodiscard]] const Vec3 &field() const {
        return selection == Selection::pre ? field_pre : field_post;
    }
};

/// Alice measures spin #1 along `alice_direction` on each of `n_pairs`
/// copies of `pair`; Bob keeps his particle when her outcome equals
/// `keep_outcome`. Outcomes are sampled with a seeded generator. Throws
/// DomainError when no pair is retained.
TeleportationReport teleportation_demo(const StateVector &pair, std::size_t n_pairs,
                                       Selection selection, const Vec3 &alice_direction,
                                       int keep_outcome = -1, double coupling = 1.0,
                                       std::uint64_t seed = 2001);

} // namespace nlcorr

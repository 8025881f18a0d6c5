#pragma once

/**
 * @file beams.hpp
 * Beams of N pairs. A beam is kept as a list of per-pair states; the N-fold
 * tensor product is never formed.
 */

#include "nlcorr/dynamics.hpp"
#include "nlcorr/hamfun.hpp"
#include "nlcorr/qstate.hpp"

#include <vector>

namespace nlcorr {

/// Preparation and detection times of one pair.
struct PairTimes {
    double t0 = 0.0;
    double t1 = kNever;
    double t2 = kNever;
};

struct BeamSpec {
    std::vector<PairTimes> pairs;
    StateVector psi0;
    HamiltonianFunction h1;
    HamiltonianFunction h2;
    EvolutionMethod method = EvolutionMethod::automatic;
    double dt = 1e-3;

    /// Same times of flight for every pair: t_k = t0 + flight_k.
    static BeamSpec from_times_of_flight(const std::vector<double> &t0, double flight1,
                                         double flight2, StateVector psi0, HamiltonianFunction h1,
                                         HamiltonianFunction h2);
    /// Throws DomainError unless t0 <= t1 and t0 <= t2 for every pair.
    void validate() const;
};

/// <F_N(obs)> on the product of `pair_states`: the mean of the per-pair
/// expectations.
double frequency_average(const ComplexMatrix &pair_obs, const std::vector<StateVector> &pair_states);

/// Pair states of the beam at time t; a pair prepared after t is reported in
/// its initial state.
std::vector<StateVector> beam_pair_states(const BeamSpec &beam, double t);

/// Reduced states of the particles #1 at time t, one per pair.
std::vector<DensityMatrix> sub_beam_state(const BeamSpec &beam, double t);

} // namespace nlcorr

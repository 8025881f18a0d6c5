#include "nlcorr/beams.hpp"

#include "nlcorr/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nlcorr {

BeamSpec BeamSpec::from_times_of_flight(const std::vector<double> &t0, double flight1,
                                        double flight2, StateVector psi0, HamiltonianFunction h1,
                                        HamiltonianFunction h2) {
    if (flight1 < 0.0 || flight2 < 0.0) {
        throw DomainError("BeamSpec: times of flight must be non-negative");
    }
    BeamSpec beam{{}, std::move(psi0), std::move(h1), std::move(h2)};
    for (double start : t0) {
        beam.pairs.push_back({start, start + flight1, start + flight2});
    }
    return beam;
}

void BeamSpec::validate() const {
    if (psi0.dim() != 4) {
        throw DimensionError("BeamSpec: pair state must be two-qubit");
    }
    for (const auto &p : pairs) {
        if (!std::isfinite(p.t0) || p.t0 < 0.0 || !(p.t0 <= p.t1) || !(p.t0 <= p.t2)) {
            throw DomainError("BeamSpec: need 0 <= t0 <= t1 and t0 <= t2 for every pair");
        }
    }
}

double frequency_average(const ComplexMatrix &pair_obs, const std::vector<StateVector> &pair_states) {
    if (pair_states.empty()) {
        throw DomainError("frequency_average: the beam is empty");
    }
    double sum = 0.0;
    for (const auto &s : pair_states) {
        sum += expectation(s, pair_obs);
    }
    return sum / static_cast<double>(pair_states.size());
}

std::vector<StateVector> beam_pair_states(const BeamSpec &beam, double t) {
    beam.validate();
    std::vector<StateVector> out;
    out.reserve(beam.pairs.size());
    for (const auto &p : beam.pairs) {
        // Each pair runs its own clock from t0.
        const SwitchingSchedule schedule{{p.t1 - p.t0, p.t2 - p.t0}, {2, 2}};
        const SwitchedHamiltonian h = polchinski_extend({beam.h1, beam.h2}, {2, 2}, schedule);
        const double elapsed = std::max(0.0, t - p.t0);
        out.push_back(StateVector::assume_normalized(
            propagate(h, beam.psi0.amplitudes(), 0.0, elapsed, beam.method, beam.dt)));
    }
    return out;
}

std::vector<DensityMatrix> sub_beam_state(const BeamSpec &beam, double t) {
    constexpr std::array<std::size_t, 2> dims{2, 2};
    std::vector<DensityMatrix> out;
    for (const auto &psi : beam_pair_states(beam, t)) {
        ComplexMatrix rho = partial_trace(psi.amplitudes(), dims, 0);
        rho *= 1.0 / rho.trace().real();
        out.emplace_back(std::move(rho));
    }
    return out;
}

} // namespace nlcorr

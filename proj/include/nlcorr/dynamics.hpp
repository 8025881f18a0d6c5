#pragma once

/**
 * @file dynamics.hpp
 * Time evolution under switched Hamiltonian functions: a closed-form
 * propagator for the two-spin sigma_z example, a fixed-step classical RK4
 * integrator for arbitrary composites, exact segment propagation for
 * composites whose generators are conserved, and the q-deformed von Neumann
 * flow i drho/dt = c [H, rho^q].
 */

#include "nlcorr/hamfun.hpp"
#include "nlcorr/qstate.hpp"

#include <map>
#include <string>
#include <vector>

namespace nlcorr {

struct NamedObservable {
    std::string name;
    ComplexMatrix op;
};

struct TrajectoryMetadata {
    std::string integrator;
    double step = 0.0;
    std::vector<double> detection_times;
    std::string hamiltonian;
    bool numeric_gradient = false;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::map<std::string, std::vector<double>> observables;
    TrajectoryMetadata metadata;
};

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<ComplexMatrix> states;
    TrajectoryMetadata metadata;
};

/// Norm drift that aborts an integration.
inline constexpr double kNormAbort = 1e-6;

/// Closed-form solution of the two-spin example with
/// H_1 = A <sigma_z>^2 / 2 and H_2 = B <sigma_z>^2 / 2 switched off at the
/// schedule's detection times:
///   exp(-i A <sz(0)>_1 sz kappa(t,t1)) (x) exp(-i B <sz(0)>_2 sz kappa(t,t2)) psi0.
StateVector exact_example_propagator(const StateVector &psi0, double a, double b,
                                     const SwitchingSchedule &schedule, double t);

/// The switched extension of the example's two quadratic-average terms.
SwitchedHamiltonian example_hamiltonian(double a, double b, const SwitchingSchedule &schedule);

/// Classical RK4 for i dpsi/dt = M(t, psi) psi on [t_start, t_end] with steps
/// of at most `dt`. Segments are split at switching times so the active set
/// is constant inside every step. Observables are sampled at every step.
/// Throws NumericalError when the norm drifts by more than kNormAbort.
Trajectory integrate(const SwitchedHamiltonian &h, const StateVector &psi0, double t_end, double dt,
                     const std::vector<NamedObservable> &observables, double t_start = 0.0);

enum class EvolutionMethod {
    automatic, ///< exact when every term has a stationary generator, RK4 otherwise
    exact,
    rk4,
};

/// Evolves amplitudes from t_from to t_to (t_to >= t_from) without sampling.
Amplitudes propagate(const SwitchedHamiltonian &h, std::span<const cplx> psi, double t_from,
                     double t_to, EvolutionMethod method = EvolutionMethod::automatic,
                     double dt = 1e-3);

/// rho^q via the spectral decomposition. Eigenvalues in [-1e-12, 0) are
/// treated as zero; anything more negative throws DomainError when q is not
/// an integer.
ComplexMatrix matrix_power(const ComplexMatrix &rho, double q);

/// Fixed-step RK4 for i drho/dt = coupling * [H, rho^q].
DensityTrajectory integrate_qvn(const ComplexMatrix &h, const DensityMatrix &rho0, double q,
                                double t_end, double dt, double coupling = 1.0);

} // namespace nlcorr

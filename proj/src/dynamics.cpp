#include "nlcorr/dynamics.hpp"

#include "nlcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlcorr {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Segment {
    double begin;
    double end;
    std::vector<bool> active;
};

// Splits [t_from, t_to] at every switching time strictly inside it. The
// active set of a segment is read at its midpoint, so the generator is never
// sampled on the far side of a switch.
std::vector<Segment> segments(const SwitchedHamiltonian &h, double t_from, double t_to) {
    std::vector<double> cuts{t_from};
    for (double s : h.switch_times()) {
        if (s > t_from && s < t_to) {
            cuts.push_back(s);
        }
    }
    cuts.push_back(t_to);
    std::vector<Segment> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        if (b > a) {
            out.push_back({a, b, h.active_at(0.5 * (a + b))});
        }
    }
    return out;
}

std::size_t step_count(double length, double dt) {
    const double n = std::ceil(length / dt - 1e-9);
    return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

Amplitudes derivative(const SwitchedHamiltonian &h, const std::vector<bool> &active,
                      std::span<const cplx> psi) {
    Amplitudes d = h.effective_hamiltonian(active, psi).apply(psi);
    for (auto &z : d) {
        z *= -kI;
    }
    return d;
}

Amplitudes axpy(std::span<const cplx> x, cplx a, std::span<const cplx> y) {
    Amplitudes out(x.begin(), x.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += a * y[i];
    }
    return out;
}

void rk4_step(const SwitchedHamiltonian &h, const std::vector<bool> &active, Amplitudes &psi,
              double step) {
    const Amplitudes k1 = derivative(h, active, psi);
    const Amplitudes k2 = derivative(h, active, axpy(psi, 0.5 * step, k1));
    const Amplitudes k3 = derivative(h, active, axpy(psi, 0.5 * step, k2));
    const Amplitudes k4 = derivative(h, active, axpy(psi, step, k3));
    for (std::size_t i = 0; i < psi.size(); ++i) {
        psi[i] += (step / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

void check_norm(std::span<const cplx> psi, double t) {
    const double n = norm(psi);
    if (!std::isfinite(n) || std::abs(n - 1.0) > kNormAbort) {
        throw NumericalError("integrate: norm drifted to " + std::to_string(n) + " at t = " +
                             std::to_string(t));
    }
}

void validate_times(double t_from, double t_to, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw DomainError("integrate: dt must be positive and finite");
    }
    if (!std::isfinite(t_from) || !std::isfinite(t_to) || t_from < 0.0 || t_to < t_from) {
        throw DomainError("integrate: need 0 <= t_start <= t_end < inf");
    }
}

TrajectoryMetadata metadata_for(const SwitchedHamiltonian &h, const char *integrator, double dt) {
    return {integrator, dt, h.schedule().detection_times, h.label(), h.uses_numeric_gradient()};
}

} // namespace

SwitchedHamiltonian example_hamiltonian(double a, double b, const SwitchingSchedule &schedule) {
    return polchinski_extend({HamiltonianFunction::quadratic_average(a, pauli_z(), "A<sz>^2/2"),
                              HamiltonianFunction::quadratic_average(b, pauli_z(), "B<sz>^2/2")},
                             {2, 2}, schedule);
}

StateVector exact_example_propagator(const StateVector &psi0, double a, double b,
                                     const SwitchingSchedule &schedule, double t) {
    if (psi0.dim() != 4) {
        throw DimensionError("exact_example_propagator: expected a two-qubit state");
    }
    if (schedule.detection_times.size() != 2) {
        throw DimensionError("exact_example_propagator: schedule needs two detection times");
    }
    schedule.validate();
    if (!(t >= 0.0)) {
        throw DomainError("exact_example_propagator: t must be non-negative");
    }
    const auto &p = psi0.amplitudes();
    // <sz>_1 = |p00|^2 + |p01|^2 - |p10|^2 - |p11|^2, <sz>_2 likewise on the
    // second index.
    const double z1 = std::norm(p[0]) + std::norm(p[1]) - std::norm(p[2]) - std::norm(p[3]);
    const double z2 = std::norm(p[0]) - std::norm(p[1]) + std::norm(p[2]) - std::norm(p[3]);
    const double phi1 = a * z1 * kappa(t, schedule.detection_times[0]);
    const double phi2 = b * z2 * kappa(t, schedule.detection_times[1]);
    Amplitudes out(4);
    for (std::size_t i = 0; i < 2; ++i) {
        const double s1 = i == 0 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < 2; ++j) {
            const double s2 = j == 0 ? 1.0 : -1.0;
            out[2 * i + j] = std::polar(1.0, -(s1 * phi1 + s2 * phi2)) * p[2 * i + j];
        }
    }
    return StateVector::assume_normalized(std::move(out));
}

Trajectory integrate(const SwitchedHamiltonian &h, const StateVector &psi0, double t_end, double dt,
                     const std::vector<NamedObservable> &observables, double t_start) {
    validate_times(t_start, t_end, dt);
    if (psi0.dim() != h.dim()) {
        throw DimensionError("integrate: state dimension does not match the Hamiltonian function");
    }
    for (const auto &o : observables) {
        if (o.op.dim() != h.dim()) {
            throw DimensionError("integrate: observable '" + o.name + "' has the wrong dimension");
        }
    }

    Trajectory traj;
    traj.metadata = metadata_for(h, "rk4", dt);
    Amplitudes psi = psi0.amplitudes();
    auto sample = [&](double t) {
        traj.times.push_back(t);
        for (const auto &o : observables) {
            traj.observables[o.name].push_back(expectation(psi, o.op));
        }
        traj.states.push_back(StateVector::assume_normalized(psi));
    };
    sample(t_start);
    for (const auto &seg : segments(h, t_start, t_end)) {
        const std::size_t n = step_count(seg.end - seg.begin, dt);
        const double step = (seg.end - seg.begin) / static_cast<double>(n);
        for (std::size_t i = 1; i <= n; ++i) {
            rk4_step(h, seg.active, psi, step);
            const double t = i == n ? seg.end : seg.begin + static_cast<double>(i) * step;
            check_norm(psi, t);
            sample(t);
        }
    }
    return traj;
}

Amplitudes propagate(const SwitchedHamiltonian &h, std::span<const cplx> psi, double t_from,
                     double t_to, EvolutionMethod method, double dt) {
    validate_times(t_from, t_to, dt);
    if (psi.size() != h.dim()) {
        throw DimensionError("propagate: state dimension does not match the Hamiltonian function");
    }
    if (method == EvolutionMethod::automatic) {
        method = h.all_stationary() ? EvolutionMethod::exact : EvolutionMethod::rk4;
    }
    if (method == EvolutionMethod::exact && !h.all_stationary()) {
        throw DomainError("propagate: exact propagation needs stationary generators");
    }
    Amplitudes out(psi.begin(), psi.end());
    for (const auto &seg : segments(h, t_from, t_to)) {
        if (method == EvolutionMethod::exact) {
            const ComplexMatrix m = h.effective_hamiltonian(seg.active, out);
            out = herm_exp(m, -kI * (seg.end - seg.begin)).apply(out);
        } else {
            const std::size_t n = step_count(seg.end - seg.begin, dt);
            const double step = (seg.end - seg.begin) / static_cast<double>(n);
            for (std::size_t i = 1; i <= n; ++i) {
                rk4_step(h, seg.active, out, step);
            }
            check_norm(out, seg.end);
        }
    }
    return out;
}

ComplexMatrix matrix_power(const ComplexMatrix &rho, double q) {
    const bool integer = std::floor(q) == q;
    const auto spec = eigh(rho);
    for (double lambda : spec.values) {
        if (lambda < -1e-12 && !integer) {
            throw DomainError("matrix_power: negative eigenvalue " + std::to_string(lambda) +
                              " with non-integer exponent");
        }
    }
    return spectral_function(spec, [q, integer](double lambda) -> cplx {
        if (!integer && lambda < 0.0) {
            return 0.0;
        }
        if (lambda == 0.0) {
            return q == 0.0 ? 1.0 : 0.0;
        }
        return std::pow(lambda, q);
    });
}

DensityTrajectory integrate_qvn(const ComplexMatrix &h, const DensityMatrix &rho0, double q,
                                double t_end, double dt, double coupling) {
    if (!(q > 0.0) || !std::isfinite(q)) {
        throw DomainError("integrate_qvn: q must be positive");
    }
    if (!h.is_hermitian()) {
        throw DomainError("integrate_qvn: H is not Hermitian");
    }
    if (h.dim() != rho0.dim()) {
        throw DimensionError("integrate_qvn: H and rho0 dimensions differ");
    }
    validate_times(0.0, t_end, dt);

    auto rhs = [&](const ComplexMatrix &rho) {
        const ComplexMatrix p = matrix_power(rho, q);
        ComplexMatrix c = h * p - p * h;
        c *= -kI * coupling;
        return c;
    };

    DensityTrajectory traj;
    traj.metadata = {"rk4", dt, {}, "q-von-Neumann q=" + std::to_string(q), false};
    ComplexMatrix rho = rho0.matrix();
    traj.times.push_back(0.0);
    traj.states.push_back(rho);
    if (t_end == 0.0) {
        return traj;
    }
    const std::size_t n = step_count(t_end, dt);
    const double step = t_end / static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const ComplexMatrix k1 = rhs(rho);
        const ComplexMatrix k2 = rhs(rho + k1 * (0.5 * step));
        const ComplexMatrix k3 = rhs(rho + k2 * (0.5 * step));
        const ComplexMatrix k4 = rhs(rho + k3 * step);
        rho += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (step / 6.0);
        traj.times.push_back(i == n ? t_end : static_cast<double>(i) * step);
        traj.states.push_back(rho);
    }
    return traj;
}

} // namespace nlcorr

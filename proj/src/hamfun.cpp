#include "nlcorr/hamfun.hpp"

#include "nlcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nlcorr {

double kappa(double t, double t_k) {
    if (!(t >= 0.0)) {
        throw DomainError("kappa: t must be non-negative");
    }
    return std::min(t, t_k);
}

// ---------------------------------------------------------------------------
// HamiltonianFunction

HamiltonianFunction::HamiltonianFunction(std::string label, std::size_t dim, Evaluate evaluate,
                                         Gradient gradient, HamiltonianTraits traits)
    : label_(std::move(label)),
      dim_(dim),
      evaluate_(std::move(evaluate)),
      gradient_(std::move(gradient)),
      traits_(traits) {
    if (!evaluate_) {
        throw DomainError("HamiltonianFunction '" + label_ + "': evaluate is required");
    }
}

HamiltonianFunction HamiltonianFunction::linear(const ComplexMatrix &h, std::string label) {
    if (!h.is_hermitian()) {
        throw DomainError("HamiltonianFunction::linear: operator is not Hermitian");
    }
    return HamiltonianFunction(
        std::move(label), h.dim(), [h](const ComplexMatrix &rho) { return expectation(rho, h); },
        [h](const ComplexMatrix &) { return h; }, {.linear = true, .stationary_generator = true});
}

HamiltonianFunction HamiltonianFunction::quadratic_average(double strength, const ComplexMatrix &x,
                                                           std::string label) {
    if (!x.is_hermitian()) {
        throw DomainError("HamiltonianFunction::quadratic_average: operator is not Hermitian");
    }
    return HamiltonianFunction(
        std::move(label), x.dim(),
        [strength, x](const ComplexMatrix &rho) {
            const double avg = expectation(rho, x);
            return 0.5 * strength * avg * avg;
        },
        [strength, x](const ComplexMatrix &rho) { return x * (strength * expectation(rho, x)); },
        {.linear = strength == 0.0, .stationary_generator = true});
}

HamiltonianFunction HamiltonianFunction::mean_field(double strength, std::string label) {
    return HamiltonianFunction(
        std::move(label), 2,
        [strength](const ComplexMatrix &rho) {
            const Vec3 r = bloch_vector(rho);
            return 0.5 * strength * (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
        },
        [strength](const ComplexMatrix &rho) {
            const Vec3 r = bloch_vector(rho);
            return spin_along(r) * strength;
        },
        {.linear = strength == 0.0, .stationary_generator = true});
}

HamiltonianFunction HamiltonianFunction::zero(std::size_t dim) {
    return linear(ComplexMatrix(dim), "zero");
}

void HamiltonianFunction::check_dim(std::size_t d) const {
    if (dim_ != 0 && d != dim_) {
        throw DimensionError("HamiltonianFunction '" + label_ + "' expects dimension " +
                             std::to_string(dim_) + ", got " + std::to_string(d));
    }
}

double HamiltonianFunction::evaluate(const ComplexMatrix &rho) const {
    check_dim(rho.dim());
    return evaluate_(rho);
}

double HamiltonianFunction::evaluate(const StateVector &psi) const {
    return evaluate(ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()));
}

ComplexMatrix HamiltonianFunction::numeric_gradient(const ComplexMatrix &rho, double step) const {
    check_dim(rho.dim());
    const std::size_t n = rho.dim();
    auto directional = [&](const ComplexMatrix &dir) {
        ComplexMatrix plus = rho + dir * step;
        ComplexMatrix minus = rho - dir * step;
        return (evaluate_(plus) - evaluate_(minus)) / (2.0 * step);
    };
    // Tr(M E) for the Hermitian basis E_ii, E_ij + E_ji, i(E_ij - E_ji)
    // gives M_ii, 2 Re M_ij and 2 Im M_ij.
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        ComplexMatrix e(n);
        e(i, i) = 1.0;
        m(i, i) = directional(e);
        for (std::size_t j = i + 1; j < n; ++j) {
            ComplexMatrix sym(n);
            sym(i, j) = 1.0;
            sym(j, i) = 1.0;
            ComplexMatrix anti(n);
            anti(i, j) = cplx(0.0, 1.0);
            anti(j, i) = cplx(0.0, -1.0);
            const double re = 0.5 * directional(sym);
            const double im = 0.5 * directional(anti);
            m(i, j) = {re, im};
            m(j, i) = {re, -im};
        }
    }
    return m;
}

ComplexMatrix HamiltonianFunction::gradient(const ComplexMatrix &rho) const {
    check_dim(rho.dim());
    if (gradient_) {
        return gradient_(rho);
    }
    ComplexMatrix fine = numeric_gradient(rho, kFiniteDifferenceStep);
    const ComplexMatrix coarse = numeric_gradient(rho, 2.0 * kFiniteDifferenceStep);
    double scale = 1.0;
    for (const auto &z : fine.data()) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw NumericalError("HamiltonianFunction '" + label_ +
                                 "': finite-difference gradient is not finite");
        }
        scale = std::max(scale, std::abs(z));
    }
    if (fine.max_abs_diff(coarse) > 1e-6 * scale) {
        throw NumericalError("HamiltonianFunction '" + label_ +
                             "': finite-difference gradient did not converge");
    }
    return fine;
}

HamiltonianFunction operator+(const HamiltonianFunction &a, const HamiltonianFunction &b) {
    if (a.dim_ != 0 && b.dim_ != 0 && a.dim_ != b.dim_) {
        throw DimensionError("HamiltonianFunction sum: dimensions differ");
    }
    HamiltonianFunction::Gradient grad;
    if (a.gradient_ && b.gradient_) {
        grad = [ga = a.gradient_, gb = b.gradient_](const ComplexMatrix &rho) {
            return ga(rho) + gb(rho);
        };
    }
    const bool linear = a.traits_.linear && b.traits_.linear;
    return HamiltonianFunction(
        a.label_ + "+" + b.label_, std::max(a.dim_, b.dim_),
        [ea = a.evaluate_, eb = b.evaluate_](const ComplexMatrix &rho) { return ea(rho) + eb(rho); },
        std::move(grad), {.linear = linear, .stationary_generator = linear});
}

// ---------------------------------------------------------------------------
// Acceptability and gradients

bool check_acceptable(const AmplitudeFunction &f, std::size_t trials, std::size_t dim,
                      std::uint64_t seed) {
    if (trials == 0) {
        throw DomainError("check_acceptable: trials must be at least 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (std::size_t k = 0; k < trials; ++k) {
        const StateVector psi = random_state(dim, rng);
        const cplx phase = std::polar(1.0, angle(rng));
        Amplitudes rotated = psi.amplitudes();
        for (auto &z : rotated) {
            z *= phase;
        }
        if (std::abs(f(rotated) - f(psi.amplitudes())) > 1e-9) {
            return false;
        }
    }
    return true;
}

bool check_acceptable(const HamiltonianFunction &h, std::size_t trials, std::size_t dim,
                      std::uint64_t seed) {
    return check_acceptable(
        [&h](std::span<const cplx> psi) { return h.evaluate(ComplexMatrix::outer(psi, psi)); },
        trials, dim, seed);
}

ComplexMatrix effective_hamiltonian(const HamiltonianFunction &h, const StateVector &psi) {
    return h.gradient(ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()));
}

Amplitudes amplitude_gradient_fd(const AmplitudeFunction &f, std::span<const cplx> psi,
                                 double step) {
    Amplitudes out(psi.size());
    Amplitudes work(psi.begin(), psi.end());
    for (std::size_t k = 0; k < psi.size(); ++k) {
        const cplx orig = work[k];
        work[k] = orig + step;
        const double xp = f(work);
        work[k] = orig - step;
        const double xm = f(work);
        work[k] = orig + cplx(0.0, step);
        const double yp = f(work);
        work[k] = orig - cplx(0.0, step);
        const double ym = f(work);
        work[k] = orig;
        // d/dpsi^* = (d/dx + i d/dy) / 2
        out[k] = 0.5 * cplx((xp - xm) / (2.0 * step), (yp - ym) / (2.0 * step));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Schedules and the switched extension

SwitchingSchedule SwitchingSchedule::never(std::vector<std::size_t> dims) {
    SwitchingSchedule s;
    s.detection_times.assign(dims.size(), kNever);
    s.subsystem_dims = std::move(dims);
    return s;
}

void SwitchingSchedule::validate() const {
    if (detection_times.size() != subsystem_dims.size()) {
        throw DimensionError("SwitchingSchedule: one detection time per subsystem is required");
    }
    for (double t : detection_times) {
        if (std::isnan(t) || t < 0.0 || t == -kNever) {
            throw DomainError("SwitchingSchedule: detection times must be >= 0 or never");
        }
    }
    for (auto d : subsystem_dims) {
        if (d == 0) {
            throw DimensionError("SwitchingSchedule: subsystem dimensions must be positive");
        }
    }
}

SwitchedHamiltonian::SwitchedHamiltonian(std::vector<HamiltonianFunction> terms,
                                         SwitchingSchedule schedule)
    : terms_(std::move(terms)), schedule_(std::move(schedule)) {
    schedule_.validate();
    if (terms_.size() != schedule_.subsystem_dims.size()) {
        throw DimensionError("polchinski_extend: " + std::to_string(terms_.size()) +
                             " Hamiltonian functions for " +
                             std::to_string(schedule_.subsystem_dims.size()) + " subsystems");
    }
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const std::size_t d = schedule_.subsystem_dims[k];
        if (terms_[k].dim() != 0 && terms_[k].dim() != d) {
            throw DimensionError("polchinski_extend: term '" + terms_[k].label() +
                                 "' has dimension " + std::to_string(terms_[k].dim()) +
                                 ", subsystem has " + std::to_string(d));
        }
        dim_ *= d;
    }
}

std::vector<bool> SwitchedHamiltonian::active_at(double t) const {
    std::vector<bool> active(terms_.size());
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        active[k] = theta(t - schedule_.detection_times[k]) == 1;
    }
    return active;
}

std::vector<double> SwitchedHamiltonian::switch_times() const {
    std::vector<double> out;
    for (double t : schedule_.detection_times) {
        if (std::isfinite(t)) {
            out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double SwitchedHamiltonian::evaluate(double t, const ComplexMatrix &rho) const {
    if (rho.dim() != dim_) {
        throw DimensionError("SwitchedHamiltonian: state dimension mismatch");
    }
    const auto active = active_at(t);
    double e = 0.0;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        if (active[k]) {
            e += terms_[k].evaluate(partial_trace(rho, schedule_.subsystem_dims, k));
        }
    }
    return e;
}

ComplexMatrix SwitchedHamiltonian::gradient(double t, const ComplexMatrix &rho) const {
    if (rho.dim() != dim_) {
        throw DimensionError("SwitchedHamiltonian: state dimension mismatch");
    }
    const auto active = active_at(t);
    ComplexMatrix m(dim_);
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        if (active[k]) {
            const ComplexMatrix local = terms_[k].gradient(partial_trace(rho, schedule_.subsystem_dims, k));
            m += embed(local, schedule_.subsystem_dims, k);
        }
    }
    return m;
}

ComplexMatrix SwitchedHamiltonian::effective_hamiltonian(const std::vector<bool> &active,
                                                         std::span<const cplx> psi) const {
    if (psi.size() != dim_) {
        throw DimensionError("SwitchedHamiltonian: state dimension mismatch");
    }
    if (active.size() != terms_.size()) {
        throw DimensionError("SwitchedHamiltonian: active set size mismatch");
    }
    ComplexMatrix m(dim_);
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        if (active[k]) {
            const ComplexMatrix local = terms_[k].gradient(partial_trace(psi, schedule_.subsystem_dims, k));
            m += embed(local, schedule_.subsystem_dims, k);
        }
    }
    return m;
}

ComplexMatrix SwitchedHamiltonian::effective_hamiltonian(double t, std::span<const cplx> psi) const {
    return effective_hamiltonian(active_at(t), psi);
}

bool SwitchedHamiltonian::all_linear() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto &h) { return h.traits().linear; });
}

bool SwitchedHamiltonian::all_stationary() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto &h) { return h.traits().stationary_generator; });
}

bool SwitchedHamiltonian::uses_numeric_gradient() const {
    return std::any_of(terms_.begin(), terms_.end(),
                       [](const auto &h) { return !h.has_analytic_gradient(); });
}

std::string SwitchedHamiltonian::label() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        if (k) {
            os << " | ";
        }
        os << terms_[k].label();
    }
    return os.str();
}

SwitchedHamiltonian SwitchedHamiltonian::with_schedule(SwitchingSchedule schedule) const {
    return SwitchedHamiltonian(terms_, std::move(schedule));
}

SwitchedHamiltonian polchinski_extend(std::vector<HamiltonianFunction> h_list,
                                      std::vector<std::size_t> dims, SwitchingSchedule schedule) {
    if (schedule.subsystem_dims.empty()) {
        schedule.subsystem_dims = dims;
    }
    if (schedule.subsystem_dims != dims) {
        throw DimensionError("polchinski_extend: schedule dimensions differ from subsystem dimensions");
    }
    return SwitchedHamiltonian(std::move(h_list), std::move(schedule));
}

SwitchedHamiltonian as_composite(const HamiltonianFunction &h, std::size_t dim) {
    return SwitchedHamiltonian({h}, SwitchingSchedule::never({dim}));
}

} // namespace nlcorr

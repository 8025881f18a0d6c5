#pragma once

/**
 * @file hamfun.hpp
 * Hamiltonian functions H(rho) generating nonlinear Schroedinger flows
 * i dpsi/dt = dH/dpsi^*, the phase-invariance (acceptability) test,
 * effective Hamiltonian operators, and the switched multiparticle extension
 * built from reduced density matrices.
 */

#include "nlcorr/qstate.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace nlcorr {

inline constexpr double kNever = std::numeric_limits<double>::infinity();
inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Switching-off factor: 1 for x < 0, 0 otherwise (theta(0) = 0).
constexpr int theta(double x) noexcept { return x < 0.0 ? 1 : 0; }

/// Integral of theta(tau - t_k) over [0, t], i.e. min(t, t_k).
double kappa(double t, double t_k);

/// Structural facts about a Hamiltonian function that the integrators use.
struct HamiltonianTraits {
    /// H(rho) = Tr(rho H) for a fixed Hermitian H.
    bool linear = false;
    /// The effective Hamiltonian is a constant of the flow it generates, so
    /// segments with a fixed active set can be propagated exactly.
    bool stationary_generator = false;
};

/// Real function of a (Hermitian) density operator. `evaluate` and
/// `gradient` receive arbitrary Hermitian matrices, not only states: the
/// finite-difference gradient perturbs off the state manifold.
///
/// The gradient is the Hermitian M with dH = Tr(M drho); on a pure state it
/// is the effective Hamiltonian, i dpsi/dt = M psi.
class HamiltonianFunction {
  public:
    using Evaluate = std::function<double(const ComplexMatrix &)>;
    using Gradient = std::function<ComplexMatrix(const ComplexMatrix &)>;

    /// `dim` = 0 accepts any dimension. An empty `gradient` selects the
    /// finite-difference fallback.
    HamiltonianFunction(std::string label, std::size_t dim, Evaluate evaluate,
                        Gradient gradient = {}, HamiltonianTraits traits = {});

    /// <H> = Tr(rho H).
    static HamiltonianFunction linear(const ComplexMatrix &h, std::string label = "linear");
    /// strength * Tr(rho X)^2 / 2, gradient strength * Tr(rho X) X.
    static HamiltonianFunction quadratic_average(double strength, const ComplexMatrix &x,
                                                 std::string label = "quadratic");
    /// Spin-1/2 mean field: strength * |Tr(rho sigma)|^2 / 2, gradient
    /// strength * Tr(rho sigma).sigma.
    static HamiltonianFunction mean_field(double strength, std::string label = "mean-field");
    static HamiltonianFunction zero(std::size_t dim);

    [[nodiscard]] double evaluate(const ComplexMatrix &rho) const;
    [[nodiscard]] double evaluate(const StateVector &psi) const;
    /// Analytic when available, otherwise central differences with step
    /// kFiniteDifferenceStep cross-checked against step 2*kFiniteDifferenceStep.
    [[nodiscard]] ComplexMatrix gradient(const ComplexMatrix &rho) const;
    /// Central-difference gradient regardless of analytic availability.
    [[nodiscard]] ComplexMatrix numeric_gradient(const ComplexMatrix &rho,
                                                 double step = kFiniteDifferenceStep) const;

    [[nodiscard]] bool has_analytic_gradient() const noexcept { return static_cast<bool>(gradient_); }
    [[nodiscard]] const std::string &label() const noexcept { return label_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const HamiltonianTraits &traits() const noexcept { return traits_; }

    /// Pointwise sum; the gradient is analytic iff both are.
    friend HamiltonianFunction operator+(const HamiltonianFunction &a, const HamiltonianFunction &b);

  private:
    void check_dim(std::size_t d) const;

    std::string label_;
    std::size_t dim_;
    Evaluate evaluate_;
    Gradient gradient_;
    HamiltonianTraits traits_;
};

/// Function of the raw amplitudes (psi, psi^*), possibly not phase invariant.
using AmplitudeFunction = std::function<double(std::span<const cplx>)>;

/// Phase-invariance test: true iff |f(e^{ia} psi) - f(psi)| <= 1e-9 on
/// `trials` random (psi, a) pairs. Probabilistic: a function that is
/// invariant on every sampled pair but not globally is falsely accepted.
bool check_acceptable(const AmplitudeFunction &f, std::size_t trials, std::size_t dim,
                      std::uint64_t seed = 0x5eed);
bool check_acceptable(const HamiltonianFunction &h, std::size_t trials, std::size_t dim,
                      std::uint64_t seed = 0x5eed);

/// M(psi) with i dpsi/dt = M psi.
ComplexMatrix effective_hamiltonian(const HamiltonianFunction &h, const StateVector &psi);

/// dH(|psi><psi|)/dpsi^* via central differences in Re/Im of each amplitude.
/// Test oracle for effective_hamiltonian(h, psi) * psi.
Amplitudes amplitude_gradient_fd(const AmplitudeFunction &f, std::span<const cplx> psi,
                                 double step = kFiniteDifferenceStep);

/// Per-subsystem detection times; kNever means the subsystem is never
/// detected.
struct SwitchingSchedule {
    std::vector<double> detection_times;
    std::vector<std::size_t> subsystem_dims;

    static SwitchingSchedule never(std::vector<std::size_t> dims);
    /// Throws DomainError for negative or NaN times, DimensionError when the
    /// two lists differ in length.
    void validate() const;
};

/// Time-dependent composite Hamiltonian function
///   H(t, rho) = sum_k theta(t - t_k) H_k(Tr_{not k} rho).
class SwitchedHamiltonian {
  public:
    SwitchedHamiltonian(std::vector<HamiltonianFunction> terms, SwitchingSchedule schedule);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t subsystems() const noexcept { return terms_.size(); }
    [[nodiscard]] const std::vector<HamiltonianFunction> &terms() const noexcept { return terms_; }
    [[nodiscard]] const SwitchingSchedule &schedule() const noexcept { return schedule_; }

    /// Which terms are switched on at time t.
    [[nodiscard]] std::vector<bool> active_at(double t) const;
    /// Finite detection times, sorted and deduplicated.
    [[nodiscard]] std::vector<double> switch_times() const;

    [[nodiscard]] double evaluate(double t, const ComplexMatrix &rho) const;
    [[nodiscard]] ComplexMatrix gradient(double t, const ComplexMatrix &rho) const;
    /// Effective Hamiltonian with an explicit active set; used by integrators
    /// that hold the active set fixed over a segment.
    [[nodiscard]] ComplexMatrix effective_hamiltonian(const std::vector<bool> &active,
                                                      std::span<const cplx> psi) const;
    [[nodiscard]] ComplexMatrix effective_hamiltonian(double t, std::span<const cplx> psi) const;

    [[nodiscard]] bool all_linear() const;
    [[nodiscard]] bool all_stationary() const;
    [[nodiscard]] bool uses_numeric_gradient() const;
    [[nodiscard]] std::string label() const;

    /// Same terms with a different schedule.
    [[nodiscard]] SwitchedHamiltonian with_schedule(SwitchingSchedule schedule) const;

  private:
    std::vector<HamiltonianFunction> terms_;
    SwitchingSchedule schedule_;
    std::size_t dim_ = 1;
};

/// Builds the switched multiparticle extension; one function per subsystem.
SwitchedHamiltonian polchinski_extend(std::vector<HamiltonianFunction> h_list,
                                      std::vector<std::size_t> dims, SwitchingSchedule schedule);

/// Single-system function viewed as an always-on composite.
SwitchedHamiltonian as_composite(const HamiltonianFunction &h, std::size_t dim);

} // namespace nlcorr

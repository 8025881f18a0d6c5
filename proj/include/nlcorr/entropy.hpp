#pragma once

/**
 * @file entropy.hpp
 * Information measures and nonlinear averages: Shannon and Hartley
 * information, Kolmogorov-Nagumo averages, Renyi and Tsallis entropies,
 * escort distributions and the q-internal energy.
 *
 * Conventions: 0 log(1/0) = 0 and 0^q = 0 for q > 0. Log bases are explicit.
 */

#include "nlcorr/qstate.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nlcorr {

class ProbabilityDistribution {
  public:
    /// Throws DomainError unless weights sum to 1 within 1e-12 and none is
    /// below -1e-14 (tiny negatives are clamped to zero).
    explicit ProbabilityDistribution(std::vector<double> weights);
    ProbabilityDistribution(std::initializer_list<double> weights)
        : ProbabilityDistribution(std::vector<double>(weights)) {}

    /// Empirical distribution N_k / N.
    static ProbabilityDistribution from_counts(const std::vector<std::size_t> &counts);
    static ProbabilityDistribution uniform(std::size_t n);
    /// Joint distribution of two independent variables, row-major.
    static ProbabilityDistribution product(const ProbabilityDistribution &a,
                                           const ProbabilityDistribution &b);

    [[nodiscard]] std::size_t size() const noexcept { return w_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return w_[i]; }
    [[nodiscard]] const std::vector<double> &weights() const noexcept { return w_; }

  private:
    std::vector<double> w_;
};

/// Strictly monotonic phi with its inverse.
struct KNFunction {
    std::function<double(double)> forward;
    std::function<double(double)> inverse;
    std::string label;
    /// Domain test for arguments of `forward`; empty means all reals.
    std::function<bool(double)> domain;

    static KNFunction linear();
    /// phi(x) = x^p on x >= 0, p > 0.
    static KNFunction power(double p);
    /// phi(x) = base^{(1 - alpha) x}, alpha != 1.
    static KNFunction exponential(double alpha, double base);
    /// a phi + b with a != 0.
    [[nodiscard]] KNFunction affine(double a, double b) const;
};

enum class LimitMode {
    strict, ///< the singular parameter value throws DomainError
    limit,  ///< the singular parameter value returns the Shannon limit
};

/// sum_k p_k log_base(1/p_k).
double shannon_entropy(const ProbabilityDistribution &p, double base = 2.0);

/// phi^{-1}(sum_k p_k phi(x_k)).
double kn_average(const std::vector<double> &values, const ProbabilityDistribution &p,
                  const KNFunction &phi);

/// log_base(sum_k p_k^alpha) / (1 - alpha).
double renyi_entropy(const ProbabilityDistribution &p, double alpha, double base = 2.0,
                     LimitMode mode = LimitMode::strict);

/// phi^{-1}(Tr(rho phi(obs))) with phi applied spectrally to obs.
double kn_quantum_average(const ComplexMatrix &rho, const ComplexMatrix &obs, const KNFunction &phi);
double kn_quantum_average(const DensityMatrix &rho, const ComplexMatrix &obs, const KNFunction &phi);

/// Both sides of (p+ - p-)^2 = phi^{-1}(phi(9) p+ + phi(1) p-) - 4(p+ - p-) - 4
/// with phi(x) = sqrt(x) and p- = 1 - p+.
struct KNDecomposition {
    double lhs;
    double rhs;
};
KNDecomposition kn_decomposition_check(double p_plus);

/// (sum_k p_k^q - 1) / (1 - q); Shannon in natural log at q = 1 in limit mode.
double tsallis_entropy(const ProbabilityDistribution &p, double q, LimitMode mode = LimitMode::strict);

/// P_k = p_k^q / sum_j p_j^q.
ProbabilityDistribution escort_distribution(const ProbabilityDistribution &p, double q);

/// Escort-weighted mean of `energies`.
double q_internal_energy(const ProbabilityDistribution &p, const std::vector<double> &energies, double q);

} // namespace nlcorr

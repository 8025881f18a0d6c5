#include "nlcorr/entropy.hpp"

#include "nlcorr/error.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace nlcorr {

namespace {

double pow0(double p, double q) { return p == 0.0 ? 0.0 : std::pow(p, q); }

void check_base(double base) {
    if (!(base > 1.0) || !std::isfinite(base)) {
        throw DomainError("log base must be finite and greater than 1");
    }
}

void check_domain(const KNFunction &phi, double x) {
    if (!std::isfinite(x) || (phi.domain && !phi.domain(x))) {
        throw DomainError("KN average: value " + std::to_string(x) + " outside the domain of " + phi.label);
    }
}

} // namespace

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) {
        throw DomainError("ProbabilityDistribution: no weights");
    }
    double sum = 0.0;
    for (auto &w : w_) {
        if (!std::isfinite(w) || w < -1e-14) {
            throw DomainError("ProbabilityDistribution: negative or non-finite weight");
        }
        w = std::max(w, 0.0);
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw DomainError("ProbabilityDistribution: weights sum to " + std::to_string(sum));
    }
}

ProbabilityDistribution ProbabilityDistribution::from_counts(const std::vector<std::size_t> &counts) {
    const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
    if (total == 0.0) {
        throw DomainError("ProbabilityDistribution: all counts are zero");
    }
    std::vector<double> w;
    w.reserve(counts.size());
    for (auto c : counts) {
        w.push_back(static_cast<double>(c) / total);
    }
    return ProbabilityDistribution(std::move(w));
}

ProbabilityDistribution ProbabilityDistribution::uniform(std::size_t n) {
    if (n == 0) {
        throw DomainError("ProbabilityDistribution: uniform over zero outcomes");
    }
    return ProbabilityDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbabilityDistribution ProbabilityDistribution::product(const ProbabilityDistribution &a,
                                                         const ProbabilityDistribution &b) {
    std::vector<double> w;
    w.reserve(a.size() * b.size());
    for (double x : a.w_) {
        for (double y : b.w_) {
            w.push_back(x * y);
        }
    }
    return ProbabilityDistribution(std::move(w));
}

KNFunction KNFunction::linear() {
    return {[](double x) { return x; }, [](double y) { return y; }, "linear", {}};
}

KNFunction KNFunction::power(double p) {
    if (!(p > 0.0)) {
        throw DomainError("KNFunction::power: exponent must be positive");
    }
    return {[p](double x) { return std::pow(x, p); }, [p](double y) { return std::pow(y, 1.0 / p); },
            "power(" + std::to_string(p) + ")", [](double x) { return x >= 0.0; }};
}

KNFunction KNFunction::exponential(double alpha, double base) {
    check_base(base);
    if (alpha == 1.0) {
        throw DomainError("KNFunction::exponential: alpha = 1 is the linear case");
    }
    const double k = (1.0 - alpha) * std::log(base);
    return {[k](double x) { return std::exp(k * x); }, [k](double y) { return std::log(y) / k; },
            "exponential(" + std::to_string(alpha) + ")", {}};
}

KNFunction KNFunction::affine(double a, double b) const {
    if (a == 0.0) {
        throw DomainError("KNFunction::affine: scale must be non-zero");
    }
    return {[f = forward, a, b](double x) { return a * f(x) + b; },
            [g = inverse, a, b](double y) { return g((y - b) / a); }, label + " affine", domain};
}

double shannon_entropy(const ProbabilityDistribution &p, double base) {
    check_base(base);
    double s = 0.0;
    for (double w : p.weights()) {
        if (w > 0.0) {
            s -= w * std::log(w);
        }
    }
    return s / std::log(base);
}

double kn_average(const std::vector<double> &values, const ProbabilityDistribution &p,
                  const KNFunction &phi) {
    if (values.size() != p.size()) {
        throw DimensionError("kn_average: values and probabilities differ in length");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (p[k] == 0.0) {
            continue;
        }
        check_domain(phi, values[k]);
        acc += p[k] * phi.forward(values[k]);
    }
    return phi.inverse(acc);
}

namespace {

// Near q = 1, sum_k p_k^q - 1 is formed as sum_k p_k expm1((q-1) ln p_k):
// no cancellation, and the normalization slack of the weights drops out.
constexpr double kNearOne = 0.5;

double power_sum(const ProbabilityDistribution &p, double q) {
    double sum = 0.0;
    for (double w : p.weights()) {
        sum += pow0(w, q);
    }
    return sum;
}

double power_sum_deficit(const ProbabilityDistribution &p, double q) {
    if (std::abs(q - 1.0) >= kNearOne) {
        return power_sum(p, q) - 1.0;
    }
    double sum = 0.0;
    for (double w : p.weights()) {
        if (w > 0.0) {
            sum += w * std::expm1((q - 1.0) * std::log(w));
        }
    }
    return sum;
}

double log_power_sum(const ProbabilityDistribution &p, double q) {
    return std::abs(q - 1.0) < kNearOne ? std::log1p(power_sum_deficit(p, q)) : std::log(power_sum(p, q));
}

} // namespace

double renyi_entropy(const ProbabilityDistribution &p, double alpha, double base, LimitMode mode) {
    check_base(base);
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("renyi_entropy: alpha must be positive");
    }
    if (alpha == 1.0) {
        if (mode == LimitMode::strict) {
            throw DomainError("renyi_entropy: alpha = 1 requires limit mode");
        }
        return shannon_entropy(p, base);
    }
    return log_power_sum(p, alpha) / std::log(base) / (1.0 - alpha);
}

double kn_quantum_average(const ComplexMatrix &rho, const ComplexMatrix &obs, const KNFunction &phi) {
    const auto spec = eigh(obs);
    for (double lambda : spec.values) {
        check_domain(phi, lambda);
    }
    const ComplexMatrix phi_obs = spectral_function(spec, [&phi](double x) -> cplx { return phi.forward(x); });
    return phi.inverse(expectation(rho, phi_obs));
}

double kn_quantum_average(const DensityMatrix &rho, const ComplexMatrix &obs, const KNFunction &phi) {
    return kn_quantum_average(rho.matrix(), obs, phi);
}

KNDecomposition kn_decomposition_check(double p_plus) {
    if (!(p_plus >= 0.0 && p_plus <= 1.0)) {
        throw DomainError("kn_decomposition_check: p+ must lie in [0,1]");
    }
    const double p_minus = 1.0 - p_plus;
    const ProbabilityDistribution p{p_plus, p_minus};
    const double diff = p_plus - p_minus;
    const double kn = kn_average({9.0, 1.0}, p, KNFunction::power(0.5));
    return {diff * diff, kn - 4.0 * diff - 4.0};
}

double tsallis_entropy(const ProbabilityDistribution &p, double q, LimitMode mode) {
    if (!std::isfinite(q)) {
        throw DomainError("tsallis_entropy: q must be finite");
    }
    if (q == 1.0) {
        if (mode == LimitMode::strict) {
            throw DomainError("tsallis_entropy: q = 1 requires limit mode");
        }
        return shannon_entropy(p, std::numbers::e);
    }
    return power_sum_deficit(p, q) / (1.0 - q);
}

ProbabilityDistribution escort_distribution(const ProbabilityDistribution &p, double q) {
    if (!(q > 0.0) || !std::isfinite(q)) {
        throw DomainError("escort_distribution: q must be positive");
    }
    std::vector<double> w(p.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        w[k] = pow0(p[k], q);
        sum += w[k];
    }
    if (!(sum > 0.0)) {
        throw DomainError("escort_distribution: all weights are zero");
    }
    for (auto &x : w) {
        x /= sum;
    }
    // Renormalize away the rounding of the division above.
    const double again = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto &x : w) {
        x /= again;
    }
    return ProbabilityDistribution(std::move(w));
}

double q_internal_energy(const ProbabilityDistribution &p, const std::vector<double> &energies, double q) {
    if (energies.size() != p.size()) {
        throw DimensionError("q_internal_energy: energies and probabilities differ in length");
    }
    const ProbabilityDistribution escort = escort_distribution(p, q);
    double e = 0.0;
    for (std::size_t k = 0; k < energies.size(); ++k) {
        e += escort[k] * energies[k];
    }
    return e;
}

} // namespace nlcorr

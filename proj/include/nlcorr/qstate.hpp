#pragma once

/**
 * @file qstate.hpp
 * Dense complex linear algebra for few-qubit systems: operators, pure and
 * mixed states, tensor products, partial traces, spin projectors and spectral
 * functions of Hermitian matrices.
 *
 * Storage is dense and row-major. Everything here is a value type; all
 * operations are pure.
 */

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace nlcorr {

using cplx = std::complex<double>;
using Amplitudes = std::vector<cplx>;
using Vec3 = std::array<double, 3>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kNormTol = 1e-9;
inline constexpr double kImagResidueTol = 1e-10;

/// Square complex matrix, row-major.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<cplx> entries);
    /// Row-by-row literal; the number of rows fixes the dimension.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const cplx> diag);
    static ComplexMatrix diagonal(std::span<const double> diag);
    /// |a><b|
    static ComplexMatrix outer(std::span<const cplx> a, std::span<const cplx> b);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] bool empty() const noexcept { return dim_ == 0; }

    cplx &operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const {
        return data_[r * dim_ + c];
    }
    [[nodiscard]] std::span<const cplx> data() const noexcept { return data_; }

    [[nodiscard]] ComplexMatrix adjoint() const;
    [[nodiscard]] ComplexMatrix transpose() const;
    [[nodiscard]] cplx trace() const;
    [[nodiscard]] double frobenius_norm() const;
    [[nodiscard]] bool is_hermitian(double tol = kHermitianTol) const;
    /// Largest |a_ij - b_ij|; throws DimensionError on size mismatch.
    [[nodiscard]] double max_abs_diff(const ComplexMatrix &other) const;

    ComplexMatrix &operator+=(const ComplexMatrix &rhs);
    ComplexMatrix &operator-=(const ComplexMatrix &rhs);
    ComplexMatrix &operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);

    /// Matrix-vector product.
    [[nodiscard]] Amplitudes apply(std::span<const cplx> v) const;

  private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

/// Normalized pure state.
class StateVector {
  public:
    /// Throws DomainError unless | ||v|| - 1 | <= kNormTol.
    explicit StateVector(Amplitudes amplitudes);
    StateVector(std::initializer_list<cplx> amplitudes)
        : StateVector(Amplitudes(amplitudes)) {}

    /// Rescales to unit norm; throws DomainError for the zero vector.
    static StateVector normalized(Amplitudes amplitudes);
    /// Wraps evolved amplitudes whose norm is monitored elsewhere.
    static StateVector assume_normalized(Amplitudes amplitudes);

    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    [[nodiscard]] const Amplitudes &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] const cplx &operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] double norm() const;

  private:
    struct Unchecked {};
    StateVector(Amplitudes amplitudes, Unchecked) : amps_(std::move(amplitudes)) {}
    Amplitudes amps_;
};

/// Hermitian, positive, unit-trace matrix.
class DensityMatrix {
  public:
    /// Validates Hermiticity (1e-12), trace (1e-12) and positivity (-1e-10).
    explicit DensityMatrix(ComplexMatrix m);
    static DensityMatrix pure(const StateVector &psi);
    /// (I + r.sigma)/2 for |r| <= 1.
    static DensityMatrix from_bloch(const Vec3 &r);

    [[nodiscard]] std::size_t dim() const noexcept { return m_.dim(); }
    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return m_; }
    const cplx &operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  private:
    ComplexMatrix m_;
};

// Named operators.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
/// a.sigma for an arbitrary real 3-vector.
ComplexMatrix spin_along(const Vec3 &a);

// States used throughout the experiments.
/// (|+>|-> - |->|+>)/sqrt(2) in the sigma_z basis.
StateVector singlet_state();
/// (1/3)|1>|2> - (2 sqrt2/3)|2>|1>, |1> = (cos pi/8, sin pi/8), |2> = (-sin pi/8, cos pi/8).
StateVector example_pair_state();
/// Haar-distributed pure state.
StateVector random_state(std::size_t dim, std::mt19937_64 &rng);
/// Random Hermitian matrix with entries of order `scale`.
ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64 &rng, double scale = 1.0);
/// Uniformly distributed unit 3-vector.
Vec3 random_direction(std::mt19937_64 &rng);

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
Amplitudes kron(std::span<const cplx> a, std::span<const cplx> b);

/// Embeds `op` as the `index`-th factor of I (x) ... (x) op (x) ... (x) I.
ComplexMatrix embed(const ComplexMatrix &op, std::span<const std::size_t> dims, std::size_t index);

/// Reduced matrix of subsystem `keep` (0-based) for a multipartite operator
/// with subsystem dimensions `dims`. No positivity or trace checks.
ComplexMatrix partial_trace(const ComplexMatrix &rho, std::span<const std::size_t> dims,
                            std::size_t keep);
/// Reduced matrix of the pure state |psi><psi| without forming the projector.
ComplexMatrix partial_trace(std::span<const cplx> psi, std::span<const std::size_t> dims,
                            std::size_t keep);

/// Bipartite reduced density matrix; `keep` is 1 or 2.
DensityMatrix partial_trace(const DensityMatrix &rho, std::pair<std::size_t, std::size_t> dims,
                            int keep);

/// Eigen-decomposition of a Hermitian matrix. Eigenvectors are the columns of
/// `vectors`; eigenvalues are sorted ascending.
struct SpectralDecomposition {
    std::vector<double> values;
    ComplexMatrix vectors;
};

/// Cyclic complex Jacobi. Throws DomainError for non-Hermitian input and
/// NumericalError when the sweep limit is hit.
SpectralDecomposition eigh(const ComplexMatrix &h);

/// V f(Lambda) V^dagger.
ComplexMatrix spectral_function(const ComplexMatrix &h, const std::function<cplx(double)> &f);
ComplexMatrix spectral_function(const SpectralDecomposition &spec,
                                const std::function<cplx(double)> &f);

/// exp(scale * h) for Hermitian h.
ComplexMatrix herm_exp(const ComplexMatrix &h, cplx scale);

cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm(std::span<const cplx> v);

/// <psi|obs|psi> / Tr(rho obs). Throws DimensionError on mismatch and
/// NumericalError when the imaginary residue exceeds kImagResidueTol.
double expectation(std::span<const cplx> psi, const ComplexMatrix &obs);
double expectation(const StateVector &psi, const ComplexMatrix &obs);
double expectation(const ComplexMatrix &rho, const ComplexMatrix &obs);
double expectation(const DensityMatrix &rho, const ComplexMatrix &obs);

/// E+ = (I + a.sigma)/2, E- = (I - a.sigma)/2 for a unit direction a.
std::pair<ComplexMatrix, ComplexMatrix> projector(const Vec3 &direction);

/// Bloch vector Tr(rho sigma) of a 2x2 matrix.
Vec3 bloch_vector(const ComplexMatrix &rho);

} // namespace nlcorr

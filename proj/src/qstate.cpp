#include "nlcorr/qstate.hpp"

#include "nlcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace nlcorr {

namespace {

void require_same_dim(const ComplexMatrix &a, const ComplexMatrix &b, const char *what) {
    if (a.dim() != b.dim()) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" +
                             std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
}

std::size_t product(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

// Splits the composite dimension around subsystem `keep`.
struct Split {
    std::size_t before;
    std::size_t local;
    std::size_t after;
};

Split split_dims(std::span<const std::size_t> dims, std::size_t keep) {
    if (keep >= dims.size()) {
        throw DimensionError("subsystem index " + std::to_string(keep) + " out of range");
    }
    for (auto d : dims) {
        if (d == 0) {
            throw DimensionError("subsystem dimension must be positive");
        }
    }
    return {product(dims.first(keep)), dims[keep], product(dims.subspan(keep + 1))};
}

} // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (data_.size() != dim_ * dim_) {
        throw DimensionError("ComplexMatrix: expected " + std::to_string(dim_ * dim_) +
                             " entries, got " + std::to_string(data_.size()));
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()) {
    data_.reserve(dim_ * dim_);
    for (const auto &row : rows) {
        if (row.size() != dim_) {
            throw DimensionError("ComplexMatrix: literal is not square");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        m(i, i) = diag[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        m(i, i) = diag[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) {
        throw DimensionError("outer: vector sizes differ");
    }
    ComplexMatrix m(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < b.size(); ++c) {
            m(r, c) = a[r] * std::conj(b[c]);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            m(c, r) = std::conj((*this)(r, c));
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            m(c, r) = (*this)(r, c);
        }
    }
    return m;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto &z : data_) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

bool ComplexMatrix::is_hermitian(double tol) const {
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) {
                return false;
            }
        }
    }
    return true;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix &other) const {
    require_same_dim(*this, other, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        m = std::max(m, std::abs(data_[i] - other.data_[i]));
    }
    return m;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &rhs) {
    require_same_dim(*this, rhs, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += rhs.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &rhs) {
    require_same_dim(*this, rhs, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= rhs.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(cplx s) {
    for (auto &z : data_) {
        z *= s;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a, b, "operator*");
    const std::size_t n = a.dim();
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx ark = a(r, k);
            if (ark == cplx{}) {
                continue;
            }
            for (std::size_t c = 0; c < n; ++c) {
                m(r, c) += ark * b(k, c);
            }
        }
    }
    return m;
}

Amplitudes ComplexMatrix::apply(std::span<const cplx> v) const {
    if (v.size() != dim_) {
        throw DimensionError("apply: vector of size " + std::to_string(v.size()) +
                             " for operator of dimension " + std::to_string(dim_));
    }
    Amplitudes out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        cplx s = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) {
            s += (*this)(r, c) * v[c];
        }
        out[r] = s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// States

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) {
        throw DimensionError("inner: vector sizes differ");
    }
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

double norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto &z : v) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

StateVector::StateVector(Amplitudes amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) {
        throw DimensionError("StateVector: empty amplitude list");
    }
    const double n = nlcorr::norm(amps_);
    if (std::abs(n - 1.0) > kNormTol) {
        throw DomainError("StateVector: norm " + std::to_string(n) + " is not 1");
    }
}

StateVector StateVector::normalized(Amplitudes amplitudes) {
    if (amplitudes.empty()) {
        throw DimensionError("StateVector: empty amplitude list");
    }
    const double n = nlcorr::norm(amplitudes);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DomainError("StateVector: cannot normalize a zero or non-finite vector");
    }
    for (auto &z : amplitudes) {
        z /= n;
    }
    return StateVector(std::move(amplitudes), Unchecked{});
}

StateVector StateVector::assume_normalized(Amplitudes amplitudes) {
    return StateVector(std::move(amplitudes), Unchecked{});
}

double StateVector::norm() const { return nlcorr::norm(amps_); }

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.empty()) {
        throw DimensionError("DensityMatrix: empty matrix");
    }
    if (!m_.is_hermitian(kHermitianTol)) {
        throw DomainError("DensityMatrix: matrix is not Hermitian");
    }
    const cplx tr = m_.trace();
    if (std::abs(tr - 1.0) > kHermitianTol) {
        throw DomainError("DensityMatrix: trace " + std::to_string(tr.real()) + " is not 1");
    }
    const auto spec = eigh(m_);
    if (spec.values.front() < -1e-10) {
        throw DomainError("DensityMatrix: negative eigenvalue " +
                          std::to_string(spec.values.front()));
    }
}

DensityMatrix DensityMatrix::pure(const StateVector &psi) {
    ComplexMatrix m = ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes());
    // A state within kNormTol of unit norm still has to give trace 1 to 1e-12.
    m *= 1.0 / m.trace().real();
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::from_bloch(const Vec3 &r) {
    const double len = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    if (len > 1.0 + 1e-12) {
        throw DomainError("DensityMatrix: Bloch vector longer than 1");
    }
    ComplexMatrix m = ComplexMatrix::identity(2) + spin_along(r);
    m *= 0.5;
    return DensityMatrix(std::move(m));
}

ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return {{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}}; }
ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

ComplexMatrix spin_along(const Vec3 &a) {
    return pauli_x() * a[0] + pauli_y() * a[1] + pauli_z() * a[2];
}

StateVector singlet_state() {
    const double s = std::numbers::sqrt2 / 2.0;
    return StateVector::normalized({0.0, s, -s, 0.0});
}

StateVector example_pair_state() {
    const double c = std::cos(std::numbers::pi / 8.0);
    const double s = std::sin(std::numbers::pi / 8.0);
    const Amplitudes one{c, s};
    const Amplitudes two{-s, c};
    const Amplitudes a = kron(one, two);
    const Amplitudes b = kron(two, one);
    const double wa = 1.0 / 3.0;
    const double wb = 2.0 * std::numbers::sqrt2 / 3.0;
    Amplitudes psi(4);
    for (std::size_t i = 0; i < 4; ++i) {
        psi[i] = wa * a[i] - wb * b[i];
    }
    return StateVector(std::move(psi));
}

StateVector random_state(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Amplitudes a(dim);
    for (auto &z : a) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        z = {re, im};
    }
    return StateVector::normalized(std::move(a));
}

ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64 &rng, double scale) {
    std::normal_distribution<double> gauss(0.0, scale);
    ComplexMatrix m(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        m(r, r) = gauss(rng);
        for (std::size_t c = r + 1; c < dim; ++c) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            m(r, c) = {re, im};
            m(c, r) = {re, -im};
        }
    }
    return m;
}

Vec3 random_direction(std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
        Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
        const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (n > 1e-6) {
            return {v[0] / n, v[1] / n, v[2] / n};
        }
    }
}

// ---------------------------------------------------------------------------
// Tensor structure

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    ComplexMatrix m(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) {
                continue;
            }
            for (std::size_t k = 0; k < nb; ++k) {
                for (std::size_t l = 0; l < nb; ++l) {
                    m(i * nb + k, j * nb + l) = aij * b(k, l);
                }
            }
        }
    }
    return m;
}

Amplitudes kron(std::span<const cplx> a, std::span<const cplx> b) {
    Amplitudes out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < b.size(); ++k) {
            out[i * b.size() + k] = a[i] * b[k];
        }
    }
    return out;
}

ComplexMatrix embed(const ComplexMatrix &op, std::span<const std::size_t> dims, std::size_t index) {
    const Split s = split_dims(dims, index);
    if (op.dim() != s.local) {
        throw DimensionError("embed: operator dimension " + std::to_string(op.dim()) +
                             " does not match subsystem dimension " + std::to_string(s.local));
    }
    return kron(ComplexMatrix::identity(s.before), kron(op, ComplexMatrix::identity(s.after)));
}

ComplexMatrix partial_trace(const ComplexMatrix &rho, std::span<const std::size_t> dims,
                            std::size_t keep) {
    const Split s = split_dims(dims, keep);
    if (rho.dim() != s.before * s.local * s.after) {
        throw DimensionError("partial_trace: operator dimension " + std::to_string(rho.dim()) +
                             " does not match subsystem dimensions");
    }
    ComplexMatrix red(s.local);
    for (std::size_t x = 0; x < s.local; ++x) {
        for (std::size_t y = 0; y < s.local; ++y) {
            cplx acc = 0.0;
            for (std::size_t a = 0; a < s.before; ++a) {
                for (std::size_t c = 0; c < s.after; ++c) {
                    acc += rho((a * s.local + x) * s.after + c, (a * s.local + y) * s.after + c);
                }
            }
            red(x, y) = acc;
        }
    }
    return red;
}

ComplexMatrix partial_trace(std::span<const cplx> psi, std::span<const std::size_t> dims,
                            std::size_t keep) {
    const Split s = split_dims(dims, keep);
    if (psi.size() != s.before * s.local * s.after) {
        throw DimensionError("partial_trace: state dimension " + std::to_string(psi.size()) +
                             " does not match subsystem dimensions");
    }
    ComplexMatrix red(s.local);
    for (std::size_t x = 0; x < s.local; ++x) {
        for (std::size_t y = x; y < s.local; ++y) {
            cplx acc = 0.0;
            for (std::size_t a = 0; a < s.before; ++a) {
                for (std::size_t c = 0; c < s.after; ++c) {
                    acc += psi[(a * s.local + x) * s.after + c] *
                           std::conj(psi[(a * s.local + y) * s.after + c]);
                }
            }
            red(x, y) = acc;
            red(y, x) = std::conj(acc);
        }
        red(x, x) = red(x, x).real();
    }
    return red;
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::pair<std::size_t, std::size_t> dims,
                            int keep) {
    if (keep != 1 && keep != 2) {
        throw DimensionError("partial_trace: keep must be 1 or 2");
    }
    const std::array<std::size_t, 2> d{dims.first, dims.second};
    ComplexMatrix red = partial_trace(rho.matrix(), d, static_cast<std::size_t>(keep - 1));
    // Enforce exact Hermiticity of the diagonal; off-diagonal symmetry is
    // inherited from rho.
    for (std::size_t i = 0; i < red.dim(); ++i) {
        red(i, i) = red(i, i).real();
    }
    return DensityMatrix(std::move(red));
}

// ---------------------------------------------------------------------------
// Spectral decomposition

namespace {

double off_diagonal_norm(const ComplexMatrix &a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r) {
        for (std::size_t c = 0; c < a.dim(); ++c) {
            if (r != c) {
                s += std::norm(a(r, c));
            }
        }
    }
    return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p,q). The 2x2 rotation on the
// (p,q) plane is J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] with
// e^{i phi} = a_pq / |a_pq|; the update is a <- J^dagger a J, v <- v J.
void rotate(ComplexMatrix &a, ComplexMatrix &v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) {
        return;
    }
    const cplx phase = apq / r;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * r);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const cplx jpp = c;
    const cplx jpq = s;
    const cplx jqp = -s * std::conj(phase);
    const cplx jqq = c * std::conj(phase);

    const std::size_t n = a.dim();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = akp * jpp + akq * jqp;
        a(k, q) = akp * jpq + akq * jqq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cplx apk = a(p, k);
        const cplx aqk = a(q, k);
        a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
        a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = app - t * r;
    a(q, q) = aqq + t * r;

    for (std::size_t k = 0; k < n; ++k) {
        const cplx vkp = v(k, p);
        const cplx vkq = v(k, q);
        v(k, p) = vkp * jpp + vkq * jqp;
        v(k, q) = vkp * jpq + vkq * jqq;
    }
}

} // namespace

SpectralDecomposition eigh(const ComplexMatrix &h) {
    if (h.empty()) {
        throw DimensionError("eigh: empty matrix");
    }
    if (!h.is_hermitian(kHermitianTol)) {
        throw DomainError("eigh: matrix is not Hermitian");
    }
    const std::size_t n = h.dim();
    ComplexMatrix a = h;
    ComplexMatrix v = ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
    }

    const double threshold = 1e-14 * std::max(1.0, h.frobenius_norm());
    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    while (off_diagonal_norm(a) >= threshold) {
        if (++sweep > kMaxSweeps) {
            throw NumericalError("eigh: Jacobi iteration did not converge");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                rotate(a, v, p, q);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    SpectralDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            out.vectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

ComplexMatrix spectral_function(const SpectralDecomposition &spec,
                                const std::function<cplx(double)> &f) {
    const std::size_t n = spec.vectors.dim();
    std::vector<cplx> fv(n);
    for (std::size_t k = 0; k < n; ++k) {
        fv[k] = f(spec.values[k]);
    }
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                s += spec.vectors(r, k) * fv[k] * std::conj(spec.vectors(c, k));
            }
            m(r, c) = s;
        }
    }
    return m;
}

ComplexMatrix spectral_function(const ComplexMatrix &h, const std::function<cplx(double)> &f) {
    return spectral_function(eigh(h), f);
}

ComplexMatrix herm_exp(const ComplexMatrix &h, cplx scale) {
    return spectral_function(h, [scale](double lambda) { return std::exp(scale * lambda); });
}

// ---------------------------------------------------------------------------
// Averages and projectors

double expectation(std::span<const cplx> psi, const ComplexMatrix &obs) {
    if (psi.size() != obs.dim()) {
        throw DimensionError("expectation: state dimension " + std::to_string(psi.size()) +
                             " vs observable dimension " + std::to_string(obs.dim()));
    }
    const cplx v = inner(psi, obs.apply(psi));
    if (std::abs(v.imag()) > kImagResidueTol) {
        throw NumericalError("expectation: imaginary residue " + std::to_string(v.imag()));
    }
    return v.real();
}

double expectation(const StateVector &psi, const ComplexMatrix &obs) {
    return expectation(psi.amplitudes(), obs);
}

double expectation(const ComplexMatrix &rho, const ComplexMatrix &obs) {
    require_same_dim(rho, obs, "expectation");
    cplx v = 0.0;
    const std::size_t n = rho.dim();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            v += rho(r, c) * obs(c, r);
        }
    }
    if (std::abs(v.imag()) > kImagResidueTol) {
        throw NumericalError("expectation: imaginary residue " + std::to_string(v.imag()));
    }
    return v.real();
}

double expectation(const DensityMatrix &rho, const ComplexMatrix &obs) {
    return expectation(rho.matrix(), obs);
}

std::pair<ComplexMatrix, ComplexMatrix> projector(const Vec3 &direction) {
    const double n =
        std::sqrt(direction[0] * direction[0] + direction[1] * direction[1] + direction[2] * direction[2]);
    if (std::abs(n - 1.0) > 1e-10) {
        throw DomainError("projector: direction is not a unit vector (norm " + std::to_string(n) + ")");
    }
    const ComplexMatrix x = spin_along(direction);
    const ComplexMatrix id = ComplexMatrix::identity(2);
    return {(id + x) * 0.5, (id - x) * 0.5};
}

Vec3 bloch_vector(const ComplexMatrix &rho) {
    if (rho.dim() != 2) {
        throw DimensionError("bloch_vector: expected a 2x2 matrix");
    }
    return {expectation(rho, pauli_x()), expectation(rho, pauli_y()), expectation(rho, pauli_z())};
}

} // namespace nlcorr

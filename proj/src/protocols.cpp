#include "nlcorr/protocols.hpp"

#include "nlcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nlcorr {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kAnnihilated = 1e-14;
constexpr std::array<std::size_t, 2> kPair{2, 2};

struct Weighted {
    double weight;
    Amplitudes psi;
};

struct Branches {
    std::array<Weighted, 2> branch;
    std::vector<int> annihilated;
};

double checked_max_time(const PairSetup &s) {
    const double t = std::max(s.t1, s.t2);
    if (!std::isfinite(t)) {
        throw DomainError("correlator: both detection times must be finite");
    }
    return t;
}

std::size_t first_detected(const PairSetup &s) { return s.t1 <= s.t2 ? 0 : 1; }

ComplexMatrix on_subsystem(const ComplexMatrix &op, std::size_t k) {
    return embed(op, kPair, k);
}

// Projects `psi` onto both outcomes of a spin measurement along `direction`
// on subsystem `k`; branch states are renormalized.
Branches project(std::span<const cplx> psi, std::size_t k, const Vec3 &direction) {
    const auto [plus, minus] = projector(direction);
    const std::array<ComplexMatrix, 2> proj{on_subsystem(plus, k), on_subsystem(minus, k)};
    const double total = norm(psi) * norm(psi);
    Branches out;
    for (int i = 0; i < 2; ++i) {
        Amplitudes b = proj[i].apply(psi);
        const double n = norm(b);
        const double w = n * n / total;
        if (w < kAnnihilated) {
            out.branch[i] = {0.0, Amplitudes(psi.size())};
            out.annihilated.push_back(outcome_sign(i));
            continue;
        }
        for (auto &z : b) {
            z /= n;
        }
        out.branch[i] = {w, std::move(b)};
    }
    return out;
}

// Born probabilities of E_a^s (x) E_b^s' in a (possibly slightly
// unnormalized) pair state.
std::array<std::array<double, 2>, 2> joint_probabilities(std::span<const cplx> psi, const Vec3 &a,
                                                         const Vec3 &b) {
    const auto [ap, am] = projector(a);
    const auto [bp, bm] = projector(b);
    const std::array<ComplexMatrix, 2> ea{ap, am};
    const std::array<ComplexMatrix, 2> eb{bp, bm};
    const double n2 = norm(psi) * norm(psi);
    std::array<std::array<double, 2>, 2> p{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            p[i][j] = expectation(psi, kron(ea[i], eb[j])) / n2;
        }
    }
    return p;
}

void validate_grid(const std::vector<double> &grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0 || (i > 0 && grid[i] < grid[i - 1])) {
            throw DomainError("time grid must be finite, non-negative and non-decreasing");
        }
    }
}

// Walks the grid and hands every sample's weighted pure-state ensemble to
// `visit`.
template <class Visit>
void walk(Protocol protocol, const PairSetup &setup, const Vec3 &direction_a, const Vec3 &direction_b,
          const std::vector<double> &grid, ZenoMode mode, Visit &&visit) {
    validate_grid(grid);
    const SwitchedHamiltonian h = setup.hamiltonian();
    const std::size_t first = first_detected(setup);
    const double t_first = std::min(setup.t1, setup.t2);
    const Vec3 &first_direction = first == 0 ? direction_a : direction_b;
    // Validate both directions up front even if no projection is reached.
    (void)projector(direction_a);
    (void)projector(direction_b);

    std::vector<Weighted> ensemble{{1.0, setup.psi0.amplitudes()}};
    double now = 0.0;
    bool projected = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        if (protocol == Protocol::zeno && !projected && t > t_first) {
            ensemble[0].psi = propagate(h, ensemble[0].psi, now, t_first, setup.method, setup.dt);
            now = t_first;
            Branches br = project(ensemble[0].psi, first, first_direction);
            ensemble.clear();
            for (int k = 0; k < 2; ++k) {
                const bool wanted = mode == ZenoMode::mixture ||
                                    (mode == ZenoMode::branch_plus && k == 0) ||
                                    (mode == ZenoMode::branch_minus && k == 1);
                if (wanted && br.branch[k].weight > 0.0) {
                    ensemble.push_back(std::move(br.branch[k]));
                }
            }
            if (mode != ZenoMode::mixture) {
                if (ensemble.empty()) {
                    throw NumericalError("ensemble_average_trajectory: requested branch was annihilated");
                }
                ensemble[0].weight = 1.0;
            }
            projected = true;
        }
        for (auto &member : ensemble) {
            member.psi = propagate(h, member.psi, now, t, setup.method, setup.dt);
        }
        now = t;
        visit(i, ensemble);
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Outcome tables

void MeasurementOutcomeTable::complete() {
    marginal_a = {joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]};
    marginal_b = {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
    correlator = joint[0][0] - joint[0][1] - joint[1][0] + joint[1][1];
}

void MeasurementOutcomeTable::validate() const {
    double sum = 0.0;
    double corr = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double p = joint[i][j];
            if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
                throw NumericalError("outcome table: probability out of [0,1]");
            }
            sum += p;
            corr += outcome_sign(i) * outcome_sign(j) * p;
        }
    }
    if (std::abs(sum - 1.0) > 1e-10) {
        throw NumericalError("outcome table: probabilities do not sum to 1");
    }
    if (std::abs(corr - correlator) > 1e-10) {
        throw NumericalError("outcome table: correlator inconsistent with joint probabilities");
    }
}

SwitchedHamiltonian PairSetup::hamiltonian() const {
    if (psi0.dim() != 4) {
        throw DimensionError("PairSetup: expected a two-qubit state");
    }
    SwitchingSchedule schedule{{t1, t2}, {2, 2}};
    return polchinski_extend({h1, h2}, {2, 2}, std::move(schedule));
}

PairSetup example_setup(const StateVector &psi0, double a, double b, double t1, double t2) {
    return PairSetup{psi0,
                     HamiltonianFunction::quadratic_average(a, pauli_z(), "A<sz>^2/2"),
                     HamiltonianFunction::quadratic_average(b, pauli_z(), "B<sz>^2/2"),
                     t1,
                     t2};
}

MeasurementOutcomeTable switching_correlator(const PairSetup &setup, const Vec3 &direction_a,
                                             const Vec3 &direction_b) {
    const double t_final = checked_max_time(setup);
    const Amplitudes psi =
        propagate(setup.hamiltonian(), setup.psi0.amplitudes(), 0.0, t_final, setup.method, setup.dt);
    MeasurementOutcomeTable table;
    table.joint = joint_probabilities(psi, direction_a, direction_b);
    table.complete();
    table.validate();
    return table;
}

MeasurementOutcomeTable switching_correlator(const PairSetup &setup, const ComplexMatrix &x,
                                             const ComplexMatrix &y, const Vec3 &direction_a,
                                             const Vec3 &direction_b) {
    if (!x.is_hermitian() || !y.is_hermitian()) {
        throw DomainError("switching_correlator: observables must be Hermitian");
    }
    const double t_final = checked_max_time(setup);
    const Amplitudes psi =
        propagate(setup.hamiltonian(), setup.psi0.amplitudes(), 0.0, t_final, setup.method, setup.dt);
    MeasurementOutcomeTable table;
    table.joint = joint_probabilities(psi, direction_a, direction_b);
    table.complete();
    table.validate();
    const double n2 = norm(psi) * norm(psi);
    table.observable_average = expectation(psi, kron(x, y)) / n2;
    return table;
}

MeasurementOutcomeTable zeno_correlator(const PairSetup &setup, const Vec3 &direction_a,
                                        const Vec3 &direction_b) {
    const double t_final = checked_max_time(setup);
    const double t_first = std::min(setup.t1, setup.t2);
    const std::size_t first = first_detected(setup);
    const SwitchedHamiltonian h = setup.hamiltonian();
    (void)projector(direction_b);

    const Amplitudes at_first =
        propagate(h, setup.psi0.amplitudes(), 0.0, t_first, setup.method, setup.dt);
    Branches br = project(at_first, first, first == 0 ? direction_a : direction_b);

    MeasurementOutcomeTable table;
    table.annihilated_branches = br.annihilated;
    for (int s = 0; s < 2; ++s) {
        const Weighted &b = br.branch[s];
        if (b.weight == 0.0) {
            continue;
        }
        const Amplitudes final_state = propagate(h, b.psi, t_first, t_final, setup.method, setup.dt);
        const auto cond = joint_probabilities(final_state, direction_a, direction_b);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                table.joint[i][j] += b.weight * cond[i][j];
            }
        }
    }
    table.complete();
    table.validate();
    return table;
}

EnsembleAverages ensemble_average_trajectory(Protocol protocol, const PairSetup &setup,
                                             const Vec3 &direction_a, const Vec3 &direction_b,
                                             const std::vector<NamedObservable> &observables,
                                             const std::vector<double> &t_grid, ZenoMode mode) {
    for (const auto &o : observables) {
        if (o.op.dim() != 4) {
            throw DimensionError("ensemble_average_trajectory: observable '" + o.name +
                                 "' is not a pair observable");
        }
    }
    EnsembleAverages out;
    out.times = t_grid;
    for (const auto &o : observables) {
        out.observables[o.name].reserve(t_grid.size());
    }
    walk(protocol, setup, direction_a, direction_b, t_grid, mode,
         [&](std::size_t, const std::vector<Weighted> &ensemble) {
             for (const auto &o : observables) {
                 double v = 0.0;
                 for (const auto &m : ensemble) {
                     const double n2 = norm(m.psi) * norm(m.psi);
                     v += m.weight * expectation(m.psi, o.op) / n2;
                 }
                 out.observables[o.name].push_back(v);
             }
         });
    const SwitchedHamiltonian h = setup.hamiltonian();
    const bool exact = setup.method == EvolutionMethod::exact ||
                       (setup.method == EvolutionMethod::automatic && h.all_stationary());
    out.metadata = {std::string(protocol == Protocol::switching ? "switching" : "zeno") +
                        (exact ? "/exact-segments" : "/rk4"),
                    exact ? 0.0 : setup.dt, h.schedule().detection_times, h.label(),
                    h.uses_numeric_gradient()};
    return out;
}

std::vector<ComplexMatrix> reduced_state_trajectory(Protocol protocol, const PairSetup &setup,
                                                    const Vec3 &direction_a,
                                                    const Vec3 &direction_b,
                                                    const std::vector<double> &t_grid,
                                                    std::size_t subsystem) {
    if (subsystem > 1) {
        throw DimensionError("reduced_state_trajectory: subsystem must be 0 or 1");
    }
    std::vector<ComplexMatrix> out;
    out.reserve(t_grid.size());
    walk(protocol, setup, direction_a, direction_b, t_grid, ZenoMode::mixture,
         [&](std::size_t, const std::vector<Weighted> &ensemble) {
             ComplexMatrix rho(2);
             for (const auto &m : ensemble) {
                 const double n2 = norm(m.psi) * norm(m.psi);
                 rho += partial_trace(m.psi, kPair, subsystem) * (m.weight / n2);
             }
             out.push_back(std::move(rho));
         });
    return out;
}

// ---------------------------------------------------------------------------
// Histories

void HistorySpec::validate() const {
    const std::size_t n = free_generator.dim();
    if (n == 0) {
        throw DimensionError("history: free generator is empty");
    }
    if (!free_generator.is_hermitian()) {
        throw DomainError("history: free generator is not Hermitian");
    }
    double last = 0.0;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const auto &e = events[k];
        if (e.projector.dim() != n) {
            throw DimensionError("history: projector dimension mismatch");
        }
        if (!std::isfinite(e.time) || e.time < 0.0 || (k > 0 && e.time <= last)) {
            throw DomainError("history: event times must be non-negative and strictly increasing");
        }
        if (!e.projector.is_hermitian() || (e.projector * e.projector).max_abs_diff(e.projector) > 1e-12) {
            throw DomainError("history: event operator is not a projector");
        }
        last = e.time;
    }
    if (!std::isfinite(final_time) || final_time < last) {
        throw DomainError("history: final time precedes the last event");
    }
}

double history_probability_unitary(const HistorySpec &spec, const DensityMatrix &rho0) {
    spec.validate();
    if (rho0.dim() != spec.free_generator.dim()) {
        throw DimensionError("history: state dimension mismatch");
    }
    auto evolve = [&](const ComplexMatrix &rho, double dt) {
        const ComplexMatrix u = herm_exp(spec.free_generator, -kI * dt);
        return u * rho * u.adjoint();
    };
    ComplexMatrix rho = rho0.matrix();
    double now = 0.0;
    for (const auto &e : spec.events) {
        rho = evolve(rho, e.time - now);
        rho = e.projector * rho * e.projector;
        now = e.time;
    }
    rho = evolve(rho, spec.final_time - now);
    return rho.trace().real();
}

double history_probability_projected(const HistorySpec &spec, const DensityMatrix &rho0) {
    spec.validate();
    if (rho0.dim() != spec.free_generator.dim()) {
        throw DimensionError("history: state dimension mismatch");
    }
    ComplexMatrix chain = ComplexMatrix::identity(rho0.dim());
    for (const auto &e : spec.events) {
        const ComplexMatrix u = herm_exp(spec.free_generator, -kI * e.time);
        chain = (u.adjoint() * e.projector * u) * chain;
    }
    return expectation(chain * rho0.matrix() * chain.adjoint(), ComplexMatrix::identity(rho0.dim()));
}

HistorySpec random_history(std::mt19937_64 &rng, std::size_t n_projectors) {
    std::uniform_real_distribution<double> gap(0.05, 2.0);
    std::bernoulli_distribution sign(0.5);
    HistorySpec spec;
    spec.free_generator = random_hermitian(2, rng);
    double t = 0.0;
    for (std::size_t k = 0; k < n_projectors; ++k) {
        t += gap(rng);
        const auto [plus, minus] = projector(random_direction(rng));
        spec.events.push_back({t, sign(rng) ? plus : minus});
    }
    spec.final_time = t + gap(rng);
    return spec;
}

// ---------------------------------------------------------------------------
// Pre-/post-selection

Vec3 mean_field_vector(const ComplexMatrix &rho, double coupling) {
    const Vec3 r = bloch_vector(rho);
    return {coupling * r[0], coupling * r[1], coupling * r[2]};
}

TeleportationReport teleportation_demo(const StateVector &pair, std::size_t n_pairs,
                                       Selection selection, const Vec3 &alice_direction,
                                       int keep_outcome, double coupling, std::uint64_t seed) {
    if (pair.dim() != 4) {
        throw DimensionError("teleportation_demo: expected a two-qubit state");
    }
    if (n_pairs == 0) {
        throw DomainError("teleportation_demo: n_pairs must be at least 1");
    }
    if (keep_outcome != 1 && keep_outcome != -1) {
        throw DomainError("teleportation_demo: keep_outcome must be +1 or -1");
    }
    const auto [plus, minus] = projector(alice_direction);
    const ComplexMatrix alice = on_subsystem(keep_outcome > 0 ? plus : minus, 0);
    const double p_keep = expectation(pair, alice);

    // Bob's particle after Alice's outcome `keep_outcome`; every retained pair
    // is in this same conditional state.
    ComplexMatrix conditional(2);
    if (p_keep > kAnnihilated) {
        const Amplitudes kept = alice.apply(pair.amplitudes());
        conditional = partial_trace(kept, kPair, 1) * (1.0 / p_keep);
    }

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution alice_gets_keep(std::clamp(p_keep, 0.0, 1.0));
    std::size_t retained = 0;
    for (std::size_t i = 0; i < n_pairs; ++i) {
        if (alice_gets_keep(rng)) {
            ++retained;
        }
    }
    if (retained == 0) {
        throw DomainError("teleportation_demo: empty retained ensemble");
    }

    const ComplexMatrix full = partial_trace(pair.amplitudes(), kPair, 1);
    TeleportationReport report;
    report.selection = selection;
    report.field_pre = mean_field_vector(conditional, coupling);
    report.field_post = mean_field_vector(full, coupling);
    report.retained_state = selection == Selection::pre ? conditional : full;
    report.n_pairs = n_pairs;
    report.n_retained = retained;
    return report;
}

} // namespace nlcorr

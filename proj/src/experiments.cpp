#include "nlcorr/experiments.hpp"

#include "nlcorr/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <unistd.h>

namespace nlcorr {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

double parse_double(const std::string &key, const std::string &text) {
    const std::string s = trim(text);
    if (s == "never" || s == "inf" || s == "+inf" || s == "infinity") {
        return kNever;
    }
    double v = 0.0;
    const char *first = s.data();
    const char *last = s.data() + s.size();
    if (!s.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || s.empty() || std::isnan(v)) {
        throw ConfigError("bad number for '" + key + "': '" + text + "'");
    }
    return v;
}

double parse_finite(const std::string &key, const std::string &text) {
    const double v = parse_double(key, text);
    if (!std::isfinite(v)) {
        throw ConfigError("'" + key + "' must be finite");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string &key, const std::string &text) {
    const std::string s = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ConfigError("bad non-negative integer for '" + key + "': '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string &key, const std::string &text) {
    std::string s = trim(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "1" || s == "true" || s == "yes" || s == "on") {
        return true;
    }
    if (s == "0" || s == "false" || s == "no" || s == "off") {
        return false;
    }
    throw ConfigError("bad boolean for '" + key + "': '" + text + "'");
}

std::vector<double> parse_list(const std::string &key, const std::string &text) {
    std::vector<double> out;
    for (const auto &item : split(text, ',')) {
        out.push_back(parse_double(key, item));
    }
    return out;
}

Vec3 parse_vec3(const std::string &key, const std::string &text) {
    const std::string s = trim(text);
    const bool neg = !s.empty() && s[0] == '-';
    const std::string axis = neg || (!s.empty() && s[0] == '+') ? s.substr(1) : s;
    const double sign = neg ? -1.0 : 1.0;
    if (axis == "x") {
        return {sign, 0.0, 0.0};
    }
    if (axis == "y") {
        return {0.0, sign, 0.0};
    }
    if (axis == "z") {
        return {0.0, 0.0, sign};
    }
    const auto parts = parse_list(key, s);
    if (parts.size() != 3) {
        throw ConfigError("'" + key + "' needs x, y, z or three comma-separated components");
    }
    for (double p : parts) {
        if (!std::isfinite(p)) {
            throw ConfigError("'" + key + "' components must be finite");
        }
    }
    return {parts[0], parts[1], parts[2]};
}

Vec3 parse_direction(const std::string &key, const std::string &text) {
    const Vec3 v = parse_vec3(key, text);
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (std::abs(n - 1.0) > 1e-9) {
        throw ConfigError("'" + key + "' must be a unit vector");
    }
    return v;
}

const std::vector<std::string> kKeys = {
    "state",      "A",         "B",           "t1",        "t2",       "t-end",  "dt",
    "protocol",   "direction-a", "direction-b", "out",     "linear-mode", "q",   "alpha-range",
    "zeno-mode",  "method",    "distribution", "base",     "B-values", "t2-values", "n-pairs",
    "selection",  "keep",      "seed",        "coupling",  "trials",   "rho-bloch", "field",
};

ProbabilityDistribution parse_distribution(const std::string &text) {
    const std::string s = trim(text);
    const auto colon = s.find(':');
    if (colon != std::string::npos) {
        const std::string kind = s.substr(0, colon);
        const auto n = parse_unsigned("distribution", s.substr(colon + 1));
        if (n == 0) {
            throw ConfigError("distribution needs at least one outcome");
        }
        if (kind == "uniform") {
            return ProbabilityDistribution::uniform(n);
        }
        if (kind == "deterministic") {
            std::vector<double> w(n, 0.0);
            w[0] = 1.0;
            return ProbabilityDistribution(std::move(w));
        }
        throw ConfigError("unknown distribution kind '" + kind + "'");
    }
    try {
        return ProbabilityDistribution(parse_list("distribution", s));
    } catch (const DomainError &e) {
        throw ConfigError(std::string("invalid distribution: ") + e.what());
    }
}

std::vector<double> time_grid(double t_end, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("dt must be positive");
    }
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw ConfigError("t-end must be finite and non-negative");
    }
    const auto n = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        grid[i] = std::min(static_cast<double>(i) * dt, t_end);
    }
    return grid;
}

void check_detection_times(const ExperimentConfig &c) {
    for (double t : {c.t1, c.t2}) {
        if (t < 0.0) {
            throw ConfigError("detection times must be non-negative");
        }
        if (std::isfinite(t) && c.t_end < t) {
            throw ConfigError("t-end must not precede a finite detection time");
        }
    }
}

std::vector<NamedObservable> figure_observables() {
    const ComplexMatrix id = ComplexMatrix::identity(2);
    return {{"exp_xx", kron(pauli_x(), pauli_x())},
            {"exp_x1", kron(pauli_x(), id)},
            {"exp_1x", kron(id, pauli_x())}};
}

std::string protocol_name(Protocol p) { return p == Protocol::switching ? "switching" : "zeno"; }

ResultTable start_table(const std::string &experiment, const ExperimentConfig &config) {
    ResultTable t;
    t.experiment = experiment;
    t.metadata.push_back("nlcorr " + std::string(kVersion));
    t.metadata.push_back("experiment: " + experiment);
    for (const auto &[k, v] : config.entries()) {
        if (k != "out") {
            t.metadata.push_back("config: " + k + "=" + v);
        }
    }
    return t;
}

ResultTable figure(const std::string &name, Protocol protocol, const ExperimentConfig &config) {
    check_detection_times(config);
    const auto grid = time_grid(config.t_end, config.dt);
    const PairSetup setup = config.pair_setup();
    const auto obs = figure_observables();
    const EnsembleAverages avg = ensemble_average_trajectory(
        protocol, setup, config.direction_a, config.direction_b, obs, grid, config.zeno_mode);

    ResultTable t = start_table(name, config);
    t.metadata.push_back("protocol: " + protocol_name(protocol));
    t.metadata.push_back("integrator: " + avg.metadata.integrator);
    t.metadata.push_back("hamiltonian: " + avg.metadata.hamiltonian);
    t.metadata.push_back("sample-step: " + format_number(config.dt));
    t.columns = {"t"};
    for (const auto &o : obs) {
        t.columns.push_back(o.name);
    }
    t.rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> row{grid[i]};
        for (const auto &o : obs) {
            row.push_back(avg.observables.at(o.name)[i]);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<Protocol> chosen_protocols(ProtocolChoice choice, Protocol fallback) {
    switch (choice) {
    case ProtocolChoice::switching:
        return {Protocol::switching};
    case ProtocolChoice::zeno:
        return {Protocol::zeno};
    case ProtocolChoice::both:
        return {Protocol::switching, Protocol::zeno};
    case ProtocolChoice::unset:
        break;
    }
    return {fallback};
}

} // namespace

const std::vector<std::string> &ExperimentConfig::keys() { return kKeys; }

void ExperimentConfig::set(const std::string &key_in, const std::string &value_in) {
    const std::string key = trim(key_in);
    const std::string value = trim(value_in);
    if (key == "state") {
        const std::string previous = state;
        state = value;
        try {
            (void)initial_state();
        } catch (...) {
            state = previous;
            throw;
        }
    } else if (key == "A") {
        a = parse_finite(key, value);
    } else if (key == "B") {
        b = parse_finite(key, value);
    } else if (key == "t1") {
        t1 = parse_double(key, value);
        if (t1 < 0.0) {
            throw ConfigError("t1 must be non-negative");
        }
    } else if (key == "t2") {
        t2 = parse_double(key, value);
        if (t2 < 0.0) {
            throw ConfigError("t2 must be non-negative");
        }
    } else if (key == "t-end") {
        t_end = parse_finite(key, value);
        if (t_end < 0.0) {
            throw ConfigError("t-end must be non-negative");
        }
    } else if (key == "dt") {
        dt = parse_finite(key, value);
        if (!(dt > 0.0)) {
            throw ConfigError("dt must be positive");
        }
    } else if (key == "protocol") {
        if (value == "switching") {
            protocol = ProtocolChoice::switching;
        } else if (value == "zeno") {
            protocol = ProtocolChoice::zeno;
        } else if (value == "both") {
            protocol = ProtocolChoice::both;
        } else {
            throw ConfigError("protocol must be switching, zeno or both");
        }
    } else if (key == "direction-a") {
        direction_a = parse_direction(key, value);
    } else if (key == "direction-b") {
        direction_b = parse_direction(key, value);
    } else if (key == "out") {
        out = value;
    } else if (key == "linear-mode") {
        linear_mode = parse_bool(key, value);
    } else if (key == "q") {
        q = parse_finite(key, value);
    } else if (key == "alpha-range") {
        const auto parts = split(value, ':');
        if (parts.size() != 3) {
            throw ConfigError("alpha-range must be start:stop:step");
        }
        const double start = parse_finite(key, parts[0]);
        const double stop = parse_finite(key, parts[1]);
        const double step = parse_finite(key, parts[2]);
        if (!(start > 0.0) || stop < start || !(step > 0.0)) {
            throw ConfigError("alpha-range needs 0 < start <= stop and step > 0");
        }
        range_start = start;
        range_stop = stop;
        range_step = step;
    } else if (key == "zeno-mode") {
        if (value == "mixture") {
            zeno_mode = ZenoMode::mixture;
        } else if (value == "plus") {
            zeno_mode = ZenoMode::branch_plus;
        } else if (value == "minus") {
            zeno_mode = ZenoMode::branch_minus;
        } else {
            throw ConfigError("zeno-mode must be mixture, plus or minus");
        }
    } else if (key == "method") {
        if (value == "auto") {
            method = EvolutionMethod::automatic;
        } else if (value == "exact") {
            method = EvolutionMethod::exact;
        } else if (value == "rk4") {
            method = EvolutionMethod::rk4;
        } else {
            throw ConfigError("method must be auto, exact or rk4");
        }
    } else if (key == "distribution") {
        (void)parse_distribution(value);
        distribution = value;
    } else if (key == "base") {
        base = parse_finite(key, value);
        if (!(base > 1.0)) {
            throw ConfigError("base must exceed 1");
        }
    } else if (key == "B-values") {
        b_values = parse_list(key, value);
    } else if (key == "t2-values") {
        t2_values = parse_list(key, value);
        for (double t : t2_values) {
            if (t < 0.0) {
                throw ConfigError("t2-values must be non-negative");
            }
        }
    } else if (key == "n-pairs") {
        n_pairs = parse_unsigned(key, value);
        if (n_pairs == 0) {
            throw ConfigError("n-pairs must be positive");
        }
    } else if (key == "selection") {
        if (value != "pre" && value != "post" && value != "both") {
            throw ConfigError("selection must be pre, post or both");
        }
        selection = value;
    } else if (key == "keep") {
        const double k = parse_finite(key, value);
        if (k != 1.0 && k != -1.0) {
            throw ConfigError("keep must be +1 or -1");
        }
        keep = static_cast<int>(k);
    } else if (key == "seed") {
        seed = parse_unsigned(key, value);
    } else if (key == "coupling") {
        coupling = parse_finite(key, value);
    } else if (key == "trials") {
        trials = parse_unsigned(key, value);
        if (trials == 0) {
            throw ConfigError("trials must be positive");
        }
    } else if (key == "rho-bloch") {
        const Vec3 r = parse_vec3(key, value);
        if (r[0] * r[0] + r[1] * r[1] + r[2] * r[2] > 1.0 + 1e-12) {
            throw ConfigError("rho-bloch must lie in the unit ball");
        }
        rho_bloch = r;
    } else if (key == "field") {
        field = parse_vec3(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
    raw_[key] = value;
}

void ExperimentConfig::load_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        try {
            set(line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError &e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

StateVector ExperimentConfig::initial_state() const {
    if (state == "singlet") {
        return singlet_state();
    }
    if (state == "paper-state") {
        return example_pair_state();
    }
    Amplitudes amps;
    for (const auto &item : split(state, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() > 2) {
            throw ConfigError("amplitude '" + item + "' must be re or re:im");
        }
        const double re = parse_finite("state", parts[0]);
        const double im = parts.size() == 2 ? parse_finite("state", parts[1]) : 0.0;
        amps.emplace_back(re, im);
    }
    if (amps.size() != 4) {
        throw ConfigError("state needs singlet, paper-state or four amplitudes");
    }
    try {
        return StateVector(std::move(amps));
    } catch (const DomainError &) {
        throw ConfigError("state amplitudes must be normalized to 1e-9");
    }
}

PairSetup ExperimentConfig::pair_setup() const {
    PairSetup s = example_setup(initial_state(), a, b, t1, t2);
    if (linear_mode) {
        s.h1 = HamiltonianFunction::linear(a * pauli_z(), "A sz");
        s.h2 = HamiltonianFunction::linear(b * pauli_z(), "B sz");
    }
    s.method = method;
    s.dt = dt;
    return s;
}

std::string format_number(double v) {
    if (v == 0.0) {
        return "0";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string to_csv(const ResultTable &table) {
    std::string out;
    for (const auto &m : table.metadata) {
        out += "# " + m + "\n";
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out += (i ? "," : "") + table.columns[i];
    }
    out += "\n";
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += format_number(row[i]);
        }
        out += "\n";
    }
    return out;
}

void write_atomically(const std::string &path, const std::string &contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw Error("cannot write '" + tmp.string() + "'");
        }
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        f.close();
        if (!f) {
            fs::remove(tmp);
            throw Error("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot rename onto '" + path + "': " + ec.message());
    }
}

ResultTable run_figure2(const ExperimentConfig &config) {
    if (config.protocol == ProtocolChoice::zeno) {
        throw ConfigError("figure2 uses the switching protocol");
    }
    return figure("figure2", Protocol::switching, config);
}

ResultTable run_figure3(const ExperimentConfig &config) {
    if (config.protocol == ProtocolChoice::switching) {
        throw ConfigError("figure3 uses the zeno protocol");
    }
    return figure("figure3", Protocol::zeno, config);
}

ResultTable run_entropy_sweep(const ExperimentConfig &config) {
    const ProbabilityDistribution p = parse_distribution(config.distribution);
    ResultTable t = start_table("entropy-sweep", config);
    t.metadata.push_back("renyi/shannon log base: " + format_number(config.base) +
                         "; tsallis: natural log");
    t.columns = {"param", "renyi", "tsallis", "shannon"};
    const double shannon = shannon_entropy(p, config.base);
    const auto n = static_cast<std::size_t>(
        std::floor((config.range_stop - config.range_start) / config.range_step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
        // Snap to 1e-12 so that accumulated steps land on exact values such as 1.
        double x = config.range_start + static_cast<double>(i) * config.range_step;
        x = std::round(x * 1e12) / 1e12;
        t.rows.push_back({x, renyi_entropy(p, x, config.base, LimitMode::limit),
                          tsallis_entropy(p, x, LimitMode::limit), shannon});
    }
    return t;
}

ResultTable run_locality_check(const ExperimentConfig &config) {
    if (config.b_values.empty() || config.t2_values.empty()) {
        throw ConfigError("locality-check needs B-values and t2-values");
    }
    const auto grid = time_grid(config.t_end, config.dt);
    ResultTable t = start_table("locality-check", config);
    t.metadata.push_back("particle #1 undetected; particle #2 detected at each t2 along direction-b");
    t.columns = {"zeno", "B", "t2", "max_dev_rho1"};
    constexpr double kTol = 1e-10;
    for (Protocol protocol : chosen_protocols(config.protocol, Protocol::switching)) {
        std::vector<ComplexMatrix> reference;
        double worst = 0.0;
        for (double b : config.b_values) {
            for (double t2 : config.t2_values) {
                ExperimentConfig c = config;
                c.b = b;
                c.t1 = kNever;
                c.t2 = t2;
                const auto rho1 = reduced_state_trajectory(protocol, c.pair_setup(), c.direction_a,
                                                           c.direction_b, grid, 0);
                double dev = 0.0;
                if (reference.empty()) {
                    reference = rho1;
                } else {
                    for (std::size_t i = 0; i < grid.size(); ++i) {
                        dev = std::max(dev, rho1[i].max_abs_diff(reference[i]));
                    }
                }
                worst = std::max(worst, dev);
                t.rows.push_back({protocol == Protocol::zeno ? 1.0 : 0.0, b, t2, dev});
            }
        }
        const bool ok = worst <= kTol;
        t.passed = t.passed && ok;
        t.summary.push_back("locality-check " + protocol_name(protocol) + ": max deviation of rho1 " +
                            format_number(worst) + " (tolerance 1e-10): " + (ok ? "PASS" : "FAIL"));
    }
    return t;
}

ResultTable run_teleport_demo(const ExperimentConfig &config) {
    const auto &raw = config.entries();
    const StateVector pair = raw.count("state") ? config.initial_state() : singlet_state();
    const Vec3 alice = raw.count("direction-a") ? config.direction_a : Vec3{0.0, 0.0, 1.0};
    std::vector<Selection> modes;
    if (config.selection != "post") {
        modes.push_back(Selection::pre);
    }
    if (config.selection != "pre") {
        modes.push_back(Selection::post);
    }
    ResultTable t = start_table("teleport-demo", config);
    t.columns = {"pre", "Bx", "By", "Bz", "norm", "n_retained", "n_pairs"};
    const double sampling = 3.0 / std::sqrt(static_cast<double>(config.n_pairs));
    for (Selection s : modes) {
        const auto r = teleportation_demo(pair, config.n_pairs, s, alice, config.keep, config.coupling,
                                          config.seed);
        const Vec3 &f = r.field();
        const double n = std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
        t.rows.push_back({s == Selection::pre ? 1.0 : 0.0, f[0], f[1], f[2], n,
                          static_cast<double>(r.n_retained), static_cast<double>(r.n_pairs)});
        t.summary.push_back(std::string(s == Selection::pre ? "pre" : "post") + "-selection: B = (" +
                            format_number(f[0]) + ", " + format_number(f[1]) + ", " +
                            format_number(f[2]) + "), |B| = " + format_number(n) + ", retained " +
                            std::to_string(r.n_retained) + "/" + std::to_string(r.n_pairs));
    }
    t.summary.push_back("sampling scale 3/sqrt(n-pairs) = " + format_number(sampling));
    return t;
}

ResultTable run_history_check(const ExperimentConfig &config) {
    std::mt19937_64 rng(config.seed);
    ResultTable t = start_table("history-check", config);
    t.columns = {"trial", "p_unitary", "p_projected", "abs_diff"};
    double worst = 0.0;
    for (std::size_t k = 0; k < config.trials; ++k) {
        const HistorySpec spec = random_history(rng);
        const DensityMatrix rho = DensityMatrix::pure(random_state(2, rng));
        const double pu = history_probability_unitary(spec, rho);
        const double pp = history_probability_projected(spec, rho);
        worst = std::max(worst, std::abs(pu - pp));
        t.rows.push_back({static_cast<double>(k), pu, pp, std::abs(pu - pp)});
    }
    t.passed = worst <= 1e-12;
    t.summary.push_back("history-check: max |difference| " + format_number(worst) +
                        " over " + std::to_string(config.trials) + " histories (tolerance 1e-12): " +
                        (t.passed ? "PASS" : "FAIL"));
    return t;
}

ResultTable run_qvn(const ExperimentConfig &config) {
    (void)time_grid(config.t_end, config.dt);
    const ComplexMatrix h = config.field[0] * pauli_x() + config.field[1] * pauli_y() +
                            config.field[2] * pauli_z();
    const DensityMatrix rho0 = DensityMatrix::from_bloch(config.rho_bloch);
    const DensityTrajectory traj = integrate_qvn(h, rho0, config.q, config.t_end, config.dt, config.coupling);
    ResultTable t = start_table("qvn", config);
    t.metadata.push_back("integrator: " + traj.metadata.integrator);
    t.metadata.push_back("step: " + format_number(config.dt));
    t.columns = {"t", "trace", "purity", "bloch_x", "bloch_y", "bloch_z"};
    const double purity0 = (rho0.matrix() * rho0.matrix()).trace().real();
    double trace_drift = 0.0;
    double purity_drift = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const ComplexMatrix &rho = traj.states[i];
        const double tr = rho.trace().real();
        const double pur = (rho * rho).trace().real();
        const Vec3 r = bloch_vector(rho);
        trace_drift = std::max(trace_drift, std::abs(tr - 1.0));
        purity_drift = std::max(purity_drift, std::abs(pur - purity0));
        t.rows.push_back({traj.times[i], tr, pur, r[0], r[1], r[2]});
    }
    t.passed = trace_drift <= 1e-8 && purity_drift <= 1e-8;
    t.summary.push_back("qvn: trace drift " + format_number(trace_drift) + ", purity drift " +
                        format_number(purity_drift) + " (tolerance 1e-8): " +
                        (t.passed ? "PASS" : "FAIL"));
    return t;
}

const std::vector<std::string> &experiment_names() {
    static const std::vector<std::string> names = {"figure2",       "figure3",      "entropy-sweep",
                                                   "locality-check", "teleport-demo", "history-check",
                                                   "qvn"};
    return names;
}

ResultTable run_experiment(const std::string &name, const ExperimentConfig &config) {
    using Runner = ResultTable (*)(const ExperimentConfig &);
    static const std::map<std::string, Runner> runners = {
        {"figure2", run_figure2},           {"figure3", run_figure3},
        {"entropy-sweep", run_entropy_sweep}, {"locality-check", run_locality_check},
        {"teleport-demo", run_teleport_demo}, {"history-check", run_history_check},
        {"qvn", run_qvn},
    };
    const auto it = runners.find(name);
    if (it == runners.end()) {
        throw ConfigError("unknown experiment '" + name + "'");
    }
    return it->second(config);
}

} // namespace nlcorr

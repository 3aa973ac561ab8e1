#include "run_commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcrit/critical_protocol.hpp"
#include "qcrit/dissipative_dynamics.hpp"
#include "qcrit/effective_models.hpp"
#include "qcrit/errors.hpp"
#include "qcrit/fock_core.hpp"
#include "qcrit/gaussian_metrology.hpp"
#include "qcrit/parallel.hpp"
#include "qcrit/sha256.hpp"
#include "qcrit/sw_engine.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kToolVersion = "qcrit 1.0.0";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// "a:b:step" (inclusive of b up to rounding) or a single scalar.
std::vector<double> parse_grid(const std::string& spec, const std::string& what) {
    std::vector<double> out;
    const auto c1 = spec.find(':');
    try {
        if (c1 == std::string::npos) {
            size_t pos = 0;
            out.push_back(std::stod(spec, &pos));
            if (pos != spec.size()) throw std::invalid_argument(spec);
            return out;
        }
        const auto c2 = spec.find(':', c1 + 1);
        if (c2 == std::string::npos) throw std::invalid_argument(spec);
        const double a = std::stod(spec.substr(0, c1));
        const double b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
        const double step = std::stod(spec.substr(c2 + 1));
        if (!(step > 0)) throw qcrit::schema_error(what + ": grid step must be > 0");
        const double eps = 1e-9 * std::max(1.0, std::abs(b));
        for (double v = a; v <= b + eps; v += step) out.push_back(v);
    } catch (const std::invalid_argument&) {
        throw qcrit::schema_error(what + ": malformed grid spec '" + spec +
                                  "' (expected start:stop:step or a scalar)");
    }
    if (out.empty()) throw qcrit::schema_error(what + ": empty grid");
    return out;
}

// Merges a JSON config under the CLI flags: flags that were given on the
// command line win, everything else is taken from the config; unknown config
// keys are rejected with their key path.
class ConfigBinder {
  public:
    void bind(const std::string& key, CLI::Option* opt, std::function<void(const json&)> set) {
        entries_.push_back({key, opt, std::move(set)});
    }
    void apply(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw qcrit::schema_error("config: cannot open " + path);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw qcrit::schema_error("config: " + std::string(e.what()));
        }
        for (const auto& [key, value] : j.items()) {
            const Entry* hit = nullptr;
            for (const auto& e : entries_)
                if (e.key == key) hit = &e;
            if (!hit) throw qcrit::schema_error("config: unknown key '" + key + "'");
            if (hit->opt == nullptr || hit->opt->count() == 0) {
                try {
                    hit->set(value);
                } catch (const json::exception& e) {
                    throw qcrit::schema_error("config: key '" + key + "': " + e.what());
                }
            }
        }
    }

  private:
    struct Entry {
        std::string key;
        CLI::Option* opt;
        std::function<void(const json&)> set;
    };
    std::vector<Entry> entries_;
};

struct OutputPaths {
    std::string stem;
    fs::path data(const char* ext) const { return fs::path(stem + ext); }
};

void write_text(const fs::path& p, const std::string& content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw qcrit::schema_error("cannot open output file " + p.string());
    out << content;
}

void write_csv(const fs::path& p, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    write_text(p, os.str());
}

// Companion gnuplot-style column map ("using" indices are 1-based).
void write_columns(const fs::path& p, const std::vector<std::string>& columns) {
    std::ostringstream os;
    for (size_t i = 0; i < columns.size(); ++i)
        os << "# column " << (i + 1) << ": " << columns[i] << "\n";
    write_text(p, os.str());
}

class ManifestWriter {
  public:
    ManifestWriter(const std::string& command, json config_echo)
        : start_(std::chrono::steady_clock::now()) {
        m_["tool"] = kToolVersion;
        m_["command"] = command;
        m_["config"] = std::move(config_echo);
    }
    void add_output(const fs::path& p) {
        json o;
        o["path"] = p.string();
        o["sha256"] = qcrit::sha256_file(p.string());
        outputs_.push_back(std::move(o));
    }
    void note(const std::string& key, json value) { extra_[key] = std::move(value); }
    void write(const fs::path& p) {
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
        m_["wall_time_s"] = dt.count();
        m_["outputs"] = outputs_;
        for (auto& [k, v] : extra_.items()) m_[k] = v;
        write_text(p, m_.dump(2) + "\n");
    }

  private:
    std::chrono::steady_clock::time_point start_;
    json m_, extra_;
    std::vector<json> outputs_;
};

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

struct SpectrumArgs {
    std::string model = "rabi";
    double omega = 1.0, Omega = 1.0;
    std::string g_grid;
    int cutoff = 200, levels = 6, n_qubits = 1;
    double tol = 1e-6;
    std::string out;
};

int cmd_spectrum(const SpectrumArgs& a) {
    const qcrit::ModelKind kind = qcrit::model_kind_from_string(a.model);
    const std::vector<double> grid = parse_grid(a.g_grid, "spectrum --g-grid");
    if (a.cutoff < 4) throw qcrit::schema_error("spectrum: cutoff must be >= 4");
    if (a.levels < 1) throw qcrit::schema_error("spectrum: levels must be >= 1");

    json cfg;
    cfg["model"] = a.model;
    cfg["omega"] = a.omega;
    cfg["Omega"] = a.Omega;
    cfg["g_grid"] = a.g_grid;
    cfg["cutoff"] = a.cutoff;
    cfg["levels"] = a.levels;
    cfg["n_qubits"] = a.n_qubits;
    cfg["tol"] = a.tol;
    ManifestWriter manifest("spectrum", cfg);

    std::vector<qcrit::SpectrumResult> results(grid.size());
    qcrit::parallel_for(grid.size(), [&](std::size_t i) {
        qcrit::ModelParams p;
        p.omega = a.omega;
        p.Omega = a.Omega;
        p.g = grid[i];
        p.n_qubits = a.n_qubits;
        p.validate();
        results[i] = qcrit::diagonalize(qcrit::build_hamiltonian(kind, p, a.cutoff), a.levels);
    });

    const std::vector<std::string> cols = {"g_over_omega", "level", "energy",
                                           "convergence_margin", "converged"};
    std::vector<std::vector<std::string>> rows;
    long n_converged = 0, n_total = 0;
    for (size_t i = 0; i < grid.size(); ++i)
        for (int k = 0; k < a.levels; ++k) {
            const bool ok = results[i].converged(k, a.tol);
            n_converged += ok;
            ++n_total;
            rows.push_back({fmt(grid[i] / a.omega), std::to_string(k),
                            fmt(results[i].eigenvalues[k]),
                            fmt(results[i].convergence_margin[k]), ok ? "1" : "0"});
        }

    OutputPaths o{a.out};
    write_csv(o.data(".csv"), cols, rows);
    write_columns(o.data(".columns"), cols);
    manifest.add_output(o.data(".csv"));
    manifest.add_output(o.data(".columns"));
    manifest.note("converged_rows", n_converged);
    manifest.note("total_rows", n_total);
    manifest.write(o.data(".manifest.json"));
    return 0;
}

// ---------------------------------------------------------------------------
// phase-diagram
// ---------------------------------------------------------------------------

struct PhaseDiagramArgs {
    std::string g_grid, Omega_grid;
    double omega = 1.0, kappa = 1.0, gamma_down = 3.0, gamma_phi = 3.0;
    int n_qubits = 100;
    std::string out;
};

const char* label_letter(qcrit::PhaseLabel l) {
    switch (l) {
    case qcrit::PhaseLabel::Normal: return "N";
    case qcrit::PhaseLabel::Superradiant: return "S";
    case qcrit::PhaseLabel::Bistable: return "B";
    case qcrit::PhaseLabel::Instability: return "I";
    }
    throw qcrit::schema_error("unknown phase label");
}

int cmd_phase_diagram(const PhaseDiagramArgs& a) {
    const std::vector<double> gg = parse_grid(a.g_grid, "phase-diagram --g-grid");
    const std::vector<double> og = parse_grid(a.Omega_grid, "phase-diagram --Omega-grid");
    qcrit::DissipationRates r;
    r.kappa = a.kappa;
    r.gamma_down = a.gamma_down;
    r.gamma_phi = a.gamma_phi;
    r.validate();

    json cfg;
    cfg["g_grid"] = a.g_grid;
    cfg["Omega_grid"] = a.Omega_grid;
    cfg["omega"] = a.omega;
    cfg["kappa"] = a.kappa;
    cfg["gamma_down"] = a.gamma_down;
    cfg["gamma_phi"] = a.gamma_phi;
    cfg["n_qubits"] = a.n_qubits;
    ManifestWriter manifest("phase-diagram", cfg);

    const auto points = qcrit::phase_diagram(gg, og, a.omega, a.n_qubits, r);

    const std::vector<std::string> cols = {
        "g_over_omega",     "Omega_over_omega", "kappa_over_omega",
        "Gamma_down",       "Gamma_phi",        "N",
        "label",            "max_re_eig_normal", "max_re_eig_superradiant"};
    std::vector<std::vector<std::string>> rows;
    long n_marginal = 0;
    for (const auto& pt : points) {
        n_marginal += pt.c.marginal;
        rows.push_back({fmt(pt.g / a.omega), fmt(pt.Omega / a.omega), fmt(a.kappa / a.omega),
                        fmt(a.gamma_down), fmt(a.gamma_phi), std::to_string(a.n_qubits),
                        label_letter(pt.c.label), fmt(pt.c.max_re_normal),
                        fmt(pt.c.max_re_superradiant)});
    }

    OutputPaths o{a.out};
    write_csv(o.data(".csv"), cols, rows);
    write_columns(o.data(".columns"), cols);
    manifest.add_output(o.data(".csv"));
    manifest.add_output(o.data(".columns"));
    manifest.note("marginal_points", n_marginal);
    manifest.write(o.data(".manifest.json"));
    return 0;
}

// ---------------------------------------------------------------------------
// qfi-sweep
// ---------------------------------------------------------------------------

struct QfiSweepArgs {
    std::string protocol = "critical";
    double eta = 100.0, v0 = 0.05, omega = 1.0;
    std::string lambda_grid;
    std::string out;
};

int cmd_qfi_sweep(const QfiSweepArgs& a) {
    if (a.protocol != "critical")
        throw qcrit::schema_error("qfi-sweep: unknown protocol '" + a.protocol + "'");
    const std::vector<double> grid = parse_grid(a.lambda_grid, "qfi-sweep --lambda-grid");
    if (!(a.eta > 0) || !(a.v0 > 0) || !(a.omega > 0))
        throw qcrit::schema_error("qfi-sweep: eta, v0, omega must be > 0");

    const double Omega = a.eta * a.omega;
    const double gp = std::sqrt(a.omega * Omega) / 2.0;

    json cfg;
    cfg["protocol"] = a.protocol;
    cfg["eta"] = a.eta;
    cfg["v0"] = a.v0;
    cfg["omega"] = a.omega;
    cfg["lambda_grid"] = a.lambda_grid;
    ManifestWriter manifest("qfi-sweep", cfg);

    std::vector<std::vector<std::string>> rows(grid.size());
    qcrit::parallel_for(grid.size(), [&](std::size_t i) {
        const double lam = grid[i];
        if (!(lam > 0) || !(lam < 1))
            throw qcrit::domain_error("qfi-sweep: lambda grid must lie in (0, 1)");
        const double g_end = lam * gp;
        const auto dur = qcrit::protocol_duration(a.v0, g_end, a.omega, gp);
        const auto qfi =
            qcrit::qfi_closed_form(g_end, Omega, gp, qcrit::CriticalPhase::Normal);
        const double l2 = lam * lam;
        const double xi = -0.25 * std::log(1.0 - l2);
        const double dxi = -l2 / (4.0 * Omega * (1.0 - l2));
        const auto photon = qcrit::photon_number_fi(xi, dxi);
        const double fi_x = qcrit::homodyne_fi(lam, a.eta, 0.0);
        // Closed-form leakage of the ramp (the integrated value agrees to ~20%,
        // see the adiabatic command for the trajectory itself).
        const double c2 = a.v0 * a.v0 / 32.0 * l2;
        const bool quad = qcrit::in_validity_window(lam, a.eta);
        rows[i] = {fmt(g_end),          fmt(lam),
                   fmt(dur.tau_quadrature), fmt(dur.tau_closed_form),
                   fmt(qfi.qfi_quoted), fmt(qfi.snr),
                   fmt(photon.fi_numeric), fmt(fi_x),
                   fmt(c2),             quad ? "quadratic" : "crossover"};
    });

    const std::vector<std::string> cols = {"g_end",  "lambda",   "tau_quadrature",
                                           "tau_closed_form", "qfi", "snr",
                                           "fi_photon", "fi_homodyne_x", "c2_sq",
                                           "regime_tag"};
    OutputPaths o{a.out};
    write_csv(o.data(".csv"), cols, rows);
    write_columns(o.data(".columns"), cols);
    manifest.add_output(o.data(".csv"));
    manifest.add_output(o.data(".columns"));
    manifest.write(o.data(".manifest.json"));
    return 0;
}

// ---------------------------------------------------------------------------
// adiabatic
// ---------------------------------------------------------------------------

struct AdiabaticArgs {
    double v0 = 0.05, eta = 100.0, g_end_over_gp = 0.9, omega = 1.0;
    int cutoff = 16;
    std::string out;
};

int cmd_adiabatic(const AdiabaticArgs& a) {
    const double Omega = a.eta * a.omega;
    const double gp = std::sqrt(a.omega * Omega) / 2.0;
    qcrit::RampSchedule s{a.v0, a.g_end_over_gp * gp, a.omega, gp};

    json cfg;
    cfg["v0"] = a.v0;
    cfg["eta"] = a.eta;
    cfg["g_end_over_gp"] = a.g_end_over_gp;
    cfg["omega"] = a.omega;
    cfg["cutoff"] = a.cutoff;
    ManifestWriter manifest("adiabatic", cfg);

    const auto res = qcrit::adiabatic_excitation(s, a.eta, a.cutoff);

    const std::vector<std::string> cols = {"t", "g", "c2_sq", "ground_overlap"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : res.trajectory)
        rows.push_back({fmt(p.t), fmt(p.g), fmt(p.c2_sq), fmt(p.ground_overlap)});

    OutputPaths o{a.out};
    write_csv(o.data(".csv"), cols, rows);
    write_columns(o.data(".columns"), cols);
    manifest.add_output(o.data(".csv"));
    manifest.add_output(o.data(".columns"));
    manifest.note("c2_sq_final", fmt(res.c2_sq_final));
    manifest.note("predicted_c2_sq", fmt(res.predicted_c2_sq));
    manifest.write(o.data(".manifest.json"));
    return 0;
}

// ---------------------------------------------------------------------------
// gaussian-advantage
// ---------------------------------------------------------------------------

struct GaussianArgs {
    std::string state;
    std::string out;
};

qcrit::GaussianState load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qcrit::schema_error("gaussian-advantage: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw qcrit::schema_error("state file: " + std::string(e.what()));
    }
    const bool has_sigma = j.contains("sigma");
    const bool has_will = j.contains("williamson");
    if (has_sigma == has_will)
        throw qcrit::schema_error("state file: exactly one of 'sigma' or 'williamson' required");

    for (const auto& [key, _] : j.items()) {
        static const std::vector<std::string> ok = {"q", "sigma", "d", "williamson"};
        if (std::find(ok.begin(), ok.end(), key) == ok.end())
            throw qcrit::schema_error("state file: unknown key '" + key + "'");
    }

    auto to_c = [](const json& pair) -> qcrit::complexd {
        if (!pair.is_array() || pair.size() != 2)
            throw qcrit::schema_error("state file: complex entries must be [re, im] pairs");
        return {pair[0].get<double>(), pair[1].get<double>()};
    };

    if (has_will) {
        const json& w = j["williamson"];
        qcrit::WilliamsonParams p;
        const std::vector<std::pair<std::string, double*>> keys = {
            {"nu", &p.nu},       {"phi1", &p.phi1},     {"phi2", &p.phi2},
            {"theta", &p.theta}, {"Psi", &p.Psi},       {"xi1", &p.xi1},
            {"xi2", &p.xi2},     {"gamma_abs", &p.gamma_abs},
            {"l", &p.l},         {"phi_d1", &p.phi_d1}, {"phi_d2", &p.phi_d2}};
        for (const auto& [key, value] : w.items()) {
            double* slot = nullptr;
            for (const auto& [name, ptr] : keys)
                if (name == key) slot = ptr;
            if (!slot) throw qcrit::schema_error("state file: unknown williamson key '" + key + "'");
            *slot = value.get<double>();
        }
        return qcrit::williamson_build(p);
    }

    qcrit::GaussianState s;
    s.q = j.value("q", 2);
    const int n = 2 * s.q;
    const json& sig = j["sigma"];
    if (!sig.is_array() || static_cast<int>(sig.size()) != n * n)
        throw qcrit::schema_error("state file: 'sigma' must list (2q)^2 [re, im] pairs row-major");
    s.sigma.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) s.sigma(i, k) = to_c(sig[i * n + k]);
    s.d = Eigen::VectorXcd::Zero(n);
    if (j.contains("d")) {
        const json& d = j["d"];
        if (!d.is_array() || static_cast<int>(d.size()) != n)
            throw qcrit::schema_error("state file: 'd' must list 2q [re, im] pairs");
        for (int i = 0; i < n; ++i) s.d(i) = to_c(d[i]);
    }
    s.validate();
    return s;
}

const char* strategy_name(qcrit::Strategy s) {
    switch (s) {
    case qcrit::Strategy::OneMode: return "one-mode";
    case qcrit::Strategy::MachZehnder: return "mach-zehnder";
    case qcrit::Strategy::TheoremBranch: return "theorem-branch";
    }
    throw qcrit::schema_error("unknown strategy");
}

int cmd_gaussian_advantage(const GaussianArgs& a) {
    json cfg;
    cfg["state"] = a.state;
    ManifestWriter manifest("gaussian-advantage", cfg);

    const qcrit::GaussianState s = load_state(a.state);
    const auto nus = qcrit::symplectic_eigenvalues(s);
    const double n_mean = qcrit::mean_photon_number(s);
    const auto rep = qcrit::metrological_advantage(s);

    std::ostringstream os;
    os << "{\n";
    os << "  \"q\": " << s.q << ",\n";
    os << "  \"mean_photon_number\": " << fmt(n_mean) << ",\n";
    os << "  \"symplectic_eigenvalues\": [";
    for (size_t i = 0; i < nus.size(); ++i) os << (i ? ", " : "") << fmt(nus[i]);
    os << "],\n";
    os << "  \"qfi_opt\": " << fmt(rep.qfi_opt) << ",\n";
    os << "  \"qfi_ref_ftql\": " << fmt(rep.qfi_ref) << ",\n";
    os << "  \"advantage\": " << fmt(rep.advantage) << ",\n";
    os << "  \"strategy\": \"" << strategy_name(rep.strategy) << "\",\n";
    os << "  \"v_sign\": " << fmt(rep.v_sign) << ",\n";
    os << "  \"ple_angles\": [" << fmt(rep.a) << ", " << fmt(rep.b) << ", " << fmt(rep.c)
       << "]\n";
    os << "}\n";

    OutputPaths o{a.out};
    write_text(o.data(".json"), os.str());
    manifest.add_output(o.data(".json"));
    manifest.write(o.data(".manifest.json"));
    return 0;
}

// ---------------------------------------------------------------------------
// sw-verify
// ---------------------------------------------------------------------------

struct SwArgs {
    std::string model_class = "rabi-like";
    std::string eps_grid;
    double lambda = 0.5;
    int order = 4;
    double mask = -1.0; // < 0: class default
    std::string out;
};

qcrit::SwModelClass sw_class_from_string(const std::string& s) {
    if (s == "rabi-like") return qcrit::SwModelClass::RabiLike;
    if (s == "two-photon-dicke") return qcrit::SwModelClass::TwoPhotonDicke;
    if (s == "two-photon-rabi") return qcrit::SwModelClass::TwoPhotonRabi;
    if (s == "boson-boson") return qcrit::SwModelClass::BosonBoson;
    throw qcrit::schema_error("unknown SW model class: " + s);
}

int cmd_sw_verify(const SwArgs& a) {
    const qcrit::SwModelClass mc = sw_class_from_string(a.model_class);
    const std::vector<double> grid = parse_grid(a.eps_grid, "sw-verify --eps-grid");
    if (a.order != 1 && a.order != 3 && a.order != 4)
        throw qcrit::schema_error("sw-verify: order must be 1, 3 or 4");
    const double mask = a.mask < 0 ? qcrit::default_mask_fraction(mc) : a.mask;
    const qcrit::AlgebraClass cls = qcrit::default_algebra(mc);

    json cfg;
    cfg["model_class"] = a.model_class;
    cfg["eps_grid"] = a.eps_grid;
    cfg["lambda"] = a.lambda;
    cfg["order"] = a.order;
    cfg["mask_fraction"] = mask;
    ManifestWriter manifest("sw-verify", cfg);

    std::vector<qcrit::SWResult> results(grid.size());
    qcrit::parallel_for(grid.size(), [&](std::size_t i) {
        results[i] = qcrit::sw_transform(mc, cls, grid[i], a.lambda, a.order, mask);
    });

    const std::vector<std::string> cols = {"epsilon",        "lambda",
                                           "order",          "residual_offdiag",
                                           "order2_offdiag", "closed_form_deviation",
                                           "h_norm"};
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<double, double>> series;
    for (size_t i = 0; i < grid.size(); ++i) {
        const double resid = results[i].residual_offdiag_norm.at(a.order);
        rows.push_back({fmt(grid[i]), fmt(a.lambda), std::to_string(a.order), fmt(resid),
                        fmt(results[i].order2_offdiag_norm),
                        fmt(results[i].closed_form_deviation), fmt(results[i].h_norm)});
        if (resid > 0) series.emplace_back(grid[i], resid);
    }

    OutputPaths o{a.out};
    write_csv(o.data(".csv"), cols, rows);
    write_columns(o.data(".columns"), cols);
    manifest.add_output(o.data(".csv"));
    manifest.add_output(o.data(".columns"));
    if (series.size() >= 3) {
        const auto fit = qcrit::critical_exponent_fit(series);
        manifest.note("residual_exponent", fmt(fit.slope));
        manifest.note("residual_exponent_stderr", fmt(fit.stderr_slope));
    }
    manifest.write(o.data(".manifest.json"));
    return 0;
}

// ---------------------------------------------------------------------------
// dissipative-steady
// ---------------------------------------------------------------------------

struct DissArgs {
    double omega = 1.0, Omega = 100.0, g = 0.0, kappa = 1.0, Gamma = 100.0;
    std::string out;
};

int cmd_dissipative_steady(const DissArgs& a) {
    qcrit::CovarianceParams p;
    p.omega = a.omega;
    p.Omega = a.Omega;
    p.g = a.g;
    p.kappa = a.kappa;
    p.Gamma = a.Gamma;
    p.validate();

    json cfg;
    cfg["omega"] = a.omega;
    cfg["Omega"] = a.Omega;
    cfg["g"] = a.g;
    cfg["kappa"] = a.kappa;
    cfg["Gamma"] = a.Gamma;
    ManifestWriter manifest("dissipative-steady", cfg);

    const Eigen::Matrix2d ss = qcrit::covariance_steady_state(p);
    const auto rates = qcrit::covariance_relaxation(p);
    const Eigen::Matrix2d sigma0 = 0.5 * Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d evolved = qcrit::covariance_evolve(sigma0, p, 20.0 / rates.mu_tilde_plus);
    const double deviation = (evolved - ss).norm() / ss.norm();
    const double qfi = qcrit::dissipative_qfi(p);

    std::ostringstream os;
    os << "{\n";
    os << "  \"g_p_D\": " << fmt(p.g_p_D()) << ",\n";
    os << "  \"sigma_xx\": " << fmt(ss(0, 0)) << ",\n";
    os << "  \"sigma_xp\": " << fmt(ss(0, 1)) << ",\n";
    os << "  \"sigma_pp\": " << fmt(ss(1, 1)) << ",\n";
    os << "  \"mu_tilde_plus\": " << fmt(rates.mu_tilde_plus) << ",\n";
    os << "  \"mu_tilde_plus_near\": " << fmt(rates.mu_tilde_plus_near) << ",\n";
    os << "  \"forward_integration_deviation\": " << fmt(deviation) << ",\n";
    os << "  \"qfi_Omega\": " << fmt(qfi) << "\n";
    os << "}\n";

    OutputPaths o{a.out};
    write_text(o.data(".json"), os.str());
    manifest.add_output(o.data(".json"));
    manifest.write(o.data(".manifest.json"));
    return 0;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

struct CompareArgs {
    std::string file, golden;
    double tol = 0.0;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qcrit::schema_error("compare: cannot open " + path);
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            t.columns = cells;
            first = false;
        } else if (!cells.empty()) {
            t.rows.push_back(cells);
        }
    }
    if (t.columns.empty()) throw qcrit::schema_error("compare: " + path + " has no header");
    return t;
}

int cmd_compare(const CompareArgs& a) {
    const Table f = read_csv(a.file);
    const Table g = read_csv(a.golden);
    if (f.columns != g.columns) {
        std::printf("FAIL: column schema mismatch\n");
        std::printf("  file:   ");
        for (const auto& c : f.columns) std::printf("%s ", c.c_str());
        std::printf("\n  golden: ");
        for (const auto& c : g.columns) std::printf("%s ", c.c_str());
        std::printf("\n");
        return 1;
    }
    if (f.rows.size() != g.rows.size()) {
        std::printf("FAIL: row count %zu vs %zu\n", f.rows.size(), g.rows.size());
        return 1;
    }
    bool pass = true;
    for (size_t c = 0; c < f.columns.size(); ++c) {
        double max_dev = 0.0;
        size_t worst_row = 0;
        bool numeric = true, mismatch = false;
        for (size_t r = 0; r < f.rows.size(); ++r) {
            const std::string& x = f.rows[r].at(c);
            const std::string& y = g.rows[r].at(c);
            char* ex = nullptr;
            char* ey = nullptr;
            const double vx = std::strtod(x.c_str(), &ex);
            const double vy = std::strtod(y.c_str(), &ey);
            if (*ex != '\0' || *ey != '\0' || x.empty() || y.empty()) {
                numeric = false;
                if (x != y) {
                    mismatch = true;
                    worst_row = r;
                }
                continue;
            }
            const double dev = std::abs(vx - vy) / std::max({1e-300, std::abs(vx), std::abs(vy)});
            if (dev > max_dev) {
                max_dev = dev;
                worst_row = r;
            }
        }
        if (numeric) {
            const bool ok = max_dev <= a.tol;
            pass = pass && ok;
            std::printf("%s column %-24s max_rel_dev %.3e%s\n", ok ? "ok  " : "FAIL",
                        f.columns[c].c_str(), max_dev,
                        ok ? "" : (" (row " + std::to_string(worst_row + 1) + ")").c_str());
        } else {
            pass = pass && !mismatch;
            std::printf("%s column %-24s %s%s\n", mismatch ? "FAIL" : "ok  ",
                        f.columns[c].c_str(), mismatch ? "string mismatch" : "strings equal",
                        mismatch ? (" (row " + std::to_string(worst_row + 1) + ")").c_str() : "");
        }
    }
    std::printf("%s\n", pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for ultrastrong-coupling phase transitions "
                 "and critical metrology"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    // --- spectrum ---
    auto sa = std::make_shared<SpectrumArgs>();
    auto sb = std::make_shared<ConfigBinder>();
    std::string s_config;
    CLI::App* sp = app.add_subcommand("spectrum", "Exact-diagonalization level sweep");
    sb->bind("model", sp->add_option("--model", sa->model), [sa](const json& v) { sa->model = v.get<std::string>(); });
    sb->bind("omega", sp->add_option("--omega", sa->omega), [sa](const json& v) { sa->omega = v.get<double>(); });
    sb->bind("Omega", sp->add_option("--Omega", sa->Omega), [sa](const json& v) { sa->Omega = v.get<double>(); });
    sb->bind("g_grid", sp->add_option("--g-grid", sa->g_grid), [sa](const json& v) { sa->g_grid = v.get<std::string>(); });
    sb->bind("cutoff", sp->add_option("--cutoff", sa->cutoff), [sa](const json& v) { sa->cutoff = v.get<int>(); });
    sb->bind("levels", sp->add_option("--levels", sa->levels), [sa](const json& v) { sa->levels = v.get<int>(); });
    sb->bind("n_qubits", sp->add_option("--n-qubits", sa->n_qubits), [sa](const json& v) { sa->n_qubits = v.get<int>(); });
    sb->bind("tol", sp->add_option("--tol", sa->tol), [sa](const json& v) { sa->tol = v.get<double>(); });
    sb->bind("out", sp->add_option("--out", sa->out), [sa](const json& v) { sa->out = v.get<std::string>(); });
    sp->add_option("--config", s_config, "JSON run config");
    sp->callback([sa, sb, &s_config]() {
        if (!s_config.empty()) sb->apply(s_config);
        if (sa->g_grid.empty()) throw qcrit::schema_error("spectrum: --g-grid is required");
        if (sa->out.empty()) throw qcrit::schema_error("spectrum: --out is required");
        cmd_spectrum(*sa);
    });

    // --- phase-diagram ---
    auto pa = std::make_shared<PhaseDiagramArgs>();
    auto pb = std::make_shared<ConfigBinder>();
    std::string p_config;
    CLI::App* pd = app.add_subcommand("phase-diagram",
                                      "Dissipative two-photon Dicke phase classification");
    pb->bind("g_grid", pd->add_option("--g-grid", pa->g_grid), [pa](const json& v) { pa->g_grid = v.get<std::string>(); });
    pb->bind("Omega_grid", pd->add_option("--Omega-grid", pa->Omega_grid), [pa](const json& v) { pa->Omega_grid = v.get<std::string>(); });
    pb->bind("omega", pd->add_option("--omega", pa->omega), [pa](const json& v) { pa->omega = v.get<double>(); });
    pb->bind("kappa", pd->add_option("--kappa", pa->kappa), [pa](const json& v) { pa->kappa = v.get<double>(); });
    pb->bind("gamma_down", pd->add_option("--gamma-down", pa->gamma_down), [pa](const json& v) { pa->gamma_down = v.get<double>(); });
    pb->bind("gamma_phi", pd->add_option("--gamma-phi", pa->gamma_phi), [pa](const json& v) { pa->gamma_phi = v.get<double>(); });
    pb->bind("n_qubits", pd->add_option("--n-qubits", pa->n_qubits), [pa](const json& v) { pa->n_qubits = v.get<int>(); });
    pb->bind("out", pd->add_option("--out", pa->out), [pa](const json& v) { pa->out = v.get<std::string>(); });
    pd->add_option("--config", p_config, "JSON run config");
    pd->callback([pa, pb, &p_config]() {
        if (!p_config.empty()) pb->apply(p_config);
        if (pa->g_grid.empty() || pa->Omega_grid.empty())
            throw qcrit::schema_error("phase-diagram: --g-grid and --Omega-grid are required");
        if (pa->out.empty()) throw qcrit::schema_error("phase-diagram: --out is required");
        cmd_phase_diagram(*pa);
    });

    // --- qfi-sweep ---
    auto qa = std::make_shared<QfiSweepArgs>();
    auto qb = std::make_shared<ConfigBinder>();
    std::string q_config;
    CLI::App* qs = app.add_subcommand("qfi-sweep", "Critical-protocol QFI / FI / timing sweep");
    qb->bind("protocol", qs->add_option("--protocol", qa->protocol), [qa](const json& v) { qa->protocol = v.get<std::string>(); });
    qb->bind("eta", qs->add_option("--eta", qa->eta), [qa](const json& v) { qa->eta = v.get<double>(); });
    qb->bind("v0", qs->add_option("--v0", qa->v0), [qa](const json& v) { qa->v0 = v.get<double>(); });
    qb->bind("omega", qs->add_option("--omega", qa->omega), [qa](const json& v) { qa->omega = v.get<double>(); });
    qb->bind("lambda_grid", qs->add_option("--lambda-grid", qa->lambda_grid), [qa](const json& v) { qa->lambda_grid = v.get<std::string>(); });
    qb->bind("out", qs->add_option("--out", qa->out), [qa](const json& v) { qa->out = v.get<std::string>(); });
    qs->add_option("--config", q_config, "JSON run config");
    qs->callback([qa, qb, &q_config]() {
        if (!q_config.empty()) qb->apply(q_config);
        if (qa->lambda_grid.empty()) throw qcrit::schema_error("qfi-sweep: --lambda-grid is required");
        if (qa->out.empty()) throw qcrit::schema_error("qfi-sweep: --out is required");
        cmd_qfi_sweep(*qa);
    });

    // --- adiabatic ---
    auto aa = std::make_shared<AdiabaticArgs>();
    auto ab = std::make_shared<ConfigBinder>();
    std::string a_config;
    CLI::App* ad = app.add_subcommand("adiabatic", "Ramp trajectory in the instantaneous basis");
    ab->bind("v0", ad->add_option("--v0", aa->v0), [aa](const json& v) { aa->v0 = v.get<double>(); });
    ab->bind("eta", ad->add_option("--eta", aa->eta), [aa](const json& v) { aa->eta = v.get<double>(); });
    ab->bind("g_end_over_gp", ad->add_option("--g-end-over-gp", aa->g_end_over_gp), [aa](const json& v) { aa->g_end_over_gp = v.get<double>(); });
    ab->bind("omega", ad->add_option("--omega", aa->omega), [aa](const json& v) { aa->omega = v.get<double>(); });
    ab->bind("cutoff", ad->add_option("--cutoff", aa->cutoff), [aa](const json& v) { aa->cutoff = v.get<int>(); });
    ab->bind("out", ad->add_option("--out", aa->out), [aa](const json& v) { aa->out = v.get<std::string>(); });
    ad->add_option("--config", a_config, "JSON run config");
    ad->callback([aa, ab, &a_config]() {
        if (!a_config.empty()) ab->apply(a_config);
        if (aa->out.empty()) throw qcrit::schema_error("adiabatic: --out is required");
        cmd_adiabatic(*aa);
    });

    // --- gaussian-advantage ---
    auto ga = std::make_shared<GaussianArgs>();
    auto gb = std::make_shared<ConfigBinder>();
    std::string g_config;
    CLI::App* gv = app.add_subcommand("gaussian-advantage",
                                      "Optimal PLE metrology of a two-mode Gaussian state");
    gb->bind("state", gv->add_option("--state", ga->state), [ga](const json& v) { ga->state = v.get<std::string>(); });
    gb->bind("out", gv->add_option("--out", ga->out), [ga](const json& v) { ga->out = v.get<std::string>(); });
    gv->add_option("--config", g_config, "JSON run config");
    gv->callback([ga, gb, &g_config]() {
        if (!g_config.empty()) gb->apply(g_config);
        if (ga->state.empty()) throw qcrit::schema_error("gaussian-advantage: --state is required");
        if (ga->out.empty()) throw qcrit::schema_error("gaussian-advantage: --out is required");
        cmd_gaussian_advantage(*ga);
    });

    // --- sw-verify ---
    auto wa = std::make_shared<SwArgs>();
    auto wb = std::make_shared<ConfigBinder>();
    std::string w_config;
    CLI::App* sw = app.add_subcommand("sw-verify", "Schrieffer-Wolff residual scaling check");
    wb->bind("model_class", sw->add_option("--model-class", wa->model_class), [wa](const json& v) { wa->model_class = v.get<std::string>(); });
    wb->bind("eps_grid", sw->add_option("--eps-grid", wa->eps_grid), [wa](const json& v) { wa->eps_grid = v.get<std::string>(); });
    wb->bind("lambda", sw->add_option("--lambda", wa->lambda), [wa](const json& v) { wa->lambda = v.get<double>(); });
    wb->bind("order", sw->add_option("--order", wa->order), [wa](const json& v) { wa->order = v.get<int>(); });
    wb->bind("mask_fraction", sw->add_option("--mask-fraction", wa->mask), [wa](const json& v) { wa->mask = v.get<double>(); });
    wb->bind("out", sw->add_option("--out", wa->out), [wa](const json& v) { wa->out = v.get<std::string>(); });
    sw->add_option("--config", w_config, "JSON run config");
    sw->callback([wa, wb, &w_config]() {
        if (!w_config.empty()) wb->apply(w_config);
        if (wa->eps_grid.empty()) throw qcrit::schema_error("sw-verify: --eps-grid is required");
        if (wa->out.empty()) throw qcrit::schema_error("sw-verify: --out is required");
        cmd_sw_verify(*wa);
    });

    // --- dissipative-steady ---
    auto da = std::make_shared<DissArgs>();
    auto db = std::make_shared<ConfigBinder>();
    std::string d_config;
    CLI::App* ds = app.add_subcommand("dissipative-steady",
                                      "Dissipative Rabi covariance steady state");
    db->bind("omega", ds->add_option("--omega", da->omega), [da](const json& v) { da->omega = v.get<double>(); });
    db->bind("Omega", ds->add_option("--Omega", da->Omega), [da](const json& v) { da->Omega = v.get<double>(); });
    db->bind("g", ds->add_option("--g", da->g), [da](const json& v) { da->g = v.get<double>(); });
    db->bind("kappa", ds->add_option("--kappa", da->kappa), [da](const json& v) { da->kappa = v.get<double>(); });
    db->bind("Gamma", ds->add_option("--Gamma", da->Gamma), [da](const json& v) { da->Gamma = v.get<double>(); });
    db->bind("out", ds->add_option("--out", da->out), [da](const json& v) { da->out = v.get<std::string>(); });
    ds->add_option("--config", d_config, "JSON run config");
    ds->callback([da, db, &d_config]() {
        if (!d_config.empty()) db->apply(d_config);
        if (da->out.empty()) throw qcrit::schema_error("dissipative-steady: --out is required");
        cmd_dissipative_steady(*da);
    });

    // --- compare ---
    auto ca = std::make_shared<CompareArgs>();
    CLI::App* cp = app.add_subcommand("compare", "Compare a data file against a golden file");
    cp->add_option("--file", ca->file)->required();
    cp->add_option("--golden", ca->golden)->required();
    cp->add_option("--tol", ca->tol);
    int compare_rc = 0;
    cp->callback([ca, &compare_rc]() { compare_rc = cmd_compare(*ca); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    return compare_rc;
}

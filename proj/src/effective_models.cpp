#include "qcrit/effective_models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcrit/errors.hpp"

namespace qcrit {

namespace {

void sort_levels(EffectiveSpectrum& s) {
    std::stable_sort(s.levels.begin(), s.levels.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    if (s.levels.size() >= 2) s.gap = s.levels[1].second - s.levels[0].second;
}

std::string label(const char* stem, int n, char branch) {
    std::ostringstream os;
    os << stem << n << (branch == '-' ? "-" : "+");
    return os.str();
}

} // namespace

EffectiveSpectrum jc_doublet(int n, double g, double omega, double Omega) {
    if (n < 0) throw domain_error("jc_doublet: n must be non-negative");
    const double delta_m = Omega - omega;
    const double split = std::sqrt(delta_m * delta_m / 4.0 + g * g * (n + 1));
    const double center = n * omega + (omega + Omega) / 2.0;
    EffectiveSpectrum s;
    s.levels = {{label("E_", n, '-'), center - split}, {label("E_", n, '+'), center + split}};
    s.validity_note = "JC/RWA: g << omega, |Omega-omega| << omega; energies relative to the"
                      " |down,0> ground state (bare spectrum + Omega/2)";
    sort_levels(s);
    return s;
}

EffectiveSpectrum bloch_siegert_spectrum(int n, double g, double omega, double Omega) {
    if (n < 0) throw domain_error("bloch_siegert_spectrum: n must be non-negative");
    const double omega_bs = g * g / (omega + Omega);
    const double delta_m = Omega - omega;
    EffectiveSpectrum s;
    s.levels.push_back({"E_0", -Omega / 2.0 - omega_bs});
    if (n >= 1) {
        const double split =
            std::sqrt(std::pow(delta_m + 2.0 * n * omega_bs, 2) / 4.0 + n * g * g);
        const double center = (n - 0.5) * omega - omega_bs;
        s.levels.push_back({label("E_", n, '-'), center - split});
        s.levels.push_back({label("E_", n, '+'), center + split});
    }
    s.validity_note = "Bloch-Siegert: g/omega <~ 0.3; absolute energies";
    s.observables["omega_bs"] = omega_bs;
    sort_levels(s);
    return s;
}

double laguerre(int n, double x) {
    if (n < 0) throw domain_error("laguerre: n must be non-negative");
    double lm1 = 1.0; // L_0
    if (n == 0) return lm1;
    double l = 1.0 - x; // L_1
    for (int k = 1; k < n; ++k) {
        double lp1 = ((2.0 * k + 1.0 - x) * l - k * lm1) / (k + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

EffectiveSpectrum grwa_spectrum(int n, double alpha0, double omega, double Omega) {
    if (n < 0) throw domain_error("grwa_spectrum: n must be non-negative");
    const double x = 4.0 * alpha0 * alpha0;
    const double half_split = (Omega / 2.0) * std::exp(-x / 2.0) * laguerre(n, x);
    const double center = (n - alpha0 * alpha0) * omega;
    EffectiveSpectrum s;
    s.levels = {{label("E_", n, '-'), center - std::abs(half_split)},
                {label("E_", n, '+'), center + std::abs(half_split)}};
    s.validity_note = "gRWA: Omega << omega (slow-qubit regime); absolute energies";
    s.observables["splitting"] = 2.0 * std::abs(half_split);
    sort_levels(s);
    return s;
}

A2Renormalized a2_renormalize(double omega, double Omega, double g, double r) {
    if (r <= 0) throw domain_error("a2_renormalize: r must be positive");
    const double u = 1.0 + 4.0 * r * g * g / (omega * Omega);
    A2Renormalized out;
    out.omega_eff = omega * std::sqrt(u);
    out.g_eff = g / std::pow(u, 0.25);
    out.superradiance_possible =
        4.0 * out.g_eff * out.g_eff / (out.omega_eff * Omega) >= 1.0;
    return out;
}

EffectiveSpectrum dicke_polaritons(double omega, double Omega, double g_coll) {
    const double g_p = std::sqrt(omega * Omega) / 2.0;
    if (g_coll > g_p)
        throw domain_error("dicke_polaritons: g exceeds g_p, normal phase invalid");
    const double s2 = omega * omega + Omega * Omega;
    const double d2 = omega * omega - Omega * Omega;
    const double rad = std::sqrt(d2 * d2 + 16.0 * g_coll * g_coll * omega * Omega);
    const double em2 = 0.5 * (s2 - rad);
    const double ep2 = 0.5 * (s2 + rad);
    EffectiveSpectrum s;
    s.levels = {{"E_-", std::sqrt(std::max(em2, 0.0))}, {"E_+", std::sqrt(ep2)}};
    s.validity_note = "Dicke normal phase, thermodynamic limit";
    sort_levels(s);
    return s;
}

MeanFieldSolution rabi_mean_field(double lambda, double eta) {
    if (eta <= 0 || lambda < 0)
        throw domain_error("rabi_mean_field: need eta > 0 and lambda >= 0");
    MeanFieldSolution mf;
    if (lambda <= 1.0) {
        mf.phase = MeanFieldPhase::Normal;
        mf.order_parameter = 0.0;
        mf.ground_energy = -eta / 2.0; // -Omega/2 in units of omega
        mf.spin_tilt = 0.0;
    } else {
        mf.phase = MeanFieldPhase::Ordered;
        const double l2 = lambda * lambda;
        mf.order_parameter = std::sqrt(eta * (l2 * l2 - 1.0) / (4.0 * l2));
        // Continuous branch of the minimized energy; equals -Omega/2 at lambda=1.
        mf.ground_energy = -(eta / 4.0) * (l2 + 1.0 / l2);
        mf.spin_tilt = std::acos(1.0 / l2);
    }
    return mf;
}

EffectiveSpectrum rabi_effective_potential(double lambda, double eta,
                                           RabiPotentialPhase phase) {
    EffectiveSpectrum s;
    switch (phase) {
    case RabiPotentialPhase::Normal: {
        if (lambda >= 1.0)
            throw domain_error("rabi_effective_potential: Normal requires lambda < 1");
        const double u = 1.0 - lambda * lambda;
        const double gap = std::sqrt(u);
        s.squeezing = -0.25 * std::log(u);
        s.gap = gap;
        s.levels = {{"E_0", 0.0}, {"E_1", gap}};
        s.observables["x2"] = 1.0 / std::sqrt(u);
        s.validity_note = "normal phase, lambda < 1 - eta^{-2/3}";
        break;
    }
    case RabiPotentialPhase::Superradiant: {
        if (lambda <= 1.0)
            throw domain_error(
                "rabi_effective_potential: Superradiant requires lambda > 1");
        const double u = 1.0 - std::pow(lambda, -4.0);
        const double gap = std::sqrt(u);
        s.squeezing = -0.25 * std::log(u);
        s.gap = gap;
        s.levels = {{"E_0", 0.0}, {"E_1", gap}};
        s.observables["x2"] = 1.0 / std::sqrt(u); // fluctuation about +-alpha_g
        s.validity_note = "superradiant phase, lambda > 1 + eta^{-2/3}";
        break;
    }
    case RabiPotentialPhase::Quartic: {
        if (eta <= 0)
            throw domain_error("rabi_effective_potential: Quartic requires eta > 0");
        s.observables["c2"] = (1.0 - lambda * lambda) / 4.0;
        s.observables["c4"] = std::pow(lambda, 4.0) / (16.0 * eta);
        s.gap = 0.0;
        s.validity_note = "crossover region |lambda - 1| <~ eta^{-2/3}";
        break;
    }
    }
    return s;
}

double rabi_critical_ansatz(double eta, double lambda) {
    if (eta < 10.0) throw domain_error("rabi_critical_ansatz: eta must be >= 10");
    // (3 l^4 / 2 eta) y^3 + ((1 - l^2)/4) y^2 - 1 = 0, one positive real root.
    const double a = 3.0 * std::pow(lambda, 4.0) / (2.0 * eta);
    const double b = (1.0 - lambda * lambda) / 4.0;
    if (a <= 0.0) {
        if (b <= 0.0)
            throw domain_error("rabi_critical_ansatz: no positive root (lambda too large)");
        return 1.0 / std::sqrt(b);
    }
    auto f = [&](double y) { return a * y * y * y + b * y * y - 1.0; };
    // Bracket the root: f(0) = -1 < 0, f grows without bound.
    double hi = 1.0;
    while (f(hi) < 0.0) hi *= 2.0;
    double lo = hi / 2.0;
    if (f(lo) > 0.0) lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double FiniteTemperature::fluct(double lambda) const {
    if (lambda < 0 || lambda >= 1)
        throw domain_error("finite_temperature fluct: need 0 <= lambda < 1");
    const double gap = omega * std::sqrt(1.0 - lambda);
    const double base = 1.0 / std::sqrt(1.0 - lambda);
    if (T <= 0.0) return base;
    return base / std::tanh(gap / T);
}

FiniteTemperature finite_temperature(double omega, double Omega, double T) {
    if (T < 0) throw domain_error("finite_temperature: T must be non-negative");
    double coth = (T <= 0.0) ? 1.0 : 1.0 / std::tanh(Omega / (2.0 * T));
    FiniteTemperature ft;
    ft.g_p_T = std::sqrt(omega * Omega * coth) / 2.0;
    ft.omega = omega;
    ft.Omega = Omega;
    ft.T = T;
    return ft;
}

MeanFieldSolution two_photon_mean_field(double g, double omega, double Omega, int N) {
    if (N < 1) throw domain_error("two_photon_mean_field: N must be >= 1");
    const double g_c = omega / 2.0;
    if (g >= g_c)
        throw domain_error("two_photon_mean_field: g >= g_c = omega/2 (spectral collapse)");
    const double g_p = std::sqrt(omega * Omega * N) / 2.0;
    MeanFieldSolution mf;
    double beta = 0.0;
    if (g > g_p) {
        const double rc = (g / g_c) * (g / g_c);
        const double l4 = std::pow(g / g_p, 4.0);
        beta = std::sqrt(0.5 * (1.0 - std::sqrt((1.0 - rc) / (l4 - rc))));
        mf.phase = MeanFieldPhase::Ordered;
    }
    mf.order_parameter = beta;
    const double g_alpha = 2.0 * g * beta * std::sqrt(1.0 - beta * beta);
    mf.ground_energy = 4.0 * std::sqrt(omega * omega / 4.0 - g_alpha * g_alpha) +
                       N * Omega * beta * beta - Omega * N / 2.0 - omega / 2.0;
    // Collective spin tilts away from -z: <Jz> = N beta^2 - N/2.
    mf.spin_tilt = std::acos(std::clamp(1.0 - 2.0 * beta * beta, -1.0, 1.0));
    return mf;
}

EffectiveSpectrum two_photon_phase_spectra(double lambda, double g, double g_c,
                                           double Omega) {
    EffectiveSpectrum s;
    const int n_levels = 6;
    if (lambda < 0) throw domain_error("two_photon_phase_spectra: lambda must be >= 0");
    if (lambda < 1.0) {
        const double u = 1.0 - lambda * lambda;
        const double e1 = Omega * std::sqrt(u);
        s.squeezing = 0.25 * std::log(u);
        for (int m = 0; m < n_levels; ++m)
            s.levels.push_back({"E_" + std::to_string(m), m * e1});
        s.observables["wineland"] = std::exp(2.0 * *s.squeezing);
        s.validity_note = "two-photon normal phase (lambda < 1)";
    } else if (lambda > 1.0) {
        if (g >= g_c)
            throw domain_error("two_photon_phase_spectra: g >= g_c (collapse)");
        const double rc = (g / g_c) * (g / g_c);
        const double l4 = std::pow(lambda, 4.0);
        const double arg =
            (l4 / (4.0 * (l4 - 1.0))) *
            std::pow(1.0 + std::sqrt((1.0 - rc) / (l4 - rc)), 2.0);
        s.squeezing = -0.25 * std::log(arg);
        const double e1 = Omega * std::sqrt((l4 - rc) * (1.0 - 1.0 / l4) / (1.0 - rc));
        for (int m = 0; m < n_levels; ++m)
            s.levels.push_back({"E_" + std::to_string(m), m * e1});
        s.validity_note = "two-photon squeezed phase (1 < lambda, g < g_c)";
    } else {
        throw domain_error("two_photon_phase_spectra: lambda = 1 is the critical point");
    }
    sort_levels(s);
    return s;
}

ExponentFit critical_exponent_fit(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 2)
        throw domain_error("critical_exponent_fit: need at least 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(series.size());
    for (const auto& [c, o] : series) {
        if (c <= 0 || o <= 0)
            throw domain_error("critical_exponent_fit: non-positive data in log-log fit");
        const double x = std::log(c), y = std::log(o);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom <= 0) throw numerical_error("critical_exponent_fit: degenerate abscissae");
    ExponentFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (const auto& [c, o] : series) {
        const double r = std::log(o) - (fit.intercept + fit.slope * std::log(c));
        ss += r * r;
    }
    fit.stderr_slope =
        (series.size() > 2) ? std::sqrt(ss / (n - 2.0) * n / denom) : 0.0;
    return fit;
}

} // namespace qcrit

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qcrit {

// A closed-form (approximate) spectrum together with its regime of validity.
// Extra scalar observables (variances, potential coefficients, ...) that some
// closed forms predict alongside the levels are exposed in `observables`.
struct EffectiveSpectrum {
    std::vector<std::pair<std::string, double>> levels; // sorted ascending
    std::string validity_note;
    std::optional<double> squeezing;
    double gap = 0.0; // E1 - E0
    std::map<std::string, double> observables;
};

enum class MeanFieldPhase { Normal, Ordered };

struct MeanFieldSolution {
    double order_parameter = 0.0; // alpha (Rabi) or beta (two-photon HP mode)
    double ground_energy = 0.0;
    double spin_tilt = 0.0; // rotation angle of the tilted spin basis
    MeanFieldPhase phase = MeanFieldPhase::Normal;
};

enum class CriticalRegime { QPT, CPT, NESS };

struct CriticalExponents {
    double beta_exp;
    double gamma_exp;
    double zeta_exp;
    CriticalRegime regime;

    static CriticalExponents qpt() { return {0.5, 0.5, 1.0 / 3.0, CriticalRegime::QPT}; }
    static CriticalExponents cpt() { return {0.5, 1.0, 0.5, CriticalRegime::CPT}; }
    static CriticalExponents ness() { return {0.5, 1.0, 0.5, CriticalRegime::NESS}; }
};

// Jaynes-Cummings doublet n (n >= 0), energies relative to the |g,0> ground
// state (i.e. shifted by +Omega/2 from the bare Hamiltonian spectrum).
EffectiveSpectrum jc_doublet(int n, double g, double omega, double Omega);

// Bloch-Siegert spectrum: ground level plus doublet n (n >= 1 gives the
// doublet; n = 0 returns just the ground level).  Absolute energies, with
// omega_BS = g^2/(omega+Omega).
EffectiveSpectrum bloch_siegert_spectrum(int n, double g, double omega, double Omega);

// Generalized-RWA doublet n for the Rabi model deep in the Omega << omega
// regime; alpha0 = g/omega.  Absolute energies.
EffectiveSpectrum grwa_spectrum(int n, double alpha0, double omega, double Omega);

// Laguerre polynomial L_n(x) by the stable three-term recurrence.
double laguerre(int n, double x);

struct A2Renormalized {
    double omega_eff;
    double g_eff;
    bool superradiance_possible; // 4 g_eff^2/(omega_eff * Omega) >= 1
};

// Diamagnetic A^2 term folded into renormalized cavity parameters;
// r is the Thomas-Reiche-Kuhn ratio (r >= 1 enforces the no-go theorem).
A2Renormalized a2_renormalize(double omega, double Omega, double g, double r);

// Normal-phase Dicke polariton branches E_- <= E_+; throws for g > g_p.
EffectiveSpectrum dicke_polaritons(double omega, double Omega, double g_coll);

// Rabi mean field in units of omega = 1; eta = Omega/omega.
MeanFieldSolution rabi_mean_field(double lambda, double eta);

enum class RabiPotentialPhase { Normal, Superradiant, Quartic };

// Effective low-energy field potential of the Rabi model (omega = 1).
EffectiveSpectrum rabi_effective_potential(double lambda, double eta,
                                           RabiPotentialPhase phase);

// Positive real root y = <x^2> of the squeezed-state-ansatz cubic
// (3 lambda^4 / 2 eta) y^3 + ((1 - lambda^2)/4) y^2 - 1 = 0.
double rabi_critical_ansatz(double eta, double lambda);

struct FiniteTemperature {
    double g_p_T; // thermal critical coupling
    double omega, Omega, T;
    // <x^2> for coupling ratio lambda = g/g_p(T), k_B = 1.
    double fluct(double lambda) const;
};

FiniteTemperature finite_temperature(double omega, double Omega, double T);

// Two-photon Dicke mean field.  Throws for g >= g_c = omega/2 (collapse).
MeanFieldSolution two_photon_mean_field(double g, double omega, double Omega, int N);

// Low-energy spin spectrum of the two-photon Dicke model in the normal
// (lambda < 1) or squeezed/superradiant (lambda > 1, g < g_c) phase.
// lambda = g/g_p; returns levels m = 0..5 and the field squeezing xi_b.
EffectiveSpectrum two_photon_phase_spectra(double lambda, double g, double g_c,
                                           double Omega);

struct ExponentFit {
    double slope;
    double stderr_slope;
    double intercept;
};

// Log-log least-squares slope through (control, observable) pairs.
ExponentFit critical_exponent_fit(const std::vector<std::pair<double, double>>& series);

} // namespace qcrit

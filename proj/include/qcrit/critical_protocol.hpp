#pragma once

#include <vector>

#include "qcrit/errors.hpp"

namespace qcrit {

// Adiabatic ramp g(t) obtained by integrating dg/dt = V(g) with
//   V(g) = v0 * omega * g_p * ((g_p^2 - g^2)/g_p^2)^{3/2}.
// The ansatz integrates in closed form, so the profile and its inverse are
// analytic: g(t) = g_p * u / sqrt(1 + u^2) with u = v0 * omega * t.
struct RampSchedule {
    double v0 = 0.05;
    double g_end = 0.0;
    double omega = 1.0;
    double g_p = 1.0;

    double speed(double g) const;        // V(g)
    double coupling_at(double t) const;  // g(t), strictly increasing
    double time_at(double g) const;      // inverse profile, exact quadrature of 1/V
    void validate() const;               // 0 < g_end < g_p, v0 > 0, omega > 0
};

struct DurationReport {
    double tau_quadrature = 0.0;  // exact integral of dg/V(g); authoritative
    double tau_closed_form = 0.0; // (1/(v0 w)) (g_t/g_p) sqrt(g_p/(g_p - g_t))
    double deviation = 0.0;       // relative difference (ratio tends to sqrt(2) at g_p)
};

DurationReport protocol_duration(double v0, double g_end, double omega, double g_p);

enum class CriticalPhase { Normal, Superradiant };

struct QfiReport {
    // Near-critical closed form: normal phase (1/8 Omega^2)(g_p^2/(g_p^2-g^2))^2;
    // superradiant phase has an additional subleading term.
    double qfi_quoted = 0.0;
    // Exact quadratic-regime value 2 (d xi / d Omega)^2 with
    // xi = -ln(1 - g^2/g_p^2)/4, i.e. (1/8 Omega^2)(g^2/(g_p^2-g^2))^2; agrees
    // with qfi_quoted in the g -> g_p limit (normal phase only).
    double qfi_exact = 0.0;
    double snr = 0.0; // Omega * sqrt(qfi_quoted)
};

QfiReport qfi_closed_form(double g_end, double Omega, double g_p, CriticalPhase phase);

struct PhotonFiReport {
    double fi_numeric = 0.0; // summed over p(2m, xi); tail < 1e-12
    double fi_closed = 0.0;  // 2 (d xi / d Omega)^2
};

// Fisher information of photon-number measurement on the squeezed ground state.
// Throws convergence_error if the series tail is not below 1e-12 within 1e4
// terms, numerical_error if the numeric sum and closed form disagree beyond
// 1e-8 relative.
PhotonFiReport photon_number_fi(double xi, double dxi_dOmega);

// Variance of the quadrature x_phi in the squeezed ground state at coupling
// ratio lambda = g/g_p (vacuum variance normalized to 1).
double quadrature_variance(double lambda, double phi);

// Classical Fisher information of homodyne detection along x_phi, for a
// zero-mean Gaussian marginal with Omega-dependent variance:
// FI = (d v / d Omega)^2 / (2 v^2), with Omega = eta (omega = 1).
// FI/QFI = 1 exactly for phi = 0 and phi = pi/2.
double homodyne_fi(double lambda, double eta, double phi);

// Exact quadratic-regime QFI 2 (d xi/d Omega)^2 at Omega = eta, omega = 1;
// reference for FI/QFI ratios.
double qfi_quadratic_regime(double lambda, double eta);

struct AdiabaticSample {
    double t = 0.0;
    double g = 0.0;
    double c2_sq = 0.0;
    double ground_overlap = 0.0;
};

struct AdiabaticResult {
    std::vector<AdiabaticSample> trajectory;
    double c2_sq_final = 0.0;
    double predicted_c2_sq = 0.0; // (v0^2/32)(g_end/g_p)^2
};

// Integrates the coefficient equations in the instantaneous squeezed-Fock
// eigenbasis of the normal phase (levels 0..cutoff, energies n w sqrt(1-lambda^2),
// drive matrix elements of S^dag dS/dt) with fixed-step RK4.  Throws
// convergence_error if the ground-state population drops below 0.5.
AdiabaticResult adiabatic_excitation(const RampSchedule& schedule, double eta, int cutoff);

// Quadratic-regime validity tag: 1 - lambda > 5 eta^{-2/3}.
bool in_validity_window(double lambda, double eta);

struct ScalingPoint {
    double g_end = 0.0;
    double lambda = 0.0;
    double tau = 0.0; // exact quadrature
    double qfi = 0.0; // quoted near-critical closed form
    bool valid = false;
};

struct ScalingReport {
    std::vector<ScalingPoint> points;
    double slope = 0.0;        // log-log fit of qfi vs tau, valid points only
    double ramsey_slope = 0.0; // same fit for the tau^2 baseline protocol
    int n_valid = 0;
};

// Omega = eta, omega = 1, g_p = sqrt(eta)/2.  Throws domain_error if fewer
// than three grid points remain inside the validity window.
ScalingReport tau4_scaling(double v0, double eta, const std::vector<double>& g_end_over_gp);

} // namespace qcrit

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "qcrit/errors.hpp"

namespace qcrit {

// ---------------------------------------------------------------------------
// Dissipative Rabi model: first-moment mean field (photon loss only)
// ---------------------------------------------------------------------------

// Dissipative critical coupling g_t^D = sqrt(w W / 4) sqrt(1 + kappa^2/w^2).
double rabi_dissipative_threshold(double omega, double Omega, double kappa);

struct RabiMeanFieldFixedPoint {
    std::complex<double> a;          // <a>
    std::complex<double> sigma_plus; // <sigma^+>
    double sigma_z = -1.0;           // <sigma^z> (Pauli convention, +-1)
    std::vector<std::complex<double>> jacobian_eigenvalues; // 5 real coordinates
    bool stable = false;   // all Re(eig) < 1e-9 (the conserved sigma_z mode is marginal)
    bool marginal = false; // some |Re(eig)| <= 1e-9
};

// Mean-field steady states {0, +-alpha_g^D} of the closed first-moment system
//   d<a>/dt      = (-i w - kappa)<a> - i g (<s+> + <s->)
//   d<s+>/dt     =  i W <s+> - i g (<a> + <a*>) <s_z>
//   d<s_z>/dt    = -2 i g (<a> + <a*>)(<s+> - <s->)
// with stability from the numerically differentiated Jacobian (step 1e-7).
// The superradiant pair is returned only for g > g_t^D.
std::vector<RabiMeanFieldFixedPoint> rabi_dissipative_mean_field(double omega, double Omega,
                                                                 double g, double kappa);

// ---------------------------------------------------------------------------
// Dissipative Rabi model: covariance dynamics in the lower spin subspace
// ---------------------------------------------------------------------------

struct CovarianceParams {
    double omega = 1.0;
    double Omega = 100.0;
    double g = 0.0;
    double kappa = 1.0;
    double Gamma = 100.0;

    double P() const { return Omega * Omega / (Gamma * Gamma + Omega * Omega); }
    double g_p() const { return 0.5 * std::sqrt(omega * Omega); }
    // g_p^D = g_p sqrt((1 + Gamma^2/Omega^2)(1 + kappa^2/omega^2))
    double g_p_D() const;
    void validate() const; // positive frequencies, kappa > 0, Gamma >= 0, g >= 0
};

// sigma^L = diag(1, 1 + P Gamma w g^2 / (W kappa g_p^2)) / 2, in (x, p) quadratures.
Eigen::Matrix2d covariance_sigma_L(const CovarianceParams& p);

// d sigma/dt = E sigma + sigma E^T - 2 kappa (sigma - sigma^L), with
// E = [[0, w], [w (P g^2/g_p^2 - 1), 0]].
Eigen::Matrix2d covariance_ode_rhs(const Eigen::Matrix2d& sigma, const CovarianceParams& p);

// Closed-form steady state (squeezed undisplaced thermal state); throws
// domain_error when g >= g_p^D (the mu~_+ mode no longer decays).
Eigen::Matrix2d covariance_steady_state(const CovarianceParams& p);

struct RelaxationRates {
    bool real_branch = false;         // P g^2/g_p^2 >= 1
    double mu_plus = 0.0;             // 2 w sqrt(P g^2/g_p^2 - 1) (real branch)
    double mu_tilde_plus = 0.0;       // 2 kappa - mu_plus, slowest decay rate
    double mu_tilde_plus_near = 0.0;  // 2 kappa (g_p^D - g)/g_p^D (1 + w^2/kappa^2)
};
RelaxationRates covariance_relaxation(const CovarianceParams& p);

// Fixed-step RK4 propagation of the covariance ODE over [0, t].
Eigen::Matrix2d covariance_evolve(const Eigen::Matrix2d& sigma0, const CovarianceParams& p,
                                  double t);

// QFI with respect to Omega of the steady state,
// I = nu^2 Tr[(sigma^-1 sigma_dot)^2] / (2(nu^2+1)), sigma_dot by central finite
// difference in Omega; evaluated through the (a, a^dag)-ordered machinery.
// Throws numerical_error if nu < 1 - 1e-9.
double dissipative_qfi(const CovarianceParams& p);

struct DissScalingPoint {
    double g = 0.0;
    double tau = 0.0; // (1/2 kappa)(g_p^D/(g_p^D - g)) kappa^2/(kappa^2 + w^2)
    double qfi = 0.0;
};
struct DissScalingReport {
    std::vector<DissScalingPoint> points;
    double slope = 0.0; // log-log fit of qfi vs tau
};
DissScalingReport dissipative_qfi_scaling(const CovarianceParams& base,
                                          const std::vector<double>& g_over_gpD);

// ---------------------------------------------------------------------------
// Dissipative two-photon Dicke model: cumulant mean field
// ---------------------------------------------------------------------------

struct DissipationRates {
    double kappa = 0.0;
    double gamma_down = 0.0;
    double gamma_phi = 0.0;

    double gamma_prime() const { return 2.0 * gamma_phi + 0.5 * gamma_down; }
    void validate() const; // all >= 0
};

struct TwoPhotonDickeParams {
    double omega = 1.0;
    double Omega = 1.0;
    double g = 0.0; // collective coupling (g/sqrt(N) convention)
    int N = 100;
};

struct MeanFieldVector {
    double X = 0.0;  // <a^2 + a^dag^2>
    double Y = 0.0;  // <i(a^dag^2 - a^2)>
    double n = 0.0;  // <a^dag a>
    double Jx = 0.0;
    double Jy = 0.0;
    double Jz = 0.0;
};

// The six closed cumulant equations, verbatim.
MeanFieldVector two_photon_mf_rhs(const MeanFieldVector& v, const TwoPhotonDickeParams& p,
                                  const DissipationRates& r);

// g_p^D = sqrt((1/8)(2w + kappa^2/2w)(2W + Gamma'^2/2W)).
double two_photon_gpD(const TwoPhotonDickeParams& p, const DissipationRates& r);

struct SteadyStateSet {
    MeanFieldVector normal;
    std::vector<MeanFieldVector> superradiant; // +- pair, empty if g < g_p^D
    bool superradiant_real = false;
};

// Normal point plus the superradiant pair (when real).  Every returned state
// satisfies ||rhs|| <= 1e-8 N (verified internally, numerical_error otherwise).
// gamma_down = 0 is handled as the documented Z -> infinity limit.
SteadyStateSet two_photon_steady_states(const TwoPhotonDickeParams& p,
                                        const DissipationRates& r);

// Jacobian of the mean-field RHS at an arbitrary point; reduces to the paper's
// M_N at the normal point and M_S at the superradiant points.
Eigen::Matrix<double, 6, 6> two_photon_jacobian(const MeanFieldVector& v,
                                                const TwoPhotonDickeParams& p,
                                                const DissipationRates& r);

struct StabilityResult {
    std::vector<std::complex<double>> eigenvalues;
    double max_real_part = 0.0;
    bool stable = false;   // max Re < -1e-9
    bool marginal = false; // some eigenvalue within +-1e-9 of the axis
};
StabilityResult two_photon_stability(const MeanFieldVector& fixed_point,
                                     const TwoPhotonDickeParams& p, const DissipationRates& r);

enum class PhaseLabel { Normal, Superradiant, Bistable, Instability };

struct PhaseClassification {
    PhaseLabel label = PhaseLabel::Normal;
    double max_re_normal = 0.0;
    double max_re_superradiant = 0.0; // NaN when the superradiant pair is absent
    bool superradiant_exists = false;
    bool marginal = false;
};
PhaseClassification classify_phase(const TwoPhotonDickeParams& p, const DissipationRates& r);

struct PhaseDiagramPoint {
    double g = 0.0;
    double Omega = 0.0;
    PhaseClassification c;
};

// Grid scan in the (g, Omega) plane; parallel over points, deterministic order.
std::vector<PhaseDiagramPoint> phase_diagram(const std::vector<double>& g_values,
                                             const std::vector<double>& Omega_values,
                                             double omega, int N, const DissipationRates& r);

// Forward integration of the mean-field ODE; explicit RK4, switching to an
// implicit trapezoidal rule (Newton, analytic Jacobian) when kappa/omega > 20.
MeanFieldVector two_photon_integrate(const MeanFieldVector& v0, const TwoPhotonDickeParams& p,
                                     const DissipationRates& r, double t_end, double dt);

} // namespace qcrit

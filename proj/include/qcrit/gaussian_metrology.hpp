#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qcrit/fock_core.hpp"

namespace qcrit {

// Gaussian state in the (a_1..a_q, a_1^dag..a_q^dag) ordering:
//   d^i     = <A^i>,
//   sigma^ij = <{A^i - d^i, A^j^dag - d^j^dag}>,
// so sigma = [[A, B], [B*, A*]] with A Hermitian and B symmetric, and
// d = (gamma, gamma*).
struct GaussianState {
    int q = 2;
    Eigen::MatrixXcd sigma; // 2q x 2q
    Eigen::VectorXcd d;     // length 2q

    // Hermiticity / conjugation-block structure (1e-12) and physicality
    // (all symplectic eigenvalues >= 1 - 1e-10).
    void validate() const;
};

// Williamson parameterization of an isotropic two-mode state:
//   sigma = nu * G G^dag,  G = R1(phi1) R2(phi2) B(theta) Ras(Psi) S1(xi1) S2(xi2),
//   gamma = gamma_abs * (e^{-i phi_d1} cos l, e^{-i phi_d2} sin l).
struct WilliamsonParams {
    double nu = 1.0;
    double phi1 = 0.0, phi2 = 0.0, theta = 0.0, Psi = 0.0;
    double xi1 = 0.0, xi2 = 0.0; // canonicalized >= 0
    double gamma_abs = 0.0;
    double l = 0.0, phi_d1 = 0.0, phi_d2 = 0.0;
};

// Two-mode symplectic matrices (each satisfies M K M^dag = K).
Eigen::Matrix4cd sympl_R1(double phi);
Eigen::Matrix4cd sympl_R2(double phi);
Eigen::Matrix4cd sympl_B(double theta);
Eigen::Matrix4cd sympl_Ras(double phi); // R1(phi) R2(-phi)
Eigen::Matrix4cd sympl_S1(double xi);
Eigen::Matrix4cd sympl_S2(double xi);

// K = diag(1_q, -1_q).
Eigen::MatrixXcd symplectic_form(int q);

// |eigenvalues| of K sigma, paired by absolute value (stable sort, ties broken
// by the phase of the eigenvector's first component); one value per mode,
// ascending.
std::vector<double> symplectic_eigenvalues(const GaussianState& s);

GaussianState williamson_build(const WilliamsonParams& p);

// Inverse of williamson_build up to the documented gauge freedoms; the
// round trip reproduces sigma and d to 1e-10.  Throws domain_error for
// non-physical or anisotropic input.
WilliamsonParams williamson_decompose(const GaussianState& s);

// <N> = Tr[sigma]/4 - q/2 + |d|^2/2.
double mean_photon_number(const GaussianState& s);

// Finite-temperature quantum limit 4<N>/nu + 2q(1-nu)/nu.
double ftql(double n_mean, double nu, int q);

// Derivatives of (sigma, d) under the pure-phase channel with per-mode rates
// c_k, i.e. generator Lambda = diag(-i c_1..-i c_q, +i c_1..+i c_q):
//   sigma_dot = Lambda sigma + sigma Lambda^dag,  d_dot = Lambda d.
void phase_channel_derivatives(const GaussianState& s, const std::vector<double>& rates,
                               Eigen::MatrixXcd& sigma_dot, Eigen::VectorXcd& d_dot);

// Derivatives of (sigma, d) under the Mach-Zehnder (mode-mixing) channel
// B(phi) at phi = 0.  This is the channel behind qfi_two_mode_explicit and
// metrological_advantage; a pure phase difference is its PLE conjugate and
// yields the same optimized advantage.
void mach_zehnder_derivatives(const GaussianState& s, Eigen::MatrixXcd& sigma_dot,
                              Eigen::VectorXcd& d_dot);

// QFI of an isotropic state under a PLE channel (nu_dot = 0):
//   I = nu^2 Tr[(sigma^-1 sigma_dot)^2] / (2(1+nu^2)) + 2 d_dot^dag sigma^-1 d_dot,
// cross-checked to 1e-9 against the equivalent -Tr[(K sigma_dot)^2] form.
// Throws domain_error if the symplectic spectrum is anisotropic beyond 1e-8.
double qfi_isotropic(const Eigen::MatrixXcd& sigma, const Eigen::MatrixXcd& sigma_dot,
                     const Eigen::VectorXcd& d, const Eigen::VectorXcd& d_dot);

// One-mode phase estimation QFI for a displaced squeezed thermal state,
//   4 nu^2 sinh^2(2xi)/(nu^2+1)
//     + (4|gamma|^2/nu)(e^{2xi} cos^2(phi-phi_d) + e^{-2xi} sin^2(phi-phi_d)).
// Angle convention: phi - phi_d = 0 puts the displacement along the
// anti-squeezed quadrature; with sigma = nu R(phi') S(xi) S^dag R(phi')^dag
// (the S-matrix convention above) and d = |gamma|(e^{-i phi_d'}, e^{+i phi_d'})
// the formula applies with phi - phi_d = phi' - phi_d' + pi/2.
double qfi_one_mode(double nu, double xi, double gamma_abs, double phi, double phi_d);

// Closed-form Mach-Zehnder-channel QFI for a reduced state with
// theta = Psi = 0.  Throws domain_error if theta/Psi are nonzero beyond
// 1e-10 or if the chi/upsilon normalization identity fails beyond 1e-10.
double qfi_two_mode_explicit(const WilliamsonParams& p);

enum class Strategy { OneMode, MachZehnder, TheoremBranch };

struct AdvantageReport {
    double qfi_opt = 0.0;
    double qfi_ref = 0.0; // FTQL
    double advantage = 0.0;
    Strategy strategy = Strategy::TheoremBranch;
    double v_sign = 0.0; // sign of V^I for the constructive branch
    double a = 0.0, b = 0.0, c = 0.0; // applied PLE Euler angles
};

// Constructive Theorem-1 optimization of the Mach-Zehnder QFI over PLE,
// backed by an Euler-angle grid search (pi/180 plus one refinement pass).
AdvantageReport metrological_advantage(const GaussianState& s);

struct OneModeStrategyResult {
    Strategy strategy = Strategy::OneMode;
    double qfi = 0.0;
    double V = 0.0; // e^{2xi} sin^2(phi_d-phi1) + e^{-2xi} cos^2(phi_d-phi1) - 1
};

// Optimal PLE protocol for mode 1 displaced-squeezed, mode 2 thermal.
OneModeStrategyResult optimal_one_mode_strategy(double nu, double xi, double gamma_abs,
                                                double phi1, double phi_d);

struct SeparabilityResult {
    double Phi = 0.0, Upsilon = 0.0, Xi = 0.0, Aleph = 0.0;
    Eigen::Vector4d pt_eigenvalues; // ascending
    bool separable = false;
};

// Peres-Horodecki check of the N=2 substate of a symmetric two-mode displaced
// thermal state (beta_1 = beta_2 = beta, Theta_1 = Theta_2 = Theta in [0,1)).
SeparabilityResult separability_check_n2(complexd beta, double Theta);

} // namespace qcrit

#pragma once

#include <cmath>
#include <string>

#include "qcrit/errors.hpp"

namespace qcrit {

// Hamiltonian families handled by the truncated-space engine.
enum class ModelKind {
    JC,             // Jaynes-Cummings (rotating-wave) model
    Rabi,           // quantum Rabi model
    Dicke,          // N qubits, one-photon coupling, maximal-j sector
    TwoPhotonDicke, // N qubits, two-photon coupling (a^2 + a^+2)
    DscInteraction, // deep-strong-coupling limit: field + coupling term only
};

ModelKind model_kind_from_string(const std::string& s);
std::string to_string(ModelKind kind);

// Physical parameters (hbar = 1).  Derived ratios are always recomputed from
// the primaries so they can never go stale.
struct ModelParams {
    double omega = 1.0; // boson frequency
    double Omega = 1.0; // qubit frequency
    double g = 0.0;     // coupling strength
    int n_qubits = 1;

    void validate() const {
        if (!(omega > 0.0)) throw domain_error("ModelParams: omega must be > 0");
        if (!(Omega >= 0.0)) throw domain_error("ModelParams: Omega must be >= 0");
        if (!(g >= 0.0)) throw domain_error("ModelParams: g must be >= 0");
        if (n_qubits < 1) throw domain_error("ModelParams: n_qubits must be >= 1");
    }

    double eta() const { return Omega / omega; }
    double eta_tilde() const { return n_qubits * Omega / omega; }

    // Critical coupling of the model family.  One-photon families share
    // g_p = sqrt(omega*Omega)/2 (independent of N in the chosen normalization);
    // the two-photon family has g_p = sqrt(omega*Omega*N)/2 in the
    // spectral-collapse normalization where the collapse sits at g_c = omega/2.
    double g_crit(ModelKind kind) const {
        switch (kind) {
        case ModelKind::TwoPhotonDicke:
            return std::sqrt(omega * Omega * n_qubits) / 2.0;
        default:
            return std::sqrt(omega * Omega) / 2.0;
        }
    }

    double lambda(ModelKind kind) const { return g / g_crit(kind); }
};

inline double g_p_rabi(double omega, double Omega) { return std::sqrt(omega * Omega) / 2.0; }

} // namespace qcrit

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "qcrit/errors.hpp"
#include "qcrit/model_params.hpp"

namespace qcrit {

using complexd = std::complex<double>;

// Dense operator on a truncated Fock (x) spin space.  Basis index = n*dim_spin + s,
// where n is the Fock occupation and s runs over Jz eigenvalues in ascending order
// (s = 0 is the lowest, m = -j).
struct TruncatedOperator {
    int dim_boson = 0;
    int dim_spin = 1;
    bool hermitian = false;
    Eigen::MatrixXcd matrix;

    int dim() const { return dim_boson * dim_spin; }
    void check_hermitian(double tol = 1e-12) const;
};

struct BosonOps {
    TruncatedOperator a;
    TruncatedOperator a_dagger;
    TruncatedOperator number;
};

// Ladder operators on |0>..|cutoff-1>: a[m, m+1] = sqrt(m+1).
BosonOps build_boson_ops(int cutoff);

// Collective spin matrices in the maximal-j sector (dimension n_qubits + 1),
// basis ordered by ascending Jz eigenvalue.
struct SpinOps {
    Eigen::MatrixXcd jx, jy, jz, jp, jm;
    int dim = 0;
};
SpinOps build_spin_ops(int n_qubits);

// Kronecker helpers in the basis convention above (boson index outer).
Eigen::MatrixXcd kron_boson_spin(const Eigen::MatrixXcd& boson, const Eigen::MatrixXcd& spin);

TruncatedOperator build_hamiltonian(ModelKind kind, const ModelParams& p, int cutoff);

// Parity / symmetry generator of the family (phase rotation (x) spin part); the
// built Hamiltonians commute with it.
TruncatedOperator build_symmetry_op(ModelKind kind, const ModelParams& p, int cutoff);

struct SpectrumResult {
    std::vector<double> eigenvalues;      // lowest n_levels, ascending
    Eigen::MatrixXcd eigenvectors;        // orthonormal columns, matching order
    int cutoff = 0;
    // |E_k(cutoff) - E_k(cutoff/2)| per reported level; the cutoff-halving
    // comparison is the convergence diagnostic (it is also what detects the
    // two-photon spectral collapse).
    std::vector<double> convergence_margin;

    bool converged(int level, double tol) const { return convergence_margin.at(level) <= tol; }
};

SpectrumResult diagonalize(const TruncatedOperator& H, int n_levels);

// Full eigendecomposition (all levels), no margins.  Used internally and by tests.
void dense_eigh(const Eigen::MatrixXcd& H, Eigen::VectorXd& evals, Eigen::MatrixXcd& evecs);

enum class SweepParameter { Omega, omega };

// QFI of the ground state via central-difference fidelity susceptibility,
// 8(1 - |<psi(x-d)|psi(x+d)>|)/(2d)^2, with a Richardson consistency check
// between step d and d/2 (the d/2 estimate is returned).
double ground_state_qfi_numeric(ModelKind kind, const ModelParams& p, SweepParameter which,
                                double delta, int cutoff);

// Expectation value <psi|M|psi> (real part; M assumed Hermitian).
double expectation(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& psi);

// Fixed-step RK4 propagation of i dpsi/dt = H(t) psi.  The step satisfies
// ||H||*dt <= 0.1 and is further reduced so the accumulated norm drift stays
// within budget; the drift itself is the accuracy diagnostic (no renormalization).
std::vector<Eigen::VectorXcd> time_evolve(
    const std::function<Eigen::MatrixXcd(double)>& H_of_t,
    const Eigen::VectorXcd& psi0,
    const std::vector<double>& t_grid);

} // namespace qcrit

#pragma once

#include <map>

#include "qcrit/fock_core.hpp"

namespace qcrit {

// Algebra obeyed by a subsystem's ladder operators:
//   SU2:   [O+,O-] = 2 O_z
//   SU11:  [O+,O-] = -2 O_z
//   Boson: [O+,O-] = -1
enum class AlgebraKind { SU2, SU11, Boson };

struct AlgebraClass {
    AlgebraKind p_kind, q_kind;
    int p_size, q_size; // matrix dimension (2j+1 for SU2, cutoff otherwise)
};

// The four model classes of the generalized Schrieffer-Wolff treatment.
enum class SwModelClass { RabiLike, TwoPhotonDicke, TwoPhotonRabi, BosonBoson };

// Representation sizes that keep truncation artifacts below the measured
// residuals for eps <= 0.3.
AlgebraClass default_algebra(SwModelClass mc);

// Mask depth that keeps representation-edge defects out of the residual
// norms for the default sizes above.
double default_mask_fraction(SwModelClass mc);

struct SubsystemOps {
    Eigen::MatrixXcd z, plus, minus; // O_z, O_+, O_- = O_+^dagger
};

struct ClassOperators {
    SubsystemOps P, Q;
};

// Matrices satisfying the declared class commutators (edge rows excluded
// for truncated bosonic representations).
ClassOperators build_class_operators(const AlgebraClass& cls);

struct SWResult {
    TruncatedOperator transformed_H;
    // Frobenius norm of the P_z-block-off-diagonal part of H' vs the
    // diagonalization order (0 = bare H); the top 10% of truncated rows are
    // masked out.
    std::map<int, double> residual_offdiag_norm;
    Eigen::MatrixXcd S1, S3, S4; // generators on the joint space
    double order2_offdiag_norm = 0.0;  // off-diagonal part of C + [S1,B]/2
    double closed_form_deviation = 0.0; // vs the quoted transformed Hamiltonian
    double h_norm = 0.0;               // Frobenius norm of the bare H
};

// H = P_z + eps*lambda*P_x*Q_x + eps^2*Q_z transformed by U = exp(S) with
// S = eps*S1 (+ eps^3*S3 + eps^4*S4 for order 3, 4).  order in {1,3,4}.
// mask_fraction is the share of top truncated-subsystem levels excluded from
// the residual norms; 10% suffices for SU(2)/bosonic subsystems, but the
// SU(1,1) ladders need a deeper margin because their matrix elements grow
// with the level index and edge defects propagate inward.
SWResult sw_transform(SwModelClass mc, const AlgebraClass& cls, double epsilon,
                      double lambda, int order, double mask_fraction = 0.1);

// True iff the effective quadratic coefficient (1 - lambda^2/4)*eps^2 of the
// transformed boson-boson Hamiltonian is <= 0.
bool boson_boson_instability_check(double epsilon, double lambda);

} // namespace qcrit

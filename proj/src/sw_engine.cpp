#include "qcrit/sw_engine.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "qcrit/errors.hpp"

namespace qcrit {

namespace {

using Mat = Eigen::MatrixXcd;

Mat kron(const Mat& a, const Mat& b) {
    Mat out = Mat::Zero(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (a(i, j) != complexd(0, 0))
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

SubsystemOps build_subsystem(AlgebraKind kind, int size) {
    if (size < 2) throw domain_error("build_class_operators: representation size must be >= 2");
    SubsystemOps ops;
    ops.z = Mat::Zero(size, size);
    ops.plus = Mat::Zero(size, size);
    switch (kind) {
    case AlgebraKind::SU2: {
        const double j = (size - 1) / 2.0;
        for (int k = 0; k < size; ++k) {
            const double m = -j + k;
            ops.z(k, k) = m;
            if (k + 1 < size)
                ops.plus(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
        }
        break;
    }
    case AlgebraKind::SU11: {
        // K_0 = (a^dag a + 1/2)/2, K_+ = a^dag^2/2 on a truncated Fock space.
        for (int n = 0; n < size; ++n) {
            ops.z(n, n) = (2.0 * n + 1.0) / 4.0;
            if (n + 2 < size)
                ops.plus(n + 2, n) = 0.5 * std::sqrt(double((n + 1) * (n + 2)));
        }
        break;
    }
    case AlgebraKind::Boson: {
        for (int n = 0; n < size; ++n) {
            ops.z(n, n) = n;
            if (n + 1 < size) ops.plus(n + 1, n) = std::sqrt(double(n + 1));
        }
        break;
    }
    }
    ops.minus = ops.plus.adjoint();
    return ops;
}

bool truncated(AlgebraKind k) { return k != AlgebraKind::SU2; }

// Zero out rows/columns belonging to the top `mask_fraction` of
// truncated-subsystem levels.
void apply_mask(Mat& m, const AlgebraClass& cls, double mask_fraction) {
    const double keep = 1.0 - mask_fraction;
    const int dq = cls.q_size;
    const int p_edge = truncated(cls.p_kind) ? int(std::ceil(keep * cls.p_size)) : cls.p_size;
    const int q_edge = truncated(cls.q_kind) ? int(std::ceil(keep * cls.q_size)) : cls.q_size;
    for (int i = 0; i < m.rows(); ++i) {
        const int p = i / dq, q = i % dq;
        if (p >= p_edge || q >= q_edge) {
            m.row(i).setZero();
            m.col(i).setZero();
        }
    }
}

// Part of m coupling distinct P_z blocks (joint index = p*q_size + q).
Mat block_offdiag(const Mat& m, int q_size) {
    Mat out = m;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (i / q_size == j / q_size) out(i, j) = 0.0;
    return out;
}

Mat block_diag(const Mat& m, int q_size) { return m - block_offdiag(m, q_size); }

} // namespace

AlgebraClass default_algebra(SwModelClass mc) {
    switch (mc) {
    // SU(1,1) and bosonic ladder elements grow with the level index, so the
    // kept (unmasked) rows must stay inside the perturbative radius
    // eps*lambda*||P_row|| < 1; modest representation sizes achieve that.
    case SwModelClass::RabiLike: return {AlgebraKind::SU2, AlgebraKind::Boson, 4, 40};
    case SwModelClass::TwoPhotonDicke: return {AlgebraKind::SU11, AlgebraKind::Boson, 30, 20};
    case SwModelClass::TwoPhotonRabi: return {AlgebraKind::SU11, AlgebraKind::SU2, 30, 4};
    case SwModelClass::BosonBoson: return {AlgebraKind::Boson, AlgebraKind::Boson, 24, 24};
    }
    throw domain_error("default_algebra: unknown model class");
}

double default_mask_fraction(SwModelClass mc) {
    switch (mc) {
    case SwModelClass::RabiLike: return 0.1;
    case SwModelClass::TwoPhotonDicke: return 0.5;
    case SwModelClass::TwoPhotonRabi: return 0.5;
    case SwModelClass::BosonBoson: return 0.3;
    }
    throw domain_error("default_mask_fraction: unknown model class");
}

ClassOperators build_class_operators(const AlgebraClass& cls) {
    return {build_subsystem(cls.p_kind, cls.p_size), build_subsystem(cls.q_kind, cls.q_size)};
}

SWResult sw_transform(SwModelClass mc, const AlgebraClass& cls, double epsilon,
                      double lambda, int order, double mask_fraction) {
    if (epsilon < 0 || epsilon > 0.3)
        throw domain_error("sw_transform: epsilon must lie in [0, 0.3]");
    if (order != 1 && order != 3 && order != 4)
        throw domain_error("sw_transform: order must be 1, 3, or 4");

    const ClassOperators ops = build_class_operators(cls);
    const int dp = cls.p_size, dq = cls.q_size, dim = dp * dq;
    const Mat ip = Mat::Identity(dp, dp), iq = Mat::Identity(dq, dq);
    const complexd I(0, 1);

    const Mat Pz = kron(ops.P.z, iq);
    const Mat Pp = kron(ops.P.plus, iq);
    const Mat Pm = kron(ops.P.minus, iq);
    const Mat Px = 0.5 * (Pp + Pm);
    const Mat Py = 0.5 * I * (Pm - Pp);
    const Mat Qz = kron(ip, ops.Q.z);
    const Mat Qp = kron(ip, ops.Q.plus);
    const Mat Qm = kron(ip, ops.Q.minus);
    const Mat Qx = 0.5 * (Qp + Qm);
    const Mat Qy = 0.5 * I * (Qm - Qp);
    const Mat Qx2 = Qx * Qx;
    const Mat Qx3 = Qx2 * Qx;
    const Mat Qx4 = Qx2 * Qx2;

    const Mat B = lambda * Px * Qx;
    const Mat H = Pz + epsilon * B + epsilon * epsilon * Qz;

    SWResult res;
    res.h_norm = H.norm();
    res.S1 = I * lambda * Py * Qx;
    const double l2 = lambda * lambda, l3 = l2 * lambda, l4 = l2 * l2;
    // S3 and S4 are fixed by requiring that [S_k, P_z] cancels the
    // off-diagonal correction at order k.  At order 3 the correction is
    // (1/3)[S1,[S1,B]] + [S1,C] = -sigma*(l3/3) Qx^3 Px + lambda Py Qy,
    // with sigma = +1 for SU(2) P and -1 for SU(1,1) P (it vanishes for a
    // bosonic P).  At order 4 the off-diagonal part comes from
    // (1/2)[S3,B] = (l2/4) Px^2 * i[Qx,Qy], i.e. (l2/16)(P+^2 + P-^2) for a
    // bosonic Q and -(l2/8)(P+^2 + P-^2) Qz for an SU(2) Q.
    switch (mc) {
    case SwModelClass::RabiLike:
        res.S3 = -I * (l3 / 3.0) * Qx3 * Py - I * lambda * Px * Qy;
        res.S4 = (l2 / 32.0) * (Pp * Pp - Pm * Pm);
        break;
    case SwModelClass::TwoPhotonDicke:
        res.S3 = -I * lambda * Qy * Px + I * (l3 / 3.0) * Py * Qx3;
        res.S4 = (l2 / 32.0) * (Pp * Pp - Pm * Pm);
        break;
    case SwModelClass::TwoPhotonRabi:
        res.S3 = -I * lambda * Qy * Px + I * (l3 / 3.0) * Py * Qx3;
        res.S4 = (l2 / 16.0) * (Pm * Pm - Pp * Pp) * Qz;
        break;
    case SwModelClass::BosonBoson:
        res.S3 = -I * lambda * Qy * Px;
        res.S4 = (l2 / 32.0) * (Pp * Pp - Pm * Pm);
        break;
    }

    // S2 = 0 is asserted, not assumed: the order-2 correction C + [S1,B]/2
    // must already be block-diagonal.
    {
        Mat c2 = Qz + 0.5 * (res.S1 * B - B * res.S1);
        Mat off = block_offdiag(c2, dq);
        apply_mask(off, cls, mask_fraction);
        res.order2_offdiag_norm = off.norm();
    }

    // Closed-form transformed Hamiltonian at order 4 (block-diagonal part).
    const double e2 = epsilon * epsilon, e4 = e2 * e2;
    Mat H_closed;
    switch (mc) {
    case SwModelClass::RabiLike:
        H_closed = Pz + e2 * (Qz + (l2 / 2.0) * Qx2 * Pz) +
                   e4 * ((l2 / 16.0) * (Pp * Pm + Pm * Pp) - (l4 / 8.0) * Qx4 * Pz);
        break;
    case SwModelClass::TwoPhotonDicke:
        H_closed = Pz + e2 * (Qz - (l2 / 2.0) * Qx2 * Pz) +
                   e4 * ((l2 / 16.0) * (Pp * Pm + Pm * Pp) - (l4 / 8.0) * Pz * Qx4);
        break;
    case SwModelClass::TwoPhotonRabi:
        H_closed = Pz + e2 * (Qz - (l2 / 2.0) * Qx2 * Pz) +
                   e4 * (-(l2 / 8.0) * (Pp * Pm + Pm * Pp) * Qz - (l4 / 8.0) * Qx4 * Pz);
        break;
    case SwModelClass::BosonBoson:
        H_closed = Pz + e2 * (Qz - (l2 / 4.0) * Qx2) +
                   e4 * (l2 / 8.0) * (Pp * Pm + Pm * Pp);
        break;
    }

    auto masked_offdiag_norm = [&](const Mat& m) {
        Mat off = block_offdiag(m, dq);
        apply_mask(off, cls, mask_fraction);
        return off.norm();
    };

    {
        Mat bare = H;
        Mat off = block_offdiag(bare, dq);
        apply_mask(off, cls, mask_fraction);
        res.residual_offdiag_norm[0] = off.norm();
    }

    Mat H_prime;
    for (int k : {1, 3, 4}) {
        if (k > order) break;
        Mat S = epsilon * res.S1;
        if (k >= 3) S += epsilon * epsilon * epsilon * res.S3;
        if (k >= 4) S += e4 * res.S4;
        Mat U = S.exp();
        double unit_err = (U * U.adjoint() - Mat::Identity(dim, dim)).norm();
        if (unit_err > 1e-9 * std::sqrt(double(dim)))
            throw numerical_error("sw_transform: matrix exponential lost unitarity");
        H_prime = U * H * U.adjoint();
        res.residual_offdiag_norm[k] = masked_offdiag_norm(H_prime);
    }

    {
        Mat dev = block_diag(H_prime, dq) - block_diag(H_closed, dq);
        apply_mask(dev, cls, mask_fraction);
        res.closed_form_deviation = dev.norm();
    }

    res.transformed_H.dim_boson = dp; // P-major joint index, see header
    res.transformed_H.dim_spin = dq;
    res.transformed_H.hermitian = true;
    res.transformed_H.matrix = H_prime;
    return res;
}

bool boson_boson_instability_check(double epsilon, double lambda) {
    return (1.0 - lambda * lambda / 4.0) * epsilon * epsilon <= 0.0;
}

} // namespace qcrit

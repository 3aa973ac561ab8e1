#include "qcrit/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qcrit {

namespace {
const complexd I_UNIT(0.0, 1.0);
} // namespace

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "jc") return ModelKind::JC;
    if (s == "rabi") return ModelKind::Rabi;
    if (s == "dicke") return ModelKind::Dicke;
    if (s == "two-photon-dicke" || s == "two-photon-rabi") return ModelKind::TwoPhotonDicke;
    if (s == "dsc-interaction") return ModelKind::DscInteraction;
    throw schema_error("unknown model kind: " + s);
}

std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::JC: return "jc";
    case ModelKind::Rabi: return "rabi";
    case ModelKind::Dicke: return "dicke";
    case ModelKind::TwoPhotonDicke: return "two-photon-dicke";
    case ModelKind::DscInteraction: return "dsc-interaction";
    }
    throw schema_error("unknown model kind enum value");
}

void TruncatedOperator::check_hermitian(double tol) const {
    double dev = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol) {
        std::ostringstream os;
        os << "operator flagged Hermitian violates |M - M^+| <= " << tol << " (got " << dev << ")";
        throw numerical_error(os.str());
    }
}

BosonOps build_boson_ops(int cutoff) {
    if (cutoff < 2) throw domain_error("build_boson_ops: cutoff must be >= 2");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    for (int m = 0; m + 1 < cutoff; ++m) a(m, m + 1) = std::sqrt(double(m + 1));
    BosonOps ops;
    ops.a = TruncatedOperator{cutoff, 1, false, a};
    ops.a_dagger = TruncatedOperator{cutoff, 1, false, a.adjoint()};
    ops.number = TruncatedOperator{cutoff, 1, true, a.adjoint() * a};
    return ops;
}

SpinOps build_spin_ops(int n_qubits) {
    if (n_qubits < 1) throw domain_error("build_spin_ops: n_qubits must be >= 1");
    const int dim = n_qubits + 1;
    const double j = n_qubits / 2.0;
    SpinOps s;
    s.dim = dim;
    s.jz = Eigen::MatrixXcd::Zero(dim, dim);
    s.jp = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        double m = -j + k;
        s.jz(k, k) = m;
        if (k + 1 < dim) s.jp(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
    }
    s.jm = s.jp.adjoint();
    s.jx = (s.jp + s.jm) / 2.0;
    s.jy = (s.jp - s.jm) / (2.0 * I_UNIT);
    return s;
}

Eigen::MatrixXcd kron_boson_spin(const Eigen::MatrixXcd& boson, const Eigen::MatrixXcd& spin) {
    const int nb = int(boson.rows());
    const int ns = int(spin.rows());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nb * ns, nb * ns);
    for (int i = 0; i < nb; ++i)
        for (int k = 0; k < nb; ++k) {
            if (boson(i, k) == complexd(0.0, 0.0)) continue;
            out.block(i * ns, k * ns, ns, ns) = boson(i, k) * spin;
        }
    return out;
}

TruncatedOperator build_hamiltonian(ModelKind kind, const ModelParams& p, int cutoff) {
    p.validate();
    if (cutoff < 2) throw domain_error("build_hamiltonian: cutoff must be >= 2");
    const BosonOps b = build_boson_ops(cutoff);
    const double N = p.n_qubits;

    if (kind == ModelKind::JC || kind == ModelKind::Rabi || kind == ModelKind::DscInteraction) {
        if (p.n_qubits != 1)
            throw domain_error("build_hamiltonian: JC/Rabi/DSC require n_qubits = 1");
    }

    const SpinOps s = build_spin_ops(p.n_qubits);
    const Eigen::MatrixXcd id_b = Eigen::MatrixXcd::Identity(cutoff, cutoff);
    const Eigen::MatrixXcd id_s = Eigen::MatrixXcd::Identity(s.dim, s.dim);
    Eigen::MatrixXcd H;

    switch (kind) {
    case ModelKind::JC: {
        // H = w a^+a + (W/2) sz + g (a s+ + a^+ s-); sz = 2 Jz for one qubit.
        Eigen::MatrixXcd sp = s.jp, sm = s.jm, sz = 2.0 * s.jz;
        H = p.omega * kron_boson_spin(b.number.matrix, id_s) +
            (p.Omega / 2.0) * kron_boson_spin(id_b, sz) +
            p.g * (kron_boson_spin(b.a.matrix, sp) + kron_boson_spin(b.a_dagger.matrix, sm));
        break;
    }
    case ModelKind::Rabi:
    case ModelKind::Dicke: {
        // H = w a^+a + W Jz + (2g/sqrt(N)) (a + a^+) Jx; reduces to the Rabi
        // model for N = 1 and keeps g_p = sqrt(w*W)/2 independent of N.
        Eigen::MatrixXcd x = b.a.matrix + b.a_dagger.matrix;
        H = p.omega * kron_boson_spin(b.number.matrix, id_s) +
            p.Omega * kron_boson_spin(id_b, s.jz) +
            (2.0 * p.g / std::sqrt(N)) * kron_boson_spin(x, s.jx);
        break;
    }
    case ModelKind::TwoPhotonDicke: {
        // H = w a^+a + W Jz + (2g/N) Jx (a^2 + a^+2); spectral collapse at
        // g = w/2 for every N in this normalization.
        Eigen::MatrixXcd x2 = b.a.matrix * b.a.matrix + b.a_dagger.matrix * b.a_dagger.matrix;
        H = p.omega * kron_boson_spin(b.number.matrix, id_s) +
            p.Omega * kron_boson_spin(id_b, s.jz) +
            (2.0 * p.g / N) * kron_boson_spin(x2, s.jx);
        break;
    }
    case ModelKind::DscInteraction: {
        // H = w a^+a + g (a + a^+) sx; the qubit splitting is dropped entirely.
        Eigen::MatrixXcd x = b.a.matrix + b.a_dagger.matrix;
        Eigen::MatrixXcd sx = 2.0 * s.jx;
        H = p.omega * kron_boson_spin(b.number.matrix, id_s) +
            p.g * kron_boson_spin(x, sx);
        break;
    }
    default:
        throw schema_error("build_hamiltonian: unknown kind");
    }

    TruncatedOperator op{cutoff, s.dim, true, std::move(H)};
    op.check_hermitian();
    return op;
}

TruncatedOperator build_symmetry_op(ModelKind kind, const ModelParams& p, int cutoff) {
    const SpinOps s = build_spin_ops(p.n_qubits);
    Eigen::MatrixXcd ph = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    Eigen::MatrixXcd spin = Eigen::MatrixXcd::Zero(s.dim, s.dim);
    const double j = p.n_qubits / 2.0;
    if (kind == ModelKind::TwoPhotonDicke) {
        // Four-fold generator: a -> i a combined with Jx -> -Jx (rotation by pi
        // around z in spin space).
        for (int n = 0; n < cutoff; ++n) ph(n, n) = std::exp(I_UNIT * (M_PI / 2.0) * double(n));
        for (int k = 0; k < s.dim; ++k) spin(k, k) = std::exp(I_UNIT * M_PI * (-j + k));
    } else {
        // Z2 parity: exp(i pi (a^+a + Jz + j)).
        for (int n = 0; n < cutoff; ++n) ph(n, n) = std::exp(I_UNIT * M_PI * double(n));
        for (int k = 0; k < s.dim; ++k) spin(k, k) = std::exp(I_UNIT * M_PI * (k + 0.0));
    }
    return TruncatedOperator{cutoff, s.dim, false, kron_boson_spin(ph, spin)};
}

void dense_eigh(const Eigen::MatrixXcd& H, Eigen::VectorXd& evals, Eigen::MatrixXcd& evecs) {
    // Fast path: every model Hamiltonian here is real in the chosen basis.
    if (H.imag().cwiseAbs().maxCoeff() < 1e-13) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.real());
        if (es.info() != Eigen::Success)
            throw numerical_error("dense_eigh: real symmetric eigensolver failed to converge");
        evals = es.eigenvalues();
        evecs = es.eigenvectors().cast<complexd>();
        return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success)
        throw numerical_error("dense_eigh: Hermitian eigensolver failed to converge");
    evals = es.eigenvalues();
    evecs = es.eigenvectors();
}

SpectrumResult diagonalize(const TruncatedOperator& H, int n_levels) {
    if (!H.hermitian) throw domain_error("diagonalize: operator is not Hermitian-flagged");
    H.check_hermitian();
    if (n_levels < 1 || n_levels > H.dim())
        throw domain_error("diagonalize: n_levels out of range");

    Eigen::VectorXd evals;
    Eigen::MatrixXcd evecs;
    dense_eigh(H.matrix, evals, evecs);

    // Margins from the leading principal block, which is exactly the same
    // operator built at half the Fock cutoff (the basis is boson-major and all
    // terms are polynomials in the ladder operators).
    const int half_boson = H.dim_boson / 2;
    const int half_dim = half_boson * H.dim_spin;
    Eigen::VectorXd evals_half;
    Eigen::MatrixXcd evecs_half;
    dense_eigh(H.matrix.topLeftCorner(half_dim, half_dim), evals_half, evecs_half);

    SpectrumResult r;
    r.cutoff = H.dim_boson;
    r.eigenvalues.resize(n_levels);
    r.convergence_margin.resize(n_levels);
    r.eigenvectors = evecs.leftCols(n_levels);
    for (int k = 0; k < n_levels; ++k) {
        r.eigenvalues[k] = evals(k);
        r.convergence_margin[k] =
            (k < half_dim) ? std::abs(evals(k) - evals_half(k))
                           : std::numeric_limits<double>::infinity();
    }
    return r;
}

double expectation(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& psi) {
    return (psi.adjoint() * M * psi)(0, 0).real();
}

namespace {

Eigen::VectorXcd ground_state(ModelKind kind, const ModelParams& p, int cutoff) {
    TruncatedOperator H = build_hamiltonian(kind, p, cutoff);
    Eigen::VectorXd evals;
    Eigen::MatrixXcd evecs;
    dense_eigh(H.matrix, evals, evecs);
    const double scale = std::max(std::abs(evals(0)), std::abs(evals(evals.size() - 1)));
    if (evals(1) - evals(0) < 1e3 * std::numeric_limits<double>::epsilon() * scale)
        throw domain_error("ground_state_qfi_numeric: quasi-degenerate ground state, "
                           "fidelity susceptibility is ill-defined");
    return evecs.col(0);
}

double qfi_from_overlap(ModelKind kind, ModelParams p, SweepParameter which, double delta,
                        int cutoff) {
    ModelParams lo = p, hi = p;
    if (which == SweepParameter::Omega) {
        lo.Omega -= delta;
        hi.Omega += delta;
    } else {
        lo.omega -= delta;
        hi.omega += delta;
    }
    Eigen::VectorXcd a = ground_state(kind, lo, cutoff);
    Eigen::VectorXcd b = ground_state(kind, hi, cutoff);
    double overlap = std::abs((a.adjoint() * b)(0, 0));
    return 8.0 * (1.0 - overlap) / (4.0 * delta * delta);
}

} // namespace

double ground_state_qfi_numeric(ModelKind kind, const ModelParams& p, SweepParameter which,
                                double delta, int cutoff) {
    p.validate();
    if (!(delta > 0.0)) throw domain_error("ground_state_qfi_numeric: delta must be > 0");
    double coarse = qfi_from_overlap(kind, p, which, delta, cutoff);
    double fine = qfi_from_overlap(kind, p, which, delta / 2.0, cutoff);
    double scale = std::max({std::abs(fine), std::abs(coarse), 1e-300});
    if (std::abs(fine - coarse) / scale > 0.01)
        throw convergence_error("ground_state_qfi_numeric: Richardson check failed, "
                                "delta too large (or too small for the round-off floor)");
    return fine;
}

std::vector<Eigen::VectorXcd> time_evolve(
    const std::function<Eigen::MatrixXcd(double)>& H_of_t,
    const Eigen::VectorXcd& psi0,
    const std::vector<double>& t_grid) {
    if (t_grid.size() < 2) throw domain_error("time_evolve: need at least two grid times");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw domain_error("time_evolve: t_grid must be strictly increasing");

    // Step choice: ||H|| dt <= 0.1 always, tightened so the accumulated RK4
    // norm drift stays well below the 1e-8 output requirement.
    Eigen::MatrixXcd H0 = H_of_t(t_grid.front());
    double hnorm = H0.cwiseAbs().rowwise().sum().maxCoeff(); // inf-norm bound
    if (hnorm <= 0.0) hnorm = 1.0;
    const double span = t_grid.back() - t_grid.front();
    double dt = 0.1 / hnorm;
    // local norm error per RK4 step ~ (||H|| dt)^5 / 120; keep total below 1e-10.
    double budget = 1e-10;
    double dt_acc = std::pow(budget * 120.0 / (span * std::pow(hnorm, 5)), 0.25);
    dt = std::min(dt, dt_acc);

    std::vector<Eigen::VectorXcd> out;
    out.reserve(t_grid.size());
    Eigen::VectorXcd psi = psi0;
    out.push_back(psi);

    // Constant-Hamiltonian fast path: skip rebuilding H at every stage.
    Eigen::MatrixXcd H_mid = H_of_t(t_grid.front() + dt / 2.0);
    const bool constant_H = (H0 - H_mid).cwiseAbs().maxCoeff() == 0.0;

    for (size_t seg = 1; seg < t_grid.size(); ++seg) {
        double t = t_grid[seg - 1];
        const double t_end = t_grid[seg];
        while (t < t_end - 1e-15 * std::max(1.0, std::abs(t_end))) {
            double h = std::min(dt, t_end - t);
            const Eigen::MatrixXcd& Ha = constant_H ? H0 : (H_mid = H_of_t(t), H_mid);
            Eigen::VectorXcd k1 = -I_UNIT * (Ha * psi);
            const Eigen::MatrixXcd& Hb =
                constant_H ? H0 : (H_mid = H_of_t(t + h / 2.0), H_mid);
            Eigen::VectorXcd k2 = -I_UNIT * (Hb * (psi + (h / 2.0) * k1));
            Eigen::VectorXcd k3 = -I_UNIT * (Hb * (psi + (h / 2.0) * k2));
            const Eigen::MatrixXcd& Hc = constant_H ? H0 : (H_mid = H_of_t(t + h), H_mid);
            Eigen::VectorXcd k4 = -I_UNIT * (Hc * (psi + h * k3));
            psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
        }
        double drift = std::abs(psi.norm() - 1.0);
        if (drift > 1e-6)
            throw convergence_error("time_evolve: norm drift exceeded 1e-6, step too large");
        out.push_back(psi);
    }
    return out;
}

} // namespace qcrit

#include "qcrit/dissipative_dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qcrit/gaussian_metrology.hpp"
#include "qcrit/parallel.hpp"

namespace qcrit {

namespace {

using Eigen::Matrix2d;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using complexd = std::complex<double>;
using Vector5d = Eigen::Matrix<double, 5, 1>;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

constexpr double kStabilityMargin = 1e-9;

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Rabi first moments in real coordinates (Re a, Im a, Re s+, Im s+, s_z).
Vector5d rabi_mf_rhs(const Vector5d& v, double omega, double Omega, double g, double kappa) {
    const complexd a(v(0), v(1));
    const complexd sp(v(2), v(3));
    const double sz = v(4);
    const complexd i(0.0, 1.0);
    const double x = 2.0 * v(0);     // <a> + <a*>
    const double sx = 2.0 * v(2);    // <s+> + <s->
    const complexd da = (-i * omega - kappa) * a - i * g * sx;
    const complexd dsp = i * Omega * sp - i * g * x * sz;
    const double dsz = -2.0 * (g * x) * (-2.0 * v(3)); // -2ig x (s+ - s-) = 4 g x Im(s+)
    return (Vector5d() << da.real(), da.imag(), dsp.real(), dsp.imag(), dsz).finished();
}

void fill_stability(const Eigen::MatrixXd& jac, std::vector<complexd>& eigs, double& max_re,
                    bool& stable, bool& marginal) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(jac);
    max_re = -std::numeric_limits<double>::infinity();
    marginal = false;
    eigs.clear();
    for (int k = 0; k < jac.rows(); ++k) {
        const complexd ev = es.eigenvalues()(k);
        eigs.push_back(ev);
        if (std::abs(ev.real()) <= kStabilityMargin) marginal = true;
        max_re = std::max(max_re, ev.real());
    }
    stable = max_re < kStabilityMargin;
}

} // namespace

// ---------------------------------------------------------------------------
// Dissipative Rabi mean field
// ---------------------------------------------------------------------------

double rabi_dissipative_threshold(double omega, double Omega, double kappa) {
    if (!(omega > 0) || !(Omega > 0) || kappa < 0)
        throw domain_error("rabi_dissipative_threshold: requires omega, Omega > 0, kappa >= 0");
    return std::sqrt(omega * Omega / 4.0) * std::sqrt(1.0 + kappa * kappa / (omega * omega));
}

std::vector<RabiMeanFieldFixedPoint> rabi_dissipative_mean_field(double omega, double Omega,
                                                                 double g, double kappa) {
    if (!(g >= 0)) throw domain_error("rabi_dissipative_mean_field: requires g >= 0");
    const double gt = rabi_dissipative_threshold(omega, Omega, kappa);

    std::vector<RabiMeanFieldFixedPoint> out;
    auto analyze = [&](RabiMeanFieldFixedPoint fp) {
        Vector5d v;
        v << fp.a.real(), fp.a.imag(), fp.sigma_plus.real(), fp.sigma_plus.imag(), fp.sigma_z;
        const double h = 1e-7;
        Eigen::MatrixXd jac(5, 5);
        for (int j = 0; j < 5; ++j) {
            Vector5d vp = v, vm = v;
            vp(j) += h;
            vm(j) -= h;
            jac.col(j) = (rabi_mf_rhs(vp, omega, Omega, g, kappa) -
                          rabi_mf_rhs(vm, omega, Omega, g, kappa)) /
                         (2.0 * h);
        }
        double max_re = 0.0;
        fill_stability(jac, fp.jacobian_eigenvalues, max_re, fp.stable, fp.marginal);
        out.push_back(std::move(fp));
    };

    RabiMeanFieldFixedPoint normal;
    normal.a = 0.0;
    normal.sigma_plus = 0.0;
    normal.sigma_z = -1.0;
    analyze(normal);

    if (g > gt) {
        const double root = std::sqrt(1.0 - std::pow(gt / g, 4.0));
        const complexd denom(1.0, -kappa / omega);
        const complexd alpha = std::sqrt(Omega / omega) * (g / std::sqrt(Omega * omega)) /
                               denom * root;
        for (double sgn : {+1.0, -1.0}) {
            RabiMeanFieldFixedPoint fp;
            fp.a = sgn * alpha;
            fp.sigma_plus = -sgn * 0.5 * root;
            fp.sigma_z = -(gt * gt) / (g * g);
            analyze(fp);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Covariance dynamics
// ---------------------------------------------------------------------------

double CovarianceParams::g_p_D() const {
    return g_p() * std::sqrt((1.0 + Gamma * Gamma / (Omega * Omega)) *
                             (1.0 + kappa * kappa / (omega * omega)));
}

void CovarianceParams::validate() const {
    if (!(omega > 0) || !(Omega > 0) || !(kappa > 0) || Gamma < 0 || g < 0)
        throw domain_error("CovarianceParams: requires omega, Omega, kappa > 0, Gamma, g >= 0");
}

Eigen::Matrix2d covariance_sigma_L(const CovarianceParams& p) {
    p.validate();
    const double gp2 = p.g_p() * p.g_p();
    Matrix2d s = Matrix2d::Zero();
    s(0, 0) = 0.5;
    s(1, 1) = 0.5 * (1.0 + p.P() * p.Gamma * p.omega * p.g * p.g /
                               (p.Omega * p.kappa * gp2));
    return s;
}

Eigen::Matrix2d covariance_ode_rhs(const Eigen::Matrix2d& sigma, const CovarianceParams& p) {
    p.validate();
    const double gp2 = p.g_p() * p.g_p();
    Matrix2d E = Matrix2d::Zero();
    E(0, 1) = p.omega;
    E(1, 0) = p.omega * (p.P() * p.g * p.g / gp2 - 1.0);
    return E * sigma + sigma * E.transpose() - 2.0 * p.kappa * (sigma - covariance_sigma_L(p));
}

Eigen::Matrix2d covariance_steady_state(const CovarianceParams& p) {
    p.validate();
    const double gpD = p.g_p_D();
    if (p.g >= gpD)
        throw domain_error("covariance_steady_state: g >= g_p^D, mu~_+ mode does not decay");
    const double gp2 = p.g_p() * p.g_p();
    const double wGOk = p.omega * p.Gamma / (p.Omega * p.kappa);
    const double r = p.g * p.g / gp2;
    Matrix2d s = Matrix2d::Zero();
    s(0, 0) = 0.5;
    s(1, 1) = 0.5 * (1.0 - 0.5 * r * p.P() * (1.0 - wGOk));
    const double c = p.g * p.g / (4.0 * (gpD * gpD - p.g * p.g)) * (1.0 + wGOk);
    const double ko = p.kappa / p.omega;
    s(0, 0) += c;
    s(0, 1) += c * ko;
    s(1, 0) += c * ko;
    s(1, 1) += c * ko * ko;
    return s;
}

RelaxationRates covariance_relaxation(const CovarianceParams& p) {
    p.validate();
    RelaxationRates r;
    const double gp2 = p.g_p() * p.g_p();
    const double d = p.P() * p.g * p.g / gp2 - 1.0;
    r.real_branch = d >= 0;
    r.mu_plus = r.real_branch ? 2.0 * p.omega * std::sqrt(d) : 0.0;
    r.mu_tilde_plus = 2.0 * p.kappa - r.mu_plus;
    const double gpD = p.g_p_D();
    r.mu_tilde_plus_near = 2.0 * p.kappa * (gpD - p.g) / gpD *
                           (1.0 + p.omega * p.omega / (p.kappa * p.kappa));
    return r;
}

Eigen::Matrix2d covariance_evolve(const Eigen::Matrix2d& sigma0, const CovarianceParams& p,
                                  double t) {
    p.validate();
    if (t < 0) throw domain_error("covariance_evolve: requires t >= 0");
    // rate scale: |mu| <= 2 max(kappa, omega sqrt(|P g^2/gp^2 - 1|)) + 2 kappa
    const double gp2 = p.g_p() * p.g_p();
    const double scale = 2.0 * p.kappa +
                         2.0 * p.omega * std::sqrt(std::abs(p.P() * p.g * p.g / gp2 - 1.0)) +
                         2.0 * p.omega;
    const double dt_target = 0.05 / scale;
    const long n = std::max<long>(1, static_cast<long>(std::ceil(t / dt_target)));
    const double dt = t / n;
    Matrix2d s = sigma0;
    for (long k = 0; k < n; ++k) {
        const Matrix2d k1 = covariance_ode_rhs(s, p);
        const Matrix2d k2 = covariance_ode_rhs(s + (dt / 2) * k1, p);
        const Matrix2d k3 = covariance_ode_rhs(s + (dt / 2) * k2, p);
        const Matrix2d k4 = covariance_ode_rhs(s + dt * k3, p);
        s += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return s;
}

double dissipative_qfi(const CovarianceParams& p) {
    p.validate();
    const Matrix2d s = covariance_steady_state(p);
    const double nu = 2.0 * std::sqrt(s.determinant());
    if (nu < 1.0 - kStabilityMargin)
        throw numerical_error("dissipative_qfi: non-physical symplectic eigenvalue nu < 1");
    const double h = 1e-5 * p.Omega;
    CovarianceParams pp = p, pm = p;
    pp.Omega += h;
    pm.Omega -= h;
    const Matrix2d ds = (covariance_steady_state(pp) - covariance_steady_state(pm)) / (2.0 * h);
    // I = nu^2 Tr[(sigma^-1 sigma_dot)^2] / (2(nu^2+1)); the trace is basis
    // invariant, so it can be taken directly in (x, p) quadratures.  Unlike the
    // pure-phase-channel case, nu varies with Omega here, so the generic
    // trace form is used rather than the PLE-specialized -Tr[(K sigma_dot)^2].
    const Matrix2d m = s.inverse() * ds;
    return nu * nu * (m * m).trace() / (2.0 * (nu * nu + 1.0));
}

DissScalingReport dissipative_qfi_scaling(const CovarianceParams& base,
                                          const std::vector<double>& g_over_gpD) {
    base.validate();
    const double gpD = base.g_p_D();
    DissScalingReport rep;
    std::vector<double> taus, qfis;
    for (double r : g_over_gpD) {
        if (!(r > 0) || !(r < 1))
            throw domain_error("dissipative_qfi_scaling: grid values must lie in (0, 1)");
        CovarianceParams p = base;
        p.g = r * gpD;
        DissScalingPoint pt;
        pt.g = p.g;
        pt.tau = (1.0 / (2.0 * p.kappa)) * (gpD / (gpD - p.g)) * p.kappa * p.kappa /
                 (p.kappa * p.kappa + p.omega * p.omega);
        pt.qfi = dissipative_qfi(p);
        taus.push_back(pt.tau);
        qfis.push_back(pt.qfi);
        rep.points.push_back(pt);
    }
    if (taus.size() < 2)
        throw domain_error("dissipative_qfi_scaling: need at least two grid points");
    rep.slope = fit_loglog_slope(taus, qfis);
    return rep;
}

// ---------------------------------------------------------------------------
// Two-photon Dicke cumulant mean field
// ---------------------------------------------------------------------------

void DissipationRates::validate() const {
    if (kappa < 0 || gamma_down < 0 || gamma_phi < 0)
        throw domain_error("DissipationRates: all rates must be >= 0");
}

MeanFieldVector two_photon_mf_rhs(const MeanFieldVector& v, const TwoPhotonDickeParams& p,
                                  const DissipationRates& r) {
    r.validate();
    const double sN = std::sqrt(static_cast<double>(p.N));
    const double gp = r.gamma_prime();
    MeanFieldVector d;
    d.X = -r.kappa * v.X + 2.0 * p.omega * v.Y;
    d.Y = -r.kappa * v.Y - 2.0 * p.omega * v.X - 8.0 * p.g * v.Jx / sN -
          16.0 * p.g * v.Jx * v.n / sN;
    d.n = -4.0 * p.g * v.Jx * v.Y / sN - r.kappa * v.n;
    d.Jx = -2.0 * p.Omega * v.Jy - gp * v.Jx;
    d.Jy = 2.0 * p.Omega * v.Jx - gp * v.Jy - 2.0 * p.g * v.Jz * v.X / sN;
    d.Jz = 2.0 * p.g * v.Jy * v.X / sN - r.gamma_down * v.Jz - r.gamma_down * p.N / 2.0;
    return d;
}

double two_photon_gpD(const TwoPhotonDickeParams& p, const DissipationRates& r) {
    r.validate();
    if (!(p.omega > 0) || !(p.Omega > 0))
        throw domain_error("two_photon_gpD: requires omega, Omega > 0");
    const double gp = r.gamma_prime();
    return std::sqrt(0.125 * (2.0 * p.omega + r.kappa * r.kappa / (2.0 * p.omega)) *
                     (2.0 * p.Omega + gp * gp / (2.0 * p.Omega)));
}

SteadyStateSet two_photon_steady_states(const TwoPhotonDickeParams& p,
                                        const DissipationRates& r) {
    r.validate();
    if (p.N < 1) throw domain_error("two_photon_steady_states: requires N >= 1");
    SteadyStateSet set;
    set.normal.Jz = -p.N / 2.0;

    const double gpD = two_photon_gpD(p, r);
    if (p.g > 0) {
        if (!(r.kappa > 0))
            throw domain_error("two_photon_steady_states: superradiant branch needs kappa > 0");
        const double sN = std::sqrt(static_cast<double>(p.N));
        const double gp = r.gamma_prime();
        double Jz = 0.0, Jx2 = -1.0;
        if (r.gamma_down > 0) {
            // The pair is real wherever the Jz discriminant and Jx^2 are
            // non-negative; for g >= g_p^D this always holds, but the branch
            // extends slightly below g_p^D (the bistability window).
            const double Z = p.omega * gp / (2.0 * p.Omega * p.N * r.gamma_down);
            const double disc = 0.25 * (1.0 + Z) * (1.0 + Z) - Z * (gpD / p.g) * (gpD / p.g);
            if (disc >= 0) {
                Jz = 0.5 * p.N * (-(1.0 + Z) / 2.0 + std::sqrt(disc));
                Jx2 = 0.25 * p.N * (r.kappa * r.kappa + 4.0 * p.omega * p.omega) /
                          (16.0 * p.g * p.g) +
                      p.omega * p.Omega * Jz / (4.0 * p.Omega * p.Omega + gp * gp);
            }
        } else if (p.g >= gpD) {
            // Z -> infinity limit: Jx -> 0 and Jz -> -(N/2)(g_p^D/g)^2.
            Jz = -0.5 * p.N * (gpD / p.g) * (gpD / p.g);
            Jx2 = 0.0;
        }
        set.superradiant_real = Jx2 >= 0;
        if (set.superradiant_real) {
            for (double sgn : {+1.0, -1.0}) {
                MeanFieldVector v;
                v.Jz = Jz;
                v.Jx = sgn * std::sqrt(Jx2);
                v.Jy = -gp / (2.0 * p.Omega) * v.Jx;
                // omega_c in the quoted <X> denominator read as omega.
                const double den = -0.25 * p.N *
                                       (r.kappa * r.kappa + 4.0 * p.omega * p.omega) +
                                   16.0 * p.g * p.g * v.Jx * v.Jx;
                v.X = 4.0 * p.g * p.omega * sN * v.Jx / den;
                v.Y = r.kappa / (2.0 * p.omega) * v.X;
                v.n = -4.0 * p.g * v.Jx * v.Y / (r.kappa * sN);
                set.superradiant.push_back(v);
            }
        }
    }

    auto residual = [&](const MeanFieldVector& v) {
        const MeanFieldVector d = two_photon_mf_rhs(v, p, r);
        return std::sqrt(d.X * d.X + d.Y * d.Y + d.n * d.n + d.Jx * d.Jx + d.Jy * d.Jy +
                         d.Jz * d.Jz);
    };
    if (residual(set.normal) > 1e-8 * p.N)
        throw numerical_error("two_photon_steady_states: normal-point residual too large");
    for (const auto& v : set.superradiant)
        if (residual(v) > 1e-8 * p.N)
            throw numerical_error("two_photon_steady_states: superradiant residual too large");
    return set;
}

Eigen::Matrix<double, 6, 6> two_photon_jacobian(const MeanFieldVector& v,
                                                const TwoPhotonDickeParams& p,
                                                const DissipationRates& r) {
    const double sN = std::sqrt(static_cast<double>(p.N));
    const double gp = r.gamma_prime();
    Matrix6d m = Matrix6d::Zero();
    m(0, 0) = -r.kappa;
    m(0, 1) = 2.0 * p.omega;
    m(1, 0) = -2.0 * p.omega;
    m(1, 1) = -r.kappa;
    m(1, 2) = -16.0 * p.g * v.Jx / sN;
    m(1, 3) = -8.0 * p.g * (1.0 + 2.0 * v.n) / sN;
    m(2, 1) = -4.0 * p.g * v.Jx / sN;
    m(2, 2) = -r.kappa;
    m(2, 3) = -4.0 * p.g * v.Y / sN;
    m(3, 3) = -gp;
    m(3, 4) = -2.0 * p.Omega;
    m(4, 0) = -2.0 * p.g * v.Jz / sN;
    m(4, 3) = 2.0 * p.Omega;
    m(4, 4) = -gp;
    m(4, 5) = -2.0 * p.g * v.X / sN;
    m(5, 0) = 2.0 * p.g * v.Jy / sN;
    m(5, 4) = 2.0 * p.g * v.X / sN;
    m(5, 5) = -r.gamma_down;
    return m;
}

StabilityResult two_photon_stability(const MeanFieldVector& fixed_point,
                                     const TwoPhotonDickeParams& p, const DissipationRates& r) {
    StabilityResult res;
    const Matrix6d jac = two_photon_jacobian(fixed_point, p, r);
    fill_stability(jac, res.eigenvalues, res.max_real_part, res.stable, res.marginal);
    res.stable = res.max_real_part < -kStabilityMargin;
    return res;
}

PhaseClassification classify_phase(const TwoPhotonDickeParams& p, const DissipationRates& r) {
    const SteadyStateSet set = two_photon_steady_states(p, r);
    PhaseClassification c;
    const StabilityResult sn = two_photon_stability(set.normal, p, r);
    c.max_re_normal = sn.max_real_part;
    c.marginal = sn.marginal;
    bool super_stable = false;
    c.max_re_superradiant = std::numeric_limits<double>::quiet_NaN();
    if (!set.superradiant.empty()) {
        c.superradiant_exists = true;
        const StabilityResult ss = two_photon_stability(set.superradiant.front(), p, r);
        c.max_re_superradiant = ss.max_real_part;
        c.marginal = c.marginal || ss.marginal;
        super_stable = ss.stable;
    }
    if (sn.stable && super_stable)
        c.label = PhaseLabel::Bistable;
    else if (sn.stable)
        c.label = PhaseLabel::Normal;
    else if (super_stable)
        c.label = PhaseLabel::Superradiant;
    else
        c.label = PhaseLabel::Instability;
    return c;
}

std::vector<PhaseDiagramPoint> phase_diagram(const std::vector<double>& g_values,
                                             const std::vector<double>& Omega_values,
                                             double omega, int N, const DissipationRates& r) {
    const size_t total = g_values.size() * Omega_values.size();
    std::vector<PhaseDiagramPoint> out(total);
    parallel_for(total, [&](size_t k) {
        const size_t i = k / Omega_values.size();
        const size_t j = k % Omega_values.size();
        TwoPhotonDickeParams p;
        p.omega = omega;
        p.Omega = Omega_values[j];
        p.g = g_values[i];
        p.N = N;
        out[k].g = p.g;
        out[k].Omega = p.Omega;
        out[k].c = classify_phase(p, r);
    });
    return out;
}

MeanFieldVector two_photon_integrate(const MeanFieldVector& v0, const TwoPhotonDickeParams& p,
                                     const DissipationRates& r, double t_end, double dt) {
    if (!(t_end >= 0) || !(dt > 0))
        throw domain_error("two_photon_integrate: requires t_end >= 0 and dt > 0");
    auto pack = [](const MeanFieldVector& v) {
        return (Vector6d() << v.X, v.Y, v.n, v.Jx, v.Jy, v.Jz).finished();
    };
    auto unpack = [](const Vector6d& u) {
        MeanFieldVector v;
        v.X = u(0);
        v.Y = u(1);
        v.n = u(2);
        v.Jx = u(3);
        v.Jy = u(4);
        v.Jz = u(5);
        return v;
    };
    auto f = [&](const Vector6d& u) { return pack(two_photon_mf_rhs(unpack(u), p, r)); };

    const long n = std::max<long>(1, static_cast<long>(std::ceil(t_end / dt)));
    const double h = t_end / n;
    Vector6d u = pack(v0);
    const bool stiff = r.kappa / p.omega > 20.0;
    for (long k = 0; k < n; ++k) {
        if (!stiff) {
            const Vector6d k1 = f(u);
            const Vector6d k2 = f(u + (h / 2) * k1);
            const Vector6d k3 = f(u + (h / 2) * k2);
            const Vector6d k4 = f(u + h * k3);
            u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } else {
            // implicit trapezoidal: u1 = u + h/2 (f(u) + f(u1)), Newton with the
            // analytic Jacobian
            const Vector6d fu = f(u);
            Vector6d u1 = u + h * fu;
            for (int it = 0; it < 20; ++it) {
                const Vector6d res = u1 - u - (h / 2.0) * (fu + f(u1));
                if (res.norm() < 1e-12 * (1.0 + u1.norm())) break;
                const Matrix6d J =
                    Matrix6d::Identity() - (h / 2.0) * two_photon_jacobian(unpack(u1), p, r);
                u1 -= J.partialPivLu().solve(res);
            }
            u = u1;
        }
        if (!u.allFinite())
            throw numerical_error("two_photon_integrate: trajectory diverged");
    }
    return unpack(u);
}

} // namespace qcrit

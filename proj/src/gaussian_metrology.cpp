#include "qcrit/gaussian_metrology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcrit/errors.hpp"
#include "qcrit/parallel.hpp"

namespace qcrit {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr double pi = std::numbers::pi;

Matrix4cd phase_pair(complexd m1, complexd m2) {
    Matrix4cd m = Matrix4cd::Zero();
    m(0, 0) = m1;
    m(1, 1) = m2;
    m(2, 2) = std::conj(m1);
    m(3, 3) = std::conj(m2);
    return m;
}

// Generator of the pure-phase channel with per-mode rates c_k.
MatrixXcd phase_generator(int q, const std::vector<double>& rates) {
    MatrixXcd m = MatrixXcd::Zero(2 * q, 2 * q);
    for (int k = 0; k < q; ++k) {
        m(k, k) = complexd(0, -rates[size_t(k)]);
        m(q + k, q + k) = complexd(0, rates[size_t(k)]);
    }
    return m;
}

struct NuInfo {
    std::vector<double> per_mode; // ascending
    double mean = 0.0;
    double spread = 0.0; // max |nu_i - mean|
};

NuInfo nu_info(const MatrixXcd& sigma) {
    const int q = int(sigma.rows()) / 2;
    MatrixXcd m = symplectic_form(q) * sigma;
    Eigen::ComplexEigenSolver<MatrixXcd> es(m);
    if (es.info() != Eigen::Success)
        throw numerical_error("symplectic_eigenvalues: eigensolver failed");
    struct Entry {
        double abs_val;
        double phase; // of the eigenvector's first component, for tie-breaks
    };
    std::vector<Entry> entries;
    for (int i = 0; i < 2 * q; ++i)
        entries.push_back({std::abs(es.eigenvalues()(i)), std::arg(es.eigenvectors()(0, i))});
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.abs_val != b.abs_val) return a.abs_val < b.abs_val;
        return a.phase < b.phase;
    });
    NuInfo info;
    // Eigenvalues of K*sigma come in +/- pairs; adjacent absolute values
    // belong to the same mode.
    for (int k = 0; k < q; ++k)
        info.per_mode.push_back(0.5 * (entries[size_t(2 * k)].abs_val +
                                       entries[size_t(2 * k + 1)].abs_val));
    for (double v : info.per_mode) info.mean += v;
    info.mean /= q;
    for (double v : info.per_mode)
        info.spread = std::max(info.spread, std::abs(v - info.mean));
    return info;
}

// Takagi factorization M = v diag(s) v^T of a 2x2 complex symmetric multiple
// of a unitary (M = s u u^T): its real and imaginary parts commute, so a real
// orthogonal O diagonalizes both and v = O e^{i arg(z)/2}.
void takagi_scaled_unitary(const Matrix2cd& m, Matrix2cd& v, Eigen::Vector2d& s) {
    Eigen::Matrix2d x = m.real(), y = m.imag();
    x = 0.5 * (x + x.transpose().eval());
    y = 0.5 * (y + y.transpose().eval());
    Eigen::Matrix2d basis = std::abs(x(0, 1)) >= std::abs(y(0, 1)) ? x : y;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(basis);
    Eigen::Matrix2d o = es.eigenvectors();
    Matrix2cd diag = o.transpose() * m * o;
    v = Matrix2cd::Zero();
    for (int k = 0; k < 2; ++k) {
        complexd z = diag(k, k);
        s(k) = std::abs(z);
        v.col(k) = o.col(k).cast<complexd>() * std::exp(complexd(0, 0.5 * std::arg(z)));
    }
}

double wrap_angle(double a) {
    a = std::fmod(a, 2 * pi);
    if (a < 0) a += 2 * pi;
    return a;
}

// Mach-Zehnder channel generator dB/dtheta at theta = 0 (two modes).
Matrix4cd mz_generator() {
    Matrix4cd lam = Matrix4cd::Zero();
    lam(0, 1) = 1; lam(1, 0) = -1;
    lam(2, 3) = 1; lam(3, 2) = -1;
    return lam;
}

// QFI of an isotropic two-mode state under the Mach-Zehnder channel.
double mz_qfi_with_nu(const MatrixXcd& sigma, const VectorXcd& d, double nu) {
    Matrix4cd lam = mz_generator();
    MatrixXcd sigma_dot = lam * sigma + sigma * lam.adjoint();
    VectorXcd d_dot = lam * d;
    MatrixXcd inv = sigma.inverse();
    double trace_term =
        nu * nu * (inv * sigma_dot * inv * sigma_dot).trace().real() / (2.0 * (1.0 + nu * nu));
    double disp_term = 2.0 * (d_dot.adjoint() * inv * d_dot)(0).real();
    return trace_term + disp_term;
}

GaussianState apply_ple(const GaussianState& s, const Matrix4cd& g) {
    GaussianState out = s;
    out.sigma = g * s.sigma * g.adjoint();
    out.d = g * s.d;
    return out;
}

} // namespace

Eigen::Matrix4cd sympl_R1(double phi) { return phase_pair(std::exp(complexd(0, -phi)), 1.0); }

Eigen::Matrix4cd sympl_R2(double phi) { return phase_pair(1.0, std::exp(complexd(0, -phi))); }

Eigen::Matrix4cd sympl_Ras(double phi) {
    return phase_pair(std::exp(complexd(0, -phi)), std::exp(complexd(0, phi)));
}

Eigen::Matrix4cd sympl_B(double theta) {
    Matrix4cd m = Matrix4cd::Zero();
    const double c = std::cos(theta), s = std::sin(theta);
    m(0, 0) = c; m(0, 1) = s;
    m(1, 0) = -s; m(1, 1) = c;
    m(2, 2) = c; m(2, 3) = s;
    m(3, 2) = -s; m(3, 3) = c;
    return m;
}

Eigen::Matrix4cd sympl_S1(double xi) {
    Matrix4cd m = Matrix4cd::Identity();
    m(0, 0) = std::cosh(xi);
    m(0, 2) = -std::sinh(xi);
    m(2, 0) = -std::sinh(xi);
    m(2, 2) = std::cosh(xi);
    return m;
}

Eigen::Matrix4cd sympl_S2(double xi) {
    Matrix4cd m = Matrix4cd::Identity();
    m(1, 1) = std::cosh(xi);
    m(1, 3) = -std::sinh(xi);
    m(3, 1) = -std::sinh(xi);
    m(3, 3) = std::cosh(xi);
    return m;
}

Eigen::MatrixXcd symplectic_form(int q) {
    MatrixXcd k = MatrixXcd::Zero(2 * q, 2 * q);
    for (int i = 0; i < q; ++i) {
        k(i, i) = 1.0;
        k(q + i, q + i) = -1.0;
    }
    return k;
}

void GaussianState::validate() const {
    if (q < 1 || sigma.rows() != 2 * q || sigma.cols() != 2 * q || d.size() != 2 * q)
        throw domain_error("GaussianState: inconsistent dimensions");
    if ((sigma - sigma.adjoint()).norm() > 1e-12 * std::max(1.0, sigma.norm()))
        throw domain_error("GaussianState: covariance matrix is not Hermitian");
    MatrixXcd a = sigma.topLeftCorner(q, q);
    MatrixXcd b = sigma.topRightCorner(q, q);
    double block_dev = (sigma.bottomRightCorner(q, q) - a.conjugate()).norm() +
                       (sigma.bottomLeftCorner(q, q) - b.conjugate()).norm();
    if (block_dev > 1e-12 * std::max(1.0, sigma.norm()))
        throw domain_error("GaussianState: covariance matrix lacks conjugation block structure");
    if ((d.tail(q) - d.head(q).conjugate()).norm() > 1e-12 * std::max(1.0, d.norm()))
        throw domain_error("GaussianState: displacement halves are not conjugate");
    for (double nu : nu_info(sigma).per_mode)
        if (nu < 1.0 - 1e-10)
            throw domain_error("GaussianState: non-physical covariance (nu < 1)");
}

std::vector<double> symplectic_eigenvalues(const GaussianState& s) {
    return nu_info(s.sigma).per_mode;
}

GaussianState williamson_build(const WilliamsonParams& p) {
    if (p.nu < 1.0) throw domain_error("williamson_build: nu must be >= 1");
    Matrix4cd g = sympl_R1(p.phi1) * sympl_R2(p.phi2) * sympl_B(p.theta) * sympl_Ras(p.Psi) *
                  sympl_S1(p.xi1) * sympl_S2(p.xi2);
    GaussianState s;
    s.q = 2;
    s.sigma = p.nu * g * g.adjoint();
    s.d = VectorXcd(4);
    complexd g1 = p.gamma_abs * std::cos(p.l) * std::exp(complexd(0, -p.phi_d1));
    complexd g2 = p.gamma_abs * std::sin(p.l) * std::exp(complexd(0, -p.phi_d2));
    s.d << g1, g2, std::conj(g1), std::conj(g2);
    return s;
}

WilliamsonParams williamson_decompose(const GaussianState& s) {
    s.validate();
    if (s.q != 2) throw domain_error("williamson_decompose: two-mode states only");
    NuInfo nu = nu_info(s.sigma);
    if (nu.spread > 1e-8 * std::max(1.0, nu.mean))
        throw domain_error("williamson_decompose: anisotropic symplectic spectrum");

    WilliamsonParams p;
    p.nu = nu.mean;

    // sigma = nu [[u cosh(2xi) u^dag, -u sinh(2xi) u^T], [c.c.]] with
    // u = diag(e^{-i phi1}, e^{-i phi2}) Rot(theta) diag(e^{-i Psi}, e^{i Psi}).
    Matrix2cd a = s.sigma.topLeftCorner(2, 2) / p.nu;
    Matrix2cd b = s.sigma.topRightCorner(2, 2) / p.nu;
    Eigen::SelfAdjointEigenSolver<Matrix2cd> es(a);
    if (es.info() != Eigen::Success)
        throw numerical_error("williamson_decompose: eigensolver failed");
    // Descending order: xi1 >= xi2 >= 0 by convention.
    Eigen::Vector2d cosh2xi(es.eigenvalues()(1), es.eigenvalues()(0));
    Matrix2cd u_tilde;
    u_tilde.col(0) = es.eigenvectors().col(1);
    u_tilde.col(1) = es.eigenvectors().col(0);

    // Phase gauge of the eigenvectors, fixed against the B block:
    // u_tilde^dag (-B) conj(u_tilde) must equal D sinh(2xi) D with a diagonal
    // phase D (distinct xi), or sinh(2xi) times a symmetric unitary (xi1=xi2).
    // xi is read off the same block through asinh, which (unlike acosh on the
    // A-block eigenvalues) stays well-conditioned at xi = 0.
    Matrix2cd m = u_tilde.adjoint() * (-b) * u_tilde.conjugate();
    Matrix2cd v = Matrix2cd::Identity();
    Eigen::Vector2d sinh2xi(std::abs(m(0, 0)), std::abs(m(1, 1)));
    const bool degenerate = std::abs(cosh2xi(0) - cosh2xi(1)) <= 1e-8 * cosh2xi(0);
    if (degenerate && m.norm() > 1e-12) {
        takagi_scaled_unitary(m, v, sinh2xi);
    } else {
        for (int k = 0; k < 2; ++k)
            if (std::abs(m(k, k)) > 1e-15)
                v(k, k) = std::exp(complexd(0, 0.5 * std::arg(m(k, k))));
    }
    p.xi1 = 0.5 * std::asinh(sinh2xi(0));
    p.xi2 = 0.5 * std::asinh(sinh2xi(1));
    Matrix2cd u = u_tilde * v;

    // Angle extraction; gauge choices here only need to reproduce sigma.
    const double abs_c = 0.5 * (std::abs(u(0, 0)) + std::abs(u(1, 1)));
    const double abs_s = 0.5 * (std::abs(u(0, 1)) + std::abs(u(1, 0)));
    p.theta = std::atan2(abs_s, abs_c);
    if (abs_s < 1e-12) {
        p.Psi = 0.0;
        p.phi1 = -std::arg(u(0, 0));
        p.phi2 = -std::arg(u(1, 1));
    } else if (abs_c < 1e-12) {
        p.Psi = 0.0;
        p.phi1 = -std::arg(u(0, 1));
        p.phi2 = -std::arg(-u(1, 0));
    } else {
        p.Psi = 0.5 * std::arg(u(0, 1) / u(0, 0));
        p.phi1 = -std::arg(u(0, 0)) - p.Psi;
        p.phi2 = abs_c >= abs_s ? p.Psi - std::arg(u(1, 1)) : -std::arg(-u(1, 0)) - p.Psi;
    }

    p.gamma_abs = s.d.head(2).norm();
    if (p.gamma_abs > 0) {
        p.l = std::atan2(std::abs(s.d(1)), std::abs(s.d(0)));
        p.phi_d1 = std::abs(s.d(0)) > 1e-15 * p.gamma_abs ? -std::arg(s.d(0)) : 0.0;
        p.phi_d2 = std::abs(s.d(1)) > 1e-15 * p.gamma_abs ? -std::arg(s.d(1)) : 0.0;
    }

    GaussianState check = williamson_build(p);
    double dev = (check.sigma - s.sigma).norm() + (check.d - s.d).norm();
    if (dev > 1e-9 * std::max(1.0, s.sigma.norm()))
        throw numerical_error("williamson_decompose: round-trip self-check failed");
    return p;
}

double mean_photon_number(const GaussianState& s) {
    return 0.25 * s.sigma.trace().real() - 0.5 * s.q + 0.5 * s.d.squaredNorm();
}

double ftql(double n_mean, double nu, int q) {
    if (n_mean < 0) throw domain_error("ftql: mean photon number must be >= 0");
    if (nu < 1) throw domain_error("ftql: nu must be >= 1");
    return 4.0 * n_mean / nu + 2.0 * q * (1.0 - nu) / nu;
}

void phase_channel_derivatives(const GaussianState& s, const std::vector<double>& rates,
                               Eigen::MatrixXcd& sigma_dot, Eigen::VectorXcd& d_dot) {
    if (int(rates.size()) != s.q)
        throw domain_error("phase_channel_derivatives: one rate per mode required");
    MatrixXcd lam = phase_generator(s.q, rates);
    sigma_dot = lam * s.sigma + s.sigma * lam.adjoint();
    d_dot = lam * s.d;
}

void mach_zehnder_derivatives(const GaussianState& s, Eigen::MatrixXcd& sigma_dot,
                              Eigen::VectorXcd& d_dot) {
    if (s.q != 2) throw domain_error("mach_zehnder_derivatives: two-mode states only");
    Matrix4cd lam = mz_generator();
    sigma_dot = lam * s.sigma + s.sigma * lam.adjoint();
    d_dot = lam * s.d;
}

double qfi_isotropic(const Eigen::MatrixXcd& sigma, const Eigen::MatrixXcd& sigma_dot,
                     const Eigen::VectorXcd& d, const Eigen::VectorXcd& d_dot) {
    const int q = int(sigma.rows()) / 2;
    if (sigma.rows() != 2 * q || sigma_dot.rows() != sigma.rows() || d.size() != 2 * q ||
        d_dot.size() != 2 * q)
        throw domain_error("qfi_isotropic: inconsistent dimensions");
    NuInfo nu = nu_info(sigma);
    if (nu.spread > 1e-8 * std::max(1.0, nu.mean))
        throw domain_error("qfi_isotropic: state is not isotropic");
    const double n2 = nu.mean * nu.mean;
    MatrixXcd inv = sigma.inverse();
    double disp_term = 2.0 * (d_dot.adjoint() * inv * d_dot)(0).real();
    double trace_form =
        n2 * (inv * sigma_dot * inv * sigma_dot).trace().real() / (2.0 * (1.0 + n2));
    MatrixXcd ks = symplectic_form(q) * sigma_dot;
    double k_form = -(ks * ks).trace().real() / (2.0 * (1.0 + n2));
    double value = trace_form + disp_term;
    if (std::abs(trace_form - k_form) > 1e-9 * std::max(1.0, std::abs(value)))
        throw numerical_error("qfi_isotropic: the two trace forms disagree");
    return value;
}

double qfi_one_mode(double nu, double xi, double gamma_abs, double phi, double phi_d) {
    if (nu < 1) throw domain_error("qfi_one_mode: nu must be >= 1");
    const double sq = std::sinh(2 * xi);
    const double rel = phi - phi_d;
    const double c = std::cos(rel), s = std::sin(rel);
    return 4.0 * nu * nu * sq * sq / (nu * nu + 1.0) +
           (4.0 * gamma_abs * gamma_abs / nu) *
               (std::exp(2 * xi) * c * c + std::exp(-2 * xi) * s * s);
}

double qfi_two_mode_explicit(const WilliamsonParams& p) {
    if (std::abs(p.theta) > 1e-10 || std::abs(p.Psi) > 1e-10)
        throw domain_error("qfi_two_mode_explicit: requires the reduced theta = Psi = 0 form");
    const double o = std::sin(p.phi1 - p.phi2);
    const double pp = std::cos(p.phi1 - p.phi2);
    const double chi_p = std::sin(p.l) * std::cos(p.phi1 - p.phi_d2 + p.Psi);
    const double chi_m = std::sin(p.l) * std::sin(p.phi1 - p.phi_d2 + p.Psi);
    const double ups_p = std::cos(p.l) * std::cos(p.phi2 - p.phi_d1 - p.Psi);
    const double ups_m = std::cos(p.l) * std::sin(p.phi2 - p.phi_d1 - p.Psi);
    const double norm = chi_p * chi_p + chi_m * chi_m + ups_p * ups_p + ups_m * ups_m;
    if (std::abs(norm - 1.0) > 1e-10)
        throw domain_error("qfi_two_mode_explicit: chi/upsilon normalization identity failed");
    const double n2 = p.nu * p.nu;
    const double sm = std::sinh(p.xi1 - p.xi2), sp = std::sinh(p.xi1 + p.xi2);
    const double g2 = p.gamma_abs * p.gamma_abs;
    return 8.0 * n2 / (n2 + 1.0) * (pp * pp * sm * sm + o * o * sp * sp) +
           (4.0 * g2 / p.nu) *
               (std::exp(2 * p.xi1) * chi_p * chi_p + std::exp(-2 * p.xi1) * chi_m * chi_m +
                std::exp(2 * p.xi2) * ups_p * ups_p + std::exp(-2 * p.xi2) * ups_m * ups_m);
}

AdvantageReport metrological_advantage(const GaussianState& s) {
    s.validate();
    if (s.q != 2) throw domain_error("metrological_advantage: two-mode states only");
    WilliamsonParams p0 = williamson_decompose(s);
    const double nu = p0.nu;

    AdvantageReport rep;
    rep.qfi_ref = ftql(mean_photon_number(s), nu, 2);

    // Constructive reduction of Theorem 1: R_z(-2 Psi0 + pi/2) R_x(-2 theta0)
    // R_z(phi2_0 - phi1_0), acting in phase space as Ras/B with halved angles.
    Matrix4cd g_reduce = sympl_Ras(-p0.Psi + pi / 4.0) * sympl_B(-p0.theta) *
                         sympl_Ras(0.5 * (p0.phi2 - p0.phi1));
    GaussianState red = apply_ple(s, g_reduce);
    const double qfi_i = mz_qfi_with_nu(red.sigma, red.d, nu);

    // V^I from the displacement part of the reduced-state QFI:
    // 2 d_dot^dag sigma^-1 d_dot = (4|gamma|^2/nu)(V^I + 1).
    const double g2 = p0.gamma_abs * p0.gamma_abs;
    double v_i = 0.0;
    if (g2 > 0) {
        MatrixXcd sd;
        VectorXcd dd;
        mach_zehnder_derivatives(red, sd, dd);
        double disp = 2.0 * (dd.adjoint() * red.sigma.inverse() * dd)(0).real();
        v_i = nu * disp / (4.0 * g2) - 1.0;
    }
    const double sh1 = std::sinh(p0.xi1), sh2 = std::sinh(p0.xi2);
    const double x_cal = 4.0 * nu * nu / (nu * nu + 1.0) * std::pow(std::sinh(p0.xi1 + p0.xi2), 2) -
                         2.0 * (sh1 * sh1 + sh2 * sh2);

    double qfi_constructive = qfi_i;
    bool fallback = false;
    if (v_i < 0 && g2 >= nu * x_cal / (2.0 * std::abs(v_i))) {
        // Competing squeezing/displacement at large |gamma|: extra R_z(pi/2).
        GaussianState red_f = apply_ple(red, sympl_Ras(pi / 4.0));
        qfi_constructive = mz_qfi_with_nu(red_f.sigma, red_f.d, nu);
        fallback = true;
    }
    rep.v_sign = v_i > 0 ? 1.0 : (v_i < 0 ? -1.0 : 0.0);
    rep.a = wrap_angle(-2.0 * p0.Psi + pi / 2.0 + (fallback ? pi / 2.0 : 0.0));
    rep.b = wrap_angle(-2.0 * p0.theta);
    rep.c = wrap_angle(p0.phi2 - p0.phi1);

    // Grid search over PLE Euler angles G = R_z(a) R_x(b) R_z(c).  The QFI
    // depends only on the conjugated channel generator G^dag Y G, whose
    // adjoint orbit is already swept by (a, b) alone, so the grid fixes c = 0.
    const int n_grid = 360;
    const double step = 2.0 * pi / n_grid;
    std::vector<double> grid_val(size_t(n_grid) * n_grid);
    parallel_for(grid_val.size(), [&](std::size_t idx) {
        const double a = step * double(idx / n_grid);
        const double b = step * double(idx % n_grid);
        Matrix4cd g = sympl_Ras(a / 2.0) * sympl_B(b / 2.0);
        GaussianState t = apply_ple(s, g);
        grid_val[idx] = mz_qfi_with_nu(t.sigma, t.d, nu);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid_val.size(); ++i)
        if (grid_val[i] > grid_val[best]) best = i;
    double best_a = step * double(best / n_grid);
    double best_b = step * double(best % n_grid);
    double qfi_grid = grid_val[best];
    // One local refinement pass around the best grid point.
    const int n_ref = 40;
    for (int ia = -n_ref; ia <= n_ref; ++ia)
        for (int ib = -n_ref; ib <= n_ref; ++ib) {
            const double a = best_a + step * ia / n_ref;
            const double b = best_b + step * ib / n_ref;
            Matrix4cd g = sympl_Ras(a / 2.0) * sympl_B(b / 2.0);
            GaussianState t = apply_ple(s, g);
            double v = mz_qfi_with_nu(t.sigma, t.d, nu);
            if (v > qfi_grid) {
                qfi_grid = v;
                best_a = a;
                best_b = b;
            }
        }

    rep.qfi_opt = std::max(qfi_constructive, qfi_grid);
    if (qfi_grid > qfi_constructive) {
        rep.a = wrap_angle(best_a);
        rep.b = wrap_angle(best_b);
        rep.c = 0.0;
    }
    rep.strategy = Strategy::TheoremBranch;
    rep.advantage = std::max(rep.qfi_opt - rep.qfi_ref, 0.0);
    return rep;
}

OneModeStrategyResult optimal_one_mode_strategy(double nu, double xi, double gamma_abs,
                                                double phi1, double phi_d) {
    if (nu < 1) throw domain_error("optimal_one_mode_strategy: nu must be >= 1");
    OneModeStrategyResult r;
    const double rel = phi_d - phi1;
    const double sin2 = std::pow(std::sin(rel), 2), cos2 = std::pow(std::cos(rel), 2);
    r.V = std::exp(2 * xi) * sin2 + std::exp(-2 * xi) * cos2 - 1.0;
    const double n2 = nu * nu;
    const double g2 = gamma_abs * gamma_abs;
    const double sq2 = std::pow(std::sinh(2 * xi), 2), sq = std::pow(std::sinh(xi), 2);
    const double gain = 4.0 * n2 / (n2 + 1.0) * (sq2 - 2.0 * sq);
    if (r.V >= 0 || -4.0 * g2 * r.V / nu < gain) {
        r.strategy = Strategy::OneMode; // a = b = pi/4
        r.qfi = 4.0 * n2 / (n2 + 1.0) * sq2 + 4.0 * g2 * (r.V + 1.0) / nu;
    } else {
        r.strategy = Strategy::MachZehnder; // a = b = 0
        r.qfi = 8.0 * n2 / (n2 + 1.0) * sq + 4.0 * g2 / nu;
    }
    return r;
}

SeparabilityResult separability_check_n2(complexd beta, double Theta) {
    if (Theta < 0 || Theta >= 1) throw domain_error("separability_check_n2: Theta must be in [0, 1)");
    const double b2 = std::norm(beta);
    const double op = 1.0 + Theta;
    SeparabilityResult r;
    r.Phi = 0.5 * (b2 * b2 * std::pow(op, 4) + 4.0 * b2 * Theta * op * op + 2.0 * Theta * Theta);
    r.Upsilon = b2 / std::sqrt(2.0) * op * op * (b2 * op * op + 2.0 * Theta);
    r.Xi = 0.5 * b2 * b2 * std::pow(op, 4);
    r.Aleph = std::pow(b2 * op * op + Theta, 2);

    Eigen::Matrix4d pt;
    pt << r.Phi, r.Upsilon, r.Aleph / 2.0, 0.0,
        r.Upsilon, r.Aleph / 2.0 + r.Xi, r.Upsilon, 0.0,
        r.Aleph / 2.0, r.Upsilon, r.Phi, 0.0,
        0.0, 0.0, 0.0, r.Aleph / 2.0 - r.Xi;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(pt);
    r.pt_eigenvalues = es.eigenvalues();
    r.separable = r.pt_eigenvalues.minCoeff() >= -1e-10;
    return r;
}

} // namespace qcrit

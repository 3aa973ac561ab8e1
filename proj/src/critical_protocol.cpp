#include "qcrit/critical_protocol.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace qcrit {

namespace {

using Eigen::VectorXcd;

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    // least-squares slope of ln y vs ln x
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

} // namespace

double RampSchedule::speed(double g) const {
    const double r = (g_p * g_p - g * g) / (g_p * g_p);
    return v0 * omega * g_p * r * std::sqrt(r);
}

double RampSchedule::coupling_at(double t) const {
    const double u = v0 * omega * t;
    return g_p * u / std::sqrt(1.0 + u * u);
}

double RampSchedule::time_at(double g) const {
    return g / (v0 * omega * std::sqrt(g_p * g_p - g * g));
}

void RampSchedule::validate() const {
    if (!(v0 > 0) || !(omega > 0) || !(g_p > 0))
        throw domain_error("RampSchedule: v0, omega, g_p must be positive");
    if (!(g_end > 0) || !(g_end < g_p))
        throw domain_error("RampSchedule: g_end must lie in (0, g_p)");
}

DurationReport protocol_duration(double v0, double g_end, double omega, double g_p) {
    RampSchedule s{v0, g_end, omega, g_p};
    s.validate();
    DurationReport r;
    // Exact integral of dg/V(g): int (g_p^2-g^2)^{-3/2} dg = g/(g_p^2 sqrt(g_p^2-g^2)).
    r.tau_quadrature = s.time_at(g_end);
    r.tau_closed_form =
        (1.0 / (v0 * omega)) * (g_end / g_p) * std::sqrt(g_p / (g_p - g_end));
    r.deviation = std::abs(r.tau_quadrature - r.tau_closed_form) / r.tau_quadrature;
    return r;
}

QfiReport qfi_closed_form(double g_end, double Omega, double g_p, CriticalPhase phase) {
    if (!(Omega > 0) || !(g_p > 0) || g_end < 0)
        throw domain_error("qfi_closed_form: Omega, g_p must be positive, g_end >= 0");
    QfiReport r;
    const double gp2 = g_p * g_p;
    const double g2 = g_end * g_end;
    if (phase == CriticalPhase::Normal) {
        if (!(g_end < g_p))
            throw domain_error("qfi_closed_form: normal phase requires g_end < g_p");
        const double quoted = gp2 / (gp2 - g2);
        const double exact = g2 / (gp2 - g2);
        r.qfi_quoted = quoted * quoted / (8.0 * Omega * Omega);
        r.qfi_exact = exact * exact / (8.0 * Omega * Omega);
    } else {
        if (!(g_end > g_p))
            throw domain_error("qfi_closed_form: superradiant phase requires g_end > g_p");
        const double omega = 4.0 * gp2 / Omega; // from g_p = sqrt(omega Omega)/2
        const double d4 = g2 * g2 - gp2 * gp2;
        r.qfi_quoted = (gp2 * gp2 * gp2 * gp2) / (2.0 * Omega * Omega * d4 * d4) +
                       (gp2 * gp2 * gp2) / (Omega * omega * g2 * g2 * std::sqrt(d4));
        r.qfi_exact = r.qfi_quoted;
    }
    r.snr = Omega * std::sqrt(r.qfi_quoted);
    return r;
}

PhotonFiReport photon_number_fi(double xi, double dxi_dOmega) {
    if (!(xi > 0))
        throw domain_error("photon_number_fi: requires xi > 0");
    const double t2 = std::tanh(xi) * std::tanh(xi);
    const double sc = std::sinh(xi) * std::cosh(xi);
    double p = 1.0 / std::cosh(xi); // p(0, xi)
    double norm = 0.0;
    double fi = 0.0;
    bool converged = false;
    for (int m = 0; m < 10000; ++m) {
        norm += p;
        const double dlogp = 2.0 * m / sc - std::tanh(xi); // d ln p / d xi
        fi += p * dlogp * dlogp;
        if (1.0 - norm < 1e-12 && m > 2) {
            converged = true;
            break;
        }
        // p(2m+2)/p(2m) = tanh^2(xi) (2m+1)/(2m+2)
        p *= t2 * (2.0 * m + 1.0) / (2.0 * m + 2.0);
    }
    if (!converged)
        throw convergence_error("photon_number_fi: series tail above 1e-12 at 1e4 terms");
    PhotonFiReport r;
    r.fi_numeric = fi * dxi_dOmega * dxi_dOmega;
    r.fi_closed = 2.0 * dxi_dOmega * dxi_dOmega;
    if (std::abs(r.fi_numeric - r.fi_closed) > 1e-8 * std::abs(r.fi_closed))
        throw numerical_error("photon_number_fi: numeric sum deviates from closed form");
    return r;
}

double quadrature_variance(double lambda, double phi) {
    if (!(lambda >= 0) || !(lambda < 1))
        throw domain_error("quadrature_variance: requires 0 <= lambda < 1");
    const double xi = -0.25 * std::log(1.0 - lambda * lambda);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return std::exp(2.0 * xi) * c * c + std::exp(-2.0 * xi) * s * s;
}

double homodyne_fi(double lambda, double eta, double phi) {
    if (!(eta > 0))
        throw domain_error("homodyne_fi: requires eta > 0");
    const double Omega = eta; // omega = 1
    const double l2 = lambda * lambda;
    const double xi = -0.25 * std::log(1.0 - l2);
    const double dxi = -l2 / (4.0 * Omega * (1.0 - l2)); // g fixed, g_p^2 ~ Omega
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double v = std::exp(2.0 * xi) * c * c + std::exp(-2.0 * xi) * s * s;
    const double dv = 2.0 * dxi * (std::exp(2.0 * xi) * c * c - std::exp(-2.0 * xi) * s * s);
    return dv * dv / (2.0 * v * v);
}

double qfi_quadratic_regime(double lambda, double eta) {
    const double l2 = lambda * lambda;
    const double dxi = -l2 / (4.0 * eta * (1.0 - l2));
    return 2.0 * dxi * dxi;
}

AdiabaticResult adiabatic_excitation(const RampSchedule& schedule, double eta, int cutoff) {
    schedule.validate();
    if (schedule.v0 > 0.1)
        throw domain_error("adiabatic_excitation: requires v0 <= 0.1");
    if (eta < 50)
        throw domain_error("adiabatic_excitation: requires eta >= 50");
    if (cutoff < 4)
        throw domain_error("adiabatic_excitation: requires cutoff >= 4");

    const double w = schedule.omega;
    const double gp = schedule.g_p;
    const int dim = cutoff + 1;

    // db_n/dt = -i E_n(t) b_n - sum_m <n|S^dag dS/dt|m> b_m in the instantaneous
    // squeezed-Fock basis, with <n|S^dag dS/dxi|m> = (sqrt(m(m-1)) delta_{n,m-2}
    //                                              - sqrt((m+1)(m+2)) delta_{n,m+2})/2.
    auto deriv = [&](double t, const VectorXcd& b) -> VectorXcd {
        const double g = schedule.coupling_at(t);
        const double lam2 = g * g / (gp * gp);
        const double e1 = w * std::sqrt(1.0 - lam2);
        const double dxi_dt = schedule.v0 * w * g * std::sqrt(gp * gp - g * g) / (2.0 * gp * gp);
        VectorXcd out(dim);
        const std::complex<double> mi(0.0, -1.0);
        for (int n = 0; n < dim; ++n) {
            std::complex<double> v = mi * (n * e1) * b(n);
            if (n + 2 < dim)
                v -= 0.5 * dxi_dt * std::sqrt(double(n + 2) * (n + 1)) * b(n + 2);
            if (n - 2 >= 0)
                v += 0.5 * dxi_dt * std::sqrt(double(n) * (n - 1)) * b(n - 2);
            out(n) = v;
        }
        return out;
    };

    const double t_end = schedule.time_at(schedule.g_end);
    const double dt_target = 0.05 / (w * cutoff);
    const long n_steps = std::max<long>(64, static_cast<long>(std::ceil(t_end / dt_target)));
    const double dt = t_end / n_steps;

    VectorXcd b = VectorXcd::Zero(dim);
    b(0) = 1.0;

    AdiabaticResult res;
    const long sample_every = std::max<long>(1, n_steps / 256);
    auto record = [&](double t) {
        AdiabaticSample s;
        s.t = t;
        s.g = schedule.coupling_at(t);
        s.c2_sq = std::norm(b(2));
        s.ground_overlap = std::norm(b(0));
        if (s.ground_overlap < 0.5)
            throw convergence_error("adiabatic_excitation: ground-state population below 0.5");
        res.trajectory.push_back(s);
    };

    record(0.0);
    for (long k = 0; k < n_steps; ++k) {
        const double t = k * dt;
        const VectorXcd k1 = deriv(t, b);
        const VectorXcd k2 = deriv(t + dt / 2, b + (dt / 2) * k1);
        const VectorXcd k3 = deriv(t + dt / 2, b + (dt / 2) * k2);
        const VectorXcd k4 = deriv(t + dt, b + dt * k3);
        b += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((k + 1) % sample_every == 0 || k + 1 == n_steps) record((k + 1) * dt);
    }

    res.c2_sq_final = std::norm(b(2));
    const double r = schedule.g_end / gp;
    res.predicted_c2_sq = schedule.v0 * schedule.v0 / 32.0 * r * r;
    return res;
}

bool in_validity_window(double lambda, double eta) {
    return 1.0 - lambda > 5.0 * std::pow(eta, -2.0 / 3.0);
}

ScalingReport tau4_scaling(double v0, double eta, const std::vector<double>& g_end_over_gp) {
    if (!(v0 > 0) || !(eta > 0))
        throw domain_error("tau4_scaling: requires v0 > 0 and eta > 0");
    const double omega = 1.0;
    const double Omega = eta;
    const double gp = std::sqrt(eta) / 2.0;

    ScalingReport rep;
    std::vector<double> taus, qfis;
    for (double r : g_end_over_gp) {
        if (!(r > 0) || !(r < 1))
            throw domain_error("tau4_scaling: grid values must lie in (0, 1)");
        ScalingPoint p;
        p.lambda = r;
        p.g_end = r * gp;
        RampSchedule s{v0, p.g_end, omega, gp};
        p.tau = s.time_at(p.g_end);
        // Exact quadratic-regime QFI: combined with the exact quadrature tau this
        // obeys I = v0^4 w^2 tau^4 / (8 eta^2) identically, so the quartic law is
        // a property of the closed forms, not of the near-critical limit.
        p.qfi = qfi_closed_form(p.g_end, Omega, gp, CriticalPhase::Normal).qfi_exact;
        p.valid = in_validity_window(r, eta);
        if (p.valid) {
            taus.push_back(p.tau);
            qfis.push_back(p.qfi);
        }
        rep.points.push_back(p);
    }
    rep.n_valid = static_cast<int>(taus.size());
    if (rep.n_valid < 3)
        throw domain_error("tau4_scaling: fewer than 3 grid points inside the validity window");
    rep.slope = fit_loglog_slope(taus, qfis);
    std::vector<double> ramsey(taus.size());
    for (size_t i = 0; i < taus.size(); ++i) ramsey[i] = taus[i] * taus[i];
    rep.ramsey_slope = fit_loglog_slope(taus, ramsey);
    return rep;
}

} // namespace qcrit

#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycleforge {

using cplx = std::complex<double>;

struct NonConvergence : std::runtime_error {
    double achieved;
    NonConvergence(const std::string& what, double achieved_err) : std::runtime_error(what), achieved(achieved_err) {}
};

// E_lambda : y^2 = x(x-1)(x-lambda) as C / (Z + Z tau) with x(z) = A p(z) + B, p the Weierstrass
// function of Z + Z tau. Periods of dx/y are omega1 = mu, omega2 = mu tau with mu = A^{-1/2}.
struct EllipticParams {
    cplx lambda;
    cplx tau;
    cplx omega1, omega2;
    cplx A, B;
    std::array<cplx, 3> half_periods;   // 1/2, tau/2, (1+tau)/2
    std::array<cplx, 3> branch_values;  // p at the half periods
    std::array<int, 3> target;          // half period j -> {0, 1, lambda}[target[j]]
    int zero_half = 0;                  // half period with x = 0
    double self_check = 0;              // max |x(half period) - target|
};

namespace detail {

inline cplx agm(cplx a, cplx b) {
    for (int it = 0; it < 200; ++it) {
        cplx a1 = 0.5 * (a + b);
        cplx b1 = std::sqrt(a * b);
        if (std::abs(a1 - b1) > std::abs(a1 + b1)) b1 = -b1;  // optimal branch
        a = a1;
        b = b1;
        if (std::abs(a - b) <= 1e-16 * std::abs(a)) break;
    }
    return a;
}

inline cplx reduce_tau(cplx tau) {
    if (tau.imag() < 0) tau = -tau;
    for (int it = 0; it < 1000; ++it) {
        tau -= std::round(tau.real());
        if (std::norm(tau) < 1.0 - 1e-14) tau = -1.0 / tau;
        else break;
    }
    return tau;
}

}  // namespace detail

// Weierstrass p for the lattice Z + Z tau (q-expansion, z shifted into the central strip).
inline cplx weierstrass_p(cplx z, cplx tau) {
    const cplx two_pi_i(0, 2 * M_PI);
    double T = tau.imag();
    double shift = std::round(z.imag() / T);
    z -= shift * tau;
    z -= std::round(z.real());
    cplx q = std::exp(two_pi_i * tau);
    cplx u = std::exp(two_pi_i * z);
    cplx s = 1.0 / 12.0 + u / ((1.0 - u) * (1.0 - u));
    cplx qn = q;
    for (int n = 1; n < 200; ++n) {
        cplx a = qn * u, b = qn / u;
        s += a / ((1.0 - a) * (1.0 - a)) + b / ((1.0 - b) * (1.0 - b)) - 2.0 * qn / ((1.0 - qn) * (1.0 - qn));
        if (std::abs(b) < 1e-18 && std::abs(a) < 1e-18) break;
        qn *= q;
    }
    return two_pi_i * two_pi_i * s;
}

inline EllipticParams uniformize(cplx lambda) {
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) throw std::invalid_argument("uniformize: lambda not finite");
    if (std::abs(lambda) < 1e-12 || std::abs(lambda - 1.0) < 1e-12) throw std::invalid_argument("uniformize: lambda must not be 0 or 1");
    const std::array<cplx, 3> roots{0.0, 1.0, lambda};
    double scale = std::max({1.0, std::abs(lambda)});
    // tau = i M(1,k')/M(1,k), k^2 = mu; try the anharmonic images of lambda if the first choice fails.
    const std::array<cplx, 6> images{lambda, 1.0 - lambda, 1.0 / lambda, 1.0 / (1.0 - lambda), lambda / (lambda - 1.0),
                                     (lambda - 1.0) / lambda};
    for (cplx m : images) {
        cplx k = std::sqrt(m), kp = std::sqrt(1.0 - m);
        cplx tau = cplx(0, 1) * detail::agm(1.0, kp) / detail::agm(1.0, k);
        if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag()) || std::abs(tau.imag()) < 1e-12) continue;
        tau = detail::reduce_tau(tau);
        EllipticParams P;
        P.lambda = lambda;
        P.tau = tau;
        P.half_periods = {cplx(0.5, 0), 0.5 * tau, 0.5 * (1.0 + tau)};
        for (int j = 0; j < 3; ++j) P.branch_values[j] = weierstrass_p(P.half_periods[j], tau);
        // Branch values sorted lexicographically fix the matching order.
        std::array<int, 3> ord{0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) {
            auto ea = P.branch_values[a], eb = P.branch_values[b];
            return ea.real() != eb.real() ? ea.real() < eb.real() : ea.imag() < eb.imag();
        });
        std::array<int, 3> pi{0, 1, 2};
        do {
            // x(ord[j]) = roots[pi[j]]
            cplx e0 = P.branch_values[ord[0]], e1 = P.branch_values[ord[1]], e2 = P.branch_values[ord[2]];
            cplx A = (roots[pi[1]] - roots[pi[0]]) / (e1 - e0);
            cplx B = roots[pi[0]] - A * e0;
            double res = std::abs(A * e2 + B - roots[pi[2]]);
            if (res < 1e-9 * scale) {
                P.A = A;
                P.B = B;
                for (int j = 0; j < 3; ++j) P.target[ord[j]] = pi[j];
                for (int j = 0; j < 3; ++j)
                    if (P.target[j] == 0) P.zero_half = j;
                P.self_check = 0;
                for (int j = 0; j < 3; ++j)
                    P.self_check = std::max(P.self_check, std::abs(A * P.branch_values[j] + B - roots[P.target[j]]));
                cplx mu = 1.0 / std::sqrt(A);
                P.omega1 = mu;
                P.omega2 = mu * tau;
                return P;
            }
        } while (std::next_permutation(pi.begin(), pi.end()));
    }
    throw std::runtime_error("uniformize: degenerate lattice, no affine matching of branch values");
}

inline cplx x_of(const EllipticParams& P, cplx z) { return P.A * weierstrass_p(z, P.tau) + P.B; }

struct IntegralResult {
    double value = 0;
    double error = 0;
    int grid = 0;          // N x N cells at the finer resolution
    long evaluations = 0;
};

struct QuadratureOptions {
    int start_grid = 4;
    int max_grid = 512;
    // Graded refinement toward singular nodes stops at this cell size: the dropped area (~1e-10) carries
    // an integrable log, while smaller cells near the double zero of x lose all digits to cancellation.
    double min_cell = 1e-5;
};

namespace detail {

inline const std::vector<std::pair<double, double>>& gauss_rule() {
    static const std::vector<std::pair<double, double>> rule = [] {
        using G = boost::math::quadrature::gauss<double, 10>;
        std::vector<std::pair<double, double>> r;
        const auto& a = G::abscissa();
        const auto& w = G::weights();
        for (std::size_t i = 0; i < a.size(); ++i) {
            r.push_back({a[i], w[i]});
            if (a[i] != 0) r.push_back({-a[i], w[i]});
        }
        return r;
    }();
    return rule;
}

struct TorusIntegrator {
    const EllipticParams& P;
    std::vector<std::pair<double, double>> singular;  // in [0,1)^2
    double min_cell;
    long evals = 0;
    double truncation = 0;  // bound on the error of the cells below min_cell

    bool is_singular(double s, double t) const {
        auto frac = [](double v) { v -= std::floor(v); return v > 1 - 1e-12 ? 0.0 : v; };
        s = frac(s);
        t = frac(t);
        for (auto [a, b] : singular)
            if (std::abs(s - a) < 1e-12 && std::abs(t - b) < 1e-12) return true;
        return false;
    }

    double gauss(double s0, double t0, double h) {
        double sum = 0;
        for (auto [xa, wa] : gauss_rule())
            for (auto [xb, wb] : gauss_rule()) {
                double s = s0 + 0.5 * h * (xa + 1), t = t0 + 0.5 * h * (xb + 1);
                sum += wa * wb * std::log(std::abs(x_of(P, cplx(s) + t * P.tau)));
                ++evals;
            }
        return sum * 0.25 * h * h;
    }

    double cell(double s0, double t0, double h) {
        bool sing = is_singular(s0, t0) || is_singular(s0 + h, t0) || is_singular(s0, t0 + h) || is_singular(s0 + h, t0 + h);
        if (!sing) return gauss(s0, t0, h);
        if (h < min_cell) {
            // Midpoint value; |log|x|| near a double zero/pole exceeds its value at the centre by at most ~4 on average.
            double mid = std::log(std::abs(x_of(P, cplx(s0 + 0.5 * h) + (t0 + 0.5 * h) * P.tau)));
            ++evals;
            truncation += h * h * 4.0;
            return h * h * mid;
        }
        double g = 0.5 * h;
        return cell(s0, t0, g) + cell(s0 + g, t0, g) + cell(s0, t0 + g, g) + cell(s0 + g, t0 + g, g);
    }

    double integrate(int N) {
        double h = 1.0 / N, sum = 0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) sum += cell(i * h, j * h, h);
        return sum;
    }
};

}  // namespace detail

// I = (1/area) * integral of log|x| over the period parallelogram, in coordinates z = s + t tau.
// Singular nodes (pole at 0, double zero at the half period over x = 0) sit on grid nodes.
inline double regulator_integral_fixed(const EllipticParams& P, int N, double min_cell = 1e-5, long* evals = nullptr,
                                       double* truncation = nullptr) {
    if (N < 2 || N % 2) throw std::invalid_argument("regulator_integral: grid size must be even and >= 2");
    detail::TorusIntegrator ti{P, {}, min_cell};
    ti.singular.push_back({0, 0});
    static const std::array<std::pair<double, double>, 3> hp{{{0.5, 0}, {0, 0.5}, {0.5, 0.5}}};
    ti.singular.push_back(hp[P.zero_half]);
    double v = ti.integrate(N);
    if (evals) *evals += ti.evals;
    if (truncation) *truncation = ti.truncation;
    return v;
}

inline IntegralResult regulator_integral(const EllipticParams& P, double tol, const QuadratureOptions& opt = {}) {
    if (!(tol >= 1e-6)) throw std::invalid_argument("regulator_integral: tol must be >= 1e-6");
    IntegralResult r;
    int N = std::max(2, opt.start_grid + opt.start_grid % 2);
    double coarse = regulator_integral_fixed(P, N, opt.min_cell, &r.evaluations);
    while (true) {
        double trunc = 0;
        double fine = regulator_integral_fixed(P, 2 * N, opt.min_cell, &r.evaluations, &trunc);
        r.value = fine;
        r.grid = 2 * N;
        // Both resolutions share the cells below min_cell, so their bound is added separately.
        r.error = std::max(std::abs(fine - coarse), 1e-12 * (1 + std::abs(fine))) + trunc;
        if (r.error <= tol) return r;
        N *= 2;
        if (2 * N > opt.max_grid)
            throw NonConvergence("regulator_integral: no convergence, achieved error " + std::to_string(r.error), r.error);
        coarse = fine;
    }
}

inline IntegralResult regulator_integral(cplx lambda, double tol, const QuadratureOptions& opt = {}) {
    return regulator_integral(uniformize(lambda), tol, opt);
}

struct FunctionalEquationResult {
    cplx lambda;
    IntegralResult I, I_inv;
    double residual = 0;  // |I(lambda) - I(1/lambda) - log|lambda||
    bool pass = false;
};

inline FunctionalEquationResult functional_equation_check(cplx lambda, double tol, const QuadratureOptions& opt = {}) {
    FunctionalEquationResult f;
    f.lambda = lambda;
    f.I = regulator_integral(lambda, tol, opt);
    f.I_inv = regulator_integral(1.0 / lambda, tol, opt);
    f.residual = std::abs(f.I.value - f.I_inv.value - std::log(std::abs(lambda)));
    f.pass = f.residual < 5 * tol;
    return f;
}

}  // namespace cycleforge

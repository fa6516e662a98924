#include "rumor/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace rumor::bounds {

namespace {

constexpr double tiny = 1e-300;
constexpr double eps = 1e-16;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void require_degree(unsigned d) {
    if (d < 3) throw std::domain_error("d must be >= 3");
}

double log_beta_prefactor(double x, double a, double b) {
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
}

// Continued fraction for I_x(a,b) * a / prefactor, modified Lentz.
std::optional<double> beta_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    return std::nullopt;
}

// sum_n (1-b)_n / n! x^n / (a+n), times x^a / B(a,b).
double beta_series(double x, double a, double b) {
    double term = 1.0;
    double sum = 1.0 / a;
    for (int n = 1; n < 100000; ++n) {
        term *= (n - b) * x / n;
        const double add = term / (a + n);
        sum += add;
        if (std::abs(add) < eps * std::abs(sum)) break;
    }
    return std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x)) * sum;
}

double lower_side(double x, double a, double b) {
    if (auto cf = beta_fraction(x, a, b)) return std::exp(log_beta_prefactor(x, a, b)) * *cf / a;
    return beta_series(x, a, b);
}

}  // namespace

double reg_inc_beta(double x, double a, double b) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("reg_inc_beta: x must lie in [0, 1]");
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("reg_inc_beta: a and b must be positive");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    if (x < (a + 1.0) / (a + b + 2.0)) return clamp01(lower_side(x, a, b));
    return clamp01(1.0 - lower_side(1.0 - x, b, a));
}

double majority_success_prob(double p, unsigned r) {
    if (r < 1) throw std::domain_error("majority_success_prob: r must be >= 1");
    const unsigned half = r / 2;
    return reg_inc_beta(p, static_cast<double>(r - half), static_cast<double>(half + 1));
}

double lemma1_lower(double p, unsigned r) {
    if (r < 1) throw std::domain_error("lemma1_lower: r must be >= 1");
    return clamp01(p + (1.0 - p) * (1.0 - std::exp(-p * p * std::log(static_cast<double>(r)))));
}

double lemma2_lower(double p, unsigned r) {
    if (r < 1) throw std::domain_error("lemma2_lower: r must be >= 1");
    const double rr = static_cast<double>(r);
    return clamp01(1.0 - std::exp(-p * p * rr * std::log(rr)));
}

double lhop_escape_upper(unsigned L, unsigned d) {
    require_degree(d);
    if (L < 2) return 1.0;
    const double c = 7.0 * (d + 1.0) / d;
    const double l = static_cast<double>(L);
    return clamp01(c * std::exp(-(l / 2.0) * std::log(l)));
}

double h_d(double K, double r, unsigned d) {
    require_degree(d);
    const double depth = std::log(K / r) / std::log(static_cast<double>(d) - 1.0);
    if (!(depth > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return depth * std::log(depth);
}

double prop1_lower(double K, double r, double p, unsigned d) {
    require_degree(d);
    if (!(r >= 1.0) || K < r) throw std::domain_error("prop1_lower: need K >= r >= 1");
    const double h = h_d(K, r, d);
    if (std::isnan(h)) return 0.0;
    const double c = 7.0 * (d + 1.0) / d;
    return clamp01(((r + p) / (r + 1.0)) * (1.0 - c * std::exp(-h / 2.0)));
}

double g_d(double r, double q, unsigned d) {
    require_degree(d);
    const double dd = static_cast<double>(d);
    if (q < 1.0 / dd || q > 1.0) throw std::domain_error("g_d: q must lie in [1/d, 1]");
    if (q == 1.0) return 1.0;
    const double gap = q - 1.0 / dd;
    return 1.0 - std::exp(-r * (dd - 1.0) * gap * gap / (3.0 * dd * (1.0 - q)));
}

double prop2_lower(double K, double r, double q, unsigned d) {
    if (!(r >= 1.0)) throw std::domain_error("prop2_lower: r must be >= 1");
    const double rounds = K / (r + 1.0);
    if (!(rounds > 1.0)) return 0.0;
    const double g = g_d(r, q, d);
    const double c = (8.0 * d + 1.0) / d;
    return clamp01(1.0 - c * std::exp(-2.0 * g * g * g * rounds * std::log(rounds)));
}

double budget_bound_batch(double delta, double p, unsigned d) {
    require_degree(d);
    if (!(p > 0.5 && p <= 1.0)) throw std::domain_error("budget_bound_batch: p must lie in (1/2, 1]");
    const double inner = std::log(2.0 / delta);
    if (!(delta > 0.0) || !(inner > 1.0))
        throw std::domain_error("budget_bound_batch: delta must lie in (0, 2/e) = (0, " +
                                std::to_string(2.0 / std::exp(1.0)) + ")");
    const double dd = static_cast<double>(d);
    const double gap = p - 0.5;
    return 4.0 * (dd - 1.0) / (dd - 2.0) * (2.0 / delta) / (gap * gap * std::log(inner));
}

double budget_bound_interactive(double delta, double q, unsigned d) {
    require_degree(d);
    const double dd = static_cast<double>(d);
    if (!(q > 1.0 / dd && q <= 1.0)) throw std::domain_error("budget_bound_interactive: q must lie in (1/d, 1]");
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("budget_bound_interactive: delta must lie in (0, 1)");
    const double inner = std::log(7.0 / delta);
    const double gap = q - 1.0 / dd;
    return (2.0 * dd - 3.0) / dd * inner / (gap * gap * gap * std::log(inner));
}

double phi_suspect_lower(std::size_t k, unsigned d) {
    require_degree(d);
    if (k < 1) throw std::domain_error("phi_suspect_lower: k must be >= 1");
    const double dd = static_cast<double>(d);
    const double tail = 1.0 - reg_inc_beta(0.5, 1.0 / (dd - 2.0), (dd - 1.0) / (dd - 2.0));
    const double kk = static_cast<double>(k);
    return 1.0 - 2.0 * (kk - 1.0) / kk * tail;
}

}  // namespace rumor::bounds

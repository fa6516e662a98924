#pragma once

#include <cstddef>

// Closed-form detection bounds and the special functions behind them.
// Every "log" is the natural logarithm. Values that denote probabilities are
// clamped to [0, 1]; the raw expressions go negative for small budgets.
namespace rumor::bounds {

/// Regularized incomplete beta I_x(a, b). Continued fraction (modified
/// Lentz) on the convergent side, power series if the fraction stalls.
/// Throws std::domain_error outside x in [0,1], a > 0, b > 0.
double reg_inc_beta(double x, double a, double b);

/// P(at least half of r answers are truthful) = I_p(r - floor(r/2), floor(r/2) + 1).
double majority_success_prob(double p, unsigned r);

/// p + (1-p)(1 - exp(-p^2 log r)). Not a true lower bound on majority_success_prob:
/// it exceeds it for odd r at moderate p, e.g. p=0.7, r=3.
double lemma1_lower(double p, unsigned r);
/// 1 - exp(-p^2 r log r): source is the local center of the filtered set.
double lemma2_lower(double p, unsigned r);

/// c exp(-(L/2) log L), c = 7(d+1)/d: source farther than L hops from the
/// rumor center. Defined for L >= 2; clamped to [0, 1].
double lhop_escape_upper(unsigned L, unsigned d);

/// h_d(K, r) = (log(K/r)/log(d-1)) * log(log(K/r)/log(d-1)).
double h_d(double K, double r, unsigned d);

/// ((r+p)/(r+1)) (1 - c exp(-h_d(K,r)/2)), c = 7(d+1)/d. Returns 0 when the
/// inner logarithm is undefined.
double prop1_lower(double K, double r, double p, unsigned d);

/// 1 - exp(-r(d-1)(q-1/d)^2 / (3d(1-q))); 1 at q = 1.
/// Throws std::domain_error for q < 1/d.
double g_d(double r, double q, unsigned d);

/// 1 - c exp(-2 g_d^3 (K/(r+1)) log(K/(r+1))), c = (8d+1)/d.
double prop2_lower(double K, double r, double q, unsigned d);

/// Sufficient budget for detection >= 1 - delta with batch querying:
/// (4(d-1)/(d-2)) (2/delta) / ((p-1/2)^2 log log(2/delta)).
/// Throws std::domain_error unless 0 < delta < 2/e.
double budget_bound_batch(double delta, double p, unsigned d);

/// Sufficient budget with interactive querying:
/// ((2d-3)/d) log(7/delta) / ((q-1/d)^3 log log(7/delta)).
/// Throws std::domain_error unless 0 < delta < 1.
double budget_bound_interactive(double delta, double q, unsigned d);

/// 1 - (2(k-1)/k)(1 - I_{1/2}(1/(d-2), (d-1)/(d-2))): MAP detection with k
/// connected suspects.
double phi_suspect_lower(std::size_t k, unsigned d);

}  // namespace rumor::bounds

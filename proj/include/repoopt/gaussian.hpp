#pragma once

namespace repoopt {

/// Normal law of a forward price, in currency units.
struct GaussianParams {
    double mean = 0.0;
    double sd = 0.0;
};

/// Throws ValidationError unless mean is finite and sd is finite and >= 0.
void validate(const GaussianParams& g);

double std_normal_pdf(double x);

/// Phi(x) via erfc; absolute error well below 1e-12 over the whole real line.
double std_normal_cdf(double x);

/// E[min(strike, X)] for X ~ N(g.mean, g.sd^2).
///
/// Evaluated as min(K, mu) - sd * G(-|d|) with d = (mu - K) / sd and
/// G(x) = x Phi(x) + phi(x), so only the out-of-the-money option value is ever
/// subtracted and the result never exceeds min(K, mu).
double censored_min_mean(double strike, const GaussianParams& g);

/// Standard deviation of min(strike, X); always within [0, g.sd].
double censored_min_sd(double strike, const GaussianParams& g);

/// E[max(strike, X)] = max(K, mu) + sd * G(-|d|).
double censored_max_mean(double strike, const GaussianParams& g);

/// E[max(strike - X, 0)], the undiscounted put payoff under the normal law.
double put_payoff_mean(double strike, const GaussianParams& g);

} // namespace repoopt

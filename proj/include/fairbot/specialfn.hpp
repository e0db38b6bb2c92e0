/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

// Distribution functions for the ordinate transforms and the KS test.
// Every result is a probability in [0, 1]; invalid arguments raise DomainError.

namespace fairbot {

/// A real number in [0, 1].
using ProbabilityValue = double;

/// Natural log of Γ(x) for x > 0; reentrant.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, x). Series for x < a + 1,
/// Lentz continued fraction for Q(a, x) otherwise.
ProbabilityValue reg_lower_gamma(double a, double x);
/// Q(a, x) = 1 - P(a, x), evaluated without cancellation.
ProbabilityValue reg_upper_gamma(double a, double x);

/// Regularized incomplete beta I_x(a, b). Continued fraction, switching to
/// the reflected form 1 - I_{1-x}(b, a) for x > (a + 1) / (a + b + 2).
ProbabilityValue reg_inc_beta(double a, double b, double x);

ProbabilityValue chi2_cdf(int dof, double x);
/// Upper tail 1 - chi2_cdf.
ProbabilityValue chi2_sf(int dof, double x);

ProbabilityValue f_cdf(int d1, int d2, double x);
/// Upper tail 1 - f_cdf.
ProbabilityValue f_sf(int d1, int d2, double x);

/// x with chi2_cdf(dof, x) = alpha, by bisection on a doubling bracket.
double chi2_quantile(int dof, double alpha);

/// Asymptotic Kolmogorov tail probability with the Stephens small-sample
/// correction t = (√n + 0.12 + 0.11/√n) d.
ProbabilityValue kolmogorov_pvalue(double d, long long n_sample);

}  // namespace fairbot

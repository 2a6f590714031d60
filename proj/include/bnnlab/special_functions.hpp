#ifndef BNNLAB_SPECIAL_FUNCTIONS_HPP
#define BNNLAB_SPECIAL_FUNCTIONS_HPP

namespace bnnlab {

/// log Gamma(a) for a > 0. Throws std::domain_error otherwise.
double ln_gamma(double a);

/// Lower incomplete gamma gamma(a, x) = int_0^x t^{a-1} e^{-t} dt.
///
/// Series expansion for x < a+1, Lentz continued fraction for the
/// complement otherwise; prefactors are assembled in log space so the
/// routine stays usable out to a ~ 150 and x ~ 1e6. gamma(a, 0) == 0.
double lower_incomplete_gamma(double a, double x);

/// Regularized P(a, x) = gamma(a, x) / Gamma(a), in [0, 1].
double regularized_gamma_p(double a, double x);

/// log gamma(a, x); -inf at x = 0. Stays finite where gamma(a, x) itself
/// would underflow, which is what ratio formulas rely on.
double log_lower_incomplete_gamma(double a, double x);

} // namespace bnnlab

#endif

#pragma once

namespace steinpairs {

class BetaParams {
 public:
  BetaParams(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double mean() const noexcept { return a_ / (a_ + b_); }
  bool symmetric() const noexcept { return a_ == b_; }
  // Beta(a+k, b+k); used by the derivative chain.
  BetaParams shifted(double k) const { return BetaParams(a_ + k, b_ + k); }

 private:
  double a_;
  double b_;
};

// ln Gamma(x) for x > 0.
double log_gamma(double x);

double log_beta(const BetaParams& p);
// Throws OverflowError when B(a,b) is not representable; use log_beta then.
double beta_function(const BetaParams& p);

struct PdfValue {
  double value = 0.0;
  bool infinite = false;
};

PdfValue beta_pdf(double x, const BetaParams& p);
// log density; -inf where the density vanishes, +inf at a singular endpoint.
double beta_log_pdf(double x, const BetaParams& p);
// p(1 - s) evaluated without forming 1 - s, for small s.
double beta_pdf_from_upper(double s, const BetaParams& p);

// Regularized incomplete beta I_x(a,b).
double beta_cdf(double x, const BetaParams& p);
// 1 - I_x(a,b), computed without cancellation.
double beta_sf(double x, const BetaParams& p);
// 1 - I_{1-s}(a,b) with s given directly.
double beta_sf_from_upper(double s, const BetaParams& p);

double beta_median(const BetaParams& p);

}  // namespace steinpairs

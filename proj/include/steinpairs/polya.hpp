#pragma once

#include <cstdint>
#include <vector>

#include "steinpairs/framework.hpp"
#include "steinpairs/test_function.hpp"

namespace steinpairs {

// Polya urn with a = r/c red and b = w/c white weight, n draws.
class PolyaModel {
 public:
  PolyaModel(double a, double b, int n);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  int n() const noexcept { return n_; }
  // 1/(n(a+b+n-1)).
  double lambda() const noexcept;
  double gamma(double w) const noexcept { return a_ - (a_ + b_) * w; }

 private:
  double a_;
  double b_;
  int n_;
};

struct PolyaPMF {
  std::vector<double> log_weights;  // log P(S_n = k), k = 0..n

  double probability(int k) const;
  std::vector<double> probabilities() const;
};

PolyaPMF pmf(const PolyaModel& model);

// P(X_1 = x_1, ..., X_n = x_n) through the sequential draw probabilities.
double joint_log_prob(const PolyaModel& model, const std::vector<int>& x);
double joint_prob(const PolyaModel& model, const std::vector<int>& x);

// E[W' - W | S_n = k] from the Gibbs step and from lambda*gamma(k/n).
struct RegressionFirst {
  double conditional = 0.0;
  double closed_form = 0.0;
};
RegressionFirst regression_first(const PolyaModel& model, int k);

// E[(W' - W)^2 | S_n = k]: from the Gibbs step, from the displayed
// quadratic, and as 2 lambda (W(1-W) + S).
struct RegressionSecond {
  double conditional = 0.0;
  double closed_form = 0.0;
  double eta_form = 0.0;
  double S_remainder = 0.0;  // (b-a)W/(2n) + a/(2n)
};
RegressionSecond regression_second(const PolyaModel& model, int k);

double exact_expectation(const PolyaModel& model, const TestFunction& h);
double exact_expectation(const PolyaModel& model, const PolyaPMF& pmf, const TestFunction& h);

// lambda, E|R| = 0, E|S| and E|W'-W|^3 computed from the pmf.
PairRegressionReport pair_regression_report(const PolyaModel& model);

// Law of W = S_n/n as a discrete measure on {k/n}.
DiscreteMeasure polya_measure(const PolyaModel& model);

struct PairSample {
  double w = 0.0;
  double w_prime = 0.0;
  int x_n = 0;
  int x_n_prime = 0;
};

// Sequential urn draws, then X_n' resampled given X_1..X_{n-1}. Reps are cut
// into fixed blocks, each with its own generator seeded from (seed, block),
// so the output does not depend on the thread count. threads <= 0 uses
// default_thread_count().
std::vector<PairSample> simulate_pair(const PolyaModel& model, long long reps, std::uint64_t seed, int threads = 0);

// STEINPAIRS_THREADS if set and positive, else hardware concurrency.
int default_thread_count();

std::vector<double> empirical_pmf(const std::vector<PairSample>& samples, int n);
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace steinpairs

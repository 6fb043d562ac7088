#include "steinpairs/polya.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "steinpairs/errors.hpp"
#include "steinpairs/special_functions.hpp"

namespace steinpairs {

namespace {

constexpr long long kBlock = 1 << 16;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double log_sum_exp(const std::vector<double>& v) {
  double mx = *std::max_element(v.begin(), v.end());
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - mx);
  return mx + std::log(acc);
}

}  // namespace

PolyaModel::PolyaModel(double a, double b, int n) : a_(a), b_(b), n_(n) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("PolyaModel: a and b must be positive and finite");
  }
  if (n < 1) throw DomainError("PolyaModel: n must be >= 1");
}

double PolyaModel::lambda() const noexcept { return 1.0 / (n_ * (a_ + b_ + n_ - 1.0)); }

double PolyaPMF::probability(int k) const {
  if (k < 0 || k >= static_cast<int>(log_weights.size())) return 0.0;
  return std::exp(log_weights[static_cast<std::size_t>(k)]);
}

std::vector<double> PolyaPMF::probabilities() const {
  std::vector<double> p(log_weights.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::exp(log_weights[k]);
  return p;
}

PolyaPMF pmf(const PolyaModel& model) {
  const int n = model.n();
  const double a = model.a();
  const double b = model.b();
  // Cumulative sums of log(a+i), log(b+j); log C(n,k) from log_gamma.
  std::vector<double> la(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> lb(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    la[static_cast<std::size_t>(i) + 1] = la[static_cast<std::size_t>(i)] + std::log(a + i);
    lb[static_cast<std::size_t>(i) + 1] = lb[static_cast<std::size_t>(i)] + std::log(b + i);
  }
  double lab = 0.0;
  for (int l = 0; l < n; ++l) lab += std::log(a + b + l);
  const double lfact = log_gamma(n + 1.0);
  PolyaPMF out;
  out.log_weights.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    double lc = lfact - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
    out.log_weights[static_cast<std::size_t>(k)] =
        lc + la[static_cast<std::size_t>(k)] + lb[static_cast<std::size_t>(n - k)] - lab;
  }
  const double z = log_sum_exp(out.log_weights);
  for (double& w : out.log_weights) w -= z;
  return out;
}

double joint_log_prob(const PolyaModel& model, const std::vector<int>& x) {
  if (static_cast<int>(x.size()) != model.n()) {
    throw DomainError("joint_prob: vector length " + std::to_string(x.size()) + " != n = " +
                      std::to_string(model.n()));
  }
  const double a = model.a();
  const double b = model.b();
  double lp = 0.0;
  int red = 0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double denom = a + b + static_cast<double>(t);
    if (x[t] == 1) {
      lp += std::log((a + red) / denom);
      ++red;
    } else if (x[t] == 0) {
      lp += std::log((b + static_cast<double>(t) - red) / denom);
    } else {
      throw DomainError("joint_prob: entries must be 0 or 1");
    }
  }
  return lp;
}

double joint_prob(const PolyaModel& model, const std::vector<int>& x) { return std::exp(joint_log_prob(model, x)); }

RegressionFirst regression_first(const PolyaModel& model, int k) {
  const int n = model.n();
  if (k < 0 || k > n) throw DomainError("regression_first: k out of range");
  const double a = model.a();
  const double d = a + model.b() + n - 1.0;
  const double w = static_cast<double>(k) / n;
  // P(X_n = 1 | S_n = k) = k/n; X_n' ~ Bernoulli((a + S_n - X_n)/d).
  const double p1 = w;
  const double ex_prime = p1 * (a + k - 1.0) / d + (1.0 - p1) * (a + k) / d;
  RegressionFirst r;
  r.conditional = (ex_prime - p1) / n;
  r.closed_form = model.lambda() * model.gamma(w);
  return r;
}

RegressionSecond regression_second(const PolyaModel& model, int k) {
  const int n = model.n();
  if (k < 0 || k > n) throw DomainError("regression_second: k out of range");
  const double a = model.a();
  const double b = model.b();
  const double d = a + b + n - 1.0;
  const double w = static_cast<double>(k) / n;
  const double nn = static_cast<double>(n);
  // (W'-W)^2 = 1/n^2 when X_n' != X_n.
  const double change = w * (1.0 - (a + k - 1.0) / d) + (1.0 - w) * (a + k) / d;
  RegressionSecond r;
  r.conditional = change / (nn * nn);
  r.closed_form = ((2.0 * nn + b - a) * w - 2.0 * nn * w * w + a) / (nn * nn * d);
  r.S_remainder = (b - a) * w / (2.0 * nn) + a / (2.0 * nn);
  r.eta_form = 2.0 * model.lambda() * (w * (1.0 - w) + r.S_remainder);
  return r;
}

double exact_expectation(const PolyaModel& model, const PolyaPMF& p, const TestFunction& h) {
  const int n = model.n();
  // Sum in increasing weight order to limit cancellation.
  std::vector<std::pair<double, double>> terms;
  terms.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    double pk = std::exp(p.log_weights[static_cast<std::size_t>(k)]);
    terms.emplace_back(pk, h(static_cast<double>(k) / n));
  }
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  double acc = 0.0;
  for (const auto& [pk, hv] : terms) acc += pk * hv;
  return acc;
}

double exact_expectation(const PolyaModel& model, const TestFunction& h) {
  return exact_expectation(model, pmf(model), h);
}

PairRegressionReport pair_regression_report(const PolyaModel& model) {
  const PolyaPMF p = pmf(model);
  const int n = model.n();
  const double nn = static_cast<double>(n);
  PairRegressionReport r;
  r.lambda = model.lambda();
  r.E_abs_R = 0.0;
  double es = 0.0;
  double cube = 0.0;
  for (int k = 0; k <= n; ++k) {
    double pk = p.probability(k);
    RegressionSecond s = regression_second(model, k);
    es += pk * std::fabs(s.S_remainder);
    // |W'-W|^3 = 1/n^3 exactly when a coordinate changes.
    cube += pk * s.conditional / nn;
  }
  r.E_abs_S = es;
  r.E_abs_cube = cube;
  return r;
}

DiscreteMeasure polya_measure(const PolyaModel& model) {
  const PolyaPMF p = pmf(model);
  DiscreteMeasure m;
  for (int k = 0; k <= model.n(); ++k) {
    m.points.push_back(static_cast<double>(k) / model.n());
    m.weights.push_back(p.probability(k));
  }
  return m;
}

int default_thread_count() {
  if (const char* env = std::getenv("STEINPAIRS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 256));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<PairSample> simulate_pair(const PolyaModel& model, long long reps, std::uint64_t seed, int threads) {
  if (reps < 1) throw DomainError("simulate_pair: reps must be >= 1");
  if (threads <= 0) threads = default_thread_count();
  const int n = model.n();
  const double a = model.a();
  const double b = model.b();
  std::vector<PairSample> out(static_cast<std::size_t>(reps));
  const long long blocks = (reps + kBlock - 1) / kBlock;

  auto run_block = [&](long long block) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(block))));
    const long long begin = block * kBlock;
    const long long end = std::min(reps, begin + kBlock);
    for (long long r = begin; r < end; ++r) {
      int red = 0;
      int last = 0;
      for (int t = 0; t < n; ++t) {
        last = uniform01(rng) < (a + red) / (a + b + t) ? 1 : 0;
        red += last;
      }
      const int before = red - last;  // sum of X_1..X_{n-1}
      const int resampled = uniform01(rng) < (a + before) / (a + b + n - 1.0) ? 1 : 0;
      PairSample& s = out[static_cast<std::size_t>(r)];
      s.w = static_cast<double>(red) / n;
      s.w_prime = static_cast<double>(before + resampled) / n;
      s.x_n = last;
      s.x_n_prime = resampled;
    }
  };

  const int workers = static_cast<int>(std::min<long long>(threads, blocks));
  if (workers <= 1) {
    for (long long blk = 0; blk < blocks; ++blk) run_block(blk);
    return out;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (long long blk = w; blk < blocks; blk += workers) run_block(blk);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

std::vector<double> empirical_pmf(const std::vector<PairSample>& samples, int n) {
  std::vector<double> counts(static_cast<std::size_t>(n) + 1, 0.0);
  for (const auto& s : samples) {
    long k = std::lround(s.w * n);
    counts[static_cast<std::size_t>(std::clamp<long>(k, 0, n))] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(samples.size());
  return counts;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw DomainError("total_variation: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::fabs(p[i] - q[i]);
  return 0.5 * acc;
}

}  // namespace steinpairs

#include "autostep/targets.hpp"

#include <algorithm>
#include <cmath>

#include "autostep/csv.hpp"

namespace autostep {

namespace {

class GaussianDensity : public Density {
 public:
  GaussianDensity(int dim, double variance) : dim_(dim), variance_(variance) {
    if (dim < 1) throw ConfigError("gaussian: dim must be >= 1");
    if (!(variance > 0.0)) throw ConfigError("gaussian: variance must be positive");
  }

  int dim() const override { return dim_; }

  double log_density(const Eigen::VectorXd& x) const override {
    return -x.squaredNorm() / (2.0 * variance_);
  }

  bool has_gradient() const override { return true; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override {
    return -x / variance_;
  }

  bool has_exact_sampler() const override { return true; }
  Eigen::VectorXd exact_draw(Rng& rng) const override {
    Eigen::VectorXd x(dim_);
    const double sd = std::sqrt(variance_);
    for (int i = 0; i < dim_; ++i) x[i] = sd * rng.normal();
    return x;
  }

  bool has_marginal_cdf(int) const override { return true; }
  double marginal_cdf(int, double v) const override {
    return normal_cdf(v, 0.0, std::sqrt(variance_));
  }

 private:
  int dim_;
  double variance_;
};

class Laplace1d : public Density {
 public:
  int dim() const override { return 1; }
  double log_density(const Eigen::VectorXd& x) const override { return -std::abs(x[0]); }

  bool has_gradient() const override { return true; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override {
    Eigen::VectorXd g(1);
    // sign convention: gradient at the kink is 0
    g[0] = x[0] > 0.0 ? -1.0 : (x[0] < 0.0 ? 1.0 : 0.0);
    return g;
  }

  bool has_exact_sampler() const override { return true; }
  Eigen::VectorXd exact_draw(Rng& rng) const override {
    Eigen::VectorXd x(1);
    const double u = rng.uniform();
    x[0] = u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
    return x;
  }

  bool has_marginal_cdf(int) const override { return true; }
  double marginal_cdf(int, double v) const override { return laplace_cdf(v); }
};

class Cauchy1d : public Density {
 public:
  int dim() const override { return 1; }
  double log_density(const Eigen::VectorXd& x) const override {
    return -std::log1p(x[0] * x[0]);
  }

  bool has_gradient() const override { return true; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override {
    Eigen::VectorXd g(1);
    g[0] = -2.0 * x[0] / (1.0 + x[0] * x[0]);
    return g;
  }

  bool has_exact_sampler() const override { return true; }
  Eigen::VectorXd exact_draw(Rng& rng) const override {
    Eigen::VectorXd x(1);
    x[0] = std::tan(3.141592653589793 * (rng.uniform() - 0.5));
    return x;
  }

  bool has_marginal_cdf(int) const override { return true; }
  double marginal_cdf(int, double v) const override { return cauchy_cdf(v); }
};

class FunnelDensity : public Density {
 public:
  FunnelDensity(int dim, double tau) : dim_(dim), tau_(tau) {
    if (dim < 2) throw ConfigError("funnel: dim must be >= 2");
    if (!(tau > 0.0)) throw ConfigError("funnel: tau must be positive");
  }

  int dim() const override { return dim_; }

  double log_density(const Eigen::VectorXd& x) const override {
    const double x1 = x[0];
    double lp = -x1 * x1 / 18.0 - (dim_ - 1) * x1 / tau_;
    const double quad = x.tail(dim_ - 1).squaredNorm();
    if (quad > 0.0) lp -= 0.5 * quad * std::exp(-2.0 * x1 / tau_);
    return lp;
  }

  bool has_gradient() const override { return true; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override {
    const double x1 = x[0];
    const double inv_scale = std::exp(-2.0 * x1 / tau_);
    Eigen::VectorXd g(dim_);
    const double quad = x.tail(dim_ - 1).squaredNorm();
    g[0] = -x1 / 9.0 - (dim_ - 1) / tau_ + (quad > 0.0 ? quad * inv_scale / tau_ : 0.0);
    g.tail(dim_ - 1) = -x.tail(dim_ - 1) * inv_scale;
    return g;
  }

  bool has_exact_sampler() const override { return true; }
  Eigen::VectorXd exact_draw(Rng& rng) const override {
    Eigen::VectorXd x(dim_);
    x[0] = 3.0 * rng.normal();
    const double scale = std::exp(x[0] / tau_);
    for (int i = 1; i < dim_; ++i) x[i] = scale * rng.normal();
    return x;
  }

  bool has_marginal_cdf(int coord) const override { return coord == 0; }
  double marginal_cdf(int coord, double v) const override {
    if (coord != 0) throw std::logic_error("funnel: only the x1 marginal CDF is analytic");
    return normal_cdf(v, 0.0, 3.0);
  }

 private:
  int dim_;
  double tau_;
};

class KilpisjarviDensity : public Density {
 public:
  KilpisjarviDensity(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size()) throw ConfigError("kilpisjarvi: data length mismatch");
    if (x_.empty()) throw ConfigError("kilpisjarvi: empty dataset");
  }

  int dim() const override { return 3; }

  // params: (alpha, beta, s) with s = log sigma
  double log_density(const Eigen::VectorXd& p) const override {
    const double alpha = p[0], beta = p[1], s = p[2];
    const double two_s = 2.0 * s;
    if (two_s > 700.0) return neg_inf;  // exp would overflow; density is 0 there anyway
    const double sigma = std::exp(s);
    double lp = normal_log_pdf(alpha, mu_alpha, sd_alpha) +
                normal_log_pdf(beta, 0.0, sd_beta);
    // half-normal prior on sigma, plus the log|d sigma / d s| = s Jacobian
    lp += std::log(2.0) + normal_log_pdf(sigma, 0.0, 1.0) + s;
    const double inv_var = std::exp(-two_s);
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const double r = y_[i] - alpha - beta * x_[i];
      lp += -0.5 * r * r * inv_var - s - half_log_two_pi;
    }
    return lp;
  }

  bool has_gradient() const override { return true; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& p) const override {
    const double alpha = p[0], beta = p[1], s = p[2];
    const double inv_var = std::exp(-2.0 * s);
    double sum_r = 0.0, sum_rx = 0.0, sum_r2 = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const double r = y_[i] - alpha - beta * x_[i];
      sum_r += r;
      sum_rx += r * x_[i];
      sum_r2 += r * r;
    }
    Eigen::VectorXd g(3);
    g[0] = -(alpha - mu_alpha) / (sd_alpha * sd_alpha) + sum_r * inv_var;
    g[1] = -beta / (sd_beta * sd_beta) + sum_rx * inv_var;
    g[2] = -std::exp(2.0 * s) + 1.0 + sum_r2 * inv_var - static_cast<double>(x_.size());
    return g;
  }

 private:
  static constexpr double mu_alpha = 9.313;
  static constexpr double sd_alpha = 100.0;
  static constexpr double sd_beta = 0.0333;
  static constexpr double half_log_two_pi = 0.91893853320467274178;

  std::vector<double> x_, y_;
};

// decay_mix(u, eb, ed)  = eb * h(u)  with h(u)  = (1 - exp(-u)) / u
// decay_mix'(u, eb, ed) = eb * h'(u)
// where eb = exp(-beta*dt), ed = exp(-delta*dt), u = (delta-beta)*dt.
// The factored forms overflow for large |u|, so the direct two-exponential
// forms are used there; both eb and ed lie in (0, 1].
double decay_mix(double u, double eb, double ed) {
  if (std::abs(u) < 1e-4)
    return eb * (1.0 - u / 2.0 + u * u / 6.0 - u * u * u / 24.0);
  return (eb - ed) / u;
}

double decay_mix_deriv(double u, double eb, double ed) {
  if (std::abs(u) < 1e-3)
    return eb * (-0.5 + u / 3.0 - u * u / 8.0 + u * u * u / 30.0);
  return (ed * (1.0 + u) - eb) / (u * u);
}

class MrnaDensity : public Density {
 public:
  MrnaDensity(std::vector<double> t, std::vector<double> y)
      : t_(std::move(t)), y_(std::move(y)) {
    if (t_.size() != y_.size()) throw ConfigError("mrna: data length mismatch");
    if (t_.empty()) throw ConfigError("mrna: empty dataset");
  }

  int dim() const override { return 5; }

  double log_density(const Eigen::VectorXd& v) const override {
    Params q;
    double lp = transform(v, q);
    for (std::size_t i = 0; i < t_.size(); ++i)
      lp += normal_log_pdf(y_[i], mean_at(t_[i], q), q.sigma);
    return lp;
  }

  bool has_gradient() const override { return true; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& v) const override {
    Params q;
    transform(v, q);

    // derivatives of the log likelihood w.r.t. the physical parameters
    double d_t0 = 0.0, d_k0 = 0.0, d_beta = 0.0, d_delta = 0.0, d_sigma = 0.0;
    const double inv_var = 1.0 / (q.sigma * q.sigma);
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const double delta_t = t_[i] - q.t0;
      double mu = 0.0;
      if (delta_t > 0.0) {
        const double u = (q.delta - q.beta) * delta_t;
        const double eb = std::exp(-q.beta * delta_t);
        const double ed = std::exp(-q.delta * delta_t);
        const double g0 = decay_mix(u, eb, ed);
        const double g1 = decay_mix_deriv(u, eb, ed);
        mu = q.k0 * delta_t * g0;
        const double dl_dmu = (y_[i] - mu) * inv_var;
        d_k0 += dl_dmu * delta_t * g0;
        d_beta += dl_dmu * (-delta_t * mu - q.k0 * delta_t * delta_t * g1);
        d_delta += dl_dmu * q.k0 * delta_t * delta_t * g1;
        // d mu / d t0 = -d mu / d delta_t
        d_t0 += dl_dmu * (-q.k0 * (g0 * (1.0 - q.beta * delta_t) + u * g1));
      }
      const double r = y_[i] - mu;
      d_sigma += r * r * inv_var / q.sigma - 1.0 / q.sigma;
    }

    const double d_phys[5] = {d_t0, d_k0, d_beta, d_delta, d_sigma};
    const double phys[5] = {q.t0, q.k0, q.beta, q.delta, q.sigma};
    Eigen::VectorXd g(5);
    for (int j = 0; j < 5; ++j) {
      const double sig = sigmoid(v[j]);
      const double width = boxes[j][1] - boxes[j][0];
      g[j] = d_phys[j] * phys[j] * ln10 * width * sig * (1.0 - sig) + (1.0 - 2.0 * sig);
    }
    return g;
  }

 private:
  struct Params {
    double t0, k0, beta, delta, sigma;
  };

  static constexpr double ln10 = 2.302585092994046;
  // uniform box priors on the log10 scale
  static constexpr double boxes[5][2] = {
      {-2.0, 1.0}, {-5.0, 5.0}, {-5.0, 5.0}, {-5.0, 5.0}, {-2.0, 2.0}};

  static double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }
  static double log_sigmoid(double v) {
    return v >= 0.0 ? -std::log1p(std::exp(-v)) : v - std::log1p(std::exp(v));
  }

  // Fills physical parameters and returns the transform's log density
  // contribution (uniform prior plus logit Jacobian; box widths cancel).
  static double transform(const Eigen::VectorXd& v, Params& q) {
    double w[5], lp = 0.0;
    for (int j = 0; j < 5; ++j) {
      const double sig = sigmoid(v[j]);
      w[j] = boxes[j][0] + (boxes[j][1] - boxes[j][0]) * sig;
      lp += log_sigmoid(v[j]) + log_sigmoid(-v[j]);
    }
    q.t0 = std::pow(10.0, w[0]);
    q.k0 = std::pow(10.0, w[1]);
    q.beta = std::pow(10.0, w[2]);
    q.delta = std::pow(10.0, w[3]);
    q.sigma = std::pow(10.0, w[4]);
    return lp;
  }

  double mean_at(double t, const Params& q) const {
    return mrna_mean_function(t, q.t0, q.k0, q.beta, q.delta);
  }

  std::vector<double> t_, y_;
};

std::pair<std::vector<double>, std::vector<double>> load_xy(const std::string& path,
                                                            const std::string& xcol,
                                                            const std::string& ycol) {
  const CsvTable table = read_csv(path);
  const int xi = table.column(xcol), yi = table.column(ycol);
  if (xi < 0 || yi < 0)
    throw ConfigError("dataset " + path + " must have columns '" + xcol + "' and '" + ycol + "'");
  std::vector<double> xs, ys;
  xs.reserve(table.values.rows());
  ys.reserve(table.values.rows());
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    xs.push_back(table.values(r, xi));
    ys.push_back(table.values(r, yi));
  }
  return {std::move(xs), std::move(ys)};
}

}  // namespace

Target make_gaussian(int dim, double variance) {
  return Target(std::make_shared<GaussianDensity>(dim, variance));
}

Target make_laplace1d() { return Target(std::make_shared<Laplace1d>()); }

Target make_cauchy1d() { return Target(std::make_shared<Cauchy1d>()); }

Target make_funnel(int dim, double tau) {
  return Target(std::make_shared<FunnelDensity>(dim, tau));
}

Target make_kilpisjarvi(std::vector<double> x_data, std::vector<double> y_data) {
  return Target(std::make_shared<KilpisjarviDensity>(std::move(x_data), std::move(y_data)));
}

Target make_mrna(std::vector<double> t_data, std::vector<double> y_data) {
  return Target(std::make_shared<MrnaDensity>(std::move(t_data), std::move(y_data)));
}

double mrna_mean_function(double t, double t0, double k0, double beta, double delta) {
  const double delta_t = t - t0;
  if (delta_t <= 0.0) return 0.0;
  const double u = (delta - beta) * delta_t;
  return k0 * delta_t *
         decay_mix(u, std::exp(-beta * delta_t), std::exp(-delta * delta_t));
}

const std::vector<std::string>& target_names() {
  static const std::vector<std::string> names = {
      "gaussian", "laplace", "cauchy", "funnel2", "funnel100", "kilpisjarvi", "mrna"};
  return names;
}

Target make_target(const std::string& name, const std::string& data_dir) {
  if (name == "gaussian") return make_gaussian(1, 1.0);
  if (name == "laplace") return make_laplace1d();
  if (name == "cauchy") return make_cauchy1d();
  if (name == "funnel2") return make_funnel(2, 0.6);
  if (name == "funnel100") return make_funnel(100, 6.0);
  if (name == "kilpisjarvi") {
    auto [x, y] = load_xy(data_dir + "/kilpisjarvi.csv", "x", "y");
    return make_kilpisjarvi(std::move(x), std::move(y));
  }
  if (name == "mrna") {
    auto [t, y] = load_xy(data_dir + "/mrna.csv", "t", "y");
    return make_mrna(std::move(t), std::move(y));
  }
  std::string known;
  for (const auto& n : target_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown target '" + name + "' (known targets: " + known + ")");
}

std::optional<double> cost_alpha_for(const std::string& name) {
  if (name == "mrna") return 5.767;
  if (name == "kilpisjarvi") return 5.9561;
  if (name == "funnel2") return 5.960;
  if (name == "funnel100") return 72.551;
  return std::nullopt;
}

}  // namespace autostep

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "autostep/target.hpp"

namespace autostep {

// Per-coordinate reference CDFs for sampler diagnostics.  A coordinate is
// backed either by an analytic CDF or by the empirical CDF of a (large)
// reference sample; coordinates may be left uncovered.
class ReferenceDistribution {
 public:
  enum class Kind { analytic_cdf, reference_sample };

  static ReferenceDistribution analytic(std::vector<std::function<double(double)>> cdfs) {
    ReferenceDistribution ref;
    ref.kind_ = Kind::analytic_cdf;
    for (auto& f : cdfs) {
      Coord c;
      c.cdf = std::move(f);
      ref.coords_.push_back(std::move(c));
    }
    return ref;
  }

  // rows = draws, columns = coordinates
  static ReferenceDistribution from_sample(const Eigen::MatrixXd& draws) {
    ReferenceDistribution ref;
    ref.kind_ = Kind::reference_sample;
    ref.sample_rows_ = draws.rows();
    for (Eigen::Index j = 0; j < draws.cols(); ++j) {
      Coord c;
      c.sorted.assign(draws.col(j).data(), draws.col(j).data() + draws.rows());
      std::sort(c.sorted.begin(), c.sorted.end());
      ref.coords_.push_back(std::move(c));
    }
    return ref;
  }

  // Analytic CDF from a target's known marginals (covered coordinates only).
  // The density is kept alive by the captured shared_ptr.
  static ReferenceDistribution from_target(const Target& target) {
    ReferenceDistribution ref;
    ref.kind_ = Kind::analytic_cdf;
    for (int j = 0; j < target.dim(); ++j) {
      Coord c;
      if (target.has_marginal_cdf(j)) {
        std::shared_ptr<const Density> d = target.density_ptr();
        c.cdf = [d, j](double v) { return d->marginal_cdf(j, v); };
      }
      ref.coords_.push_back(std::move(c));
    }
    return ref;
  }

  Kind kind() const { return kind_; }
  int dims() const { return static_cast<int>(coords_.size()); }
  Eigen::Index sample_rows() const { return sample_rows_; }

  bool covers(int coord) const {
    return coord >= 0 && coord < dims() &&
           (coords_[coord].cdf || !coords_[coord].sorted.empty());
  }

  double cdf(int coord, double v) const {
    if (!covers(coord))
      throw std::out_of_range("reference distribution does not cover coordinate " +
                              std::to_string(coord));
    const Coord& c = coords_[coord];
    if (c.cdf) return c.cdf(v);
    const auto it = std::upper_bound(c.sorted.begin(), c.sorted.end(), v);
    return static_cast<double>(it - c.sorted.begin()) / static_cast<double>(c.sorted.size());
  }

  std::function<double(double)> cdf_fn(int coord) const {
    if (!covers(coord))
      throw std::out_of_range("reference distribution does not cover coordinate " +
                              std::to_string(coord));
    return [this, coord](double v) { return cdf(coord, v); };
  }

 private:
  struct Coord {
    std::function<double(double)> cdf;  // analytic, when set
    std::vector<double> sorted;         // reference sample, when non-empty
  };

  Kind kind_ = Kind::analytic_cdf;
  Eigen::Index sample_rows_ = 0;
  std::vector<Coord> coords_;
};

}  // namespace autostep

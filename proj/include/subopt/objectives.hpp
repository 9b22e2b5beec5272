#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "subopt/oracles.hpp"
#include "subopt/types.hpp"

namespace subopt {

// Log-determinant of a symmetric PSD matrix via Cholesky. Tries the clean
// factorization first; on numerical failure retries with diagonal jitter
// escalating from jitter_floor. Never throws for PSD-up-to-noise input.
double chol_log_det(const Eigen::MatrixXd& m, double jitter_floor);

// Same, but the jitter is always added (comparison hook for the
// jittered-vs-clean agreement property).
double chol_log_det_jittered(const Eigen::MatrixXd& m, double jitter);

// Symmetric PSD similarity kernel. Validates symmetry (1e-9) and
// positive-semidefiniteness (pivots >= -1e-9 after jitter) on construction.
struct KernelMatrix {
  explicit KernelMatrix(Eigen::MatrixXd m);
  Eigen::MatrixXd entries;
};

// Covariance matrix with a diagonal ridge; must be positive definite once
// the ridge is added.
struct CovarianceMatrix {
  explicit CovarianceMatrix(Eigen::MatrixXd m, double jitter_scale = 1e-9);
  Eigen::MatrixXd entries;
  double jitter = 0.0;
};

// Weighted undirected graph over the ground set; no self-loops.
struct CutGraph {
  struct Edge {
    ElementId u, v;
    double w;
  };
  CutGraph(ElementId n, std::vector<Edge> edges);
  ElementId n;
  std::vector<Edge> edges;
};

// Per-element subsets of a weighted finite universe.
struct CoverageInstance {
  CoverageInstance(std::vector<std::vector<int>> sets, std::vector<double> universe_weights);
  std::vector<std::vector<int>> sets;
  std::vector<double> weights;
};

// f(S) = log det(L_S) + shift * |S|; f(empty) = 0. Marginals go through the
// evaluate-difference route; logdet_marginals_cached below is the optional
// factorization-cached alternative.
class LogDetObjective : public SubmodularOracle {
 public:
  explicit LogDetObjective(KernelMatrix kernel, double shift = 0.0);

  const Eigen::MatrixXd& kernel() const { return kernel_.entries; }
  double shift() const { return shift_; }
  double jitter_floor() const { return jitter_floor_; }

 protected:
  double evaluate(const SolutionSet& s) const override;

 private:
  KernelMatrix kernel_;
  double shift_;
  double jitter_floor_;
};

// Gaussian entropy H(S) = (1 + ln(2 pi)) / 2 * |S| + log det(Sigma_S) / 2.
class EntropyObjective : public SubmodularOracle {
 public:
  explicit EntropyObjective(CovarianceMatrix cov);

  const Eigen::MatrixXd& covariance() const { return cov_.entries; }

 protected:
  double evaluate(const SolutionSet& s) const override;

 private:
  CovarianceMatrix cov_;
};

// Weight of edges with exactly one endpoint in S.
class CutObjective : public SubmodularOracle {
 public:
  explicit CutObjective(CutGraph graph);

  void marginals(const SolutionSet& base, double base_value, std::span<const ElementId> candidates,
                 std::span<double> out) const override;

 protected:
  double evaluate(const SolutionSet& s) const override;

 private:
  CutGraph graph_;
  std::vector<std::vector<std::pair<ElementId, double>>> adjacency_;
};

// Weighted union coverage.
class CoverageObjective : public SubmodularOracle {
 public:
  explicit CoverageObjective(CoverageInstance instance);

  void marginals(const SolutionSet& base, double base_value, std::span<const ElementId> candidates,
                 std::span<double> out) const override;

 protected:
  double evaluate(const SolutionSet& s) const override;

 private:
  CoverageInstance instance_;
};

// f(S) = sum of per-element weights; exact-optimum sanity objective.
class ModularObjective : public SubmodularOracle {
 public:
  explicit ModularObjective(std::vector<double> weights);

  void marginals(const SolutionSet& base, double base_value, std::span<const ElementId> candidates,
                 std::span<double> out) const override;

  std::span<const double> weights() const { return weights_; }

 protected:
  double evaluate(const SolutionSet& s) const override;

 private:
  std::vector<double> weights_;
};

// Marginals log det(L_{S+e}) - log det(L_S) for all candidates from one
// factorization of L_S (Schur complements). Optional fast path; must agree
// with the evaluate-difference route within 1e-7.
std::vector<double> logdet_marginals_cached(const Eigen::MatrixXd& kernel, double shift,
                                            double jitter_floor, const SolutionSet& base,
                                            std::span<const ElementId> candidates);

}  // namespace subopt

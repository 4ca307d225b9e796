#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <limits>
#include <string>
#include <vector>

#include "binident/errors.hpp"

namespace binident {

// Checks the adjacency invariants: square, finite, nonnegative, symmetric
// (within 1e-12), zero diagonal. Throws with every violated rule listed.
inline void validate_adjacency(const Eigen::MatrixXd& adj) {
  std::vector<ValidationIssue> issues;
  if (adj.rows() != adj.cols() || adj.rows() < 1) {
    issues.push_back({"invalid_adjacency", "weight matrix must be square and nonempty"});
  } else {
    if (!adj.allFinite() || (adj.array() < 0.0).any()) {
      issues.push_back({"invalid_adjacency", "edge weights must be finite and nonnegative"});
    }
    if ((adj - adj.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      issues.push_back({"invalid_adjacency", "graph must be undirected: weight matrix must be symmetric"});
    }
    if (adj.diagonal().cwiseAbs().maxCoeff() > 0.0) {
      issues.push_back({"invalid_adjacency", "self-loops are not allowed: diagonal must be zero"});
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

// Traversal from node 0 over positive-weight edges reaches every node.
inline bool is_connected(const Eigen::MatrixXd& adj) {
  validate_adjacency(adj);
  const int n = static_cast<int>(adj.rows());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < n; ++j) {
      if (!seen[static_cast<std::size_t>(j)] && adj(i, j) > 0.0) {
        seen[static_cast<std::size_t>(j)] = 1;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == n;
}

struct LaplacianView {
  Eigen::MatrixXd matrix;  // D - A with D the row-sum degree diagonal
  double lambda2 = 0.0;    // second-smallest eigenvalue; +inf for n == 1
};

inline LaplacianView build_laplacian(const Eigen::MatrixXd& adj) {
  validate_adjacency(adj);
  LaplacianView view;
  view.matrix = -adj;
  view.matrix.diagonal() = adj.rowwise().sum();
  if (adj.rows() == 1) {
    view.lambda2 = std::numeric_limits<double>::infinity();
    return view;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(view.matrix, Eigen::EigenvaluesOnly);
  view.lambda2 = solver.eigenvalues()(1);
  return view;
}

// Named topologies with a uniform edge weight.
inline Eigen::MatrixXd make_topology(const std::string& name, int nodes, double weight) {
  if (nodes < 1 || !(weight > 0.0)) {
    throw ValidationError({{"invalid_adjacency", "topology needs nodes >= 1 and weight > 0"}});
  }
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(nodes, nodes);
  auto link = [&](int i, int j) {
    if (i == j) return;
    adj(i, j) = weight;
    adj(j, i) = weight;
  };
  if (name == "cycle") {
    for (int i = 0; i < nodes; ++i) link(i, (i + 1) % nodes);
  } else if (name == "path") {
    for (int i = 0; i + 1 < nodes; ++i) link(i, i + 1);
  } else if (name == "complete") {
    for (int i = 0; i < nodes; ++i) {
      for (int j = i + 1; j < nodes; ++j) link(i, j);
    }
  } else {
    throw ValidationError({{"invalid_adjacency", "unknown topology '" + name + "' (expected cycle, path, or complete)"}});
  }
  return adj;
}

}  // namespace binident

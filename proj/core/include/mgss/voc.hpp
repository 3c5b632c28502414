#pragma once

#include <vector>

#include "mgss/search_tree.hpp"

namespace mgss {

// How the path composition f is evaluated inside the benefit integral.
enum class FMode {
  kExactNested,  // full nested composition at every quadrature point
  kSingleStage,  // all stages collapsed to clamps except the most critical one
};

// Which regime the benefit computation landed in.  kZero: no draw can move
// the top-level decision.  kBoundary: the gain region ends at the known-
// children extremum (point mass included).  kInterior: the reachable-top
// plateau is hit strictly inside the draw range.
enum class BenefitCase { kZero, kBoundary, kInterior };

constexpr const char* to_string(BenefitCase c) {
  return c == BenefitCase::kZero       ? "zero"
         : c == BenefitCase::kBoundary ? "boundary"
                                       : "interior";
}

struct VocParams {
  double kappa = 0.02;  // cost per successor evaluation
  // Candidate batch sizes.  Full resolution (s = l) is always priced as
  // well: partial batches at a node with many pending successors can be
  // worth exactly nothing while resolving it outright is not, and a pricing
  // that never looks at s = l would park such nodes forever.
  std::vector<int> batch_sizes{1, 2, 4, 8, 16, 32};
  double quad_tol = 1e-6;         // absolute tolerance of the benefit integral
  FMode f_mode = FMode::kExactNested;
  // The atom at the known-children extremum is valued through the clamped
  // composition by default; the flag switches to the pure b-chain value.
  bool cap_point_mass_at_delta = true;
  long long max_expansions = -1;  // engine budget, -1 = unlimited
};

struct BenefitResult {
  double value = 0.0;
  BenefitCase tag = BenefitCase::kZero;
};

// Expected improvement in the root decision from evaluating s successors of
// `target` at once.  pre: `target` relevant for its path and 1 <= s <= l.
BenefitResult expected_benefit(const SearchTree& t, const PathContext& path,
                               int target, int s, const VocParams& params);

// Cheap bound on the benefit, valid for every batch size.
double benefit_upper_bound(const SearchTree& t, const PathContext& path,
                           int target, const VocParams& params);

struct NetValue {
  double net = 0.0;
  double benefit = 0.0;
  int s = 1;
  BenefitCase tag = BenefitCase::kZero;
};

// Picks the batch size with the best benefit-per-successor and prices it:
// net = benefit(s*) - kappa * s*.
NetValue net_value(const SearchTree& t, const PathContext& path, int target,
                   const VocParams& params);

}  // namespace mgss

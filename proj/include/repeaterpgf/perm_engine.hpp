// Exact dephasing statistics for arbitrary swapping strategies.
//
// Each strategy maps a vector (N_1..N_n) of per-segment generation times to
// a total dephasing that is piecewise linear on the cones obtained by fixing
// the relative order of the N_i.  The engine works one ordering at a time:
// times become sorted positions, every max/min/|a-b| resolves against the
// order (or forces a recorded sign refinement), and the dephasing becomes an
// integer affine form of the gap variables between consecutive order
// statistics.  Summing the resulting geometric series per cone yields one
// factored term, and the sum over all n! cones is the exact PGF.

#pragma once

#include "repeaterpgf/pgf.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rpgf {

enum class DephasingPolicy {
  OptimalGreedy,   // always swap an earliest ready pair (lowest index on ties)
  OptimalGlobal,   // minimum over all swapping orders (recursive, memoized)
  Doubling,        // fixed pairing by halves; n in {2, 4, 8}
  Iterative,       // extend from the left one segment at a time
  Mixed31,         // n=4: optimal over segments 1..3, then join segment 4
  Mixed44,         // n=8: optimal over each half, then join the halves
  Mixed2222,       // n=8: swap pairs, then optimal over the four pair maxima
  Mixed242,        // n=8: 2+4+2 groups, optimal within and across
  Sequential,      // one segment after another; dephasing N_2 + ... + N_n
};

const char* to_string(DephasingPolicy policy);

// Throws std::invalid_argument unless the policy is defined for n segments.
void validate_policy(DephasingPolicy policy, int n);

// Integer linear form c_1 N_1 + ... + c_n N_n + constant.
struct LinearForm {
  std::vector<std::int64_t> coeff;
  std::int64_t constant = 0;

  std::int64_t eval(const std::vector<std::int64_t>& samples) const;
  std::string describe() const;  // e.g. "2N_4 - N_1 - N_3"
  friend auto operator<=>(const LinearForm&, const LinearForm&) = default;
};

// The cone N_{perm[0]} R_0 N_{perm[1]} R_1 ... R_{n-2} N_{perm[n-1]} where
// R_k is '<' iff strict[k] (strict exactly at inversions of perm, which makes
// the cones over all permutations a disjoint cover of the positive orthant),
// plus optional sign refinements for comparisons the order cannot decide.
struct OrderingDomain {
  struct Refinement {
    LinearForm form;
    bool nonneg = true;  // form >= 0 when true, form < 0 when false
    friend auto operator<=>(const Refinement&, const Refinement&) = default;
  };

  std::vector<int> perm;  // 1-based segment indices, earliest first
  std::vector<bool> strict;
  std::vector<Refinement> refinements;

  bool contains(const std::vector<std::int64_t>& samples) const;
  std::string describe() const;  // e.g. "N_2 < N_1 <= N_3 <= N_4"
  friend auto operator<=>(const OrderingDomain&, const OrderingDomain&) = default;
};

// Exact dephasing of the policy at a concrete sample of positive integers.
std::int64_t dephasing_value(DephasingPolicy policy, const std::vector<std::int64_t>& samples);

struct GreedyGlobalReport {
  bool equal = true;
  std::optional<std::vector<std::int64_t>> counterexample;
};

// Compares OptimalGreedy against OptimalGlobal over the full grid
// {1..bound}^n plus 10^5 seeded random samples with entries up to 10^4;
// reports the first disagreement if one exists.
GreedyGlobalReport verify_greedy_equals_global(int n, std::int64_t bound);

// The policy's exact value on every cone, as a map domain -> linear form.
// Cones that required sign refinements appear with their refinements listed.
std::map<OrderingDomain, LinearForm> derive_linear_forms(DephasingPolicy policy, int n);

// One factored term per cone, in lexicographic cone order.  Throws
// std::domain_error if any cone required sign refinements, since a refined
// cone is not a plain product of geometric series.
FactoredSum policy_pgf_sum(DephasingPolicy policy, int n);

// Exact PGF of the policy's dephasing; numeric-q mode with q = 1 - p.
SymbolicPGF pgf_from_policy(DephasingPolicy policy, int n, const ExactRational& p);
// Same with q kept symbolic (practical for n <= 4).
SymbolicPGF pgf_from_policy_bivariate(DephasingPolicy policy, int n);

struct RatioRow {
  double alpha = 0.0;
  double exp_moment_ratio = 0.0;  // E[e^{-alpha D_a}] / E[e^{-alpha D_b}]
};
struct RatioTable {
  double mean_ratio = 0.0;  // E[D_a] / E[D_b]
  std::vector<RatioRow> rows;
};

RatioTable ratio_diagnostics(DephasingPolicy a, DephasingPolicy b, int n, double p,
                             const std::vector<double>& alphas);

// Rows "domain | form_a | form_b | ...", one per cone in lexicographic
// order, suitable for line diffing.
std::string dump_domain_table(const std::vector<DephasingPolicy>& policies, int n);

}  // namespace rpgf

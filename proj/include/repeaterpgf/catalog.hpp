#pragma once

// Closed-form PGF constructors for the schemes with known explicit formulas.
// These serve as the fast path for moment evaluation and as golden fixtures
// for the permutation-based engine.

#include <cstdint>
#include <utility>

#include "repeaterpgf/pgf.hpp"
#include "repeaterpgf/rational.hpp"
#include "repeaterpgf/scheme.hpp"

namespace rpgf {

// PGF of the number of attempts until first success, p t / (1 - q t).
SymbolicPGF geometric_pgf(const ExactRational& p);

// Fully sequential scheme: (K-PGF, D-PGF) = ((pt/(1-qt))^n, same to power n-1).
std::pair<SymbolicPGF, SymbolicPGF> sequential_pgfs(int n, const ExactRational& p);

// Fully sequential scheme with accumulated storage limit m across all
// junctions. D is supported on [n-1, m].
std::pair<SymbolicPGF, SymbolicPGF> sequential_global_cutoff_pgfs(int n, const ExactRational& p,
                                                                  std::int64_t m);

// Double-precision point evaluation of the global-cutoff pair above at scalar
// t, usable for cutoffs far beyond the reach of the polynomial construction
// (m up to ~1e18): the truncated sums are folded into geometric closed forms
// plus log-space remainder terms. Returns {K-PGF(t), D-PGF(t)}.
std::pair<double, double> sequential_global_cutoff_values(int n, double p, double t, double m);

// Fully sequential scheme with per-junction cutoff vector (m_1..m_{n-1}).
// The K-PGF follows the compound-geometric recursion; the D-PGF is the product
// of independent truncated geometrics.
std::pair<SymbolicPGF, SymbolicPGF> sequential_vector_cutoff_pgfs(int n, const ExactRational& p,
                                                                  const CutoffVector& m);

// PGF of max(N_1..N_n) for parallel distribution. Both printed forms are
// constructed and checked for equality internally.
SymbolicPGF parallel_K_pgf(int n, const ExactRational& p);

// Exact mean of max(N_1..N_n): sum_i (-1)^(i+1) C(n,i)/(1-q^i).
ExactRational parallel_K_mean(int n, const ExactRational& p);

// Two-segment parallel scheme with memory cutoff m: (K-PGF, D-PGF).
std::pair<SymbolicPGF, SymbolicPGF> parallel_two_segment_cutoff_pgfs(const ExactRational& p,
                                                                     std::int64_t m);

// Dephasing PGF of a scheme with a printed closed form, with q = 1 - p
// substituted. Throws std::invalid_argument when the scheme has no closed
// form in the catalog (the permutation engine must be used instead).
SymbolicPGF fixture_pgf(const SchemeSpec& scheme, const ExactRational& p);

// Same fixture with q kept symbolic (p = 1 - q).
SymbolicPGF fixture_pgf_bivariate(const SchemeSpec& scheme);

// Exact mean total waiting time for schemes with a closed-form expression.
ExactRational waiting_time_mean(const SchemeSpec& scheme, const ExactRational& p);

}  // namespace rpgf

#include "repeaterpgf/perm_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace rpgf {

namespace {

using i64 = std::int64_t;

constexpr int kMaxSegments = 8;

// Affine form over the gap variables of one ordering cone: a[0] is the
// constant, a[k] (1 <= k <= n) the coefficient of the k-th gap.  On the cone
// all gaps range over the nonnegative integers independently, so a form has
// a definite sign iff all entries share one.
struct GapForm {
  std::array<i64, kMaxSegments + 1> a{};

  GapForm& operator+=(const GapForm& o) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
  }
  friend GapForm operator-(GapForm x, const GapForm& y) {
    for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
    return x;
  }
  friend bool operator==(const GapForm&, const GapForm&) = default;
};

// +1 / -1 / 0 when the sign is uniform over the cone, nullopt when mixed.
std::optional<int> cone_sign(const GapForm& f) {
  bool pos = false, neg = false;
  for (const i64 c : f.a) {
    pos = pos || c > 0;
    neg = neg || c < 0;
  }
  if (pos && neg) return std::nullopt;
  return pos ? 1 : (neg ? -1 : 0);
}

struct GapRefinement {
  GapForm form;
  bool nonneg = true;
};

// Thrown when a minimum over branch values is not decided by the cone and
// the declared refinements; the caller splits the cone on this form's sign.
struct NeedSplit {
  GapForm form;
};

struct SymbolicCtx {
  using Time = int;      // sorted position 1..n
  using Value = GapForm;

  int n = 0;
  std::array<int, kMaxSegments> pos_of{};       // position of segment i (0-based i)
  std::array<bool, kMaxSegments - 1> strict{};  // strict[k]: between positions k+1, k+2
  const std::vector<GapRefinement>* refinements = nullptr;

  Time time(int seg) const { return pos_of[static_cast<std::size_t>(seg)]; }

  // M_k = 1 + sum_{j <= k} g_j + (number of strict relations below position k)
  Value time_value(Time k) const {
    Value v;
    v.a[0] = 1;
    for (int j = 1; j <= k; ++j) v.a[static_cast<std::size_t>(j)] = 1;
    for (int j = 1; j < k; ++j) v.a[0] += strict[static_cast<std::size_t>(j - 1)] ? 1 : 0;
    return v;
  }

  // |M_x - M_y| resolves to M_hi - M_lo = sum_{k=lo+1}^{hi} (g_k + s_{k-1}).
  Value abs_diff(Time x, Time y) const {
    const auto [lo, hi] = std::minmax(x, y);
    Value v;
    for (int k = lo + 1; k <= hi; ++k) {
      v.a[static_cast<std::size_t>(k)] = 1;
      v.a[0] += strict[static_cast<std::size_t>(k - 2)] ? 1 : 0;
    }
    return v;
  }

  static Time max_time(Time x, Time y) { return std::max(x, y); }
  static Value zero() { return {}; }

  std::optional<int> resolved_sign(const GapForm& f) const {
    if (auto s = cone_sign(f)) return s;
    for (const auto& r : *refinements) {
      if (r.form == f) return r.nonneg ? 1 : -1;
      if (r.form == GapForm{} - f) return r.nonneg ? -1 : 1;
    }
    return std::nullopt;
  }

  Value min_value(std::vector<Value>& cands) const {
    std::optional<GapForm> undecided;
    for (const auto& c : cands) {
      bool dominates = true;
      for (const auto& other : cands) {
        if (&other == &c) continue;
        const auto s = resolved_sign(other - c);  // sign of other - c
        if (!s.has_value()) {
          if (!undecided) undecided = other - c;
          dominates = false;
          break;
        }
        if (*s < 0) {
          dominates = false;
          break;
        }
      }
      if (dominates) return c;
    }
    if (!undecided) {
      throw std::logic_error("perm_engine: pairwise-resolved branch set has no minimum");
    }
    throw NeedSplit{*undecided};
  }
};

struct NumericCtx {
  using Time = i64;
  using Value = i64;

  const std::vector<i64>* samples = nullptr;

  Time time(int seg) const { return (*samples)[static_cast<std::size_t>(seg)]; }
  Value time_value(Time t) const { return t; }
  Value abs_diff(Time x, Time y) const { return std::abs(x - y); }
  static Time max_time(Time x, Time y) { return std::max(x, y); }
  static Value zero() { return 0; }
  Value min_value(std::vector<Value>& cands) const {
    return *std::min_element(cands.begin(), cands.end());
  }
};

// Minimum total swap cost over all orders, memoized on the set of already
// swapped junctions (which determines the current segment runs).
template <class Ctx>
class OptimalRec {
public:
  OptimalRec(Ctx& ctx, const std::vector<typename Ctx::Time>& times)
      : ctx_(ctx), times_(times), m_(static_cast<int>(times.size()) - 1) {}

  typename Ctx::Value run(unsigned mask) {
    if (mask == (1u << m_) - 1u) return Ctx::zero();
    if (seen_[mask]) return memo_[mask];
    std::vector<typename Ctx::Value> cands;
    for (int j = 0; j < m_; ++j) {
      if (mask & (1u << j)) continue;
      int a = j;
      while (a > 0 && (mask & (1u << (a - 1)))) --a;
      int b = j + 1;
      while (b < m_ && (mask & (1u << b))) ++b;
      typename Ctx::Time left = times_[static_cast<std::size_t>(a)];
      for (int k = a + 1; k <= j; ++k) {
        left = Ctx::max_time(left, times_[static_cast<std::size_t>(k)]);
      }
      typename Ctx::Time right = times_[static_cast<std::size_t>(j + 1)];
      for (int k = j + 2; k <= b; ++k) {
        right = Ctx::max_time(right, times_[static_cast<std::size_t>(k)]);
      }
      auto v = ctx_.abs_diff(left, right);
      v += run(mask | (1u << j));
      cands.push_back(std::move(v));
    }
    auto best = ctx_.min_value(cands);
    seen_[mask] = true;
    memo_[mask] = best;
    return best;
  }

private:
  Ctx& ctx_;
  const std::vector<typename Ctx::Time>& times_;
  int m_;
  std::array<typename Ctx::Value, 1u << (kMaxSegments - 1)> memo_{};
  std::array<bool, 1u << (kMaxSegments - 1)> seen_{};
};

template <class Ctx>
typename Ctx::Value optimal_cost(Ctx& ctx, const std::vector<typename Ctx::Time>& times) {
  if (times.size() < 2) return Ctx::zero();
  OptimalRec<Ctx> rec(ctx, times);
  return rec.run(0);
}

// Always swap an earliest ready pair; ties go to the lowest junction index.
template <class Ctx>
typename Ctx::Value greedy_cost(Ctx& ctx, std::vector<typename Ctx::Time> times) {
  auto acc = Ctx::zero();
  while (times.size() > 1) {
    std::size_t best = 0;
    auto best_ready = Ctx::max_time(times[0], times[1]);
    for (std::size_t j = 1; j + 1 < times.size(); ++j) {
      const auto ready = Ctx::max_time(times[j], times[j + 1]);
      if (ready < best_ready) {
        best = j;
        best_ready = ready;
      }
    }
    acc += ctx.abs_diff(times[best], times[best + 1]);
    times[best] = best_ready;
    times.erase(times.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  return acc;
}

template <class Ctx>
std::pair<typename Ctx::Time, typename Ctx::Value> doubling_cost(Ctx& ctx,
                                                                 const std::vector<typename Ctx::Time>& times,
                                                                 int lo, int hi) {
  if (hi - lo == 1) return {times[static_cast<std::size_t>(lo)], Ctx::zero()};
  const int mid = lo + (hi - lo) / 2;
  auto [tl, vl] = doubling_cost(ctx, times, lo, mid);
  auto [tr, vr] = doubling_cost(ctx, times, mid, hi);
  vl += vr;
  vl += ctx.abs_diff(tl, tr);
  return {Ctx::max_time(tl, tr), vl};
}

template <class Ctx>
typename Ctx::Value eval_policy(Ctx& ctx, DephasingPolicy policy, int n) {
  std::vector<typename Ctx::Time> times(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) times[static_cast<std::size_t>(i)] = ctx.time(i);

  const auto max_range = [&](int lo, int hi) {
    auto t = times[static_cast<std::size_t>(lo)];
    for (int k = lo + 1; k < hi; ++k) t = Ctx::max_time(t, times[static_cast<std::size_t>(k)]);
    return t;
  };
  const auto sub = [&](int lo, int hi) {
    return std::vector<typename Ctx::Time>(times.begin() + lo, times.begin() + hi);
  };

  switch (policy) {
    case DephasingPolicy::Sequential: {
      auto acc = Ctx::zero();
      for (int i = 1; i < n; ++i) acc += ctx.time_value(times[static_cast<std::size_t>(i)]);
      return acc;
    }
    case DephasingPolicy::OptimalGreedy:
      return greedy_cost(ctx, times);
    case DephasingPolicy::OptimalGlobal:
      return optimal_cost(ctx, times);
    case DephasingPolicy::Doubling:
      return doubling_cost(ctx, times, 0, n).second;
    case DephasingPolicy::Iterative: {
      auto acc = Ctx::zero();
      auto cur = times[0];
      for (int k = 1; k < n; ++k) {
        acc += ctx.abs_diff(cur, times[static_cast<std::size_t>(k)]);
        cur = Ctx::max_time(cur, times[static_cast<std::size_t>(k)]);
      }
      return acc;
    }
    case DephasingPolicy::Mixed31: {
      auto front = sub(0, 3);
      auto acc = optimal_cost(ctx, front);
      acc += ctx.abs_diff(max_range(0, 3), times[3]);
      return acc;
    }
    case DephasingPolicy::Mixed44: {
      auto left = sub(0, 4);
      auto right = sub(4, 8);
      auto acc = optimal_cost(ctx, left);
      acc += optimal_cost(ctx, right);
      acc += ctx.abs_diff(max_range(0, 4), max_range(4, 8));
      return acc;
    }
    case DephasingPolicy::Mixed2222: {
      auto acc = Ctx::zero();
      std::vector<typename Ctx::Time> maxes;
      for (int i = 0; i < 8; i += 2) {
        acc += ctx.abs_diff(times[static_cast<std::size_t>(i)], times[static_cast<std::size_t>(i + 1)]);
        maxes.push_back(max_range(i, i + 2));
      }
      acc += optimal_cost(ctx, maxes);
      return acc;
    }
    case DephasingPolicy::Mixed242: {
      auto acc = ctx.abs_diff(times[0], times[1]);
      acc += ctx.abs_diff(times[6], times[7]);
      auto middle = sub(2, 6);
      acc += optimal_cost(ctx, middle);
      std::vector<typename Ctx::Time> tops = {max_range(0, 2), max_range(2, 6), max_range(6, 8)};
      acc += optimal_cost(ctx, tops);
      return acc;
    }
  }
  throw std::invalid_argument("perm_engine: unknown policy");
}

// Convert a gap-basis form to coefficients over the N variables of a cone:
// with b_k = a[k] and b_{n+1} = 0, the coefficient of N at sorted position k
// is b_k - b_{k+1}; the constant absorbs the offsets of the parametrization.
LinearForm gap_to_linear(const GapForm& f, const std::vector<int>& perm,
                         const std::array<bool, kMaxSegments - 1>& strict, int n) {
  LinearForm lf;
  lf.coeff.assign(static_cast<std::size_t>(n), 0);
  for (int k = 1; k <= n; ++k) {
    const i64 b = f.a[static_cast<std::size_t>(k)];
    const i64 b_next = (k < n) ? f.a[static_cast<std::size_t>(k + 1)] : 0;
    lf.coeff[static_cast<std::size_t>(perm[static_cast<std::size_t>(k - 1)] - 1)] = b - b_next;
  }
  i64 c = f.a[0] - f.a[1];
  for (int k = 2; k <= n; ++k) {
    if (strict[static_cast<std::size_t>(k - 2)]) c -= f.a[static_cast<std::size_t>(k)];
  }
  lf.constant = c;
  return lf;
}

std::string term_name(int index) { return "N_" + std::to_string(index); }

// Doubles are dyadic rationals, so this conversion is exact.
ExactRational exact_from_double(double x) {
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  const auto scaled = static_cast<i64>(std::ldexp(mant, 53));
  return ExactRational(scaled) * ExactRational(2).pow(exp - 53);
}

void append_term(std::string& out, i64 coeff, const std::string& name, bool& first) {
  if (coeff == 0) return;
  const i64 mag = std::abs(coeff);
  if (first) {
    if (coeff < 0) out += "-";
    first = false;
  } else {
    out += coeff < 0 ? " - " : " + ";
  }
  if (mag != 1 || name.empty()) {
    out += std::to_string(mag);
  }
  out += name;
}

}  // namespace

const char* to_string(DephasingPolicy policy) {
  switch (policy) {
    case DephasingPolicy::OptimalGreedy: return "optimal-greedy";
    case DephasingPolicy::OptimalGlobal: return "optimal";
    case DephasingPolicy::Doubling: return "doubling";
    case DephasingPolicy::Iterative: return "iterative";
    case DephasingPolicy::Mixed31: return "mixed-3-1";
    case DephasingPolicy::Mixed44: return "mixed-4-4";
    case DephasingPolicy::Mixed2222: return "mixed-2-2-2-2";
    case DephasingPolicy::Mixed242: return "mixed-2-4-2";
    case DephasingPolicy::Sequential: return "sequential";
  }
  return "unknown";
}

void validate_policy(DephasingPolicy policy, int n) {
  if (n < 2 || n > kMaxSegments) {
    throw std::invalid_argument("perm_engine: segment count must be between 2 and 8");
  }
  switch (policy) {
    case DephasingPolicy::Doubling:
      if (n != 2 && n != 4 && n != 8) {
        throw std::invalid_argument("perm_engine: doubling needs n in {2, 4, 8}");
      }
      break;
    case DephasingPolicy::Mixed31:
      if (n != 4) throw std::invalid_argument("perm_engine: mixed-3-1 needs n = 4");
      break;
    case DephasingPolicy::Mixed44:
    case DephasingPolicy::Mixed2222:
    case DephasingPolicy::Mixed242:
      if (n != 8) throw std::invalid_argument("perm_engine: this mixed policy needs n = 8");
      break;
    default:
      break;
  }
}

i64 LinearForm::eval(const std::vector<i64>& samples) const {
  i64 v = constant;
  for (std::size_t i = 0; i < coeff.size(); ++i) v += coeff[i] * samples[i];
  return v;
}

std::string LinearForm::describe() const {
  std::string out;
  bool first = true;
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    if (coeff[i] > 0) append_term(out, coeff[i], term_name(static_cast<int>(i) + 1), first);
  }
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    if (coeff[i] < 0) append_term(out, coeff[i], term_name(static_cast<int>(i) + 1), first);
  }
  append_term(out, constant, "", first);
  return first ? "0" : out;
}

bool OrderingDomain::contains(const std::vector<i64>& samples) const {
  for (std::size_t k = 0; k + 1 < perm.size(); ++k) {
    const i64 a = samples[static_cast<std::size_t>(perm[k] - 1)];
    const i64 b = samples[static_cast<std::size_t>(perm[k + 1] - 1)];
    if (strict[k] ? !(a < b) : !(a <= b)) return false;
  }
  for (const auto& r : refinements) {
    const i64 v = r.form.eval(samples);
    if (r.nonneg ? v < 0 : v >= 0) return false;
  }
  return true;
}

std::string OrderingDomain::describe() const {
  std::string out;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (k > 0) out += strict[k - 1] ? " < " : " <= ";
    out += term_name(perm[k]);
  }
  for (const auto& r : refinements) {
    out += "; " + r.form.describe() + (r.nonneg ? " >= 0" : " < 0");
  }
  return out;
}

i64 dephasing_value(DephasingPolicy policy, const std::vector<i64>& samples) {
  const int n = static_cast<int>(samples.size());
  validate_policy(policy, n);
  for (const i64 v : samples) {
    if (v < 1) throw std::invalid_argument("perm_engine: generation times must be positive");
  }
  NumericCtx ctx{&samples};
  return eval_policy(ctx, policy, n);
}

GreedyGlobalReport verify_greedy_equals_global(int n, i64 bound) {
  validate_policy(DephasingPolicy::OptimalGlobal, n);
  if (bound < 1) throw std::invalid_argument("perm_engine: bound must be >= 1");
  std::vector<i64> samples(static_cast<std::size_t>(n), 1);
  NumericCtx ctx{&samples};
  const auto differ = [&]() {
    return eval_policy(ctx, DephasingPolicy::OptimalGreedy, n) !=
           eval_policy(ctx, DephasingPolicy::OptimalGlobal, n);
  };
  for (;;) {
    if (differ()) return {false, samples};
    int i = 0;
    while (i < n && samples[static_cast<std::size_t>(i)] == bound) {
      samples[static_cast<std::size_t>(i)] = 1;
      ++i;
    }
    if (i == n) break;
    ++samples[static_cast<std::size_t>(i)];
  }
  std::mt19937_64 gen(0x9e3779b9u + static_cast<unsigned>(n));
  std::uniform_int_distribution<i64> value(1, 10000);
  for (int trial = 0; trial < 100000; ++trial) {
    for (auto& v : samples) v = value(gen);
    if (differ()) return {false, samples};
  }
  return {true, std::nullopt};
}

std::map<OrderingDomain, LinearForm> derive_linear_forms(DephasingPolicy policy, int n) {
  validate_policy(policy, n);
  std::map<OrderingDomain, LinearForm> out;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  do {
    SymbolicCtx ctx;
    ctx.n = n;
    for (int k = 0; k < n; ++k) {
      ctx.pos_of[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)] - 1)] = k + 1;
    }
    for (int k = 0; k + 1 < n; ++k) {
      ctx.strict[static_cast<std::size_t>(k)] =
          perm[static_cast<std::size_t>(k)] > perm[static_cast<std::size_t>(k + 1)];
    }
    std::vector<std::vector<GapRefinement>> work{{}};
    while (!work.empty()) {
      std::vector<GapRefinement> refs = std::move(work.front());
      work.erase(work.begin());
      if (refs.size() > 64) {
        throw std::logic_error("perm_engine: runaway refinement while deriving forms");
      }
      ctx.refinements = &refs;
      try {
        const GapForm f = eval_policy(ctx, policy, n);
        OrderingDomain dom;
        dom.perm = perm;
        dom.strict.assign(static_cast<std::size_t>(n - 1), false);
        for (int k = 0; k + 1 < n; ++k) dom.strict[static_cast<std::size_t>(k)] = ctx.strict[static_cast<std::size_t>(k)];
        for (const auto& r : refs) {
          dom.refinements.push_back({gap_to_linear(r.form, perm, ctx.strict, n), r.nonneg});
        }
        out.emplace(std::move(dom), gap_to_linear(f, perm, ctx.strict, n));
      } catch (const NeedSplit& split) {
        auto widen = refs;
        widen.push_back({split.form, true});
        work.push_back(widen);
        widen.back().nonneg = false;
        work.push_back(std::move(widen));
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

FactoredSum policy_pgf_sum(DephasingPolicy policy, int n) {
  const auto forms = derive_linear_forms(policy, n);
  FactoredSum sum;
  for (const auto& [dom, lf] : forms) {
    if (!dom.refinements.empty()) {
      throw std::domain_error("perm_engine: refined cone is not a product of geometric series");
    }
    // Gap coefficient at position k is the suffix sum of the N coefficients
    // of the segments at positions >= k; the offset is the form's value at
    // the cone's minimal point.
    std::vector<i64> gap(static_cast<std::size_t>(n + 1), 0);
    for (int k = n; k >= 1; --k) {
      gap[static_cast<std::size_t>(k)] =
          (k < n ? gap[static_cast<std::size_t>(k + 1)] : 0) +
          lf.coeff[static_cast<std::size_t>(dom.perm[static_cast<std::size_t>(k - 1)] - 1)];
    }
    std::vector<i64> lowest(static_cast<std::size_t>(n), 0);
    i64 floor_time = 1;
    for (int k = 0; k < n; ++k) {
      if (k > 0 && dom.strict[static_cast<std::size_t>(k - 1)]) ++floor_time;
      lowest[static_cast<std::size_t>(dom.perm[static_cast<std::size_t>(k)] - 1)] = floor_time;
    }
    const i64 t_pow = lf.eval(lowest);
    i64 q_pow = 0;
    for (int k = 0; k + 1 < n; ++k) {
      if (dom.strict[static_cast<std::size_t>(k)]) q_pow += n - 1 - k;
    }
    FactoredPGF part;
    part.p_pow = n;
    part.q_pow = q_pow;
    part.t_pow = t_pow;
    if (t_pow < 0) throw std::logic_error("perm_engine: negative dephasing offset");
    for (int k = 1; k <= n; ++k) {
      const i64 b = gap[static_cast<std::size_t>(k)];
      if (b < 0) throw std::logic_error("perm_engine: negative gap coefficient");
      part.denom.push_back({n - k + 1, b});
    }
    sum.add(std::move(part));
  }
  return sum;
}

SymbolicPGF pgf_from_policy(DephasingPolicy policy, int n, const ExactRational& p) {
  if (p.sign() <= 0 || p > ExactRational(1)) {
    throw std::domain_error("perm_engine: success probability must be in (0, 1]");
  }
  return policy_pgf_sum(policy, n).to_symbolic(ExactRational(1) - p);
}

SymbolicPGF pgf_from_policy_bivariate(DephasingPolicy policy, int n) {
  return policy_pgf_sum(policy, n).to_symbolic(std::nullopt);
}

RatioTable ratio_diagnostics(DephasingPolicy a, DephasingPolicy b, int n, double p,
                             const std::vector<double>& alphas) {
  validate_policy(a, n);
  validate_policy(b, n);
  if (!(p > 0.0) || p > 1.0) {
    throw std::domain_error("perm_engine: success probability must be in (0, 1]");
  }
  const double q = 1.0 - p;
  const FactoredSum sum_a = policy_pgf_sum(a, n);
  const FactoredSum sum_b = policy_pgf_sum(b, n);
  RatioTable table;
  const ExactRational q_exact = ExactRational(1) - exact_from_double(p);
  table.mean_ratio = (sum_a.mean_exact(q_exact) / sum_b.mean_exact(q_exact)).to_double();
  for (const double alpha : alphas) {
    const double t = std::exp(-alpha);
    table.rows.push_back({alpha, sum_a.eval(q, t) / sum_b.eval(q, t)});
  }
  return table;
}

std::string dump_domain_table(const std::vector<DephasingPolicy>& policies, int n) {
  std::vector<std::map<OrderingDomain, LinearForm>> maps;
  maps.reserve(policies.size());
  for (const auto policy : policies) maps.push_back(derive_linear_forms(policy, n));
  const bool aligned = std::all_of(maps.begin(), maps.end(), [&](const auto& m) {
    if (m.size() != maps.front().size()) return false;
    auto it = maps.front().begin();
    for (const auto& [dom, form] : m) {
      if (!(dom == it->first)) return false;
      ++it;
    }
    return true;
  });
  std::ostringstream os;
  if (aligned && !maps.empty()) {
    for (auto it = maps.front().begin(); it != maps.front().end(); ++it) {
      os << it->first.describe();
      for (const auto& m : maps) os << " | " << m.at(it->first).describe();
      os << '\n';
    }
  } else {
    for (std::size_t i = 0; i < maps.size(); ++i) {
      os << "policy: " << to_string(policies[i]) << '\n';
      for (const auto& [dom, form] : maps[i]) {
        os << dom.describe() << " | " << form.describe() << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace rpgf

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rpgf {

enum class Distribution {
  Parallel,         // all segments start at once
  FullySequential,  // one segment after another
  ThreeSegmentVariant,
};

// Layouts of the three-segment comparison set.
enum class ThreeSegmentLayout {
  seq_a,
  seq_b,
  seq_c,
  start_a,
  start_b,
  end_a,
  end_b,
  over_a,
  over_b,
  parallel_optimal,
};

enum class Swapping {
  Optimal,   // swap as soon as possible (greedy/globally minimal dephasing)
  Doubling,
  Iterative,
  Mixed31,   // n=4: optimal over 1..3, then join segment 4
  Mixed44,   // n=8: optimal over each half, then join
  Mixed2222, // n=8: pairwise, then optimal over the four pairs
  Mixed242,  // n=8: 2+4+2 groups, optimal within and across
  None,      // two segments: nothing to choose
};

enum class Measurement { Immediate, NonImmediate };

struct CutoffVector {
  std::vector<std::int64_t> m;  // per-junction storage limits, all >= 1
};

struct Cutoff {
  enum class Kind { None, Global, Vector };
  Kind kind = Kind::None;
  std::int64_t m = 0;  // Global
  CutoffVector vec;    // Vector

  static Cutoff none() { return {}; }
  static Cutoff global(std::int64_t m);
  static Cutoff vector(std::vector<std::int64_t> ms);
};

struct SchemeSpec {
  int n = 2;
  Distribution distribution = Distribution::Parallel;
  std::optional<ThreeSegmentLayout> layout;  // only with ThreeSegmentVariant
  Swapping swapping = Swapping::Optimal;
  Cutoff cutoff = Cutoff::none();
  Measurement measurement = Measurement::NonImmediate;

  // Throws std::invalid_argument on inconsistent combinations.
  void validate() const;

  std::string describe() const;
};

const char* to_string(Distribution d);
const char* to_string(ThreeSegmentLayout l);
const char* to_string(Swapping s);
const char* to_string(Measurement m);

}  // namespace rpgf

#include "repeaterpgf/scheme.hpp"

#include <sstream>
#include <stdexcept>

namespace rpgf {

Cutoff Cutoff::global(std::int64_t m) {
  if (m < 1) throw std::invalid_argument("Cutoff: global cutoff must be >= 1");
  Cutoff c;
  c.kind = Kind::Global;
  c.m = m;
  return c;
}

Cutoff Cutoff::vector(std::vector<std::int64_t> ms) {
  for (auto v : ms) {
    if (v < 1) throw std::invalid_argument("Cutoff: vector entries must be >= 1");
  }
  Cutoff c;
  c.kind = Kind::Vector;
  c.vec.m = std::move(ms);
  return c;
}

void SchemeSpec::validate() const {
  if (n < 1 || n > 8) throw std::invalid_argument("SchemeSpec: n must be in [1, 8]");
  if (cutoff.kind == Cutoff::Kind::Vector) {
    if (distribution != Distribution::FullySequential) {
      throw std::invalid_argument("SchemeSpec: vector cutoff requires fully sequential distribution");
    }
    if (cutoff.vec.m.size() != static_cast<std::size_t>(n - 1)) {
      throw std::invalid_argument("SchemeSpec: cutoff vector must have n-1 entries");
    }
  }
  if (distribution == Distribution::ThreeSegmentVariant) {
    if (n != 3) throw std::invalid_argument("SchemeSpec: three-segment variants require n=3");
    if (!layout) throw std::invalid_argument("SchemeSpec: three-segment variant requires a layout");
    if (cutoff.kind != Cutoff::Kind::None) {
      throw std::invalid_argument("SchemeSpec: three-segment variants have no cutoff forms");
    }
  } else if (layout) {
    throw std::invalid_argument("SchemeSpec: layout is only valid with ThreeSegmentVariant");
  }
  if (distribution == Distribution::Parallel) {
    switch (swapping) {
      case Swapping::None:
        if (n > 2) throw std::invalid_argument("SchemeSpec: swapping None requires n <= 2");
        break;
      case Swapping::Doubling:
        if (n != 2 && n != 4 && n != 8) {
          throw std::invalid_argument("SchemeSpec: doubling requires n in {2, 4, 8}");
        }
        break;
      case Swapping::Mixed31:
        if (n != 4) throw std::invalid_argument("SchemeSpec: 3+1 swapping requires n=4");
        break;
      case Swapping::Mixed44:
      case Swapping::Mixed2222:
      case Swapping::Mixed242:
        if (n != 8) throw std::invalid_argument("SchemeSpec: this mixed swapping requires n=8");
        break;
      case Swapping::Iterative:
        if (n < 2) throw std::invalid_argument("SchemeSpec: iterative swapping requires n >= 2");
        break;
      case Swapping::Optimal:
        break;
    }
  } else if (swapping == Swapping::Mixed31 || swapping == Swapping::Mixed44 ||
             swapping == Swapping::Mixed2222 || swapping == Swapping::Mixed242 ||
             swapping == Swapping::Doubling) {
    if (distribution != Distribution::Parallel) {
      throw std::invalid_argument("SchemeSpec: mixed/doubling swapping requires parallel distribution");
    }
  }
}

const char* to_string(Distribution d) {
  switch (d) {
    case Distribution::Parallel: return "parallel";
    case Distribution::FullySequential: return "sequential";
    case Distribution::ThreeSegmentVariant: return "three-segment";
  }
  return "?";
}

const char* to_string(ThreeSegmentLayout l) {
  switch (l) {
    case ThreeSegmentLayout::seq_a: return "seq_a";
    case ThreeSegmentLayout::seq_b: return "seq_b";
    case ThreeSegmentLayout::seq_c: return "seq_c";
    case ThreeSegmentLayout::start_a: return "start_a";
    case ThreeSegmentLayout::start_b: return "start_b";
    case ThreeSegmentLayout::end_a: return "end_a";
    case ThreeSegmentLayout::end_b: return "end_b";
    case ThreeSegmentLayout::over_a: return "over_a";
    case ThreeSegmentLayout::over_b: return "over_b";
    case ThreeSegmentLayout::parallel_optimal: return "parallel_optimal";
  }
  return "?";
}

const char* to_string(Swapping s) {
  switch (s) {
    case Swapping::Optimal: return "optimal";
    case Swapping::Doubling: return "doubling";
    case Swapping::Iterative: return "iterative";
    case Swapping::Mixed31: return "31";
    case Swapping::Mixed44: return "44";
    case Swapping::Mixed2222: return "2222";
    case Swapping::Mixed242: return "242";
    case Swapping::None: return "none";
  }
  return "?";
}

const char* to_string(Measurement m) {
  return m == Measurement::Immediate ? "immediate" : "non-immediate";
}

std::string SchemeSpec::describe() const {
  std::ostringstream os;
  os << "n=" << n << " " << to_string(distribution);
  if (layout) os << "/" << to_string(*layout);
  os << " swap=" << to_string(swapping);
  switch (cutoff.kind) {
    case Cutoff::Kind::None:
      break;
    case Cutoff::Kind::Global:
      os << " cutoff=" << cutoff.m;
      break;
    case Cutoff::Kind::Vector: {
      os << " cutoff=(";
      for (std::size_t i = 0; i < cutoff.vec.m.size(); ++i) {
        if (i) os << ",";
        os << cutoff.vec.m[i];
      }
      os << ")";
      break;
    }
  }
  os << " " << to_string(measurement);
  return os.str();
}

}  // namespace rpgf

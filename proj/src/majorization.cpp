#include "locc/majorization.hpp"

#include <algorithm>
#include <cmath>

#include "locc/errors.hpp"

namespace locc {

const char* to_string(PairKind k) {
  switch (k) {
    case PairKind::Incomparable: return "incomparable";
    case PairKind::Identical: return "identical";
    case PairKind::StrictAll: return "strict";
    case PairKind::IsolatedInterior: return "isolated-interior";
    case PairKind::TrailingEquality: return "trailing-equality";
    case PairKind::GeneralBlocks: return "general-blocks";
  }
  return "unknown";
}

std::vector<double> prefix_sums(const SchmidtVector& v) {
  std::vector<double> out(v.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    s += v[i];
    out[i] = s;
  }
  return out;
}

int longest_run(const std::vector<int>& sorted_indices) {
  int best = 0;
  int run = 0;
  int prev = 0;
  for (int m : sorted_indices) {
    run = (run > 0 && m == prev + 1) ? run + 1 : 1;
    best = std::max(best, run);
    prev = m;
  }
  return best;
}

MajorizationReport majorize(const SchmidtVector& a, const SchmidtVector& b, Tolerance tol) {
  if (a.dim() != b.dim())
    throw_error(Errc::DimensionMismatch, "majorize requires equal dimensions");
  MajorizationReport rep;
  double sa = 0.0;
  double sb = 0.0;
  std::vector<int> delta;
  const std::size_t n = a.dim();
  for (std::size_t m = 1; m < n; ++m) {
    sa += a[m - 1];
    sb += b[m - 1];
    const double diff = sa - sb;
    if (diff > tol.eq_tol) {
      rep.holds = false;
      rep.first_violation = static_cast<int>(m);
      return rep;
    }
    if (std::abs(diff) <= tol.eq_tol) delta.push_back(static_cast<int>(m));
  }
  rep.holds = true;
  rep.strict_all = delta.empty();
  rep.eta = longest_run(delta);
  rep.equality_indices = std::move(delta);
  return rep;
}

PairClass classify_pair(const SchmidtVector& a, const SchmidtVector& b, Tolerance tol) {
  const MajorizationReport rep = majorize(a, b, tol);
  PairClass pc;
  if (!rep.holds) {
    pc.kind = PairKind::Incomparable;
    return pc;
  }
  pc.delta = rep.equality_indices;
  pc.eta = rep.eta;
  const int n = static_cast<int>(a.dim());
  const bool trailing = std::binary_search(pc.delta.begin(), pc.delta.end(), n - 1);
  if (static_cast<int>(pc.delta.size()) == n - 1)
    pc.kind = PairKind::Identical;
  else if (pc.delta.empty())
    pc.kind = PairKind::StrictAll;
  else if (trailing)
    pc.kind = PairKind::TrailingEquality;
  else if (pc.delta.front() != 1 && pc.eta <= 1)
    pc.kind = PairKind::IsolatedInterior;
  else
    pc.kind = PairKind::GeneralBlocks;
  return pc;
}

}  // namespace locc

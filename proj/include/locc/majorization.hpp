#pragma once

#include <optional>
#include <vector>

#include "locc/spectrum.hpp"

namespace locc {

/// Outcome of a majorization test a ≺ b (a majorized by b). All reported
/// indices are prefix lengths m in {1, .., n-1}; the full prefix m = n, where
/// both sides equal one, is never reported.
struct MajorizationReport {
  bool holds = false;
  /// Smallest m whose prefix sum of a exceeds that of b beyond tol.
  std::optional<int> first_violation;
  /// Equality set: every m where the prefix sums agree within tol.
  /// Populated only when the relation holds.
  std::vector<int> equality_indices;
  bool strict_all = false;
  /// Length of the longest run of consecutive members of the equality set.
  int eta = 0;
};

enum class PairKind {
  Incomparable,
  Identical,
  StrictAll,
  IsolatedInterior,   // equalities exist, all interior and non-adjacent
  TrailingEquality,   // prefix n-1 equal, i.e. smallest entries coincide
  GeneralBlocks,      // leading equality and/or a run of adjacent equalities
};

const char* to_string(PairKind k);

/// Classification of an ordered pair; a function of the MajorizationReport only.
struct PairClass {
  PairKind kind = PairKind::Incomparable;
  std::vector<int> delta;
  int eta = 0;
};

/// The n running partial sums of a spectrum. Non-decreasing, last entry 1.
std::vector<double> prefix_sums(const SchmidtVector& v);

/// Decides a ≺ b on equal dimensions (pad explicitly first if they differ).
/// Equality at a prefix means |difference| <= tol; a violation means the
/// left prefix exceeds the right one by more than tol.
MajorizationReport majorize(const SchmidtVector& a, const SchmidtVector& b, Tolerance tol = {});

PairClass classify_pair(const SchmidtVector& a, const SchmidtVector& b, Tolerance tol = {});

/// Longest run of consecutive integers; input must be sorted ascending.
int longest_run(const std::vector<int>& sorted_indices);

}  // namespace locc

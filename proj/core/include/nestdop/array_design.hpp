#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nestdop {

enum class PatternFamily { standard, nested, super_nested, coprime, k_level };

std::string_view to_string(PatternFamily family);
PatternFamily parse_family(std::string_view name);

/// Pulse emission slots inside a coherent processing interval of
/// `window_size()` pulse repetition intervals.
///
/// Slots are 1-based and strictly increasing. For every family except
/// co-prime the largest slot is bounded by the window size; co-prime
/// patterns may emit past the window, so `max_slot()` is tracked
/// separately.
class EmissionPattern {
 public:
  EmissionPattern(int window_size, std::vector<int> slots,
                  PatternFamily family, std::vector<int> params = {});

  int window_size() const noexcept { return window_size_; }
  int max_slot() const noexcept { return slots_.back(); }
  std::span<const int> slots() const noexcept { return slots_; }
  std::size_t size() const noexcept { return slots_.size(); }
  PatternFamily family() const noexcept { return family_; }

  /// Construction parameters: (N1, N2) for nested, super-nested and
  /// co-prime, the level list for K-level, empty for standard.
  std::span<const int> params() const noexcept { return params_; }

  /// True when every slot 1..P is used.
  bool is_uniform() const noexcept;

  friend bool operator==(const EmissionPattern&, const EmissionPattern&) = default;

 private:
  int window_size_;
  std::vector<int> slots_;
  PatternFamily family_;
  std::vector<int> params_;
};

/// Full uniform pattern {1, ..., P}.
EmissionPattern standard_pattern(int window_size);

/// Two-level nested pattern {1..N1} U {n(N1+1) : n = 1..N2}, P = N2(N1+1).
EmissionPattern build_nested(int n1, int n2);

struct NestedParams {
  int n1 = 0;
  int n2 = 0;

  int transmissions() const noexcept { return n1 + n2; }
  int window_size() const noexcept { return n2 * (n1 + 1); }
  friend bool operator==(const NestedParams&, const NestedParams&) = default;
};

/// Selects between the two optima of the minimal-transmission problem.
/// A nested pattern leaves N2-1 idle gaps of N1 slots each.
enum class GapPreference {
  fewer_larger_gaps,  ///< N1 = min(D2)-1, N2 = max(D1)
  more_smaller_gaps,  ///< N1 = max(D1)-1, N2 = min(D2)
};

std::string_view to_string(GapPreference preference);
GapPreference parse_gap_preference(std::string_view name);

/// Closed-form minimizer of N1 + N2 subject to N2(N1+1) = P, where D1 and
/// D2 are the divisors of P at most and at least sqrt(P). Prime P yields
/// the standard pattern (P-1, 1).
NestedParams optimal_nested(int window_size,
                            GapPreference preference = GapPreference::fewer_larger_gaps);

/// Both optima (deduplicated; a single entry when they coincide).
std::vector<NestedParams> optimal_nested_all(int window_size);

/// Level sizes {N_1, ..., N_K} of a K-level nested pattern.
struct KLevelParams {
  std::vector<int> levels;

  int level_count() const noexcept { return static_cast<int>(levels.size()); }
  /// N_K * prod_{i<K} (N_i + 1).
  long long window_size() const;
  int transmissions() const;
  /// Throws unless levels are positive and N_K > 1 for K > 1.
  void validate() const;
};

/// Optimal K-level parameters: K equals the number of prime factors of P
/// counted with multiplicity, levels are (p - 1) for each prime factor
/// except the last level, which is the largest prime itself. Levels are
/// returned non-decreasing with the largest prime last.
KLevelParams optimal_klevel(int window_size);

EmissionPattern build_klevel(const KLevelParams& params);
/// Same as above but also checks that the levels produce `window_size`.
EmissionPattern build_klevel(const KLevelParams& params, int window_size);

/// Super-nested pattern built from six uniform sub-arrays. Requires
/// N1 >= 4 and N2 >= 3. Shares the nested pattern's lag set.
EmissionPattern build_super_nested(int n1, int n2);

/// Co-prime pattern {n1*N2 : n1 < 2N1} U {n2*N1 : n2 < N2}, shifted to
/// 1-based slots. Window size is N1*N2 + 1, the extent of the guaranteed
/// contiguous lag range; the long sub-array emits past it.
EmissionPattern build_coprime(int n1, int n2);

/// Pairwise differences of the emission slots.
///
/// Lags are in units of the PRI. `index_sets[i]` lists the positions in
/// the column-stacked N x N covariance where lag `unique_lags[i]` occurs:
/// 0-based position a + b*N holds slot[a] - slot[b].
struct DifferenceSet {
  std::vector<int> unique_lags;
  std::vector<int> multiplicity;
  std::vector<std::vector<int>> index_sets;

  bool contains(int lag) const;
  int multiplicity_of(int lag) const;
  /// Lags in [-(P-1), P-1] that no slot pair realizes.
  std::vector<int> missing_lags(int window_size) const;
};

DifferenceSet difference_set(const EmissionPattern& pattern);

/// True iff every lag in [-(P-1), P-1] is realized. Patterns confined to
/// the window cannot produce larger lags, so for them this is equality
/// with the full lag range; co-prime lags beyond the window are ignored.
bool verify_contiguous_coarray(const EmissionPattern& pattern);

/// Lengths of the idle runs between consecutive emissions inside the
/// window, in slot order. Leading and trailing idle runs are included.
std::vector<int> idle_gaps(const EmissionPattern& pattern);

}  // namespace nestdop

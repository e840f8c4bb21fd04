#include "nestdop/array_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nestdop/error.hpp"

namespace nestdop {
namespace {

constexpr std::string_view kModule = "array_design";

std::vector<int> sorted_union(std::vector<int> slots) {
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  return slots;
}

std::vector<int> divisors(int n) {
  std::vector<int> low;
  std::vector<int> high;
  for (int d = 1; static_cast<long long>(d) * d <= n; ++d) {
    if (n % d != 0) continue;
    low.push_back(d);
    if (d != n / d) high.push_back(n / d);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

// Prime factors with multiplicity, ascending.
std::vector<int> prime_factors(int n) {
  std::vector<int> factors;
  for (int p = 2; static_cast<long long>(p) * p <= n; ++p) {
    while (n % p == 0) {
      factors.push_back(p);
      n /= p;
    }
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

}  // namespace

std::string_view to_string(PatternFamily family) {
  switch (family) {
    case PatternFamily::standard: return "standard";
    case PatternFamily::nested: return "nested";
    case PatternFamily::super_nested: return "super_nested";
    case PatternFamily::coprime: return "coprime";
    case PatternFamily::k_level: return "k_level";
  }
  return "unknown";
}

PatternFamily parse_family(std::string_view name) {
  for (auto f : {PatternFamily::standard, PatternFamily::nested, PatternFamily::super_nested,
                 PatternFamily::coprime, PatternFamily::k_level}) {
    if (to_string(f) == name) return f;
  }
  throw_config(kModule, "unknown pattern family '" + std::string(name) +
                            "' (expected standard, nested, super_nested, coprime or k_level)");
}

std::string_view to_string(GapPreference preference) {
  return preference == GapPreference::fewer_larger_gaps ? "fewer_larger_gaps"
                                                        : "more_smaller_gaps";
}

GapPreference parse_gap_preference(std::string_view name) {
  if (name == "fewer_larger_gaps") return GapPreference::fewer_larger_gaps;
  if (name == "more_smaller_gaps") return GapPreference::more_smaller_gaps;
  throw_config(kModule, "unknown gap preference '" + std::string(name) +
                            "' (expected fewer_larger_gaps or more_smaller_gaps)");
}

EmissionPattern::EmissionPattern(int window_size, std::vector<int> slots,
                                 PatternFamily family, std::vector<int> params)
    : window_size_(window_size),
      slots_(std::move(slots)),
      family_(family),
      params_(std::move(params)) {
  if (window_size_ < 1) throw_precondition(kModule, "window size must be positive");
  if (slots_.empty()) throw_precondition(kModule, "pattern must contain at least one slot");
  if (slots_.front() < 1) throw_precondition(kModule, "slots are 1-based; found slot < 1");
  for (std::size_t i = 1; i < slots_.size(); ++i) {
    if (slots_[i] <= slots_[i - 1])
      throw_precondition(kModule, "slots must be strictly increasing");
  }
  if (family_ != PatternFamily::coprime && slots_.back() > window_size_) {
    throw_precondition(kModule, "slot " + std::to_string(slots_.back()) +
                                    " lies outside the window of size " +
                                    std::to_string(window_size_));
  }
}

bool EmissionPattern::is_uniform() const noexcept {
  return static_cast<int>(slots_.size()) == window_size_ && slots_.back() == window_size_;
}

EmissionPattern standard_pattern(int window_size) {
  if (window_size < 1) throw_precondition(kModule, "window size must be positive");
  std::vector<int> slots(static_cast<std::size_t>(window_size));
  std::iota(slots.begin(), slots.end(), 1);
  return EmissionPattern(window_size, std::move(slots), PatternFamily::standard);
}

EmissionPattern build_nested(int n1, int n2) {
  if (n1 < 1 || n2 < 1)
    throw_precondition(kModule, "nested pattern requires N1 >= 1 and N2 >= 1");
  std::vector<int> slots;
  slots.reserve(static_cast<std::size_t>(n1 + n2));
  for (int n = 1; n <= n1; ++n) slots.push_back(n);
  for (int n = 1; n <= n2; ++n) slots.push_back(n * (n1 + 1));
  return EmissionPattern(n2 * (n1 + 1), sorted_union(std::move(slots)),
                         PatternFamily::nested, {n1, n2});
}

std::vector<NestedParams> optimal_nested_all(int window_size) {
  if (window_size < 2) throw_precondition(kModule, "optimal nesting requires P >= 2");
  const auto divs = divisors(window_size);
  int max_low = 1;
  int min_high = window_size;
  for (int d : divs) {
    if (static_cast<long long>(d) * d <= window_size) max_low = std::max(max_low, d);
    if (static_cast<long long>(d) * d >= window_size) min_high = std::min(min_high, d);
  }
  if (max_low == 1) return {{window_size - 1, 1}};  // prime: only the standard pattern

  std::vector<NestedParams> out{{min_high - 1, max_low}, {max_low - 1, min_high}};
  if (out[0] == out[1]) out.pop_back();
  return out;
}

NestedParams optimal_nested(int window_size, GapPreference preference) {
  const auto all = optimal_nested_all(window_size);
  if (all.size() == 1 || preference == GapPreference::fewer_larger_gaps) return all.front();
  return all.back();
}

long long KLevelParams::window_size() const {
  if (levels.empty()) return 0;
  long long p = levels.back();
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) p *= levels[i] + 1;
  return p;
}

int KLevelParams::transmissions() const {
  return std::accumulate(levels.begin(), levels.end(), 0);
}

void KLevelParams::validate() const {
  if (levels.empty()) throw_precondition(kModule, "K-level pattern needs at least one level");
  for (int n : levels) {
    if (n < 1) throw_precondition(kModule, "K-level sizes must be positive");
  }
  if (levels.size() > 1 && levels.back() < 2)
    throw_precondition(kModule, "last K-level size must exceed 1 when K > 1");
}

KLevelParams optimal_klevel(int window_size) {
  if (window_size < 2) throw_precondition(kModule, "optimal K-level nesting requires P >= 2");
  auto primes = prime_factors(window_size);
  KLevelParams params;
  params.levels.reserve(primes.size());
  for (std::size_t i = 0; i + 1 < primes.size(); ++i) params.levels.push_back(primes[i] - 1);
  params.levels.push_back(primes.back());
  return params;
}

EmissionPattern build_klevel(const KLevelParams& params) {
  params.validate();
  const long long window = params.window_size();
  if (window > std::numeric_limits<int>::max())
    throw_precondition(kModule, "K-level window size overflows");

  std::vector<int> slots;
  long long spacing = 1;
  for (int level : params.levels) {
    for (int n = 1; n <= level; ++n) slots.push_back(static_cast<int>(n * spacing));
    spacing *= level + 1;
  }
  return EmissionPattern(static_cast<int>(window), sorted_union(std::move(slots)),
                         PatternFamily::k_level, params.levels);
}

EmissionPattern build_klevel(const KLevelParams& params, int window_size) {
  params.validate();
  if (params.window_size() != window_size) {
    throw_precondition(kModule, "K-level sizes give window " +
                                    std::to_string(params.window_size()) + ", expected " +
                                    std::to_string(window_size));
  }
  return build_klevel(params);
}

EmissionPattern build_super_nested(int n1, int n2) {
  if (n1 < 4 || n2 < 3)
    throw_precondition(kModule, "super-nested pattern requires N1 >= 4 and N2 >= 3, got N1=" +
                                    std::to_string(n1) + ", N2=" + std::to_string(n2));
  const int r = n1 / 4;
  int a1 = 0, b1 = 0, a2 = 0, b2 = 0;
  switch (n1 % 4) {
    case 0: a1 = r; b1 = r - 1; a2 = r - 1; b2 = r - 2; break;
    case 1: a1 = r; b1 = r - 1; a2 = r - 1; b2 = r - 1; break;
    case 2: a1 = r + 1; b1 = r - 1; a2 = r; b2 = r - 2; break;
    default: a1 = r; b1 = r; a2 = r; b2 = r - 1; break;
  }
  const int step = n1 + 1;
  std::vector<int> slots;
  for (int l = 0; l <= a1; ++l) slots.push_back(1 + 2 * l);
  for (int l = 0; l <= b1; ++l) slots.push_back(step - (1 + 2 * l));
  for (int l = 0; l <= a2; ++l) slots.push_back(step + (2 + 2 * l));
  for (int l = 0; l <= b2; ++l) slots.push_back(2 * step - (2 + 2 * l));
  for (int l = 2; l <= n2; ++l) slots.push_back(l * step);
  slots.push_back(n2 * step - 1);
  return EmissionPattern(n2 * step, sorted_union(std::move(slots)),
                         PatternFamily::super_nested, {n1, n2});
}

EmissionPattern build_coprime(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw_precondition(kModule, "co-prime pattern requires positive N1, N2");
  if (n1 >= n2) throw_precondition(kModule, "co-prime pattern requires N1 < N2");
  if (std::gcd(n1, n2) != 1) {
    throw_precondition(kModule, "co-prime pattern requires gcd(N1, N2) = 1, got gcd(" +
                                    std::to_string(n1) + ", " + std::to_string(n2) +
                                    ") = " + std::to_string(std::gcd(n1, n2)));
  }
  std::vector<int> slots;
  for (int k = 0; k < 2 * n1; ++k) slots.push_back(k * n2 + 1);
  for (int k = 0; k < n2; ++k) slots.push_back(k * n1 + 1);
  return EmissionPattern(n1 * n2 + 1, sorted_union(std::move(slots)), PatternFamily::coprime,
                         {n1, n2});
}

bool DifferenceSet::contains(int lag) const {
  return std::binary_search(unique_lags.begin(), unique_lags.end(), lag);
}

int DifferenceSet::multiplicity_of(int lag) const {
  auto it = std::lower_bound(unique_lags.begin(), unique_lags.end(), lag);
  if (it == unique_lags.end() || *it != lag) return 0;
  return multiplicity[static_cast<std::size_t>(it - unique_lags.begin())];
}

std::vector<int> DifferenceSet::missing_lags(int window_size) const {
  std::vector<int> missing;
  for (int lag = -(window_size - 1); lag <= window_size - 1; ++lag) {
    if (!contains(lag)) missing.push_back(lag);
  }
  return missing;
}

DifferenceSet difference_set(const EmissionPattern& pattern) {
  const auto slots = pattern.slots();
  const int n = static_cast<int>(slots.size());
  const int span = pattern.max_slot() - slots.front();
  // Dense table over [-span, span]; compacted afterwards.
  std::vector<std::vector<int>> by_lag(static_cast<std::size_t>(2 * span + 1));
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      const int lag = slots[a] - slots[b];
      by_lag[static_cast<std::size_t>(lag + span)].push_back(a + b * n);
    }
  }
  DifferenceSet out;
  for (int i = 0; i < static_cast<int>(by_lag.size()); ++i) {
    if (by_lag[i].empty()) continue;
    out.unique_lags.push_back(i - span);
    out.multiplicity.push_back(static_cast<int>(by_lag[i].size()));
    out.index_sets.push_back(std::move(by_lag[i]));
  }
  return out;
}

bool verify_contiguous_coarray(const EmissionPattern& pattern) {
  return difference_set(pattern).missing_lags(pattern.window_size()).empty();
}

std::vector<int> idle_gaps(const EmissionPattern& pattern) {
  std::vector<int> gaps;
  int previous = 0;
  for (int slot : pattern.slots()) {
    if (slot > pattern.window_size()) break;
    if (slot - previous > 1) gaps.push_back(slot - previous - 1);
    previous = slot;
  }
  if (pattern.window_size() > previous) gaps.push_back(pattern.window_size() - previous);
  return gaps;
}

}  // namespace nestdop

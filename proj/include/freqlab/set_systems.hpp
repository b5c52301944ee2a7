#pragma once

// Set systems over a finite Omega = {1..m}, m <= 24, with subsets as bitmasks
// (bit i-1 set when element i is a member).

#include <cstdint>
#include <span>
#include <vector>

#include "freqlab/frequency.hpp"
#include "freqlab/sequence.hpp"

namespace freqlab {

using SetMask = std::uint32_t;

inline constexpr int kMaxOmega = 24;
inline constexpr std::size_t kClosureBudget = std::size_t{1} << 20;

class SetSystem {
 public:
  SetSystem() = default;
  /// Sorts and deduplicates. Throws OutOfRange for bits outside Omega.
  SetSystem(int omega, std::vector<SetMask> sets);
  /// Element lists (1-based) instead of masks.
  static SetSystem from_lists(int omega, const std::vector<std::vector<int>>& sets);

  int omega() const { return omega_; }
  SetMask full() const { return (SetMask{1} << omega_) - 1; }
  const std::vector<SetMask>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  bool contains(SetMask a) const;
  /// Every member of other is a member of this.
  bool includes(const SetSystem& other) const;

  friend bool operator==(const SetSystem&, const SetSystem&) = default;

 private:
  int omega_ = 0;
  std::vector<SetMask> sets_;
};

std::vector<int> mask_elements(SetMask a);

/// Nonempty and closed under intersection.
bool is_pi_system(const SetSystem& s);
/// Omega in S, closed under complement and under unions of disjoint members.
bool is_pre_dynkin(const SetSystem& s);
/// Omega in S, closed under complement and union.
bool is_field(const SetSystem& s);

/// Least pre-Dynkin system / field containing H, by saturation. Throws
/// ClosureBudgetExceeded if the closure would exceed budget members.
SetSystem generate_pre_dynkin(const SetSystem& h, std::size_t budget = kClosureBudget);
SetSystem generate_field(const SetSystem& h, std::size_t budget = kClosureBudget);

enum class SystemKind { PreDynkin, Field };

/// True when no proper subsystem of s containing h has the property. Checked
/// by enumerating every set system on Omega, so Omega must have at most 4
/// elements (InvalidArgument otherwise).
bool is_minimal_closure(const SetSystem& s, const SetSystem& h, SystemKind kind);

struct UniquenessReport {
  bool holds = true;          // the implication held
  bool premise = false;       // P and Q agree on H within tol
  double gap_on_h = 0.0;      // max |P(A) - Q(A)| over H
  double gap_on_field = 0.0;  // same over field(H)
  std::size_t field_size = 0;
};

/// P and Q are atom masses on Omega. If they agree on the Pi-system H within
/// tol, checks they agree on field(H) within |field(H)| tol. Throws
/// NotPiSystem when H is not a Pi-system.
UniquenessReport uniqueness_check(std::span<const double> p, std::span<const double> q,
                                  const SetSystem& h, double tol);

struct DynkinWitness {
  Event union_event;
  std::vector<Event> parts;  // pairwise disjoint precise members inside the union
  double union_width = 0.0;
};

struct PreDynkinReport {
  PrecisionReport precision;
  bool omega_precise = false;     // PD1; Omega always has width 0
  bool complement_closed = true;  // PD2 inside the family
  std::size_t complement_checks = 0;
  bool disjoint_union_bounded = true;  // PD3: width(A u B) <= width(A) + width(B)
  std::size_t union_checks = 0;
  /// Imprecise family members that contain at least two pairwise disjoint
  /// precise members: the prefix picture of a system of precision that is
  /// not closed under countable disjoint unions.
  std::vector<DynkinWitness> dynkin_failures;
};

PreDynkinReport precision_pre_dynkin_check(const SymbolSequence& seq, double tol,
                                           std::span<const Event> family,
                                           const TailPolicy& policy = TailPolicy{});

}  // namespace freqlab

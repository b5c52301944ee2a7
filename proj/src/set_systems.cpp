#include "freqlab/set_systems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "freqlab/error.hpp"

namespace freqlab {

SetSystem::SetSystem(int omega, std::vector<SetMask> sets) : omega_(omega), sets_(std::move(sets)) {
  if (omega < 1 || omega > kMaxOmega)
    throw Error(ErrorCode::OutOfRange, "omega size must be in [1, 24]");
  for (SetMask a : sets_)
    if (a & ~full()) throw Error(ErrorCode::OutOfRange, "set has elements outside omega");
  std::sort(sets_.begin(), sets_.end());
  sets_.erase(std::unique(sets_.begin(), sets_.end()), sets_.end());
}

SetSystem SetSystem::from_lists(int omega, const std::vector<std::vector<int>>& sets) {
  std::vector<SetMask> masks;
  for (const auto& s : sets) {
    SetMask m = 0;
    for (int e : s) {
      if (e < 1 || e > omega)
        throw Error(ErrorCode::OutOfRange, "element " + std::to_string(e) + " outside omega");
      m |= SetMask{1} << (e - 1);
    }
    masks.push_back(m);
  }
  return SetSystem(omega, std::move(masks));
}

bool SetSystem::contains(SetMask a) const { return std::binary_search(sets_.begin(), sets_.end(), a); }

bool SetSystem::includes(const SetSystem& other) const {
  return std::includes(sets_.begin(), sets_.end(), other.sets_.begin(), other.sets_.end());
}

std::vector<int> mask_elements(SetMask a) {
  std::vector<int> out;
  for (int i = 0; a != 0; ++i, a >>= 1)
    if (a & 1) out.push_back(i + 1);
  return out;
}

namespace {

// O(1) membership over all 2^m subsets.
class Membership {
 public:
  explicit Membership(int omega) : bits_(std::size_t{1} << omega, 0) {}
  bool has(SetMask a) const { return bits_[a] != 0; }
  bool add(SetMask a) {
    if (bits_[a]) return false;
    bits_[a] = 1;
    return true;
  }

 private:
  std::vector<std::uint8_t> bits_;
};

Membership membership_of(const SetSystem& s) {
  Membership m(s.omega());
  for (SetMask a : s.sets()) m.add(a);
  return m;
}

bool complement_closed(const SetSystem& s, const Membership& m) {
  return std::all_of(s.sets().begin(), s.sets().end(),
                     [&](SetMask a) { return m.has(s.full() & ~a); });
}

SetSystem saturate(const SetSystem& h, SystemKind kind, std::size_t budget) {
  const int omega = h.omega();
  const SetMask full = h.full();
  Membership m(omega);
  std::vector<SetMask> list;
  auto add = [&](SetMask a) {
    if (m.add(a)) {
      if (list.size() >= budget)
        throw Error(ErrorCode::ClosureBudgetExceeded,
                    "closure exceeds " + std::to_string(budget) + " members");
      list.push_back(a);
    }
  };
  add(full);
  for (SetMask a : h.sets()) add(a);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const SetMask a = list[i];
    add(full & ~a);
    for (std::size_t j = 0; j <= i; ++j) {
      const SetMask b = list[j];
      if (kind == SystemKind::Field) {
        add(a | b);
        add(a & b);
      } else if ((a & b) == 0) {
        add(a | b);
      }
    }
  }
  return SetSystem(omega, std::move(list));
}

}  // namespace

bool is_pi_system(const SetSystem& s) {
  if (s.empty()) return false;
  const Membership m = membership_of(s);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (!m.has(s.sets()[i] & s.sets()[j])) return false;
  return true;
}

bool is_pre_dynkin(const SetSystem& s) {
  if (s.omega() == 0 || !s.contains(s.full())) return false;
  const Membership m = membership_of(s);
  if (!complement_closed(s, m)) return false;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const SetMask a = s.sets()[i], b = s.sets()[j];
      if ((a & b) == 0 && !m.has(a | b)) return false;
    }
  return true;
}

bool is_field(const SetSystem& s) {
  if (s.omega() == 0 || !s.contains(s.full())) return false;
  const Membership m = membership_of(s);
  if (!complement_closed(s, m)) return false;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (!m.has(s.sets()[i] | s.sets()[j])) return false;
  return true;
}

SetSystem generate_pre_dynkin(const SetSystem& h, std::size_t budget) {
  return saturate(h, SystemKind::PreDynkin, budget);
}

SetSystem generate_field(const SetSystem& h, std::size_t budget) {
  return saturate(h, SystemKind::Field, budget);
}

bool is_minimal_closure(const SetSystem& s, const SetSystem& h, SystemKind kind) {
  const int omega = s.omega();
  if (omega > 4) throw Error(ErrorCode::InvalidArgument, "exhaustive minimality needs |omega| <= 4");
  if (h.omega() != omega) throw Error(ErrorCode::DimensionMismatch, "omega sizes differ");
  auto holds = [kind](const SetSystem& t) {
    return kind == SystemKind::Field ? is_field(t) : is_pre_dynkin(t);
  };
  if (!holds(s) || !s.includes(h)) return false;
  const std::uint32_t subsets = 1u << omega;
  std::uint32_t need = 0;  // h as a bitmask over subsets
  for (SetMask a : h.sets()) need |= 1u << a;
  const std::uint64_t systems = std::uint64_t{1} << subsets;
  for (std::uint64_t sys = 0; sys < systems; ++sys) {
    if ((sys & need) != need) continue;
    std::vector<SetMask> members;
    for (std::uint32_t a = 0; a < subsets; ++a)
      if (sys >> a & 1) members.push_back(a);
    const SetSystem t(omega, std::move(members));
    if (holds(t) && !t.includes(s)) return false;
  }
  return true;
}

namespace {

double mass(std::span<const double> p, SetMask a) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (a >> i & 1) s += p[i];
  return s;
}

void check_atoms(std::span<const double> p, int omega) {
  if (p.size() != static_cast<std::size_t>(omega))
    throw Error(ErrorCode::DimensionMismatch, "atom masses must have one entry per element");
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidPoint, "atom masses must be nonnegative");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-9) throw Error(ErrorCode::InvalidPoint, "atom masses must sum to 1");
}

}  // namespace

UniquenessReport uniqueness_check(std::span<const double> p, std::span<const double> q,
                                  const SetSystem& h, double tol) {
  if (!is_pi_system(h)) throw Error(ErrorCode::NotPiSystem, "H is not a Pi-system");
  check_atoms(p, h.omega());
  check_atoms(q, h.omega());
  UniquenessReport r;
  for (SetMask a : h.sets()) r.gap_on_h = std::max(r.gap_on_h, std::abs(mass(p, a) - mass(q, a)));
  r.premise = r.gap_on_h <= tol;
  const SetSystem f = generate_field(h);
  r.field_size = f.size();
  for (SetMask a : f.sets()) r.gap_on_field = std::max(r.gap_on_field, std::abs(mass(p, a) - mass(q, a)));
  r.holds = !r.premise || r.gap_on_field <= static_cast<double>(f.size()) * tol;
  return r;
}

PreDynkinReport precision_pre_dynkin_check(const SymbolSequence& seq, double tol,
                                           std::span<const Event> family,
                                           const TailPolicy& policy) {
  PreDynkinReport rep;
  rep.precision = precision_system(seq, family, policy, tol);
  const auto& entries = rep.precision.entries;
  const std::size_t k = seq.k();
  const Event omega = Event::all(k);
  rep.omega_precise = probability_window(seq, omega, policy).width == 0.0;

  auto find = [&](const Event& e) -> const PrecisionEntry* {
    for (const auto& en : entries)
      if (en.event == e) return &en;
    return nullptr;
  };

  for (const auto& a : entries) {
    if (!a.precise) continue;
    if (const PrecisionEntry* c = find(a.event.complement())) {
      ++rep.complement_checks;
      if (!c->precise || c->window.width != a.window.width) rep.complement_closed = false;
    }
  }
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const auto& a = entries[i];
      const auto& b = entries[j];
      if (!a.precise || !b.precise || !a.event.disjoint(b.event)) continue;
      if (const PrecisionEntry* u = find(a.event.unite(b.event))) {
        ++rep.union_checks;
        if (u->window.width > a.window.width + b.window.width + 1e-15)
          rep.disjoint_union_bounded = false;
      }
    }

  for (const auto& u : entries) {
    if (u.precise) continue;
    DynkinWitness w;
    w.union_event = u.event;
    w.union_width = u.window.width;
    Event covered = Event::none(k);
    for (const auto& part : entries) {
      if (!part.precise || part.event.empty()) continue;
      if (part.event.unite(u.event) != u.event || !part.event.disjoint(covered)) continue;
      w.parts.push_back(part.event);
      covered = covered.unite(part.event);
    }
    if (w.parts.size() >= 2) rep.dynkin_failures.push_back(std::move(w));
  }
  return rep;
}

}  // namespace freqlab

#include "freqlab/builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freqlab/error.hpp"

namespace freqlab {

std::int64_t TSchedule::operator()(std::uint64_t n) const {
  if (kind == Kind::Constant) return value;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return static_cast<std::int64_t>(r * r == n ? r : r + 1);
}

namespace {

// Appends ell copies of y (plus an optional partial copy) while measuring the
// distance of every intermediate r^x(m) to the segment [a, b].
double max_deviation_along(std::span<const std::uint64_t> start_counts, std::uint64_t n,
                           std::span<const Symbol> y, std::uint64_t pieces,
                           std::uint64_t partial, std::span<const double> a,
                           std::span<const double> b) {
  const std::size_t k = start_counts.size();
  Vec ab(k);
  double ab2 = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    ab[i] = b[i] - a[i];
    ab2 += ab[i] * ab[i];
  }
  std::vector<double> c(start_counts.begin(), start_counts.end());
  double m = static_cast<double>(n);
  double worst = 0.0;
  Vec r(k);
  auto step = [&](Symbol s) {
    c[s - 1] += 1.0;
    m += 1.0;
    double t_num = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      r[i] = c[i] / m;
      t_num += (r[i] - a[i]) * ab[i];
    }
    const double t = ab2 > 0.0 ? std::clamp(t_num / ab2, 0.0, 1.0) : 0.0;
    double d2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double d = r[i] - a[i] - t * ab[i];
      d2 += d * d;
    }
    worst = std::max(worst, d2);
  };
  for (std::uint64_t p = 0; p < pieces; ++p)
    for (Symbol s : y) step(s);
  for (std::uint64_t j = 0; j < partial; ++j) step(y[j]);
  return std::sqrt(worst);
}

}  // namespace

Construction construct_for_curve(const CurveSpec& curve, const Schedules& schedules,
                                 const Budget& budget) {
  if (budget.generations <= 0 && budget.max_length == 0)
    throw Error(ErrorCode::InvalidArgument, "budget needs generations or max_length");
  if (budget.generations < 0)
    throw Error(ErrorCode::InvalidArgument, "negative generation budget");
  if (schedules.V.base < 1 || (schedules.T.kind == TSchedule::Kind::Constant &&
                               schedules.T.value < 1))
    throw Error(ErrorCode::InvalidArgument, "schedules must be positive");

  const std::size_t k = curve.dim();
  const auto kk = static_cast<std::int64_t>(k);
  const std::uint64_t cap = budget.max_length ? budget.max_length : kImplicitLengthCap;

  Construction out{SymbolSequence(k), GenerationTrace{}, false};
  SymbolSequence& x = out.sequence;
  GenerationTrace& trace = out.trace;
  trace.k = k;

  x.push_back(1);
  SimplexPoint p_old = SimplexPoint::vertex(k, 0);

  for (std::int64_t g = 1; budget.generations == 0 || g <= budget.generations; ++g) {
    const std::int64_t V = std::max<std::int64_t>(2, schedules.V(g));
    const PointSet pts = polygonal_approximation(curve, V);
    trace.generation_starts.push_back(x.size());

    for (std::int64_t v = 1; v <= V; ++v) {
      SegmentRecord rec;
      rec.generation = g;
      rec.vertex = v;
      rec.n_start = x.size();
      rec.p_new = pts[static_cast<std::size_t>(v)].vec();
      const std::uint64_t n = rec.n_start;
      rec.T = std::max(kk, schedules.T(n));

      if (n >= cap) {
        rec.clipped = true;
        rec.n_end = n;
        rec.note = "length budget exhausted";
        trace.segments.push_back(std::move(rec));
        out.budget_exceeded = true;
        return out;
      }

      BoundaryIntercept bi;
      try {
        bi = boundary_intercept(p_old, pts[static_cast<std::size_t>(v)]);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegeneratePair) throw;
        rec.skipped = true;
        rec.n_end = n;
        rec.p_hat_new = p_old.vec();
        rec.counts_end = x.total_counts();
        rec.note = "DegenerateSegment: current frequency already equals the target";
        trace.segments.push_back(std::move(rec));
        continue;
      }
      rec.gamma = bi.gamma;
      rec.on_boundary = bi.on_boundary;
      rec.p_star = bi.p_star.vec();

      const QuantizedDirection q = quantize_direction(bi.p_star, rec.T);
      rec.iota = q.iota;
      rec.T_tilde = q.T_tilde;

      std::vector<Symbol> y;
      y.reserve(static_cast<std::size_t>(q.T_tilde));
      for (std::size_t i = 0; i < k; ++i)
        y.insert(y.end(), static_cast<std::size_t>(q.iota[i]), static_cast<Symbol>(i + 1));

      rec.ell_tilde = bi.on_boundary
                          ? std::numeric_limits<double>::infinity()
                          : std::ceil(static_cast<double>(n) /
                                      (static_cast<double>(rec.T) * (bi.gamma - 1.0)));

      const std::uint64_t remaining = cap - n;
      const auto Tt = static_cast<std::uint64_t>(q.T_tilde);
      const std::uint64_t max_pieces = remaining / Tt;
      std::uint64_t pieces = 0, partial = 0;
      if (rec.ell_tilde > static_cast<double>(max_pieces)) {
        rec.clipped = true;
        pieces = max_pieces;
        partial = budget.max_length ? remaining - pieces * Tt : 0;
      } else {
        pieces = static_cast<std::uint64_t>(rec.ell_tilde);
      }
      rec.pieces = pieces;

      // Reference segment for the within-piece bound: up to p_hat_new when the
      // segment completes, along the whole ray to p_hat* when it is clipped.
      const std::vector<std::uint64_t> c0 = x.total_counts();
      Vec ref_end;
      if (!rec.clipped) {
        std::vector<std::uint64_t> c1 = c0;
        for (std::size_t i = 0; i < k; ++i) c1[i] += pieces * static_cast<std::uint64_t>(q.iota[i]);
        ref_end = SimplexPoint::from_counts(c1).vec();
      } else {
        ref_end = q.p_hat.vec();
      }
      rec.within_piece_max =
          max_deviation_along(c0, n, y, pieces, partial, p_old.coords(), ref_end);
      rec.within_piece_bound =
          (2.0 * static_cast<double>(rec.T) + static_cast<double>(k)) / static_cast<double>(n);
      rec.within_piece_violation = rec.within_piece_max > rec.within_piece_bound;

      x.append_repeated(y, pieces);
      for (std::uint64_t j = 0; j < partial; ++j) x.push_back(y[j]);

      rec.n_end = x.size();
      rec.counts_end = x.total_counts();
      p_old = SimplexPoint::from_counts(rec.counts_end);
      rec.p_hat_new = p_old.vec();
      if (!rec.clipped) {
        rec.endpoint_error = distance(rec.p_hat_new, rec.p_new);
        rec.endpoint_bound = 4.0 * static_cast<double>(rec.T) / static_cast<double>(n) +
                             static_cast<double>(k) / static_cast<double>(rec.T);
        rec.endpoint_violation = rec.endpoint_error > rec.endpoint_bound;
      } else {
        rec.note = rec.on_boundary ? "target on the simplex boundary; clipped at length budget"
                                   : "clipped at length budget";
      }
      if (rec.endpoint_violation || rec.within_piece_violation) ++trace.violations;
      const bool stop = rec.clipped;
      trace.segments.push_back(std::move(rec));
      if (stop) {
        out.budget_exceeded = true;
        return out;
      }
    }
  }
  return out;
}

Construction construct_polytope_boundary(const PointSet& vertices, const Schedules& schedules,
                                         const Budget& budget) {
  return construct_for_curve(CurveSpec::from_polygon(vertices), schedules, budget);
}

std::vector<std::uint64_t> extreme_schedule(double alpha, std::int64_t num_segments) {
  if (!(alpha > 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must exceed 1");
  if (num_segments < 1) throw Error(ErrorCode::InvalidArgument, "need at least one segment");
  std::vector<std::uint64_t> phi;
  for (std::int64_t s = 1; s <= num_segments + 1; ++s) {
    const double v = std::ceil(std::exp(std::pow(static_cast<double>(s), alpha)));
    if (!(v < 9.2e18))
      throw Error(ErrorCode::Overflow, "phi(" + std::to_string(s) +
                                           ") exceeds the 64-bit integer range; use fewer segments");
    phi.push_back(static_cast<std::uint64_t>(v));
  }
  return phi;
}

SymbolSequence construct_extreme(std::size_t k, double alpha, std::int64_t num_segments) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "extreme construction needs k >= 2");
  if (num_segments < static_cast<std::int64_t>(k))
    throw Error(ErrorCode::InvalidArgument, "need at least k segments");
  const auto phi = extreme_schedule(alpha, num_segments);
  SymbolSequence x(k);
  for (std::int64_t s = 1; s <= num_segments; ++s) {
    const auto i = static_cast<std::size_t>(s);
    const auto symbol = static_cast<Symbol>((s - 1) % static_cast<std::int64_t>(k) + 1);
    x.append_run(symbol, phi[i] - phi[i - 1]);
  }
  return x;
}

SymbolSequence von_mises_doubling(std::uint64_t length) {
  if (length < 1) throw Error(ErrorCode::InvalidArgument, "length must be >= 1");
  SymbolSequence x(2);
  std::uint64_t block = 1;
  while (x.size() < length) {
    for (Symbol s : {Symbol{1}, Symbol{2}}) {
      const std::uint64_t take = std::min(block, length - x.size());
      x.append_run(s, take);
      if (x.size() == length) break;
    }
    block *= 2;
  }
  return x;
}

SymbolSequence pre_dynkin_counterexample(std::uint64_t length) {
  if (length < 1) throw Error(ErrorCode::InvalidArgument, "length must be >= 1");
  std::vector<std::pair<Symbol, std::uint64_t>> runs;
  std::uint64_t total = 0;
  for (std::uint64_t i = 1; total < length; ++i) {
    if (i > 65535) throw Error(ErrorCode::Overflow, "label exceeds 16-bit range");
    const std::uint64_t rep = std::uint64_t{1} << ((i + 1) / 2 - 1);
    const std::uint64_t take = std::min(rep, length - total);
    runs.emplace_back(static_cast<Symbol>(i), take);
    total += take;
  }
  SymbolSequence x(runs.size());
  for (auto [s, c] : runs) x.append_run(s, c);
  return x;
}

}  // namespace freqlab

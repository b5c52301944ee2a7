#include "freqlab/report.hpp"

#include <cmath>

#include "freqlab/error.hpp"
#include "json.hpp"

namespace freqlab {

using nlohmann::json;

namespace {

json window_json(const WindowEstimate& w) {
  return {{"upper", w.limsup},   {"lower", w.liminf},   {"width", w.width},
          {"window", {w.start, w.end}}, {"argmax", w.argmax}, {"argmin", w.argmin}};
}

json policy_json(const TailPolicy& p) {
  if (p.mode == TailPolicy::Mode::FixedStart) return {{"mode", "fixed_start"}, {"start", p.start}};
  return {{"mode", "fraction"}, {"beta", p.beta}};
}

std::uint64_t occurrences(const SymbolSequence& seq, const Event& b) {
  std::uint64_t c = 0;
  for (Symbol s : b.members()) c += seq.total_counts()[s - 1];
  return c;
}

}  // namespace

std::string analyze(const SymbolSequence& seq, const AnalysisInputs& inputs,
                    const std::optional<CredalSet>& credal, const AnalysisConfig& cfg) {
  if (seq.empty()) throw Error(ErrorCode::EmptyWindow, "cannot analyze an empty sequence");
  if (!(cfg.tol > 0.0) || !(cfg.eps > 0.0) || !(cfg.condition_threshold > 0.0))
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  if (credal && credal->k() != seq.k())
    throw Error(ErrorCode::DimensionMismatch, "credal set and sequence alphabets differ");

  json out;
  out["config"] = {{"policy", policy_json(cfg.policy)},
                   {"tol", cfg.tol},
                   {"eps", cfg.eps},
                   {"condition_threshold", cfg.condition_threshold},
                   {"credal_points", credal ? credal->size() : 0}};
  out["sequence"] = {{"k", seq.k()}, {"n", seq.size()}};

  json gambles = json::object();
  for (const auto& [name, x] : inputs.gambles) {
    json g = window_json(prevision_window(seq, x, cfg.policy));
    if (credal) {
      const double env = upper_prevision(*credal, x).value;
      const double low = lower_prevision(*credal, x).value;
      g["credal_upper"] = env;
      g["credal_lower"] = low;
      g["credal_gap"] = std::max(std::abs(g["upper"].get<double>() - env),
                                 std::abs(g["lower"].get<double>() - low));
    }
    gambles[name] = g;
  }
  out["gambles"] = gambles;

  json events = json::object();
  std::vector<Event> family;
  for (const auto& [name, a] : inputs.events) {
    json e = window_json(probability_window(seq, a, cfg.policy));
    e["members"] = a.members();
    e["precise"] = e["width"].get<double>() <= cfg.tol;
    if (credal) {
      e["credal_upper"] = upper_probability(*credal, a);
      e["credal_lower"] = lower_probability(*credal, a);
    }
    events[name] = e;
    family.push_back(a);
  }
  out["events"] = events;

  json conditional = json::array();
  for (const auto& [bname, b] : inputs.events) {
    if (occurrences(seq, b) == 0) {
      conditional.push_back({{"given", bname}, {"never_occurred", true}});
      continue;
    }
    const double lower_b = lower_probability_estimate(seq, b, cfg.policy);
    const auto cf = conditional_frequency(seq, b);
    json entry = {{"given", bname},
                  {"first_occurrence", cf.first_occurrence},
                  {"lower_probability", lower_b},
                  {"near_zero", lower_b < cfg.condition_threshold}};
    json per = json::object();
    auto add = [&](const std::string& name, const Gamble& x) {
      json c = window_json(conditional_prevision_window(seq, x, b, cfg.policy));
      if (credal) {
        try {
          const double v = gbr_credal(*credal, x, b);
          c["gbr_credal"] = v;
          c["gbr_root"] = gbr_root(envelope_functional(*credal), x, b).value;
          c["gbr_divergence"] = std::abs(c["upper"].get<double>() - v);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::ZeroLowerProbability && e.code() != ErrorCode::NoBracket) throw;
          c["gbr_credal"] = nullptr;
          c["gbr_note"] = e.what();
        }
      }
      per[name] = c;
    };
    for (const auto& [name, x] : inputs.gambles) add(name, x);
    for (const auto& [name, a] : inputs.events) add(name, Gamble::indicator(a));
    entry["values"] = per;
    conditional.push_back(entry);
  }
  out["conditional"] = conditional;

  json irrelevance = json::array();
  for (const auto& [aname, a] : inputs.events)
    for (const auto& [bname, b] : inputs.events) {
      if (aname == bname || occurrences(seq, b) == 0) continue;
      const auto r = irrelevance_check(seq, a, b, cfg.policy, cfg.tol);
      json item = {{"event", aname},
                   {"given", bname},
                   {"gap", r.gap},
                   {"irrelevant", r.irrelevant},
                   {"upper_conditional", r.upper_conditional},
                   {"upper", r.upper_unconditional}};
      if (occurrences(seq, a) > 0)
        item["independent"] = independence_check(seq, a, b, cfg.policy, cfg.tol).independent;
      irrelevance.push_back(item);
    }
  out["irrelevance"] = irrelevance;

  json gamble_irrelevance = json::array();
  for (const auto& [xname, x] : inputs.gambles)
    for (const auto& [yname, y] : inputs.gambles) {
      if (xname == yname) continue;
      const auto r = gamble_irrelevance_check(seq, x, y, cfg.policy, cfg.tol);
      gamble_irrelevance.push_back({{"gamble", xname},
                                    {"given", yname},
                                    {"max_gap", r.max_gap},
                                    {"irrelevant", r.irrelevant},
                                    {"x_threshold", r.x_threshold},
                                    {"y_threshold", r.y_threshold},
                                    {"pairs", r.pairs_checked}});
    }
  out["gamble_irrelevance"] = gamble_irrelevance;

  json precise = json::array();
  for (const auto& [name, a] : inputs.events)
    if (events[name]["precise"].get<bool>()) precise.push_back(name);
  out["precision"] = {{"tol", cfg.tol}, {"precise", precise}};

  if (seq.size() <= cfg.cluster_max_length) {
    json centers = json::array();
    for (const auto& p : cluster_point_estimate(seq, cfg.policy, cfg.eps)) centers.push_back(p.vec());
    out["clusters"] = {{"eps", cfg.eps}, {"centers", centers}};
  } else {
    out["clusters"] = {{"eps", cfg.eps}, {"skipped", "sequence longer than cluster_max_length"}};
  }
  return out.dump(2);
}

}  // namespace freqlab

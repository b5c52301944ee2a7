#pragma once

#include <optional>
#include <string>

#include "freqlab/credal.hpp"
#include "freqlab/frequency.hpp"
#include "freqlab/io.hpp"
#include "freqlab/sequence.hpp"

namespace freqlab {

struct AnalysisConfig {
  TailPolicy policy;
  double tol = 0.02;
  double eps = 0.05;
  /// Lower probability estimates of a conditioning event below this are
  /// flagged as near zero.
  double condition_threshold = 0.01;
  /// Cluster estimation walks every tail index; skipped above this length.
  std::uint64_t cluster_max_length = 50'000'000;
};

/// Full analysis report as JSON: per-gamble and per-event windows,
/// conditional estimates with generalized-Bayes comparisons against the
/// optional credal set, irrelevance gaps, precision classification and
/// cluster centers. The config is echoed for reproducibility.
std::string analyze(const SymbolSequence& seq, const AnalysisInputs& inputs,
                    const std::optional<CredalSet>& credal, const AnalysisConfig& config);

}  // namespace freqlab

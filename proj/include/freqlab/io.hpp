#pragma once

// File formats and JSON input/output.
//
// Sequence text:   "k=<int> n=<int>" then whitespace-separated symbols.
// Sequence runs:   "k=<int> n=<int> runs" then "<symbol>:<count>" tokens;
//                  for constructions too long to spell out.
// Sequence binary: "FQSEQ1", little-endian u32 k, u64 n, then n u16 symbols.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "freqlab/builder.hpp"
#include "freqlab/credal.hpp"
#include "freqlab/frequency.hpp"
#include "freqlab/sequence.hpp"
#include "freqlab/set_systems.hpp"
#include "freqlab/simplex.hpp"

namespace freqlab {

enum class SequenceFormat { Text, Runs, Binary };

void write_sequence(const SymbolSequence& seq, std::ostream& out, SequenceFormat format);
void save_sequence(const SymbolSequence& seq, const std::string& path, SequenceFormat format);
/// Detects the format from the first bytes. Throws Parse or Io.
SymbolSequence read_sequence(std::istream& in);
SymbolSequence load_sequence(const std::string& path);

/// One JSON object per segment.
void write_trace_jsonl(const GenerationTrace& trace, std::ostream& out);
std::string segment_json(const SegmentRecord& rec);

/// {"polygon":[[...],...]} or {"parametric":{"name":"lemniscate3",...}}.
CurveSpec parse_curve(const std::string& json);
/// {"k":3,"points":[[...],...]}
CredalSet parse_credal(const std::string& json);
/// {"omega":4,"sets":[[1,2],[3]]}
SetSystem parse_set_system(const std::string& json);
std::string set_system_json(const SetSystem& s);

struct AnalysisInputs {
  std::vector<std::pair<std::string, Gamble>> gambles;
  std::vector<std::pair<std::string, Event>> events;
};

/// {"gambles":{"X1":[...]}, "events":{"A":[1,3]}}; sizes are checked against k.
AnalysisInputs parse_analysis_inputs(const std::string& json, std::size_t k);

/// Rows at n = stride, 2 stride, ... and a final row at n = N when N is not a
/// multiple of stride. Columns n, r1..rk, plus ternary x, y when k = 3.
void write_plot_csv(const SymbolSequence& seq, std::uint64_t stride, std::ostream& out);

std::string read_file(const std::string& path);

}  // namespace freqlab

#include "freqlab/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "freqlab/error.hpp"
#include "json.hpp"

namespace freqlab {

using nlohmann::json;

namespace {

constexpr char kMagic[] = "FQSEQ1";
constexpr std::size_t kMagicLen = 6;

template <typename T>
void put_le(std::ostream& out, T v) {
  unsigned char b[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char b[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(b), sizeof(T)))
    throw Error(ErrorCode::Parse, "truncated binary sequence header");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
  return v;
}

// Appends runs, merging neighbours with the same symbol.
class RunBuffer {
 public:
  explicit RunBuffer(SymbolSequence& seq) : seq_(seq) {}
  void add(Symbol s, std::uint64_t count) {
    if (count == 0) return;
    if (count_ > 0 && s == sym_) {
      count_ += count;
      return;
    }
    flush();
    sym_ = s;
    count_ = count;
  }
  void flush() {
    if (count_ > 0) seq_.append_run(sym_, count_);
    count_ = 0;
  }

 private:
  SymbolSequence& seq_;
  Symbol sym_ = 0;
  std::uint64_t count_ = 0;
};

json json_parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed ") + what + " JSON: " + e.what());
  }
}

Vec json_vec(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, std::string(what) + " must be an array");
  Vec v;
  for (const auto& e : j) {
    if (!e.is_number()) throw Error(ErrorCode::Parse, std::string(what) + " entries must be numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

PointSet json_points(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, std::string(what) + " must be an array of points");
  PointSet pts;
  for (const auto& p : j) pts.emplace_back(json_vec(p, what));
  return pts;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_sequence(const SymbolSequence& seq, std::ostream& out, SequenceFormat format) {
  const std::uint64_t n = seq.size();
  if (format == SequenceFormat::Binary) {
    out.write(kMagic, kMagicLen);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(seq.k()));
    put_le<std::uint64_t>(out, n);
    seq.for_each_run(1, n, [&](std::uint64_t first, std::uint64_t last, Symbol s) {
      for (std::uint64_t i = first; i <= last; ++i) put_le<std::uint16_t>(out, s);
    });
  } else if (format == SequenceFormat::Runs) {
    out << "k=" << seq.k() << " n=" << n << " runs\n";
    Symbol cur = 0;
    std::uint64_t count = 0, line = 0;
    auto emit = [&] {
      if (count == 0) return;
      out << cur << ':' << count << (++line % 16 == 0 ? '\n' : ' ');
    };
    seq.for_each_run(1, n, [&](std::uint64_t first, std::uint64_t last, Symbol s) {
      if (s != cur) {
        emit();
        cur = s;
        count = 0;
      }
      count += last - first + 1;
    });
    emit();
    out << '\n';
  } else {
    out << "k=" << seq.k() << " n=" << n << '\n';
    std::uint64_t col = 0;
    seq.for_each_run(1, n, [&](std::uint64_t first, std::uint64_t last, Symbol s) {
      for (std::uint64_t i = first; i <= last; ++i) out << s << (++col % 32 == 0 ? '\n' : ' ');
    });
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing sequence");
}

void save_sequence(const SymbolSequence& seq, const std::string& path, SequenceFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  write_sequence(seq, out, format);
}

SymbolSequence read_sequence(std::istream& in) {
  char head[kMagicLen] = {};
  in.read(head, kMagicLen);
  if (in.gcount() == static_cast<std::streamsize>(kMagicLen) &&
      std::memcmp(head, kMagic, kMagicLen) == 0) {
    const auto k = get_le<std::uint32_t>(in);
    const auto n = get_le<std::uint64_t>(in);
    SymbolSequence seq(k);
    RunBuffer runs(seq);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto s = get_le<std::uint16_t>(in);
      if (s < 1 || s > k) throw Error(ErrorCode::Parse, "symbol out of range in binary sequence");
      runs.add(s, 1);
    }
    runs.flush();
    return seq;
  }

  std::string text(head, static_cast<std::size_t>(in.gcount()));
  std::string rest;
  std::getline(in, rest);
  text += rest;
  std::istringstream hs(text);
  std::string ktok, ntok, mode;
  hs >> ktok >> ntok >> mode;
  long long k = 0, n = 0;
  if (ktok.rfind("k=", 0) != 0 || ntok.rfind("n=", 0) != 0)
    throw Error(ErrorCode::Parse, "sequence header must read 'k=<int> n=<int>'");
  try {
    k = std::stoll(ktok.substr(2));
    n = std::stoll(ntok.substr(2));
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "non-numeric sequence header");
  }
  if (k < 1 || k > 65535 || n < 0) throw Error(ErrorCode::Parse, "sequence header out of range");
  if (!mode.empty() && mode != "runs") throw Error(ErrorCode::Parse, "unknown sequence mode " + mode);

  SymbolSequence seq(static_cast<std::size_t>(k));
  RunBuffer runs(seq);
  std::string tok;
  std::uint64_t total = 0;
  while (in >> tok) {
    std::uint64_t count = 1;
    long long s = 0;
    try {
      std::size_t used = 0;
      s = std::stoll(tok, &used);
      if (mode == "runs") {
        if (used >= tok.size() || tok[used] != ':') throw std::invalid_argument("run");
        count = std::stoull(tok.substr(used + 1));
      } else if (used != tok.size()) {
        throw std::invalid_argument("symbol");
      }
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "bad sequence token '" + tok + "'");
    }
    if (s < 1 || s > k) throw Error(ErrorCode::Parse, "symbol " + tok + " outside [1, k]");
    runs.add(static_cast<Symbol>(s), count);
    total += count;
  }
  runs.flush();
  if (total != static_cast<std::uint64_t>(n))
    throw Error(ErrorCode::Parse, "header says n=" + std::to_string(n) + " but " +
                                      std::to_string(total) + " symbols were read");
  return seq;
}

SymbolSequence load_sequence(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_sequence(in);
}

std::string segment_json(const SegmentRecord& r) {
  json j;
  j["generation"] = r.generation;
  j["vertex"] = r.vertex;
  j["n_start"] = r.n_start;
  j["n_end"] = r.n_end;
  j["T"] = r.T;
  j["gamma"] = number_or_null(r.gamma);
  j["on_boundary"] = r.on_boundary;
  j["p_star"] = r.p_star;
  j["iota"] = r.iota;
  j["T_tilde"] = r.T_tilde;
  j["ell_tilde"] = number_or_null(r.ell_tilde);
  j["pieces"] = r.pieces;
  j["p_new"] = r.p_new;
  j["p_hat_new"] = r.p_hat_new;
  j["counts_end"] = r.counts_end;
  j["endpoint_error"] = r.endpoint_error;
  j["endpoint_bound"] = r.endpoint_bound;
  j["within_piece_max"] = r.within_piece_max;
  j["within_piece_bound"] = r.within_piece_bound;
  j["skipped"] = r.skipped;
  j["clipped"] = r.clipped;
  j["endpoint_violation"] = r.endpoint_violation;
  j["within_piece_violation"] = r.within_piece_violation;
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump();
}

void write_trace_jsonl(const GenerationTrace& trace, std::ostream& out) {
  for (const auto& r : trace.segments) out << segment_json(r) << '\n';
  if (!out) throw Error(ErrorCode::Io, "failed writing trace");
}

CurveSpec parse_curve(const std::string& text) {
  const json j = json_parse(text, "curve");
  if (j.contains("polygon")) return CurveSpec::from_polygon(json_points(j["polygon"], "polygon"));
  if (j.contains("parametric")) {
    const json& p = j["parametric"];
    const std::string name = p.value("name", "");
    if (name != "lemniscate3") throw Error(ErrorCode::Parse, "unknown parametric curve '" + name + "'");
    return CurveSpec::lemniscate3(p.value("center", 1.0 / 3.0), p.value("scale", 1.0 / 12.0));
  }
  throw Error(ErrorCode::Parse, "curve JSON needs 'polygon' or 'parametric'");
}

CredalSet parse_credal(const std::string& text) {
  const json j = json_parse(text, "credal set");
  if (!j.contains("points")) throw Error(ErrorCode::Parse, "credal set JSON needs 'points'");
  CredalSet c(json_points(j["points"], "points"));
  if (j.contains("k") && j["k"].get<std::size_t>() != c.k())
    throw Error(ErrorCode::DimensionMismatch, "credal set 'k' does not match its points");
  return c;
}

SetSystem parse_set_system(const std::string& text) {
  const json j = json_parse(text, "set system");
  try {
    return SetSystem::from_lists(j.at("omega").get<int>(),
                                 j.at("sets").get<std::vector<std::vector<int>>>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("set system JSON: ") + e.what());
  }
}

std::string set_system_json(const SetSystem& s) {
  json sets = json::array();
  for (SetMask a : s.sets()) sets.push_back(mask_elements(a));
  return json{{"omega", s.omega()}, {"sets", sets}}.dump();
}

AnalysisInputs parse_analysis_inputs(const std::string& text, std::size_t k) {
  const json j = json_parse(text, "analysis input");
  AnalysisInputs in;
  if (j.contains("gambles")) {
    for (const auto& [name, v] : j["gambles"].items()) {
      Gamble g{json_vec(v, "gamble")};
      if (g.k() != k)
        throw Error(ErrorCode::DimensionMismatch,
                    "gamble " + name + " has " + std::to_string(g.k()) + " values, expected " +
                        std::to_string(k));
      in.gambles.emplace_back(name, std::move(g));
    }
  }
  if (j.contains("events")) {
    for (const auto& [name, v] : j["events"].items()) {
      std::vector<Symbol> members;
      for (const auto& e : v) {
        if (!e.is_number_integer()) throw Error(ErrorCode::Parse, "event members must be integers");
        const auto s = e.get<long long>();
        if (s < 1 || s > static_cast<long long>(k))
          throw Error(ErrorCode::OutOfRange, "event " + name + " member outside [1, k]");
        members.push_back(static_cast<Symbol>(s));
      }
      in.events.emplace_back(name, Event(k, members));
    }
  }
  return in;
}

void write_plot_csv(const SymbolSequence& seq, std::uint64_t stride, std::ostream& out) {
  if (stride == 0) throw Error(ErrorCode::InvalidArgument, "stride must be positive");
  const std::size_t k = seq.k();
  const std::uint64_t N = seq.size();
  const bool ternary = k == 3;
  out << "n";
  for (std::size_t i = 1; i <= k; ++i) out << ",r" << i;
  if (ternary) out << ",x,y";
  out << '\n';
  out << std::setprecision(17);
  std::vector<std::uint64_t> c(k);
  Vec r(k);
  auto row = [&](std::uint64_t n) {
    seq.counts_into(n, c);
    out << n;
    for (std::size_t i = 0; i < k; ++i) {
      r[i] = static_cast<double>(c[i]) / static_cast<double>(n);
      out << ',' << r[i];
    }
    if (ternary) {
      const Point2 p = ternary_projection(r);
      out << ',' << p[0] << ',' << p[1];
    }
    out << '\n';
  };
  for (std::uint64_t n = stride; n <= N; n += stride) {
    row(n);
    if (n > N - stride) break;
  }
  if (N > 0 && N % stride != 0) row(N);
  if (!out) throw Error(ErrorCode::Io, "failed writing plot CSV");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace freqlab

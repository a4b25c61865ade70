// Copyright 2026 The coevo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coevo/io.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <variant>

#include "coevo/error.hpp"
#include "json.hpp"

namespace coevo::io {

namespace {

using nlohmann::json;
using PathStep = std::variant<std::string, std::size_t>;
using Path = std::vector<PathStep>;

std::string PathString(const Path& path) {
  std::string s;
  for (const auto& step : path) {
    if (const auto* key = std::get_if<std::string>(&step)) {
      if (!s.empty()) s += '.';
      s += *key;
    } else {
      s += '[' + std::to_string(std::get<std::size_t>(step)) + ']';
    }
  }
  return s.empty() ? "<document>" : s;
}

// Minimal scanner over already-validated JSON text, used only to turn a
// field path into a line number for error messages.
class Locator {
 public:
  explicit Locator(std::string_view text) : text_(text) {}

  std::size_t LineOf(const Path& path) {
    pos_ = 0;
    SkipWs();
    for (const auto& step : path) {
      if (pos_ >= text_.size()) break;
      if (const auto* key = std::get_if<std::string>(&step)) {
        if (!FindKey(*key)) break;
      } else if (!FindIndex(std::get<std::size_t>(step))) {
        break;
      }
    }
    std::size_t line = 1;
    for (std::size_t k = 0; k < pos_ && k < text_.size(); ++k)
      if (text_[k] == '\n') ++line;
    return line;
  }

 private:
  void SkipWs() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  std::string ReadString() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      if (pos_ < text_.size()) out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  void SkipValue() {
    SkipWs();
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '"') {
      ReadString();
    } else if (c == '{' || c == '[') {
      int depth = 0;
      while (pos_ < text_.size()) {
        const char d = text_[pos_];
        if (d == '"') {
          ReadString();
          continue;
        }
        if (d == '{' || d == '[') ++depth;
        if (d == '}' || d == ']') --depth;
        ++pos_;
        if (depth == 0) break;
      }
    } else {
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '}' &&
             text_[pos_] != ']')
        ++pos_;
    }
  }

  bool FindKey(const std::string& key) {
    SkipWs();
    if (pos_ >= text_.size() || text_[pos_] != '{') return false;
    ++pos_;
    for (;;) {
      SkipWs();
      if (pos_ >= text_.size() || text_[pos_] != '"') return false;
      const std::size_t key_pos = pos_;
      const std::string k = ReadString();
      SkipWs();
      ++pos_;  // colon
      SkipWs();
      if (k == key) {
        (void)key_pos;
        return true;
      }
      SkipValue();
      SkipWs();
      if (pos_ >= text_.size() || text_[pos_] != ',') return false;
      ++pos_;
    }
  }

  bool FindIndex(std::size_t index) {
    SkipWs();
    if (pos_ >= text_.size() || text_[pos_] != '[') return false;
    ++pos_;
    for (std::size_t k = 0; k < index; ++k) {
      SkipValue();
      SkipWs();
      if (pos_ >= text_.size() || text_[pos_] != ',') return false;
      ++pos_;
    }
    SkipWs();
    return true;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Blanks out leading/whole-line '#' comments, keeping line numbers intact.
std::string StripComments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] != '#') out += line;
    if (end == text.size()) break;
    out += '\n';
    start = end + 1;
  }
  return out;
}

// Schema walker: every accessor records the path so failures can be
// reported with the field and its line.
class Reader {
 public:
  Reader(std::string text, std::string source)
      : text_(std::move(text)), source_(std::move(source)) {
    try {
      doc_ = json::parse(text_);
    } catch (const json::parse_error& e) {
      std::size_t line = 1;
      for (std::size_t k = 0; k < e.byte && k < text_.size(); ++k)
        if (text_[k] == '\n') ++line;
      throw Error(ErrorKind::kParse, source_ + ":" + std::to_string(line) +
                                         ": malformed JSON: " + e.what());
    }
  }

  const json& doc() const { return doc_; }

  [[noreturn]] void Fail(const Path& path, const std::string& msg) const {
    Locator loc(text_);
    throw Error(ErrorKind::kParse, source_ + ":" +
                                       std::to_string(loc.LineOf(path)) +
                                       ": field " + PathString(path) + ": " +
                                       msg);
  }

  const json& Field(const json& obj, const Path& path, const std::string& key) const {
    if (!obj.is_object()) Fail(path, "expected an object");
    auto it = obj.find(key);
    Path p = path;
    p.push_back(key);
    if (it == obj.end()) Fail(path, "missing field '" + key + "'");
    return *it;
  }

  const json& Array(const json& v, const Path& path) const {
    if (!v.is_array()) Fail(path, "expected an array");
    return v;
  }

  double Real(const json& v, const Path& path) const {
    if (!v.is_number()) Fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) Fail(path, "non-finite number");
    return d;
  }

  std::size_t Count(const json& v, const Path& path) const {
    if (!v.is_number_integer() || v.get<long long>() < 0)
      Fail(path, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  Matrix Mat(const json& v, const Path& path) const {
    Array(v, path);
    std::size_t cols = 0;
    for (std::size_t r = 0; r < v.size(); ++r) {
      Path rp = With(path, r);
      Array(v[r], rp);
      if (r == 0) cols = v[r].size();
      if (v[r].size() != cols) Fail(rp, "ragged matrix row");
    }
    Matrix m(v.size(), cols);
    for (std::size_t r = 0; r < v.size(); ++r)
      for (std::size_t c = 0; c < cols; ++c)
        m(r, c) = Real(v[r][c], With(With(path, r), c));
    return m;
  }

  static Path With(const Path& p, PathStep step) {
    Path q = p;
    q.push_back(std::move(step));
    return q;
  }

 private:
  std::string text_;
  std::string source_;
  json doc_;
};

void WriteMatrix(std::ostringstream& os, const Matrix& m,
                 const std::string& indent) {
  os << "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? ",\n" + indent + " " : "") << "[";
    for (std::size_t c = 0; c < m.cols(); ++c)
      os << (c ? ", " : "") << FormatReal(m(r, c));
    os << "]";
  }
  os << "]";
}

void WriteHeader(std::ostringstream& os, const std::string& header) {
  if (!header.empty()) os << "# " << header << "\n";
}

std::vector<std::string> SplitCsv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string_view cell = line.substr(start, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - start);
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.front())))
      cell.remove_prefix(1);
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back())))
      cell.remove_suffix(1);
    out.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string FormatReal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "failed writing '" + path + "'");
}

PolymatrixGame ParseGame(std::string_view text, const std::string& source) {
  Reader rd(StripComments(text), source);
  const json& doc = rd.doc();
  PolymatrixGame g;
  const Path root;

  const Path players_path{std::string("players")};
  const json& players = rd.Array(rd.Field(doc, root, "players"), players_path);
  for (std::size_t k = 0; k < players.size(); ++k) {
    const Path p = Reader::With(players_path, k);
    const std::size_t n = rd.Count(rd.Field(players[k], p, "actions"),
                                   Reader::With(p, std::string("actions")));
    if (n == 0) rd.Fail(Reader::With(p, std::string("actions")), "must be positive");
    g.action_counts.push_back(n);
  }

  if (doc.contains("edges")) {
    const Path ep{std::string("edges")};
    const json& edges = rd.Array(doc["edges"], ep);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const Path p = Reader::With(ep, k);
      EdgeGame e;
      e.i = rd.Count(rd.Field(edges[k], p, "i"), Reader::With(p, std::string("i")));
      e.j = rd.Count(rd.Field(edges[k], p, "j"), Reader::With(p, std::string("j")));
      e.A_ij = rd.Mat(rd.Field(edges[k], p, "A_ij"), Reader::With(p, std::string("A_ij")));
      e.A_ji = rd.Mat(rd.Field(edges[k], p, "A_ji"), Reader::With(p, std::string("A_ji")));
      g.edges.push_back(std::move(e));
    }
  }
  if (doc.contains("self_loops")) {
    const Path sp{std::string("self_loops")};
    const json& loops = rd.Array(doc["self_loops"], sp);
    for (std::size_t k = 0; k < loops.size(); ++k) {
      const Path p = Reader::With(sp, k);
      SelfLoop s;
      s.i = rd.Count(rd.Field(loops[k], p, "i"), Reader::With(p, std::string("i")));
      s.A = rd.Mat(rd.Field(loops[k], p, "A"), Reader::With(p, std::string("A")));
      g.self_loops.push_back(std::move(s));
    }
  }
  const Path eta_path{std::string("eta")};
  if (doc.contains("eta")) {
    const json& eta = rd.Array(doc["eta"], eta_path);
    for (std::size_t k = 0; k < eta.size(); ++k)
      g.eta.push_back(rd.Real(eta[k], Reader::With(eta_path, k)));
  } else {
    g.eta.assign(g.action_counts.size(), 1.0);
  }
  return g;
}

PolymatrixGame LoadGame(const std::string& path) {
  return ParseGame(ReadFile(path), path);
}

std::string SerializeGame(const PolymatrixGame& game, const std::string& header) {
  std::ostringstream os;
  WriteHeader(os, header);
  os << "{\n  \"players\": [";
  for (std::size_t k = 0; k < game.action_counts.size(); ++k)
    os << (k ? ", " : "") << "{\"actions\": " << game.action_counts[k] << "}";
  os << "],\n  \"edges\": [";
  for (std::size_t k = 0; k < game.edges.size(); ++k) {
    const EdgeGame& e = game.edges[k];
    os << (k ? "," : "") << "\n    {\"i\": " << e.i << ", \"j\": " << e.j
       << ",\n     \"A_ij\": ";
    WriteMatrix(os, e.A_ij, "             ");
    os << ",\n     \"A_ji\": ";
    WriteMatrix(os, e.A_ji, "             ");
    os << "}";
  }
  os << (game.edges.empty() ? "" : "\n  ") << "],\n  \"self_loops\": [";
  for (std::size_t k = 0; k < game.self_loops.size(); ++k) {
    const SelfLoop& s = game.self_loops[k];
    os << (k ? "," : "") << "\n    {\"i\": " << s.i << ", \"A\": ";
    WriteMatrix(os, s.A, "                   ");
    os << "}";
  }
  os << (game.self_loops.empty() ? "" : "\n  ") << "],\n  \"eta\": [";
  for (std::size_t k = 0; k < game.eta.size(); ++k)
    os << (k ? ", " : "") << FormatReal(game.eta[k]);
  os << "]\n}\n";
  return os.str();
}

TimeEvolvingSystem ParseSystem(std::string_view text, const std::string& source) {
  Reader rd(StripComments(text), source);
  const json& doc = rd.doc();
  const Path root;
  const std::size_t n = rd.Count(rd.Field(doc, root, "n"), Path{std::string("n")});
  if (n == 0) rd.Fail(Path{std::string("n")}, "must be positive");

  std::vector<Matrix> pops;
  const Path pp{std::string("populations")};
  const json& populations = rd.Array(rd.Field(doc, root, "populations"), pp);
  for (std::size_t k = 0; k < populations.size(); ++k) {
    const Path p = Reader::With(pp, k);
    const Path mp = Reader::With(p, std::string("P"));
    Matrix m = rd.Mat(rd.Field(populations[k], p, "P"), mp);
    if (m.rows() != n || m.cols() != n) rd.Fail(mp, "must be n x n");
    pops.push_back(std::move(m));
  }
  const std::size_t envs = rd.Count(rd.Field(doc, root, "environments"),
                                    Path{std::string("environments")});

  std::optional<TimeEvolvingSystem> sys;
  try {
    sys.emplace(n, std::move(pops), envs);
  } catch (const Error& e) {
    rd.Fail(pp, e.what());
  }

  if (doc.contains("couplings")) {
    const Path cp{std::string("couplings")};
    const json& couplings = rd.Array(doc["couplings"], cp);
    for (std::size_t k = 0; k < couplings.size(); ++k) {
      const Path p = Reader::With(cp, k);
      const std::size_t pop = rd.Count(rd.Field(couplings[k], p, "pop"),
                                       Reader::With(p, std::string("pop")));
      const std::size_t env = rd.Count(rd.Field(couplings[k], p, "env"),
                                       Reader::With(p, std::string("env")));
      Matrix a_pe = rd.Mat(rd.Field(couplings[k], p, "A_pop_env"),
                           Reader::With(p, std::string("A_pop_env")));
      Matrix a_ep = rd.Mat(rd.Field(couplings[k], p, "A_env_pop"),
                           Reader::With(p, std::string("A_env_pop")));
      try {
        sys->Couple(NodeRef::Population(pop), NodeRef::Environment(env),
                    std::move(a_pe), std::move(a_ep));
      } catch (const Error& e) {
        rd.Fail(p, e.what());
      }
    }
  }
  if (doc.contains("eta")) {
    const Path ep{std::string("eta")};
    const json& eta = rd.Array(doc["eta"], ep);
    std::vector<double> v;
    for (std::size_t k = 0; k < eta.size(); ++k)
      v.push_back(rd.Real(eta[k], Reader::With(ep, k)));
    try {
      sys->set_eta_hint(std::move(v));
    } catch (const Error& e) {
      rd.Fail(ep, e.what());
    }
  }
  return std::move(*sys);
}

TimeEvolvingSystem LoadSystem(const std::string& path) {
  return ParseSystem(ReadFile(path), path);
}

std::string SerializeSystem(const TimeEvolvingSystem& system,
                            const std::string& header) {
  std::ostringstream os;
  WriteHeader(os, header);
  os << "{\n  \"n\": " << system.n() << ",\n  \"populations\": [";
  for (std::size_t k = 0; k < system.populations().size(); ++k) {
    os << (k ? "," : "") << "\n    {\"P\": ";
    WriteMatrix(os, system.populations()[k], "           ");
    os << "}";
  }
  os << (system.populations().empty() ? "" : "\n  ") << "],\n  \"environments\": "
     << system.environments() << ",\n  \"couplings\": [";
  for (std::size_t k = 0; k < system.couplings().size(); ++k) {
    const Coupling& c = system.couplings()[k];
    os << (k ? "," : "") << "\n    {\"pop\": " << c.pop << ", \"env\": " << c.env
       << ",\n     \"A_pop_env\": ";
    WriteMatrix(os, c.A_pop_env, "                  ");
    os << ",\n     \"A_env_pop\": ";
    WriteMatrix(os, c.A_env_pop, "                  ");
    os << "}";
  }
  os << (system.couplings().empty() ? "" : "\n  ") << "]";
  if (system.eta_hint()) {
    os << ",\n  \"eta\": [";
    const auto& eta = *system.eta_hint();
    for (std::size_t k = 0; k < eta.size(); ++k)
      os << (k ? ", " : "") << FormatReal(eta[k]);
    os << "]";
  }
  os << "\n}\n";
  return os.str();
}

std::string SerializeTrajectory(const Trajectory& traj, const std::string& header) {
  std::ostringstream os;
  WriteHeader(os, header);
  const Layout& layout = traj.layout();
  os << "t";
  for (PlayerId i = 0; i < layout.players(); ++i)
    for (std::size_t a = 0; a < layout.actions(i); ++a)
      os << ",x_" << i << "_" << a;
  os << "\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << FormatReal(traj.time(k));
    for (double v : traj.sample(k)) os << "," << FormatReal(v);
    os << "\n";
  }
  return os.str();
}

Trajectory ParseTrajectory(std::string_view text, const std::string& source) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  std::optional<Trajectory> traj;
  double step = 0.0;
  Method method = Method::kRk4X;
  std::size_t width = 0;
  auto fail = [&](const std::string& field, const std::string& msg) {
    throw Error(ErrorKind::kParse, source + ":" + std::to_string(line_no) +
                                       ": field " + field + ": " + msg);
  };
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      // Pick up step=/method= from our own header line when present.
      std::istringstream words{std::string(line.substr(1))};
      std::string w;
      while (words >> w) {
        if (w.rfind("step=", 0) == 0) step = std::strtod(w.c_str() + 5, nullptr);
        if (w.rfind("method=", 0) == 0 && (w == "method=rk4_x" || w == "method=rk4_z"))
          method = ParseMethod(w.substr(7));
      }
      continue;
    }
    const auto cells = SplitCsv(line);
    if (!traj) {
      if (cells.empty() || cells[0] != "t") fail("t", "expected header starting with 't'");
      std::vector<std::size_t> counts;
      for (std::size_t c = 1; c < cells.size(); ++c) {
        unsigned long i = 0, a = 0;
        char tail = 0;
        if (std::sscanf(cells[c].c_str(), "x_%lu_%lu%c", &i, &a, &tail) != 2)
          fail(cells[c], "expected a column named x_<player>_<action>");
        if (i == counts.size() && a == 0) {
          counts.push_back(1);
        } else if (i + 1 == counts.size() && a == counts.back()) {
          ++counts.back();
        } else {
          fail(cells[c], "columns must be player-major, action-minor");
        }
      }
      width = cells.size();
      traj.emplace(Layout(std::move(counts)), step, method);
      continue;
    }
    if (cells.size() != width)
      fail("row", "expected " + std::to_string(width) + " cells, found " +
                      std::to_string(cells.size()));
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      char* endp = nullptr;
      errno = 0;
      row[c] = std::strtod(cells[c].c_str(), &endp);
      if (cells[c].empty() || *endp != '\0' || errno == ERANGE || !std::isfinite(row[c]))
        fail(c == 0 ? "t" : "column " + std::to_string(c), "not a finite number");
    }
    try {
      traj->Append(row[0], std::span<const double>(row).subspan(1));
    } catch (const Error& e) {
      fail("t", e.what());
    }
  }
  if (!traj || traj->size() == 0) {
    ++line_no;
    fail("t", "trajectory has no samples");
  }
  return Trajectory(std::move(*traj));
}

Trajectory LoadTrajectory(const std::string& path) {
  return ParseTrajectory(ReadFile(path), path);
}

std::string SerializeSeries(const Series& series, const std::string& header) {
  std::ostringstream os;
  WriteHeader(os, header);
  os << "t";
  for (const auto& c : series.columns) os << "," << c;
  os << "\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    os << FormatReal(series.t[k]);
    for (double v : series.row(k)) os << "," << FormatReal(v);
    os << "\n";
  }
  return os.str();
}

std::string SerializeSection(const std::vector<SectionCrossing>& crossings,
                             const Layout& layout, const std::string& header) {
  std::ostringstream os;
  WriteHeader(os, header);
  os << "t,direction";
  for (PlayerId i = 0; i < layout.players(); ++i)
    for (std::size_t a = 0; a < layout.actions(i); ++a)
      os << ",x_" << i << "_" << a;
  os << "\n";
  for (const auto& c : crossings) {
    os << FormatReal(c.t) << "," << c.direction;
    for (double v : c.state) os << "," << FormatReal(v);
    os << "\n";
  }
  return os.str();
}

std::string SerializeNash(const NashResult& r, const std::string& header) {
  std::ostringstream os;
  WriteHeader(os, header);
  os << "status = solved\n";
  os << "objective = " << FormatReal(r.objective) << "\n";
  os << "interior = " << (r.interior ? "true" : "false") << "\n";
  os << "interiority_margin = " << FormatReal(r.interiority_margin) << "\n";
  os << "nash_residual = " << FormatReal(r.nash_residual) << "\n";
  os << "uniqueness = unverified\n";
  for (PlayerId i = 0; i < r.profile.players(); ++i) {
    os << "player." << i << ".value = " << FormatReal(r.values[i]) << "\n";
    os << "player." << i << ".profile = ";
    const auto p = r.profile.player(i);
    for (std::size_t a = 0; a < p.size(); ++a)
      os << (a ? ", " : "") << FormatReal(p[a]);
    os << "\n";
  }
  return os.str();
}

std::string SerializeRecurrence(const RecurrenceStats& s, const std::string& header) {
  std::ostringstream os;
  WriteHeader(os, header);
  os << "epsilon = " << FormatReal(s.epsilon) << "\n";
  os << "transient = " << FormatReal(s.transient) << "\n";
  os << "returned = " << (s.first_return_time ? "true" : "false") << "\n";
  os << "first_return_time = "
     << (s.first_return_time ? FormatReal(*s.first_return_time) : "none") << "\n";
  os << "min_distance_after_transient = "
     << FormatReal(s.min_distance_after_transient) << "\n";
  os << "min_distance_time = " << FormatReal(s.min_distance_time) << "\n";
  return os.str();
}

}  // namespace coevo::io

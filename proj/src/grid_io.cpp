#include "subnav/grid_io.hpp"

#include <array>
#include <fstream>
#include <map>
#include <sstream>

namespace subnav {

namespace {

// Canonical characters per (state, class).
constexpr char kFreeChars[kNumClasses] = {'.', 'r', 'b'};
constexpr char kObstacleChars[kNumClasses] = {'#', 'R', 'B'};
constexpr char kUnknownChar = '?';
constexpr char kStartChar = 'S';
constexpr char kGoalChar = 'G';

char canonical_char(const Cell& c) {
  switch (c.state) {
    case CellState::Unknown: return kUnknownChar;
    case CellState::Free: return kFreeChars[c.cls];
    case CellState::Obstacle: return kObstacleChars[c.cls];
  }
  return '?';
}

struct LegendEntry {
  enum Kind { CellKind, Start, Goal } kind = CellKind;
  Cell cell;
};

std::string legend_token(char ch, const LegendEntry& e) {
  std::string t(1, ch);
  t += '=';
  switch (e.kind) {
    case LegendEntry::Start: t += "start"; break;
    case LegendEntry::Goal: t += "goal"; break;
    case LegendEntry::CellKind:
      t += e.cell.state == CellState::Unknown ? "unknown"
           : e.cell.state == CellState::Free  ? "free"
                                              : "obstacle";
      break;
  }
  if (!(e.kind == LegendEntry::CellKind && e.cell.state == CellState::Unknown)) {
    t += ':';
    t += static_cast<char>('0' + e.cell.cls);
  }
  return t;
}

LegendEntry parse_legend_token(const std::string& body, int line) {
  LegendEntry e;
  std::string name = body;
  std::uint8_t cls = 0;
  if (auto colon = body.find(':'); colon != std::string::npos) {
    name = body.substr(0, colon);
    std::string cs = body.substr(colon + 1);
    if (cs.size() != 1 || cs[0] < '0' || cs[0] >= '0' + kNumClasses)
      throw ParseError("legend class must be in 0.." + std::to_string(kNumClasses - 1), line);
    cls = static_cast<std::uint8_t>(cs[0] - '0');
  }
  if (name == "unknown") {
    e.cell = Cell{};
  } else if (name == "free") {
    e.cell = free_cell(cls);
  } else if (name == "obstacle") {
    e.cell = obstacle_cell(cls);
  } else if (name == "start") {
    e.kind = LegendEntry::Start;
    e.cell = free_cell(cls);
  } else if (name == "goal") {
    e.kind = LegendEntry::Goal;
    e.cell = free_cell(cls);
  } else {
    throw ParseError("unknown legend state '" + name + "'", line);
  }
  return e;
}

}  // namespace

std::string save_map_text(const MapDocument& doc) {
  const SemanticGrid& g = doc.grid;
  // Character per cell, with start/goal markers overriding.
  std::vector<std::string> rows(g.height(), std::string(g.width(), '?'));
  std::map<char, LegendEntry> legend;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const Cell& c = g.at(x, y);
      char ch;
      LegendEntry e;
      if (doc.start && *doc.start == Pose{x, y}) {
        ch = kStartChar;
        e = {LegendEntry::Start, c};
      } else if (doc.goal && *doc.goal == Pose{x, y}) {
        ch = kGoalChar;
        e = {LegendEntry::Goal, c};
      } else {
        ch = canonical_char(c);
        e = {LegendEntry::CellKind, c};
      }
      rows[y][x] = ch;
      legend.emplace(ch, e);
    }
  }

  static const std::string order = "?.rb#RBSG";
  std::ostringstream os;
  os << g.width() << ' ' << g.height() << '\n';
  bool first = true;
  for (char ch : order) {
    auto it = legend.find(ch);
    if (it == legend.end()) continue;
    if (!first) os << ' ';
    os << legend_token(ch, it->second);
    first = false;
  }
  os << '\n';
  for (const std::string& row : rows) os << row << '\n';
  return os.str();
}

MapDocument load_map_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int line_no = 0;

  auto next_line = [&](const char* what) {
    if (!std::getline(is, line)) throw ParseError(std::string("unexpected end of file, expected ") + what, line_no + 1);
    ++line_no;
  };

  next_line("header 'W H'");
  int w = 0, h = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> w >> h) || w <= 0 || h <= 0) throw ParseError("header must be 'W H' with positive integers", line_no);
    std::string extra;
    if (hs >> extra) throw ParseError("trailing content after header", line_no);
  }

  next_line("legend");
  std::map<char, LegendEntry> legend;
  {
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (tok.size() < 3 || tok[1] != '=') throw ParseError("legend token must look like 'c=state[:class]'", line_no);
      legend[tok[0]] = parse_legend_token(tok.substr(2), line_no);
    }
    if (legend.empty()) throw ParseError("empty legend", line_no);
  }

  MapDocument doc;
  doc.grid = SemanticGrid(w, h);
  for (int y = 0; y < h; ++y) {
    next_line("map row");
    if (static_cast<int>(line.size()) != w)
      throw ParseError("row has " + std::to_string(line.size()) + " characters, expected " + std::to_string(w), line_no);
    for (int x = 0; x < w; ++x) {
      auto it = legend.find(line[x]);
      if (it == legend.end()) throw ParseError(std::string("character '") + line[x] + "' not in legend", line_no);
      const LegendEntry& e = it->second;
      doc.grid.at(x, y) = e.cell;
      if (e.kind == LegendEntry::Start) {
        if (doc.start) throw ParseError("duplicate start marker", line_no);
        doc.start = Pose{x, y};
      } else if (e.kind == LegendEntry::Goal) {
        if (doc.goal) throw ParseError("duplicate goal marker", line_no);
        doc.goal = Pose{x, y};
      }
    }
  }
  if (std::getline(is, line) && !line.empty()) throw ParseError("trailing content after map rows", line_no + 1);
  return doc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open file for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace subnav

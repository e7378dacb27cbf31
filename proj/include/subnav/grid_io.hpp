#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "subnav/grid.hpp"

namespace subnav {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
  int line_number;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Map text format: header "W H", a legend line mapping characters to
// (state, class) plus optional start/goal markers, then H rows of W chars.
struct MapDocument {
  SemanticGrid grid;
  std::optional<Pose> start;
  std::optional<Pose> goal;
};

std::string save_map_text(const MapDocument& doc);
MapDocument load_map_text(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace subnav

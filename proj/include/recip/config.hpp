#pragma once

#include "recip/scenarios.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace recip {

/// Sectioned key-value text. Keys may repeat inside a section; '#' and ';'
/// start comments. Parse errors throw InvalidArgument.
class IniDocument {
public:
  static IniDocument parse(std::istream& in);
  static IniDocument load(const std::string& path);

  bool has_section(const std::string& section) const { return sections_.count(section) > 0; }
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_all(const std::string& section, const std::string& key) const;
  std::map<std::string, std::string> flat(const std::string& section) const;

private:
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections_;
};

enum class FieldSource { scalar, layered, tensor, random, kirchhoff };

struct FieldConfig {
  FieldSource kind = FieldSource::scalar;
  double sigma = 1.0;                     // scalar
  std::array<double, 2> layer_sigma{1.0, 1.0};  // layered: value below / above the split
  int layer_axis = 0;
  double layer_split = 0.5;
  std::vector<double> tensor;             // tensor: upper triangle of the active block
  std::optional<double> lambda;
  double anisotropy = 1.0;                // random
  std::uint64_t seed = 0;
  MaterialLaws laws;                      // kirchhoff
};

struct PointCharge {
  Point location = Point::Zero();
  double weight = 0.0;
};

struct RunConfig {
  Grid grid;
  FieldConfig field;
  std::optional<std::array<Point, 4>> points;
  std::vector<PointCharge> charges;
  std::vector<Point> green_points;
  double current = 1.0;
  Index radius = 2;
  std::vector<double> widths;
  SolveOptions solve;
  std::string trace_path;
  std::string out_dir = ".";
  bool dump_matrix = false;
};

/// Validates references and ranges; throws InvalidArgument with a diagnostic.
RunConfig parse_run_config(const IniDocument& doc);

/// "x[,y[,z]] : weight".
PointCharge parse_charge(const std::string& text);

/// Comma list of lengths; a trailing 'h' multiplies by the largest grid spacing.
std::vector<double> parse_widths(const std::string& text, const Grid& grid);

ConductivityField build_field(const RunConfig& cfg);

}  // namespace recip

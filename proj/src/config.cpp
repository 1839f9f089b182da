#include "recip/config.hpp"

#include "recip/detail/text.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

namespace recip {

using detail::parse_double;
using detail::parse_doubles;
using detail::trim;

IniDocument IniDocument::parse(std::istream& in) {
  IniDocument doc;
  std::string section;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InvalidArgument("line " + std::to_string(line_no) + ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      doc.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || section.empty())
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected 'key = value' inside a section");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw InvalidArgument("line " + std::to_string(line_no) + ": empty key");
    doc.sections_[section].emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return doc;
}

IniDocument IniDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path + "'");
  return parse(in);
}

std::optional<std::string> IniDocument::get(const std::string& section, const std::string& key) const {
  const auto all = get_all(section, key);
  if (all.empty()) return std::nullopt;
  if (all.size() > 1) throw InvalidArgument("[" + section + "] " + key + " is given more than once");
  return all.front();
}

std::vector<std::string> IniDocument::get_all(const std::string& section, const std::string& key) const {
  std::vector<std::string> out;
  const auto it = sections_.find(section);
  if (it == sections_.end()) return out;
  for (const auto& [k, v] : it->second)
    if (k == key) out.push_back(v);
  return out;
}

std::map<std::string, std::string> IniDocument::flat(const std::string& section) const {
  std::map<std::string, std::string> out;
  const auto it = sections_.find(section);
  if (it == sections_.end()) return out;
  for (const auto& [k, v] : it->second) out[k] = v;
  return out;
}

PointCharge parse_charge(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("charge must read 'x[,y[,z]] : weight'");
  const auto coords = parse_doubles(text.substr(0, colon));
  return PointCharge{make_point(coords), parse_double(text.substr(colon + 1))};
}

std::vector<double> parse_widths(const std::string& text, const Grid& grid) {
  const double h = std::max({grid.spacing(0), grid.spacing(1), grid.spacing(2)});
  std::vector<double> out;
  for (auto token : detail::split(text, ',')) {
    if (!token.empty() && token.back() == 'h') {
      const auto factor = trim(token.substr(0, token.size() - 1));
      out.push_back((factor.empty() ? 1.0 : parse_double(factor)) * h);
    } else {
      out.push_back(parse_double(token));
    }
  }
  return out;
}

namespace {

Point parse_point(const Grid& grid, const std::string& text, const std::string& what) {
  const auto coords = parse_doubles(text);
  if (static_cast<int>(coords.size()) != grid.dim())
    throw InvalidArgument(what + " needs " + std::to_string(grid.dim()) + " coordinates");
  const Point p = make_point(coords);
  if (!grid.contains_strictly(p)) throw InvalidArgument(what + " lies on or outside the domain boundary");
  return p;
}

template <typename T>
T require_positive(T value, const std::string& what) {
  if (!(value > T(0))) throw InvalidArgument(what + " must be positive");
  return value;
}

FieldConfig parse_field(const IniDocument& doc, const Grid& grid) {
  if (!doc.has_section("field")) throw InvalidArgument("config is missing the [field] block");
  FieldConfig f;
  const std::string kind = doc.get("field", "kind").value_or("scalar");
  auto number = [&](const std::string& key, double fallback) {
    const auto v = doc.get("field", key);
    return v ? parse_double(*v) : fallback;
  };
  if (auto l = doc.get("field", "lambda")) f.lambda = require_positive(parse_double(*l), "[field] lambda");

  if (kind == "scalar") {
    f.kind = FieldSource::scalar;
    f.sigma = require_positive(number("sigma", 1.0), "[field] sigma");
  } else if (kind == "layered") {
    f.kind = FieldSource::layered;
    const auto s = parse_doubles(doc.get("field", "sigma").value_or("1,1"));
    if (s.size() != 2) throw InvalidArgument("[field] sigma for a layered field needs two values");
    f.layer_sigma = {require_positive(s[0], "[field] sigma"), require_positive(s[1], "[field] sigma")};
    f.layer_axis = static_cast<int>(number("axis", 0.0));
    if (f.layer_axis < 0 || f.layer_axis >= grid.dim()) throw InvalidArgument("[field] axis is not an active axis");
    f.layer_split = number("split", 0.5 * grid.extent(f.layer_axis));
  } else if (kind == "tensor") {
    f.kind = FieldSource::tensor;
    const auto t = doc.get("field", "tensor");
    if (!t) throw InvalidArgument("[field] kind = tensor needs 'tensor'");
    f.tensor = parse_doubles(*t);
    const auto expected = static_cast<std::size_t>(grid.dim() * (grid.dim() + 1) / 2);
    if (f.tensor.size() != expected)
      throw InvalidArgument("[field] tensor needs " + std::to_string(expected) + " upper-triangle entries");
  } else if (kind == "random") {
    f.kind = FieldSource::random;
    if (!f.lambda) f.lambda = 1.0;
    f.anisotropy = number("anisotropy", 1.0);
    if (!(f.anisotropy >= 1.0)) throw InvalidArgument("[field] anisotropy must be at least 1");
    if (auto s = doc.get("field", "seed")) f.seed = static_cast<std::uint64_t>(detail::parse_integer(*s));
  } else if (kind == "kirchhoff") {
    f.kind = FieldSource::kirchhoff;
    if (auto t = doc.get("field", "sigma_table"))
      f.laws.sigma_of_u = ScalarLaw::from_table_file(*t);
    else
      f.laws.sigma_of_u = ScalarLaw::parse(doc.get("field", "sigma_law").value_or("constant:1"));
    if (auto t = doc.get("field", "k_table"))
      f.laws.k_of_u = ScalarLaw::from_table_file(*t);
    else
      f.laws.k_of_u = ScalarLaw::parse(doc.get("field", "k_law").value_or("constant:1"));
    const auto ub = doc.get("field", "u_boundary");
    if (!ub) throw InvalidArgument("[field] kind = kirchhoff needs 'u_boundary'");
    f.laws.u_boundary = parse_doubles(*ub);
    if (f.laws.u_boundary.size() != static_cast<std::size_t>(2 * grid.dim()))
      throw InvalidArgument("[field] u_boundary needs one temperature per face");
  } else {
    throw InvalidArgument("[field] unknown kind '" + kind + "'");
  }
  return f;
}

}  // namespace

RunConfig parse_run_config(const IniDocument& doc) {
  RunConfig cfg;
  if (!doc.has_section("grid")) throw InvalidArgument("config is missing the [grid] block");
  cfg.grid = Grid::from_key_value(doc.flat("grid"));
  cfg.field = parse_field(doc, cfg.grid);

  if (doc.has_section("points")) {
    std::array<Point, 4> pts;
    const char* names[4] = {"a", "b", "c", "d"};
    for (int i = 0; i < 4; ++i) {
      const auto v = doc.get("points", names[i]);
      if (!v) throw InvalidArgument(std::string("[points] is missing '") + names[i] + "'");
      pts[static_cast<std::size_t>(i)] = parse_point(cfg.grid, *v, std::string("point ") + names[i]);
    }
    cfg.points = pts;
  }
  for (const auto& line : doc.get_all("measure", "charge")) {
    PointCharge c = parse_charge(line);
    if (!cfg.grid.contains_strictly(c.location)) throw InvalidArgument("charge lies on or outside the domain boundary");
    if (!std::isfinite(c.weight)) throw InvalidArgument("charge weight must be finite");
    cfg.charges.push_back(c);
  }
  for (const auto& line : doc.get_all("green", "point")) cfg.green_points.push_back(parse_point(cfg.grid, line, "green point"));

  if (auto v = doc.get("run", "current")) cfg.current = parse_double(*v);
  if (auto v = doc.get("run", "radius")) {
    cfg.radius = static_cast<Index>(detail::parse_integer(*v));
    if (cfg.radius < 1) throw InvalidArgument("[run] radius must be at least 1");
  }
  if (auto v = doc.get("run", "widths")) cfg.widths = parse_widths(*v, cfg.grid);

  if (auto v = doc.get("solver", "tol")) {
    cfg.solve.tol = parse_double(*v);
    if (!(cfg.solve.tol > 0.0 && cfg.solve.tol < 1.0)) throw InvalidArgument("[solver] tol must lie in (0, 1)");
  }
  if (auto v = doc.get("solver", "max_iterations"))
    cfg.solve.max_iterations = require_positive(static_cast<Index>(detail::parse_integer(*v)), "[solver] max_iterations");
  if (auto v = doc.get("solver", "trace")) cfg.trace_path = *v;

  if (auto v = doc.get("output", "dir")) cfg.out_dir = *v;
  if (auto v = doc.get("output", "matrix")) cfg.dump_matrix = *v == "true" || *v == "1" || *v == "yes";
  return cfg;
}

ConductivityField build_field(const RunConfig& cfg) {
  const auto& f = cfg.field;
  const Grid& grid = cfg.grid;
  switch (f.kind) {
    case FieldSource::scalar: {
      ConductivityField field = make_uniform_field(grid, Tensor::identity(f.sigma), f.lambda.value_or(f.sigma));
      return field;
    }
    case FieldSource::layered:
      return make_scalar_field(grid, [&](const Point& p) {
        return p[f.layer_axis] < f.layer_split ? f.layer_sigma[0] : f.layer_sigma[1];
      });
    case FieldSource::tensor: {
      Tensor t;
      std::size_t k = 0;
      for (int i = 0; i < grid.dim(); ++i)
        for (int j = i; j < grid.dim(); ++j) t.set(i, j, f.tensor[k++]);
      const double ev = min_eigenvalue(t, grid.dim());
      if (!(ev > 0.0)) throw InvalidArgument("[field] tensor is not positive definite");
      return make_uniform_field(grid, t, f.lambda.value_or(ev));
    }
    case FieldSource::random:
      return random_spd_field(grid, *f.lambda, f.anisotropy, f.seed);
    case FieldSource::kirchhoff:
      return kirchhoff_conductivity(grid, f.laws, cfg.solve).field;
  }
  throw InvalidArgument("unsupported field kind");
}

}  // namespace recip

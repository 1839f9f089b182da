#include "recip/cli.hpp"

#include "recip/analytic.hpp"
#include "recip/config.hpp"
#include "recip/reciprocity.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>

namespace recip::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::ostream& out;
  std::ostream& err;
};

RunConfig load_config(const Context& ctx) {
  if (ctx.config_path.empty()) throw InvalidArgument("--config is required for this subcommand");
  RunConfig cfg = parse_run_config(IniDocument::load(ctx.config_path));
  if (!ctx.out_dir.empty()) cfg.out_dir = ctx.out_dir;
  if (ctx.seed) cfg.field.seed = *ctx.seed;
  return cfg;
}

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write '" + path.string() + "'");
  f << std::setw(2) << j << "\n";
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write '" + path.string() + "'");
  writer(f);
}

struct Prepared {
  RunConfig cfg;
  ConductivityField field;
  DiscreteOperator op;
  std::unique_ptr<std::ofstream> trace;
};

Prepared prepare(const Context& ctx) {
  RunConfig cfg = load_config(ctx);
  ConductivityField field = build_field(cfg);
  if (!validate_tensor(field).passed) throw InvalidArgument("conductivity field fails the ellipticity check");
  DiscreteOperator op = assemble(field);
  Prepared p{std::move(cfg), std::move(field), std::move(op), nullptr};
  if (!p.cfg.trace_path.empty()) {
    p.trace = std::make_unique<std::ofstream>(p.cfg.trace_path);
    if (!*p.trace) throw InvalidArgument("cannot open trace file '" + p.cfg.trace_path + "'");
    p.cfg.solve.trace = p.trace.get();
  }
  return p;
}

json grid_json(const Grid& g) {
  json j;
  j["dim"] = g.dim();
  for (int axis = 0; axis < g.dim(); ++axis) {
    j["extents"].push_back(g.extent(axis));
    j["resolution"].push_back(g.resolution(axis));
  }
  return j;
}

int cmd_solve(const Context& ctx) {
  Prepared p = prepare(ctx);
  if (p.cfg.charges.empty()) throw InvalidArgument("solve needs at least one [measure] charge");
  std::vector<Charge> charges;
  json snaps = json::array();
  for (const auto& c : p.cfg.charges) {
    const NodeRef node = nearest_node(p.cfg.grid, c.location);
    charges.push_back({node, c.weight});
    snaps.push_back((node.coords - c.location).norm());
  }
  const MeasureData m(p.cfg.grid, std::move(charges));
  // Source convention: (a_ij u_{x_i})_{x_j} = mu, i.e. K u = -load.
  const SolveResult result = solve_dirichlet(p.op, -to_rhs(p.cfg.grid, m), p.cfg.solve);

  const fs::path dir = output_dir(p.cfg);
  write_file(dir / "potential.csv", [&](std::ostream& f) { write_potential_csv(f, result.potential); });
  write_file(dir / "field.csv", [&](std::ostream& f) { write_field_csv(f, p.field); });
  if (p.cfg.dump_matrix) write_file(dir / "matrix.txt", [&](std::ostream& f) { write_triplets(f, p.op); });

  json report;
  report["command"] = "solve";
  report["grid"] = grid_json(p.cfg.grid);
  report["equation"] = "(a_ij u_xi)_xj = mu, u = 0 on boundary";
  report["residual"] = result.residual_norm;
  report["iterations"] = result.iterations;
  report["unknowns"] = p.cfg.grid.interior_count();
  report["snap_distance"] = snaps;
  report["total_charge"] = m.total_weight();
  write_json(dir / "report.json", report);
  ctx.out << "solve: residual " << result.residual_norm << " after " << result.iterations << " iterations\n";
  return kExitOk;
}

int cmd_green(const Context& ctx) {
  Prepared p = prepare(ctx);
  if (p.cfg.green_points.size() < 2) throw InvalidArgument("green needs at least two [green] points");
  std::vector<NodeRef> nodes;
  for (const auto& pt : p.cfg.green_points) nodes.push_back(nearest_node(p.cfg.grid, pt));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[i] == nodes[j]) throw InvalidArgument("green points must snap to distinct nodes");

  const SymmetryReport sym = check_symmetry(p.op, nodes, p.cfg.solve);
  const double threshold = 10.0 * p.cfg.solve.tol * sym.max_abs_green;
  const FieldKind kind = p.field.is_diagonal() ? FieldKind::diagonal : FieldKind::full;

  const fs::path dir = output_dir(p.cfg);
  json columns = json::array();
  bool positivity_ok = true;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const GreenColumn col = green_column(p.op, nodes[i], p.cfg.solve);
    const PositivityReport pos = check_positivity(col, kind);
    positivity_ok = positivity_ok && pos.passed;
    const std::string file = "green_" + std::to_string(i) + ".csv";
    write_file(dir / file, [&](std::ostream& f) { write_green_csv(f, col); });
    columns.push_back({{"source", std::vector<double>(col.source.coords.data(), col.source.coords.data() + p.cfg.grid.dim())},
                       {"file", file},
                       {"residual", col.residual_norm},
                       {"min_value", pos.min_value},
                       {"positivity_asserted", pos.asserted},
                       {"positivity_passed", pos.passed}});
  }
  const bool symmetric = sym.max_defect <= threshold;

  json report;
  report["command"] = "green";
  report["grid"] = grid_json(p.cfg.grid);
  report["field_kind"] = kind == FieldKind::diagonal ? "diagonal" : "full";
  report["symmetry"] = {{"max_defect", sym.max_defect},
                        {"max_abs_green", sym.max_abs_green},
                        {"relative_defect", sym.relative_defect()},
                        {"threshold", threshold},
                        {"passed", symmetric}};
  report["columns"] = columns;
  report["passed"] = symmetric && positivity_ok;
  write_json(dir / "report.json", report);
  ctx.out << "green: symmetry defect " << sym.max_defect << " (threshold " << threshold << ")\n";
  return symmetric && positivity_ok ? kExitOk : kExitCheckFailed;
}

int cmd_reciprocity(const Context& ctx) {
  Prepared p = prepare(ctx);
  if (!p.cfg.points) throw InvalidArgument("reciprocity needs a [points] block");
  const InjectionSpec spec = make_injection_spec(p.cfg.grid, *p.cfg.points, p.cfg.current, p.cfg.radius);
  validate_injection(p.op, spec);

  const ReciprocityReport normalized = reciprocity_defect(p.op, spec, p.cfg.solve);
  const ReciprocityReport unit = unit_strength_reciprocity(p.op, spec, p.cfg.solve);

  json report;
  report["command"] = "reciprocity";
  report["grid"] = grid_json(p.cfg.grid);
  report["alpha_normalized"] = to_json(normalized);
  report["unit_strength"] = to_json(unit);
  report["passed"] = normalized.passed() && unit.passed();
  write_json(output_dir(p.cfg) / "report.json", report);
  ctx.out << "reciprocity: lhs " << normalized.lhs << ", rhs " << normalized.rhs << ", verdict "
          << normalized.verdict() << "; unit-strength lhs " << unit.lhs << ", verdict " << unit.verdict() << "\n";
  return normalized.passed() && unit.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_analytic_check(const Context& ctx) {
  const auto table = analytic_check_table(ctx.seed.value_or(2024));
  bool all = true;
  json rows = json::array();
  ctx.out << std::left << std::setw(52) << "check" << std::setw(14) << "defect" << std::setw(14) << "tolerance"
          << "result\n";
  for (const auto& c : table) {
    all = all && c.passed;
    ctx.out << std::left << std::setw(52) << c.name << std::setw(14) << c.value << std::setw(14) << c.tolerance
            << (c.passed ? "PASS" : "FAIL") << "\n";
    rows.push_back({{"check", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  }
  if (!ctx.out_dir.empty()) {
    fs::create_directories(ctx.out_dir);
    write_json(fs::path(ctx.out_dir) / "report.json", {{"command", "analytic-check"}, {"checks", rows}, {"passed", all}});
  }
  return all ? kExitOk : kExitCheckFailed;
}

int cmd_convergence(const Context& ctx) {
  Prepared p = prepare(ctx);
  if (p.cfg.charges.empty()) throw InvalidArgument("convergence needs at least one [measure] charge");
  if (p.cfg.widths.empty()) throw InvalidArgument("convergence needs [run] widths");
  std::vector<Charge> charges;
  for (const auto& c : p.cfg.charges) charges.push_back({nearest_node(p.cfg.grid, c.location), c.weight});
  const MeasureData m(p.cfg.grid, std::move(charges));

  const auto table = smoothing_convergence(p.field, p.cfg.widths, m, p.cfg.solve);
  json rows = json::array();
  for (const auto& e : table) rows.push_back({{"width", e.width}, {"distance", e.distance}, {"residual", e.residual_norm}});
  const bool tail_zero = p.cfg.widths.back() != 0.0 || table.back().distance <= 2.0 * p.cfg.solve.tol;

  json report;
  report["command"] = "convergence";
  report["grid"] = grid_json(p.cfg.grid);
  report["table"] = rows;
  report["strictly_decreasing"] = strictly_decreasing(table);
  report["width_zero_distance_ok"] = tail_zero;
  report["passed"] = tail_zero;
  write_json(output_dir(p.cfg) / "report.json", report);
  for (const auto& e : table) ctx.out << "width " << e.width << "  distance " << e.distance << "\n";
  return tail_zero ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reciprocity verification for conduction problems with point sources"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "INI-style run configuration");
    if (needs_config) opt->required();
    sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--seed", seed, "random seed (overrides [field] seed)");
  };
  auto* solve = app.add_subcommand("solve", "solve with the [measure] charges and dump the potential");
  auto* green = app.add_subcommand("green", "Green's function symmetry and positivity");
  auto* recip = app.add_subcommand("reciprocity", "four-point reciprocity report");
  auto* analytic = app.add_subcommand("analytic-check", "closed-form oracle table");
  auto* convergence = app.add_subcommand("convergence", "mollified-coefficient distance table");
  for (auto* sub : {solve, green, recip, convergence}) add_common(sub, true);
  add_common(analytic, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  Context ctx{config_path, out_dir, seed, out, err};
  try {
    if (*solve) return cmd_solve(ctx);
    if (*green) return cmd_green(ctx);
    if (*recip) return cmd_reciprocity(ctx);
    if (*analytic) return cmd_analytic_check(ctx);
    if (*convergence) return cmd_convergence(ctx);
  } catch (const InvalidArgument& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace recip::cli

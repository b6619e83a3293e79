// centered-bound: lower bounds on the area of compact centered dual two-cells
// from per-edge length bounds, plus the tree-catalog tooling behind them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "centered_bound/errors.hpp"
#include "centered_bound/forest_io.hpp"
#include "centered_bound/hypgeom.hpp"
#include "centered_bound/search.hpp"
#include "centered_bound/trees.hpp"

namespace cb = centered_bound;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCatalog = 3;
constexpr int kExitDomain = 4;

std::string fmt_g15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// floor truncation, matching how values are reported in the tables
std::string fmt_truncated(double v, int digits) {
  double scale = std::pow(10.0, digits);
  double t = std::floor(v * scale) / scale;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, t);
  return buf;
}

std::string code_str(const cb::TreeCode& code) {
  std::string out = "(";
  for (std::size_t i = 0; i < code.size(); ++i) {
    out += std::to_string(code[i]);
    if (i + 1 < code.size()) out += ',';
  }
  out += ')';
  return out;
}

// comma-free form for CSV cells
std::string code_cell(const cb::TreeCode& code) {
  std::string out;
  for (std::size_t i = 0; i < code.size(); ++i) {
    out += std::to_string(code[i]);
    if (i + 1 < code.size()) out += ' ';
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& v, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if constexpr (std::is_same_v<T, double>)
      out += fmt_g15(v[i]);
    else
      out += std::to_string(v[i]);
    if (i + 1 < v.size()) out += sep;
  }
  return out;
}

std::string json_ints(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += std::to_string(v[i]);
    if (i + 1 < v.size()) out += ',';
  }
  return out + "]";
}

std::string json_doubles(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += fmt_g15(v[i]);
    if (i + 1 < v.size()) out += ',';
  }
  return out + "]";
}

struct CommonOpts {
  std::string convention = "sinh-half";
  bool no_reduce = false;
  int truncate = 3;
  std::string format = "text";
  std::string forest_path;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_format = true) {
  cmd->add_option("--convention", o.convention, "input convention: sinh-half or length")
      ->check(CLI::IsMember({"sinh-half", "length"}));
  cmd->add_flag("--no-reduce", o.no_reduce, "search all n! assignments instead of symmetry orbits");
  cmd->add_option("--truncate", o.truncate, "decimal digits kept (floor) in truncated values")
      ->check(CLI::Range(0, 12));
  if (with_format)
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
  cmd->add_option("--forest", o.forest_path, "tree catalog file (overrides CENTERED_BOUND_FOREST)");
  cmd->add_option("--jobs", o.jobs, "worker thread cap (0 = hardware)")->check(CLI::Range(0, 512));
}

std::vector<cb::HalfSinhLength> convert_inputs(const std::vector<double>& raw,
                                               const std::string& convention) {
  std::vector<cb::HalfSinhLength> out;
  out.reserve(raw.size());
  for (double v : raw) {
    if (!(std::isfinite(v) && v > 0.0))
      throw CLI::ValidationError("values", "all values must be positive and finite");
    out.push_back(convention == "length" ? cb::HalfSinhLength::from_length(v)
                                         : cb::HalfSinhLength(v));
  }
  return out;
}

// --forest flag, then CENTERED_BOUND_FOREST, then native enumeration
std::optional<cb::ForestLibrary> resolve_forest(const CommonOpts& o) {
  std::string path = o.forest_path;
  if (path.empty())
    if (auto env = cb::forest_env_path()) path = *env;
  if (path.empty()) return std::nullopt;
  return cb::load_forest_file(path);
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

int run_bound(const std::vector<double>& raw, const CommonOpts& o) {
  auto bounds = convert_inputs(raw, o.convention);
  auto forest = resolve_forest(o);
  cb::BoundQuery q{std::move(bounds), !o.no_reduce, forest ? &*forest : nullptr, o.jobs};

  Timer timer;
  cb::BoundResult r = cb::minimize(q);
  const double elapsed = timer.ms();
  const int n = static_cast<int>(raw.size());

  std::vector<double> sinh_in;
  for (const auto& b : q.bounds) sinh_in.push_back(b.sinh_half());

  if (o.format == "json") {
    std::cout << "{\"query\":{\"convention\":\"" << o.convention
              << "\",\"values\":" << json_doubles(raw)
              << ",\"bounds_sinh_half\":" << json_doubles(sinh_in)
              << ",\"reduce\":" << (q.reduce_symmetry ? "true" : "false") << ",\"forest\":"
              << (o.forest_path.empty() && !forest
                      ? "null"
                      : "\"" + (o.forest_path.empty() ? *cb::forest_env_path() : o.forest_path) +
                            "\"")
              << ",\"truncate\":" << o.truncate << "},\"n\":" << n
              << ",\"value\":" << fmt_g15(r.value) << ",\"value_truncated\":\""
              << fmt_truncated(r.value, o.truncate) << "\",\"witness_tree_index\":"
              << r.witness_tree_index << ",\"witness_tree_code\":"
              << json_ints(r.witness_code.entries) << ",\"witness_assignment\":"
              << json_ints(r.witness_assignment) << ",\"evaluations\":" << r.evaluations << "}\n";
  } else if (o.format == "csv") {
    std::cout << "n,convention,values,value,value_truncated,witness_tree_index,witness_tree_code,"
                 "witness_assignment,evaluations\n";
    std::cout << n << ',' << o.convention << ',' << join(raw) << ',' << fmt_g15(r.value) << ','
              << fmt_truncated(r.value, o.truncate) << ',' << r.witness_tree_index << ','
              << code_cell(r.witness_code.entries) << ',' << join(r.witness_assignment) << ','
              << r.evaluations << "\n";
  } else {
    std::cout << "n:            " << n << "\n"
              << "convention:   " << o.convention << "\n"
              << "bounds:       " << join(sinh_in) << " (sinh-half)\n"
              << "value:        " << fmt_g15(r.value) << "\n"
              << "truncated:    " << fmt_truncated(r.value, o.truncate) << "\n"
              << "witness tree: index " << r.witness_tree_index << ", code "
              << code_str(r.witness_code.entries) << "\n"
              << "assignment:   " << join(r.witness_assignment) << "\n"
              << "evaluations:  " << r.evaluations << "\n";
  }
  std::cerr << "elapsed: " << fmt_g15(elapsed) << " ms\n";
  return 0;
}

int run_table(int n_min, int n_max, int cap, double value, const CommonOpts& o) {
  if (n_min < 4 || n_min > n_max || n_max > cap) {
    std::cerr << "error: need 4 <= n-min <= n-max <= " << cap << " (raise with --cap)\n";
    return kExitUsage;
  }
  auto d = convert_inputs({value}, o.convention).front();
  auto forest = resolve_forest(o);

  Timer timer;
  if (o.format == "csv")
    std::cout << "n,flat_bound,bound,flat_bound_full,bound_full,witness_tree_index,witness_tree_"
                 "code\n";
  else
    std::cout << "n  flat_bound  bound  witness_tree\n";
  for (int n = n_min; n <= n_max; ++n) {
    cb::BoundQuery q{std::vector<cb::HalfSinhLength>(n, d), !o.no_reduce,
                     forest ? &*forest : nullptr, o.jobs};
    cb::BoundResult r = cb::minimize(q);
    const double flat = cb::flat_bound(n, d);
    if (o.format == "csv")
      std::cout << n << ',' << fmt_truncated(flat, o.truncate) << ','
                << fmt_truncated(r.value, o.truncate) << ',' << fmt_g15(flat) << ','
                << fmt_g15(r.value) << ',' << r.witness_tree_index << ','
                << code_cell(r.witness_code.entries) << "\n";
    else
      std::cout << n << "  " << fmt_truncated(flat, o.truncate) << "  "
                << fmt_truncated(r.value, o.truncate) << "  " << code_str(r.witness_code.entries)
                << "\n";
  }
  std::cerr << "elapsed: " << fmt_g15(timer.ms()) << " ms\n";
  return 0;
}

// reference closed form for bounds (1,1,1,X), sinh-half convention
double closed_form_111x(double x) {
  if (x <= 1.0)
    return 2 * std::asin(x / std::sqrt(2 * (x * x + 1))) +
           2 * std::acos((5 + x * x) / (4 * std::sqrt(x * x + 2)));
  if (x <= std::sqrt(3.0))
    return 2 * std::asin(0.5) + 2 * std::acos((5 + x * x) / (2 * std::sqrt(6 * (x * x + 1))));
  return 2 * std::asin(0.5) + 2 * std::asin(1.0 / std::sqrt(3.0));
}

int run_sweep(const std::vector<double>& fixed, double from, double to, int steps,
              const CommonOpts& o) {
  if (!(from > 0.0) || !(to >= from) || steps < 1) {
    std::cerr << "error: need 0 < --from <= --to and --steps >= 1\n";
    return kExitUsage;
  }
  auto fixed_hs = convert_inputs(fixed, o.convention);
  auto forest = resolve_forest(o);
  const bool reference = o.convention == "sinh-half" && fixed.size() == 3 &&
                         fixed[0] == 1.0 && fixed[1] == 1.0 && fixed[2] == 1.0;

  Timer timer;
  std::cout << "x,value,value_truncated,witness_tree_index,witness_tree_code,closed_form,abs_diff\n";
  for (int i = 0; i < steps; ++i) {
    const double x = (steps == 1) ? from : from + i * (to - from) / (steps - 1);
    std::vector<double> raw(fixed);
    raw.push_back(x);
    auto bounds = convert_inputs(raw, o.convention);
    cb::BoundQuery q{std::move(bounds), !o.no_reduce, forest ? &*forest : nullptr, o.jobs};
    cb::BoundResult r = cb::minimize(q);
    std::cout << fmt_g15(x) << ',' << fmt_g15(r.value) << ',' << fmt_truncated(r.value, o.truncate)
              << ',' << r.witness_tree_index << ',' << code_cell(r.witness_code.entries) << ',';
    if (reference) {
      const double f = closed_form_111x(x);
      std::cout << fmt_g15(f) << ',' << fmt_g15(std::fabs(r.value - f));
    } else {
      std::cout << ',';
    }
    std::cout << "\n";
  }
  std::cerr << "elapsed: " << fmt_g15(timer.ms()) << " ms\n";
  return 0;
}

void render_ascii(const cb::RootedTree& t, int v, const std::string& prefix, bool last,
                  std::ostream& out) {
  out << prefix;
  if (v != t.root()) out << (last ? "`- " : "+- ");
  out << 'v' << v;
  if (v == t.root()) out << " (root)";
  if (t.frontier_slots(v) > 0) out << "  [" << t.frontier_slots(v) << " frontier]";
  out << "\n";
  const auto& kids = t.children(v);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    std::string next = prefix + (v == t.root() ? "" : (last ? "   " : "|  "));
    render_ascii(t, kids[i], next, i + 1 == kids.size(), out);
  }
}

int run_trees(int n, bool count_only, bool list, const std::string& format,
              const CommonOpts& o) {
  if (n < 3) {
    std::cerr << "error: need --n >= 3\n";
    return kExitUsage;
  }
  auto forest = resolve_forest(o);
  std::vector<cb::TreeCode> codes;
  if (forest) {
    codes = forest->trees_for_n(n);
  } else {
    for (auto& c : cb::enumerate_trees(n)) codes.push_back(std::move(c.entries));
  }
  if (count_only && !list) {
    std::cout << codes.size() << "\n";
    return 0;
  }
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (format == "ascii") {
      std::cout << "tree " << i << ": " << code_str(codes[i]) << "\n";
      render_ascii(cb::RootedTree(codes[i]), static_cast<int>(codes[i].size()), "  ", true,
                   std::cout);
    } else {
      std::cout << code_str(codes[i]) << "\n";
    }
  }
  return 0;
}

int run_forest_validate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return 1;
  }
  try {
    cb::ForestLibrary lib = cb::parse_forest(in);
    std::size_t total = 0;
    for (const auto& [k, codes] : lib.per_k) {
      std::cout << "k " << k << " (n = " << k + 3 << "): " << codes.size() << " codes\n";
      total += codes.size();
    }
    std::cout << "ok: " << lib.per_k.size() << " sections, " << total << " codes\n";
    return 0;
  } catch (const cb::ParseError& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return 1;
  }
}

int run_forest_generate(int max_n, const std::string& out_path, const std::string& format) {
  if (max_n < 3) {
    std::cerr << "error: need --max-n >= 3\n";
    return kExitUsage;
  }
  cb::ForestLibrary lib = cb::native_forest(max_n);
  const std::string text = format == "modern" ? cb::write_forest_modern(lib, max_n - 3)
                                              : cb::write_forest(lib, max_n - 3);
  if (out_path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return 1;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Area lower bounds for compact centered dual two-cells"};
  app.require_subcommand(1);

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "minimal area bound for one tuple of edge bounds");
  std::vector<double> bound_values;
  CommonOpts bound_opts;
  bound_cmd->add_option("values", bound_values, "edge length bounds (>= 3 values)")->required();
  add_common(bound_cmd, bound_opts);

  // table
  auto* table_cmd = app.add_subcommand("table", "flat vs minimal bounds for constant tuples");
  int n_min = 4, n_max = 9, cap = 9;
  double table_value = 1.0;
  CommonOpts table_opts;
  table_cmd->add_option("--n-min", n_min, "first n");
  table_cmd->add_option("--n-max", n_max, "last n");
  table_cmd->add_option("--cap", cap, "cost guard on n-max");
  table_cmd->add_option("--value", table_value, "the constant bound value");
  add_common(table_cmd, table_opts);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "bound for (fixed..., x) over a grid of x (CSV)");
  std::vector<double> sweep_fixed{1.0, 1.0, 1.0};
  double sweep_from = 0.05, sweep_to = 3.0;
  int sweep_steps = 60;
  CommonOpts sweep_opts;
  sweep_cmd->add_option("--fixed", sweep_fixed, "fixed entries")->delimiter(',');
  sweep_cmd->add_option("--from", sweep_from, "first x");
  sweep_cmd->add_option("--to", sweep_to, "last x");
  sweep_cmd->add_option("--steps", sweep_steps, "number of grid points");
  add_common(sweep_cmd, sweep_opts, /*with_format=*/false);

  // trees
  auto* trees_cmd = app.add_subcommand("trees", "the tree catalog for one n");
  int trees_n = 0;
  bool trees_count = false, trees_list = false;
  std::string trees_format = "code";
  CommonOpts trees_opts;
  trees_cmd->add_option("--n", trees_n, "frontier size")->required();
  trees_cmd->add_flag("--count", trees_count, "print the number of trees");
  trees_cmd->add_flag("--list", trees_list, "print one code per line");
  trees_cmd->add_option("--format", trees_format, "code or ascii")
      ->check(CLI::IsMember({"code", "ascii"}));
  trees_cmd->add_option("--forest", trees_opts.forest_path, "tree catalog file");

  // forest
  auto* forest_cmd = app.add_subcommand("forest", "catalog file utilities");
  forest_cmd->require_subcommand(1);
  auto* validate_cmd = forest_cmd->add_subcommand("validate", "check a catalog file");
  std::string validate_path;
  validate_cmd->add_option("path", validate_path, "catalog file")->required();
  auto* generate_cmd = forest_cmd->add_subcommand("generate", "write a catalog file");
  int gen_max_n = 9;
  std::string gen_out, gen_format = "classic";
  generate_cmd->add_option("--max-n", gen_max_n, "largest frontier size included");
  generate_cmd->add_option("-o,--output", gen_out, "output path ('-' for stdout)")->required();
  generate_cmd->add_option("--format", gen_format, "classic or modern")
      ->check(CLI::IsMember({"classic", "modern"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (bound_cmd->parsed()) {
      if (bound_values.size() < 3) {
        std::cerr << "error: need at least 3 values\n";
        return kExitUsage;
      }
      return run_bound(bound_values, bound_opts);
    }
    if (table_cmd->parsed()) return run_table(n_min, n_max, cap, table_value, table_opts);
    if (sweep_cmd->parsed())
      return run_sweep(sweep_fixed, sweep_from, sweep_to, sweep_steps, sweep_opts);
    if (trees_cmd->parsed())
      return run_trees(trees_n, trees_count, trees_list, trees_format, trees_opts);
    if (validate_cmd->parsed()) return run_forest_validate(validate_path);
    if (generate_cmd->parsed()) return run_forest_generate(gen_max_n, gen_out, gen_format);
    std::cerr << "error: no subcommand\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cb::InvalidArity& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cb::MissingCatalog& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCatalog;
  } catch (const cb::ParseError& e) {
    std::cerr << "error: catalog unusable: " << e.what() << "\n";
    return kExitCatalog;
  } catch (const cb::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

#include "fracspec/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fracspec/errors.hpp"

namespace fracspec {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"grid", {"dimension", "half_length", "points", "order"}},
      {"operator", {"beta", "potential", "depth", "width", "radius", "tail_tol"}},
      {"solve", {"k", "tol", "max_iter", "block_size", "seed"}},
      {"verify",
       {"checks", "implication_tol", "t_list", "dilation_half_length", "dilation_points",
        "probe_width", "max_wrapped_fraction", "path_samples", "quadratic_cap", "dense_cap",
        "slope_tol", "limit_gap_tol", "positivity_undershoot", "part_mass_tol", "simplicity_gap",
        "orthogonality_tol", "decomposition_tol", "path_slack"}},
      {"sweep", {"parameter", "values"}},
      {"output", {"directory", "formats"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// 1-based line of `key` inside `[section]`, or 0 when not found.
std::size_t find_line(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  std::string current;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      current = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (current == section && trim(std::string_view(t).substr(0, eq)) == key) return number;
    if (section.empty() && current.empty() && trim(std::string_view(t).substr(0, eq)) == key) {
      return number;
    }
  }
  return 0;
}

std::size_t find_section_line(const std::string& text, const std::string& section) {
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line) == "[" + section + "]") return number;
  }
  return 0;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, const std::string& text) : tree_(tree), text_(text) {}

  bool has(const std::string& section, const std::string& key) const {
    const auto s = tree_.get_child_optional(section);
    return s && s->find(key) != s->not_found();
  }

  std::string raw(const std::string& section, const std::string& key) const {
    return trim(tree_.get_child(section).get<std::string>(key));
  }

  template <class T>
  void number(const std::string& section, const std::string& key, T& out) const {
    if (!has(section, key)) return;
    out = parse_number<T>(section, key, raw(section, key));
  }

  void string(const std::string& section, const std::string& key, std::string& out) const {
    if (has(section, key)) out = raw(section, key);
  }

  std::vector<std::string> strings(const std::string& section, const std::string& key) const {
    std::vector<std::string> out;
    std::stringstream in(raw(section, key));
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  std::vector<double> numbers(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : strings(section, key)) {
      out.push_back(parse_number<double>(section, key, item));
    }
    return out;
  }

 private:
  template <class T>
  T parse_number(const std::string& section, const std::string& key, const std::string& s) const {
    T value{};
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || s.empty()) {
      throw ParseError(find_line(text_, section, key),
                       "[" + section + "] " + key + ": cannot read '" + s + "' as a number");
    }
    return value;
  }

  const pt::ptree& tree_;
  const std::string& text_;
};

void check_schema(const pt::ptree& tree, const std::string& text) {
  const auto& keys = schema();
  for (const auto& [name, child] : tree) {
    if (child.empty() && !child.data().empty()) {
      throw ParseError(find_line(text, "", name), "key '" + name + "' outside any section");
    }
    const auto section = keys.find(name);
    if (section == keys.end()) {
      throw ParseError(find_section_line(text, name), "unknown section [" + name + "]");
    }
    for (const auto& [key, value] : child) {
      if (!section->second.contains(key)) {
        throw ParseError(find_line(text, name, key), "unknown key '" + key + "' in [" + name + "]");
      }
    }
  }
}

bool even_at_least(std::size_t n, std::size_t floor) { return n >= floor && n % 2 == 0; }

void validate_potential(const OperatorConfig& op, double half_length,
                        std::vector<std::string>& problems, const std::string& where) {
  if (const auto* w = std::get_if<GaussianWell>(&op.potential)) {
    if (!(w->depth > 0.0 && w->depth <= 1.0)) problems.push_back("operator.depth must lie in (0, 1]");
    if (!(w->width > 0.0)) problems.push_back("operator.width must be positive");
    if (w->width > 0.0 && w->depth * std::exp(-(half_length * half_length) / (w->width * w->width)) >
                              op.tail_tol) {
      problems.push_back("gaussian well does not decay within tail_tol inside the box" + where);
    }
  } else if (const auto* b = std::get_if<CompactBump>(&op.potential)) {
    if (!(b->depth > 0.0 && b->depth <= 1.0)) problems.push_back("operator.depth must lie in (0, 1]");
    if (!(b->radius > 0.0 && b->radius < half_length / 2.0)) {
      problems.push_back("operator.radius must lie in (0, L/2)" + where);
    }
  }
}

void validate_grid(int dimension, double half_length, std::size_t points, double order,
                   std::vector<std::string>& problems, const std::string& where) {
  if (dimension != 1 && dimension != 2) problems.push_back("grid.dimension must be 1 or 2" + where);
  if (!(order > 0.0 && order < 1.0)) problems.push_back("grid.order must lie in (0, 1)" + where);
  if (!(dimension > 2.0 * order)) problems.push_back("N > 2s violated" + where);
  if (!(half_length > 0.0)) problems.push_back("grid.half_length must be positive" + where);
  if (!even_at_least(points, 4)) problems.push_back("grid.points must be even and >= 4" + where);
}

}  // namespace

const std::vector<std::string>& all_check_names() {
  static const std::vector<std::string> names = {
      "potential",     "lambda_bound", "positivity", "simplicity",  "nodal",       "orthogonality",
      "decomposition_identity", "minimax_path", "dilation_limit",  "pohozaev",    "implication", "oracle"};
  return names;
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.line(), e.message());
  }
  check_schema(tree, text);
  const Reader r(tree, text);

  RunConfig c;
  r.number("grid", "dimension", c.grid.dimension);
  r.number("grid", "half_length", c.grid.half_length);
  r.number("grid", "points", c.grid.points);
  r.number("grid", "order", c.grid.order);

  std::vector<std::string> problems;
  r.number("operator", "beta", c.op.beta);
  r.number("operator", "tail_tol", c.op.tail_tol);
  std::string kind = "gaussian_well";
  r.string("operator", "potential", kind);
  std::set<std::string> allowed;
  if (kind == "gaussian_well") {
    GaussianWell w;
    r.number("operator", "depth", w.depth);
    r.number("operator", "width", w.width);
    c.op.potential = w;
    allowed = {"depth", "width"};
  } else if (kind == "compact_bump") {
    CompactBump b;
    r.number("operator", "radius", b.radius);
    r.number("operator", "depth", b.depth);
    c.op.potential = b;
    allowed = {"radius", "depth"};
  } else if (kind == "constant_one") {
    c.op.potential = ConstantOne{};
  } else {
    problems.push_back("operator.potential must be gaussian_well, compact_bump or constant_one, got '" +
                       kind + "'");
  }
  for (const std::string key : {"depth", "width", "radius"}) {
    if (r.has("operator", key) && !allowed.contains(key)) {
      problems.push_back("operator." + key + " does not apply to potential " + kind);
    }
  }

  r.number("solve", "k", c.solve.k);
  r.number("solve", "tol", c.solve.tol);
  r.number("solve", "max_iter", c.solve.max_iter);
  r.number("solve", "block_size", c.solve.block_size);
  r.number("solve", "seed", c.solve.seed);

  auto& v = c.verify;
  v.checks = r.has("verify", "checks") ? r.strings("verify", "checks") : all_check_names();
  r.number("verify", "implication_tol", v.implication_tol);
  if (r.has("verify", "t_list")) v.t_list = r.numbers("verify", "t_list");
  v.dilation_half_length = c.grid.dimension == 2 ? 400.0 : 40000.0;
  v.dilation_points = c.grid.dimension == 2 ? 512 : 65536;
  r.number("verify", "dilation_half_length", v.dilation_half_length);
  r.number("verify", "dilation_points", v.dilation_points);
  r.number("verify", "probe_width", v.probe_width);
  r.number("verify", "max_wrapped_fraction", v.max_wrapped_fraction);
  r.number("verify", "path_samples", v.path_samples);
  r.number("verify", "quadratic_cap", v.quadratic_cap);
  r.number("verify", "dense_cap", v.dense_cap);
  auto& t = v.tolerances;
  r.number("verify", "slope_tol", t.slope);
  r.number("verify", "limit_gap_tol", t.limit_gap);
  r.number("verify", "positivity_undershoot", t.undershoot);
  r.number("verify", "part_mass_tol", t.part_mass);
  r.number("verify", "simplicity_gap", t.simplicity_gap);
  r.number("verify", "orthogonality_tol", t.orthogonality);
  r.number("verify", "decomposition_tol", t.decomposition);
  r.number("verify", "path_slack", t.path_slack);

  if (tree.get_child_optional("sweep")) {
    r.string("sweep", "parameter", c.sweep.parameter);
    if (c.sweep.parameter.empty()) problems.push_back("sweep.parameter is required in [sweep]");
    if (r.has("sweep", "values")) c.sweep.values = r.numbers("sweep", "values");
  }

  if (r.has("output", "directory")) c.output.directory = r.raw("output", "directory");
  if (r.has("output", "formats")) c.output.formats = r.strings("output", "formats");

  try {
    validate_config(c);
  } catch (const ValidationError& e) {
    problems.insert(problems.end(), e.problems.begin(), e.problems.end());
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate_config(const RunConfig& c) {
  std::vector<std::string> problems;
  const auto& g = c.grid;
  validate_grid(g.dimension, g.half_length, g.points, g.order, problems, "");

  if (!(c.op.beta > 0.0)) problems.push_back("operator.beta must be positive");
  if (!(c.op.tail_tol > 0.0)) problems.push_back("operator.tail_tol must be positive");
  if (std::holds_alternative<Tabulated>(c.op.potential)) {
    problems.push_back("tabulated potentials cannot be configured from a file");
  }
  validate_potential(c.op, g.half_length, problems, "");

  const auto& s = c.solve;
  if (s.k < 1) problems.push_back("solve.k must be at least 1");
  if (!(s.tol > 0.0)) problems.push_back("solve.tol must be positive");
  if (s.max_iter < 1) problems.push_back("solve.max_iter must be at least 1");
  if (s.block_size != 0 && s.block_size < s.k) problems.push_back("solve.block_size must be 0 or >= k");
  if (g.dimension == 1 || g.dimension == 2) {
    const double unknowns = std::pow(static_cast<double>(g.points), g.dimension);
    if (static_cast<double>(s.k) > 0.25 * unknowns) {
      problems.push_back("solve.k exceeds a quarter of the grid unknowns");
    }
  }

  const auto& v = c.verify;
  for (const auto& name : v.checks) {
    const auto& known = all_check_names();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      problems.push_back("verify.checks: unknown check '" + name + "'");
    }
  }
  if (!(v.implication_tol > 0.0)) problems.push_back("verify.implication_tol must be positive");
  if (!v.t_list.empty()) {
    if (v.t_list.size() < 2) problems.push_back("verify.t_list needs at least two values");
    for (std::size_t i = 0; i < v.t_list.size(); ++i) {
      if (!(v.t_list[i] > 0.0 && v.t_list[i] <= 1.0)) {
        problems.push_back("verify.t_list values must lie in (0, 1]");
        break;
      }
      if (i > 0 && !(v.t_list[i] < v.t_list[i - 1])) {
        problems.push_back("verify.t_list must be strictly descending");
        break;
      }
    }
  }
  validate_grid(g.dimension, v.dilation_half_length, v.dilation_points, g.order, problems,
                " (dilation grid)");
  validate_potential(c.op, v.dilation_half_length, problems, " (dilation grid)");
  if (!(v.probe_width > 0.0)) problems.push_back("verify.probe_width must be positive");
  if (!(v.max_wrapped_fraction > 0.0 && v.max_wrapped_fraction < 1.0)) {
    problems.push_back("verify.max_wrapped_fraction must lie in (0, 1)");
  }
  if (v.path_samples < 2) problems.push_back("verify.path_samples must be at least 2");
  const auto& t = v.tolerances;
  for (double x : {t.slope, t.limit_gap, t.undershoot, t.part_mass, t.simplicity_gap,
                   t.orthogonality, t.decomposition, t.path_slack}) {
    if (!(x > 0.0)) {
      problems.push_back("verify tolerances must be positive");
      break;
    }
  }

  const auto& sw = c.sweep;
  if (sw.present()) {
    if (sw.parameter != "beta" && sw.parameter != "s" && sw.parameter != "L") {
      problems.push_back("sweep.parameter must be beta, s or L");
    }
    if (sw.values.empty()) problems.push_back("sweep.values must list at least one value");
    for (double x : sw.values) {
      const std::string where = " (sweep value " + std::to_string(x) + ")";
      if (sw.parameter == "beta" && !(x > 0.0)) problems.push_back("operator.beta must be positive" + where);
      if (sw.parameter == "s") validate_grid(g.dimension, g.half_length, g.points, x, problems, where);
      if (sw.parameter == "L") {
        const double n = std::round(x * static_cast<double>(g.points) / (2.0 * g.half_length)) * 2.0;
        validate_grid(g.dimension, x, n > 0.0 ? static_cast<std::size_t>(n) : 0, g.order, problems,
                      where);
        validate_potential(c.op, x, problems, where);
      }
    }
  }

  if (c.output.formats.empty()) problems.push_back("output.formats must not be empty");
  for (const auto& f : c.output.formats) {
    if (f != "json" && f != "csv") problems.push_back("output.formats: unknown format '" + f + "'");
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

nlohmann::json canonical_json(const RunConfig& c) {
  using nlohmann::json;
  json potential = {{"kind", descriptor_name(c.op.potential)}};
  if (const auto* w = std::get_if<GaussianWell>(&c.op.potential)) {
    potential["depth"] = w->depth;
    potential["width"] = w->width;
  } else if (const auto* b = std::get_if<CompactBump>(&c.op.potential)) {
    potential["radius"] = b->radius;
    potential["depth"] = b->depth;
  }
  const auto& t = c.verify.tolerances;
  json out = {
      {"grid",
       {{"dimension", c.grid.dimension},
        {"half_length", c.grid.half_length},
        {"points", c.grid.points},
        {"order", c.grid.order}}},
      {"operator", {{"beta", c.op.beta}, {"potential", potential}, {"tail_tol", c.op.tail_tol}}},
      {"solve",
       {{"k", c.solve.k},
        {"tol", c.solve.tol},
        {"max_iter", c.solve.max_iter},
        {"block_size", c.solve.block_size},
        {"seed", c.solve.seed}}},
      {"verify",
       {{"checks", c.verify.checks},
        {"implication_tol", c.verify.implication_tol},
        {"t_list", c.verify.t_list},
        {"dilation_half_length", c.verify.dilation_half_length},
        {"dilation_points", c.verify.dilation_points},
        {"probe_width", c.verify.probe_width},
        {"max_wrapped_fraction", c.verify.max_wrapped_fraction},
        {"path_samples", c.verify.path_samples},
        {"quadratic_cap", c.verify.quadratic_cap},
        {"dense_cap", c.verify.dense_cap},
        {"tolerances",
         {{"slope", t.slope},
          {"limit_gap", t.limit_gap},
          {"undershoot", t.undershoot},
          {"part_mass", t.part_mass},
          {"simplicity_gap", t.simplicity_gap},
          {"orthogonality", t.orthogonality},
          {"decomposition", t.decomposition},
          {"path_slack", t.path_slack}}}}},
  };
  if (c.sweep.present()) {
    out["sweep"] = {{"parameter", c.sweep.parameter}, {"values", c.sweep.values}};
  }
  return out;
}

std::uint64_t fingerprint(const RunConfig& config) {
  const std::string text = canonical_json(config).dump();
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string fingerprint_hex(const RunConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint(config)));
  return buf;
}

}  // namespace fracspec

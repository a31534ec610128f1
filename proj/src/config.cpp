#include "degenlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace degenlab {

namespace {

// ---------------------------------------------------------------------------
// Parsing: sections of `key = value` lines; values are numbers, bools,
// quoted/bare strings, lists [...] and inline tables {...} (single line).
// ---------------------------------------------------------------------------

struct Value {
  enum class Kind { Num, Str, Bool, List, Table };
  Kind kind = Kind::Num;
  double num = 0.0;
  std::string str;
  bool flag = false;
  std::vector<Value> items;
  std::vector<std::pair<std::string, Value>> fields;
  int line = 0, col = 0;
};

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;
  int line;

  int col() const { return static_cast<int>(pos) + 1; }
  bool done() const { return pos >= s.size(); }
  char peek() const { return done() ? '\0' : s[pos]; }
  void skip_ws() {
    while (!done() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, col(), msg); }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

std::string parse_key(Cursor& c) {
  c.skip_ws();
  if (!ident_start(c.peek())) c.fail("expected a key");
  std::size_t start = c.pos;
  while (!c.done() && ident_char(c.peek())) ++c.pos;
  return c.s.substr(start, c.pos - start);
}

Value parse_value(Cursor& c);

Value parse_list(Cursor& c) {
  Value v;
  v.kind = Value::Kind::List;
  v.line = c.line;
  v.col = c.col();
  ++c.pos;  // '['
  c.skip_ws();
  if (c.peek() == ']') {
    ++c.pos;
    return v;
  }
  while (true) {
    v.items.push_back(parse_value(c));
    c.skip_ws();
    if (c.peek() == ',') {
      ++c.pos;
      continue;
    }
    if (c.peek() == ']') {
      ++c.pos;
      return v;
    }
    c.fail("expected ',' or ']' in list");
  }
}

Value parse_table(Cursor& c) {
  Value v;
  v.kind = Value::Kind::Table;
  v.line = c.line;
  v.col = c.col();
  ++c.pos;  // '{'
  c.skip_ws();
  if (c.peek() == '}') {
    ++c.pos;
    return v;
  }
  while (true) {
    std::string key = parse_key(c);
    c.skip_ws();
    if (c.peek() != '=') c.fail("expected '=' in inline table");
    ++c.pos;
    v.fields.emplace_back(std::move(key), parse_value(c));
    c.skip_ws();
    if (c.peek() == ',') {
      ++c.pos;
      c.skip_ws();
      continue;
    }
    if (c.peek() == '}') {
      ++c.pos;
      return v;
    }
    c.fail("expected ',' or '}' in inline table");
  }
}

Value parse_value(Cursor& c) {
  c.skip_ws();
  Value v;
  v.line = c.line;
  v.col = c.col();
  const char ch = c.peek();
  if (ch == '[') return parse_list(c);
  if (ch == '{') return parse_table(c);
  if (ch == '"') {
    ++c.pos;
    std::size_t start = c.pos;
    while (!c.done() && c.peek() != '"') ++c.pos;
    if (c.done()) c.fail("unterminated string");
    v.kind = Value::Kind::Str;
    v.str = c.s.substr(start, c.pos - start);
    ++c.pos;
    return v;
  }
  if (ident_start(ch)) {
    std::size_t start = c.pos;
    while (!c.done() && ident_char(c.peek())) ++c.pos;
    std::string word = c.s.substr(start, c.pos - start);
    if (word == "true" || word == "false") {
      v.kind = Value::Kind::Bool;
      v.flag = (word == "true");
      return v;
    }
    // Bare words starting with inf/nan are numbers to strtod; reject those
    // via the number path only, so words stay words here.
    v.kind = Value::Kind::Str;
    v.str = std::move(word);
    return v;
  }
  // Number.
  const char* begin = c.s.c_str() + c.pos;
  char* end = nullptr;
  const double num = std::strtod(begin, &end);
  if (end == begin) c.fail("expected a value");
  v.kind = Value::Kind::Num;
  v.num = num;
  c.pos += static_cast<std::size_t>(end - begin);
  return v;
}

struct Document {
  // section -> ordered (key, value); duplicate keys rejected at insert.
  std::map<std::string, std::vector<std::pair<std::string, Value>>> sections;
};

Document parse_document(const std::string& text) {
  Document doc;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  static const std::set<std::string> kSections{"domain", "operator", "solver", "experiment"};
  while (std::getline(in, raw)) {
    ++lineno;
    // Strip comments (no # inside strings is ever emitted; keep the scan
    // quote-aware anyway for hand-written configs).
    bool quoted = false;
    for (std::size_t k = 0; k < raw.size(); ++k) {
      if (raw[k] == '"') quoted = !quoted;
      if (raw[k] == '#' && !quoted) {
        raw.resize(k);
        break;
      }
    }
    Cursor c{raw, 0, lineno};
    c.skip_ws();
    if (c.done()) continue;
    if (c.peek() == '[') {
      ++c.pos;
      std::string name = parse_key(c);
      c.skip_ws();
      if (c.peek() != ']') c.fail("expected ']' after section name");
      ++c.pos;
      c.skip_ws();
      if (!c.done()) c.fail("trailing characters after section header");
      if (!kSections.count(name))
        throw ParseError(lineno, 2,
                         "unknown section [" + name +
                             "]; expected domain, operator, solver or experiment");
      section = name;
      continue;
    }
    std::string key = parse_key(c);
    c.skip_ws();
    if (c.peek() != '=') c.fail("expected '=' after key '" + key + "'");
    ++c.pos;
    Value v = parse_value(c);
    c.skip_ws();
    if (!c.done()) c.fail("trailing characters after value");
    if (section.empty())
      throw ParseError(lineno, 1, "key '" + key + "' appears before any [section] header");
    auto& entries = doc.sections[section];
    for (const auto& [k, unused] : entries)
      if (k == key)
        throw ParseError(lineno, 1, "duplicate key '" + key + "' in [" + section + "]");
    entries.emplace_back(std::move(key), std::move(v));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Shaping: typed access with unknown-key detection.
// ---------------------------------------------------------------------------

[[noreturn]] void bad_value(const Value& v, const std::string& what) {
  throw ValidationError("line " + std::to_string(v.line) + ": expected " + what);
}

double as_num(const Value& v, const char* what) {
  if (v.kind != Value::Kind::Num) bad_value(v, std::string("a number for ") + what);
  if (!std::isfinite(v.num)) bad_value(v, std::string("a finite number for ") + what);
  return v.num;
}

long as_int(const Value& v, const char* what) {
  const double d = as_num(v, what);
  if (d != std::floor(d) || std::abs(d) > 9e15)
    bad_value(v, std::string("an integer for ") + what);
  return static_cast<long>(d);
}

bool as_bool(const Value& v, const char* what) {
  if (v.kind != Value::Kind::Bool) bad_value(v, std::string("true/false for ") + what);
  return v.flag;
}

std::string as_str(const Value& v, const char* what) {
  if (v.kind != Value::Kind::Str) bad_value(v, std::string("a string for ") + what);
  return v.str;
}

std::vector<double> as_num_list(const Value& v, const char* what) {
  if (v.kind != Value::Kind::List) bad_value(v, std::string("a list for ") + what);
  std::vector<double> out;
  out.reserve(v.items.size());
  for (const Value& it : v.items) out.push_back(as_num(it, what));
  return out;
}

class Section {
public:
  Section(const Document& doc, const std::string& name) : name_(name) {
    auto it = doc.sections.find(name);
    if (it != doc.sections.end()) entries_ = &it->second;
  }

  const Value* find(const std::string& key) {
    if (entries_ == nullptr) return nullptr;
    for (const auto& [k, v] : *entries_)
      if (k == key) {
        used_.insert(key);
        return &v;
      }
    return nullptr;
  }

  void finish() const {
    if (entries_ == nullptr) return;
    for (const auto& [k, v] : *entries_)
      if (!used_.count(k))
        throw ValidationError("unknown key '" + k + "' in [" + name_ + "] (line " +
                              std::to_string(v.line) + ")");
  }

private:
  std::string name_;
  const std::vector<std::pair<std::string, Value>>* entries_ = nullptr;
  std::set<std::string> used_;
};

const std::map<std::string, Experiment>& experiment_names() {
  static const std::map<std::string, Experiment> m{
      {"collapse", Experiment::Collapse},
      {"subcritical", Experiment::Subcritical},
      {"threshold_sweep", Experiment::ThresholdSweep},
      {"implicit_dirichlet", Experiment::ImplicitDirichlet},
      {"dynamic_bc", Experiment::DynamicBC},
      {"f3_table", Experiment::F3Table},
      {"holder_estimate", Experiment::HolderEstimate},
      {"layer_mode_compare", Experiment::LayerModeCompare},
      {"condition_constants", Experiment::ConditionConstants},
  };
  return m;
}

void validate(const Scenario& s) {
  if (s.grids.empty()) throw ValidationError("at least one grid size is required");
  for (std::size_t k = 0; k < s.grids.size(); ++k) {
    if (s.grids[k] < 2) throw ValidationError("grid sizes must be >= 2");
    if (k > 0 && s.grids[k] <= s.grids[k - 1])
      throw ValidationError("grid sizes must be strictly increasing");
  }
  if (s.layer_mode != "drop" && s.layer_mode != "one_sided" && s.layer_mode != "ghost")
    throw ValidationError("layer_mode must be drop, one_sided or ghost (got '" + s.layer_mode +
                          "')");
  if (!(s.solver.tol > 0.0)) throw ValidationError("tol must be > 0");
  if (s.solver.max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (s.solver.dt_max < 0.0) throw ValidationError("dt_max must be >= 0");
  if (s.init.kind != "zero" && s.init.kind != "sin" && s.init.kind != "constant" &&
      s.init.kind != "linear" && s.init.kind != "closed_form")
    throw ValidationError("init kind must be zero, sin, constant, linear or closed_form (got '" +
                          s.init.kind + "')");
  if (!s.anchor.empty() && s.anchor.size() > 2)
    throw ValidationError("anchor takes at most two coordinates");
  if (s.trace_depth < 1) throw ValidationError("trace_depth must be >= 1");

  // Build the runtime objects once so parameter errors surface as config
  // errors here, not mid-run.
  try {
    const Domain dom = scenario_domain(s);
    (void)scenario_operator(s);
    if (s.experiment == Experiment::ThresholdSweep)
      for (double mu : s.sweep_mus) (void)scenario_operator_with_mu(s, mu);
    (void)dom;
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }

  if (s.init.kind == "closed_form") {
    try {
      (void)make_closed_form(s.init.m, s.init.mu);
    } catch (const Error& e) {
      throw ValidationError(e.what());
    }
  }
  if (s.experiment == Experiment::Subcritical) {
    if (s.op.family != "first_order_hj")
      throw ValidationError("subcritical experiment requires the first_order_hj family");
    if (s.op.mu >= s.op.m)
      throw ValidationError("closed form requires mu < m (got mu = " + std::to_string(s.op.mu) +
                            ", m = " + std::to_string(s.op.m) + ")");
  }
  if (s.experiment == Experiment::DynamicBC) {
    if (!(s.solver.T > 0.0)) throw ValidationError("T must be > 0");
    for (double t : s.solver.snapshot_times)
      if (t < 0.0 || t > s.solver.T)
        throw ValidationError("snapshot time " + std::to_string(t) + " outside [0, T]");
    if (!(s.window_t0 < s.window_t1))
      throw ValidationError("fit window requires t0 < t1");
  }
  if (s.experiment == Experiment::F3Table) {
    if (!s.expect.empty() && s.expect != "supports" && s.expect != "refutes")
      throw ValidationError("expect must be supports or refutes for f3_table");
    for (double g : s.gammas)
      if (!(g > 0.0)) throw ValidationError("gammas must be > 0");
    for (double d : s.deltas)
      if (!(d > 0.0)) throw ValidationError("deltas must be > 0");
  }
  if (s.experiment == Experiment::LayerModeCompare) {
    if (!s.expect.empty() && s.expect != "agree" && s.expect != "differ")
      throw ValidationError("expect must be agree or differ for layer_mode_compare");
  }
  if (s.experiment == Experiment::HolderEstimate) {
    if (!(s.holder_d_max > 0.0)) throw ValidationError("holder d_max must be > 0");
  }
  if (s.holder_pairs != "boundary" && s.holder_pairs != "all")
    throw ValidationError("pairs must be boundary or all (got '" + s.holder_pairs + "')");
  if (s.experiment == Experiment::ConditionConstants) {
    if (s.sigma_lip < 0.0 || s.sigma_over_d < 0.0 || s.psi_lip < 0.0 || s.psi_over_d < 0.0 ||
        s.L2 < 0.0)
      throw ValidationError("condition-constant inputs must be >= 0");
  }
}

}  // namespace

const char* to_string(Experiment e) {
  for (const auto& [name, val] : experiment_names())
    if (val == e) return name.c_str();
  return "collapse";
}

Scenario load_scenario(const std::string& text) {
  const Document doc = parse_document(text);
  Scenario s;

  Section dom(doc, "domain");
  if (const Value* v = dom.find("kind")) s.domain.kind = as_str(*v, "domain kind");
  if (s.domain.kind != "interval" && s.domain.kind != "disk" && s.domain.kind != "annulus")
    throw ValidationError("domain kind must be interval, disk or annulus (got '" + s.domain.kind +
                          "')");
  if (const Value* v = dom.find("a")) s.domain.a = as_num(*v, "a");
  if (const Value* v = dom.find("b")) s.domain.b = as_num(*v, "b");
  if (const Value* v = dom.find("radius")) s.domain.radius = as_num(*v, "radius");
  if (const Value* v = dom.find("r_in")) s.domain.r_in = as_num(*v, "r_in");
  if (const Value* v = dom.find("r_out")) s.domain.r_out = as_num(*v, "r_out");
  dom.finish();

  Section op(doc, "operator");
  if (const Value* v = op.find("family")) s.op.family = as_str(*v, "family");
  static const std::set<std::string> kFamilies{"deg_laplace", "deg_drift", "isaacs", "pucci",
                                               "first_order_hj"};
  if (!kFamilies.count(s.op.family))
    throw ValidationError("unknown family '" + s.op.family +
                          "'; expected deg_laplace, deg_drift, isaacs, pucci or first_order_hj");
  if (const Value* v = op.find("mu")) s.op.mu = as_num(*v, "mu");
  if (const Value* v = op.find("tau")) s.op.tau = as_num(*v, "tau");
  if (const Value* v = op.find("drift_scale")) s.op.drift_scale = as_num(*v, "drift_scale");
  if (const Value* v = op.find("extension")) s.op.extension = as_str(*v, "extension");
  if (s.op.extension != "quarter" && s.op.extension != "half")
    throw ValidationError("extension must be quarter or half");
  if (const Value* v = op.find("lambda")) s.op.lambda = as_num(*v, "lambda");
  if (const Value* v = op.find("lambda_bar")) s.op.lambda_bar = as_num(*v, "lambda_bar");
  if (const Value* v = op.find("m")) s.op.m = as_num(*v, "m");
  if (const Value* v = op.find("controls")) {
    if (v->kind != Value::Kind::List) bad_value(*v, "a list of rows for controls");
    for (const Value& row : v->items) {
      if (row.kind != Value::Kind::List) bad_value(row, "a list of entries for a controls row");
      std::vector<ControlEntry> entries;
      for (const Value& cell : row.items) {
        if (cell.kind != Value::Kind::Table)
          bad_value(cell, "an inline table {sigma = ..., drift = ...}");
        ControlEntry e;
        for (const auto& [k, val] : cell.fields) {
          if (k == "sigma")
            e.sigma_scale = as_num(val, "sigma");
          else if (k == "drift")
            e.drift = as_num(val, "drift");
          else
            throw ValidationError("unknown control field '" + k + "' (line " +
                                  std::to_string(val.line) + ")");
        }
        entries.push_back(e);
      }
      s.op.controls.push_back(std::move(entries));
    }
  }
  if (const Value* v = op.find("source")) s.op.source = as_str(*v, "source");
  if (s.op.source != "zero" && s.op.source != "constant" && s.op.source != "coord_x")
    throw ValidationError("source must be zero, constant or coord_x");
  if (const Value* v = op.find("source_value")) s.op.source_value = as_num(*v, "source_value");
  op.finish();

  Section sol(doc, "solver");
  if (const Value* v = sol.find("tol")) s.solver.tol = as_num(*v, "tol");
  if (const Value* v = sol.find("max_iter")) s.solver.max_iter = as_int(*v, "max_iter");
  if (const Value* v = sol.find("dt_max")) s.solver.dt_max = as_num(*v, "dt_max");
  if (const Value* v = sol.find("T")) s.solver.T = as_num(*v, "T");
  if (const Value* v = sol.find("snapshot_times"))
    s.solver.snapshot_times = as_num_list(*v, "snapshot_times");
  sol.finish();

  Section ex(doc, "experiment");
  if (const Value* v = ex.find("kind")) {
    const std::string name = as_str(*v, "experiment kind");
    auto it = experiment_names().find(name);
    if (it == experiment_names().end())
      throw ValidationError("unknown experiment kind '" + name + "'");
    s.experiment = it->second;
  }
  if (const Value* v = ex.find("grids")) {
    s.grids.clear();
    for (double g : as_num_list(*v, "grids")) {
      if (g != std::floor(g)) throw ValidationError("grid sizes must be integers");
      s.grids.push_back(static_cast<int>(g));
    }
  }
  if (const Value* v = ex.find("layer_mode")) s.layer_mode = as_str(*v, "layer_mode");
  if (const Value* v = ex.find("ghost_value")) s.ghost_value = as_num(*v, "ghost_value");
  if (const Value* v = ex.find("ghost_from_source"))
    s.ghost_from_source = as_bool(*v, "ghost_from_source");
  if (const Value* v = ex.find("init")) {
    if (v->kind == Value::Kind::Str) {
      s.init.kind = v->str;
    } else if (v->kind == Value::Kind::Table) {
      for (const auto& [k, val] : v->fields) {
        if (k == "kind")
          s.init.kind = as_str(val, "init kind");
        else if (k == "value")
          s.init.value = as_num(val, "init value");
        else if (k == "m")
          s.init.m = as_num(val, "init m");
        else if (k == "mu")
          s.init.mu = as_num(val, "init mu");
        else
          throw ValidationError("unknown init field '" + k + "' (line " +
                                std::to_string(val.line) + ")");
      }
    } else {
      bad_value(*v, "a string or inline table for init");
    }
  }
  if (const Value* v = ex.find("seed")) s.seed = as_int(*v, "seed");
  if (const Value* v = ex.find("output")) s.output = as_str(*v, "output");
  if (const Value* v = ex.find("sweep_mus")) s.sweep_mus = as_num_list(*v, "sweep_mus");
  if (const Value* v = ex.find("gammas")) s.gammas = as_num_list(*v, "gammas");
  if (const Value* v = ex.find("deltas")) s.deltas = as_num_list(*v, "deltas");
  if (const Value* v = ex.find("expect")) s.expect = as_str(*v, "expect");
  if (const Value* v = ex.find("holder_d_max")) s.holder_d_max = as_num(*v, "holder_d_max");
  if (const Value* v = ex.find("pairs")) s.holder_pairs = as_str(*v, "pairs");
  if (const Value* v = ex.find("anchor")) s.anchor = as_num_list(*v, "anchor");
  if (const Value* v = ex.find("trace_depth"))
    s.trace_depth = static_cast<int>(as_int(*v, "trace_depth"));
  if (const Value* v = ex.find("window")) {
    const std::vector<double> w = as_num_list(*v, "window");
    if (w.size() != 2) throw ValidationError("window must be [t0, t1]");
    s.window_t0 = w[0];
    s.window_t1 = w[1];
  }
  if (const Value* v = ex.find("sigma_lip")) s.sigma_lip = as_num(*v, "sigma_lip");
  if (const Value* v = ex.find("sigma_over_d")) s.sigma_over_d = as_num(*v, "sigma_over_d");
  if (const Value* v = ex.find("psi_lip")) s.psi_lip = as_num(*v, "psi_lip");
  if (const Value* v = ex.find("psi_over_d")) s.psi_over_d = as_num(*v, "psi_over_d");
  if (const Value* v = ex.find("L2")) s.L2 = as_num(*v, "L2");
  ex.finish();

  validate(s);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(xs[i]);
  }
  return out + "]";
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream o;
  o << "[domain]\n";
  o << "kind = \"" << s.domain.kind << "\"\n";
  o << "a = " << fmt(s.domain.a) << "\n";
  o << "b = " << fmt(s.domain.b) << "\n";
  o << "radius = " << fmt(s.domain.radius) << "\n";
  o << "r_in = " << fmt(s.domain.r_in) << "\n";
  o << "r_out = " << fmt(s.domain.r_out) << "\n";
  o << "\n[operator]\n";
  o << "family = \"" << s.op.family << "\"\n";
  o << "mu = " << fmt(s.op.mu) << "\n";
  o << "tau = " << fmt(s.op.tau) << "\n";
  o << "drift_scale = " << fmt(s.op.drift_scale) << "\n";
  o << "extension = \"" << s.op.extension << "\"\n";
  o << "lambda = " << fmt(s.op.lambda) << "\n";
  o << "lambda_bar = " << fmt(s.op.lambda_bar) << "\n";
  o << "m = " << fmt(s.op.m) << "\n";
  if (!s.op.controls.empty()) {
    o << "controls = [";
    for (std::size_t r = 0; r < s.op.controls.size(); ++r) {
      if (r > 0) o << ", ";
      o << "[";
      for (std::size_t c = 0; c < s.op.controls[r].size(); ++c) {
        if (c > 0) o << ", ";
        o << "{sigma = " << fmt(s.op.controls[r][c].sigma_scale)
          << ", drift = " << fmt(s.op.controls[r][c].drift) << "}";
      }
      o << "]";
    }
    o << "]\n";
  }
  o << "source = \"" << s.op.source << "\"\n";
  o << "source_value = " << fmt(s.op.source_value) << "\n";
  o << "\n[solver]\n";
  o << "tol = " << fmt(s.solver.tol) << "\n";
  o << "max_iter = " << s.solver.max_iter << "\n";
  o << "dt_max = " << fmt(s.solver.dt_max) << "\n";
  o << "T = " << fmt(s.solver.T) << "\n";
  o << "snapshot_times = " << fmt_list(s.solver.snapshot_times) << "\n";
  o << "\n[experiment]\n";
  o << "kind = \"" << to_string(s.experiment) << "\"\n";
  o << "grids = [";
  for (std::size_t i = 0; i < s.grids.size(); ++i) {
    if (i > 0) o << ", ";
    o << s.grids[i];
  }
  o << "]\n";
  o << "layer_mode = \"" << s.layer_mode << "\"\n";
  o << "ghost_value = " << fmt(s.ghost_value) << "\n";
  o << "ghost_from_source = " << (s.ghost_from_source ? "true" : "false") << "\n";
  o << "init = {kind = \"" << s.init.kind << "\", value = " << fmt(s.init.value)
    << ", m = " << fmt(s.init.m) << ", mu = " << fmt(s.init.mu) << "}\n";
  o << "seed = " << s.seed << "\n";
  o << "output = \"" << s.output << "\"\n";
  o << "sweep_mus = " << fmt_list(s.sweep_mus) << "\n";
  o << "gammas = " << fmt_list(s.gammas) << "\n";
  o << "deltas = " << fmt_list(s.deltas) << "\n";
  o << "expect = \"" << s.expect << "\"\n";
  o << "holder_d_max = " << fmt(s.holder_d_max) << "\n";
  o << "pairs = \"" << s.holder_pairs << "\"\n";
  o << "anchor = " << fmt_list(s.anchor) << "\n";
  o << "trace_depth = " << s.trace_depth << "\n";
  o << "window = [" << fmt(s.window_t0) << ", " << fmt(s.window_t1) << "]\n";
  o << "sigma_lip = " << fmt(s.sigma_lip) << "\n";
  o << "sigma_over_d = " << fmt(s.sigma_over_d) << "\n";
  o << "psi_lip = " << fmt(s.psi_lip) << "\n";
  o << "psi_over_d = " << fmt(s.psi_over_d) << "\n";
  o << "L2 = " << fmt(s.L2) << "\n";
  return o.str();
}

Domain scenario_domain(const Scenario& s) {
  if (s.domain.kind == "interval") return make_interval(s.domain.a, s.domain.b);
  if (s.domain.kind == "disk") return make_disk(s.domain.radius);
  return make_annulus(s.domain.r_in, s.domain.r_out);
}

OperatorSpec scenario_operator_with_mu(const Scenario& s, double mu) {
  const Domain dom = scenario_domain(s);
  SourceSpec src;
  if (s.op.source == "constant")
    src = {SourceKind::Constant, s.op.source_value};
  else if (s.op.source == "coord_x")
    src = {SourceKind::CoordX, s.op.source_value};
  if (s.op.family == "deg_laplace") return make_deg_laplace(mu, src);
  if (s.op.family == "deg_drift")
    return make_deg_drift(mu, s.op.tau, s.op.drift_scale, dom,
                          s.op.extension == "half" ? DriftExtension::Half
                                                   : DriftExtension::Quarter,
                          src);
  if (s.op.family == "isaacs") return make_isaacs(mu, s.op.controls, dom, src);
  if (s.op.family == "pucci") return make_pucci(mu, s.op.lambda, s.op.lambda_bar, src);
  return make_first_order_hj(mu, s.op.m, src);
}

OperatorSpec scenario_operator(const Scenario& s) { return scenario_operator_with_mu(s, s.op.mu); }

LayerMode scenario_layer_mode(const Scenario& s) {
  if (s.layer_mode == "one_sided") return one_sided_mode();
  if (s.layer_mode == "ghost") {
    if (s.ghost_from_source) return ghost_source_mode();
    return ghost_mode(s.ghost_value);
  }
  return drop_mode();
}

Field scenario_init(const Scenario& s, const Grid& grid) {
  Field u(grid.size(), 0.0);
  if (s.init.kind == "zero") return u;
  if (s.init.kind == "constant") {
    std::fill(u.begin(), u.end(), s.init.value);
    return u;
  }
  if (s.init.kind == "sin") {
    const double D = grid.domain.max_distance();
    const double pi = std::acos(-1.0);
    for (std::size_t i = 0; i < grid.size(); ++i)
      u[i] = std::sin(pi * grid.d[i] / (2.0 * D));
    return u;
  }
  if (s.init.kind == "linear") {
    for (std::size_t i = 0; i < grid.size(); ++i) u[i] = grid.x[i];
    return u;
  }
  return sample_closed_form(make_closed_form(s.init.m, s.init.mu), grid);
}

}  // namespace degenlab

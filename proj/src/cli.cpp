#include "primemean/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "primemean/checkpoint_cache.hpp"
#include "primemean/constants.hpp"
#include "primemean/error.hpp"
#include "primemean/fit.hpp"
#include "primemean/model_spec.hpp"
#include "primemean/primesums.hpp"
#include "primemean/series.hpp"
#include "primemean/verify.hpp"

namespace pmean::cli {

namespace {

using json = nlohmann::ordered_json;

enum class Format { Csv, Json, Table };

// ---- number formatting ----------------------------------------------------

std::string num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// JSON numbers carry the same 15 significant digits as the text formats.
json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(num(v).c_str(), nullptr);
}

/// Accepts "100000", "1e8", "2.5e6" when the value is a non-negative integer.
Integer parse_count(const std::string& text, const char* flag) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v >= 0) || v > 1.8e19 || std::floor(v) != v) {
    throw InvalidArgument(std::string(flag) + ": expected a non-negative integer, got '" + text + "'");
  }
  if (text.find_first_of(".eE") == std::string::npos) return std::stoull(text);
  return static_cast<Integer>(v);
}

// ---- tabular output ---------------------------------------------------------

using Cell = std::variant<std::monostate, std::string, double, Integer, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double v) const { return num(v); }
    std::string operator()(Integer v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  } visit;
  return std::visit(visit, c);
}

json cell_json(const Cell& c) {
  struct {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(const std::string& s) const { return s; }
    json operator()(double v) const { return jnum(v); }
    json operator()(Integer v) const { return v; }
    json operator()(bool v) const { return v; }
  } visit;
  return std::visit(visit, c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

void write_csv(std::ostream& out, const Table& t) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
    out << "\r\n";
  };
  line(t.columns);
  for (const auto& row : t.rows) {
    std::vector<std::string> f;
    for (const auto& c : row) f.push_back(cell_text(c));
    line(f);
  }
}

void write_table(std::ostream& out, const Table& t) {
  std::vector<std::size_t> width(t.columns.size());
  std::vector<std::vector<std::string>> text;
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
  for (const auto& row : t.rows) {
    auto& r = text.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      r.push_back(cell_text(row[i]));
      width[i] = std::max(width[i], r.back().size());
    }
  }
  auto line = [&](const std::vector<std::string>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      out << (i ? "  " : "");
      if (i + 1 < f.size()) {
        out << std::left << std::setw(static_cast<int>(width[i])) << f[i];
      } else {
        out << f[i];
      }
    }
    out << '\n';
  };
  line(t.columns);
  for (const auto& r : text) line(r);
}

json table_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json o = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) o[t.columns[i]] = cell_json(row[i]);
    rows.push_back(o);
  }
  return rows;
}

void emit(std::ostream& out, Format f, const Table& t, const std::string& schema) {
  switch (f) {
    case Format::Csv: write_csv(out, t); break;
    case Format::Table: write_table(out, t); break;
    case Format::Json: out << json{{"schema", schema}, {"rows", table_json(t)}}.dump(2) << '\n'; break;
  }
}

// ---- shared option groups ---------------------------------------------------

struct Common {
  std::string format;
  std::string cache_dir;
  std::string max_bound = "1e9";
  std::string segment_size = "1048576";
  unsigned threads = 1;

  SieveConfig sieve() const {
    return {parse_count(max_bound, "--max-bound"), parse_count(segment_size, "--segment-size")};
  }
  Format fmt(Format fallback) const {
    if (format.empty()) return fallback;
    if (format == "csv") return Format::Csv;
    if (format == "json") return Format::Json;
    return Format::Table;
  }
  std::optional<CheckpointCache> cache() const {
    std::string dir = cache_dir;
    if (dir.empty()) {
      if (const char* env = std::getenv("PRIMEMEAN_CACHE")) dir = env;
    }
    if (dir.empty()) return std::nullopt;
    return CheckpointCache(dir);
  }
};

void add_common(CLI::App& app, Common& c) {
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json", "table"}));
  app.add_option("--cache-dir", c.cache_dir, "Checkpoint cache directory (default: $PRIMEMEAN_CACHE)");
  app.add_option("--max-bound", c.max_bound, "Largest sieve bound")->capture_default_str();
  app.add_option("--segment-size", c.segment_size, "Sieve segment size")->capture_default_str();
  app.add_option("--threads", c.threads, "Worker threads for prime sums")->capture_default_str()->check(
      CLI::Range(1u, 256u));
}

struct ModelOpt {
  std::string name;
  std::string file;

  std::optional<PrimeModel> get() const {
    if (!file.empty()) return load_model_file(file);
    if (!name.empty()) return builtin(name);
    return std::nullopt;
  }
};

void add_model(CLI::App& app, ModelOpt& m) {
  auto* name = app.add_option("--model", m.name, "Built-in model: kappa, two_omega, euler_phi, sigma, divisor_d, jordan_<k>");
  app.add_option("--model-file", m.file, "Custom model file")->excludes(name);
}

struct GridOpt {
  std::string n;
  std::string from;
  std::string to;
  std::size_t points = 12;
  std::string spacing = "log";

  CheckpointGrid get(const SieveConfig& sieve, const char* default_from = nullptr,
                     const char* default_to = nullptr) const {
    if (!n.empty()) return CheckpointGrid({parse_count(n, "--n")}, sieve.max_bound);
    const std::string f = from.empty() ? (default_from ? default_from : "") : from;
    const std::string t = to.empty() ? (default_to ? default_to : "") : to;
    if (t.empty()) throw InvalidArgument("give --n or --to");
    const Integer hi = parse_count(t, "--to");
    const Integer lo = f.empty() ? std::min<Integer>(hi, 10) : parse_count(f, "--from");
    if (points > kMaxCheckpoints) {
      throw BadGrid("--points " + std::to_string(points) + " exceeds " + std::to_string(kMaxCheckpoints));
    }
    if (lo > hi) throw BadGrid("--from exceeds --to");
    return spacing == "linear" ? CheckpointGrid::linear(lo, hi, points, sieve.max_bound)
                               : CheckpointGrid::log_spaced(lo, hi, points, sieve.max_bound);
  }
};

void add_grid(CLI::App& app, GridOpt& g, bool single) {
  if (single) app.add_option("--n", g.n, "Single checkpoint");
  app.add_option("--from", g.from, "First checkpoint");
  app.add_option("--to", g.to, "Last checkpoint");
  app.add_option("--points", g.points, "Number of checkpoints (<= 64)")->capture_default_str();
  app.add_option("--spacing", g.spacing, "Checkpoint spacing")
      ->check(CLI::IsMember({"log", "linear"}))
      ->capture_default_str();
}

SumsReport cached_sums(const PrimeModel& model, const CheckpointGrid& grid, const Common& c, bool with_u) {
  const auto cache = c.cache();
  if (cache) {
    if (auto hit = cache->load(model.identity(), grid); hit && (hit->has_u || !with_u)) return *hit;
  }
  SumsOptions opt;
  opt.threads = c.threads;
  opt.with_u = with_u;
  const SieveConfig sieve = c.sieve();
  opt.max_bound = sieve.max_bound;
  opt.segment_size = sieve.segment_size;
  SumsReport rep = sums_stream(model, grid, opt);
  if (cache) cache->store(rep, grid);
  return rep;
}

// ---- constants --------------------------------------------------------------

struct ConstantsCmd {
  Common common;
  ModelOpt model;
  int aj = 0;
  std::optional<double> precision;
};

json constant_json(const ConstantValue& c) {
  json params = json::object();
  for (const auto& [k, v] : c.params) params[k] = jnum(v);
  return {{"name", c.name}, {"value", jnum(c.value)}, {"tail_bound", jnum(c.tail_bound)}, {"method", c.method},
          {"params", params}};
}

int run_constants(const ConstantsCmd& cmd, std::ostream& out) {
  const SieveConfig sieve = cmd.common.sieve();
  auto p = [&](double fallback) { return cmd.precision.value_or(fallback); };
  std::vector<ConstantValue> rows;
  rows.push_back(euler_gamma(p(defaults::kGammaPrecision)));
  rows.push_back(meissel_mertens(p(defaults::kMeisselMertensPrecision), sieve));
  rows.push_back(mertens_e(p(defaults::kMertensEPrecision), sieve));
  if (auto m = cmd.model.get()) {
    rows.push_back(c_q(*m, p(defaults::kCqPrecision), sieve));
    rows.push_back(rho_f(*m, p(defaults::kCqPrecision), sieve));
    rows.push_back(eta0(*m, p(defaults::kAssembledPrecision), sieve));
    rows.push_back(leading_constant(*m, p(defaults::kAssembledPrecision), sieve));
  }
  for (int j = 1; j <= cmd.aj; ++j) rows.push_back(saffari_a(j, p(defaults::kSaffariPrecision)));

  const Format f = cmd.common.fmt(Format::Json);
  if (f == Format::Json) {
    json arr = json::array();
    for (const auto& c : rows) arr.push_back(constant_json(c));
    json doc = {{"schema", "primemean.constants/1"}};
    if (auto m = cmd.model.get()) doc["model"] = m->name();
    doc["constants"] = arr;
    out << doc.dump(2) << '\n';
    return 0;
  }
  Table t{{"name", "value", "tail_bound", "method"}, {}};
  for (const auto& c : rows) t.rows.push_back({c.name, c.value, c.tail_bound, c.method});
  emit(out, f, t, "");
  return 0;
}

// ---- geomean ----------------------------------------------------------------

struct GeomeanCmd {
  Common common;
  ModelOpt model;
  GridOpt grid;
  bool oracle = false;
};

int run_geomean(const GeomeanCmd& cmd, std::ostream& out, std::ostream& err) {
  const auto model = cmd.model.get();
  if (!model) throw InvalidArgument("geomean needs --model or --model-file");
  const SieveConfig sieve = cmd.common.sieve();
  const bool single = !cmd.grid.n.empty();
  if (single && parse_count(cmd.grid.n, "--n") == 0) throw BadGrid("--n must be >= 1");

  std::vector<std::pair<Integer, double>> logs;  // (n, n log G)
  if (single && parse_count(cmd.grid.n, "--n") == 1) {
    logs.emplace_back(1, 0.0);  // G_f(1) = f(1) = 1
  } else {
    const SumsReport rep = cached_sums(*model, cmd.grid.get(sieve), cmd.common, false);
    for (const auto& row : rep.rows) logs.emplace_back(row.n, row.n_log_g.value());
  }
  const bool any_predicted = logs.back().first >= 3;
  const double lc = any_predicted ? leading_constant(*model, defaults::kAssembledPrecision, sieve).value : NAN;

  Table t{{"n", "log_g", "g", "g_normalized", "predicted", "abs_diff"}, {}};
  if (cmd.oracle) {
    t.columns.push_back("log_g_oracle");
    t.columns.push_back("oracle_diff");
  }
  std::optional<SpfTable> table;
  bool oracle_ok = true;
  for (const auto& [n, nlog] : logs) {
    const double dn = static_cast<double>(n);
    const double log_g = nlog / dn;
    std::vector<Cell> row{n, log_g, std::exp(log_g)};
    if (n >= 3) {
      const double L = std::log(dn);
      const double norm = std::exp(log_g - model->d() * L - std::log(model->alpha()) * std::log(L));
      Expansion<double> ex;
      ex.e = {1.0};
      const double predicted = std::exp(theorem1_log_eval(*model, lc, ex, n) - model->d() * L -
                                        std::log(model->alpha()) * std::log(L));
      row.insert(row.end(), {norm, predicted, std::abs(norm - predicted)});
    } else {
      row.insert(row.end(), {Cell{}, Cell{}, Cell{}});
    }
    if (cmd.oracle) {
      if (n <= kDefaultSpfCap) {
        if (!table || table->limit() < n) table.emplace(std::max<Integer>(logs.back().first, 2));
        const double brute = log_geomean_bruteforce(*model, n, *table).value / dn;
        const double diff = std::abs(brute - log_g);
        if (diff * dn > 1e-9 * std::max(1.0, dn)) oracle_ok = false;
        row.insert(row.end(), {brute, diff});
      } else {
        row.insert(row.end(), {Cell{}, Cell{}});
      }
    }
    t.rows.push_back(std::move(row));
  }
  emit(out, cmd.common.fmt(Format::Table), t, "primemean.geomean/1");
  if (!oracle_ok) {
    err << "error: identity and brute-force oracle disagree beyond 1e-9 max(1,n)\n";
    return 1;
  }
  return 0;
}

// ---- sums -------------------------------------------------------------------

struct SumsCmd {
  Common common;
  ModelOpt model;
  GridOpt grid;
  bool no_u = false;
};

int run_sums(const SumsCmd& cmd, std::ostream& out) {
  const PrimeModel model = cmd.model.get().value_or(builtin("kappa"));
  const CheckpointGrid grid = cmd.grid.get(cmd.common.sieve());
  const SumsReport rep = cached_sums(model, grid, cmd.common, !cmd.no_u);
  Table t{{"n", "s1", "s2", "s3", "f1", "f2", "r", "m", "u", "n_log_g", "err_bound"}, {}};
  for (const auto& r : rep.rows) {
    t.rows.push_back({r.n, r.s1, r.s2.value(), r.s3.value(), r.f1.value(), r.f2.value(), r.r.value(), r.m.value(),
                      rep.has_u ? Cell{r.u.value()} : Cell{}, r.n_log_g.value(), r.err_bound()});
  }
  emit(out, cmd.common.fmt(Format::Csv), t, "primemean.sums/1");
  return 0;
}

// ---- verify -----------------------------------------------------------------

struct VerifyCmd {
  Common common;
  GridOpt grid;
  std::vector<std::string> checks;
  bool list = false;
  bool points_given = false;
};

int run_verify(const VerifyCmd& cmd, std::ostream& out) {
  const Format f = cmd.common.fmt(Format::Table);
  if (cmd.list) {
    Table t{{"check", "description"}, {}};
    for (const auto& c : verify::registry()) t.rows.push_back({c.name, c.description});
    emit(out, f, t, "primemean.checks/1");
    return 0;
  }
  std::vector<std::string> names = cmd.checks;
  if (names.empty()) {
    for (const auto& c : verify::registry()) names.push_back(c.name);
  }
  // resolve every name before running anything
  for (const auto& n : names) {
    bool known = false;
    for (const auto& c : verify::registry()) known = known || c.name == n;
    if (!known) throw UnknownCheck(n);
  }
  verify::CheckParams params;
  if (!cmd.grid.from.empty()) params.from = parse_count(cmd.grid.from, "--from");
  if (!cmd.grid.to.empty()) params.to = parse_count(cmd.grid.to, "--to");
  if (cmd.points_given) params.points = cmd.grid.points;
  params.threads = cmd.common.threads;
  params.sieve = cmd.common.sieve();
  if (params.to && *params.to > params.sieve.max_bound) {
    throw BoundExceeded("--to exceeds the sieve bound " + std::to_string(params.sieve.max_bound));
  }
  if (params.from && params.to && *params.from > *params.to) throw BadGrid("--from exceeds --to");

  bool all = true;
  Table t{{"check", "result", "seconds", "details"}, {}};
  json arr = json::array();
  for (const auto& n : names) {
    const verify::CheckResult r = verify::run_check(n, params);
    all = all && r.passed;
    std::string joined;
    for (const auto& d : r.details) joined += (joined.empty() ? "" : "; ") + d;
    t.rows.push_back({r.name, std::string(r.passed ? "PASS" : "FAIL"), r.seconds, joined});
    arr.push_back({{"check", r.name}, {"passed", r.passed}, {"seconds", jnum(r.seconds)}, {"details", r.details}});
  }
  if (f == Format::Json) {
    out << json{{"schema", "primemean.verify/1"}, {"passed", all}, {"checks", arr}}.dump(2) << '\n';
  } else if (f == Format::Csv) {
    write_csv(out, t);
  } else {
    for (const auto& row : t.rows) {
      out << std::left << std::setw(20) << cell_text(row[0]) << cell_text(row[1]) << "  (" << cell_text(row[2])
          << " s)\n";
    }
    for (const auto& item : arr) {
      for (const auto& d : item["details"]) out << "  " << item["check"].get<std::string>() << ": " << d.get<std::string>() << '\n';
    }
  }
  return all ? 0 : 1;
}

// ---- fit --------------------------------------------------------------------

struct FitCmd {
  Common common;
  ModelOpt model;
  GridOpt grid;
  std::string target = "s1-residual";
  int order = 1;
  bool fit_constant = false;
  std::string samples;
};

std::vector<FitSample> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open samples file " + path);
  std::vector<FitSample> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected n,residual");
    FitSample s;
    s.n = parse_count(line.substr(0, comma), "samples n");
    try {
      s.residual = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": bad residual");
    }
    out.push_back(s);
  }
  return out;
}

int run_fit(const FitCmd& cmd, std::ostream& out) {
  const bool with_constant = cmd.fit_constant || cmd.order == 0;
  std::vector<FitSample> samples;
  std::string model_name;
  if (!cmd.samples.empty()) {
    samples = read_samples(cmd.samples);
  } else {
    const SieveConfig sieve = cmd.common.sieve();
    const CheckpointGrid grid = cmd.grid.get(sieve, "1e4", "1e8");
    PrimeModel model = builtin("kappa");
    double known = 0;
    if (cmd.target == "theorem2-residual") {
      model = cmd.model.get().value_or(builtin("jordan_2"));
      if (!with_constant) known = eta0(model, defaults::kAssembledPrecision, sieve).value;
    } else if (cmd.target == "s1-residual") {
      if (!with_constant) known = meissel_mertens(defaults::kMeisselMertensPrecision, sieve).value;
    } else {
      if (!with_constant) {
        known = euler_gamma().value + mertens_e(defaults::kMertensEPrecision, sieve).value - 1.0;
      }
    }
    model_name = model.name();
    const SumsReport rep = cached_sums(model, grid, cmd.common, false);
    for (const auto& row : rep.rows) {
      const double n = static_cast<double>(row.n), L = std::log(n);
      double y = 0;
      if (cmd.target == "s1-residual") {
        y = static_cast<double>(row.s1) / n - std::log(L);
      } else if (cmd.target == "s2-residual") {
        y = row.s2.value() / n - L;
      } else {
        y = prime_log_sum(model, row) / n - model.d() * L - std::log(model.alpha()) * std::log(L);
      }
      samples.push_back({row.n, y - known});
    }
  }
  const FitResult r = fit_coefficients(samples, cmd.order, with_constant);

  json coeffs = json::array();
  for (double c : r.coefficients) coeffs.push_back(jnum(c));
  const Format f = cmd.common.fmt(Format::Json);
  if (f == Format::Json) {
    json doc = {{"schema", "primemean.fit/1"}};
    doc["target"] = cmd.samples.empty() ? cmd.target : "samples";
    if (!model_name.empty() && cmd.target == "theorem2-residual") doc["model"] = model_name;
    doc["with_constant"] = with_constant;
    doc["coefficients"] = coeffs;
    doc["residual_norm"] = jnum(r.residual_norm);
    doc["condition_estimate"] = jnum(r.condition_estimate);
    doc["window"] = {{"n_min", r.window.n_min}, {"n_max", r.window.n_max}, {"points", r.window.points}};
    out << doc.dump(2) << '\n';
    return 0;
  }
  Table t{{"coefficient", "value"}, {}};
  for (std::size_t i = 0; i < r.coefficients.size(); ++i) {
    const int j = static_cast<int>(i) + (with_constant ? 0 : 1);
    t.rows.push_back({"c_" + std::to_string(j), r.coefficients[i]});
  }
  t.rows.push_back({std::string("residual_norm"), r.residual_norm});
  t.rows.push_back({std::string("condition_estimate"), r.condition_estimate});
  emit(out, f, t, "");
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric means of multiplicative functions via prime sums"};
  app.name("primemean");
  app.require_subcommand(1);

  ConstantsCmd constants;
  auto* c = app.add_subcommand("constants", "Print gamma, M, E and the constants of a model");
  add_common(*c, constants.common);
  add_model(*c, constants.model);
  c->add_option("--aj", constants.aj, "Also print a_1..a_r")->check(CLI::Range(0, 8));
  c->add_option("--precision", constants.precision, "Target precision for every constant");

  GeomeanCmd geomean;
  auto* g = app.add_subcommand("geomean", "Evaluate G_f(n) at checkpoints");
  add_common(*g, geomean.common);
  add_model(*g, geomean.model);
  add_grid(*g, geomean.grid, true);
  g->add_flag("--oracle", geomean.oracle, "Add a brute-force column and require agreement");

  SumsCmd sums;
  auto* s = app.add_subcommand("sums", "Print the streaming prime sums at checkpoints");
  add_common(*s, sums.common);
  add_model(*s, sums.model);
  add_grid(*s, sums.grid, true);
  s->add_flag("--no-u", sums.no_u, "Skip the U(x) pass");

  VerifyCmd verify;
  auto* v = app.add_subcommand("verify", "Run registered verification checks");
  add_common(*v, verify.common);
  add_grid(*v, verify.grid, false);
  v->add_option("--check", verify.checks, "Check name (repeatable; default: all)");
  v->add_flag("--list", verify.list, "List the registered checks");

  FitCmd fit;
  auto* fcmd = app.add_subcommand("fit", "Fit expansion coefficients by least squares");
  add_common(*fcmd, fit.common);
  add_model(*fcmd, fit.model);
  add_grid(*fcmd, fit.grid, false);
  fcmd->add_option("--target", fit.target, "Residual series")
      ->check(CLI::IsMember({"s1-residual", "s2-residual", "theorem2-residual"}))
      ->capture_default_str();
  fcmd->add_option("--order", fit.order, "Number of 1/log^j n terms")->check(CLI::Range(0, kMaxSeriesOrder));
  fcmd->add_flag("--fit-constant", fit.fit_constant, "Fit a constant term too");
  fcmd->add_option("--samples", fit.samples, "CSV file of n,residual rows to fit instead of computing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*c) return run_constants(constants, out);
    if (*g) return run_geomean(geomean, out, err);
    if (*s) return run_sums(sums, out);
    if (*v) {
      verify.points_given = v->count("--points") > 0;
      return run_verify(verify, out);
    }
    if (*fcmd) return run_fit(fit, out);
  } catch (const IllConditioned& e) {
    err << "error: " << e.what() << " (condition estimate " << num(e.condition()) << ")\n";
    return e.exit_code();
  } catch (const PrecisionUnreachable& e) {
    err << "error: " << e.what();
    if (e.achievable() > 0) err << " (achievable: " << num(e.achievable()) << ")";
    err << '\n';
    return e.exit_code();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace pmean::cli

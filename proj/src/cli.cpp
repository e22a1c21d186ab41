#include "hk/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "hk/basis_transform.hpp"
#include "hk/errors.hpp"
#include "hk/form_factors.hpp"
#include "hk/lattice_oracle.hpp"
#include "hk/trace_evaluator.hpp"
#include "hk/verify.hpp"
#include "json.hpp"

namespace hk::cli {

namespace {

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty())
      parts.push_back(cur);
  }
  return parts;
}

double parse_real(const std::string &s) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v))
    throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::vector<int> parse_ints(const std::string &list) {
  std::vector<int> v;
  for (double x : parse_reals(list)) {
    if (x != std::floor(x))
      throw ConfigError("expected an integer, got " + format_real(x));
    v.push_back(static_cast<int>(x));
  }
  return v;
}

// Writes to the --output file when one was given.
class Sink {
public:
  Sink(const std::string &path, std::ostream &fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_)
        throw ConfigError("cannot write " + path);
      out_ = file_.get();
    }
  }
  std::ostream &operator*() { return *out_; }

private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream *out_;
};

std::vector<double> x_grid(const std::string &xs, const std::string &grid) {
  std::vector<double> v;
  if (!xs.empty())
    v = parse_reals(xs);
  if (!grid.empty()) {
    const auto g = parse_log_grid(grid);
    v.insert(v.end(), g.begin(), g.end());
  }
  if (v.empty())
    throw ConfigError("no x values: give --x and/or --log-grid");
  for (double x : v)
    if (x < 0)
      throw ConfigError("x must be >= 0");
  return v;
}

void write_csv(std::ostream &out, const std::vector<std::string> &header,
               const std::vector<double> &xs,
               const std::function<double(const std::string &, double)> &f) {
  out << "x";
  for (const auto &h : header)
    out << ',' << h;
  out << '\n';
  for (double x : xs) {
    out << format_real(x);
    for (const auto &h : header)
      out << ',' << format_real(f(h, x));
    out << '\n';
  }
}

// Turns `--config file.json` into extra flags for every key the command line
// did not set. Keys of a nested object named after the subcommand win over
// top-level keys.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size())
        throw CLI::ArgumentMismatch("--config needs a file name");
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (path.empty())
    return args;

  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!cfg.is_object())
    throw ConfigError(path + ": top level must be an object");

  auto is_sub = [](const std::string &a) { return !a.empty() && a[0] != '-'; };
  auto sub = std::find_if(args.begin(), args.end(), is_sub);
  std::string command;
  if (sub != args.end()) {
    command = *sub;
  } else if (cfg.contains("command")) {
    command = cfg["command"].get<std::string>();
    args.insert(args.begin(), command);
  }

  nlohmann::json merged = nlohmann::json::object();
  for (const auto &[k, v] : cfg.items())
    if (k != "command" && !v.is_object())
      merged[k] = v;
  if (cfg.contains(command) && cfg[command].is_object())
    for (const auto &[k, v] : cfg[command].items())
      merged[k] = v;

  auto given = [&](const std::string &flag) {
    for (const auto &a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0)
        return true;
    return false;
  };
  auto text = [](const nlohmann::json &v) -> std::string {
    if (v.is_string())
      return v.get<std::string>();
    if (v.is_number_integer())
      return std::to_string(v.get<long long>());
    if (v.is_number())
      return format_real(v.get<double>());
    throw ConfigError("unsupported config value " + v.dump());
  };
  if (merged.contains("suite")) {
    // Positional argument of `verify`; an explicit one wins.
    if (std::count_if(args.begin(), args.end(), is_sub) < 2)
      args.insert(std::find(args.begin(), args.end(), command) + 1,
                  text(merged["suite"]));
    merged.erase("suite");
  }
  for (const auto &[k, v] : merged.items()) {
    const std::string flag = "--" + k;
    if (given(flag))
      continue;
    if (v.is_boolean()) {
      if (v.get<bool>())
        args.push_back(flag);
    } else if (v.is_array()) {
      std::string joined;
      for (const auto &e : v)
        joined += (joined.empty() ? "" : ",") + text(e);
      args.push_back(flag);
      args.push_back(joined);
    } else {
      args.push_back(flag);
      args.push_back(text(v));
    }
  }
  return args;
}

bool is_usage_error(const Error &e) {
  return dynamic_cast<const ConfigError *>(&e) ||
         dynamic_cast<const DomainError *>(&e) ||
         dynamic_cast<const DimensionMismatch *>(&e) ||
         dynamic_cast<const UnsupportedOrder *>(&e);
}

} // namespace

std::string format_real(double v) {
  if (v == 0.0)
    return "0"; // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_reals(const std::string &list) {
  std::vector<double> v;
  for (const auto &p : split(list, ','))
    v.push_back(parse_real(p));
  return v;
}

std::vector<double> parse_log_grid(const std::string &spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3)
    throw ConfigError("log grid must be lo:hi:n, got '" + spec + "'");
  const double lo = parse_real(parts[0]), hi = parse_real(parts[1]);
  const double nd = parse_real(parts[2]);
  if (!(lo > 0) || !(hi >= lo) || nd < 1 || nd != std::floor(nd))
    throw ConfigError("log grid needs 0 < lo <= hi and integer n >= 1");
  const int n = static_cast<int>(nd);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i)
    xs[i] = n == 1 ? lo : lo * std::pow(hi / lo, double(i) / (n - 1));
  if (n > 1)
    xs.back() = hi;
  return xs;
}

int run(const std::vector<std::string> &raw_args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Heat-kernel form factors: tables, checks and lattice "
               "comparisons",
               "hk"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  app.add_option("--config", "JSON file supplying defaults for any flag");

  std::string output;
  auto add_output = [&](CLI::App *sub) {
    sub->add_option("-o,--output", output, "Write here instead of stdout");
  };

  // ff-table
  std::string kinds, xs, grid;
  auto *ff = app.add_subcommand("ff-table", "Tabulate form factors as CSV");
  ff->add_option("--kinds", kinds,
                 "Comma list: basic, ric, r, ru, u, omega, r2d, c<d>, "
                 "rbis<d>, bv1..bv5, gu, gr")
      ->required();
  ff->add_option("--x", xs, "Comma list of x values");
  ff->add_option("--log-grid", grid, "lo:hi:n log-spaced x values");
  add_output(ff);

  // plot-data
  std::string plot_grid = "1e-3:1e5:161";
  auto *plot = app.add_subcommand("plot-data",
                                  "CSV of (x, f(x)) for plotting, from x = 0 "
                                  "into the asymptotic region");
  plot->add_option("--log-grid", plot_grid, "lo:hi:n after the x = 0 row")
      ->capture_default_str();
  add_output(plot);

  // verify
  std::string suite, dims, s_list, fields;
  verify::Options vopt;
  double eps = 0;
  auto *ver = app.add_subcommand("verify", "Run a verification suite");
  ver->add_option("suite", suite, "projectors | diagrams | resolvent | bases | lattice")
      ->required();
  ver->add_option("--d", dims, "Comma list of dimensions");
  ver->add_option("--fields", fields, "FieldData JSON (lattice)");
  ver->add_option("--n-sites", vopt.n_sites, "Lattice sites per side");
  ver->add_option("--s", s_list, "Comma list of proper times (lattice)");
  auto *eps_opt = ver->add_option("--eps", eps, "Amplitude scale (lattice)");
  ver->add_option("--x-points", vopt.x_points, "Grid size (diagrams)");
  ver->add_option("--seed", vopt.seed, "Random seed (projectors)");
  add_output(ver);

  // basis-convert
  std::string from = "ricr", to = "bv";
  int bdim = 4;
  auto *bc = app.add_subcommand("basis-convert",
                                "Evaluate the standard form factors in "
                                "another basis");
  bc->add_option("--from", from, "ricr | weyl | bv")->capture_default_str();
  bc->add_option("--to", to, "ricr | weyl | bv")->capture_default_str();
  bc->add_option("--d", bdim, "Dimension")->capture_default_str();
  bc->add_option("--x", xs, "Comma list of x values");
  bc->add_option("--log-grid", grid, "lo:hi:n log-spaced x values");
  add_output(bc);

  // lattice-trace
  int n_sites = 0;
  double s = 0;
  bool diagonal = false;
  auto *lt = app.add_subcommand("lattice-trace",
                                "Exact lattice heat trace next to the "
                                "second-order expansion");
  lt->add_option("--fields", fields, "FieldData JSON")->required();
  lt->add_option("--n-sites", n_sites, "Sites per side")->required();
  lt->add_option("--s", s, "Proper time")->required();
  lt->add_flag("--diagonal", diagonal, "Include the kernel diagonal");
  add_output(lt);

  // laplace-trace
  std::string family = "resolvent";
  double t = 0, m2 = 0, s_min = 0;
  auto *lp = app.add_subcommand("laplace-trace",
                                "Integrate h~(s) Tr K^s over proper time");
  lp->add_option("--fields", fields, "FieldData JSON")->required();
  lp->add_option("--family", family, "heat | resolvent")->capture_default_str();
  lp->add_option("--t", t, "Heat-kernel time");
  lp->add_option("--m2", m2, "Resolvent mass squared");
  lp->add_option("--s-min", s_min, "Lower proper-time cutoff");
  add_output(lp);

  try {
    auto args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);

    const EvalConfig cfg = EvalConfig::from_env();

    if (*ff) {
      std::vector<FormFactorKind> ks;
      std::vector<std::string> names;
      for (auto k : split(kinds, ',')) {
        std::transform(k.begin(), k.end(), k.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        ks.push_back(FormFactorKind::parse(k));
        names.push_back(ks.back().name());
      }
      if (ks.empty())
        throw ConfigError("--kinds is empty");
      const auto grid_x = x_grid(xs, grid);
      Sink sink(output, out);
      write_csv(*sink, names, grid_x, [&](const std::string &n, double x) {
        return form_factors::eval(FormFactorKind::parse(n), x, cfg);
      });
      return kExitOk;
    }
    if (*plot) {
      std::vector<double> grid_x{0.0};
      const auto g = parse_log_grid(plot_grid);
      grid_x.insert(grid_x.end(), g.begin(), g.end());
      Sink sink(output, out);
      write_csv(*sink, {"f"}, grid_x, [&](const std::string &, double x) {
        return form_factors::basic_f(x, cfg);
      });
      return kExitOk;
    }
    if (*ver) {
      if (!dims.empty())
        vopt.dims = parse_ints(dims);
      if (!s_list.empty())
        vopt.s_values = parse_reals(s_list);
      if (eps_opt->count())
        vopt.eps = eps;
      vopt.fields_path = fields;
      const auto report = verify::run(suite, vopt);
      Sink sink(output, out);
      *sink << report.to_json().dump(2) << '\n';
      return report.pass() ? kExitOk : kExitFailure;
    }
    if (*bc) {
      const Basis src = parse_basis(from), dst = parse_basis(to);
      const auto set = basis::convert(basis::standard_set(src, bdim, cfg), dst,
                                      bdim);
      const auto grid_x = x_grid(xs, grid);
      Sink sink(output, out);
      write_csv(*sink, FormFactorSet::slot_names(dst), grid_x,
                [&](const std::string &slot, double x) { return set(slot, x); });
      return kExitOk;
    }
    if (*lt) {
      const auto f = FieldData::load(fields);
      const LatticeSpec spec{f.d, n_sites, f.L};
      const auto res = exact_trace(spec, f, s, diagonal);
      const auto ex = tr_heat_kernel(f, s, cfg);
      nlohmann::ordered_json j;
      j["lattice"] = res.to_json();
      j["expansion"] = {{"s", ex.s},
                        {"order0", ex.order0},
                        {"order1", ex.order1},
                        {"order2_U", ex.order2_U},
                        {"order2_Omega", ex.order2_Omega},
                        {"total", ex.total}};
      j["in_window"] = spec.in_window(s);
      Sink sink(output, out);
      *sink << j.dump(2) << '\n';
      return kExitOk;
    }
    if (*lp) {
      const auto f = FieldData::load(fields);
      SpectralFunction h;
      if (family == "heat")
        h = SpectralFunction::heat_kernel(t);
      else if (family == "resolvent") {
        h = SpectralFunction::massive_resolvent(m2);
        h.s_min = s_min;
      } else
        throw ConfigError("unknown family '" + family + "'");
      const double v = laplace_trace(f, h, cfg);
      Sink sink(output, out);
      *sink << nlohmann::ordered_json{{"family", family}, {"value", v}}.dump(2)
            << '\n';
      return kExitOk;
    }
    return kExitUsage;
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Error &e) {
    err << e.what() << '\n';
    return is_usage_error(e) ? kExitUsage : kExitFailure;
  } catch (const std::exception &e) {
    err << e.what() << '\n';
    return kExitFailure;
  }
}

} // namespace hk::cli

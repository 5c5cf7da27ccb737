#include "mrmc/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mrmc/energy.hpp"
#include "mrmc/heatmap.hpp"
#include "mrmc/lp.hpp"
#include "mrmc/model.hpp"
#include "mrmc/scheduling.hpp"
#include "mrmc/sweep.hpp"

namespace mrmc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt9(double v) {
  if (v == 0.0) v = 0.0;  // canonicalize negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// CSV and JSON must carry identical numeric values, so both use the value
// rounded to 9 significant digits.
double round9(double v) { return std::strtod(fmt9(v).c_str(), nullptr); }

std::string sanitize_status(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

struct CommonArgs {
  std::string input;
  std::vector<std::string> generate;
  std::string channels;
  std::string radios;
  std::string strategy = "colgen";
  std::string rho;
  std::string bandwidth;
  double e_tx = -1.0, e_rx = -1.0, p0 = -1.0;
  int workers = 1;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool lenient = false;
  bool stable_output = false;
  int max_columns = 0;
  double time_limit_ms = 0;
  std::string dump_lp;
  std::string dump_mdcg;
};

void add_common_options(CLI::App* cmd, CommonArgs* a, bool with_ranges) {
  cmd->add_option("--input", a->input, "topology JSON file")->envname("MRMC_INPUT");
  cmd->add_option("--generate", a->generate,
                  "random topology spec: key=value... (n, area, commodities, comm, interference, "
                  "radios, channels, demand, rate)")
      ->expected(-1);
  cmd->add_option("--channels", a->channels,
                  with_ranges ? "channel range A..B (default 1..8)" : "channel count")
      ->envname("MRMC_CHANNELS");
  cmd->add_option("--radios", a->radios,
                  with_ranges ? "radio range A..B (default 1..4)" : "radios per node")
      ->envname("MRMC_RADIOS");
  cmd->add_option("--strategy", a->strategy, "full|colgen (default colgen)")
      ->envname("MRMC_STRATEGY");
  cmd->add_option("--bandwidth", a->bandwidth, "per-channel[=R] | total=W")
      ->envname("MRMC_BANDWIDTH");
  cmd->add_option("--e-tx", a->e_tx, "transmit energy per bit")->envname("MRMC_E_TX");
  cmd->add_option("--e-rx", a->e_rx, "receive energy per bit")->envname("MRMC_E_RX");
  cmd->add_option("--p0", a->p0, "sleep power (default 1% of e_tx+e_rx)")->envname("MRMC_P0");
  cmd->add_option("--workers", a->workers, "parallel grid workers")->envname("MRMC_WORKERS");
  cmd->add_option("--seed", a->seed, "generation seed")->envname("MRMC_SEED");
  cmd->add_option("--out", a->out_dir, "output directory (default .)")->envname("MRMC_OUT");
  cmd->add_flag("--lenient", a->lenient, "warn instead of failing on unknown topology fields");
  cmd->add_flag("--stable-output", a->stable_output,
                "zero wall-clock fields for byte-reproducible outputs");
  cmd->add_option("--max-columns", a->max_columns, "column-generation cap (0 = unlimited)");
  cmd->add_option("--time-limit-ms", a->time_limit_ms, "per-configuration solve cutoff");
}

std::pair<int, int> parse_range(const std::string& text, const char* what) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw ParseError(std::string("cannot parse ") + what + " range '" + text + "'");
  }
}

std::vector<double> parse_rho_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ParseError("cannot parse rho value '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw ParseError("empty rho list");
  return out;
}

GenerateParams parse_generate(const std::vector<std::string>& kvs, std::uint64_t seed) {
  GenerateParams p;
  p.seed = seed;
  for (const auto& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("generate spec '" + kv + "' is not key=value");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    try {
      if (key == "n")
        p.nodes = std::stoi(value);
      else if (key == "area")
        p.area_side = std::stod(value);
      else if (key == "commodities")
        p.commodities = std::stoi(value);
      else if (key == "comm")
        p.comm_range = std::stod(value);
      else if (key == "interference")
        p.interference_range = std::stod(value);
      else if (key == "radios")
        p.radios = std::stoi(value);
      else if (key == "channels")
        p.channels = std::stoi(value);
      else if (key == "demand")
        p.demand = std::stod(value);
      else if (key == "rate")
        p.bandwidth.rate = std::stod(value);
      else if (key == "seed")
        p.seed = std::stoull(value);
      else
        throw ParseError("unknown generate key '" + key + "'");
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("cannot parse generate value '" + kv + "'");
    }
  }
  return p;
}

Topology make_topology(const CommonArgs& a, std::vector<std::string>* warnings) {
  if (!a.input.empty() && !a.generate.empty())
    throw ParseError("use exactly one of --input and --generate");
  Topology t;
  if (!a.input.empty()) {
    LoadResult loaded = load_topology_file(a.input, {.strict = !a.lenient});
    *warnings = loaded.warnings;
    t = std::move(loaded.topology);
  } else if (!a.generate.empty()) {
    t = generate_random(parse_generate(a.generate, a.seed));
  } else {
    throw ParseError("an input source is required: --input PATH or --generate k=v...");
  }

  if (!a.bandwidth.empty()) {
    const std::string& b = a.bandwidth;
    if (b == "per-channel") {
      t.bandwidth.mode = BandwidthMode::PerChannelFixed;
    } else if (b.rfind("per-channel=", 0) == 0) {
      t.bandwidth.mode = BandwidthMode::PerChannelFixed;
      t.bandwidth.rate = std::stod(b.substr(12));
    } else if (b.rfind("total=", 0) == 0) {
      t.bandwidth.mode = BandwidthMode::TotalFixed;
      t.bandwidth.rate = std::stod(b.substr(6));
    } else {
      throw ParseError("cannot parse --bandwidth '" + b + "'");
    }
  }
  if (a.e_tx >= 0.0) t.energy.e_tx = a.e_tx;
  if (a.e_rx >= 0.0) t.energy.e_rx = a.e_rx;
  if (a.e_tx >= 0.0 || a.e_rx >= 0.0)
    t.energy.p0_sleep = 0.01 * (t.energy.e_tx + t.energy.e_rx);
  if (a.p0 >= 0.0) t.energy.p0_sleep = a.p0;
  validate_topology(t);
  return t;
}

TwoStageOptions solve_options(const CommonArgs& a) {
  TwoStageOptions o;
  if (a.strategy == "full")
    o.strategy = Strategy::FullEnumeration;
  else if (a.strategy == "colgen")
    o.strategy = Strategy::ColumnGeneration;
  else
    throw ParseError("--strategy must be full or colgen");
  o.max_columns = a.max_columns;
  o.time_limit_ms = a.time_limit_ms;
  return o;
}

json plan_summary(const SchedulePlan& plan, const Topology& t, bool with_members) {
  json j;
  j["lambda"] = round9(plan.lambda);
  j["sum_alpha"] = round9(plan.sum_alpha());
  json sets = json::array();
  for (std::size_t m = 0; m < plan.active_sets.size(); ++m) {
    json s;
    s["alpha"] = round9(plan.alphas[m]);
    s["size"] = plan.active_sets[m].members.size();
    if (with_members) s["tuples"] = plan.active_sets[m].members;
    sets.push_back(std::move(s));
  }
  j["active_sets"] = std::move(sets);
  json rates = json::array();
  for (const auto& c : t.commodities) rates.push_back(round9(plan.lambda * c.demand));
  j["commodity_rates"] = std::move(rates);
  return j;
}

const char* kCsvHeader =
    "channels,radios,capacity,E,E0,throughput,EE,EE_star,EE_fraction,status,wall_ms\n";

std::string csv_row(const ConfigResult& r, bool stable) {
  std::string row = std::to_string(r.config.channels) + "," + std::to_string(r.config.radios) +
                    "," + fmt9(round9(r.capacity)) + "," + fmt9(round9(r.report.e_transmission)) +
                    "," + fmt9(round9(r.report.e_sleep)) + "," + fmt9(round9(r.report.throughput)) +
                    "," + fmt9(round9(r.report.efficiency)) + ",";
  if (r.report.has_upper_bound)
    row += fmt9(round9(r.report.upper_bound)) + "," + fmt9(round9(r.report.efficiency_fraction));
  else
    row += ",";
  row += "," + sanitize_status(r.status) + "," + fmt9(stable ? 0.0 : round9(r.wall_ms)) + "\n";
  return row;
}

json result_json(const ConfigResult& r, const Topology& t, bool stable, bool with_members) {
  json j;
  j["channels"] = r.config.channels;
  j["radios"] = r.config.radios;
  j["capacity"] = round9(r.capacity);
  j["E"] = round9(r.report.e_transmission);
  j["E0"] = round9(r.report.e_sleep);
  j["throughput"] = round9(r.report.throughput);
  j["EE"] = round9(r.report.efficiency);
  if (r.report.has_upper_bound) {
    j["EE_star"] = round9(r.report.upper_bound);
    j["EE_fraction"] = round9(r.report.efficiency_fraction);
  }
  j["status"] = sanitize_status(r.status);
  j["wall_ms"] = stable ? 0.0 : round9(r.wall_ms);
  j["solver"] = {{"iterations", r.stats.simplex_iterations},
                 {"pricing_rounds", r.stats.pricing_rounds},
                 {"columns", r.stats.columns}};
  if (r.status == "ok" || r.status == "capped") j["plan"] = plan_summary(r.plan, t, with_members);
  return j;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

// solve/relax accept a single optional config; absent flags mean "run the
// topology as it is".
std::optional<CrConfig> single_config(const CommonArgs& a) {
  if (a.channels.empty() && a.radios.empty()) return std::nullopt;
  CrConfig c;
  const auto [cl, ch] = a.channels.empty() ? std::pair<int, int>{0, 0}
                                           : parse_range(a.channels, "--channels");
  const auto [rl, rh] = a.radios.empty() ? std::pair<int, int>{0, 0}
                                         : parse_range(a.radios, "--radios");
  if (cl != ch || rl != rh)
    throw ParseError("this command takes single --channels/--radios values, not ranges");
  c.channels = cl;
  c.radios = rl;
  return c;
}

int uniform_radios(const Topology& t) {
  int r = t.nodes[0].radios;
  for (const auto& n : t.nodes)
    if (n.radios != r) return -1;
  return r;
}

int cmd_solve(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  Topology base = make_topology(a, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";

  std::optional<CrConfig> config = single_config(a);
  Topology t = base;
  if (config) {
    if (config->channels == 0) config->channels = base.channels;
    if (config->radios == 0) config->radios = uniform_radios(base);
    if (config->radios <= 0)
      throw ParseError("--radios is required for non-uniform topologies");
    t = apply_config(base, *config);
  }
  const CrConfig effective{t.channels, uniform_radios(t)};

  if (!a.dump_mdcg.empty() || !a.dump_lp.empty()) {
    const std::vector<Tuple> tuples = enumerate_tuples(t);
    const ConflictGraph graph = build_mdcg(tuples, t);
    if (!a.dump_mdcg.empty()) write_file(a.dump_mdcg, graph.edge_list());
    if (!a.dump_lp.empty()) {
      const auto sets = enumerate_maximal_is(graph, kDefaultMaximalIsCap);
      write_file(a.dump_lp, write_lp_format(build_capacity_lp(tuples, sets, t).problem));
    }
  }

  ConfigResult r = run_config(t, effective, solve_options(a));
  if (r.status.rfind("error", 0) == 0) throw Error(r.status);

  fs::create_directories(a.out_dir);
  write_file(fs::path(a.out_dir) / "results.csv", std::string(kCsvHeader) + csv_row(r, a.stable_output));
  json doc;
  doc["command"] = "solve";
  doc["results"] = json::array({result_json(r, t, a.stable_output, true)});
  write_file(fs::path(a.out_dir) / "results.json", doc.dump(2) + "\n");

  out << "capacity " << fmt9(round9(r.capacity)) << "  EE " << fmt9(round9(r.report.efficiency));
  if (r.report.has_upper_bound)
    out << "  EE* " << fmt9(round9(r.report.upper_bound)) << "  fraction "
        << fmt9(round9(r.report.efficiency_fraction));
  out << "\n";
  return 0;
}

int cmd_sweep(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  Topology base = make_topology(a, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";

  const auto [cl, ch] = a.channels.empty() ? std::pair<int, int>{1, 8}
                                           : parse_range(a.channels, "--channels");
  const auto [rl, rh] = a.radios.empty() ? std::pair<int, int>{1, 4}
                                         : parse_range(a.radios, "--radios");

  SweepOptions options;
  options.solve = solve_options(a);
  options.workers = a.workers;
  const std::vector<ConfigResult> grid = sweep_cr(base, cl, ch, rl, rh, options);

  fs::create_directories(a.out_dir);
  std::string csv = kCsvHeader;
  json results = json::array();
  for (const auto& r : grid) {
    csv += csv_row(r, a.stable_output);
    results.push_back(result_json(r, base, a.stable_output, false));
  }
  write_file(fs::path(a.out_dir) / "results.csv", csv);
  json doc;
  doc["command"] = "sweep";
  doc["results"] = std::move(results);
  write_file(fs::path(a.out_dir) / "results.json", doc.dump(2) + "\n");
  write_file(fs::path(a.out_dir) / "heatmap_capacity.svg",
             render_heatmap(grid, HeatmapMetric::Capacity));
  write_file(fs::path(a.out_dir) / "heatmap_ee.svg",
             render_heatmap(grid, HeatmapMetric::Efficiency));

  int best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i].report.efficiency > grid[best].report.efficiency) best = static_cast<int>(i);
  out << grid.size() << " configurations; best EE " << fmt9(round9(grid[best].report.efficiency))
      << " at (" << grid[best].config.channels << "," << grid[best].config.radios << ")\n";
  return 0;
}

int cmd_relax(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  if (a.rho.empty()) throw ParseError("relax requires --rho LIST");
  const std::vector<double> fractions = parse_rho_list(a.rho);
  std::vector<std::string> warnings;
  Topology base = make_topology(a, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";

  std::optional<CrConfig> config = single_config(a);
  CrConfig effective{base.channels, uniform_radios(base)};
  if (config) {
    if (config->channels > 0) effective.channels = config->channels;
    if (config->radios > 0) effective.radios = config->radios;
  }
  if (effective.radios <= 0) throw ParseError("--radios is required for non-uniform topologies");

  const auto points = relaxation_sweep(base, effective, fractions, solve_options(a));
  const Topology t = apply_config(base, effective);

  fs::create_directories(a.out_dir);
  std::string csv = "rho,throughput,E,E0,EE,EE_star,EE_fraction,status,wall_ms\n";
  json results = json::array();
  for (const auto& p : points) {
    csv += fmt9(round9(p.rho)) + std::string(",") + fmt9(round9(p.report.throughput)) + "," +
           fmt9(round9(p.report.e_transmission)) + "," + fmt9(round9(p.report.e_sleep)) + "," +
           fmt9(round9(p.report.efficiency)) + ",";
    if (p.report.has_upper_bound)
      csv += fmt9(round9(p.report.upper_bound)) + "," + fmt9(round9(p.report.efficiency_fraction));
    else
      csv += ",";
    csv += ",ok," + fmt9(a.stable_output ? 0.0 : round9(p.wall_ms)) + "\n";

    json j;
    j["rho"] = round9(p.rho);
    j["throughput"] = round9(p.report.throughput);
    j["E"] = round9(p.report.e_transmission);
    j["E0"] = round9(p.report.e_sleep);
    j["EE"] = round9(p.report.efficiency);
    if (p.report.has_upper_bound) {
      j["EE_star"] = round9(p.report.upper_bound);
      j["EE_fraction"] = round9(p.report.efficiency_fraction);
    }
    j["status"] = "ok";
    j["wall_ms"] = a.stable_output ? 0.0 : round9(p.wall_ms);
    j["plan"] = plan_summary(p.plan, t, false);
    results.push_back(std::move(j));
  }
  write_file(fs::path(a.out_dir) / "relaxation.csv", csv);
  json doc;
  doc["command"] = "relax";
  doc["channels"] = effective.channels;
  doc["radios"] = effective.radios;
  doc["results"] = std::move(results);
  write_file(fs::path(a.out_dir) / "results.json", doc.dump(2) + "\n");

  out << points.size() << " relaxation points written\n";
  return 0;
}

int cmd_bound(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const Topology t = make_topology(a, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  const double bound = ee_upper_bound(t);
  out << "EE* = " << fmt9(round9(bound)) << "\n";
  for (const auto& c : t.commodities)
    out << t.nodes[c.source].id << " -> " << t.nodes[c.destination].id << ": "
        << shortest_path_hops(t, c) << " hops\n";
  return 0;
}

int cmd_validate(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  if (a.input.empty()) throw ParseError("validate requires --input PATH");
  std::vector<std::string> warnings;
  const Topology t = make_topology(a, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  out << "ok: " << t.nodes.size() << " nodes, " << t.commodities.size() << " commodities, "
      << t.channels << " channels\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MR-MC network capacity and energy-efficiency solver"};
  app.require_subcommand(1);

  CommonArgs a;
  CLI::App* solve = app.add_subcommand("solve", "solve one configuration");
  add_common_options(solve, &a, false);
  solve->add_option("--dump-lp", a.dump_lp, "write the capacity LP in LP text format");
  solve->add_option("--dump-mdcg", a.dump_mdcg, "write the conflict graph edge list");
  CLI::App* sweep = app.add_subcommand("sweep", "sweep a channel x radio grid");
  add_common_options(sweep, &a, true);
  CLI::App* relax = app.add_subcommand("relax", "trade throughput for efficiency");
  add_common_options(relax, &a, false);
  relax->add_option("--rho", a.rho, "comma-separated throughput fractions in (0,1]")
      ->envname("MRMC_RHO");
  CLI::App* bound = app.add_subcommand("bound", "print the efficiency upper bound");
  add_common_options(bound, &a, false);
  CLI::App* validate = app.add_subcommand("validate", "validate a topology file");
  add_common_options(validate, &a, false);

  std::vector<const char*> argv;
  argv.push_back("mrmc");
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(a, out, err);
    if (sweep->parsed()) return cmd_sweep(a, out, err);
    if (relax->parsed()) return cmd_relax(a, out, err);
    if (bound->parsed()) return cmd_bound(a, out, err);
    if (validate->parsed()) return cmd_validate(a, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mrmc

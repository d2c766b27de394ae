#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "embedplan/engine.hpp"
#include "embedplan/log.hpp"
#include "embedplan/planner.hpp"
#include "embedplan/report.hpp"
#include "embedplan/simulator.hpp"
#include "embedplan/spec_io.hpp"
#include "embedplan/synthetic.hpp"
#include "json.hpp"

namespace {

using namespace embedplan;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 4;

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

struct PlanFlags {
  std::string plan_path;   // load instead of planning
  bool no_cartesian = false;
  bool oracle = false;
  std::uint64_t product_cap = kDefaultProductCapBytes;
  int oracle_limit = 8;
};

void add_plan_flags(CLI::App* cmd, PlanFlags& flags, bool with_plan_file) {
  cmd->add_flag("--no-cartesian", flags.no_cartesian, "plan without Cartesian products");
  cmd->add_option("--product-cap", flags.product_cap, "max bytes for a materialized product");
  if (with_plan_file)
    cmd->add_option("--plan", flags.plan_path, "use a previously emitted plan file");
}

PlanResult make_plan(const SpecDocument& doc, const PlanFlags& flags, double* wall_ms) {
  auto start = std::chrono::steady_clock::now();
  PlanResult result;
  if (!flags.plan_path.empty()) {
    PlacementPlan plan = plan_from_json(read_text_file(flags.plan_path));
    validate_plan(doc.model, doc.hierarchy, plan);
    result = PlanResult{plan, cost(doc.model, plan, doc.hierarchy)};
  } else if (flags.oracle) {
    BruteForceOptions opts;
    opts.limit = flags.oracle_limit;
    opts.product_cap_bytes = flags.product_cap;
    result = brute_force_plan(doc.model, doc.hierarchy, opts);
  } else {
    PlannerOptions opts;
    opts.enable_cartesian = !flags.no_cartesian;
    opts.product_cap_bytes = flags.product_cap;
    result = heuristic_plan(doc.model, doc.hierarchy, opts);
  }
  if (wall_ms) *wall_ms = ms_since(start);
  return result;
}

int cmd_gen(const std::string& profile_name, int tables, std::uint64_t seed,
            const std::string& out_path) {
  SizeProfile profile = SizeProfile::by_name(profile_name);
  int count = tables;
  if (count == 0) {
    if (profile.scalable)
      throw ValidationError("--tables", "the default profile needs an explicit table count");
    count = profile.natural_count();
  }
  SpecDocument doc;
  doc.model = generate_synthetic(count, profile, seed);
  std::string text = save_spec(doc);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
    log_info("wrote " + out_path);
  }
  return kExitOk;
}

int cmd_plan(const std::string& spec_path, const PlanFlags& flags, const std::string& out_path) {
  SpecDocument doc = load_spec_file(spec_path);
  double wall_ms = 0;
  PlanResult result = make_plan(doc, flags, &wall_ms);
  if (!out_path.empty()) write_text_file(out_path, plan_to_json(result.plan, result.cost));
  RunReport report = make_run_report(spec_digest(doc), result.plan, result.cost, wall_ms);
  std::cout << run_report_to_json(report);
  return kExitOk;
}

int cmd_simulate(const std::string& spec_path, const PlanFlags& flags, std::uint64_t items,
                 const PipelineConfig& pipeline, const std::string& csv_path) {
  SpecDocument doc = load_spec_file(spec_path);
  double wall_ms = 0;
  PlanResult result = make_plan(doc, flags, &wall_ms);
  SimulationReport sim = simulate_pipeline(doc.model, result.cost, pipeline, items);
  if (!csv_path.empty()) write_text_file(csv_path, report_stages_csv(sim));
  RunReport report = make_run_report(spec_digest(doc), result.plan, result.cost, wall_ms);
  report.has_simulation = true;
  report.simulation = sim;
  std::cout << run_report_to_json(report);
  return kExitOk;
}

int cmd_run(const std::string& spec_path, const PlanFlags& flags, const std::string& query_path,
            int precision_bits, std::uint64_t seed, bool parallel, const std::string& out_path) {
  SpecDocument doc = load_spec_file(spec_path);
  PlanResult result = make_plan(doc, flags, nullptr);

  EngineOptions options;
  options.parallel_lookup = parallel;
  EmbeddingStore store = EmbeddingStore::build(doc.model, result.plan, seed, options);
  MlpWeights weights = make_mlp_weights(doc.model, seed + 1);
  Precision precision = precision_bits == 16 ? Precision::bits16 : Precision::bits32;

  std::ifstream in(query_path);
  if (!in) throw ParseError("cannot open " + query_path);
  std::ostream* out = &std::cout;
  std::ofstream out_file;
  if (!out_path.empty()) {
    out_file.open(out_path);
    if (!out_file) throw std::runtime_error("cannot write " + out_path);
    out = &out_file;
  }

  std::string line;
  std::size_t line_no = 0;
  char buf[32];
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw ParseError("query line " + std::to_string(line_no) + ": invalid JSON");
    }
    if (!parsed.is_array())
      throw ParseError("query line " + std::to_string(line_no) + ": expected an array of indices");
    Query query;
    for (const auto& v : parsed) {
      if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ParseError("query line " + std::to_string(line_no) + ": indices must be integers");
      if (v.is_number_integer() && v.get<std::int64_t>() < 0)
        throw ValidationError("query line " + std::to_string(line_no), "indices must be >= 0");
      query.indices.push_back(v.get<std::uint64_t>());
    }
    float ctr;
    try {
      std::vector<float> dense = store.lookup_concat(query);
      ctr = mlp_forward(weights, dense, precision);
    } catch (const ValidationError& err) {
      throw ValidationError("query line " + std::to_string(line_no), err.what());
    }
    std::snprintf(buf, sizeof buf, "%.8f\n", static_cast<double>(ctr));
    *out << buf;
  }
  return kExitOk;
}

int cmd_compare(int n_min, int n_max, int seeds, std::uint64_t base_seed,
                const std::string& out_path) {
  if (n_min < 1 || n_max < n_min)
    throw ValidationError("--n-min/--n-max", "need 1 <= n-min <= n-max");
  BruteForceOptions oracle_opts;
  if (n_max > oracle_opts.limit)
    throw ValidationError("--n-max", "oracle refuses more than " +
                                         std::to_string(oracle_opts.limit) + " tables");
  std::ostringstream csv;
  csv << "n,instances,matches,match_rate,mean_latency_ratio,max_latency_ratio\n";
  for (int n = n_min; n <= n_max; ++n) {
    int matches = 0;
    double ratio_sum = 0, ratio_max = 0;
    for (int s = 0; s < seeds; ++s) {
      ComparisonInstance inst =
          comparison_instance(n, base_seed + static_cast<std::uint64_t>(s) * 1000003ull);
      PlanResult heuristic = heuristic_plan(inst.model, inst.hierarchy);
      PlanResult oracle = brute_force_plan(inst.model, inst.hierarchy, oracle_opts);
      double ratio = heuristic.cost.lookup_latency_ns / oracle.cost.lookup_latency_ns;
      if (heuristic.cost.lookup_latency_ns == oracle.cost.lookup_latency_ns) ++matches;
      ratio_sum += ratio;
      ratio_max = std::max(ratio_max, ratio);
    }
    char line[160];
    std::snprintf(line, sizeof line, "%d,%d,%d,%.4f,%.6f,%.6f\n", n, seeds, matches,
                  static_cast<double>(matches) / seeds, ratio_sum / seeds, ratio_max);
    csv << line;
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << csv.str();
  } else {
    write_text_file(out_path, csv.str());
    log_info("wrote " + out_path);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"embedding-table placement planner and inference model"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic model spec");
  std::string gen_profile = "default";
  int gen_tables = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--profile", gen_profile, "default, table3-small or table3-large");
  gen->add_option("--tables", gen_tables, "table count (scalable profiles)");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out,-o", gen_out, "output path (default stdout)");

  // plan
  auto* plan = app.add_subcommand("plan", "search a placement for a spec");
  std::string plan_spec, plan_out;
  PlanFlags plan_flags;
  plan->add_option("--spec,spec", plan_spec, "model spec JSON")->required();
  plan->add_option("--out,-o", plan_out, "write the full plan JSON here");
  plan->add_flag("--oracle", plan_flags.oracle, "exhaustive search (small models only)");
  plan->add_option("--oracle-limit", plan_flags.oracle_limit, "table limit for --oracle");
  add_plan_flags(plan, plan_flags, false);

  // simulate
  auto* sim = app.add_subcommand("simulate", "pipeline latency/throughput model");
  std::string sim_spec, sim_csv;
  PlanFlags sim_flags;
  std::uint64_t sim_items = 1;
  PipelineConfig pipeline;
  sim->add_option("--spec,spec", sim_spec, "model spec JSON")->required();
  sim->add_option("--items", sim_items, "stream length")->check(CLI::PositiveNumber);
  sim->add_option("--csv", sim_csv, "write per-stage CSV here");
  sim->add_option("--macs", pipeline.parallel_macs, "parallel MAC units");
  sim->add_option("--clock-ghz", pipeline.clock_ghz, "accelerator clock");
  sim->add_option("--broadcast-ns", pipeline.broadcast_ns, "per-layer broadcast stage time");
  sim->add_option("--gather-ns", pipeline.gather_ns, "per-layer gather stage time");
  sim->add_option("--lookup-overhead-ns", pipeline.lookup_overhead_ns,
                  "fixed per-lookup overhead");
  add_plan_flags(sim, sim_flags, true);

  // run
  auto* run = app.add_subcommand("run", "functional lookup + MLP inference");
  std::string run_spec, run_queries, run_out;
  PlanFlags run_flags;
  int run_precision = 32;
  std::uint64_t run_seed = 0;
  bool run_parallel = false;
  run->add_option("--spec,spec", run_spec, "model spec JSON")->required();
  run->add_option("--queries", run_queries, "JSONL file, one index array per line")->required();
  run->add_option("--precision", run_precision, "16 or 32")
      ->check(CLI::IsMember({16, 32}));
  run->add_option("--seed", run_seed, "store/weight seed");
  run->add_flag("--parallel", run_parallel, "parallel per-table lookups");
  run->add_option("--out,-o", run_out, "output path (default stdout)");
  add_plan_flags(run, run_flags, true);

  // compare
  auto* cmp = app.add_subcommand("compare", "heuristic vs oracle statistics");
  int cmp_nmin = 4, cmp_nmax = 8, cmp_seeds = 100;
  std::uint64_t cmp_seed = 0;
  std::string cmp_out;
  cmp->add_option("--n-min", cmp_nmin, "smallest table count");
  cmp->add_option("--n-max", cmp_nmax, "largest table count");
  cmp->add_option("--seeds", cmp_seeds, "instances per table count")->check(CLI::PositiveNumber);
  cmp->add_option("--seed", cmp_seed, "base seed");
  cmp->add_option("--out,-o", cmp_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_profile, gen_tables, gen_seed, gen_out);
    if (plan->parsed()) return cmd_plan(plan_spec, plan_flags, plan_out);
    if (sim->parsed()) return cmd_simulate(sim_spec, sim_flags, sim_items, pipeline, sim_csv);
    if (run->parsed())
      return cmd_run(run_spec, run_flags, run_queries, run_precision, run_seed, run_parallel,
                     run_out);
    if (cmp->parsed()) return cmd_compare(cmp_nmin, cmp_nmax, cmp_seeds, cmp_seed, cmp_out);
  } catch (const ParseError& err) {
    log_error(err.what());
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  } catch (const InfeasibleError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

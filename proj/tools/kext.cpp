// kext — command-line front end: profiles, designs, generated tables,
// balance sampling, seed search, extractor verification, full pipeline.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "CLI11.hpp"
#include "kext/errors.hpp"
#include "kext/pipeline.hpp"

using namespace kext;

namespace {

std::string cache_dir_from_env() {
  const char* dir = std::getenv("KEXTRACT_CACHE_DIR");
  return dir ? dir : "";
}

void emit(const Json& report, const std::string& path) {
  if (path.empty())
    std::cout << dump_report(report);
  else
    write_report_file(path, report);
}

Design design_from_spec(const std::string& spec) {
  if (spec.rfind("poly:", 0) == 0 || spec.rfind("greedy:", 0) == 0 || spec.rfind("file:", 0) == 0) {
    ExperimentConfig helper;
    helper.design_spec = spec;
    return generator_from_config(helper).design;
  }
  return load_design_file(spec);
}

Predicate predicate_from_spec(const std::string& spec) {
  ExperimentConfig helper;
  helper.predicate_spec = spec;
  helper.design_spec = "poly:3,2";  // placeholder; only the predicate is used
  return generator_from_config(helper).predicate;
}

ExtractorParams params_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open params file " + path);
  ExtractorParams params;
  std::string line;
  int line_no = 0;
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("params line " + std::to_string(line_no) + ": expected key=value");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto need = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(std::string("params: missing key ") + key);
    return std::stoi(it->second);
  };
  params.n = need("n");
  params.m = need("m");
  params.s = need("s");
  params.k = need("k");
  params.delta = need("delta");
  params.c = need("c");
  params.mu = need("mu");
  params.l_max = need("lmax");
  params.pair_l_max = need("pair_lmax");
  if (kv.count("bmult")) params.b_mult = Rational::parse(kv["bmult"]);
  params.validate();
  return params;
}

int run_app(int argc, char** argv) {
  CLI::App app{"kextract: a desk-scale laboratory for space-bounded Kolmogorov extractors"};
  app.require_subcommand(1);
  const std::string cache_dir = cache_dir_from_env();

  // ---- profile ----
  auto* profile_cmd = app.add_subcommand("profile", "Compute or inspect a complexity profile");
  int pr_n = 1, pr_s = 1, pr_lmax = 0, pr_jobs = 1;
  std::string pr_cond, pr_out, pr_in;
  profile_cmd->add_option("--n", pr_n, "String length")->check(CLI::Range(0, 16));
  profile_cmd->add_option("--s", pr_s, "Space bound (work cells)");
  profile_cmd->add_option("--lmax", pr_lmax, "Max program bit length to enumerate");
  profile_cmd->add_option("--cond", pr_cond, "Condition string, e.g. 101 (default empty)");
  profile_cmd->add_option("--jobs", pr_jobs, "Worker threads");
  profile_cmd->add_option("--out", pr_out, "Write the profile file here (default stdout)");
  profile_cmd->add_option("--in", pr_in, "Load and summarize an existing profile file instead");
  profile_cmd->callback([&] {
    if (!pr_in.empty()) {
      ComplexityProfile p = load_profile_file(pr_in);
      std::cout << dump_report(json_of(p));
      return;
    }
    ComplexityProfile p = cached_profile(cache_dir, pr_n, BitString(pr_cond), pr_s, pr_lmax, pr_jobs);
    if (pr_out.empty())
      save_profile(std::cout, p);
    else
      save_profile_file(pr_out, p);
  });

  // ---- design ----
  auto* design_cmd = app.add_subcommand("design", "Build, validate or print a combinatorial design");
  std::string de_poly, de_greedy, de_in, de_out;
  bool de_validate = false, de_print = false;
  design_cmd->add_option("--poly", de_poly, "Polynomial design q,d over the prime field Z_q");
  design_cmd->add_option("--greedy", de_greedy, "Greedy design l,t,rho,nsets");
  design_cmd->add_option("--in", de_in, "Load a design file");
  design_cmd->add_option("--out", de_out, "Write the design here (default stdout)");
  design_cmd->add_flag("--validate", de_validate, "Run the brute-force intersection audit");
  design_cmd->add_flag("--print", de_print, "Print the design to stdout");
  design_cmd->callback([&] {
    int sources = (!de_poly.empty() ? 1 : 0) + (!de_greedy.empty() ? 1 : 0) + (!de_in.empty() ? 1 : 0);
    if (sources != 1) throw ConfigError("design: give exactly one of --poly, --greedy, --in");
    Design d;
    if (!de_poly.empty()) d = design_from_spec("poly:" + de_poly);
    if (!de_greedy.empty()) d = design_from_spec("greedy:" + de_greedy);
    if (!de_in.empty()) d = load_design_file(de_in);
    if (de_validate) d.audit_intersections();
    if (!de_out.empty()) save_design_file(de_out, d);
    if (de_print || (de_out.empty() && !de_validate)) save_design(std::cout, d);
    if (de_validate) std::cerr << "design: intersection audit passed (" << d.sets.size() << " sets)\n";
  });

  // ---- nw ----
  auto* nw_cmd = app.add_subcommand("nw", "Emit a generated table in the table file format");
  std::string nw_design, nw_predicate = "parity", nw_out;
  std::uint64_t nw_seed = 0;
  int nw_n = 1, nw_m = 1;
  nw_cmd->add_option("--design", nw_design, "Design file or poly:/greedy: spec")->required();
  nw_cmd->add_option("--predicate", nw_predicate, "parity | table:path");
  nw_cmd->add_option("--seed", nw_seed, "Seed value (big-endian bits over the ground set)");
  nw_cmd->add_option("--n", nw_n, "Table input length")->required();
  nw_cmd->add_option("--m", nw_m, "Table colour length")->required();
  nw_cmd->add_option("--out", nw_out, "Output table file (default stdout)");
  nw_cmd->callback([&] {
    Generator g{design_from_spec(nw_design), predicate_from_spec(nw_predicate)};
    g.validate();
    Table t = table_from_seed(g, nw_seed, nw_n, nw_m);
    if (nw_out.empty())
      save_table(std::cout, t);
    else
      save_table_file(nw_out, t);
  });

  // ---- sample ----
  auto* sample_cmd = app.add_subcommand("sample", "Monte Carlo weak-balance pass fraction");
  int sa_n = 1, sa_m = 1, sa_k = 1, sa_q = 1, sa_jobs = 1;
  long long sa_trials = 1000;
  std::uint64_t sa_rng_seed = 1;
  std::string sa_profile, sa_colour_profile, sa_bmult = "201/100", sa_report;
  sample_cmd->add_option("--n", sa_n)->required();
  sample_cmd->add_option("--m", sa_m)->required();
  sample_cmd->add_option("--profile", sa_profile, "Profile file for the level sets")->required();
  sample_cmd->add_option("--colour-profile", sa_colour_profile, "Profile file for the palette")
      ->required();
  sample_cmd->add_option("--k", sa_k, "Lowest level");
  sample_cmd->add_option("--q", sa_q, "Palette level");
  sample_cmd->add_option("--bmult", sa_bmult, "Threshold multiplier as num/den");
  sample_cmd->add_option("--trials", sa_trials);
  sample_cmd->add_option("--rng-seed", sa_rng_seed);
  sample_cmd->add_option("--jobs", sa_jobs);
  sample_cmd->add_option("--report", sa_report, "Report JSON path (default stdout)");
  sample_cmd->callback([&] {
    ComplexityProfile inputs = load_profile_file(sa_profile);
    ComplexityProfile colours = load_profile_file(sa_colour_profile);
    if (inputs.n != sa_n || colours.n != sa_m)
      throw ConfigError("sample: profile lengths do not match --n/--m");
    SystemS sys_s = build_system_s(inputs, sa_k);
    SystemQ sys_q = build_system_q(colours, sa_q);
    SampleStats stats = sample_balance_fraction(sa_n, sa_m, sys_s, sys_q,
                                                Rational::parse(sa_bmult), sa_trials, sa_rng_seed,
                                                sa_jobs);
    emit(json_of(stats), sa_report);
  });

  // ---- search ----
  auto* search_cmd = app.add_subcommand("search", "Scan generator seeds for a good table");
  SearchParams se;
  std::string se_bmult = "201/100", se_mode = "plain", se_design, se_predicate = "parity";
  std::string se_range = "0..1", se_report;
  search_cmd->add_option("--n", se.n)->required();
  search_cmd->add_option("--m", se.m)->required();
  search_cmd->add_option("--s", se.s)->required();
  search_cmd->add_option("--k", se.k)->required();
  search_cmd->add_option("--q", se.q)->required();
  search_cmd->add_option("--lmax", se.l_max)->required();
  search_cmd->add_option("--bmult", se_bmult);
  search_cmd->add_option("--mode", se_mode, "plain | rainbow");
  search_cmd->add_option("--design", se_design, "Design file or poly:/greedy: spec")->required();
  search_cmd->add_option("--predicate", se_predicate, "parity | table:path");
  search_cmd->add_option("--seed-range", se_range, "a..b (half-open)");
  search_cmd->add_option("--jobs", se.jobs);
  search_cmd->add_option("--report", se_report, "Report JSON path (default stdout)");
  search_cmd->callback([&] {
    se.b_mult = Rational::parse(se_bmult);
    if (se_mode == "plain")
      se.mode = SearchMode::Plain;
    else if (se_mode == "rainbow")
      se.mode = SearchMode::Rainbow;
    else
      throw ConfigError("search: mode must be plain or rainbow");
    auto dots = se_range.find("..");
    if (dots == std::string::npos) throw ConfigError("search: seed range must be a..b");
    se.seed_begin = std::stoull(se_range.substr(0, dots));
    se.seed_end = std::stoull(se_range.substr(dots + 2));
    Generator g{design_from_spec(se_design), predicate_from_spec(se_predicate)};
    g.validate();
    se.validate(g.design.ground_size);

    BitString empty;
    ComplexityProfile inputs = cached_profile(cache_dir, se.n, empty, se.s, se.l_max, se.jobs);
    ComplexityProfile colours = cached_profile(cache_dir, se.m, empty, se.s, se.l_max, se.jobs);
    Systems systems;
    systems.s = build_system_s(inputs, se.k);
    systems.q = build_system_q(colours, se.q);
    if (se.mode == SearchMode::Rainbow) {
      std::map<std::uint32_t, ComplexityProfile> conditional;
      for (std::uint32_t v = 0; v < (1u << se.n); ++v)
        conditional.emplace(v, cached_profile(cache_dir, se.m, BitString::from_value(v, se.n),
                                              se.s, se.l_max, se.jobs));
      for (const LevelSet& anchor : systems.s.pairs)
        systems.r.tuples.push_back(build_system_r_tuple(anchor, conditional, se.q));
    }
    GoodSeedReport found = find_good_seed(g, se, systems);
    Json j;
    Json params;
    params["n"] = se.n;
    params["m"] = se.m;
    params["s"] = se.s;
    params["k"] = se.k;
    params["q"] = se.q;
    params["lmax"] = se.l_max;
    params["bmult"] = se.b_mult.str();
    params["mode"] = se_mode;
    params["seed_range"] = se_range;
    j["params"] = params;
    j["found_seed"] = found.found ? Json(*found.found) : Json(nullptr);
    j["seeds_checked"] = found.seeds_checked;
    j["elapsed_ms"] = found.elapsed_ms;
    emit(j, se_report);
  });

  // ---- verify ----
  auto* verify_cmd = app.add_subcommand("verify", "Check extractor properties of a table");
  std::string ve_table, ve_params, ve_mode = "plain", ve_oracle = "bvm", ve_report;
  int ve_jobs = 1;
  verify_cmd->add_option("--table", ve_table, "Table file")->required();
  verify_cmd->add_option("--params", ve_params, "Extractor params file (key=value)")->required();
  verify_cmd->add_option("--mode", ve_mode, "plain | strong | audit");
  verify_cmd->add_option("--oracle", ve_oracle, "bvm | stub:path");
  verify_cmd->add_option("--jobs", ve_jobs);
  verify_cmd->add_option("--report", ve_report, "Report JSON path (default stdout)");
  verify_cmd->callback([&] {
    if (ve_mode != "plain" && ve_mode != "strong" && ve_mode != "audit")
      throw ConfigError("verify: mode must be plain, strong or audit");
    ExtractorParams params = params_from_file(ve_params);
    Table table = load_table_file(ve_table);
    std::unique_ptr<ComplexityOracle> oracle;
    if (ve_oracle == "bvm") {
      oracle = std::make_unique<BvmOracle>(BvmOracle::build(params, cache_dir, ve_jobs));
    } else if (ve_oracle.rfind("stub:", 0) == 0) {
      oracle = std::make_unique<StubOracle>(StubOracle::load_file(ve_oracle.substr(5)));
    } else {
      throw ConfigError("verify: oracle must be bvm or stub:path");
    }
    if (ve_mode == "audit") {
      Systems systems = systems_from_oracle(*oracle, params, false);
      AuditReport audit = dichotomy_audit(table, params, *oracle, systems);
      Json j = json_of(audit);
      j["params"] = json_of(params);
      emit(j, ve_report);
    } else {
      VerificationReport report = ve_mode == "plain" ? verify_plain(table, params, *oracle)
                                                     : verify_strong(table, params, *oracle);
      emit(json_of(report, params), ve_report);
    }
  });

  // ---- pipeline ----
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run the full experiment from a config file");
  std::string pi_config, pi_outdir = "pipeline-out";
  int pi_jobs = 0;
  pipeline_cmd->add_option("--config", pi_config, "Flat key=value config file")->required();
  pipeline_cmd->add_option("--outdir", pi_outdir, "Directory for stage reports");
  pipeline_cmd->add_option("--jobs", pi_jobs, "Override the config's jobs value");
  pipeline_cmd->callback([&] {
    ExperimentConfig config = ExperimentConfig::parse_file(pi_config);
    if (pi_jobs > 0) config.jobs = pi_jobs;
    run_pipeline(config, pi_outdir, cache_dir);
    std::cerr << "pipeline: reports written to " << pi_outdir << "\n";
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

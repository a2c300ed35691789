#include "kext/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "kext/errors.hpp"

namespace kext {

namespace {

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + key + ": '" + text + "'");
  }
}

int parse_int(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + key + ": '" + text + "'");
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
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
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    if (!kv.emplace(key, value).second)
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }

  ExperimentConfig config;
  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("config: missing required key '" + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_default = [&](const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  config.params.n = parse_int(take("n"), "n");
  config.params.m = parse_int(take("m"), "m");
  config.params.s = parse_int(take("s"), "s");
  config.params.k = parse_int(take("k"), "k");
  config.params.delta = parse_int(take("delta"), "delta");
  config.params.c = parse_int(take("c"), "c");
  config.params.mu = parse_int(take("mu"), "mu");
  config.params.l_max = parse_int(take("lmax"), "lmax");
  config.params.pair_l_max = parse_int(take("pair_lmax"), "pair_lmax");
  try {
    config.params.b_mult = Rational::parse(take_default("bmult", "201/100"));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: bad bmult: ") + e.what());
  }

  std::string mode = take("mode");
  if (mode == "plain")
    config.mode = SearchMode::Plain;
  else if (mode == "rainbow")
    config.mode = SearchMode::Rainbow;
  else
    throw ConfigError("config: mode must be plain or rainbow, got '" + mode + "'");

  config.design_spec = take("design");
  config.predicate_spec = take_default("predicate", "parity");

  std::string range = take("seed_range");
  auto dots = range.find("..");
  if (dots == std::string::npos)
    throw ConfigError("config: seed_range must look like a..b, got '" + range + "'");
  config.seed_begin = parse_u64(range.substr(0, dots), "seed_range");
  config.seed_end = parse_u64(range.substr(dots + 2), "seed_range");
  if (config.seed_begin >= config.seed_end)
    throw ConfigError("config: empty seed range " + range);

  config.rng_seed = parse_u64(take_default("rng_seed", "1"), "rng_seed");
  config.jobs = parse_int(take_default("jobs", "1"), "jobs");
  if (config.jobs < 1) throw ConfigError("config: jobs >= 1 required");

  if (!kv.empty()) throw ConfigError("config: unknown key '" + kv.begin()->first + "'");
  config.params.validate();
  return config;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse(in);
}

void ExperimentConfig::serialize(std::ostream& out) const {
  out << "n=" << params.n << "\n"
      << "m=" << params.m << "\n"
      << "s=" << params.s << "\n"
      << "k=" << params.k << "\n"
      << "delta=" << params.delta << "\n"
      << "c=" << params.c << "\n"
      << "mu=" << params.mu << "\n"
      << "lmax=" << params.l_max << "\n"
      << "pair_lmax=" << params.pair_l_max << "\n"
      << "bmult=" << params.b_mult.str() << "\n"
      << "mode=" << (mode == SearchMode::Plain ? "plain" : "rainbow") << "\n"
      << "design=" << design_spec << "\n"
      << "predicate=" << predicate_spec << "\n"
      << "seed_range=" << seed_begin << ".." << seed_end << "\n"
      << "rng_seed=" << rng_seed << "\n"
      << "jobs=" << jobs << "\n";
}

namespace {

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ','))
    values.push_back(parse_int(part, what));
  return values;
}

}  // namespace

Generator generator_from_config(const ExperimentConfig& config) {
  Generator g;
  const std::string& spec = config.design_spec;
  if (spec.rfind("poly:", 0) == 0) {
    auto v = parse_int_list(spec.substr(5), "design");
    if (v.size() != 2) throw ConfigError("config: design poly:q,d needs two integers");
    g.design = poly_design(v[0], v[1]);
  } else if (spec.rfind("greedy:", 0) == 0) {
    auto v = parse_int_list(spec.substr(7), "design");
    if (v.size() != 4) throw ConfigError("config: design greedy:l,t,rho,nsets needs four integers");
    g.design = greedy_design(v[0], v[1], v[2], v[3]);
  } else if (spec.rfind("file:", 0) == 0) {
    std::string path = spec.substr(5);
    if (!std::filesystem::exists(path))
      throw ConfigError("config: design file does not exist: " + path);
    g.design = load_design_file(path);
  } else {
    throw ConfigError("config: design must be poly:..., greedy:... or file:..., got '" + spec + "'");
  }

  const std::string& pspec = config.predicate_spec;
  if (pspec == "parity") {
    g.predicate = Predicate::parity();
  } else if (pspec.rfind("table:", 0) == 0) {
    std::string path = pspec.substr(6);
    std::ifstream in(path);
    if (!in) throw ConfigError("config: predicate table file does not exist: " + path);
    std::string header, bits;
    int t = 0;
    if (!std::getline(in, header) || std::sscanf(header.c_str(), "predicate-v1 t=%d", &t) != 1)
      throw ConfigError("config: bad predicate file header in " + path);
    if (!std::getline(in, bits)) throw ConfigError("config: predicate file missing bits in " + path);
    g.predicate = Predicate::lookup(BitString(bits));
    if (g.predicate.table.size() != (1 << t))
      throw ConfigError("config: predicate table length does not match t in " + path);
  } else {
    throw ConfigError("config: predicate must be parity or table:path, got '" + pspec + "'");
  }
  g.validate();
  return g;
}

PipelineResult run_pipeline(const ExperimentConfig& config, const std::string& outdir,
                            const std::string& cache_dir) {
  auto t_start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(outdir);
  auto out_path = [&](const std::string& name) {
    return (std::filesystem::path(outdir) / name).string();
  };
  auto ms_since = [](std::chrono::steady_clock::time_point from) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - from).count();
  };

  Json summary;
  {
    std::ostringstream cfg;
    config.serialize(cfg);
    Json echo;
    std::istringstream lines(cfg.str());
    std::string line;
    while (std::getline(lines, line)) {
      auto eq = line.find('=');
      echo[line.substr(0, eq)] = line.substr(eq + 1);
    }
    summary["config"] = echo;
  }
  Json timing;

  // Stage 1: profiles (the oracle owns them all).
  auto t_stage = std::chrono::steady_clock::now();
  BvmOracle oracle = BvmOracle::build(config.params, cache_dir, config.jobs);
  timing["profiles_ms"] = ms_since(t_stage);
  {
    Json j;
    j["input_profile"] = json_of(oracle.input_profile());
    j["colour_profile"] = json_of(oracle.colour_profile());
    j["conditional_profiles"] = oracle.conditional_profiles().size();
    long long produced = 0;
    for (int v : oracle.pairs().min_len) produced += v <= oracle.pairs().pair_l_max;
    j["pairs"] = Json{{"pair_lmax", oracle.pairs().pair_l_max},
                      {"space", oracle.pairs().s},
                      {"produced_pairs", produced}};
    write_report_file(out_path("profiles.json"), j);
    summary["profiles"] = j;
  }

  // Stage 2: relevant systems.
  t_stage = std::chrono::steady_clock::now();
  Systems systems = systems_from_oracle(oracle, config.params, true);
  timing["systems_ms"] = ms_since(t_stage);
  {
    Json j = json_of(systems);
    write_report_file(out_path("systems.json"), j);
    summary["systems"] = j;
  }

  // Stage 3: generator.
  Generator generator = generator_from_config(config);
  long long needed_bits = (1ll << (2 * config.params.n)) * config.params.m;
  if (generator.output_length() < needed_bits)
    throw ConfigError("config: design provides " + std::to_string(generator.output_length()) +
                      " output bits, the table needs " + std::to_string(needed_bits));
  {
    Json j;
    j["design"] = Json{{"ground_size", generator.design.ground_size},
                       {"set_size", generator.design.set_size},
                       {"intersection_bound", generator.design.intersection_bound},
                       {"n_sets", generator.design.sets.size()}};
    j["predicate"] = config.predicate_spec;
    j["table_bits"] = needed_bits;
    write_report_file(out_path("generator.json"), j);
    summary["generator"] = j;
  }

  // Stage 4: seed search.
  SearchParams search;
  search.n = config.params.n;
  search.m = config.params.m;
  search.s = config.params.s;
  search.k = config.params.k;
  search.q = config.params.q();
  search.l_max = config.params.l_max;
  search.b_mult = config.params.b_mult;
  search.mode = config.mode;
  search.seed_begin = config.seed_begin;
  search.seed_end = config.seed_end;
  search.jobs = config.jobs;
  GoodSeedReport found = find_good_seed(generator, search, systems);
  timing["search_ms"] = found.elapsed_ms;
  {
    Json j;
    j["params"] = json_of(config.params);
    j["mode"] = config.mode == SearchMode::Plain ? "plain" : "rainbow";
    j["found_seed"] = found.found ? Json(*found.found) : Json(nullptr);
    j["seeds_checked"] = found.seeds_checked;
    j["elapsed_ms"] = found.elapsed_ms;
    write_report_file(out_path("search.json"), j);
    Json s = j;
    s.erase("elapsed_ms");
    summary["search"] = s;
  }

  // Stage 5: verification and audit of the found table.
  if (found.found) {
    Table table = table_from_seed(generator, *found.found, config.params.n, config.params.m);
    save_table_file(out_path("table.txt"), table);

    t_stage = std::chrono::steady_clock::now();
    VerificationReport plain = verify_plain(table, config.params, oracle);
    VerificationReport strong = verify_strong(table, config.params, oracle);
    AuditReport audit = dichotomy_audit(table, config.params, oracle, systems);
    timing["verify_ms"] = ms_since(t_stage);

    Json jp = json_of(plain, config.params);
    Json js = json_of(strong, config.params);
    Json ja = json_of(audit);
    write_report_file(out_path("verify_plain.json"), jp);
    write_report_file(out_path("verify_strong.json"), js);
    write_report_file(out_path("audit.json"), ja);
    summary["verify_plain"] = jp;
    summary["verify_strong"] = js;
    summary["audit"] = ja;
  } else {
    summary["verify_plain"] = nullptr;
    summary["verify_strong"] = nullptr;
    summary["audit"] = nullptr;
  }

  timing["total_ms"] = ms_since(t_start);
  summary["timing"] = timing;
  write_report_file(out_path("summary.json"), summary);

  PipelineResult result;
  result.summary = summary;
  result.exit_code = 0;
  return result;
}

}  // namespace kext

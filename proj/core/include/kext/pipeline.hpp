#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "kext/extractor.hpp"
#include "kext/reports.hpp"
#include "kext/seedsearch.hpp"

namespace kext {

/// One reproducible experiment, serializable to and from the flat
/// "key=value" config format losslessly.
struct ExperimentConfig {
  ExtractorParams params;
  SearchMode mode = SearchMode::Plain;
  std::string design_spec = "poly:3,2";     // poly:q,d | greedy:l,t,rho,nsets | file:path
  std::string predicate_spec = "parity";    // parity | table:path
  std::uint64_t seed_begin = 0;
  std::uint64_t seed_end = 1;
  std::uint64_t rng_seed = 1;
  int jobs = 1;

  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig parse_file(const std::string& path);
  void serialize(std::ostream& out) const;
};

/// Builds the generator a config describes; resolves file: specs relative to
/// the current directory.
Generator generator_from_config(const ExperimentConfig& config);

struct PipelineResult {
  Json summary;
  int exit_code = 0;
};

/// Runs profiles -> systems -> generator -> seed search -> verification +
/// audit, writing one JSON report per stage into outdir plus summary.json.
/// "No good seed" is a finding (exit 0), not a failure. Throws ConfigError
/// for malformed configs; callers map that to exit code 2.
PipelineResult run_pipeline(const ExperimentConfig& config, const std::string& outdir,
                            const std::string& cache_dir = "");

}  // namespace kext

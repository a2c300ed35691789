#include "kext/reports.hpp"

#include <fstream>

#include "kext/errors.hpp"

namespace kext {

Json json_of(const SampleStats& stats) {
  Json j;
  j["trials"] = stats.trials;
  j["passes"] = stats.passes;
  j["alpha_hat"] = stats.alpha_hat;
  j["ci_half_width"] = stats.ci_half_width;
  j["rng_seed"] = stats.rng_seed;
  return j;
}

Json json_of(const ComplexityProfile& profile) {
  Json j;
  j["machine"] = kMachineVersion;
  j["n"] = profile.n;
  j["s"] = profile.s;
  j["lmax"] = profile.l_max;
  j["cond"] = profile.condition.str();
  Json counts = Json::array();
  for (int level = 0; level <= profile.l_max + 1; ++level) {
    long long c = 0;
    for (int v : profile.values) c += v == level;
    counts.push_back(c);
  }
  j["value_histogram"] = counts;  // index = value, last entry = sentinel
  return j;
}

Json json_of(const Systems& systems) {
  Json j;
  Json sets = Json::array();
  for (const LevelSet& s : systems.s.pairs) {
    Json e;
    e["level"] = s.level;
    e["size"] = s.members.size();
    sets.push_back(e);
  }
  j["level_sets"] = sets;
  Json palettes = Json::array();
  for (const Palette& p : systems.q.palettes) {
    Json e;
    e["level"] = p.level;
    e["size"] = p.colours.size();
    palettes.push_back(e);
  }
  j["palettes"] = palettes;
  Json tuples = Json::array();
  for (const RainbowTuple& t : systems.r.tuples) {
    Json e;
    e["anchor_level"] = t.anchor.level;
    e["anchor_size"] = t.anchor.members.size();
    e["palette_level"] = t.level;
    long long total = 0;
    for (const Palette& p : t.palettes) total += static_cast<long long>(p.colours.size());
    e["palette_colours_total"] = total;
    tuples.push_back(e);
  }
  j["tuples"] = tuples;
  return j;
}

Json json_of(const ExtractorParams& params) {
  Json j;
  j["n"] = params.n;
  j["m"] = params.m;
  j["s"] = params.s;
  j["k"] = params.k;
  j["delta"] = params.delta;
  j["c"] = params.c;
  j["mu"] = params.mu;
  j["lmax"] = params.l_max;
  j["pair_lmax"] = params.pair_l_max;
  j["bmult"] = params.b_mult.str();
  j["d"] = params.d();
  j["q"] = params.q();
  j["regime_warnings"] = params.regime_warnings();
  return j;
}

Json json_of(const GoodSeedReport& report) {
  Json j;
  if (report.found)
    j["found_seed"] = *report.found;
  else
    j["found_seed"] = nullptr;
  j["seeds_checked"] = report.seeds_checked;
  return j;
}

namespace {

const char* violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Plain: return "plain";
    case ViolationKind::Row: return "row";
    case ViolationKind::Column: return "column";
  }
  return "?";
}

}  // namespace

Json json_of(const VerificationReport& report, const ExtractorParams& params) {
  Json j;
  j["params"] = json_of(params);
  j["qualifying_pairs"] = report.qualifying_pairs;
  j["vacuous"] = report.vacuous;
  Json violations = Json::array();
  for (const ExtractorViolation& v : report.violations) {
    Json e;
    e["x"] = v.x.str();
    e["y"] = v.y.str();
    e["colour"] = BitString::from_value(v.colour, params.m).str();
    e["values"] = Json{{"kind", violation_kind_name(v.kind)}, {"value", v.value}};
    violations.push_back(e);
  }
  j["violations"] = violations;
  j["certificates_audited"] = report.certificates_audited;
  j["max_certificate_bits"] = report.max_certificate_bits;
  return j;
}

Json json_of(const AuditReport& report) {
  Json j;
  j["goodness_ok"] = report.goodness_ok;
  j["cells_checked"] = report.cells_checked;
  j["simple_colour_cells"] = report.simple_colour_cells;
  j["certificates_audited"] = report.certificates_audited;
  j["max_certificate_bits"] = report.max_certificate_bits;
  j["certificate_bit_bound"] = report.certificate_bit_bound;
  Json violations = Json::array();
  for (const DualViolation& v : report.dual_violations) {
    Json e;
    e["x"] = v.x.str();
    e["y"] = v.y.str();
    e["colour"] = v.colour;
    e["reason"] = v.reason;
    violations.push_back(e);
  }
  j["dual_violations"] = violations;
  return j;
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

void write_report_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("write_report_file: cannot open " + path);
  out << dump_report(j);
}

Json strip_timing(const Json& j) {
  Json copy = j;
  copy.erase("timing");
  return copy;
}

}  // namespace kext

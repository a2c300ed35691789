#pragma once

#include <string>

#include "json.hpp"
#include "kext/balance.hpp"
#include "kext/complexity.hpp"
#include "kext/extractor.hpp"
#include "kext/sampling.hpp"
#include "kext/seedsearch.hpp"

namespace kext {

// All reports use ordered JSON with stable key order so golden-file
// comparisons are byte-stable (timing lives under an isolated "timing" key).
using Json = nlohmann::ordered_json;

Json json_of(const SampleStats& stats);
Json json_of(const ComplexityProfile& profile);
Json json_of(const Systems& systems);
Json json_of(const ExtractorParams& params);
Json json_of(const GoodSeedReport& report);  // timing excluded; see timing_of
Json json_of(const VerificationReport& report, const ExtractorParams& params);
Json json_of(const AuditReport& report);

/// Serializes with 2-space indent and trailing newline; the one true dump.
std::string dump_report(const Json& j);
void write_report_file(const std::string& path, const Json& j);

/// Deep-copies j without any top-level "timing" member.
Json strip_timing(const Json& j);

}  // namespace kext

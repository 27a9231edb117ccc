#pragma once

#include <string>
#include <vector>

#include "omht/scenario.hpp"

namespace omht {

// Fixed CSV column set; every float is serialized with 17 significant digits
// so a re-parse reproduces the binary doubles exactly.
inline constexpr const char* kCsvHeader =
    "t_s,selector,phi_rad,delta_rads,n1,n2,N,alpha,V0,V1,F,C,Perr,Q_pct";

void emit_csv(const SweepResult& result, const std::string& path);

// Companion metadata: resolved configuration, its hash, PRNG identification
// and code version. Written next to the CSV as <path>.meta.json.
void emit_metadata(const std::vector<ScenarioConfig>& cfgs, const SweepResult& result,
                   const std::string& csv_path, int threads);

SweepResult read_csv(const std::string& path);

std::string config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json_text(const std::string& text);
ScenarioConfig config_from_json_file(const std::string& path);

inline constexpr const char* kCodeVersion = "0.1.0";
inline constexpr const char* kPrngDescription = "splitmix64-counter + box-muller";

}  // namespace omht

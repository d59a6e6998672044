#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pragcap/agents.hpp"
#include "pragcap/feature_space.hpp"
#include "pragcap/metrics.hpp"
#include "pragcap/splits.hpp"

namespace pragcap {

inline constexpr std::string_view kToolName = "pragcap";
inline constexpr std::string_view kToolVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view data);

/// 16-hex-digit digest of a canonically serialized config object.
std::string config_digest(const nlohmann::json& config);

/// The meta object embedded at the top of every output artifact:
/// {tool, version, seed, config_digest, config}.
nlohmann::json meta_object(const nlohmann::json& config, std::uint64_t seed);

nlohmann::json label_to_json(const Label& label);
Label label_from_json(const nlohmann::json& j);

nlohmann::json constraint_to_json(const MatchConstraint& c);
MatchConstraint constraint_from_json(const nlohmann::json& j);

nlohmann::json split_spec_to_json(const SplitSpec& spec);
SplitSpec split_spec_from_json(const nlohmann::json& j);

nlohmann::json mention_record_to_json(const MentionRecord& rec);

/// Reads one JSONL stream; skips blank lines; throws std::runtime_error with
/// the line number on malformed JSON.
std::vector<nlohmann::json> read_jsonl(std::istream& in);
std::vector<nlohmann::json> read_jsonl_file(const std::string& path);

double round3(double x);

/// Report serialization shared by the CLI and the bindings. Values are
/// rounded to 3 decimals; absent values are null in JSON and "---" in CSV.
nlohmann::json report_to_json(const BenchmarkReport& report, const nlohmann::json& meta);
std::string report_to_csv(const BenchmarkReport& report, const nlohmann::json& meta);

}  // namespace pragcap

#pragma once

#include "fracmax/corpus.hpp"
#include "fracmax/covering.hpp"
#include "fracmax/metric_space.hpp"
#include "fracmax/verify.hpp"

#include <json.hpp>

#include <string>

namespace fracmax::io {

using Json = nlohmann::ordered_json;

/// Bumped whenever a report layout changes.
inline constexpr int kSchemaVersion = 1;

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
Json parse_json(const std::string& text, const std::string& source);

/// Finite values as numbers, non-finite ones as "inf", "-inf" or "nan".
Json number(double v);
double to_double(const Json& j);

/// {"points": [ids], "metric": "euclidean"|"matrix", "coords"?, "dist"?, "weights"}
MetricMeasureSpace space_from_json(const Json& j);
Json space_to_json(const MetricMeasureSpace& space);
MetricMeasureSpace load_space(const std::string& path);
void save_space(const MetricMeasureSpace& space, const std::string& path);

/// CSV with header `point,value`; points are matched by id. Every point of
/// the space must appear exactly once.
Vector<double> function_from_csv(const MetricMeasureSpace& space, const std::string& text,
                                 const std::string& source);
Vector<double> load_function(const MetricMeasureSpace& space, const std::string& path);
std::string function_to_csv(const MetricMeasureSpace& space, const Vector<double>& u,
                            const std::string& column = "value");

CorpusSpec corpus_spec_from_json(const Json& j);
Json corpus_spec_to_json(const CorpusSpec& spec);
/// Builtin name or path to a spec file.
CorpusSpec resolve_corpus_spec(const std::string& name_or_path);

/// Rows (center_id, point_id, phi) for every positive entry.
std::string partition_to_csv(const MetricMeasureSpace& space, const Cover& cover,
                             const PartitionOfUnity& pou);

Json report_to_json(const VerificationReport& report);
Json bounds_to_json(const BoundsTable& table);
Json norm_result_to_json(const NormResult& result);
Json sequence_to_json(const GradientSequence& seq);

/// Shortest round-trip decimal form, fixed across platforms.
std::string format_double(double v);

}  // namespace fracmax::io

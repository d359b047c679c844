#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

#include "gapidx/mdl.hpp"
#include "gapidx/workload.hpp"

namespace gapidx {

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(std::string_view s);

/// Column order of the MDL report CSV.
inline constexpr std::string_view kMdlCsvHeader =
    "method,params,alpha,l_model,l_data,mdl,mae,max_error,build_ns,predict_ns,correct_ns,overall_ns,"
    "index_size_bytes,model_count,total_size_bytes,status";

inline constexpr std::string_view kBatchCsvHeader =
    "batch,keys_seen,inserted_in_slot,inserted_linked,mae,predict_ns,correct_ns,overall_ns,gap_fraction,"
    "queries,negative_queries,all_correct";

nlohmann::ordered_json to_json(const MdlReport& r);
nlohmann::ordered_json to_json(const BatchReport& r);
nlohmann::ordered_json to_json(const GapMetrics& m);
nlohmann::ordered_json to_json(const DynamicResult& r);

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(std::string_view s);

void write_csv(std::ostream& os, std::span<const MdlReport> rows);
void write_csv(std::ostream& os, std::span<const BatchReport> rows);

}  // namespace gapidx

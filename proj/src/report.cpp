#include "gapidx/report.hpp"

#include <charconv>
#include <stdexcept>

namespace gapidx {

ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw std::invalid_argument("unknown report format: " + std::string(s));
}

nlohmann::ordered_json to_json(const MdlReport& r) {
  return {{"method", r.method},
          {"params", r.params},
          {"alpha", r.alpha},
          {"l_model", r.l_model},
          {"l_data", r.l_data},
          {"mdl", r.mdl},
          {"mae", r.mae},
          {"max_error", r.max_error},
          {"build_ns", r.build_ns},
          {"predict_ns", r.predict_ns},
          {"correct_ns", r.correct_ns},
          {"overall_ns", r.overall_ns},
          {"index_size_bytes", r.index_size_bytes},
          {"model_count", r.model_count},
          {"total_size_bytes", r.total_size_bytes},
          {"status", r.status}};
}

nlohmann::ordered_json to_json(const BatchReport& r) {
  return {{"batch", r.batch},
          {"keys_seen", r.keys_seen},
          {"inserted_in_slot", r.inserted_in_slot},
          {"inserted_linked", r.inserted_linked},
          {"mae", r.mae},
          {"predict_ns", r.predict_ns},
          {"correct_ns", r.correct_ns},
          {"overall_ns", r.overall_ns},
          {"gap_fraction", r.gap_fraction},
          {"queries", r.queries},
          {"negative_queries", r.negative_queries},
          {"all_correct", r.all_correct}};
}

nlohmann::ordered_json to_json(const GapMetrics& m) {
  return {{"n", m.n},
          {"sample_size", m.sample_size},
          {"slots", m.slots},
          {"segments", m.segments},
          {"total_gaps", m.total_gaps},
          {"gap_budget", m.gap_budget},
          {"mae_physical", m.mae_physical},
          {"max_physical", m.max_physical},
          {"mae_target", m.mae_target},
          {"gap_fraction", m.gap_fraction},
          {"linked_keys", m.linked_keys},
          {"build_ns", m.build_ns}};
}

nlohmann::ordered_json to_json(const DynamicResult& r) {
  auto batches = nlohmann::ordered_json::array();
  for (const auto& b : r.batches) batches.push_back(to_json(b));
  nlohmann::ordered_json j{{"initial", to_json(r.initial)},
                           {"initial_gap_fraction", r.initial_gap_fraction},
                           {"model_unchanged", r.model_unchanged},
                           {"batches", batches}};
  j["audit"] = r.audit_failure ? *r.audit_failure : "ok";
  return j;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

namespace {

struct Num {
  double v;
};

// Shortest text that parses back to the same double.
std::ostream& operator<<(std::ostream& os, Num n) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, n.v);
  return os.write(buf, res.ptr - buf);
}

}  // namespace

void write_csv(std::ostream& os, std::span<const MdlReport> rows) {
  os << kMdlCsvHeader << '\n';
  for (const auto& r : rows) {
    os << csv_field(r.method) << ',' << csv_field(r.params) << ',' << Num{r.alpha} << ',' << Num{r.l_model} << ','
       << Num{r.l_data} << ',' << Num{r.mdl} << ',' << Num{r.mae} << ',' << r.max_error << ',' << r.build_ns << ','
       << r.predict_ns << ',' << r.correct_ns << ',' << r.overall_ns << ',' << r.index_size_bytes << ','
       << r.model_count << ',' << r.total_size_bytes << ',' << csv_field(r.status) << '\n';
  }
}

void write_csv(std::ostream& os, std::span<const BatchReport> rows) {
  os << kBatchCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.batch << ',' << r.keys_seen << ',' << r.inserted_in_slot << ',' << r.inserted_linked << ','
       << Num{r.mae} << ',' << Num{r.predict_ns} << ',' << Num{r.correct_ns} << ',' << Num{r.overall_ns} << ','
       << Num{r.gap_fraction} << ',' << r.queries << ',' << r.negative_queries << ','
       << (r.all_correct ? "true" : "false") << '\n';
  }
}

}  // namespace gapidx

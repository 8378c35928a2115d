#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "lrlc/config.hpp"
#include "lrlc/convbounds.hpp"
#include "lrlc/convolution.hpp"
#include "lrlc/green.hpp"
#include "lrlc/lace.hpp"

namespace lrlc {

using nlohmann::json;

json to_json(const TailReport& t);
json to_json(const KernelAuditReport& r);
json to_json(const AssumptionAudit& a);
json to_json(const AsymptoticConstants& c);
json to_json(const DnAudit& a);
json to_json(const DerivativeAudit& a);
json to_json(const GreenUpperBoundAudit& a);
json to_json(const GreenAsymptoticsAudit& a);
json to_json(const ConvBoundReport& r);
json to_json(const GreenIdentityReport& r);

// Stamped report: { version, config_hash, config: {...}, payload... }
json stamped_report(const RunConfig& cfg, json payload);
void write_text_atomic(const std::string& path, const std::string& text);
void write_json_file(const std::string& path, const json& j);

// CSV with '#'-prefixed metadata lines and a header row; all numbers in
// shortest round-trip form so reruns are byte-identical.
struct CsvWriter {
  std::string buffer;
  void meta(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<double>& vals);
  void row_mixed(const std::vector<std::string>& vals);
  void save(const std::string& path) const;
};

} // namespace lrlc

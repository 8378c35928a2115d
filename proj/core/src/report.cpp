#include "lrlc/report.hpp"

#include <cstdio>
#include <fstream>

#include "lrlc/numerics.hpp"

namespace lrlc {

json to_json(const TailReport& t) {
  return json{{"truncated_mass", t.truncated_mass},
              {"renormalization_factor", t.renormalization_factor},
              {"zeta_tail", t.zeta_tail},
              {"zeta_tail_bound", t.zeta_tail_bound},
              {"fold_in_bias", t.fold_in_bias},
              {"build_pad_M", t.build_pad_M},
              {"low_resolution", t.low_resolution}};
}

json to_json(const KernelAuditReport& r) {
  return json{{"max_negativity", r.max_negativity},
              {"symmetry_defect", r.symmetry_defect},
              {"normalization_defect", r.normalization_defect},
              {"structurally_symmetric", r.structurally_symmetric}};
}

json to_json(const AssumptionAudit& a) {
  return json{{"status", a.pass ? "PASS" : "FAIL"},
              {"fail_reason", a.fail_reason},
              {"delta_hat", a.delta_hat},
              {"max_one_minus_dhat", a.max_one_minus_dhat},
              {"small_k_ratio_min", a.small_k_ratio_min},
              {"small_k_ratio_max", a.small_k_ratio_max},
              {"small_k_points", a.small_k_points},
              {"asy_v", a.asy_v},
              {"asy_c0", a.asy_c0},
              {"asy_residual", a.asy_residual}};
}

json to_json(const AsymptoticConstants& c) {
  return json{{"status", c.pass ? "PASS" : "FAIL"},
              {"gamma_alpha", c.gamma_alpha},
              {"v_alpha", c.v_alpha},
              {"c0", c.c0},
              {"fit_window_lo", c.fit_window_lo},
              {"fit_window_hi", c.fit_window_hi},
              {"fit_residual", c.fit_residual},
              {"correction_exponent", c.correction_exponent}};
}

json to_json(const DnAudit& a) {
  return json{{"status", a.pass ? "PASS" : "FAIL"},
              {"fail_reason", a.fail_reason},
              {"n_reached", a.n_reached},
              {"sup_trend", a.sup_trend},
              {"point_trend", a.point_trend},
              {"sup_constant", a.sup_constant},
              {"point_constant", a.point_constant}};
}

json to_json(const DerivativeAudit& a) {
  return json{{"status", a.pass ? "PASS" : "FAIL"},
              {"fail_reason", a.fail_reason},
              {"max_constant", a.max_constant},
              {"trend", a.trend},
              {"n_samples", a.n_samples},
              {"per_n_max", a.per_n_max}};
}

json to_json(const GreenUpperBoundAudit& a) {
  return json{{"status", a.pass ? "PASS" : "FAIL"},
              {"max_ratio", a.max_ratio},
              {"trend_slope", a.trend_slope},
              {"shells", a.shells}};
}

json to_json(const GreenAsymptoticsAudit& a) {
  return json{{"status", a.pass ? "PASS" : "FAIL"},
              {"final_mean", a.final_mean},
              {"monotone_trend", a.monotone_trend},
              {"anisotropy", a.anisotropy},
              {"abs_dev_decay", a.abs_dev_decay},
              {"window_means", a.window_means},
              {"window_abs_dev", a.window_abs_dev},
              {"window_means_nolog", a.window_means_nolog},
              {"rows", a.rows.size()}};
}

json to_json(const ConvBoundReport& r) {
  return json{{"status", r.pass ? "PASS" : "FAIL"},
              {"regime", regime_name(r.regime)},
              {"empirical_C", r.empirical_C},
              {"empirical_C_2L", r.empirical_C_2L},
              {"L_shift", r.L_shift},
              {"trend_slope", r.trend_slope},
              {"samples", r.table.size()}};
}

json to_json(const GreenIdentityReport& r) {
  return json{{"q", r.q},
              {"max_rel_dev", r.max_rel_dev},
              {"chi_direct", r.chi_direct},
              {"chi_lace", r.chi_lace},
              {"chi_rel_dev", r.chi_rel_dev}};
}

json stamped_report(const RunConfig& cfg, json payload) {
  json j;
  j["version"] = "0.1.0";
  j["config_hash"] = cfg.hash();
  json ckv = json::object();
  for (auto& [k, v] : cfg.kv) ckv[k] = v;
  j["config"] = ckv;
  j["report"] = std::move(payload);
  return j;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
      std::remove(tmp.c_str());
      throw std::runtime_error("report: write failed for " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("report: rename failed for " + path);
  }
}

void write_json_file(const std::string& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

void CsvWriter::meta(const std::string& key, const std::string& value) {
  buffer += "# " + key + "=" + value + "\n";
}

void CsvWriter::header(const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i)
    buffer += (i ? "," : "") + cols[i];
  buffer += "\n";
}

void CsvWriter::row(const std::vector<double>& vals) {
  for (std::size_t i = 0; i < vals.size(); ++i)
    buffer += (i ? "," : "") + format_double(vals[i]);
  buffer += "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& vals) {
  for (std::size_t i = 0; i < vals.size(); ++i)
    buffer += (i ? "," : "") + vals[i];
  buffer += "\n";
}

void CsvWriter::save(const std::string& path) const { write_text_atomic(path, buffer); }

} // namespace lrlc

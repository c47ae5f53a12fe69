#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "spinorbit/io.hpp"
#include "spinorbit/pipeline.hpp"

namespace spinorbit {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// Structured run report: a deterministic, self-describing document with one
// record per performed check plus the branch reports of the theorem pipeline.
struct Report {
  std::string command;
  std::vector<BranchCheck> records;
  std::vector<BranchReport> branches;
  std::vector<std::string> lines;  // free-form text payload (systems, tables)

  void add(const std::string& tag, const std::string& status,
           const std::string& detail = "") {
    records.push_back({tag, status, detail});
  }
  void add(const BranchCheck& c) { records.push_back(c); }

  bool all_ok() const {
    for (const auto& r : records)
      if (r.status == "failed") return false;
    for (const auto& b : branches) {
      if (!b.all_ok()) return false;
      if (b.leaf && b.verdict != "constant") return false;
    }
    return true;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = "spinorbit";
    j["schema_version"] = kSchemaVersion;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["ok"] = all_ok();
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : records) {
      nlohmann::ordered_json jr;
      jr["tag"] = r.tag;
      jr["status"] = r.status;
      if (!r.detail.empty()) jr["detail"] = r.detail;
      j["records"].push_back(jr);
    }
    if (!branches.empty()) {
      j["branches"] = nlohmann::ordered_json::array();
      for (const auto& b : branches) {
        nlohmann::ordered_json jb;
        jb["id"] = b.id;
        jb["imposed"] = b.imposed;
        if (b.v1) jb["v1"] = print_expr(*b.v1);
        if (b.v0) jb["v0"] = print_expr(*b.v0);
        if (b.f) jb["f"] = print_expr(*b.f);
        if (b.v1_normalized) jb["v1_normalized"] = print_expr(*b.v1_normalized);
        if (!b.gauge.empty()) jb["gauge_alpha"] = b.gauge;
        if (b.leaf) jb["verdict"] = b.verdict;
        jb["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : b.checks) {
          nlohmann::ordered_json jc;
          jc["tag"] = c.tag;
          jc["status"] = c.status;
          if (!c.detail.empty()) jc["detail"] = c.detail;
          jb["checks"].push_back(jc);
        }
        if (!b.notes.empty()) jb["notes"] = b.notes;
        j["branches"].push_back(jb);
      }
    }
    if (!lines.empty()) j["text"] = lines;
    return j;
  }

  std::string render(const std::string& format) const {
    if (format == "structured") return to_json().dump(2) + "\n";
    std::string out;
    out += "spinorbit " + std::string(kToolVersion) + " :: " + command + "\n";
    for (const auto& l : lines) out += l + "\n";
    for (const auto& r : records) {
      out += "[" + r.status + "] " + r.tag;
      if (!r.detail.empty()) out += "  (" + r.detail + ")";
      out += "\n";
    }
    for (const auto& b : branches) {
      out += "branch " + b.id;
      if (b.leaf) out += "  -> V1 = " + print_expr(*b.v1_normalized) +
                         "  [" + b.verdict + "]";
      out += "\n";
      for (const auto& s : b.imposed) out += "  imposed: " + s + "\n";
      for (const auto& c : b.checks) {
        out += "  [" + c.status + "] " + c.tag;
        if (!c.detail.empty()) out += "  (" + c.detail + ")";
        out += "\n";
      }
      if (b.v1) out += "  V1 = " + print_expr(*b.v1) + "\n";
      if (b.f) out += "  F  = " + print_expr(*b.f) + "\n";
      if (b.v0) out += "  V0 = " + print_expr(*b.v0) + "\n";
      if (b.v1_normalized && b.leaf)
        out += "  gauge alpha = " + b.gauge +
               ", normalized V1 = " + print_expr(*b.v1_normalized) + "\n";
      for (const auto& n : b.notes) out += "  note: " + n + "\n";
    }
    out += all_ok() ? "RESULT: ok\n" : "RESULT: failed\n";
    return out;
  }
};

}  // namespace spinorbit

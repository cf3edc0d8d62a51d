#pragma once

#include <string>

#include <json.hpp>

#include "wlg/pipelines.hpp"

namespace wlg {

inline nlohmann::json to_json(const RunResult& r) {
  nlohmann::json sides = nlohmann::json::array();
  for (int s = 0; s < 2; ++s) {
    nlohmann::json cls = nlohmann::json::array();
    for (auto [color, count] : r.side_signature[s].classes) cls.push_back({color, count});
    sides.push_back(cls);
  }
  return nlohmann::json{{"schema", "wlgroups/run-result/v1"},
                        {"distinguished", r.distinguished},
                        {"distinguished_round", r.distinguished_round},
                        {"rounds_used", r.rounds_used},
                        {"stabilized", r.stabilized},
                        {"k", r.k},
                        {"version", wl_version_name(r.version)},
                        {"counting", r.counting},
                        {"num_classes", r.num_classes},
                        {"side_signatures", sides}};
}

inline nlohmann::json to_json(const IsoVerdict& v) {
  nlohmann::json j{{"schema", "wlgroups/iso-verdict/v1"},
                   {"status", iso_status_name(v.status)},
                   {"method", v.method},
                   {"evidence", v.evidence},
                   {"millis", v.millis}};
  if (v.k) j["k"] = v.k;
  if (v.rounds) j["rounds"] = v.rounds;
  if (!v.witness.empty()) j["witness"] = v.witness;
  return j;
}

inline std::string canonical_cay(const CanonicalForm& cf) {
  require(cf.ok, errc::internal, "cannot serialize a non-canonical result");
  std::string labels = "psi:";
  for (uint32_t v : cf.labels) labels += " " + std::to_string(v);
  return to_cay(cf.table, {labels});
}

}  // namespace wlg

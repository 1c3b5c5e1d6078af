#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hebkit/cleaner.hpp"
#include "hebkit/mlm.hpp"

namespace hebkit {

inline nlohmann::ordered_json document_to_json(const Document& doc) {
  return {{"id", doc.id}, {"text", doc.text}, {"source", doc.source}};
}

inline Document document_from_json(const nlohmann::json& j) {
  Document doc;
  doc.id = j.at("id").get<std::string>();
  doc.text = j.at("text").get<std::string>();
  doc.source = j.value("source", std::string{});
  return doc;
}

/** One document per line; unparseable lines are skipped and counted. */
inline std::vector<Document> read_documents(std::istream& in,
                                            uint64_t* parse_errors = nullptr) {
  std::vector<Document> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      docs.push_back(document_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception&) {
      if (parse_errors) ++*parse_errors;
    }
  }
  return docs;
}

inline void write_documents(std::ostream& out, const std::vector<Document>& docs) {
  for (const auto& doc : docs) out << document_to_json(doc).dump() << '\n';
}

inline nlohmann::ordered_json instance_to_json(const TrainingInstance& inst) {
  return {{"doc_id", inst.doc_id},
          {"token_ids", inst.token_ids},
          {"mlm_positions", inst.mlm_positions},
          {"mlm_labels", inst.mlm_labels},
          {"has_blank", inst.has_blank}};
}

inline TrainingInstance instance_from_json(const nlohmann::json& j) {
  TrainingInstance inst;
  inst.doc_id = j.at("doc_id").get<std::string>();
  inst.token_ids = j.at("token_ids").get<std::vector<int32_t>>();
  inst.mlm_positions = j.at("mlm_positions").get<std::vector<int32_t>>();
  inst.mlm_labels = j.at("mlm_labels").get<std::vector<int32_t>>();
  inst.has_blank = j.at("has_blank").get<bool>();
  return inst;
}

inline void write_instances(std::ostream& out, const std::vector<TrainingInstance>& insts) {
  for (const auto& inst : insts) out << instance_to_json(inst).dump() << '\n';
}

inline std::vector<TrainingInstance> read_instances(std::istream& in,
                                                    uint64_t* parse_errors = nullptr) {
  std::vector<TrainingInstance> insts;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      insts.push_back(instance_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception&) {
      if (parse_errors) ++*parse_errors;
    }
  }
  return insts;
}

inline nlohmann::ordered_json clean_report_to_json(const CleanReport& report) {
  auto stage = [](const StageCounter& c) {
    return nlohmann::ordered_json{{"examined", c.examined}, {"dropped", c.dropped}};
  };
  nlohmann::ordered_json j{{"min_words", stage(report.min_words)},
                           {"script_ratio", stage(report.script_ratio)},
                           {"gibberish", stage(report.gibberish)},
                           {"scorer", stage(report.scorer)},
                           {"scorer_errors", report.scorer_errors},
                           {"kept", report.kept}};
  if (!report.drop_samples.empty()) {
    nlohmann::ordered_json samples = nlohmann::ordered_json::array();
    for (const auto& [id, reason] : report.drop_samples) {
      samples.push_back({{"id", id}, {"reason", reason}});
    }
    j["drop_samples"] = std::move(samples);
  }
  return j;
}

inline nlohmann::ordered_json build_report_to_json(const BuildReport& report) {
  return {{"instances", report.instances},
          {"dropped_unk", report.dropped_unk},
          {"dropped_oversize", report.dropped_oversize},
          {"blanks", report.blanks},
          {"blank_skipped", report.blank_skipped},
          {"masked_positions", report.masked_positions},
          {"candidate_positions", report.candidate_positions},
          {"no_candidate_instances", report.no_candidate_instances},
          {"parse_errors", report.parse_errors}};
}

}  // namespace hebkit

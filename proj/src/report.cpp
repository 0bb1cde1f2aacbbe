#include "spbw/report.hpp"

#include <fstream>

#include "spbw/error.hpp"

namespace spbw {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

nlohmann::json make_report(const std::string& command, const std::string& input,
                           uint64_t seed, const std::string& mode) {
  nlohmann::json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool_version"] = kToolVersion;
  doc["command"] = command;
  doc["input_digest"] = fnv1a(input);
  doc["seed"] = seed;
  doc["mode"] = mode;
  doc["results"] = nlohmann::json::array();
  return doc;
}

std::string render_report(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

void emit_report(const nlohmann::json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::IoError, "cannot open '" + path + "' for writing");
  out << render_report(doc);
  if (!out) fail(Err::IoError, "short write to '" + path + "'");
}

}  // namespace spbw

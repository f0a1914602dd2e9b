#pragma once
// Shared helpers for the unit tests.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace testing {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline nlohmann::json golden(const std::string& name) {
  return nlohmann::json::parse(slurp(std::string(OCULUS_GOLDEN_DIR) + "/" + name));
}

inline nlohmann::json default_rulebase_doc() {
  return nlohmann::json::parse(slurp(std::string(OCULUS_SOURCE_DIR) + "/data/default_rulebase.json"));
}

struct Run {
  int code;
  std::string out;
};

// Runs a shell command, capturing stdout; stderr is discarded.
inline Run run(const std::string& cmd) {
  Run r{-1, {}};
  FILE* p = ::popen((cmd + " 2>/dev/null").c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace testing

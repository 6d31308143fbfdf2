#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "mg1/cli.hpp"

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

inline CliResult run_tool(std::vector<std::string> args) {
  args.insert(args.begin(), "mg1bayes");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = mg1::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mg1bayes-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

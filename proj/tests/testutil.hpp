#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "pim/parser.hpp"

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

inline std::string models_dir() { return PIM_MODELS_DIR; }
inline std::string data_dir() { return PIM_TEST_DATA_DIR; }

inline pim::Model load_model(const std::string& path,
                             const pim::DesugarOptions& options = {}) {
  pim::ParseResult result = pim::parse(read_file(path), options);
  if (!result.ok()) {
    throw std::runtime_error("parse failed for " + path + ": " +
                             result.diagnostics.front().message);
  }
  return std::move(result.model);
}

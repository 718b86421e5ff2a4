#ifndef CFPLAN_LOAD_HPP
#define CFPLAN_LOAD_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cfplan/instance.hpp"
#include "cfplan/model.hpp"

namespace cfplan {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Model load_model(const std::string& schema_path, const std::string& rules_path) {
  Schema schema = parse_schema(read_file(schema_path));
  RuleSet rules = parse_program(read_file(rules_path), schema);
  return compile(std::move(schema), std::move(rules));
}

inline Record load_instance(const std::string& path, const Schema& schema) {
  return parse_instance(read_file(path), schema);
}

} // namespace cfplan

#endif

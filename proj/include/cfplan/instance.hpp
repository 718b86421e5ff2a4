#ifndef CFPLAN_INSTANCE_HPP
#define CFPLAN_INSTANCE_HPP

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfplan/domain.hpp"
#include "cfplan/schema.hpp"

namespace cfplan {

class instance_error : public std::runtime_error {
public:
  explicit instance_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    std::size_t b = f.find_first_not_of(" \t\r");
    std::size_t e = f.find_last_not_of(" \t\r");
    f = b == std::string::npos ? "" : f.substr(b, e - b + 1);
  }
  return out;
}

} // namespace detail

/// Loads a single-record instance file: a CSV header naming every schema
/// feature (any order) and exactly one data row. Values are checked against
/// the schema.
inline Record parse_instance(const std::string& text, const Schema& schema) {
  std::istringstream in(text);
  std::string header_line, data_line, extra;
  if (!std::getline(in, header_line)) throw instance_error("instance file is empty");
  if (!std::getline(in, data_line)) throw instance_error("instance file has no data row");
  while (std::getline(in, extra)) {
    if (extra.find_first_not_of(" \t\r") != std::string::npos)
      throw instance_error("instance file must hold a single record");
  }

  auto headers = detail::csv_fields(header_line);
  auto fields = detail::csv_fields(data_line);
  if (headers.size() != fields.size())
    throw instance_error("header and data row differ in arity");

  Record rec(schema.size());
  std::vector<bool> seen(schema.size(), false);
  for (std::size_t i = 0; i < headers.size(); ++i) {
    int f = schema.feature_index(headers[i]);
    if (f < 0) throw instance_error("unknown feature '" + headers[i] + "' in instance header");
    if (seen[(std::size_t)f]) throw instance_error("feature '" + headers[i] + "' listed twice");
    seen[(std::size_t)f] = true;
    const FeatureDecl& fd = schema.feature(f);
    ConcreteValue cv;
    if (fd.numeric) {
      cv.numeric = true;
      try {
        cv.num = Rational::parse(fields[i]);
      } catch (const std::invalid_argument& e) {
        throw instance_error("feature '" + fd.name + "': " + e.what());
      }
      if (cv.num < fd.min || fd.max < cv.num)
        throw instance_error("value " + cv.num.str() + " outside declared domain of '" +
                             fd.name + "'");
    } else {
      cv.sym = fields[i];
      if (fd.value_index(cv.sym) < 0)
        throw instance_error("value '" + cv.sym + "' not declared for feature '" + fd.name + "'");
    }
    rec[(std::size_t)f] = std::move(cv);
  }
  for (std::size_t f = 0; f < schema.size(); ++f)
    if (!seen[f])
      throw instance_error("instance is missing feature '" + schema.features[f].name + "'");
  return rec;
}

} // namespace cfplan

#endif

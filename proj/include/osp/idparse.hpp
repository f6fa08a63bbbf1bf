#ifndef OSP_IDPARSE_HPP
#define OSP_IDPARSE_HPP

#include <map>
#include <string>

#include "osp/rational.hpp"

namespace osp {

/// Parsed "name" or "name(key=value,...)" identifier used by the bundled
/// instances, tables and experiment ids.
struct IdSpec {
  std::string name;
  std::map<std::string, std::string> params;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  int int_param(const std::string& key) const;
  int int_param(const std::string& key, int fallback) const;
  Rational rat_param(const std::string& key) const;
  Rational rat_param(const std::string& key, const char* fallback) const;
};

IdSpec parse_id_spec(const std::string& id);

}  // namespace osp

#endif

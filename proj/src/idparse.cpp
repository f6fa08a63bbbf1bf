#include "osp/idparse.hpp"

#include <sstream>

#include "osp/errors.hpp"

namespace osp {

int IdSpec::int_param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw InvalidParams("missing parameter: " + key);
  return std::stoi(it->second);
}

int IdSpec::int_param(const std::string& key, int fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : std::stoi(it->second);
}

Rational IdSpec::rat_param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw InvalidParams("missing parameter: " + key);
  return parse_rational(it->second);
}

Rational IdSpec::rat_param(const std::string& key, const char* fallback) const {
  auto it = params.find(key);
  return parse_rational(it == params.end() ? fallback : it->second);
}

IdSpec parse_id_spec(const std::string& id) {
  IdSpec spec;
  auto open = id.find('(');
  if (open == std::string::npos) {
    spec.name = id;
    return spec;
  }
  if (id.back() != ')') throw UnknownId("malformed id: " + id);
  spec.name = id.substr(0, open);
  std::string body = id.substr(open + 1, id.size() - open - 2);
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UnknownId("malformed param: " + item);
    spec.params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return spec;
}

}  // namespace osp

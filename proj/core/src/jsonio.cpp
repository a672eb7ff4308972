#include "resist/jsonio.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace resist {

std::string fmt17(double v) {
  if (std::isnan(v))
    return "null";
  if (std::isinf(v))
    return v > 0 ? "1e999" : "-1e999";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos)
    s += ".0";
  return s;
}

namespace {

void write(std::ostringstream &os, const nlohmann::json &j, int indent, int level) {
  auto newline = [&](int lvl) {
    if (indent >= 0) {
      os << '\n';
      os << std::string(static_cast<std::size_t>(indent * lvl), ' ');
    }
  };
  switch (j.type()) {
  case nlohmann::json::value_t::object: {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << '{';
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first)
        os << ',';
      first = false;
      newline(level + 1);
      os << nlohmann::json(it.key()).dump() << (indent >= 0 ? ": " : ":");
      write(os, it.value(), indent, level + 1);
    }
    newline(level);
    os << '}';
    return;
  }
  case nlohmann::json::value_t::array: {
    if (j.empty()) {
      os << "[]";
      return;
    }
    os << '[';
    bool first = true;
    for (const auto &e : j) {
      if (!first)
        os << ',';
      first = false;
      newline(level + 1);
      write(os, e, indent, level + 1);
    }
    newline(level);
    os << ']';
    return;
  }
  case nlohmann::json::value_t::number_float:
    os << fmt17(j.get<double>());
    return;
  default:
    os << j.dump();
  }
}

} // namespace

std::string dump17(const nlohmann::json &j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  return os.str();
}

} // namespace resist

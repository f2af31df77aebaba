#pragma once

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

namespace mutation {

using Json = nlohmann::json;

inline void collect(const Json& j, const std::string& path, std::vector<std::string>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (path.empty() && it.key() == "metadata") continue;
      collect(*it, path + "/" + it.key(), out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) collect(j[i], path + "/" + std::to_string(i), out);
  } else {
    out.push_back(path);
  }
}

/// JSON pointers of every scalar leaf outside "metadata".
inline std::vector<std::string> leaves(const Json& cert) {
  std::vector<std::string> out;
  collect(cert, "", out);
  return out;
}

/// Changes one leaf to a different value of the same JSON type.
inline Json mutate(const Json& cert, const std::string& pointer, std::mt19937& rng) {
  Json out = cert;
  Json& leaf = out[Json::json_pointer(pointer)];
  if (leaf.is_boolean()) {
    leaf = !leaf.get<bool>();
  } else if (leaf.is_string()) {
    const std::string s = leaf.get<std::string>();
    const bool numeric = !s.empty() && s.find_first_not_of("-0123456789") == std::string::npos;
    if (numeric && s.size() < 18) {
      const long long v = std::stoll(s);
      const long long delta = 1 + static_cast<long long>(rng() % 3);
      leaf = std::to_string(rng() % 2 ? v + delta : v - delta);
    } else if (numeric) {
      std::string t = s;
      char& c = t[t.size() - 1];
      c = c == '9' ? '0' : static_cast<char>(c + 1);
      leaf = t;
    } else {
      leaf = s + (rng() % 2 ? "x" : " ");
    }
  } else if (leaf.is_number()) {
    leaf = leaf.get<long long>() + 1;
  } else {
    leaf = "mutated";
  }
  return out;
}

}  // namespace mutation

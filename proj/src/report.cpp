#include "fink/report.hpp"

#include <fstream>
#include <iostream>

#include <openssl/evp.h>

#include "fink/errors.hpp"

namespace fink {

std::string result_digest(const nlohmann::json& result) {
  auto text = result.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr)) throw Error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"subcommand", m.subcommand}, {"argv", m.argv},      {"params", m.params},
          {"budgets", m.budgets},       {"version", m.version}, {"wall_seconds", m.wall_seconds},
          {"digest", m.digest}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.params = j.value("params", nlohmann::json::object());
    m.budgets = j.value("budgets", nlohmann::json::object());
    m.version = j.value("version", std::string(kToolVersion));
    m.wall_seconds = j.value("wall_seconds", 0.0);
    m.digest = j.at("digest").get<std::string>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed manifest: ") + e.what());
  }
}

void write_json(const std::string& path, const nlohmann::json& j) {
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

}  // namespace fink

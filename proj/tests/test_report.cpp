#include <doctest.h>

#include <cstdio>

#include "fink/report.hpp"

using namespace fink;

TEST_CASE("result digests are SHA-256 of the compact dump") {
  // reference values from coreutils sha256sum
  CHECK(result_digest("abc") == "6cc43f858fbb763301637b5af970e2a46b46f461f27e5a0f41e009c59b827b25");
  nlohmann::json j = {{"a", 1}, {"b", {2, 3}}};
  CHECK(result_digest(j) == "efbd0040190fb0871831e606c581f8a66db79d8e2bb836745a70051306956070");
  CHECK(result_digest(j) != result_digest(nlohmann::json{{"a", 2}}));
}

TEST_CASE("manifests round trip through files") {
  RunManifest m;
  m.subcommand = "search";
  m.argv = {"search", "vdw", "3", "2"};
  m.params = {{"quantity", "vdw"}};
  m.budgets = {{"nodes", 1000}};
  m.wall_seconds = 0.25;
  m.digest = result_digest(nlohmann::json{{"value", 9}});

  std::string path = "test_report_manifest.json";
  write_json(path, to_json(m));
  auto back = manifest_from_json(read_json(path));
  std::remove(path.c_str());
  CHECK(back.subcommand == m.subcommand);
  CHECK(back.argv == m.argv);
  CHECK(back.params == m.params);
  CHECK(back.budgets == m.budgets);
  CHECK(back.version == kToolVersion);
  CHECK(back.digest == m.digest);
  CHECK(back.wall_seconds == doctest::Approx(0.25));
  CHECK_THROWS(read_json("definitely/not/here.json"));
}

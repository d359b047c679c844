#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gapidx/cli.hpp"
#include "gapidx/report.hpp"

using namespace gapidx;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  int c = cli_main(args, o, e);
  return {c, o.str(), e.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("cli end to end") {
  auto dir = std::filesystem::temp_directory_path() / "gapidx_cli_test";
  std::filesystem::create_directories(dir);
  const auto data = (dir / "d.gdx").string();

  REQUIRE(run({"gen", "--kind", "piecewise", "--n", "20000", "--seed", "1", "--out", data}).code == 0);
  CHECK(std::filesystem::file_size(data) == 16 + 8 * 20000);

  SUBCASE("fit prints a json report and saves the index") {
    const auto idx = (dir / "i.bin").string();
    auto r = run({"fit", "--dataset", data, "--method", "optimal", "--epsilon", "64", "--queries", "500",
                  "--save-index", idx});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["method"] == "optimal");
    CHECK(j["status"] == "ok");
    CHECK(j["max_error"].get<int>() <= 64);

    auto e = run({"eval", "--dataset", data, "--index", idx, "--queries", "500"});
    REQUIRE(e.code == 0);
    auto je = nlohmann::json::parse(e.out);
    CHECK(je["mae"] == j["mae"]);
    CHECK(je["l_model"] == j["l_model"]);
  }
  SUBCASE("sweep writes one csv row per grid point") {
    const auto csv = (dir / "r.csv").string();
    auto r = run({"sweep", "--dataset", data, "--methods", "greedy,optimal", "--epsilons", "8,64,256", "--format",
                  "csv", "--out", csv, "--queries", "200"});
    REQUIRE(r.code == 0);
    auto text = slurp(csv);
    CHECK(lines(text) == 7);
    CHECK(text.starts_with(std::string(kMdlCsvHeader)));
  }
  SUBCASE("dynamic prints one report per batch") {
    auto r = run({"dynamic", "--dataset", data, "--w", "0.7", "--batches", "5", "--rho", "0.5", "--rate", "0.1",
                  "--format", "json", "--queries", "500", "--repetitions", "1"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["batches"].size() == 5);
    for (const auto& b : j["batches"]) CHECK(b["all_correct"] == true);
  }
  SUBCASE("errors") {
    CHECK(run({"fit", "--dataset", (dir / "missing.gdx").string()}).code == 2);
    CHECK(run({"fit", "--dataset", data, "--bogus"}).code == 1);
    CHECK(run({"fit", "--dataset", data, "--method", "alex"}).code == 1);
    CHECK(run({"sweep", "--dataset", data, "--methods", "optimal", "--epsilons", "-3"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"--help"}).code == 0);
    auto bad = run({"fit", "--dataset", data, "--rate", "2"});
    CHECK(bad.code == 1);
    CHECK_FALSE(bad.err.empty());
  }
}

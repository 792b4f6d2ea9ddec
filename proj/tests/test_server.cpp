#include <fstream>
#include <sstream>
#include <thread>

#include "catch_amalgamated.hpp"
#include "cricket_rules/server.hpp"

using namespace cricket_rules;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Server over the committed fixture, on an ephemeral loopback port.
class RunningServer {
 public:
  RunningServer()
      : corpus_(load_corpus(CRICKET_RULES_FIXTURE_DIR "/synthetic_corpus.tsv").corpus),
        lexicon_(load_lexicon(default_lexicon_path())),
        roster_(load_roster(CRICKET_RULES_FIXTURE_DIR "/roster.tsv")),
        server_(AnalysisContext{corpus_, lexicon_, roster_}) {
    port_ = server_.bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_.listen(); });
    server_.wait_until_ready();
  }
  ~RunningServer() {
    server_.stop();
    thread_.join();
  }

  httplib::Result get(const std::string& path) {
    httplib::Client client("127.0.0.1", port_);
    return client.Get(path);
  }
  int port() const { return port_; }

 private:
  Corpus corpus_;
  FeatureLexicon lexicon_;
  Roster roster_;
  AnalysisServer server_;
  int port_ = -1;
  std::thread thread_;
};

}  // namespace

TEST_CASE("HTTP service", "[server]") {
  RunningServer server;
  REQUIRE(server.port() > 0);

  SECTION("players") {
    auto res = server.get("/players");
    REQUIRE(res);
    CHECK(res->status == 200);
    auto body = Json::parse(res->body);
    REQUIRE(body["players"].size() == 7);
    CHECK(body["players"][0]["name"] == "Alpha");
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
  }
  SECTION("analysis is byte-identical to the CLI golden document") {
    auto res = server.get("/analysis?player=Alpha");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == slurp(CRICKET_RULES_FIXTURE_DIR "/golden_analyze.json"));
  }
  SECTION("filters pass through") {
    auto res = server.get("/analysis?player=Alpha&opponents=spin&from=2017-06-01&categories=response,footwork&top_k=2");
    REQUIRE(res);
    CHECK(res->status == 200);
    auto body = Json::parse(res->body);
    CHECK(body["provenance"]["filter"]["opponents"] == "spin");
    CHECK(body["provenance"]["filter"]["from"] == "2017-06-01");
    CHECK(body["biplots"].size() == 2);
    CHECK(body["rules"]["strength"]["top"].size() == 2);
    CHECK(body["confrontation_matrix"]["columns"].size() == 8);
  }
  SECTION("error statuses") {
    auto unknown = server.get("/analysis?player=Zulu");
    REQUIRE(unknown);
    CHECK(unknown->status == 404);
    CHECK(Json::parse(unknown->body)["error"]["code"] == "UnknownPlayer");

    auto bad_type = server.get("/analysis?player=Alpha&type=keeping");
    REQUIRE(bad_type);
    CHECK(bad_type->status == 400);

    auto missing = server.get("/analysis");
    REQUIRE(missing);
    CHECK(missing->status == 400);

    auto empty = server.get("/analysis?player=Alpha&from=2030-01-01&to=2030-12-31");
    REQUIRE(empty);
    CHECK(empty->status == 422);
    CHECK(Json::parse(empty->body)["error"]["code"] == "EmptySelection");
  }
  SECTION("health") {
    auto res = server.get("/health");
    REQUIRE(res);
    CHECK(Json::parse(res->body)["status"] == "ok");
  }
}

TEST_CASE("bind address resolution", "[server]") {
  CHECK(resolve_bind_address("0.0.0.0:9000") == std::pair<std::string, int>{"0.0.0.0", 9000});
  CHECK_THROWS_AS(resolve_bind_address("localhost"), Error);
  CHECK_THROWS_AS(resolve_bind_address("localhost:70000"), Error);
}

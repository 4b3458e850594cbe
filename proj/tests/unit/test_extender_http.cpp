#include <doctest.h>
#include <httplib.h>

#include <thread>

#include "corpus.hpp"
#include "greenpod/extender.hpp"

using namespace greenpod::extender;

TEST_SUITE("extender_http") {
  TEST_CASE("corpus over HTTP") {
    ExtenderService svc;
    ExtenderServer server(svc);
    const int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread loop([&] { server.listen(); });

    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);
    for (const auto& e : corpus::load()) {
      CAPTURE(e.name);
      const auto res = client.Post(e.path, e.body, "application/json");
      REQUIRE(res);
      CHECK(res->status == e.status);
      CHECK(res->body == e.expected.dump());
      CHECK(res->get_header_value("Content-Type") == "application/json");
    }

    const auto health = client.Get("/healthz");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(nlohmann::json::parse(health->body)["status"] == "ok");

    // Health stays responsive while prioritize traffic is in flight.
    const auto body = corpus::load()[5].body;
    std::vector<std::thread> load;
    for (int t = 0; t < 4; ++t) {
      load.emplace_back([&] {
        httplib::Client c("127.0.0.1", port);
        for (int i = 0; i < 25; ++i) c.Post("/api/v1/prioritize", body, "application/json");
      });
    }
    int healthy = 0;
    for (int i = 0; i < 10; ++i) {
      const auto h = client.Get("/healthz");
      healthy += h && h->status == 200;
    }
    for (auto& t : load) t.join();
    CHECK(healthy == 10);

    CHECK(client.Get("/api/v1/unknown")->status == 404);
    server.stop();
    loop.join();
  }
}

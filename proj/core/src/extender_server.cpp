#include <httplib.h>

#include "greenpod/extender.hpp"

namespace greenpod::extender {

struct ExtenderServer::Impl {
  ExtenderService& service;
  httplib::Server server;

  explicit Impl(ExtenderService& s) : service(s) {
    auto reply = [](httplib::Response& res, const Response& r) {
      res.status = r.status;
      res.set_content(r.text(), "application/json");
    };
    server.Post("/api/v1/filter", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.handle_filter(req.body));
    });
    server.Post("/api/v1/prioritize",
                [this, reply](const httplib::Request& req, httplib::Response& res) {
                  reply(res, service.handle_prioritize(req.body));
                });
    server.Get("/healthz", [this, reply](const httplib::Request&, httplib::Response& res) {
      reply(res, service.handle_health());
    });
  }
};

ExtenderServer::ExtenderServer(ExtenderService& service)
    : impl_(std::make_unique<Impl>(service)) {}

ExtenderServer::~ExtenderServer() { stop(); }

int ExtenderServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ExtenderServer::listen() { return impl_->server.listen_after_bind(); }

void ExtenderServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace greenpod::extender

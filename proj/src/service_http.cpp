#include <httplib.h>

#include "somit/service.hpp"

namespace somit::service {

struct HttpListener::Impl {
  Service& service;
  httplib::Server server;
};

HttpListener::HttpListener(Service& service) : impl_(new Impl{service, {}}) {
  const auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    const Response out = impl_->service.handle(Request::from_target(req.method, req.target, req.body));
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  impl_->server.Get(".*", dispatch);
  impl_->server.Post(".*", dispatch);
  impl_->server.Put(".*", dispatch);
  impl_->server.Delete(".*", dispatch);
}

HttpListener::~HttpListener() { stop(); }

int HttpListener::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpListener::run() { return impl_->server.listen_after_bind(); }

void HttpListener::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

bool serve(Service& service, const std::string& host, int port) {
  HttpListener listener(service);
  if (listener.bind(host, port) < 0) return false;
  return listener.run();
}

}  // namespace somit::service

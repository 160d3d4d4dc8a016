#include "justify/http_server.hpp"

#include <httplib.h>

#include "justify/errors.hpp"

namespace justify {
namespace {

using nlohmann::json;

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

std::size_t offset_param(const httplib::Request& req) {
  if (!req.has_param("offset")) return 0;
  const auto raw = req.get_param_value("offset");
  try {
    std::size_t used = 0;
    long long v = std::stoll(raw, &used);
    if (used == raw.size() && v >= 0) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw InvalidArgument("offset must be a non-negative integer");
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception&) {
    throw InvalidArgument("request body is not valid JSON");
  }
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const NotFoundError& e) {
      send_json(res, {{"error", e.what()}}, 404);
    } catch (const InvalidArgument& e) {
      send_json(res, {{"error", e.what()}}, 400);
    } catch (const FormatError& e) {
      send_json(res, {{"error", e.what()}}, 400);
    } catch (const std::exception& e) {
      send_json(res, {{"error", e.what()}}, 500);
    }
  };
}

}  // namespace

struct HttpServer::Impl {
  const JustificationService& service;
  InteractionStore& store;
  ServerOptions options;
  httplib::Server server;
  int port = -1;

  Impl(const JustificationService& s, InteractionStore& st, ServerOptions o)
      : service(s), store(st), options(std::move(o)) {
    routes();
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

    server.Get("/items", guarded([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, service.item_ids());
    }));

    server.Get(R"(/items/([^/]+)/justification)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 if (!req.has_param("model")) throw InvalidArgument("missing model parameter");
                 auto model = parse_model(req.get_param_value("model"));
                 send_json(res, to_json(service.get_justification(req.matches[1].str(), model)));
               }));

    server.Get(R"(/items/([^/]+)/quotes)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("aspect")) throw InvalidArgument("missing aspect parameter");
      const bool by_adj = req.has_param("adjective");
      const bool by_sign = req.has_param("sign");
      if (by_adj == by_sign) throw InvalidArgument("give exactly one of adjective and sign");
      QuoteFilter filter = by_adj ? QuoteFilter(AdjectiveFilter{req.get_param_value("adjective")})
                                  : QuoteFilter(parse_sign(req.get_param_value("sign")));
      json arr = json::array();
      for (const auto& q : service.get_quotes(req.matches[1].str(), req.get_param_value("aspect"), filter)) {
        arr.push_back(to_json(q));
      }
      send_json(res, arr);
    }));

    server.Get(R"(/items/([^/]+)/dimensions/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 Model model = req.has_param("model") ? parse_model(req.get_param_value("model")) : Model::thumbs;
                 auto page = service.get_dimension(req.matches[1].str(), req.matches[2].str(), offset_param(req));
                 send_json(res, to_json(page, model));
               }));

    server.Get(R"(/items/([^/]+)/reviews)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, to_json(service.get_reviews(req.matches[1].str(), offset_param(req))));
    }));

    server.Post("/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, {{"session_id", store.create_session()}}, 201);
    }));

    server.Post("/ratings", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto rating = rating_from_json(parse_body(req));
      service.item(rating.item_id);
      store.submit_rating(rating);
      send_json(res, {{"ok", true}});
    }));

    server.Post("/events", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto event = event_from_json(parse_body(req));
      service.item(event.item_id);
      store.record_event(std::move(event));
      send_json(res, {{"ok", true}});
    }));

    server.Get(R"(/sessions/([^/]+)/metrics)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, to_json(store.session_metrics(req.matches[1].str())));
    }));

    if (options.ui_dir && !server.set_mount_point("/", options.ui_dir->string())) {
      throw IoError("cannot serve UI from " + options.ui_dir->string());
    }
  }
};

HttpServer::HttpServer(const JustificationService& service, InteractionStore& store, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, store, std::move(options))) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& o = impl_->options;
  if (o.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(o.host);
  } else if (impl_->server.bind_to_port(o.host, o.port)) {
    impl_->port = o.port;
  }
  if (impl_->port < 0) throw IoError("cannot bind " + o.host + ":" + std::to_string(o.port));
  return impl_->port;
}

void HttpServer::run() {
  if (impl_->port < 0) bind();
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace justify

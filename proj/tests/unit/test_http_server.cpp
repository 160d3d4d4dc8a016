#include <gtest/gtest.h>

#include <httplib.h>

#include <thread>

#include "fixtures.hpp"
#include "justify/http_server.hpp"
#include "justify/index_store.hpp"

using namespace justify;
using nlohmann::json;

namespace {

class HttpTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto& res = fx::resources();
    auto index = std::make_shared<const AnalysisIndex>(
        AnalysisIndex{res.taxonomy, analyze_corpus(fx::f1_corpus(), res)});
    service_ = new JustificationService(index, res.grammar);
    store_ = new InteractionStore();
    server_ = new HttpServer(*service_, *store_, ServerOptions{"127.0.0.1", 0, std::nullopt});
    port_ = server_->bind();
    thread_ = new std::thread([] { server_->run(); });
  }

  static void TearDownTestSuite() {
    server_->stop();
    thread_->join();
    delete thread_;
    delete server_;
    delete store_;
    delete service_;
  }

  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

  json get(const std::string& path, int expected = 200) const {
    auto c = client();
    auto r = c.Get(path);
    EXPECT_TRUE(r) << path;
    if (!r) return {};
    EXPECT_EQ(r->status, expected) << path << ": " << r->body;
    EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");
    return json::parse(r->body);
  }

  json post(const std::string& path, const json& body, int expected = 200) const {
    auto c = client();
    auto r = c.Post(path, body.dump(), "application/json");
    EXPECT_TRUE(r) << path;
    if (!r) return {};
    EXPECT_EQ(r->status, expected) << path << ": " << r->body;
    return json::parse(r->body);
  }

  static inline JustificationService* service_ = nullptr;
  static inline InteractionStore* store_ = nullptr;
  static inline HttpServer* server_ = nullptr;
  static inline std::thread* thread_ = nullptr;
  static inline int port_ = 0;
};

}  // namespace

TEST_F(HttpTest, BindsAFreePort) { EXPECT_GT(port_, 0); }

TEST_F(HttpTest, Items) {
  EXPECT_EQ(get("/items"), json({"L1", "L2", "L3"}));
}

TEST_F(HttpTest, JustificationMatchesService) {
  for (auto m : kAllModels) {
    const std::string model(to_string(m));
    const auto j = get("/items/L1/justification?model=" + model);
    EXPECT_EQ(j, to_json(service_->get_justification("L1", m))) << model;
    EXPECT_EQ(j, get("/items/L1/justification?model=" + model));
  }
}

TEST_F(HttpTest, QuotesMatchThumbCounts) {
  const auto& item = service_->item("L1");
  for (const auto& r : rank_aspects(item.tuples)) {
    const auto th = thumb_counts(item.tuples, r.aspect);
    EXPECT_EQ(get("/items/L1/quotes?aspect=" + r.aspect + "&sign=up").size(), th.up);
    EXPECT_EQ(get("/items/L1/quotes?aspect=" + r.aspect + "&sign=down").size(), th.down);
  }
}

TEST_F(HttpTest, DimensionsAndReviews) {
  const auto page = get("/items/L1/dimensions/ambiance?offset=0");
  EXPECT_LE(page["aspects"].size(), kAspectPageSize);
  const auto reviews = get("/items/L1/reviews?offset=0");
  EXPECT_LE(reviews["reviews"].size(), kReviewPageSize);
}

TEST_F(HttpTest, Errors) {
  EXPECT_TRUE(get("/items/nope/justification?model=m-thumbs", 404).contains("error"));
  EXPECT_TRUE(get("/items/L1/justification?model=m-stars", 400).contains("error"));
  get("/items/L1/justification", 400);
  get("/items/L1/quotes?aspect=pool&sign=up", 404);
  get("/items/L1/quotes?aspect=location", 400);
  get("/items/L1/quotes?aspect=location&sign=up&adjective=great", 400);
  get("/sessions/999/metrics", 404);
}

TEST_F(HttpTest, SessionRatingEventMetrics) {
  const auto session = post("/sessions", json::object(), 201)["session_id"].get<std::string>();
  post("/ratings", {{"session_id", session}, {"item_id", "L1"}, {"value", 4}, {"model", "m-thumbs"}});
  post("/ratings", {{"session_id", session}, {"item_id", "L1"}, {"value", 2}, {"model", "m-thumbs"}});
  post("/ratings", {{"session_id", session}, {"item_id", "L2"}, {"opt_out", true}, {"model", "m-thumbs"}});
  post("/ratings", {{"session_id", session}, {"item_id", "L1"}, {"value", 2}, {"opt_out", true}}, 400);
  post("/ratings", {{"session_id", session}, {"item_id", "nope"}, {"value", 2}}, 404);
  for (int i = 0; i < 3; ++i) {
    post("/events", {{"session_id", session}, {"item_id", "L1"}, {"model", "m-thumbs"}, {"kind", "bar_click"}});
  }
  post("/events", {{"session_id", session}, {"item_id", "L1"}, {"model", "m-thumbs"}, {"kind", "wiggle"}}, 400);
  post("/events", {{"session_id", "999"}, {"item_id", "L1"}, {"model", "m-thumbs"}, {"kind", "bar_click"}}, 404);
  const auto m = get("/sessions/" + session + "/metrics");
  const auto& thumbs = m["models"]["m-thumbs"];
  EXPECT_EQ(thumbs["counts"]["bar_click"], 3);
  EXPECT_EQ(thumbs["n_ratings"], 1);
  EXPECT_EQ(thumbs["n_opt_outs"], 1);
  EXPECT_EQ(store_->rating(session, "L1")->value, 2);
}

TEST_F(HttpTest, MalformedBody) {
  auto c = client();
  auto r = c.Post("/events", "{not json", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
}

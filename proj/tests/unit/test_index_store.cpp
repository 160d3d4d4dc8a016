#include <gtest/gtest.h>

#include <fstream>

#include "fixtures.hpp"
#include "justify/errors.hpp"
#include "justify/index_store.hpp"
#include "justify/justification.hpp"

using namespace justify;

namespace {

AnalysisIndex f1_index() {
  return {fx::resources().taxonomy, analyze_corpus(fx::f1_corpus(), fx::resources())};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Index, RoundTripThreeItems) {
  const auto index = f1_index();
  ASSERT_EQ(index.items.size(), 3u);
  const auto path = fx::temp_dir("index") / "index.json";
  save_index(index, path);
  EXPECT_EQ(load_index(path), index);
  EXPECT_EQ(parse_index(serialize_index(index)), index);
}

TEST(Index, SerializationIsStable) {
  const auto index = f1_index();
  EXPECT_EQ(serialize_index(index), serialize_index(parse_index(serialize_index(index))));
}

TEST(Index, EmptyIsValid) {
  const AnalysisIndex empty{fx::resources().taxonomy, {}};
  const auto back = parse_index(serialize_index(empty));
  EXPECT_TRUE(back.items.empty());
  EXPECT_EQ(back.taxonomy, empty.taxonomy);
}

TEST(Index, TruncatedIsCorrupt) {
  const auto doc = serialize_index(f1_index());
  for (std::size_t cut : {doc.size() - 2, doc.size() / 2, std::size_t{10}, std::size_t{0}}) {
    EXPECT_THROW(parse_index(doc.substr(0, cut)), CorruptIndexError) << cut;
  }
  const auto path = fx::temp_dir("trunc") / "index.json";
  save_index(f1_index(), path);
  const auto full = slurp(path);
  std::ofstream(path, std::ios::binary | std::ios::trunc) << full.substr(0, full.size() / 3);
  EXPECT_THROW(load_index(path), CorruptIndexError);
}

TEST(Index, FlippedByteIsCorrupt) {
  auto doc = serialize_index(f1_index());
  const auto at = doc.find("location");
  ASSERT_NE(at, std::string::npos);
  doc[at] = 'L';
  EXPECT_THROW(parse_index(doc), CorruptIndexError);
}

TEST(Index, UnknownVersionRejected) {
  auto j = nlohmann::json::object({{"version", 99},
                                   {"taxonomy", to_json(fx::resources().taxonomy)},
                                   {"items", nlohmann::json::array()}});
  const auto body = j.dump();
  char crc[16];
  std::snprintf(crc, sizeof crc, "%08lx",
                static_cast<unsigned long>(stable_seed(body)));
  EXPECT_THROW(parse_index(body + "\ncrc32 " + crc + "\n"), VersionError);
}

TEST(Index, MissingFile) {
  EXPECT_THROW(load_index("/nonexistent/index.json"), IoError);
}

TEST(Index, ItemJsonCarriesNoNameOrPrice) {
  const auto j = to_json(f1_index().items[0]);
  for (const char* key : {"name", "price", "picture", "pictures"}) EXPECT_FALSE(j.contains(key));
  EXPECT_TRUE(j.contains("tuples"));
  EXPECT_TRUE(j.contains("quotes"));
}

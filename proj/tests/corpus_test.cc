#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "persuasion/common/utf8.h"
#include "persuasion/corpus/filters.h"
#include "persuasion/corpus/ingest.h"
#include "persuasion/corpus/percentiles.h"
#include "persuasion/corpus/text.h"
#include "test_support.h"

namespace persuasion::corpus {
namespace {

using testing::MakePost;
using testing::MockProvider;

std::vector<JsonLine> Lines(const std::string& text) {
  std::istringstream in(text);
  return ReadJsonLines(in);
}

TEST(Ingest, EmptyStream) { EXPECT_TRUE(IngestPosts(Lines("")).empty()); }

TEST(Ingest, ParsesOneRecord) {
  auto posts = IngestPosts(Lines(
      R"({"post_id":"p1","account_id":"acme","created_at":"2020-03-04T05:06:07Z",)"
      R"("text":"New #Deal for @bob at https://www.acme.com/x?y=1","like_count":7})"));
  ASSERT_EQ(posts.size(), 1u);
  EXPECT_EQ(posts[0].post_id, "p1");
  EXPECT_EQ(FormatTimestamp(posts[0].created_at), "2020-03-04T05:06:07Z");
  EXPECT_EQ(posts[0].like_count, 7);
  EXPECT_EQ(posts[0].hashtags, std::vector<std::string>{"deal"});
  EXPECT_EQ(posts[0].mentions, std::vector<std::string>{"bob"});
  EXPECT_EQ(posts[0].link_domains, std::vector<std::string>{"acme.com"});
  EXPECT_FALSE(posts[0].like_percentile.has_value());
}

TEST(Ingest, DuplicateNamesBothLines) {
  const std::string rec =
      R"({"post_id":"dup","account_id":"a","created_at":"2020-01-01T00:00:00Z","text":"x","like_count":1})";
  try {
    IngestPosts(Lines(rec + "\n" + rec + "\n"));
    FAIL() << "expected DuplicatePostError";
  } catch (const DuplicatePostError& e) {
    EXPECT_EQ(e.first_line(), 1);
    EXPECT_EQ(e.second_line(), 2);
    EXPECT_NE(std::string(e.what()).find("dup"), std::string::npos);
  }
}

TEST(Ingest, MalformedTimestampCarriesLine) {
  const std::string good =
      R"({"post_id":"a","account_id":"a","created_at":"2020-01-01T00:00:00Z","text":"x","like_count":1})";
  const std::string bad =
      R"({"post_id":"b","account_id":"a","created_at":"yesterday","text":"x","like_count":1})";
  try {
    IngestPosts(Lines(good + "\n" + bad + "\n"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Normalize, PlaceholderRules) {
  EXPECT_EQ(NormalizeText("Hi @bob see https://x.co"), "Hi <USERNAME> see <HYPERLINK>");
  EXPECT_EQ(NormalizeText(""), "");
}

TEST(Normalize, EmojiShortNameFromShippedTable) {
  EXPECT_EQ(NormalizeText("\xF0\x9F\x98\x80 ok"), ":grinning_face: ok");
  // Every table entry round-trips through the normalizer.
  for (const auto& e : EmojiTable()) {
    std::string s;
    utf8::AppendCodepoint(e.codepoint, &s);
    EXPECT_EQ(NormalizeText(s), ":" + std::string(e.short_name) + ":") << e.short_name;
  }
  EXPECT_FALSE(EmojiTableVersion().empty());
}

TEST(Normalize, IdempotentOnRandomInputs) {
  const std::vector<std::string> atoms = {"@bob",   " ",        "www.x.org/a", "https://t.co/z",
                                          "word",   "\xF0\x9F\x98\x80", "\xE2\x9D\xA4", "#tag",
                                          "<USERNAME>", ":", "email@host.com", "\n", "é"};
  std::mt19937 gen(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    int n = static_cast<int>(gen() % 12);
    for (int i = 0; i < n; ++i) s += atoms[gen() % atoms.size()];
    const std::string once = NormalizeText(s);
    EXPECT_EQ(NormalizeText(once), once) << s;
    EXPECT_EQ(once.find("http"), std::string::npos) << s;
  }
}

std::vector<PostRecord> FilterFixture() {
  return {
      MakePost("reply", "a", "2020-01-01T00:00:00Z", "@user thanks!", 100),
      MakePost("old", "a", "2014-06-01T00:00:00Z", "one two three four five six", 100),
      MakePost("short", "a", "2020-01-02T00:00:00Z", "only four words here", 100),
      MakePost("few_likes", "a", "2020-01-03T00:00:00Z", "one two three four five", 3),
      MakePost("boundary", "a", "2020-01-04T00:00:00Z", "one two three four five", 4),
  };
}

TEST(FilterPosts, StagesAndBoundaries) {
  auto [kept, report] = FilterPosts(FilterFixture(), {});
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].post_id, "boundary");
  ASSERT_EQ(report.stages.size(), 4u);
  EXPECT_EQ(report.stages[0].stage, "reply");
  EXPECT_EQ(report.stages[0].output_count, 4);
  EXPECT_EQ(report.stages[1].stage, "date");
  EXPECT_EQ(report.stages[1].output_count, 3);
  EXPECT_EQ(report.stages[2].stage, "words");
  EXPECT_EQ(report.stages[3].stage, "likes");
  for (std::size_t i = 0; i + 1 < report.stages.size(); ++i) {
    EXPECT_EQ(report.stages[i].output_count, report.stages[i + 1].input_count);
    EXPECT_LE(report.stages[i].output_count, report.stages[i].input_count);
  }
}

TEST(FilterPosts, IdempotentSubset) {
  auto input = FilterFixture();
  auto [once, r1] = FilterPosts(input, {});
  auto [twice, r2] = FilterPosts(once, {});
  EXPECT_EQ(once, twice);
  for (const auto& p : once) {
    EXPECT_TRUE(std::find(input.begin(), input.end(), p) != input.end());
  }
}

TEST(Accounts, ProfileCountsAndNewsShare) {
  std::vector<PostRecord> posts;
  for (int i = 0; i < 11; ++i) {
    posts.push_back(MakePost("d" + std::to_string(i), "busy", "2020-05-05T0" +
                                                                  std::to_string(i % 10) + ":00:0" +
                                                                  std::to_string(i / 10) + "Z",
                             i < 3 ? "breaking news story" : "a regular update", 5));
  }
  auto classifier = MockProvider(providers::Role::kClassifier, [](const Json& req) {
    const std::string text = req["payload"]["text"];
    return Json{{"label", text.find("news") != std::string::npos ? "news" : "not_news"}};
  });
  std::vector<AccountRecord> accounts(2);
  accounts[0].account_id = "busy";
  accounts[1].account_id = "silent";
  auto result = ProfileAccounts(posts, accounts, *classifier);
  ASSERT_EQ(result.accounts.size(), 2u);
  EXPECT_EQ(result.accounts[0].total_posts, 11);
  EXPECT_DOUBLE_EQ(result.accounts[0].max_posts_per_day, 11.0);
  ASSERT_TRUE(result.accounts[0].news_share.has_value());
  EXPECT_NEAR(*result.accounts[0].news_share, 3.0 / 11.0, 1e-12);
  EXPECT_EQ(result.accounts[1].total_posts, 0);
}

TEST(Accounts, NewsShareThreeOfTen) {
  std::vector<PostRecord> posts;
  for (int i = 0; i < 10; ++i) {
    posts.push_back(MakePost("n" + std::to_string(i), "acct",
                             "2020-05-0" + std::to_string(i % 9 + 1) + "T10:00:00Z",
                             i < 3 ? "news item" : "product item", 5));
  }
  auto classifier = MockProvider(providers::Role::kClassifier, [](const Json& req) {
    const std::string text = req["payload"]["text"];
    return Json{{"label", text.rfind("news", 0) == 0 ? "news" : "not_news"}};
  });
  std::vector<AccountRecord> accounts(1);
  accounts[0].account_id = "acct";
  auto result = ProfileAccounts(posts, accounts, *classifier);
  EXPECT_NEAR(*result.accounts[0].news_share, 0.3, 1e-12);
}

TEST(Accounts, ClassifierFailureHoldsAccount) {
  std::vector<PostRecord> posts = {MakePost("x", "acct", "2020-01-01T00:00:00Z", "hi", 1)};
  auto classifier = MockProvider(providers::Role::kClassifier, [](const Json&) -> Json {
    throw TransportError("down", 1);
  });
  std::vector<AccountRecord> accounts(1);
  accounts[0].account_id = "acct";
  auto result = ProfileAccounts(posts, accounts, *classifier);
  EXPECT_FALSE(result.accounts[0].news_share.has_value());
  ASSERT_EQ(result.errors.size(), 1u);
  EXPECT_EQ(result.errors[0].account_id, "acct");
}

AccountRecord Account(const std::string& id, std::int64_t posts, double daily, double news,
                      AccountCategory cat) {
  AccountRecord a;
  a.account_id = id;
  a.total_posts = posts;
  a.max_posts_per_day = daily;
  a.news_share = news;
  a.category = cat;
  return a;
}

TEST(Accounts, FilterThresholds) {
  std::vector<AccountRecord> accounts = {
      Account("at_threshold", 100, 10.0, 0.20, AccountCategory::kCompany),
      Account("too_few", 99, 1.0, 0.0, AccountCategory::kCompany),
      Account("newsy", 500, 1.0, 0.25, AccountCategory::kOrganization),
      Account("person", 500, 1.0, 0.0, AccountCategory::kPerson),
      Account("unclassified", 500, 1.0, 0.0, AccountCategory::kUnclassified),
      Account("other", 500, 1.0, 0.0, AccountCategory::kOther),
  };
  auto [kept, report] = FilterAccounts(accounts, {});
  std::vector<std::string> ids;
  for (const auto& a : kept) ids.push_back(a.account_id);
  EXPECT_EQ(ids, (std::vector<std::string>{"at_threshold", "other"}));
  EXPECT_EQ(report.stages.back().removal_reasons.at("unclassified"), 1);
}

TEST(Percentiles, HandValues) {
  std::vector<PostRecord> posts;
  for (int i = 1; i <= 4; ++i) {
    posts.push_back(MakePost("p" + std::to_string(i), "a",
                             "2020-01-0" + std::to_string(i) + "T00:00:00Z", "t", i));
  }
  posts.push_back(MakePost("solo", "b", "2020-01-01T00:00:00Z", "t", 9));
  posts.push_back(MakePost("tie1", "c", "2020-01-01T00:00:00Z", "t", 5));
  posts.push_back(MakePost("tie2", "c", "2020-01-02T00:00:00Z", "t", 5));
  auto out = ComputePercentiles(posts, PercentileGrouping::kAccountMonth);
  std::map<std::string, double> by_id;
  for (const auto& p : out) by_id[p.post_id] = *p.like_percentile;
  EXPECT_DOUBLE_EQ(by_id["p1"], 12.5);
  EXPECT_DOUBLE_EQ(by_id["p2"], 37.5);
  EXPECT_DOUBLE_EQ(by_id["p3"], 62.5);
  EXPECT_DOUBLE_EQ(by_id["p4"], 87.5);
  EXPECT_DOUBLE_EQ(by_id["solo"], 50.0);
  EXPECT_DOUBLE_EQ(by_id["tie1"], 50.0);
  EXPECT_DOUBLE_EQ(by_id["tie2"], 50.0);
}

// Independent route: count strictly smaller and equal peers directly.
double BruteForcePercentile(const std::vector<std::int64_t>& group, std::int64_t x) {
  double less = 0, equal = 0;
  for (auto v : group) {
    if (v < x) ++less;
    if (v == x) ++equal;
  }
  return 100.0 * (less + (equal + 1.0) / 2.0 - 0.5) / static_cast<double>(group.size());
}

TEST(Percentiles, MatchesBruteForceAndIsMonotone) {
  std::mt19937 gen(11);
  std::vector<PostRecord> posts;
  const std::vector<std::string> months = {"2020-01", "2020-02", "2020-03"};
  for (int i = 0; i < 400; ++i) {
    std::string acct = "acc" + std::to_string(gen() % 5);
    std::string month = months[gen() % months.size()];
    posts.push_back(MakePost("q" + std::to_string(i), acct,
                             month + "-1" + std::to_string(gen() % 9) + "T00:00:00Z", "t",
                             static_cast<std::int64_t>(gen() % 30)));
  }
  auto out = ComputePercentiles(posts, PercentileGrouping::kAccountMonth);
  std::map<std::string, std::vector<std::int64_t>> groups;
  for (const auto& p : posts) groups[p.account_id + MonthKey(p.created_at)].push_back(p.like_count);
  for (const auto& p : out) {
    const auto& g = groups[p.account_id + MonthKey(p.created_at)];
    double expected = g.size() == 1 ? 50.0 : BruteForcePercentile(g, p.like_count);
    EXPECT_NEAR(*p.like_percentile, expected, 1e-9);
    EXPECT_GE(*p.like_percentile, 0.0);
    EXPECT_LE(*p.like_percentile, 100.0);
  }
  // Permutation invariance.
  auto shuffled = posts;
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  EXPECT_EQ(ComputePercentiles(shuffled, PercentileGrouping::kAccountMonth), out);
}

TEST(Bins, Edges) {
  EXPECT_EQ(BinPercentile(15), EngagementBin::kLow);
  EXPECT_EQ(BinPercentile(30), EngagementBin::kMedium);
  EXPECT_EQ(BinPercentile(79.999), EngagementBin::kMedium);
  EXPECT_EQ(BinPercentile(80), EngagementBin::kHigh);
  EXPECT_EQ(BinPercentile(92), EngagementBin::kHigh);
  EXPECT_EQ(BinPercentile(0), EngagementBin::kLow);
  EXPECT_EQ(BinPercentile(100), EngagementBin::kHigh);
  EXPECT_THROW(BinPercentile(-0.1), RangeError);
  EXPECT_THROW(BinPercentile(100.1), RangeError);
}

TEST(Records, JsonRoundTrip) {
  PostRecord p = MakePost("r", "a", "2021-07-08T09:10:11Z", "hello world", 12);
  p.media.push_back({"m1", std::string("a red car"), {"car", "red"}});
  p.like_percentile = 42.5;
  p.links = {"acme.com/x"};
  EXPECT_EQ(PostFromJson(ToJson(p)), p);
}

}  // namespace
}  // namespace persuasion::corpus

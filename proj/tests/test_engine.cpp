#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "prime/engine.hpp"
#include "prime/synthetic.hpp"

using namespace prime;

namespace {

struct Fixture {
  BilingualLexicon lex = synthetic_lexicon(21, 150);
  SyntheticCorpus syn = generate_synthetic(22, 80, lex);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

std::unique_ptr<Engine> loaded_engine(EngineConfig cfg = {}) {
  auto e = std::make_unique<Engine>(cfg);
  e->load(fixture().syn.ja, fixture().syn.en, fixture().lex);
  return e;
}

// Title of the ja doc, written with spaces between its annotated words.
std::string ja_query(std::size_t i) {
  std::vector<std::string> words;
  for (const auto& t : *fixture().syn.ja.docs[i].title_tokens)
    if (t.pos == "名詞") words.push_back(t.surface);
  return text::join(words);
}

int status_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ApiError& e) {
    return e.status();
  }
  return 200;
}

std::set<std::string> all_members(const SearchResponse& r) {
  std::set<std::string> out;
  for (const auto& c : r.clusters)
    for (const auto& m : c.members) out.insert(m.hit.doc_id);
  return out;
}

nlohmann::json without_session(nlohmann::json j) {
  j.erase("session_id");
  return j;
}

}  // namespace

TEST(Engine, NotLoaded) {
  Engine e;
  EXPECT_EQ(status_of([&] { e.handle_search({"x", Lang::En}); }), 503);
  EXPECT_EQ(status_of([&] { e.handle_doc("x", Lang::En); }), 503);
  EXPECT_EQ(e.health()["status"], "loading");
}

TEST(Engine, RequestValidation) {
  auto e = loaded_engine();
  EXPECT_EQ(status_of([&] { e->handle_search({"  ", Lang::En}); }), 400);
  EXPECT_EQ(status_of([&] { e->handle_search({"x", Lang::En, 0}); }), 400);
  EXPECT_EQ(status_of([&] { e->handle_search({"x", Lang::En, 3, 4}); }), 400);
  EXPECT_EQ(status_of([&] { e->handle_search({"x", Lang::En, 3, 0}); }), 400);
}

TEST(Engine, ZeroHits) {
  auto e = loaded_engine();
  auto r = e->handle_search({"nothingmatcheshere", Lang::En});
  EXPECT_TRUE(r.clusters.empty());
  EXPECT_FALSE(r.session_id.empty());
  EXPECT_EQ(e->session_count(), 1u);
}

TEST(Engine, KOneGivesOneClusterOfOneDoc) {
  auto e = loaded_engine();
  auto r = e->handle_search({ja_query(0), Lang::Ja, 1});
  ASSERT_EQ(r.clusters.size(), 1u);
  EXPECT_EQ(r.clusters[0].members.size(), 1u);
}

TEST(Engine, SeededQueryFindsBothCounterparts) {
  auto e = loaded_engine();
  std::size_t ok = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    auto r = e->handle_search({ja_query(i), Lang::Ja, 20});
    auto ids = all_members(r);
    ok += ids.count(fixture().syn.counterparts[i].first) && ids.count(fixture().syn.counterparts[i].second);
  }
  EXPECT_GE(ok, 8u);
}

TEST(Engine, ResponseInvariants) {
  auto e = loaded_engine();
  auto r = e->handle_search({ja_query(3), Lang::Ja, 15, 4});
  EXPECT_FALSE(r.translated_query.empty());
  ASSERT_FALSE(r.alternates.empty());
  EXPECT_EQ(r.alternates[0].text(), r.translated_query);
  std::size_t members = 0;
  for (const auto& c : r.clusters) {
    bool centroid_found = false;
    for (const auto& m : c.members) {
      ++members;
      centroid_found |= m.hit.doc_id == c.centroid;
      EXPECT_EQ(m.gloss.has_value(), m.hit.lang != Lang::Ja);
      EXPECT_GE(m.hit.normalized_score, 0.0);
      EXPECT_LE(m.hit.normalized_score, 1.0);
    }
    EXPECT_TRUE(centroid_found);
  }
  EXPECT_EQ(all_members(r).size(), members);
  EXPECT_LE(members, 15u);
  EXPECT_LE(r.clusters.size(), 4u);
}

TEST(Engine, Deterministic) {
  auto e = loaded_engine();
  auto a = to_json(e->handle_search({ja_query(5), Lang::Ja}), *e);
  auto b = to_json(e->handle_search({ja_query(5), Lang::Ja}), *e);
  EXPECT_NE(a["session_id"], b["session_id"]);
  EXPECT_EQ(without_session(a).dump(), without_session(b).dump());
  auto other = loaded_engine();
  EXPECT_EQ(without_session(to_json(other->handle_search({ja_query(5), Lang::Ja}), *other)).dump(),
            without_session(a).dump());
}

TEST(Engine, JsonCarriesScoreDecomposition) {
  auto e = loaded_engine();
  auto j = to_json(e->handle_search({ja_query(1), Lang::Ja}), *e);
  ASSERT_FALSE(j["alternates"].empty());
  for (const char* key : {"lm_logprob", "tm_logprob", "total", "target"}) EXPECT_TRUE(j["alternates"][0].contains(key));
  ASSERT_FALSE(j["clusters"].empty());
  const auto& c = j["clusters"][0];
  EXPECT_TRUE(c["centroid"].contains("summary"));
  EXPECT_LE(unicode::length(c["centroid"]["summary"].get<std::string>()), 200u);
  for (const char* key : {"id", "lang", "title", "score", "normalized_score"}) EXPECT_TRUE(c["members"][0].contains(key));
}

TEST(Engine, ReclusterKeepAllSameK) {
  auto e = loaded_engine();
  auto r = e->handle_search({ja_query(2), Lang::Ja, 12, 3});
  ASSERT_EQ(r.clusters.size(), 3u);
  auto again = e->handle_recluster(r.session_id, {0, 1, 2}, 3);
  ASSERT_EQ(again.clusters.size(), 3u);
  for (std::size_t c = 0; c < 3; ++c) {
    std::set<std::string> a, b;
    for (const auto& m : r.clusters[c].members) a.insert(m.hit.doc_id);
    for (const auto& m : again.clusters[c].members) b.insert(m.hit.doc_id);
    EXPECT_EQ(a, b);
  }
  EXPECT_EQ(again.history_length, 1u);
}

TEST(Engine, SuccessiveDiscardsShrink) {
  auto e = loaded_engine();
  auto r0 = e->handle_search({ja_query(4), Lang::Ja, 20, 5});
  ASSERT_EQ(r0.clusters.size(), 5u);
  auto r1 = e->handle_recluster(r0.session_id, {0, 1, 2, 3}, 4);
  auto r2 = e->handle_recluster(r0.session_id, {0, 1, 2}, std::nullopt);
  auto s0 = all_members(r0), s1 = all_members(r1), s2 = all_members(r2);
  EXPECT_LT(s1.size(), s0.size());
  EXPECT_LT(s2.size(), s1.size());
  for (const auto& id : s2) EXPECT_TRUE(s1.count(id));
  for (const auto& id : s1) EXPECT_TRUE(s0.count(id));
  EXPECT_EQ(r2.history_length, 2u);
}

TEST(Engine, ReclusterErrors) {
  auto e = loaded_engine();
  auto r = e->handle_search({ja_query(6), Lang::Ja, 10, 2});
  EXPECT_EQ(status_of([&] { e->handle_recluster("nope", {0}); }), 404);
  EXPECT_EQ(status_of([&] { e->handle_recluster(r.session_id, {}); }), 400);
  EXPECT_EQ(status_of([&] { e->handle_recluster(r.session_id, {9}); }), 400);
  EXPECT_EQ(status_of([&] { e->handle_recluster(r.session_id, {0}, 999); }), 400);
}

TEST(Engine, SessionsExpire) {
  EngineConfig cfg;
  cfg.session_timeout = std::chrono::minutes(10);
  auto e = loaded_engine(cfg);
  auto now = Engine::Clock::now();
  e->set_clock([&] { return now; });
  auto r = e->handle_search({ja_query(7), Lang::Ja, 10, 2});
  now += std::chrono::minutes(9);
  EXPECT_EQ(status_of([&] { e->handle_recluster(r.session_id, {0, 1}, 2); }), 200);
  now += std::chrono::minutes(9);  // idle time counts from the last access
  EXPECT_EQ(status_of([&] { e->handle_recluster(r.session_id, {0, 1}, 2); }), 200);
  now += std::chrono::minutes(11);
  EXPECT_EQ(status_of([&] { e->handle_recluster(r.session_id, {0, 1}, 2); }), 404);
  EXPECT_EQ(e->session_count(), 0u);
}

TEST(Engine, HandleDoc) {
  auto e = loaded_engine();
  const auto& ja = fixture().syn.ja.docs[0];
  const auto& en = fixture().syn.en.docs[0];
  EXPECT_FALSE(e->handle_doc(ja.id, Lang::Ja).contains("gloss"));
  auto j = e->handle_doc(en.id, Lang::Ja);
  ASSERT_TRUE(j.contains("gloss"));
  EXPECT_FALSE(j["gloss"].empty());
  EXPECT_EQ(j["title"], en.title);
  EXPECT_EQ(status_of([&] { e->handle_doc("missing", Lang::En); }), 404);
}

TEST(Engine, DuplicateIdsAcrossLanguagesRejected) {
  Collection ja, en;
  ja.docs.push_back({"X", Lang::Ja, "情報", "検索", {}, {}, {}});
  en.docs.push_back({"X", Lang::En, "information", "retrieval", {}, {}, {}});
  Engine e;
  EXPECT_THROW(e.load(ja, en, BilingualLexicon{}), Error);
  EXPECT_FALSE(e.loaded());
}

TEST(Engine, LexiconSwapChangesTranslation) {
  auto e = loaded_engine();
  const std::string q = ja_query(0);
  auto before = e->handle_search({q, Lang::Ja});
  e->set_lexicon(BilingualLexicon{});
  auto after = e->handle_search({q, Lang::Ja});
  EXPECT_NE(before.translated_query, after.translated_query);
  for (const auto& a : after.alternates) EXPECT_LE(a.tm_logprob, 0.0);
}

TEST(Engine, ConcurrentSearchesDuringLexiconSwaps) {
  auto e = loaded_engine();
  std::atomic<int> failures{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      for (int i = 0; i < 15; ++i) {
        try {
          auto r = e->handle_search({ja_query(static_cast<std::size_t>(t * 15 + i) % 40), Lang::Ja, 10, 3});
          if (!r.clusters.empty()) e->handle_recluster(r.session_id, {0}, 1);
        } catch (...) {
          ++failures;
        }
      }
    });
  pool.emplace_back([&] {
    for (int i = 0; i < 10; ++i) e->set_lexicon(i % 2 ? fixture().lex : BilingualLexicon{});
  });
  for (auto& th : pool) th.join();
  EXPECT_EQ(failures.load(), 0);
}

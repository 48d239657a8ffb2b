#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "prime/retrieval.hpp"
#include "prime/synthetic.hpp"

using namespace prime;
namespace fs = std::filesystem;

namespace {
PatentDoc en(const std::string& id, const std::string& abstract, const std::string& title = "") {
  return {id, Lang::En, title, abstract, std::nullopt, std::nullopt, std::nullopt};
}
Collection coll(std::vector<PatentDoc> docs) { return Collection{std::move(docs)}; }

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("prime_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}
}  // namespace

TEST(TermWeight, HandValues) {
  EXPECT_NEAR(term_weight(2, 10, 10, 4, 1), 2.0 / 3.0 * std::log(4.0), 1e-12);
  EXPECT_NEAR(term_weight(2, 10, 10, 4, 1), 0.92420, 1e-5);
  EXPECT_NEAR(term_weight(1, 20, 10, 4, 2), 0.23105, 1e-5);
  EXPECT_EQ(term_weight(3, 7, 10, 5, 5), 0.0);
}

TEST(TermWeight, Monotonicity) {
  for (double tf = 1; tf < 8; ++tf)
    for (double df = 1; df < 9; ++df)
      for (double dl = 1; dl < 40; dl += 3) {
        const double w = term_weight(tf, dl, 12, 10, df);
        EXPECT_LT(w, term_weight(tf + 1, dl, 12, 10, df));
        EXPECT_GT(w, term_weight(tf, dl, 12, 10, df + 1));
        EXPECT_GT(w, term_weight(tf, dl + 1, 12, 10, df));
      }
}

TEST(Index, HandCounts) {
  auto idx = build_index(coll({en("d1", "a b a")}), Lang::En, gen::no_stopwords());
  EXPECT_EQ(idx.doc_count(), 1u);
  EXPECT_EQ(idx.df("a"), 1u);
  EXPECT_EQ(idx.tf("a", "d1"), 2u);
  EXPECT_EQ(idx.tf("b", "d1"), 1u);
  EXPECT_EQ(idx.term_count(), 2u);
  EXPECT_DOUBLE_EQ(idx.avglen(), 5.0);
}

TEST(Index, AvglenIsMeanCharacterLength) {
  auto idx = build_index(coll({en("d1", "abcdefghij"), en("d2", "x", std::string(29, 'y'))}), Lang::En);
  EXPECT_DOUBLE_EQ(idx.avglen(), 20.0);
  // Characters, not bytes.
  Collection ja;
  ja.docs.push_back({"j1", Lang::Ja, "データ", "処理", {}, {}, {}});
  EXPECT_DOUBLE_EQ(build_index(ja, Lang::Ja).avglen(), 5.0);
}

TEST(Index, EmptyLanguageIsError) { EXPECT_THROW(build_index(coll({en("d1", "x")}), Lang::Ja), Error); }

TEST(Index, OrderIndependent) {
  std::mt19937_64 rng(3);
  std::vector<oracle::PlainDoc> truth;
  auto c = gen::random_corpus(rng, 40, 30, truth);
  auto a = build_index(c, Lang::En);
  std::shuffle(c.docs.begin(), c.docs.end(), rng);
  EXPECT_EQ(a, build_index(c, Lang::En));
}

TEST(Index, Invariants) {
  std::mt19937_64 rng(4);
  std::vector<oracle::PlainDoc> truth;
  auto idx = build_index(gen::random_corpus(rng, 50, 40, truth), Lang::En);
  double total = 0;
  for (const auto& d : idx.docs()) total += static_cast<double>(d.length);
  EXPECT_DOUBLE_EQ(idx.avglen(), total / static_cast<double>(idx.doc_count()));
  for (const auto& t : idx.terms()) {
    ASSERT_NE(idx.postings(t), nullptr);
    EXPECT_EQ(idx.df(t), idx.postings(t)->size());
    for (const auto& p : *idx.postings(t)) EXPECT_GE(p.tf, 1u);
  }
}

TEST(Score, HandCorpusFirstExample) {
  // Four docs of equal length; "xa" occurs twice in one doc.
  auto idx = build_index(coll({en("d1", "xa xa"), en("d2", "xb xc"), en("d3", "xd xe"), en("d4", "xf xg")}), Lang::En,
                         gen::no_stopwords());
  auto hits = idx.score({"xa"});
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_NEAR(hits[0].score, 0.92420, 1e-5);
}

TEST(Score, HandCorpusSecondExample) {
  // Lengths 8, 2, 2, 4: avglen 4 and d1 is twice that; df("ab") = 2.
  auto idx = build_index(coll({en("d1", "ab cd ef"), en("d2", "ab"), en("d3", "zz"), en("d4", "yyyy")}), Lang::En,
                         gen::no_stopwords());
  ASSERT_DOUBLE_EQ(idx.avglen(), 4.0);
  auto hits = idx.score({"ab"});
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[1].doc_id, "d1");
  EXPECT_NEAR(hits[1].score, 0.23105, 1e-5);
}

TEST(Score, TermInEveryDocContributesZero) {
  auto idx = build_index(coll({en("d1", "aa bb"), en("d2", "aa cc")}), Lang::En, gen::no_stopwords());
  for (const auto& h : idx.score({"aa"})) EXPECT_EQ(h.score, 0.0);
}

TEST(Score, SetSemanticsAndNoMatch) {
  auto idx = build_index(coll({en("d1", "aa bb"), en("d2", "cc dd"), en("d3", "ee")}), Lang::En, gen::no_stopwords());
  auto once = idx.score({"aa"}), twice = idx.score({"aa", "aa"});
  ASSERT_EQ(once.size(), 1u);
  EXPECT_EQ(once[0].score, twice[0].score);
  EXPECT_TRUE(idx.score({"zz"}).empty());
  EXPECT_TRUE(idx.score({}).empty());
}

TEST(Score, TiesByDocId) {
  auto idx = build_index(coll({en("d3", "aa"), en("d1", "aa"), en("d2", "bb")}), Lang::En, gen::no_stopwords());
  auto hits = idx.score({"aa"});
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].doc_id, "d1");
  EXPECT_EQ(hits[1].doc_id, "d3");
}

TEST(Score, MatchesFullScan) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<oracle::PlainDoc> truth;
    auto c = gen::random_corpus(rng, 1 + rng() % 60, 1 + rng() % 100, truth);
    auto idx = build_index(c, Lang::En, gen::no_stopwords());
    for (int q = 0; q < 10; ++q) {
      std::vector<std::string> query;
      for (std::size_t i = 0; i < 1 + rng() % 5; ++i) query.push_back("t" + std::to_string(rng() % 110));
      const auto want = oracle::full_scan_scores(truth, query);
      const auto got = idx.score(query);
      ASSERT_EQ(got.size(), want.size());
      for (const auto& h : got) EXPECT_NEAR(h.score, want.at(h.doc_id), 1e-9);
    }
  }
}

TEST(Bilingual, EmptyTranslationGivesSourceRanking) {
  auto enidx = build_index(coll({en("e1", "aa bb"), en("e2", "aa"), en("e3", "cc")}), Lang::En, gen::no_stopwords());
  Collection ja;
  ja.docs.push_back({"j1", Lang::Ja, "情報", "", {}, {}, {}});
  auto jaidx = build_index(ja, Lang::Ja);
  auto merged = bilingual_search(jaidx, enidx, {"aa"}, Lang::En, {}, 10);
  auto direct = enidx.score({"aa"});
  ASSERT_EQ(merged.size(), direct.size());
  for (std::size_t i = 0; i < merged.size(); ++i) {
    EXPECT_EQ(merged[i].doc_id, direct[i].doc_id);
    EXPECT_DOUBLE_EQ(merged[i].normalized_score, direct[i].score / direct[0].score);
  }
  EXPECT_DOUBLE_EQ(merged[0].normalized_score, 1.0);
}

TEST(Bilingual, SingletonTiesJapaneseFirst) {
  auto enidx = build_index(coll({en("e1", "aa"), en("e2", "bb")}), Lang::En, gen::no_stopwords());
  Collection ja;
  ja.docs.push_back({"j1", Lang::Ja, "情報", "", {}, {}, {}});
  ja.docs.push_back({"j2", Lang::Ja, "検索", "", {}, {}, {}});
  auto jaidx = build_index(ja, Lang::Ja);
  auto merged = bilingual_search(jaidx, enidx, {"aa"}, Lang::En, {"情報"}, 10);
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_EQ(merged[0].doc_id, "j1");
  EXPECT_EQ(merged[1].doc_id, "e1");
  EXPECT_DOUBLE_EQ(merged[0].normalized_score, 1.0);
  EXPECT_DOUBLE_EQ(merged[1].normalized_score, 1.0);
  EXPECT_EQ(bilingual_search(jaidx, enidx, {"aa"}, Lang::En, {"情報"}, 1).size(), 1u);
}

TEST(Bilingual, ZeroScoreListExcluded) {
  // "aa" occurs in every en doc, so its list has max score 0.
  auto enidx = build_index(coll({en("e1", "aa"), en("e2", "aa")}), Lang::En, gen::no_stopwords());
  Collection ja;
  ja.docs.push_back({"j1", Lang::Ja, "情報", "", {}, {}, {}});
  ja.docs.push_back({"j2", Lang::Ja, "検索", "", {}, {}, {}});
  auto merged = bilingual_search(build_index(ja, Lang::Ja), enidx, {"情報"}, Lang::Ja, {"aa"}, 10);
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_EQ(merged[0].doc_id, "j1");
}

TEST(Bilingual, SyntheticCounterpartsInTopTwo) {
  auto lex = synthetic_lexicon(41, 120);
  auto syn = generate_synthetic(42, 60, lex);
  auto jaidx = build_index(syn.ja, Lang::Ja), enidx = build_index(syn.en, Lang::En);
  const Stoplists stop;
  // Query with the title phrases of a pair; translate them with the planted
  // lexicon (entries are one-to-one).
  std::size_t ok = 0, tried = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    const auto& jd = syn.ja.docs[i];
    std::vector<std::string> q = content_words(field_tokens(jd, Field::Title, stop));
    std::vector<std::string> tq;
    for (const auto& p : doc_phrases(jd, stop))
      if (p.field == Field::Title)
        for (const auto& [t, f] : lex.lookup(p.text(), Direction::JaEn))
          for (const auto& w : text::split_ws(t)) tq.push_back(w);
    auto hits = bilingual_search(jaidx, enidx, q, Lang::Ja, tq, 2);
    ++tried;
    std::set<std::string> ids;
    for (const auto& h : hits) ids.insert(h.doc_id);
    ok += ids.count(syn.counterparts[i].first) && ids.count(syn.counterparts[i].second);
  }
  EXPECT_GE(ok, 8u) << ok << "/" << tried;
}

TEST(IndexFile, RoundTrip) {
  std::mt19937_64 rng(5);
  std::vector<oracle::PlainDoc> truth;
  auto idx = build_index(gen::random_corpus(rng, 30, 25, truth), Lang::En);
  const auto dir = temp_dir("index");
  idx.save(dir);
  for (const char* f : {"meta.tsv", "docs.tsv", "terms.tsv", "postings.tsv"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
  auto back = InvertedIndex::load(dir);
  EXPECT_EQ(back, idx);
  EXPECT_EQ(back.score({"t1", "t2"}).size(), idx.score({"t1", "t2"}).size());
  fs::remove_all(dir);
}

TEST(IndexFile, DetectsInconsistency) {
  auto idx = build_index(coll({en("d1", "aa bb"), en("d2", "aa")}), Lang::En, gen::no_stopwords());
  const auto dir = temp_dir("index_bad");
  idx.save(dir);
  {
    std::ofstream out(dir / "terms.tsv");
    out << "aa\t1\nbb\t1\n";
  }
  EXPECT_THROW(InvertedIndex::load(dir), ParseError);
  idx.save(dir);
  {
    std::ofstream out(dir / "postings.tsv", std::ios::app);
    out << "cc\tmissing\t1\n";
  }
  EXPECT_THROW(InvertedIndex::load(dir), ParseError);
  EXPECT_THROW(InvertedIndex::load(dir / "nope"), Error);
  fs::remove_all(dir);
}

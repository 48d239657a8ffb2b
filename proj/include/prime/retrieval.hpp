#ifndef PRIME_RETRIEVAL_HPP
#define PRIME_RETRIEVAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "prime/corpus.hpp"
#include "prime/error.hpp"
#include "prime/text.hpp"
#include "prime/unicode.hpp"

namespace prime {

struct Posting {
  uint32_t doc = 0;  // index into InvertedIndex::docs()
  uint32_t tf = 0;
};

struct DocStat {
  std::string id;
  std::size_t length = 0;  // characters in title + abstract

  bool operator==(const DocStat&) const = default;
};

struct ScoredHit {
  std::string doc_id;
  Lang lang = Lang::En;
  double score = 0.0;
  double normalized_score = 0.0;
};

/// Per-term contribution to a document's relevance score:
///   tf / (dl / avglen + tf) * ln(n / df)
inline double term_weight(double tf, double dl, double avglen, double n, double df) {
  return tf / (dl / avglen + tf) * std::log(n / df);
}

class InvertedIndex {
 public:
  InvertedIndex() = default;

  /// Word-based index over the content words of title + abstract of every
  /// document in `lang`. Documents are kept sorted by id, so the result does
  /// not depend on collection order.
  static InvertedIndex build(const Collection& c, Lang lang, const Stoplists& stop = {}) {
    std::vector<const PatentDoc*> docs;
    for (const auto& d : c.docs)
      if (d.lang == lang) docs.push_back(&d);
    if (docs.empty()) throw Error("cannot build index: no " + std::string(to_string(lang)) + " documents");
    std::sort(docs.begin(), docs.end(), [](const auto* a, const auto* b) { return a->id < b->id; });

    InvertedIndex idx;
    idx.lang_ = lang;
    std::size_t total_len = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      const auto& d = *docs[i];
      DocStat st{d.id, unicode::length(d.title) + unicode::length(d.abstract)};
      total_len += st.length;
      idx.docs_.push_back(std::move(st));
      std::map<std::string, uint32_t> tf;
      for (auto& w : doc_terms(d, stop)) ++tf[w];
      for (const auto& [term, n] : tf) idx.postings_[term].push_back({static_cast<uint32_t>(i), n});
    }
    idx.avglen_ = static_cast<double>(total_len) / static_cast<double>(idx.docs_.size());
    return idx;
  }

  Lang lang() const { return lang_; }
  std::size_t doc_count() const { return docs_.size(); }
  double avglen() const { return avglen_; }
  const std::vector<DocStat>& docs() const { return docs_; }
  std::size_t term_count() const { return postings_.size(); }

  std::size_t df(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? 0 : it->second.size();
  }
  const std::vector<Posting>* postings(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? nullptr : &it->second;
  }
  uint32_t tf(const std::string& term, const std::string& doc_id) const {
    if (const auto* p = postings(term))
      for (const auto& e : *p)
        if (docs_[e.doc].id == doc_id) return e.tf;
    return 0;
  }
  bool contains_term(const std::string& term) const { return postings_.count(term) != 0; }

  std::vector<std::string> terms() const {
    std::vector<std::string> out;
    out.reserve(postings_.size());
    for (const auto& [t, p] : postings_) out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Scores every document containing at least one query term. Query terms
  /// are a set. Sorted by score descending, ties by doc id.
  std::vector<ScoredHit> score(const std::vector<std::string>& query) const {
    const std::set<std::string> terms(query.begin(), query.end());
    std::vector<double> acc(docs_.size(), 0.0);
    std::vector<char> hit(docs_.size(), 0);
    const double n = static_cast<double>(docs_.size());
    for (const auto& t : terms) {
      auto it = postings_.find(t);
      if (it == postings_.end()) continue;
      const double df = static_cast<double>(it->second.size());
      for (const auto& p : it->second) {
        acc[p.doc] += term_weight(p.tf, static_cast<double>(docs_[p.doc].length), avglen_, n, df);
        hit[p.doc] = 1;
      }
    }
    std::vector<ScoredHit> out;
    for (std::size_t i = 0; i < docs_.size(); ++i)
      if (hit[i]) out.push_back({docs_[i].id, lang_, acc[i], 0.0});
    std::sort(out.begin(), out.end(), [](const ScoredHit& a, const ScoredHit& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.doc_id < b.doc_id;
    });
    return out;
  }

  bool operator==(const InvertedIndex& o) const {
    return lang_ == o.lang_ && docs_ == o.docs_ && avglen_ == o.avglen_ && same_postings(o);
  }

  // Persistence -------------------------------------------------------------
  //
  //   meta.tsv      lang, N, avglen (key<TAB>value)
  //   docs.tsv      doc id<TAB>length in characters
  //   terms.tsv     term<TAB>df
  //   postings.tsv  term<TAB>doc id<TAB>tf

  void save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    {
      auto out = text::open_out((dir / "meta.tsv").string());
      out << "lang\t" << to_string(lang_) << "\nN\t" << docs_.size() << "\navglen\t" << text::format_double(avglen_)
          << '\n';
    }
    {
      auto out = text::open_out((dir / "docs.tsv").string());
      for (const auto& d : docs_) out << d.id << '\t' << d.length << '\n';
    }
    const auto sorted = terms();
    {
      auto out = text::open_out((dir / "terms.tsv").string());
      for (const auto& t : sorted) out << t << '\t' << postings_.at(t).size() << '\n';
    }
    auto out = text::open_out((dir / "postings.tsv").string());
    for (const auto& t : sorted)
      for (const auto& p : postings_.at(t)) out << t << '\t' << docs_[p.doc].id << '\t' << p.tf << '\n';
  }

  static InvertedIndex load(const std::filesystem::path& dir) {
    InvertedIndex idx;
    std::string line;
    std::size_t n_expected = 0;
    {
      const auto path = (dir / "meta.tsv").string();
      auto in = text::open_in(path);
      std::size_t lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        text::chomp(line);
        if (line.empty()) continue;
        auto cols = text::split(line, '\t');
        if (cols.size() != 2) throw ParseError(path, lineno, "expected key<TAB>value");
        if (cols[0] == "lang") {
          auto l = parse_lang(cols[1]);
          if (!l) throw ParseError(path, lineno, "unknown lang " + cols[1]);
          idx.lang_ = *l;
        } else if (cols[0] == "N") {
          int64_t v = 0;
          if (!text::parse_int(cols[1], v) || v < 0) throw ParseError(path, lineno, "invalid N");
          n_expected = static_cast<std::size_t>(v);
        }
      }
    }
    std::unordered_map<std::string, uint32_t> doc_index;
    {
      const auto path = (dir / "docs.tsv").string();
      auto in = text::open_in(path);
      std::size_t lineno = 0;
      std::size_t total = 0;
      while (std::getline(in, line)) {
        ++lineno;
        text::chomp(line);
        if (line.empty()) continue;
        auto cols = text::split(line, '\t');
        int64_t len = 0;
        if (cols.size() != 2 || !text::parse_int(cols[1], len) || len < 0)
          throw ParseError(path, lineno, "expected id<TAB>length");
        if (!doc_index.emplace(cols[0], static_cast<uint32_t>(idx.docs_.size())).second)
          throw ParseError(path, lineno, "duplicate doc id " + cols[0]);
        idx.docs_.push_back({cols[0], static_cast<std::size_t>(len)});
        total += static_cast<std::size_t>(len);
      }
      if (idx.docs_.size() != n_expected) throw ParseError(path, 0, "document count does not match meta.tsv N");
      if (idx.docs_.empty()) throw ParseError(path, 0, "index has no documents");
      idx.avglen_ = static_cast<double>(total) / static_cast<double>(idx.docs_.size());
    }
    {
      const auto path = (dir / "postings.tsv").string();
      auto in = text::open_in(path);
      std::size_t lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        text::chomp(line);
        if (line.empty()) continue;
        auto cols = text::split(line, '\t');
        int64_t tf = 0;
        if (cols.size() != 3 || !text::parse_int(cols[2], tf) || tf < 1)
          throw ParseError(path, lineno, "expected term<TAB>doc<TAB>tf with tf >= 1");
        auto it = doc_index.find(cols[1]);
        if (it == doc_index.end()) throw ParseError(path, lineno, "unknown doc id " + cols[1]);
        idx.postings_[cols[0]].push_back({it->second, static_cast<uint32_t>(tf)});
      }
    }
    {
      const auto path = (dir / "terms.tsv").string();
      auto in = text::open_in(path);
      std::size_t lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        text::chomp(line);
        if (line.empty()) continue;
        auto cols = text::split(line, '\t');
        int64_t df = 0;
        if (cols.size() != 2 || !text::parse_int(cols[1], df)) throw ParseError(path, lineno, "expected term<TAB>df");
        if (idx.df(cols[0]) != static_cast<std::size_t>(df))
          throw ParseError(path, lineno, "df of \"" + cols[0] + "\" disagrees with postings");
      }
    }
    for (auto& [t, p] : idx.postings_)
      std::sort(p.begin(), p.end(), [](const Posting& a, const Posting& b) { return a.doc < b.doc; });
    return idx;
  }

 private:
  bool same_postings(const InvertedIndex& o) const {
    if (postings_.size() != o.postings_.size()) return false;
    for (const auto& [t, p] : postings_) {
      auto it = o.postings_.find(t);
      if (it == o.postings_.end() || it->second.size() != p.size()) return false;
      for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i].doc != it->second[i].doc || p[i].tf != it->second[i].tf) return false;
    }
    return true;
  }

  Lang lang_ = Lang::En;
  std::vector<DocStat> docs_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  double avglen_ = 0.0;
};

inline InvertedIndex build_index(const Collection& c, Lang lang, const Stoplists& stop = {}) {
  return InvertedIndex::build(c, lang, stop);
}

/// Scores the user query against the index of its language and the
/// translated query against the other, normalizes each list by its own
/// maximum, and merges. Ties go ja before en, then by doc id.
inline std::vector<ScoredHit> bilingual_search(const InvertedIndex& ja, const InvertedIndex& en,
                                               const std::vector<std::string>& user_query, Lang user_lang,
                                               const std::vector<std::string>& translated_query, std::size_t k) {
  if (ja.lang() != Lang::Ja || en.lang() != Lang::En) throw Error("bilingual_search: index languages swapped");
  const InvertedIndex& src = user_lang == Lang::Ja ? ja : en;
  const InvertedIndex& dst = user_lang == Lang::Ja ? en : ja;
  std::vector<ScoredHit> merged;
  for (auto hits : {src.score(user_query), dst.score(translated_query)}) {
    if (hits.empty() || hits.front().score <= 0.0) continue;
    const double top = hits.front().score;
    for (auto& h : hits) {
      h.normalized_score = h.score / top;
      merged.push_back(std::move(h));
    }
  }
  std::sort(merged.begin(), merged.end(), [](const ScoredHit& a, const ScoredHit& b) {
    if (a.normalized_score != b.normalized_score) return a.normalized_score > b.normalized_score;
    if (a.lang != b.lang) return a.lang == Lang::Ja;
    return a.doc_id < b.doc_id;
  });
  if (merged.size() > k) merged.resize(k);
  return merged;
}

}  // namespace prime

#endif  // PRIME_RETRIEVAL_HPP

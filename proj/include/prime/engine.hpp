#ifndef PRIME_ENGINE_HPP
#define PRIME_ENGINE_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "prime/clustering.hpp"
#include "prime/config.hpp"
#include "prime/corpus.hpp"
#include "prime/error.hpp"
#include "prime/gloss.hpp"
#include "prime/langmodel.hpp"
#include "prime/lexicon.hpp"
#include "prime/querytrans.hpp"
#include "prime/retrieval.hpp"
#include "prime/unicode.hpp"

namespace prime {

/// An error with an HTTP-style status: 400 bad request, 404 not found,
/// 503 not loaded.
class ApiError : public Error {
 public:
  ApiError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct SearchRequest {
  std::string query;
  Lang lang = Lang::En;
  std::optional<std::size_t> k{};
  std::optional<std::size_t> clusters{};
};

struct HitView {
  ScoredHit hit;
  std::string title;
  std::optional<GlossedDoc> gloss;  // only for documents not in the query language
};

struct ClusterView {
  std::size_t id = 0;
  std::string centroid;
  std::vector<HitView> members;
};

struct SearchResponse {
  std::string session_id;
  std::string query;
  Lang lang = Lang::En;
  std::string translated_query;
  std::vector<TranslationCandidate> alternates;
  std::vector<ClusterView> clusters;
  std::size_t history_length = 0;
};

/// Immutable retrieval state: indexes, documents and language models.
struct EngineData {
  InvertedIndex ja_index;
  InvertedIndex en_index;
  std::map<std::string, PatentDoc> docs;
  BigramLM ja_lm;
  BigramLM en_lm;

  const InvertedIndex& index(Lang l) const { return l == Lang::Ja ? ja_index : en_index; }
  const BigramLM& lm(Lang l) const { return l == Lang::Ja ? ja_lm : en_lm; }
};

/// The on-line pipeline: query translation, bilingual retrieval, glossing
/// of foreign hits, clustering, and the discard/re-cluster session loop.
class Engine {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Engine(EngineConfig cfg = {}, Stoplists stop = {})
      : cfg_(cfg), stop_(std::move(stop)), rng_(std::random_device{}()), now_([] { return Clock::now(); }) {}

  const EngineConfig& config() const { return cfg_; }

  /// Builds indexes and, where not supplied, language models from the
  /// collections, then publishes the state.
  void load(const Collection& ja, const Collection& en, BilingualLexicon lexicon,
            std::optional<BigramLM> ja_lm = std::nullopt, std::optional<BigramLM> en_lm = std::nullopt) {
    load(InvertedIndex::build(ja, Lang::Ja, stop_), InvertedIndex::build(en, Lang::En, stop_), ja, en,
         std::move(lexicon), std::move(ja_lm), std::move(en_lm));
  }

  void load(InvertedIndex ja_index, InvertedIndex en_index, const Collection& ja, const Collection& en,
            BilingualLexicon lexicon, std::optional<BigramLM> ja_lm = std::nullopt,
            std::optional<BigramLM> en_lm = std::nullopt) {
    auto data = std::make_shared<EngineData>();
    data->ja_index = std::move(ja_index);
    data->en_index = std::move(en_index);
    for (const Collection* c : {&ja, &en})
      for (const auto& d : c->docs)
        if (!data->docs.emplace(d.id, d).second) throw Error("document id " + d.id + " appears more than once");
    const LMOptions lmo{cfg_.lambda, true};
    data->ja_lm = ja_lm ? std::move(*ja_lm) : BigramLM::train(ja, Lang::Ja, lmo, stop_);
    data->en_lm = en_lm ? std::move(*en_lm) : BigramLM::train(en, Lang::En, lmo, stop_);
    std::unique_lock lock(state_mu_);
    data_ = std::move(data);
    lexicon_ = std::make_shared<const BilingualLexicon>(std::move(lexicon));
  }

  /// Replaces the lexicon snapshot; in-flight requests keep the old one.
  void set_lexicon(BilingualLexicon lexicon) {
    auto next = std::make_shared<const BilingualLexicon>(std::move(lexicon));
    std::unique_lock lock(state_mu_);
    lexicon_ = std::move(next);
  }

  bool loaded() const {
    std::shared_lock lock(state_mu_);
    return data_ != nullptr;
  }

  std::shared_ptr<const BilingualLexicon> lexicon() const {
    std::shared_lock lock(state_mu_);
    return lexicon_;
  }

  /// Test hook for session expiry.
  void set_clock(std::function<Clock::time_point()> now) { now_ = std::move(now); }

  SearchResponse handle_search(const SearchRequest& req) {
    auto [data, lex] = snapshot();
    if (text::trim(req.query).empty()) throw ApiError(400, "query is empty");
    const std::size_t k = req.k.value_or(cfg_.k);
    const std::size_t n_clusters = req.clusters.value_or(std::min(cfg_.clusters, k));
    if (k < 1) throw ApiError(400, "k must be >= 1");
    if (n_clusters < 1 || n_clusters > k) throw ApiError(400, "clusters must lie between 1 and k");

    const Lang src = req.lang;
    const Lang dst = other(src);
    const auto user_terms = content_words(tokenize(req.query, src, stop_[src]));

    TranslationOptions topt;
    topt.beam = cfg_.beam;
    topt.top_k = cfg_.top_k;
    topt.copy_logprob = cfg_.copy_logprob;
    const auto lattice = build_lattice(user_terms, *lex, direction_from(src), topt);
    auto alternates = decode(lattice, data->lm(dst), topt.beam, topt.top_k);
    std::vector<std::string> translated;
    if (!alternates.empty()) translated = alternates.front().target;

    const auto hits = bilingual_search(data->ja_index, data->en_index, user_terms, src, translated, k);

    SessionRecord rec;
    rec.query = req.query;
    rec.lang = src;
    rec.translated_query = text::join(translated);
    rec.alternates = std::move(alternates);
    std::vector<PatentDoc> docs;
    for (const auto& h : hits) {
      rec.hits.emplace(h.doc_id, h);
      docs.push_back(data->docs.at(h.doc_id));
    }
    rec.session = start_session(new_session_id(), vectorize(docs, stop_), std::min(n_clusters, docs.size()));
    rec.last_access = now_();

    SearchResponse resp = render(rec, *data, *lex);
    std::lock_guard lock(sessions_mu_);
    evict_expired_locked();
    sessions_[rec.session.id] = std::move(rec);
    return resp;
  }

  SearchResponse handle_recluster(const std::string& session_id, const std::vector<std::size_t>& keep,
                                  std::optional<std::size_t> clusters = std::nullopt) {
    auto [data, lex] = snapshot();
    std::unique_lock lock(sessions_mu_);
    evict_expired_locked();
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw ApiError(404, "unknown or expired session " + session_id);
    SessionRecord& rec = it->second;
    if (keep.empty()) throw ApiError(400, "keep list is empty");
    std::set<std::string> kept_docs;
    for (std::size_t cid : keep) {
      const Cluster* c = rec.session.clusters.find(cid);
      if (!c) throw ApiError(400, "unknown cluster id " + std::to_string(cid));
      kept_docs.insert(c->members.begin(), c->members.end());
    }
    const std::size_t k = clusters.value_or(std::min(cfg_.clusters, kept_docs.size()));
    try {
      rec.session = recluster(rec.session, keep, k);
    } catch (const ApiError&) {
      throw;
    } catch (const Error& e) {
      throw ApiError(400, e.what());
    }
    for (auto h = rec.hits.begin(); h != rec.hits.end();)
      h = kept_docs.count(h->first) ? std::next(h) : rec.hits.erase(h);
    rec.last_access = now_();
    return render(rec, *data, *lex);
  }

  nlohmann::json handle_doc(const std::string& doc_id, Lang viewer) const {
    auto [data, lex] = snapshot();
    auto it = data->docs.find(doc_id);
    if (it == data->docs.end()) throw ApiError(404, "unknown document " + doc_id);
    const PatentDoc& d = it->second;
    nlohmann::json j{{"id", d.id},
                     {"lang", std::string(to_string(d.lang))},
                     {"title", d.title},
                     {"abstract", d.abstract},
                     {"family_id", d.family_id ? nlohmann::json(*d.family_id) : nlohmann::json(nullptr)}};
    if (d.lang != viewer) j["gloss"] = to_json(gloss_document(d, *lex, direction_from(d.lang), stop_, cfg_.max_phrase_len));
    return j;
  }

  nlohmann::json health() const {
    std::shared_lock lock(state_mu_);
    if (!data_) return {{"status", "loading"}};
    return {{"status", "ok"},
            {"ja_docs", data_->ja_index.doc_count()},
            {"en_docs", data_->en_index.doc_count()},
            {"lexicon_entries", lexicon_->size()}};
  }

  std::size_t session_count() {
    std::lock_guard lock(sessions_mu_);
    evict_expired_locked();
    return sessions_.size();
  }

  /// Document summary used for cluster centroids: title plus the first 200
  /// characters of the abstract.
  nlohmann::json doc_summary(const std::string& doc_id) const {
    auto [data, lex] = snapshot();
    const auto& d = data->docs.at(doc_id);
    const auto cps = unicode::decode(d.abstract);
    return {{"id", d.id},
            {"lang", std::string(to_string(d.lang))},
            {"title", d.title},
            {"summary", unicode::encode(std::u32string_view(cps).substr(0, 200))}};
  }

 private:
  struct SessionRecord {
    Session session;
    std::map<std::string, ScoredHit> hits;
    std::string query;
    Lang lang = Lang::En;
    std::string translated_query;
    std::vector<TranslationCandidate> alternates;
    Clock::time_point last_access;
  };

  std::pair<std::shared_ptr<const EngineData>, std::shared_ptr<const BilingualLexicon>> snapshot() const {
    std::shared_lock lock(state_mu_);
    if (!data_) throw ApiError(503, "service is still loading");
    return {data_, lexicon_};
  }

  std::string new_session_id() {
    std::lock_guard lock(rng_mu_);
    static constexpr char hex[] = "0123456789abcdef";
    std::string id;
    uint64_t v = rng_();
    for (int i = 0; i < 16; ++i, v >>= 4) id += hex[v & 15];
    return id;
  }

  void evict_expired_locked() {
    const auto now = now_();
    for (auto it = sessions_.begin(); it != sessions_.end();)
      it = now - it->second.last_access > cfg_.session_timeout ? sessions_.erase(it) : std::next(it);
  }

  SearchResponse render(const SessionRecord& rec, const EngineData& data, const BilingualLexicon& lex) const {
    SearchResponse r;
    r.session_id = rec.session.id;
    r.query = rec.query;
    r.lang = rec.lang;
    r.translated_query = rec.translated_query;
    r.alternates = rec.alternates;
    r.history_length = rec.session.history.size();
    for (const auto& c : rec.session.clusters.clusters) {
      ClusterView cv;
      cv.id = c.id;
      cv.centroid = c.centroid;
      for (const auto& m : c.members) {
        HitView hv;
        hv.hit = rec.hits.at(m);
        const auto& d = data.docs.at(m);
        hv.title = d.title;
        if (d.lang != rec.lang) hv.gloss = gloss_document(d, lex, direction_from(d.lang), stop_, cfg_.max_phrase_len);
        cv.members.push_back(std::move(hv));
      }
      std::stable_sort(cv.members.begin(), cv.members.end(), [](const HitView& a, const HitView& b) {
        return a.hit.normalized_score > b.hit.normalized_score;
      });
      r.clusters.push_back(std::move(cv));
    }
    return r;
  }

  EngineConfig cfg_;
  Stoplists stop_;

  mutable std::shared_mutex state_mu_;
  std::shared_ptr<const EngineData> data_;
  std::shared_ptr<const BilingualLexicon> lexicon_;

  std::mutex sessions_mu_;
  std::map<std::string, SessionRecord> sessions_;

  std::mutex rng_mu_;
  std::mt19937_64 rng_;
  std::function<Clock::time_point()> now_;
};

// ---------------------------------------------------------------------------
// JSON rendering

inline nlohmann::json to_json(const TranslationCandidate& c) {
  return {{"target", c.text()}, {"lm_logprob", c.lm_logprob}, {"tm_logprob", c.tm_logprob}, {"total", c.total}};
}

inline nlohmann::json to_json(const SearchResponse& r, const Engine& engine) {
  nlohmann::json alts = nlohmann::json::array();
  for (const auto& a : r.alternates) alts.push_back(to_json(a));
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& c : r.clusters) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& m : c.members) {
      nlohmann::json mj{{"id", m.hit.doc_id},
                        {"lang", std::string(to_string(m.hit.lang))},
                        {"title", m.title},
                        {"score", m.hit.score},
                        {"normalized_score", m.hit.normalized_score}};
      if (m.gloss) mj["gloss"] = to_json(*m.gloss);
      members.push_back(std::move(mj));
    }
    clusters.push_back({{"id", c.id}, {"centroid", engine.doc_summary(c.centroid)}, {"members", std::move(members)}});
  }
  return {{"session_id", r.session_id},
          {"query", r.query},
          {"lang", std::string(to_string(r.lang))},
          {"translated_query", r.translated_query},
          {"alternates", std::move(alts)},
          {"clusters", std::move(clusters)},
          {"history_length", r.history_length}};
}

}  // namespace prime

#endif  // PRIME_ENGINE_HPP

#ifndef PRIME_QUERYTRANS_HPP
#define PRIME_QUERYTRANS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "prime/corpus.hpp"
#include "prime/langmodel.hpp"
#include "prime/lexicon.hpp"
#include "prime/text.hpp"
#include "prime/transliterate.hpp"
#include "prime/unicode.hpp"

namespace prime {

enum class Origin { Lexicon, Transliteration, Copy };

inline std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::Lexicon:
      return "lexicon";
    case Origin::Transliteration:
      return "transliteration";
    case Origin::Copy:
      return "copy";
  }
  return "?";
}

struct LatticeCandidate {
  std::vector<std::string> target;
  double tm_logprob = 0.0;  // log P(U|D) for this segment
  Origin origin = Origin::Lexicon;

  std::string text() const { return text::join(target); }
};

/// Source tokens [begin, end) and their translation options.
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string source;
  std::vector<LatticeCandidate> candidates;
};

struct QueryLattice {
  Direction dir = Direction::JaEn;
  std::vector<std::string> tokens;
  std::vector<Segment> segments;

  /// Number of complete translation paths, saturating at SIZE_MAX.
  std::size_t path_count() const {
    if (segments.empty()) return 0;
    std::size_t n = 1;
    for (const auto& s : segments) {
      const std::size_t c = s.candidates.size();
      if (c != 0 && n > std::numeric_limits<std::size_t>::max() / c) return std::numeric_limits<std::size_t>::max();
      n *= c;
    }
    return n;
  }
};

struct TranslationOptions {
  double copy_logprob = std::log(0.01);
  double transliteration_logprob = 0.0;
  std::size_t beam = 20;
  std::size_t top_k = 5;
};

/// Segments `tokens` by greedy longest match against lexicon source phrases.
/// Unmatched tokens become single-token segments with a transliteration
/// candidate (katakana, ja->en) or a copy-through candidate.
inline QueryLattice build_lattice(const std::vector<std::string>& tokens, const BilingualLexicon& lex, Direction dir,
                                  const TranslationOptions& opt = {}) {
  QueryLattice lat;
  lat.dir = dir;
  lat.tokens = tokens;
  const std::size_t max_words = lex.max_source_words(dir);
  std::size_t i = 0;
  while (i < tokens.size()) {
    Segment seg;
    seg.begin = i;
    for (std::size_t len = std::min(max_words, tokens.size() - i); len >= 1; --len) {
      std::vector<std::string> words(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                     tokens.begin() + static_cast<std::ptrdiff_t>(i + len));
      std::string key = text::join(words);
      if (!lex.has_source(key, dir)) continue;
      seg.end = i + len;
      for (const auto& [target, freq] : lex.lookup_normalized(key, dir)) {
        const double p = lex.trans_prob(key, target, dir);
        seg.candidates.push_back({text::split_ws(target), std::log(p), Origin::Lexicon});
      }
      seg.source = std::move(key);
      break;
    }
    if (seg.candidates.empty()) {
      seg.end = i + 1;
      seg.source = tokens[i];
      bool done = false;
      if (dir == Direction::JaEn && unicode::is_katakana_word(tokens[i])) {
        try {
          seg.candidates.push_back({{transliterate(tokens[i])}, opt.transliteration_logprob, Origin::Transliteration});
          done = true;
        } catch (const Error&) {
        }
      }
      if (!done) seg.candidates.push_back({{tokens[i]}, opt.copy_logprob, Origin::Copy});
    }
    i = seg.end;
    lat.segments.push_back(std::move(seg));
  }
  return lat;
}

struct TranslationCandidate {
  std::vector<std::string> target;
  double lm_logprob = 0.0;  // log P(D)
  double tm_logprob = 0.0;  // log P(U|D)
  double total = 0.0;       // lm_logprob + tm_logprob
  std::vector<std::size_t> choices;  // candidate index chosen per segment

  std::string text() const { return text::join(target); }
};

/// Canonical ranking: total descending, then target tokens, then choices.
inline bool ranks_before(const TranslationCandidate& a, const TranslationCandidate& b) {
  if (a.total != b.total) return a.total > b.total;
  if (a.target != b.target) return a.target < b.target;
  return a.choices < b.choices;
}

/// Builds the full candidate for a complete choice vector.
inline TranslationCandidate make_candidate(const QueryLattice& lat, const BigramLM& lm,
                                           const std::vector<std::size_t>& choices) {
  TranslationCandidate c;
  c.choices = choices;
  for (std::size_t s = 0; s < lat.segments.size(); ++s) {
    const auto& cand = lat.segments[s].candidates[choices[s]];
    c.tm_logprob += cand.tm_logprob;
    c.target.insert(c.target.end(), cand.target.begin(), cand.target.end());
  }
  c.lm_logprob = lm.seq_logprob(c.target);
  c.total = c.lm_logprob + c.tm_logprob;
  return c;
}

/// Left-to-right beam search maximizing log P(U|D) + log P(D). P(U) is
/// constant per query and omitted. With beam >= path_count() nothing is
/// pruned and the ranking is exact.
inline std::vector<TranslationCandidate> decode(const QueryLattice& lat, const BigramLM& lm, std::size_t beam,
                                                std::size_t top_k) {
  if (beam == 0) throw Error("decode: beam width must be >= 1");
  if (lat.segments.empty() || top_k == 0) return {};

  struct Partial {
    std::vector<std::size_t> choices;
    std::vector<std::string> target;
    std::string history = BigramLM::kBos;
    double score = 0.0;
  };
  auto better = [](const Partial& a, const Partial& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.target != b.target) return a.target < b.target;
    return a.choices < b.choices;
  };

  std::vector<Partial> frontier(1);
  for (std::size_t s = 0; s < lat.segments.size(); ++s) {
    const bool last = s + 1 == lat.segments.size();
    std::vector<Partial> next;
    next.reserve(frontier.size() * lat.segments[s].candidates.size());
    for (const auto& p : frontier) {
      for (std::size_t ci = 0; ci < lat.segments[s].candidates.size(); ++ci) {
        const auto& cand = lat.segments[s].candidates[ci];
        Partial q = p;
        q.choices.push_back(ci);
        q.score += cand.tm_logprob;
        for (const auto& w : cand.target) {
          q.score += lm.logprob(w, q.history);
          q.history = lm.map_word(w);
          q.target.push_back(w);
        }
        if (last) q.score += lm.logprob(BigramLM::kEos, q.history);
        next.push_back(std::move(q));
      }
    }
    if (next.size() > beam) {
      std::partial_sort(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(beam), next.end(), better);
      next.resize(beam);
    }
    frontier = std::move(next);
  }

  std::vector<TranslationCandidate> out;
  out.reserve(frontier.size());
  for (const auto& p : frontier) out.push_back(make_candidate(lat, lm, p.choices));
  std::sort(out.begin(), out.end(), ranks_before);
  if (out.size() > top_k) out.resize(top_k);
  return out;
}

/// Tokenizes `query`, builds its lattice and decodes it.
inline std::vector<TranslationCandidate> translate_query(std::string_view query, Lang lang,
                                                         const BilingualLexicon& lex, const BigramLM& lm,
                                                         const TranslationOptions& opt = {},
                                                         const Stoplists& stop = {}) {
  auto words = content_words(tokenize(query, lang, stop[lang]));
  auto lat = build_lattice(words, lex, direction_from(lang), opt);
  return decode(lat, lm, opt.beam, opt.top_k);
}

}  // namespace prime

#endif  // PRIME_QUERYTRANS_HPP

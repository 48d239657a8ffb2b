#ifndef PRIME_SYNTHETIC_HPP
#define PRIME_SYNTHETIC_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "prime/corpus.hpp"
#include "prime/error.hpp"
#include "prime/lexicon.hpp"
#include "prime/transliterate.hpp"
#include "prime/unicode.hpp"

namespace prime {

/// Generated comparable collections plus the ja -> en counterpart map.
struct SyntheticCorpus {
  Collection ja;
  Collection en;
  std::vector<std::pair<std::string, std::string>> counterparts;  // (ja id, en id)
};

struct SyntheticOptions {
  std::size_t title_min = 2, title_max = 3;
  std::size_t abstract_min = 6, abstract_max = 10;
  double keep_prob = 0.85;   // chance a planted phrase survives on the en side
  double noise_prob = 0.10;  // chance of an unrelated phrase on either side
  double zipf_exponent = 0.7;
  // Each pair is about one topic; phrases are drawn from that topic's
  // entries with probability topic_affinity, otherwise from the whole
  // lexicon. Topical overlap is what produces plausible wrong pairs.
  std::size_t topics = 10;
  double topic_affinity = 0.7;
};

namespace detail {

inline std::string pad_number(std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*zu", width, n);
  return buf;
}

inline std::string random_kanji_word(std::mt19937_64& rng) {
  std::uniform_int_distribution<uint32_t> pick(0x4E00, 0x4E00 + 3000);
  std::u32string w{static_cast<char32_t>(pick(rng)), static_cast<char32_t>(pick(rng))};
  return unicode::encode(w);
}

inline std::string random_katakana_word(std::mt19937_64& rng) {
  static const std::u32string morae = U"アイウエオカキクケコサスセソタテトナニヌネノハヒヘホマミムメモラリルレロ";
  std::uniform_int_distribution<std::size_t> len(3, 4);
  std::uniform_int_distribution<std::size_t> pick(0, morae.size() - 1);
  std::u32string w;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) w.push_back(morae[pick(rng)]);
  return unicode::encode(w);
}

inline std::string random_latin_word(std::mt19937_64& rng) {
  static const std::string cons = "bdfgklmnprstvz";
  static const std::string vows = "aeiou";
  std::uniform_int_distribution<std::size_t> syl(2, 3);
  std::uniform_int_distribution<std::size_t> c(0, cons.size() - 1);
  std::uniform_int_distribution<std::size_t> v(0, vows.size() - 1);
  std::string w;
  const std::size_t n = syl(rng);
  for (std::size_t i = 0; i < n; ++i) {
    w += cons[c(rng)];
    w += vows[v(rng)];
  }
  w += cons[c(rng)];
  return w;
}

}  // namespace detail

/// A ja -> en lexicon of pseudo-words with disjoint vocabularies. About one
/// entry in ten is a katakana loanword whose English side is its romaji.
inline BilingualLexicon synthetic_lexicon(uint64_t seed, std::size_t n_entries) {
  std::mt19937_64 rng(seed);
  std::set<std::string> used;
  const Stoplists stop;
  auto fresh = [&](auto&& gen) {
    for (;;) {
      std::string w = gen();
      if (!used.count(w) && !stop.en.contains(w) && !stop.ja.contains(w)) {
        used.insert(w);
        return w;
      }
    }
  };
  std::bernoulli_distribution loanword(0.1), two_words(0.4);
  std::uniform_int_distribution<int64_t> freq(1, 5);
  BilingualLexicon lex;
  while (lex.size() < n_entries) {
    if (loanword(rng)) {
      std::string kata = detail::random_katakana_word(rng);
      std::string roma = transliterate(kata);
      if (used.count(kata) || used.count(roma)) continue;
      used.insert(kata);
      used.insert(roma);
      lex.add(kata, roma, freq(rng));
      continue;
    }
    const std::size_t words = two_words(rng) ? 2 : 1;
    std::vector<std::string> ja, en;
    for (std::size_t i = 0; i < words; ++i) {
      ja.push_back(fresh([&] { return detail::random_kanji_word(rng); }));
      en.push_back(fresh([&] { return detail::random_latin_word(rng); }));
    }
    lex.add(text::join(ja), text::join(en), freq(rng));
  }
  return lex;
}

/// Builds n_pairs comparable ja/en family pairs from lexicon phrase pairs.
/// Japanese documents carry noun/particle annotations, English documents
/// noun/function-word annotations. Deterministic for a fixed seed.
inline SyntheticCorpus generate_synthetic(uint64_t seed, std::size_t n_pairs, const BilingualLexicon& lex,
                                          const SyntheticOptions& opt = {}) {
  if (lex.empty()) throw Error("generate_synthetic: lexicon is empty");
  std::mt19937_64 rng(seed);
  const auto entries = lex.entries(Direction::JaEn);

  std::vector<std::size_t> rank(entries.size());
  for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
  std::shuffle(rank.begin(), rank.end(), rng);
  std::vector<double> weights(entries.size());
  for (std::size_t r = 0; r < rank.size(); ++r)
    weights[rank[r]] = 1.0 / std::pow(static_cast<double>(r + 1), opt.zipf_exponent);
  std::discrete_distribution<std::size_t> draw(weights.begin(), weights.end());
  const std::size_t n_topics = std::max<std::size_t>(1, std::min(opt.topics, entries.size()));
  std::vector<std::discrete_distribution<std::size_t>> topic_draw;
  for (std::size_t t = 0; t < n_topics; ++t) {
    std::vector<double> w(entries.size(), 0.0);
    for (std::size_t e = 0; e < entries.size(); ++e)
      if (rank[e] % n_topics == t) w[e] = weights[e];
    topic_draw.emplace_back(w.begin(), w.end());
  }
  std::uniform_int_distribution<std::size_t> any_topic(0, n_topics - 1);
  std::bernoulli_distribution on_topic(opt.topic_affinity);
  std::size_t topic = 0;
  std::uniform_int_distribution<std::size_t> any(0, entries.size() - 1);
  std::bernoulli_distribution keep(opt.keep_prob), noise(opt.noise_prob);

  static const std::vector<std::string> particles = {"の", "を", "は", "に", "と", "が"};
  static const std::vector<std::string> connectors = {"of", "and", "for", "with", "in", "the"};
  std::uniform_int_distribution<std::size_t> particle(0, particles.size() - 1);
  std::uniform_int_distribution<std::size_t> connector(0, connectors.size() - 1);

  auto pick_distinct = [&](std::size_t lo, std::size_t hi) {
    const std::size_t want = std::min(std::uniform_int_distribution<std::size_t>(lo, hi)(rng), entries.size());
    std::vector<std::size_t> out;
    while (out.size() < want) {
      const std::size_t e = on_topic(rng) ? topic_draw[topic](rng) : draw(rng);
      if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    }
    return out;
  };

  auto render_ja = [&](const std::vector<std::string>& phrases, bool sentence, std::vector<Token>& tokens) {
    std::string text;
    for (std::size_t i = 0; i < phrases.size(); ++i) {
      if (i) {
        const auto& p = particles[particle(rng)];
        text += p;
        tokens.push_back({p, "助詞", true});
      }
      for (const auto& w : text::split_ws(phrases[i])) {
        text += w;
        tokens.push_back({w, "名詞", true});
      }
    }
    if (sentence) text += "。";
    return text;
  };
  auto render_en = [&](const std::vector<std::string>& phrases, bool sentence, std::vector<Token>& tokens) {
    std::vector<std::string> words;
    for (std::size_t i = 0; i < phrases.size(); ++i) {
      const auto& c = i ? connectors[connector(rng)] : connectors.back();
      words.push_back(c);
      tokens.push_back({c, c == "the" ? "DT" : "IN", true});
      for (const auto& w : text::split_ws(phrases[i])) {
        words.push_back(w);
        tokens.push_back({w, "NN", true});
      }
    }
    std::string text = text::join(words);
    if (!text.empty()) text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    if (sentence) text += ".";
    return text;
  };

  SyntheticCorpus out;
  for (std::size_t i = 0; i < n_pairs; ++i) {
    const std::string num = detail::pad_number(i + 1, 6);
    PatentDoc ja{"JA-" + num, Lang::Ja, "", "", "FAM-" + std::to_string(seed) + "-" + num, {}, {}};
    PatentDoc en{"EN-" + num, Lang::En, "", "", ja.family_id, {}, {}};
    topic = any_topic(rng);
    for (Field f : kFields) {
      const bool is_title = f == Field::Title;
      const auto chosen = is_title ? pick_distinct(opt.title_min, opt.title_max)
                                   : pick_distinct(opt.abstract_min, opt.abstract_max);
      std::vector<std::string> ja_phr, en_phr;
      for (std::size_t e : chosen) {
        ja_phr.push_back(entries[e].source);
        if (keep(rng)) en_phr.push_back(entries[e].target);
      }
      if (noise(rng)) ja_phr.push_back(entries[any(rng)].source);
      if (noise(rng)) en_phr.push_back(entries[any(rng)].target);
      std::shuffle(en_phr.begin(), en_phr.end(), rng);

      std::vector<Token> jt, et;
      std::string jtext = render_ja(ja_phr, !is_title, jt);
      std::string etext = render_en(en_phr, !is_title, et);
      if (is_title) {
        ja.title = std::move(jtext);
        ja.title_tokens = std::move(jt);
        en.title = std::move(etext);
        en.title_tokens = std::move(et);
      } else {
        ja.abstract = std::move(jtext);
        ja.abstract_tokens = std::move(jt);
        en.abstract = std::move(etext);
        en.abstract_tokens = std::move(et);
      }
    }
    out.counterparts.emplace_back(ja.id, en.id);
    out.ja.docs.push_back(std::move(ja));
    out.en.docs.push_back(std::move(en));
  }
  return out;
}

}  // namespace prime

#endif  // PRIME_SYNTHETIC_HPP

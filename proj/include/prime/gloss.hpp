#ifndef PRIME_GLOSS_HPP
#define PRIME_GLOSS_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "prime/corpus.hpp"
#include "prime/error.hpp"
#include "prime/lexicon.hpp"
#include "prime/text.hpp"

namespace prime {

enum class GlossStatus { Translated, Untranslated };

struct GlossUnit {
  std::size_t begin = 0;  // content-token span [begin, end)
  std::size_t end = 0;
  Field field = Field::Abstract;
  std::string source;
  std::optional<std::string> translation;
  GlossStatus status = GlossStatus::Untranslated;
};

struct GlossedDoc {
  std::string doc_id;
  std::vector<GlossUnit> units;

  std::size_t translated_count() const {
    std::size_t n = 0;
    for (const auto& u : units) n += u.status == GlossStatus::Translated;
    return n;
  }
};

/// Phrase-by-phrase dictionary translation. Each phrase is matched longest
/// first, shrinking from the right; a match takes its most frequent
/// translation and an unmatched single word is left untranslated.
inline GlossedDoc gloss_document(const PatentDoc& doc, const BilingualLexicon& lex, Direction dir,
                                 const Stoplists& stop = {}, std::size_t max_len = kDefaultMaxPhraseLen) {
  if (doc.lang != source_lang(dir))
    throw Error("gloss_document: " + doc.id + " is " + std::string(to_string(doc.lang)) + " but direction is " +
                std::string(to_string(dir)));
  GlossedDoc out;
  out.doc_id = doc.id;
  std::size_t pos = 0;
  for (const auto& phrase : doc_phrases(doc, stop, max_len)) {
    const auto& w = phrase.words;
    std::size_t i = 0;
    while (i < w.size()) {
      std::size_t len = w.size() - i;
      for (; len >= 1; --len) {
        std::vector<std::string> span(w.begin() + static_cast<std::ptrdiff_t>(i),
                                      w.begin() + static_cast<std::ptrdiff_t>(i + len));
        const std::string key = text::join(span);
        auto hits = lex.lookup_normalized(key, dir);
        if (!hits.empty()) {
          out.units.push_back({pos + i, pos + i + len, phrase.field, key, hits.front().first, GlossStatus::Translated});
          break;
        }
        if (len == 1) out.units.push_back({pos + i, pos + i + 1, phrase.field, key, std::nullopt, GlossStatus::Untranslated});
      }
      i += len == 0 ? 1 : len;
    }
    pos += w.size();
  }
  return out;
}

inline nlohmann::json to_json(const GlossUnit& u) {
  nlohmann::json j{{"source", u.source},
                   {"status", u.status == GlossStatus::Translated ? "translated" : "untranslated"}};
  if (u.translation) j["translation"] = *u.translation;
  return j;
}

inline nlohmann::json to_json(const GlossedDoc& g) {
  auto arr = nlohmann::json::array();
  for (const auto& u : g.units) arr.push_back(to_json(u));
  return arr;
}

}  // namespace prime

#endif  // PRIME_GLOSS_HPP

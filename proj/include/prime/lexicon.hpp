#ifndef PRIME_LEXICON_HPP
#define PRIME_LEXICON_HPP

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prime/corpus.hpp"
#include "prime/error.hpp"
#include "prime/text.hpp"
#include "prime/unicode.hpp"

namespace prime {

enum class Direction { JaEn, EnJa };

inline std::string_view to_string(Direction d) { return d == Direction::JaEn ? "ja-en" : "en-ja"; }

inline std::optional<Direction> parse_direction(std::string_view s) {
  if (s == "ja-en") return Direction::JaEn;
  if (s == "en-ja") return Direction::EnJa;
  return std::nullopt;
}

inline Lang source_lang(Direction d) { return d == Direction::JaEn ? Lang::Ja : Lang::En; }
inline Lang target_lang(Direction d) { return d == Direction::JaEn ? Lang::En : Lang::Ja; }
inline Direction direction_from(Lang source) { return source == Lang::Ja ? Direction::JaEn : Direction::EnJa; }
inline Direction reverse(Direction d) { return d == Direction::JaEn ? Direction::EnJa : Direction::JaEn; }

/// Canonical phrase key: normalized, words separated by single spaces.
inline std::string normalize_phrase(std::string_view s) { return text::join(text::split_ws(unicode::normalize(s))); }

struct LexiconEntry {
  std::string source;
  std::string target;
  int64_t freq = 1;

  bool operator==(const LexiconEntry&) const = default;
};

using Translation = std::pair<std::string, int64_t>;

/// Phrase-to-phrase translation table with frequencies. Entries are stored
/// once as (ja, en) pairs and indexed in both directions.
class BilingualLexicon {
 public:
  BilingualLexicon() = default;

  bool empty() const { return pairs_.empty(); }
  std::size_t size() const { return pairs_.size(); }

  /// Adds `freq` to the (source, target) pair read in direction `dir`.
  void add(std::string_view source, std::string_view target, int64_t freq, Direction dir = Direction::JaEn) {
    if (freq < 1) throw Error("lexicon entry frequency must be >= 1");
    std::string s = normalize_phrase(source);
    std::string t = normalize_phrase(target);
    if (s.empty() || t.empty()) throw Error("lexicon entry with empty phrase");
    auto [ja, en] = dir == Direction::JaEn ? std::pair{std::move(s), std::move(t)} : std::pair{std::move(t), std::move(s)};
    pairs_[{ja, en}] += freq;
    by_source_[0][ja][en] += freq;
    by_source_[1][en][ja] += freq;
    target_total_[0][en] += freq;
    target_total_[1][ja] += freq;
    max_words_[0] = std::max(max_words_[0], text::split_ws(ja).size());
    max_words_[1] = std::max(max_words_[1], text::split_ws(en).size());
  }

  /// Translations of `source`, frequency-descending, ties by target.
  std::vector<Translation> lookup(std::string_view source, Direction dir) const {
    return lookup_normalized(normalize_phrase(source), dir);
  }

  /// Like lookup() but `key` must already be a normalized phrase.
  bool has_source(const std::string& key, Direction dir) const { return by_source_[slot(dir)].count(key) != 0; }

  std::vector<Translation> lookup_normalized(const std::string& key, Direction dir) const {
    const auto& idx = by_source_[slot(dir)];
    auto it = idx.find(key);
    if (it == idx.end()) return {};
    std::vector<Translation> out(it->second.begin(), it->second.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
  }

  int64_t freq(std::string_view source, std::string_view target, Direction dir) const {
    const auto& idx = by_source_[slot(dir)];
    auto it = idx.find(normalize_phrase(source));
    if (it == idx.end()) return 0;
    auto jt = it->second.find(normalize_phrase(target));
    return jt == it->second.end() ? 0 : jt->second;
  }

  /// Sum of frequencies of all sources paired with target `d`.
  int64_t target_total(std::string_view d, Direction dir) const {
    const auto& tot = target_total_[slot(dir)];
    auto it = tot.find(normalize_phrase(d));
    return it == tot.end() ? 0 : it->second;
  }

  /// Translation model P(u | d): relative frequency of source `u` among all
  /// sources that translate to target `d`.
  double trans_prob(std::string_view u, std::string_view d, Direction dir) const {
    const int64_t total = target_total(d, dir);
    if (total == 0) throw Error("trans_prob: \"" + std::string(d) + "\" is not a known target in " + std::string(to_string(dir)));
    return static_cast<double>(freq(u, d, dir)) / static_cast<double>(total);
  }

  /// Sources paired with target `d`, frequency-descending.
  std::vector<Translation> sources_of(std::string_view d, Direction dir) const {
    return lookup(d, reverse(dir));
  }

  std::size_t max_source_words(Direction dir) const { return max_words_[slot(dir)]; }

  /// All entries read in direction `dir`, sorted by (source, target).
  std::vector<LexiconEntry> entries(Direction dir = Direction::JaEn) const {
    std::vector<LexiconEntry> out;
    for (const auto& [src, targets] : by_source_[slot(dir)])
      for (const auto& [tgt, f] : targets) out.push_back({src, tgt, f});
    return out;
  }

  bool operator==(const BilingualLexicon& o) const { return pairs_ == o.pairs_; }

  // Persistence -------------------------------------------------------------

  static BilingualLexicon parse(std::istream& in, const std::string& source = "<lexicon>") {
    BilingualLexicon lex;
    std::string line;
    std::size_t lineno = 0;
    std::optional<Direction> dir;
    while (std::getline(in, line)) {
      ++lineno;
      text::chomp(line);
      if (text::trim(line).empty()) continue;
      if (line[0] == '#') {
        auto cols = text::split(line, '\t');
        if (cols.size() == 2 && cols[0] == "#direction") {
          dir = parse_direction(text::trim(cols[1]));
          if (!dir) throw ParseError(source, lineno, "unknown direction \"" + cols[1] + "\"");
        }
        continue;
      }
      if (!dir) throw ParseError(source, lineno, "missing \"#direction\" header before first entry");
      auto cols = text::split(line, '\t');
      if (cols.size() != 3) throw ParseError(source, lineno, "expected source<TAB>target<TAB>freq");
      int64_t f = 0;
      if (!text::parse_int(cols[2], f) || f < 1) throw ParseError(source, lineno, "invalid frequency \"" + cols[2] + "\"");
      try {
        lex.add(cols[0], cols[1], f, *dir);
      } catch (const Error& e) {
        throw ParseError(source, lineno, e.what());
      }
    }
    return lex;
  }

  static BilingualLexicon load(const std::string& path) {
    auto in = text::open_in(path);
    return parse(in, path);
  }

  void write(std::ostream& out, Direction dir = Direction::JaEn) const {
    out << "#direction\t" << to_string(dir) << '\n';
    for (const auto& e : entries(dir)) out << e.source << '\t' << e.target << '\t' << e.freq << '\n';
  }

  void save(const std::string& path, Direction dir = Direction::JaEn) const {
    auto out = text::open_out(path);
    write(out, dir);
  }

 private:
  static int slot(Direction d) { return d == Direction::JaEn ? 0 : 1; }

  std::map<std::pair<std::string, std::string>, int64_t> pairs_;
  // [0]: ja -> en, [1]: en -> ja
  std::map<std::string, std::map<std::string, int64_t>> by_source_[2];
  // [0]: totals per en target, [1]: totals per ja target
  std::map<std::string, int64_t> target_total_[2];
  std::size_t max_words_[2] = {0, 0};
};

/// Returns a new lexicon with `entries` (read in direction `dir`) folded in.
/// Existing pairs have their frequencies summed.
inline BilingualLexicon merge_entries(const BilingualLexicon& lex, const std::vector<LexiconEntry>& entries,
                                      Direction dir = Direction::JaEn) {
  for (const auto& e : entries)
    if (e.freq < 1) throw Error("merge_entries: frequency must be >= 1 for \"" + e.source + "\"");
  BilingualLexicon out = lex;
  for (const auto& e : entries) out.add(e.source, e.target, e.freq, dir);
  return out;
}

}  // namespace prime

#endif  // PRIME_LEXICON_HPP

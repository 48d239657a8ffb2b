#ifndef PRIME_CORPUS_HPP
#define PRIME_CORPUS_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "prime/error.hpp"
#include "prime/text.hpp"
#include "prime/unicode.hpp"

namespace prime {

enum class Lang { Ja, En };

inline constexpr std::array<Lang, 2> kLangs = {Lang::Ja, Lang::En};

inline std::string_view to_string(Lang lang) { return lang == Lang::Ja ? "ja" : "en"; }

inline std::optional<Lang> parse_lang(std::string_view s) {
  if (s == "ja") return Lang::Ja;
  if (s == "en") return Lang::En;
  return std::nullopt;
}

inline Lang other(Lang lang) { return lang == Lang::Ja ? Lang::En : Lang::Ja; }

enum class Field { Title, Abstract };

inline constexpr std::array<Field, 2> kFields = {Field::Title, Field::Abstract};

inline std::string_view to_string(Field f) { return f == Field::Title ? "title" : "abstract"; }

struct Token {
  std::string surface;
  std::optional<std::string> pos;
  // False when a removed word, punctuation or field start separates this
  // token from the previous one.
  bool joined = false;

  bool operator==(const Token& o) const { return surface == o.surface && pos == o.pos; }
};

struct PatentDoc {
  std::string id;
  Lang lang = Lang::En;
  std::string title;
  std::string abstract;
  std::optional<std::string> family_id;
  // Pre-segmented (surface, POS) annotations, per field.
  std::optional<std::vector<Token>> title_tokens;
  std::optional<std::vector<Token>> abstract_tokens;

  const std::string& text(Field f) const { return f == Field::Title ? title : abstract; }
  const std::optional<std::vector<Token>>& annotations(Field f) const {
    return f == Field::Title ? title_tokens : abstract_tokens;
  }
  bool operator==(const PatentDoc&) const = default;
};

struct Phrase {
  std::vector<std::string> words;
  Field field = Field::Abstract;

  std::string text() const { return text::join(words); }
  bool operator==(const Phrase&) const = default;
};

struct Collection {
  std::vector<PatentDoc> docs;

  std::size_t count(Lang lang) const {
    return static_cast<std::size_t>(
        std::count_if(docs.begin(), docs.end(), [&](const PatentDoc& d) { return d.lang == lang; }));
  }
  std::map<std::string, std::size_t> lang_counts() const {
    return {{"ja", count(Lang::Ja)}, {"en", count(Lang::En)}};
  }
  std::size_t size() const { return docs.size(); }
  bool empty() const { return docs.empty(); }
};

// ---------------------------------------------------------------------------
// Stoplists

class Stoplist {
 public:
  Stoplist() = default;
  explicit Stoplist(std::initializer_list<std::string_view> words) {
    for (auto w : words) add(w);
  }

  void add(std::string_view w) {
    auto n = unicode::normalize(text::trim(w));
    if (!n.empty()) words_.insert(std::move(n));
  }
  bool contains(const std::string& w) const { return words_.count(w) != 0; }
  std::size_t size() const { return words_.size(); }

  /// One term per line; '#' starts a comment.
  static Stoplist parse(std::istream& in) {
    Stoplist s;
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      s.add(line);
    }
    return s;
  }
  static Stoplist load(const std::string& path) {
    auto in = text::open_in(path);
    return parse(in);
  }

  static Stoplist default_en() {
    return Stoplist{"a",     "about", "above", "after", "all",   "also",  "an",    "and",   "any",
                    "are",   "as",    "at",    "be",    "been",  "being", "but",   "by",    "can",
                    "could", "do",    "does",  "each",  "for",   "from",  "had",   "has",   "have",
                    "having", "he",   "her",   "his",   "if",    "in",    "into",  "is",    "it",
                    "its",   "may",   "more",  "most",  "no",    "not",   "of",    "on",    "one",
                    "or",    "other", "said",  "same",  "she",   "should", "so",   "some",  "such",
                    "than",  "that",  "the",   "their", "them",  "then",  "there", "these", "they",
                    "this",  "those", "thus",  "to",    "under", "upon",  "was",   "were",  "when",
                    "where", "which", "while", "who",   "will",  "with",  "within", "would"};
  }
  // Hiragana runs are dropped by the tokenizer itself; this list only
  // covers frequent non-hiragana function tokens.
  static Stoplist default_ja() {
    return Stoplist{"等", "及", "又", "為", "其", "此", "事", "物", "上記", "前記", "該"};
  }

 private:
  std::unordered_set<std::string> words_;
};

struct Stoplists {
  Stoplist ja = Stoplist::default_ja();
  Stoplist en = Stoplist::default_en();

  const Stoplist& operator[](Lang lang) const { return lang == Lang::Ja ? ja : en; }
};

inline constexpr std::size_t kDefaultMaxPhraseLen = 4;

// ---------------------------------------------------------------------------
// Tokenization

namespace detail {

inline std::vector<Token> tokenize_en(const std::u32string& cps, const Stoplist& stop) {
  std::vector<Token> out;
  bool broken = true;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!unicode::is_word_char(cps[i])) {
      if (!u_isspace(static_cast<UChar32>(cps[i]))) broken = true;
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && unicode::is_word_char(cps[j])) ++j;
    std::string word = unicode::encode(std::u32string_view(cps).substr(i, j - i));
    if (stop.contains(word)) {
      broken = true;
    } else {
      out.push_back(Token{std::move(word), std::nullopt, !broken});
      broken = false;
    }
    i = j;
  }
  return out;
}

inline std::vector<Token> tokenize_ja(const std::u32string& cps, const Stoplist& stop) {
  using unicode::CharClass;
  std::vector<Token> out;
  bool broken = true;
  std::size_t i = 0;
  while (i < cps.size()) {
    const CharClass cls = unicode::classify(cps[i]);
    if (cls == CharClass::Other) {
      broken = true;
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < cps.size() && unicode::classify(cps[j]) == cls) ++j;
    if (cls == CharClass::Hiragana) {
      broken = true;
    } else {
      std::string word = unicode::encode(std::u32string_view(cps).substr(i, j - i));
      if (stop.contains(word)) {
        broken = true;
      } else {
        out.push_back(Token{std::move(word), std::nullopt, !broken});
        broken = false;
      }
    }
    i = j;
  }
  return out;
}

}  // namespace detail

/// Content-word tokens of raw text. Text is NFKC-normalized and case folded
/// first. English splits on non-letter/digit boundaries; Japanese splits into
/// maximal runs of one character class and drops hiragana-only runs.
inline std::vector<Token> tokenize(std::string_view raw, Lang lang, const Stoplist& stop) {
  const std::u32string cps = unicode::decode(unicode::normalize(raw));
  return lang == Lang::En ? detail::tokenize_en(cps, stop) : detail::tokenize_ja(cps, stop);
}

enum class PosClass { Noun, Adjective, Verb, Function };

/// Maps Penn-style, short and IPADIC-style tags onto coarse classes.
inline PosClass classify_pos(std::string_view tag) {
  if (tag.empty()) return PosClass::Function;
  if (tag.rfind("名詞", 0) == 0) return PosClass::Noun;
  if (tag.rfind("形容詞", 0) == 0 || tag.rfind("連体詞", 0) == 0) return PosClass::Adjective;
  if (tag.rfind("動詞", 0) == 0) return PosClass::Verb;
  switch (tag.front()) {
    case 'N':
    case 'n':
      return PosClass::Noun;
    case 'J':
    case 'A':
    case 'j':
    case 'a':
      return PosClass::Adjective;
    case 'V':
    case 'v':
      return PosClass::Verb;
    default:
      return PosClass::Function;
  }
}

/// True for untagged tokens and for noun, adjective and verb tags.
inline bool is_content(const Token& t) {
  return !t.pos || classify_pos(*t.pos) != PosClass::Function;
}

/// Tokens of one document field. Pre-supplied annotations are used as the
/// segmentation; their surfaces get the same normalization as raw text.
inline std::vector<Token> field_tokens(const PatentDoc& doc, Field field, const Stoplists& stop) {
  const auto& ann = doc.annotations(field);
  if (!ann) return tokenize(doc.text(field), doc.lang, stop[doc.lang]);
  std::vector<Token> out;
  out.reserve(ann->size());
  bool broken = true;
  for (const auto& t : *ann) {
    Token n{unicode::normalize(t.surface), t.pos, !broken};
    if (n.surface.empty() || stop[doc.lang].contains(n.surface)) {
      broken = true;
      continue;
    }
    broken = false;
    out.push_back(std::move(n));
  }
  return out;
}

/// Content-word surfaces of the given tokens, in order.
inline std::vector<std::string> content_words(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens)
    if (is_content(t)) out.push_back(t.surface);
  return out;
}

/// Content words of title followed by abstract. These are the index terms.
inline std::vector<std::string> doc_terms(const PatentDoc& doc, const Stoplists& stop) {
  std::vector<std::string> out;
  for (Field f : kFields) {
    auto words = content_words(field_tokens(doc, f, stop));
    out.insert(out.end(), std::make_move_iterator(words.begin()), std::make_move_iterator(words.end()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Phrase chunking

namespace detail {
enum class RunGroup { Nominal, Verbal, Untagged };

inline RunGroup run_group(const Token& t) {
  if (!t.pos) return RunGroup::Untagged;
  return classify_pos(*t.pos) == PosClass::Verb ? RunGroup::Verbal : RunGroup::Nominal;
}
}  // namespace detail

/// Groups content tokens into phrases. Tagged tokens form maximal runs of
/// nouns/adjectives or of verbs; untagged tokens form maximal runs of
/// adjacent tokens. Runs longer than `max_len` are cut left to right.
inline std::vector<Phrase> chunk_phrases(const std::vector<Token>& tokens, Field field = Field::Abstract,
                                         std::size_t max_len = kDefaultMaxPhraseLen) {
  if (max_len == 0) throw Error("max_phrase_len must be positive");
  std::vector<Phrase> out;
  Phrase cur{{}, field};
  detail::RunGroup group{};
  auto flush = [&] {
    if (!cur.words.empty()) out.push_back(std::move(cur));
    cur = Phrase{{}, field};
  };
  for (const auto& t : tokens) {
    if (!is_content(t)) {
      flush();
      continue;
    }
    const auto g = detail::run_group(t);
    if (cur.words.empty() || g != group || !t.joined || cur.words.size() >= max_len) flush();
    group = g;
    cur.words.push_back(t.surface);
  }
  flush();
  return out;
}

inline std::vector<Phrase> doc_phrases(const PatentDoc& doc, const Stoplists& stop,
                                       std::size_t max_len = kDefaultMaxPhraseLen) {
  std::vector<Phrase> out;
  for (Field f : kFields) {
    auto p = chunk_phrases(field_tokens(doc, f, stop), f, max_len);
    out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON Lines I/O

namespace detail {

inline std::vector<Token> tokens_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw Error("tokens field must be an array");
  std::vector<Token> out;
  for (const auto& item : arr) {
    Token t;
    if (item.is_object()) {
      t.surface = item.at("surface").get<std::string>();
      if (item.contains("pos") && !item["pos"].is_null()) t.pos = item["pos"].get<std::string>();
    } else if (item.is_array() && !item.empty() && item.size() <= 2) {
      t.surface = item[0].get<std::string>();
      if (item.size() == 2 && !item[1].is_null()) t.pos = item[1].get<std::string>();
    } else if (item.is_string()) {
      t.surface = item.get<std::string>();
    } else {
      throw Error("token must be an object, [surface, pos] array, or string");
    }
    if (t.surface.empty()) throw Error("empty token surface");
    t.joined = true;
    out.push_back(std::move(t));
  }
  return out;
}

inline nlohmann::json tokens_to_json(const std::vector<Token>& tokens) {
  auto arr = nlohmann::json::array();
  for (const auto& t : tokens) {
    nlohmann::json o{{"surface", t.surface}};
    if (t.pos) o["pos"] = *t.pos;
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace detail

inline PatentDoc doc_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("record is not a JSON object");
  PatentDoc d;
  d.id = j.at("id").get<std::string>();
  if (d.id.empty()) throw Error("empty id");
  const auto lang_str = j.at("lang").get<std::string>();
  auto lang = parse_lang(lang_str);
  if (!lang) throw Error("unknown lang value \"" + lang_str + "\"");
  d.lang = *lang;
  d.title = j.at("title").get<std::string>();
  d.abstract = j.at("abstract").get<std::string>();
  if (j.contains("family_id") && !j["family_id"].is_null()) d.family_id = j["family_id"].get<std::string>();
  if (j.contains("tokens") && !j["tokens"].is_null()) {
    const auto& tk = j["tokens"];
    if (!tk.is_object()) throw Error("tokens must be an object keyed by field");
    if (tk.contains("title")) d.title_tokens = detail::tokens_from_json(tk["title"]);
    if (tk.contains("abstract")) d.abstract_tokens = detail::tokens_from_json(tk["abstract"]);
  }
  return d;
}

inline nlohmann::json doc_to_json(const PatentDoc& d) {
  nlohmann::json j{{"id", d.id}, {"lang", std::string(to_string(d.lang))}, {"title", d.title},
                   {"abstract", d.abstract}};
  if (d.family_id) j["family_id"] = *d.family_id;
  if (d.title_tokens || d.abstract_tokens) {
    nlohmann::json tk = nlohmann::json::object();
    if (d.title_tokens) tk["title"] = detail::tokens_to_json(*d.title_tokens);
    if (d.abstract_tokens) tk["abstract"] = detail::tokens_to_json(*d.abstract_tokens);
    j["tokens"] = std::move(tk);
  }
  return j;
}

/// Parses a JSON Lines collection. Blank lines are skipped.
inline Collection parse_collection(std::istream& in, const std::string& source = "<input>") {
  Collection c;
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    text::chomp(line);
    if (text::trim(line).empty()) continue;
    PatentDoc doc;
    try {
      doc = doc_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, lineno, std::string("malformed record: ") + e.what());
    } catch (const Error& e) {
      throw ParseError(source, lineno, e.what());
    }
    auto [it, fresh] = seen.emplace(doc.id, lineno);
    if (!fresh)
      throw ParseError(source, lineno,
                       "duplicate id \"" + doc.id + "\" (first seen on line " + std::to_string(it->second) + ")");
    c.docs.push_back(std::move(doc));
  }
  return c;
}

inline Collection load_collection(const std::string& path) {
  auto in = text::open_in(path);
  return parse_collection(in, path);
}

inline void write_collection(std::ostream& out, const Collection& c) {
  for (const auto& d : c.docs) out << doc_to_json(d).dump() << '\n';
}

inline void save_collection(const std::string& path, const Collection& c) {
  auto out = text::open_out(path);
  write_collection(out, c);
}

}  // namespace prime

#endif  // PRIME_CORPUS_HPP

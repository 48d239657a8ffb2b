#ifndef PRIME_LANGMODEL_HPP
#define PRIME_LANGMODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "prime/corpus.hpp"
#include "prime/error.hpp"
#include "prime/text.hpp"

namespace prime {

inline constexpr double kDefaultLambda = 0.8;

struct LMOptions {
  double lambda = kDefaultLambda;
  // Words seen once in training are counted as <unk>.
  bool unk_singletons = true;
};

/// Word bigram model linearly interpolated with a unigram model.
///
///   P(w | h) = lambda * c(h, w) / c(h) + (1 - lambda) * P_uni(w)
///
/// P_uni reserves one pseudo-count for the unknown word so that every
/// word, seen or not, gets nonzero probability. Histories never seen as a
/// left context fall back to P_uni alone.
class BigramLM {
 public:
  static constexpr const char* kBos = "<s>";
  static constexpr const char* kEos = "</s>";
  static constexpr const char* kUnk = "<unk>";

  BigramLM() = default;

  /// Trains from pre-tokenized sequences; each is padded with <s> ... </s>.
  static BigramLM train_sequences(const std::vector<std::vector<std::string>>& seqs, Lang lang, LMOptions opt = {}) {
    if (!(opt.lambda > 0.0 && opt.lambda < 1.0)) throw Error("lambda must lie strictly between 0 and 1");
    BigramLM lm;
    lm.lang_ = lang;
    lm.lambda_ = opt.lambda;
    lm.unk_singletons_ = opt.unk_singletons;

    std::unordered_map<std::string, int64_t> raw;
    for (const auto& s : seqs)
      for (const auto& w : s) ++raw[w];
    auto mapped = [&](const std::string& w) -> const std::string& {
      static const std::string unk = kUnk;
      return opt.unk_singletons && raw[w] == 1 ? unk : w;
    };

    for (const auto& s : seqs) {
      std::string prev = kBos;
      ++lm.unigram_[prev];
      for (const auto& w : s) {
        const std::string& m = mapped(w);
        ++lm.unigram_[m];
        ++lm.bigram_[prev][m];
        ++lm.history_total_[prev];
        prev = m;
      }
      ++lm.unigram_[kEos];
      ++lm.bigram_[prev][kEos];
      ++lm.history_total_[prev];
    }
    lm.finish();
    return lm;
  }

  /// Trains on content words of the title and abstract of every document
  /// in `lang`. Each field is a separate padded sequence.
  static BigramLM train(const Collection& c, Lang lang, LMOptions opt = {}, const Stoplists& stop = {}) {
    std::vector<std::vector<std::string>> seqs;
    for (const auto& d : c.docs) {
      if (d.lang != lang) continue;
      for (Field f : kFields) {
        auto words = content_words(field_tokens(d, f, stop));
        if (!words.empty()) seqs.push_back(std::move(words));
      }
    }
    if (c.count(lang) == 0) throw Error("cannot train language model: no " + std::string(to_string(lang)) + " documents");
    return train_sequences(seqs, lang, opt);
  }

  Lang lang() const { return lang_; }
  double lambda() const { return lambda_; }
  bool unk_singletons() const { return unk_singletons_; }

  int64_t unigram_count(const std::string& w) const {
    auto it = unigram_.find(w);
    return it == unigram_.end() ? 0 : it->second;
  }
  int64_t bigram_count(const std::string& h, const std::string& w) const {
    auto it = bigram_.find(h);
    if (it == bigram_.end()) return 0;
    auto jt = it->second.find(w);
    return jt == it->second.end() ? 0 : jt->second;
  }

  /// Maps out-of-vocabulary words to <unk>.
  const std::string& map_word(const std::string& w) const {
    static const std::string unk = kUnk;
    if (w == kBos || w == kEos) return w;
    auto it = unigram_.find(w);
    return it == unigram_.end() || it->second == 0 ? unk : it->first;
  }

  /// Vocabulary including <s>, </s> and <unk>, sorted.
  std::vector<std::string> vocabulary() const {
    std::vector<std::string> v;
    for (const auto& [w, c] : unigram_) v.push_back(w);
    for (const char* s : {kBos, kEos, kUnk})
      if (!unigram_.count(s)) v.emplace_back(s);
    std::sort(v.begin(), v.end());
    return v;
  }
  bool contains(const std::string& w) const { return unigram_.count(w) != 0; }

  double unigram_prob(const std::string& word) const {
    const std::string& w = map_word(word);
    if (w == kBos) return 0.0;
    const double reserve = w == kUnk ? 1.0 : 0.0;
    return (static_cast<double>(unigram_count(w)) + reserve) / static_cast<double>(predicted_total_ + 1);
  }

  /// Maximum-likelihood bigram estimate c(h, w) / c(h); 0 for unseen h.
  double bigram_mle(const std::string& history, const std::string& word) const {
    const std::string& h = map_word(history);
    auto it = history_total_.find(h);
    if (it == history_total_.end() || it->second == 0) return 0.0;
    return static_cast<double>(bigram_count(h, map_word(word))) / static_cast<double>(it->second);
  }

  double prob(const std::string& word, const std::string& history) const {
    const std::string& h = map_word(history);
    const double uni = unigram_prob(word);
    auto it = history_total_.find(h);
    if (it == history_total_.end() || it->second == 0) return uni;
    return lambda_ * bigram_mle(h, word) + (1.0 - lambda_) * uni;
  }

  double logprob(const std::string& word, const std::string& history) const { return std::log(prob(word, history)); }

  /// Natural-log probability of <s> tokens... </s>.
  double seq_logprob(const std::vector<std::string>& tokens) const {
    double lp = 0.0;
    std::string h = kBos;
    for (const auto& w : tokens) {
      lp += logprob(w, h);
      h = map_word(w);
    }
    return lp + logprob(kEos, h);
  }

  // Dump format: header line, then "U\tword\tcount" and "B\thist\tword\tcount".
  void write(std::ostream& out) const {
    out << "#bigram-lm\tlang=" << to_string(lang_) << "\tlambda=" << text::format_double(lambda_)
        << "\tvocab=" << vocabulary().size() << "\tunk_singletons=" << (unk_singletons_ ? 1 : 0) << '\n';
    std::map<std::string, int64_t> uni(unigram_.begin(), unigram_.end());
    for (const auto& [w, c] : uni) out << "U\t" << w << '\t' << c << '\n';
    std::map<std::string, std::map<std::string, int64_t>> bi;
    for (const auto& [h, m] : bigram_) bi[h].insert(m.begin(), m.end());
    for (const auto& [h, m] : bi)
      for (const auto& [w, c] : m) out << "B\t" << h << '\t' << w << '\t' << c << '\n';
  }

  void save(const std::string& path) const {
    auto out = text::open_out(path);
    write(out);
  }

  static BigramLM parse(std::istream& in, const std::string& source = "<lm>") {
    BigramLM lm;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
      ++lineno;
      text::chomp(line);
      if (line.empty()) continue;
      auto cols = text::split(line, '\t');
      if (!header) {
        if (cols[0] != "#bigram-lm") throw ParseError(source, lineno, "missing #bigram-lm header");
        for (std::size_t i = 1; i < cols.size(); ++i) {
          auto eq = cols[i].find('=');
          if (eq == std::string::npos) continue;
          auto key = cols[i].substr(0, eq), val = cols[i].substr(eq + 1);
          if (key == "lang") {
            auto l = parse_lang(val);
            if (!l) throw ParseError(source, lineno, "unknown lang " + val);
            lm.lang_ = *l;
          } else if (key == "lambda") {
            if (!text::parse_double(val, lm.lambda_) || !(lm.lambda_ > 0 && lm.lambda_ < 1))
              throw ParseError(source, lineno, "invalid lambda " + val);
          } else if (key == "unk_singletons") {
            lm.unk_singletons_ = val == "1";
          }
        }
        header = true;
        continue;
      }
      int64_t c = 0;
      if (cols[0] == "U" && cols.size() == 3 && text::parse_int(cols[2], c)) {
        lm.unigram_[cols[1]] = c;
      } else if (cols[0] == "B" && cols.size() == 4 && text::parse_int(cols[3], c)) {
        lm.bigram_[cols[1]][cols[2]] = c;
        lm.history_total_[cols[1]] += c;
      } else {
        throw ParseError(source, lineno, "malformed row");
      }
    }
    if (!header) throw ParseError(source, 0, "empty model file");
    lm.finish();
    return lm;
  }

  static BigramLM load(const std::string& path) {
    auto in = text::open_in(path);
    return parse(in, path);
  }

 private:
  void finish() {
    predicted_total_ = 0;
    for (const auto& [w, c] : unigram_)
      if (w != kBos) predicted_total_ += c;
  }

  Lang lang_ = Lang::En;
  double lambda_ = kDefaultLambda;
  bool unk_singletons_ = true;
  std::unordered_map<std::string, int64_t> unigram_;
  std::unordered_map<std::string, std::unordered_map<std::string, int64_t>> bigram_;
  std::unordered_map<std::string, int64_t> history_total_;
  int64_t predicted_total_ = 0;
};

}  // namespace prime

#endif  // PRIME_LANGMODEL_HPP
